//! Human-readable polynomial syntax.
//!
//! Output looks like `z1*zbar1 - z2*zbar2 + 1/3*z1^2 + (1/2+i)*z1*w`. The
//! parser accepts that form and, more generally, sums, products (explicit `*`
//! or juxtaposition), integer powers and parentheses over the atoms `z<k>`,
//! `zbar<k>`, `w`, `i` and rational literals `p` or `p/q`. With `n = 1` the
//! bare names `z` and `zbar` are accepted too.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use super::monomial::{Monomial, Var};
use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::exactalg::{parse_rational, GaussianRational};

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = c.re.is_negative() || (c.re.is_zero() && c.im.is_negative());
            let c = if negative { -c } else { c.clone() };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_one = m.total_degree() == 0;
            if is_one && negative && c.is_compound() {
                write!(f, "({c})")?;
            } else if is_one {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else if c.is_compound() {
                write!(f, "({c})*{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[n={}]({self})", self.n())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(crate::exactalg::Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let ch = chars[k];
        let start = k;
        match ch {
            c if c.is_whitespace() => {
                k += 1;
                continue;
            }
            '+' => out.push((start, Token::Plus)),
            '-' => out.push((start, Token::Minus)),
            '*' => out.push((start, Token::Star)),
            '^' => out.push((start, Token::Caret)),
            '(' => out.push((start, Token::LParen)),
            ')' => out.push((start, Token::RParen)),
            c if c.is_ascii_digit() => {
                let mut end = k;
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                if end + 1 < chars.len() && chars[end] == '/' && chars[end + 1].is_ascii_digit() {
                    end += 1;
                    while end < chars.len() && chars[end].is_ascii_digit() {
                        end += 1;
                    }
                }
                let literal: String = chars[k..end].iter().collect();
                let value = parse_rational(&literal)
                    .map_err(|_| Error::parse(format!("offset {start}"), "bad number"))?;
                out.push((start, Token::Number(value)));
                k = end;
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let mut end = k;
                while end < chars.len() && chars[end].is_ascii_alphabetic() {
                    end += 1;
                }
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                out.push((start, Token::Ident(chars[k..end].iter().collect())));
                k = end;
                continue;
            }
            other => {
                return Err(Error::parse(
                    format!("offset {start}"),
                    format!("unexpected character {other:?}"),
                ))
            }
        }
        k += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    n: usize,
    source: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn location(&self) -> String {
        match self.tokens.get(self.pos) {
            Some((off, _)) => format!("offset {off} in {:?}", self.source),
            None => format!("end of {:?}", self.source),
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.location(), message)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.n);
        let mut sign = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Token::Plus) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(Token::Plus) => sign = 1,
                Some(Token::Minus) => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    acc = &acc * &rhs;
                }
                Some(Token::Number(_) | Token::Ident(_) | Token::LParen) => {
                    let rhs = self.power()?;
                    acc = &acc * &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            return Ok(-&self.power()?);
        }
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Token::Number(e)) if e.is_integer() && !e.is_negative() => {
                    self.pos += 1;
                    let e = u32::try_from(e.to_integer())
                        .map_err(|_| self.error("exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(self.error("expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let Some((_, token)) = self.tokens.get(self.pos).cloned() else {
            return Err(self.error("unexpected end of input"));
        };
        match token {
            Token::Number(v) => {
                self.pos += 1;
                Ok(Polynomial::constant(
                    self.n,
                    GaussianRational::from_rational(v),
                ))
            }
            Token::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Token::Ident(name) => {
                let var = self.variable(&name)?;
                self.pos += 1;
                Ok(match var {
                    None => Polynomial::constant(self.n, GaussianRational::i()),
                    Some(v) => Polynomial::var(self.n, v),
                })
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }

    /// `Ok(None)` for the imaginary unit.
    fn variable(&self, name: &str) -> Result<Option<Var>> {
        let index = |digits: &str| -> Result<usize> {
            let k: usize = digits
                .parse()
                .map_err(|_| self.error(format!("unknown identifier {name:?}")))?;
            if k == 0 || k > self.n {
                return Err(
                    self.error(format!("variable {name:?} out of range for n = {}", self.n))
                );
            }
            Ok(k - 1)
        };
        match name {
            "i" => Ok(None),
            "w" => Ok(Some(Var::W)),
            "z" if self.n == 1 => Ok(Some(Var::Z(0))),
            "zbar" if self.n == 1 => Ok(Some(Var::Zbar(0))),
            _ => {
                if let Some(d) = name.strip_prefix("zbar") {
                    Ok(Some(Var::Zbar(index(d)?)))
                } else if let Some(d) = name.strip_prefix('z') {
                    Ok(Some(Var::Z(index(d)?)))
                } else {
                    Err(self.error(format!("unknown identifier {name:?}")))
                }
            }
        }
    }
}

/// Parses the text form of a polynomial in `n` dimensions.
pub fn parse_polynomial(n: usize, text: &str) -> Result<Polynomial> {
    let tokens = lex(text)?;
    if tokens.is_empty() {
        return Err(Error::parse(format!("{text:?}"), "empty polynomial"));
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        n,
        source: text,
    };
    let p = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(p)
}

/// Parses a single monomial such as `z1^2*zbar2*w` or `1`.
pub fn parse_monomial(n: usize, text: &str) -> Result<Monomial> {
    let p = parse_polynomial(n, text)?;
    let mut terms = p.terms();
    match (terms.next(), terms.next()) {
        (Some((m, c)), None) if c.is_one() => Ok(m.clone()),
        _ => Err(Error::parse(
            format!("{text:?}"),
            "expected a single monomial",
        )),
    }
}

/// Wire form: `{"n": 2, "terms": [[["re","im"], "z1*zbar1"], ...]}`.
impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(&GaussianRational, String)> =
            self.terms().map(|(m, c)| (c, m.to_string())).collect();
        let mut s = serializer.serialize_struct("Polynomial", 2)?;
        s.serialize_field("n", &self.n())?;
        s.serialize_field("terms", &terms)?;
        s.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolynomialWire {
    n: usize,
    terms: Vec<(GaussianRational, String)>,
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = PolynomialWire::deserialize(deserializer)?;
        terms_from_wire(wire.n, &wire.terms).map_err(de::Error::custom)
    }
}

pub(crate) fn terms_from_wire(
    n: usize,
    terms: &[(GaussianRational, String)],
) -> Result<Polynomial> {
    let mut out = Vec::with_capacity(terms.len());
    for (c, m) in terms {
        out.push((parse_monomial(n, m)?, c.clone()));
    }
    Polynomial::from_terms(n, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sums_products_and_powers() {
        let p = parse_polynomial(2, "(z1 + zbar1)^2").unwrap();
        let q = parse_polynomial(2, "z1^2 + 2 z1 zbar1 + zbar1^2").unwrap();
        assert_eq!(p, q);
        assert_eq!(p.num_terms(), 3);
    }

    #[test]
    fn imaginary_and_fractional_coefficients() {
        let p = parse_polynomial(2, "3/4i*z1 - (1/2-i) zbar2 + i").unwrap();
        assert_eq!(
            p.coeff(&Monomial::var(2, Var::Z(0))),
            GaussianRational::from_fracs(0, 1, 3, 4)
        );
        assert_eq!(
            p.coeff(&Monomial::var(2, Var::Zbar(1))),
            GaussianRational::from_fracs(-1, 2, 1, 1)
        );
        assert_eq!(p.coeff(&Monomial::one(2)), GaussianRational::i());
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "z1*zbar1 - z2*zbar2 + 1/3*z1^2 + 1/3*zbar1^2",
            "(1/2+i)*z1*w - 7",
            "-i*zbar2^3 + w^2",
            "0",
        ] {
            let p = parse_polynomial(2, text).unwrap();
            assert_eq!(parse_polynomial(2, &p.to_string()).unwrap(), p, "{text}");
        }
    }

    #[test]
    fn one_dimensional_names() {
        let p = parse_polynomial(1, "z^3 zbar").unwrap();
        assert_eq!(p, parse_polynomial(1, "z1^3*zbar1").unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_polynomial(2, "z3").is_err());
        assert!(parse_polynomial(2, "z1 +").is_err());
        assert!(parse_polynomial(2, "q1").is_err());
        assert!(parse_polynomial(2, "z1^-1").is_err());
        assert!(parse_polynomial(2, "(z1").is_err());
        assert!(parse_polynomial(2, "").is_err());
    }

    #[test]
    fn wire_round_trip() {
        let p = parse_polynomial(2, "z1*zbar1 + (1-i)*w").unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(
            json,
            r#"{"n":2,"terms":[[["1","-1"],"w"],[["1","0"],"z1*zbar1"]]}"#
        );
        let back: Polynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
