use std::cmp::Ordering;
use std::fmt;

/// One of the formal variables `z_j`, `zbar_j` (0-based index) or `w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Z(usize),
    Zbar(usize),
    W,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z(j) => write!(f, "z{}", j + 1),
            Var::Zbar(j) => write!(f, "zbar{}", j + 1),
            Var::W => write!(f, "w"),
        }
    }
}

/// `z^zexp * zbar^zbarexp * w^wexp` in `n` complex dimensions.
///
/// Ordered graded-lexicographically: total degree first, then the `z`
/// exponents, then the `zbar` exponents, then the `w` exponent.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    z: Vec<u32>,
    zbar: Vec<u32>,
    w: u32,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial {
            z: vec![0; n],
            zbar: vec![0; n],
            w: 0,
        }
    }

    /// Panics if the exponent vectors have different lengths.
    pub fn new(z: Vec<u32>, zbar: Vec<u32>, w: u32) -> Self {
        assert_eq!(
            z.len(),
            zbar.len(),
            "z and zbar exponent vectors differ in length"
        );
        Monomial { z, zbar, w }
    }

    pub fn var(n: usize, var: Var) -> Self {
        let mut m = Self::one(n);
        m.set_exp(var, 1);
        m
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn zexp(&self) -> &[u32] {
        &self.z
    }

    pub fn zbarexp(&self) -> &[u32] {
        &self.zbar
    }

    pub fn wexp(&self) -> u32 {
        self.w
    }

    pub fn exp(&self, var: Var) -> u32 {
        match var {
            Var::Z(j) => self.z[j],
            Var::Zbar(j) => self.zbar[j],
            Var::W => self.w,
        }
    }

    pub fn set_exp(&mut self, var: Var, e: u32) {
        match var {
            Var::Z(j) => self.z[j] = e,
            Var::Zbar(j) => self.zbar[j] = e,
            Var::W => self.w = e,
        }
    }

    pub fn z_degree(&self) -> u32 {
        self.z.iter().sum()
    }

    pub fn zbar_degree(&self) -> u32 {
        self.zbar.iter().sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.z_degree() + self.zbar_degree() + self.w
    }

    /// Degree with `z`, `zbar` of weight 1 and `w` of weight 2.
    pub fn weighted_degree(&self) -> u32 {
        self.z_degree() + self.zbar_degree() + 2 * self.w
    }

    pub fn is_holomorphic(&self) -> bool {
        self.zbar.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            z: self.z.iter().zip(&other.z).map(|(a, b)| a + b).collect(),
            zbar: self
                .zbar
                .iter()
                .zip(&other.zbar)
                .map(|(a, b)| a + b)
                .collect(),
            w: self.w + other.w,
        }
    }

    /// Swaps the `z` and `zbar` exponents.
    pub fn conj(&self) -> Monomial {
        Monomial {
            z: self.zbar.clone(),
            zbar: self.z.clone(),
            w: self.w,
        }
    }

    fn key(&self) -> (u32, &[u32], &[u32], u32) {
        (self.total_degree(), &self.z, &self.zbar, self.w)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        let mut push = |name: String, e: u32| match e {
            0 => {}
            1 => factors.push(name),
            _ => factors.push(format!("{name}^{e}")),
        };
        for (j, &e) in self.z.iter().enumerate() {
            push(format!("z{}", j + 1), e);
        }
        for (j, &e) in self.zbar.iter().enumerate() {
            push(format!("zbar{}", j + 1), e);
        }
        push("w".to_string(), self.w);
        if factors.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", factors.join("*"))
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All `z, zbar` monomials (no `w`) of total degree `d` in `n` dimensions,
/// in the crate's graded-lex order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for exps in compositions(d, 2 * n) {
        out.push(Monomial {
            z: exps[..n].to_vec(),
            zbar: exps[n..].to_vec(),
            w: 0,
        });
    }
    out.sort();
    out
}

/// All holomorphic monomials `z^alpha` with `|alpha| = d`, in graded-lex order.
pub fn holomorphic_monomials(n: usize, d: u32) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = compositions(d, n)
        .into_iter()
        .map(|z| Monomial {
            z,
            zbar: vec![0; n],
            w: 0,
        })
        .collect();
    out.sort();
    out
}

/// Weak compositions of `total` into `parts` nonnegative parts.
pub(crate) fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}
