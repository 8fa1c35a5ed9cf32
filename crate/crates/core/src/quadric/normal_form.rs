use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{
    format_rational, rational_sqrt, rational_to_f64, GaussianRational, Rational,
};

use super::forms::QuadricModel;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClassifyMode {
    Exact,
    Numeric { tolerance: f64 },
}

/// A normal-form parameter: exact when it could be computed over Q.
#[derive(Clone, Debug, PartialEq)]
pub enum Param {
    Exact(Rational),
    Approx(f64),
}

impl Param {
    pub fn to_f64(&self) -> f64 {
        match self {
            Param::Exact(r) => rational_to_f64(r),
            Param::Approx(x) => *x,
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Exact(r) => f.write_str(&format_rational(r)),
            Param::Approx(x) => write!(f, "~{x}"),
        }
    }
}

impl Serialize for Param {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Param::Exact(r) => s.serialize_str(&format_rational(r)),
            Param::Approx(x) => s.serialize_f64(*x),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BishopLambda {
    Finite(Param),
    Infinite,
}

/// Data reported for models that match no canonical shape.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantReport {
    pub signature: (usize, usize),
    pub det_a: String,
    pub det_b: String,
    /// `|det B|^2 / (det A)^2`, unchanged by linear coordinate changes.
    pub det_ratio: String,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum NormalForm {
    Bishop { lambda: BishopLambda },
    P { lambda1: Param, lambda2: Param },
    MI { lambda1: Param, lambda2: Param },
    MII { lambda: Param },
    MIII,
    Unclassified(InvariantReport),
}

impl NormalForm {
    pub fn tag(&self) -> &'static str {
        match self {
            NormalForm::Bishop { .. } => "Bishop",
            NormalForm::P { .. } => "P",
            NormalForm::MI { .. } => "MI",
            NormalForm::MII { .. } => "MII",
            NormalForm::MIII => "MIII",
            NormalForm::Unclassified(_) => "Unclassified",
        }
    }

    pub fn params(&self) -> Vec<Param> {
        match self {
            NormalForm::Bishop {
                lambda: BishopLambda::Finite(l),
            } => vec![l.clone()],
            NormalForm::P { lambda1, lambda2 } | NormalForm::MI { lambda1, lambda2 } => {
                vec![lambda1.clone(), lambda2.clone()]
            }
            NormalForm::MII { lambda } => vec![lambda.clone()],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalForm::Bishop {
                lambda: BishopLambda::Infinite,
            } => write!(f, "Bishop(lambda=inf)"),
            NormalForm::Bishop {
                lambda: BishopLambda::Finite(l),
            } => write!(f, "Bishop(lambda={l})"),
            NormalForm::P { lambda1, lambda2 } => {
                write!(f, "P(lambda1={lambda1}, lambda2={lambda2})")
            }
            NormalForm::MI { lambda1, lambda2 } => {
                write!(f, "MI(lambda1={lambda1}, lambda2={lambda2})")
            }
            NormalForm::MII { lambda } => write!(f, "MII(lambda={lambda})"),
            NormalForm::MIII => write!(f, "MIII"),
            NormalForm::Unclassified(r) => write!(
                f,
                "Unclassified(signature=({}, {}), |det B|^2/det(A)^2={})",
                r.signature.0, r.signature.1, r.det_ratio
            ),
        }
    }
}

impl Serialize for NormalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("type", self.tag())?;
        match self {
            NormalForm::Bishop { lambda } => match lambda {
                BishopLambda::Finite(l) => map.serialize_entry("lambda", l)?,
                BishopLambda::Infinite => map.serialize_entry("lambda", "inf")?,
            },
            NormalForm::P { lambda1, lambda2 } | NormalForm::MI { lambda1, lambda2 } => {
                map.serialize_entry("lambda1", lambda1)?;
                map.serialize_entry("lambda2", lambda2)?;
            }
            NormalForm::MII { lambda } => map.serialize_entry("lambda", lambda)?,
            NormalForm::MIII => {}
            NormalForm::Unclassified(r) => map.serialize_entry("invariants", r)?,
        }
        map.end()
    }
}

pub fn classify_normal_form(model: &QuadricModel, mode: ClassifyMode) -> Result<NormalForm> {
    let n = model.n();
    if n > 2 {
        return Err(Error::UnsupportedDimension {
            n,
            reason: "normal forms are classified for n = 1 and n = 2 only",
        });
    }
    model.require_nondegenerate()?;
    if n == 1 {
        return Ok(classify_bishop(model, mode));
    }
    if let Some(form) = classify_canonical(model) {
        return Ok(form);
    }
    let diag = model.a().diagonalize()?;
    if let ClassifyMode::Numeric { tolerance } = mode {
        if diag.negative == 0 || diag.positive == 0 {
            return Ok(numeric_definite(
                model,
                &diag.change,
                &diag.diagonal,
                tolerance,
            ));
        }
    }
    Ok(NormalForm::Unclassified(report(
        model,
        "no canonical shape matched",
    )))
}

fn classify_bishop(model: &QuadricModel, mode: ClassifyMode) -> NormalForm {
    let a = &model.a().entry(0, 0).re;
    let b = model.b().entry(0, 0);
    let l2 = b.modulus_squared() / (a * a);
    match rational_sqrt(&l2) {
        Some(l) => NormalForm::Bishop {
            lambda: BishopLambda::Finite(Param::Exact(l)),
        },
        None => match mode {
            ClassifyMode::Numeric { .. } => NormalForm::Bishop {
                lambda: BishopLambda::Finite(Param::Approx(rational_to_f64(&l2).sqrt())),
            },
            ClassifyMode::Exact => NormalForm::Unclassified(report(
                model,
                &format!(
                    "lambda^2 = {} is not a rational square",
                    format_rational(&l2)
                ),
            )),
        },
    }
}

fn report(model: &QuadricModel, note: &str) -> InvariantReport {
    let signature = model
        .a()
        .diagonalize()
        .map(|d| d.signature())
        .unwrap_or((0, 0));
    let det_a = model.a().determinant();
    let det_b = model.b().determinant();
    let ratio = det_b.modulus_squared() / (&det_a * &det_a);
    InvariantReport {
        signature,
        det_a: format_rational(&det_a),
        det_b: det_b.to_string(),
        det_ratio: format_rational(&ratio),
        note: note.to_string(),
    }
}

/// Recognizes models written as diagonal `A = diag(+-1, +-1)` with `B` in
/// one of the canonical patterns.
fn classify_canonical(model: &QuadricModel) -> Option<NormalForm> {
    let a = model.a().matrix();
    if !a.get(0, 1).is_zero() {
        return None;
    }
    let one = Rational::one();
    let (a11, a22) = (&a.get(0, 0).re, &a.get(1, 1).re);
    if a11.abs() != one || a22.abs() != one {
        return None;
    }
    // w -> -w so that a11 = 1
    let model = if a11.is_negative() {
        model.negated()
    } else {
        model.clone()
    };
    let definite = model.a().entry(1, 1).re.is_positive();
    let b = model.b();
    let (b11, b12, b22) = (b.entry(0, 0), b.entry(0, 1), b.entry(1, 1));

    if definite {
        let (l1, l2) = exact_takagi(b11, b12, b22)?;
        return Some(NormalForm::P {
            lambda1: Param::Exact(l1),
            lambda2: Param::Exact(l2),
        });
    }
    if b12.is_zero() {
        let m1 = rational_sqrt(&b11.modulus_squared())?;
        let m2 = rational_sqrt(&b22.modulus_squared())?;
        let (l1, l2) = if m1 <= m2 { (m1, m2) } else { (m2, m1) };
        return Some(NormalForm::MI {
            lambda1: Param::Exact(l1),
            lambda2: Param::Exact(l2),
        });
    }
    if b11.is_zero() && b22.is_zero() {
        let m = rational_sqrt(&b12.modulus_squared())?;
        return Some(NormalForm::MII {
            lambda: Param::Exact(m * Rational::from_integer(2.into())),
        });
    }
    let half = GaussianRational::from(Rational::new(1.into(), 2.into()));
    if *b11 == half && *b12 == half && *b22 == half {
        return Some(NormalForm::MIII);
    }
    None
}

/// Singular values of a complex symmetric 2x2 matrix when both are rational.
fn exact_takagi(
    b11: &GaussianRational,
    b12: &GaussianRational,
    b22: &GaussianRational,
) -> Option<(Rational, Rational)> {
    let two = Rational::from_integer(2.into());
    let four = Rational::from_integer(4.into());
    let trace = b11.modulus_squared() + &two * b12.modulus_squared() + b22.modulus_squared();
    let det = (&(b11 * b22) - &(b12 * b12)).modulus_squared();
    let disc = &trace * &trace - four * det;
    let root = rational_sqrt(&disc)?;
    let s1 = rational_sqrt(&((&trace - &root) / &two))?;
    let s2 = rational_sqrt(&((&trace + &root) / &two))?;
    Some((s1, s2))
}

fn numeric_definite(
    model: &QuadricModel,
    change: &crate::exactalg::ExactMatrix,
    diagonal: &[Rational],
    tolerance: f64,
) -> NormalForm {
    let scale: Vec<f64> = diagonal
        .iter()
        .map(|d| 1.0 / rational_to_f64(&d.abs()).sqrt())
        .collect();
    let p: Vec<Vec<Complex64>> = (0..2)
        .map(|r| {
            (0..2)
                .map(|c| change.get(r, c).to_complex64() * scale[c])
                .collect()
        })
        .collect();
    let b: Vec<Vec<Complex64>> = (0..2)
        .map(|r| {
            (0..2)
                .map(|c| model.b().entry(r, c).to_complex64())
                .collect()
        })
        .collect();
    // B' = P^T B P
    let mut bp = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in bp.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            for k in 0..2 {
                for l in 0..2 {
                    *entry += p[k][i] * b[k][l] * p[l][j];
                }
            }
        }
    }
    let trace = bp[0][0].norm_sqr() + 2.0 * bp[0][1].norm_sqr() + bp[1][1].norm_sqr();
    let det = (bp[0][0] * bp[1][1] - bp[0][1] * bp[0][1]).norm_sqr();
    let root = (trace * trace - 4.0 * det).max(0.0).sqrt();
    let snap = |x: f64| if x.abs() < tolerance { 0.0 } else { x };
    let mut s1 = snap(((trace - root) / 2.0).max(0.0).sqrt());
    let s2 = snap(((trace + root) / 2.0).max(0.0).sqrt());
    if (s2 - s1).abs() < tolerance {
        s1 = s2;
    }
    NormalForm::P {
        lambda1: Param::Approx(s1),
        lambda2: Param::Approx(s2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, ExactMatrix};
    use crate::quadric::{HermitianForm, SymmetricForm};

    fn g(text: &str) -> GaussianRational {
        text.parse().unwrap()
    }

    fn exact(model: &QuadricModel) -> NormalForm {
        classify_normal_form(model, ClassifyMode::Exact).unwrap()
    }

    #[test]
    fn canonical_shapes() {
        assert_eq!(
            exact(&QuadricModel::type_mi(rat(1, 3), rat(1, 2))),
            NormalForm::MI {
                lambda1: Param::Exact(rat(1, 3)),
                lambda2: Param::Exact(rat(1, 2))
            }
        );
        assert_eq!(
            exact(&QuadricModel::type_mi(rat(1, 2), rat(1, 3))).params(),
            [Param::Exact(rat(1, 3)), Param::Exact(rat(1, 2))]
        );
        assert_eq!(
            exact(&QuadricModel::bishop(rat(3, 7))),
            NormalForm::Bishop {
                lambda: BishopLambda::Finite(Param::Exact(rat(3, 7)))
            }
        );
        assert_eq!(exact(&QuadricModel::type_miii()), NormalForm::MIII);
        assert_eq!(
            exact(&QuadricModel::type_mii(rat(2, 3))),
            NormalForm::MII {
                lambda: Param::Exact(rat(2, 3))
            }
        );
        assert_eq!(
            exact(&QuadricModel::type_p(rat(1, 2), rat(0, 1))),
            NormalForm::P {
                lambda1: Param::Exact(rat(0, 1)),
                lambda2: Param::Exact(rat(1, 2))
            }
        );
        let flipped = QuadricModel::type_p(rat(1, 4), rat(1, 3)).negated();
        assert_eq!(exact(&flipped).tag(), "P");
    }

    #[test]
    fn errors_and_unclassified() {
        let n3 = QuadricModel::diagonal_model(&vec![rat(1, 1); 3], &vec![rat(0, 1); 3]);
        assert!(matches!(
            classify_normal_form(&n3, ClassifyMode::Exact),
            Err(Error::UnsupportedDimension { n: 3, .. })
        ));
        let degenerate = QuadricModel::diagonal_model(&[rat(1, 1), rat(0, 1)], &vec![rat(0, 1); 2]);
        assert!(matches!(
            classify_normal_form(&degenerate, ClassifyMode::Exact),
            Err(Error::Degenerate)
        ));
        let odd = QuadricModel::new(
            HermitianForm::new(
                ExactMatrix::from_rows(vec![vec![g("2"), g("i")], vec![g("-i"), g("-1")]]).unwrap(),
            )
            .unwrap(),
            SymmetricForm::diagonal(&[g("1"), g("1/5")]),
        )
        .unwrap();
        match exact(&odd) {
            NormalForm::Unclassified(r) => {
                assert_eq!(r.signature, (1, 1));
                assert_eq!(r.det_a, "-3");
                assert_eq!(r.det_ratio, "1/225");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn numeric_definite_recovers_parameters() {
        let p = QuadricModel::type_p(rat(1, 5), rat(2, 3));
        let t =
            ExactMatrix::from_rows(vec![vec![g("2"), g("1+i")], vec![g("0"), g("1/3")]]).unwrap();
        let a = t.adjoint().mul(p.a().matrix()).unwrap().mul(&t).unwrap();
        let b = t.transpose().mul(p.b().matrix()).unwrap().mul(&t).unwrap();
        let moved = QuadricModel::new(
            HermitianForm::new(a).unwrap(),
            SymmetricForm::new(b).unwrap(),
        )
        .unwrap();
        assert_eq!(exact(&moved).tag(), "Unclassified");
        match classify_normal_form(&moved, ClassifyMode::Numeric { tolerance: 1e-9 }).unwrap() {
            NormalForm::P { lambda1, lambda2 } => {
                assert!((lambda1.to_f64() - 0.2).abs() < 1e-9);
                assert!((lambda2.to_f64() - 2.0 / 3.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }
}
