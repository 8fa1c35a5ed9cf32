use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{
    format_rational, rational_sqrt, rational_to_f64, GaussianRational, Rational,
};
use crate::poly::{AffineMap, Monomial, Polynomial};

use super::forms::GraphModel;

/// The restriction of a model to the complex line `z = c xi + v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceModel {
    pub c: Vec<GaussianRational>,
    pub v: Vec<GaussianRational>,
    /// Coefficient of `|xi|^2` in the quadratic part.
    pub alpha: Rational,
    /// Coefficient of `xi^2` in the quadratic part.
    pub beta: GaussianRational,
    /// The full composed function `rho(c xi + v)` in one variable.
    pub polynomial: Polynomial,
    pub perturbed: bool,
}

impl SliceModel {
    pub fn bishop_invariant_squared(&self) -> Result<BishopInvariant> {
        bishop_invariant_squared(self)
    }
}

pub fn slice<M: GraphModel + ?Sized>(
    model: &M,
    c: &[GaussianRational],
    v: &[GaussianRational],
) -> Result<SliceModel> {
    let n = model.n();
    if c.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.len(),
        });
    }
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    if c.iter().all(Zero::is_zero) {
        return Err(Error::ZeroDirection);
    }
    let q = model.quadric();
    let alpha = q.a().value(c);
    let beta = q.b().value(c);
    let polynomial = model.rho().substitute_affine(&AffineMap::line(c, v)?)?;
    Ok(SliceModel {
        c: c.to_vec(),
        v: v.to_vec(),
        alpha,
        beta,
        polynomial,
        perturbed: model.is_perturbed(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ellipticity {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl fmt::Display for Ellipticity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ellipticity::Elliptic => "elliptic",
            Ellipticity::Parabolic => "parabolic",
            Ellipticity::Hyperbolic => "hyperbolic",
        })
    }
}

/// The square of the Bishop invariant, or infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BishopInvariant {
    Finite(Rational),
    Infinite,
}

impl BishopInvariant {
    pub fn from_coefficients(alpha: &Rational, beta: &GaussianRational) -> Result<Self> {
        if alpha.is_zero() {
            if beta.is_zero() {
                return Err(Error::DegenerateSlice);
            }
            return Ok(BishopInvariant::Infinite);
        }
        Ok(BishopInvariant::Finite(
            beta.modulus_squared() / (alpha * alpha),
        ))
    }

    /// Compares `lambda^2` with `1/4`.
    pub fn ellipticity(&self) -> Ellipticity {
        match self {
            BishopInvariant::Infinite => Ellipticity::Hyperbolic,
            BishopInvariant::Finite(l2) => {
                let quarter = Rational::new(1.into(), 4.into());
                match l2.cmp(&quarter) {
                    std::cmp::Ordering::Less => Ellipticity::Elliptic,
                    std::cmp::Ordering::Equal => Ellipticity::Parabolic,
                    std::cmp::Ordering::Greater => Ellipticity::Hyperbolic,
                }
            }
        }
    }

    /// `lambda` itself when it is rational.
    pub fn lambda(&self) -> Option<Rational> {
        match self {
            BishopInvariant::Finite(l2) => rational_sqrt(l2),
            BishopInvariant::Infinite => None,
        }
    }
}

impl fmt::Display for BishopInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BishopInvariant::Finite(l2) => f.write_str(&format_rational(l2)),
            BishopInvariant::Infinite => f.write_str("inf"),
        }
    }
}

pub fn bishop_invariant_squared(s: &SliceModel) -> Result<BishopInvariant> {
    BishopInvariant::from_coefficients(&s.alpha, &s.beta)
}

/// `rational + coeff * sqrt(radicand)`, with `radicand` not a perfect square
/// unless `coeff` is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSurd {
    pub rational: Rational,
    pub coeff: Rational,
    pub radicand: Rational,
}

impl QuadraticSurd {
    pub fn new(rational: Rational, coeff: Rational, radicand: Rational) -> Self {
        if coeff.is_zero() || radicand.is_zero() {
            return QuadraticSurd::rational(rational);
        }
        match rational_sqrt(&radicand) {
            Some(root) => QuadraticSurd::rational(rational + coeff * root),
            None => QuadraticSurd {
                rational,
                coeff,
                radicand,
            },
        }
    }

    pub fn rational(value: Rational) -> Self {
        QuadraticSurd {
            rational: value,
            coeff: Rational::zero(),
            radicand: Rational::zero(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeff.is_zero().then_some(&self.rational)
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.rational)
            + rational_to_f64(&self.coeff) * rational_to_f64(&self.radicand).sqrt()
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            return f.write_str(&format_rational(&self.rational));
        }
        let sqrt = format!("sqrt({})", format_rational(&self.radicand));
        let tail = if self.coeff.abs().is_one() {
            sqrt
        } else {
            format!("{}*{}", format_rational(&self.coeff.abs()), sqrt)
        };
        let sign = if self.coeff.is_negative() { "-" } else { "+" };
        if self.rational.is_zero() {
            let lead = if self.coeff.is_negative() { "-" } else { "" };
            write!(f, "{lead}{tail}")
        } else {
            write!(f, "{} {sign} {tail}", format_rational(&self.rational))
        }
    }
}

/// Level set `{w = w0}` of a quadric slice, in the `xi` plane.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConicFiber {
    Empty,
    Point {
        center: GaussianRational,
    },
    Ellipse {
        center: GaussianRational,
        /// `axes[0]^2` is proportional to `conj(beta)` (or 1 for a circle);
        /// `axes[1] = i * axes[0]` up to the surd scale. Stored as the squared
        /// direction `d` with the axis along `sqrt(d)`.
        axis_direction_squared: GaussianRational,
        /// Squared semi-axis along `sqrt(axis_direction_squared)`, then along
        /// the orthogonal axis.
        semi_axes_squared: [QuadraticSurd; 2],
    },
    Hyperbola {
        center: GaussianRational,
    },
    DegenerateLines,
}

impl ConicFiber {
    pub fn kind(&self) -> &'static str {
        match self {
            ConicFiber::Empty => "empty",
            ConicFiber::Point { .. } => "point",
            ConicFiber::Ellipse { .. } => "ellipse",
            ConicFiber::Hyperbola { .. } => "hyperbola",
            ConicFiber::DegenerateLines => "degenerate",
        }
    }
}

/// Intersects a quadric slice with `{w = w0}`.
///
/// Writing `xi = x + i y`, the slice is `f(x, y) = X^T S X + l . X + k` with
/// `S = [[alpha + 2 Re beta, -2 Im beta], [-2 Im beta, alpha - 2 Re beta]]`.
pub fn conic_fiber(s: &SliceModel, w0: &Rational) -> Result<ConicFiber> {
    if s.perturbed || s.polynomial.degree().is_some_and(|d| d > 2) {
        return Err(Error::MalformedInput(
            "conic fibers need a quadric slice".into(),
        ));
    }
    if s.alpha.is_zero() && s.beta.is_zero() {
        return Err(Error::DegenerateSlice);
    }
    let p = &s.polynomial;
    let gamma = p.coeff(&Monomial::new(vec![1], vec![0], 0));
    let kappa = p.coeff(&Monomial::one(1)).re;
    let two = Rational::from_integer(2.into());
    let alpha = &s.alpha;
    let (br, bi) = (&s.beta.re, &s.beta.im);
    let s11 = alpha + &two * br;
    let s22 = alpha - &two * br;
    let s12 = -(&two * bi);
    let det = &s11 * &s22 - &s12 * &s12;
    // linear part 2 Re(gamma xi) = l1 x + l2 y
    let l1 = &two * &gamma.re;
    let l2 = -(&two * &gamma.im);

    if det.is_zero() {
        return Ok(ConicFiber::DegenerateLines);
    }
    // center X0 = -S^{-1} l / 2
    let x0 = -(&s22 * &l1 - &s12 * &l2) / (&two * &det);
    let y0 = -(&s11 * &l2 - &s12 * &l1) / (&two * &det);
    let center = GaussianRational::new(x0.clone(), y0.clone());
    let f_center = kappa + (&l1 * &x0 + &l2 * &y0) / &two;
    let level = w0 - f_center;
    if det.is_negative() {
        return Ok(ConicFiber::Hyperbola { center });
    }
    let sign_ok = if alpha.is_positive() {
        level.is_positive()
    } else {
        level.is_negative()
    };
    if level.is_zero() {
        return Ok(ConicFiber::Point { center });
    }
    if !sign_ok {
        return Ok(ConicFiber::Empty);
    }
    // eigenvalues alpha +- 2|beta|; semi-axis^2 = level / eigenvalue
    //   = level (alpha -+ 2|beta|) / det
    let modsq = s.beta.modulus_squared();
    let base = &level * alpha / &det;
    let shift = &two * &level / &det;
    let semi_axes_squared = [
        QuadraticSurd::new(base.clone(), -shift.clone(), modsq.clone()),
        QuadraticSurd::new(base, shift, modsq),
    ];
    let axis_direction_squared = if s.beta.is_zero() {
        GaussianRational::one()
    } else {
        s.beta.conj()
    };
    Ok(ConicFiber::Ellipse {
        center,
        axis_direction_squared,
        semi_axes_squared,
    })
}
