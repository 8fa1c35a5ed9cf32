//! Holomorphic extension of CR polynomials: `f = F(z, rho)` on a graph model.

use std::collections::BTreeSet;

use num_traits::{One, Signed};
use serde::Serialize;

use crate::cranalysis::cr_certificate;
use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, GaussianRational, Rational};
use crate::poly::{holomorphic_monomials, AffineMap, Monomial, Polynomial, Var};
use crate::quadric::{GraphModel, PerturbedModel, QuadricModel};

/// Monomials `z^alpha w^k` with `|alpha| + 2k = d`, by ascending `k`.
pub fn weighted_basis(d: u32, n: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for k in 0..=d / 2 {
        for mut m in holomorphic_monomials(n, d - 2 * k) {
            m.set_exp(Var::W, k);
            out.push(m);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedPart {
    pub degree: u32,
    pub polynomial: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionResult {
    /// The extension `F(z, w)`.
    #[serde(rename = "F")]
    pub f_ext: Polynomial,
    /// `F(z, rho) - f`.
    pub residual: Polynomial,
    /// Degree through which `residual` is certified to vanish; `None` when
    /// it vanishes identically.
    pub order: Option<u32>,
    pub parts: Vec<WeightedPart>,
    pub weighted_homogeneous: bool,
    /// Set when some degree had a rank-deficient restriction matrix.
    pub non_unique: bool,
}

/// Solves `target = F_d(z, q)` over the weighted basis of degree `d`.
/// Returns the solution and whether it is unique.
fn solve_weighted(
    q: &Polynomial,
    target: &Polynomial,
    d: u32,
) -> Result<Option<(Polynomial, bool)>> {
    let basis = weighted_basis(d, q.n());
    solve_on_basis(q, target, &basis)
}

fn solve_on_basis(
    q: &Polynomial,
    target: &Polynomial,
    basis: &[Monomial],
) -> Result<Option<(Polynomial, bool)>> {
    let one = GaussianRational::one();
    let images: Vec<Polynomial> = basis
        .iter()
        .map(|m| Polynomial::term(m.clone(), one.clone()).substitute_w(q))
        .collect::<Result<_>>()?;
    let mut rows: BTreeSet<Monomial> = target.terms().map(|(m, _)| m.clone()).collect();
    for p in &images {
        rows.extend(p.terms().map(|(m, _)| m.clone()));
    }
    let rows: Vec<Monomial> = rows.into_iter().collect();
    let matrix = Polynomial::coefficient_matrix(&images, &rows);
    let rhs: Vec<GaussianRational> = rows.iter().map(|m| target.coeff(m)).collect();
    let Some(x) = matrix.solve(&rhs)? else {
        return Ok(None);
    };
    let unique = matrix.rank() == basis.len();
    let f = Polynomial::from_terms(q.n(), basis.iter().cloned().zip(x))?;
    Ok(Some((f, unique)))
}

fn check_input(model: &QuadricModel, f: &Polynomial) -> Result<()> {
    model.require_nondegenerate()?;
    if f.n() != model.n() {
        return Err(Error::DimensionMismatch {
            expected: model.n(),
            found: f.n(),
        });
    }
    if f.has_w() {
        return Err(Error::ContainsW);
    }
    Ok(())
}

fn not_cr(
    degree: Option<u32>,
    found: Option<(crate::cranalysis::CrField, Polynomial)>,
) -> Result<()> {
    match found {
        Some((field, certificate)) => Err(Error::NotCr {
            degree,
            field: field.label(),
            certificate,
        }),
        None => Ok(()),
    }
}

/// Finds the holomorphic polynomial `F` with `f = F(z, Q)` on a quadric model.
pub fn extend_polynomial(model: &QuadricModel, f: &Polynomial) -> Result<ExtensionResult> {
    check_input(model, f)?;
    if model.n() >= 2 {
        not_cr(None, cr_certificate(model, f)?)?;
    }
    let q = model.q();
    let mut total = Polynomial::zero(model.n());
    let mut parts = Vec::new();
    let mut non_unique = false;
    for d in f.degrees() {
        let fd = f.homogeneous_part(d);
        let Some((part, unique)) = solve_weighted(&q, &fd, d)? else {
            return Err(Error::NoSolution { degree: d });
        };
        non_unique |= !unique;
        total = &total + &part;
        parts.push(WeightedPart {
            degree: d,
            polynomial: part,
        });
    }
    let residual = total.substitute_w(&q)?.checked_sub(f)?;
    if !residual.is_zero() {
        return Err(Error::InvariantViolation(format!(
            "extension residual is nonzero: {residual}"
        )));
    }
    let weighted_homogeneous = parts.iter().all(|p| {
        p.polynomial
            .terms()
            .all(|(m, _)| m.weighted_degree() == p.degree)
    });
    Ok(ExtensionResult {
        f_ext: total,
        residual,
        order: None,
        parts,
        weighted_homogeneous,
        non_unique,
    })
}

/// Degree-by-degree extension on a perturbed model through total degree
/// `order`. `precision` is the degree to which `f` is known; `None` means `f`
/// is exact.
pub fn formal_extend(
    model: &PerturbedModel,
    f: &Polynomial,
    order: u32,
    precision: Option<u32>,
) -> Result<ExtensionResult> {
    check_input(model.base(), f)?;
    if let Some(supplied) = precision {
        if supplied < order {
            return Err(Error::TruncationTooShort {
                supplied,
                requested: order,
            });
        }
    }
    let n = model.n();
    let rho = model.rho();
    let q = model.base().q();
    let mut remaining = f.truncate(order);
    let mut total = Polynomial::zero(n);
    let mut parts = Vec::new();
    let mut non_unique = false;
    for k in 0..=order {
        let rk = remaining.homogeneous_part(k);
        if rk.is_zero() {
            continue;
        }
        if n >= 2 {
            not_cr(Some(k), cr_certificate(model.base(), &rk)?)?;
        }
        let Some((part, unique)) = solve_weighted(&q, &rk, k)? else {
            return Err(Error::NoSolution { degree: k });
        };
        non_unique |= !unique;
        let image = part.substitute_w(&rho)?.truncate(order);
        remaining = remaining.checked_sub(&image)?;
        total = &total + &part;
        parts.push(WeightedPart {
            degree: k,
            polynomial: part,
        });
    }
    let residual = total.substitute_w(&rho)?.checked_sub(f)?;
    if residual.min_degree().is_some_and(|d| d <= order) {
        return Err(Error::InvariantViolation(format!(
            "formal extension left terms of degree <= {order}"
        )));
    }
    let weighted_homogeneous = parts.iter().all(|p| {
        p.polynomial
            .terms()
            .all(|(m, _)| m.weighted_degree() == p.degree)
    });
    Ok(ExtensionResult {
        f_ext: total,
        residual,
        order: Some(order),
        parts,
        weighted_homogeneous,
        non_unique,
    })
}

/// Rewrites `f(z, zbar) = sum c_kj z^k zbar^j` as `F(z, w)` with `w = z zbar`.
pub fn reindex_zzbar(f: &Polynomial) -> Result<Polynomial> {
    if f.n() != 1 {
        return Err(Error::UnsupportedDimension {
            n: f.n(),
            reason: "reindexing is defined for one complex variable",
        });
    }
    if f.has_w() {
        return Err(Error::ContainsW);
    }
    let mut bad = Vec::new();
    let mut terms = Vec::new();
    for (m, c) in f.terms() {
        let (k, j) = (m.zexp()[0], m.zbarexp()[0]);
        if k < j {
            bad.push((k, j));
        } else {
            terms.push((Monomial::new(vec![k - j], vec![0], j), c.clone()));
        }
    }
    if !bad.is_empty() {
        return Err(Error::NonExtendable { pairs: bad });
    }
    Polynomial::from_terms(1, terms)
}

/// Averages `f(z, xi)` over the two roots `xi` of
/// `lambda xi^2 + z xi + lambda z^2 - w = 0` on `w = z zbar + lambda (z^2 + zbar^2)`.
///
/// Returns the symmetrized `F(z, w)` and whether `F(z, Q) = f`.
pub fn symmetrize_bishop(lambda: &Rational, f: &Polynomial) -> Result<(Polynomial, bool)> {
    if !lambda.is_positive() {
        return Err(Error::MalformedInput("lambda must be positive".into()));
    }
    if f.n() != 1 {
        return Err(Error::UnsupportedDimension {
            n: f.n(),
            reason: "the Bishop quadric has one complex variable",
        });
    }
    if f.has_w() {
        return Err(Error::ContainsW);
    }
    let inv = GaussianRational::from(lambda.recip());
    let lam = GaussianRational::from(lambda.clone());
    let z = Polynomial::z(1, 0);
    let w = Polynomial::w(1);
    let e1 = z.scale(&-inv.clone());
    let e2 = (&(&z * &z).scale(&lam) - &w).scale(&inv);
    let max_b = f.terms().map(|(m, _)| m.zbarexp()[0]).max().unwrap_or(0) as usize;
    // power sums p_b = xi_1^b + xi_2^b by Newton's identities
    let mut power = vec![Polynomial::constant(1, GaussianRational::from_int(2))];
    if max_b >= 1 {
        power.push(e1.clone());
    }
    for b in 2..=max_b {
        let next = &(&e1 * &power[b - 1]) - &(&e2 * &power[b - 2]);
        power.push(next);
    }
    let half = GaussianRational::from(Rational::new(1.into(), 2.into()));
    let mut out = Polynomial::zero(1);
    for (m, c) in f.terms() {
        let head = Polynomial::term(Monomial::new(vec![m.zexp()[0]], vec![0], 0), c * &half);
        out = &out + &(&head * &power[m.zbarexp()[0] as usize]);
    }
    let q = crate::quadric::QuadricModel::bishop(lambda.clone()).q();
    let agrees = out.substitute_w(&q)? == *f;
    Ok((out, agrees))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    /// `F(L xi + v, w)` from the global extension.
    pub restricted: Polynomial,
    /// Extension computed directly on the slice.
    pub sliced: Polynomial,
    /// Whether the slice solve had a unique answer.
    pub unique: bool,
}

/// Checks that restricting the global extension to `z = L xi + v` agrees
/// with extending the restricted `f` against the restricted `Q`.
pub fn slice_consistency_check(
    model: &QuadricModel,
    f: &Polynomial,
    linear: &ExactMatrix,
    offset: &[GaussianRational],
) -> Result<SliceReport> {
    let ext = extend_polynomial(model, f)?;
    let map = AffineMap::new(linear, offset)?;
    let restricted = ext.f_ext.substitute_affine(&map)?;
    let f_slice = f.substitute_affine(&map)?;
    let q_slice = model.q().substitute_affine(&map)?;
    let top = f.degree().unwrap_or(0);
    let basis: Vec<Monomial> = (0..=top)
        .flat_map(|d| weighted_basis(d, map.target_n()))
        .collect();
    let Some((sliced, unique)) = solve_on_basis(&q_slice, &f_slice, &basis)? else {
        return Err(Error::NoSolution { degree: top });
    };
    let difference = if unique {
        restricted.checked_sub(&sliced)?
    } else {
        restricted.substitute_w(&q_slice)?.checked_sub(&f_slice)?
    };
    if !difference.is_zero() {
        return Err(Error::Mismatch { difference });
    }
    Ok(SliceReport {
        restricted,
        sliced,
        unique,
    })
}

/// `F(z, Q)` for a holomorphic `F`, as a check helper.
pub fn restrict(model: &impl GraphModel, big_f: &Polynomial) -> Result<Polynomial> {
    big_f.substitute_w(&model.rho())
}
