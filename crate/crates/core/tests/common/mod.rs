#![allow(dead_code)]

use crquad::exactalg::{rat, GaussianRational, Rational};
use crquad::extension::weighted_basis;
use crquad::poly::{monomials_of_degree, Monomial, Polynomial};
use crquad::QuadricModel;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(num: i64, den: i64) -> Rational {
    rat(num, den)
}

pub fn g(text: &str) -> GaussianRational {
    text.parse().unwrap()
}

/// A Gaussian rational with small numerators and denominators, never zero.
pub fn small_nonzero(rng: &mut ChaCha8Rng) -> GaussianRational {
    loop {
        let re = rat(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        let im = if rng.gen_bool(0.5) {
            rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))
        } else {
            Rational::zero()
        };
        let z = GaussianRational::new(re, im);
        if !z.is_zero() {
            return z;
        }
    }
}

/// Random combination of a subset of `basis`, guaranteed nonzero when the
/// basis is nonempty.
pub fn random_combination(
    rng: &mut ChaCha8Rng,
    n: usize,
    basis: &[Monomial],
    density: f64,
) -> Polynomial {
    let mut terms: Vec<(Monomial, GaussianRational)> = Vec::new();
    for m in basis {
        if rng.gen_bool(density) {
            terms.push((m.clone(), small_nonzero(rng)));
        }
    }
    if terms.is_empty() && !basis.is_empty() {
        let m = basis[rng.gen_range(0..basis.len())].clone();
        terms.push((m, small_nonzero(rng)));
    }
    Polynomial::from_terms(n, terms).unwrap()
}

/// Random `F(z, w)` of weighted degree exactly `d`.
pub fn random_weighted(rng: &mut ChaCha8Rng, n: usize, d: u32) -> Polynomial {
    let basis = weighted_basis(d, n);
    let density = (6.0 / basis.len() as f64).min(1.0);
    random_combination(rng, n, &basis, density)
}

/// Random real-valued polynomial in `z, zbar` with homogeneous parts in
/// `degrees`.
pub fn random_real(
    rng: &mut ChaCha8Rng,
    n: usize,
    degrees: std::ops::RangeInclusive<u32>,
) -> Polynomial {
    let mut p = Polynomial::zero(n);
    for d in degrees {
        let basis = monomials_of_degree(n, d);
        let half = random_combination(rng, n, &basis, (3.0 / basis.len() as f64).min(1.0));
        p = p + half.clone() + half.conjugate().unwrap();
    }
    p
}

/// The nondegenerate models used by the randomized suites.
pub fn models() -> Vec<(&'static str, QuadricModel)> {
    vec![
        ("P(1/4, 1/3)", QuadricModel::type_p(q(1, 4), q(1, 3))),
        ("MI(1/2, 1/2)", QuadricModel::type_mi(q(1, 2), q(1, 2))),
        ("MIII", QuadricModel::type_miii()),
        (
            "n=3 diag(1,1,-1), B = 1/2 I",
            QuadricModel::diagonal_model(
                &[q(1, 1), q(1, 1), q(-1, 1)],
                &[q(1, 2), q(1, 2), q(1, 2)],
            ),
        ),
    ]
}
