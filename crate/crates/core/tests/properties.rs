mod common;

use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;

use crquad::cranalysis::{apply_field, cr_fields, is_cr};
use crquad::exactalg::{rat, rational_to_f64, GaussianRational, Rational};
use crquad::extension::{restrict, weighted_basis};
use crquad::io::{parse_model_str, parse_poly_str, poly_to_json, LoadedModel};
use crquad::poly::{parse_polynomial, Monomial, Polynomial, Var};
use crquad::quadric::{
    bishop_invariant_squared, conic_fiber, slice, ConicFiber, HermitianForm, SymmetricForm,
};
use crquad::{Error, ExactMatrix, PerturbedModel, QuadricModel};

fn gauss() -> impl Strategy<Value = GaussianRational> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4)
        .prop_map(|(a, b, c, d)| GaussianRational::from_fracs(a, b, c, d))
}

fn real() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(a, b)| rat(a, b))
}

fn nonzero_gauss() -> impl Strategy<Value = GaussianRational> {
    gauss().prop_filter("nonzero", |z| !z.is_zero())
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(prop::collection::vec(gauss(), cols), rows)
        .prop_map(|r| ExactMatrix::from_rows(r).unwrap())
}

fn hermitian(n: usize) -> impl Strategy<Value = HermitianForm> {
    (
        prop::collection::vec(real(), n),
        prop::collection::vec(gauss(), n * n),
    )
        .prop_map(move |(d, off)| {
            let mut m = ExactMatrix::zeros(n, n);
            for j in 0..n {
                m.set(j, j, GaussianRational::from_rational(d[j].clone()));
                for k in j + 1..n {
                    let v = off[j * n + k].clone();
                    m.set(k, j, v.conj());
                    m.set(j, k, v);
                }
            }
            HermitianForm::new(m).unwrap()
        })
}

fn symmetric(n: usize) -> impl Strategy<Value = SymmetricForm> {
    prop::collection::vec(gauss(), n * n).prop_map(move |e| {
        let mut m = ExactMatrix::zeros(n, n);
        for j in 0..n {
            for k in j..n {
                m.set(j, k, e[j * n + k].clone());
                m.set(k, j, e[j * n + k].clone());
            }
        }
        SymmetricForm::new(m).unwrap()
    })
}

fn model(n: usize) -> impl Strategy<Value = QuadricModel> {
    (hermitian(n), symmetric(n))
        .prop_filter("nondegenerate A", |(a, _)| a.is_nondegenerate())
        .prop_map(|(a, b)| QuadricModel::new(a, b).unwrap())
}

fn any_model() -> impl Strategy<Value = QuadricModel> {
    prop_oneof![model(1), model(2), model(3)]
}

fn monomial(n: usize, with_w: bool) -> impl Strategy<Value = Monomial> {
    let w_max = if with_w { 2u32 } else { 0 };
    (
        prop::collection::vec(0u32..3, n),
        prop::collection::vec(0u32..3, n),
        0..=w_max,
    )
        .prop_map(|(z, zbar, w)| Monomial::new(z, zbar, w))
}

fn polynomial(n: usize, with_w: bool) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((monomial(n, with_w), gauss()), 0..6)
        .prop_map(move |terms| Polynomial::from_terms(n, terms).unwrap())
}

/// Holomorphic `F(z, w)` with weighted degree at most 3.
fn holomorphic(n: usize) -> impl Strategy<Value = Polynomial> {
    let basis: Vec<Monomial> = (0..=3).flat_map(|d| weighted_basis(d, n)).collect();
    let len = basis.len();
    prop::collection::vec((0..len, gauss()), 1..5).prop_map(move |picks| {
        let terms = picks.into_iter().map(|(i, c)| (basis[i].clone(), c));
        Polynomial::from_terms(n, terms).unwrap()
    })
}

fn eval_f64(p: &Polynomial, xi: Complex64) -> Complex64 {
    p.terms()
        .map(|(m, c)| c.to_complex64() * xi.powu(m.zexp()[0]) * xi.conj().powu(m.zbarexp()[0]))
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_plus_nullity(m in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| matrix(r, c))) {
        let null = m.nullspace();
        prop_assert_eq!(m.rank() + null.len(), m.cols());
        for v in &null {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn derivatives_obey_leibniz(p in polynomial(2, true), q in polynomial(2, true)) {
        for var in [Var::Z(0), Var::Zbar(1), Var::W] {
            let lhs = (&p * &q).derivative(var);
            let rhs = &(&p.derivative(var) * &q) + &(&p * &q.derivative(var));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn fields_annihilate_the_defining_function(
        (m, e) in prop_oneof![model(2), model(3)].prop_flat_map(|m| {
            let n = m.n();
            (Just(m), polynomial(n, false))
        })
    ) {
        for field in cr_fields(&m).unwrap() {
            prop_assert!(apply_field(&field, &m.q()).unwrap().is_zero());
        }
        let high = e.filter(|mono| mono.total_degree() >= 3);
        let real_e = &high + &high.conjugate().unwrap();
        let pm = PerturbedModel::new(m, real_e).unwrap();
        use crquad::quadric::GraphModel;
        for field in cr_fields(&pm).unwrap() {
            prop_assert!(apply_field(&field, &pm.rho()).unwrap().is_zero());
        }
    }

    #[test]
    fn holomorphic_restrictions_are_cr(
        (m, big_f) in prop_oneof![model(2), model(3)].prop_flat_map(|m| {
            let n = m.n();
            (Just(m), holomorphic(n))
        })
    ) {
        let f = restrict(&m, &big_f).unwrap();
        prop_assert!(is_cr(&m, &f).unwrap());
    }

    #[test]
    fn bishop_invariant_is_scale_invariant(
        (m, c, t) in any_model().prop_flat_map(|m| {
            let n = m.n();
            (Just(m), prop::collection::vec(gauss(), n), nonzero_gauss())
        })
    ) {
        prop_assume!(c.iter().any(|x| !x.is_zero()));
        let zero = vec![GaussianRational::zero(); m.n()];
        let scaled: Vec<_> = c.iter().map(|x| x * &t).collect();
        let before = bishop_invariant_squared(&slice(&m, &c, &zero).unwrap());
        let after = bishop_invariant_squared(&slice(&m, &scaled, &zero).unwrap());
        match (before, after) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(Error::DegenerateSlice), Err(Error::DegenerateSlice)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn signature_survives_congruence(
        (a, p) in (1usize..=3).prop_flat_map(|n| (hermitian(n), matrix(n, n)))
    ) {
        prop_assume!(a.is_nondegenerate());
        prop_assume!(!p.determinant().unwrap().is_zero());
        let congruent = p.adjoint().mul(&a.matrix().mul(&p).unwrap()).unwrap();
        let b = HermitianForm::new(congruent).unwrap();
        let sa = a.diagonalize().unwrap().signature();
        let sb = b.diagonalize().unwrap().signature();
        prop_assert_eq!(sa, sb);
    }

    #[test]
    fn ellipse_axes_lie_on_the_level_set(
        m in model(1),
        v in gauss(),
        w0 in real(),
    ) {
        let s = slice(&m, &[GaussianRational::from_int(1)], &[v]).unwrap();
        let Ok(ConicFiber::Ellipse { center, axis_direction_squared, semi_axes_squared }) = conic_fiber(&s, &w0) else {
            return Ok(());
        };
        let d = axis_direction_squared.to_complex64();
        let e = (d / d.norm()).sqrt();
        let c0 = center.to_complex64();
        let target = rational_to_f64(&w0);
        for (axis, dir) in [(0, e), (1, e * Complex64::i())] {
            let r = semi_axes_squared[axis].to_f64().sqrt();
            for sign in [1.0, -1.0] {
                let value = eval_f64(&s.polynomial, c0 + dir * (sign * r));
                let scale = 1.0 + target.abs() + r * r;
                prop_assert!((value.re - target).abs() < 1e-9 * scale, "axis {} value {} target {}", axis, value, target);
                prop_assert!(value.im.abs() < 1e-9 * scale);
            }
        }
    }

    #[test]
    fn polynomial_text_round_trip(p in polynomial(2, true)) {
        let text = p.to_string();
        prop_assert_eq!(parse_polynomial(2, &text).unwrap(), p.clone());
        let json = poly_to_json(&p, None);
        prop_assert_eq!(parse_poly_str(&json, 2).unwrap().poly, p);
    }

    #[test]
    fn model_file_round_trip(
        (m, e) in any_model().prop_flat_map(|m| {
            let n = m.n();
            (Just(m), polynomial(n, false))
        })
    ) {
        let high = e.filter(|mono| mono.total_degree() >= 3);
        let real_e = &high + &high.conjugate().unwrap();
        let loaded = LoadedModel {
            name: Some("random".into()),
            model: PerturbedModel::new(m, real_e).unwrap(),
        };
        let again = parse_model_str(&loaded.to_json()).unwrap();
        prop_assert_eq!(&again.model, &loaded.model);
        prop_assert_eq!(again.to_json(), loaded.to_json());
    }
}
