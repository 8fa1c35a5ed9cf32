//! Acceptance suite. Runs without the libtest harness so that each criterion
//! reports exactly one PASS/FAIL line.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use common::{g, models, q, random_combination, random_real, random_weighted, small_nonzero};
use crquad::cranalysis::{
    assemble_matrix, cr_dimension, dim_formula, dim_identity, super_sub_matrix,
};
use crquad::exactalg::{GaussianRational, Rational};
use crquad::extension::{
    extend_polynomial, formal_extend, reindex_zzbar, restrict, symmetrize_bishop, weighted_basis,
};
use crquad::poly::{parse_polynomial, Polynomial, Var};
use crquad::quadric::{cr_singular_set, find_elliptic_direction, HermitianForm, SymmetricForm};
use crquad::{Error, PerturbedModel, QuadricModel};

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("dimension formula", dimension_formula),
        ("coefficient matrix golden grid", golden_matrix),
        ("super/sub-diagonal rank", super_sub_rank),
        ("elliptic directions", elliptic_directions),
        ("combinatorial identity", combinatorial_identity),
        ("extension round trip", extension_round_trip),
        ("formal extension", formal_extension),
        ("one-variable mechanisms", one_variable),
        ("CR singular sets", singular_sets),
        ("negative controls", negative_controls),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 10 acceptance criteria passed");
}

fn floor_quarter(d: u64) -> u64 {
    (d + 2) * (d + 2) / 4
}

fn dimension_formula() -> Outcome {
    let lambdas = [(1, 4, 1, 3), (1, 2, 1, 2), (1, 1, 2, 1), (3, 5, 3, 5)];
    let mut checked = 0;
    for (a, b, c, d) in lambdas {
        for model in [
            QuadricModel::type_p(q(a, b), q(c, d)),
            QuadricModel::type_mi(q(a, b), q(c, d)),
        ] {
            for deg in 0..=8u32 {
                let dim = cr_dimension(&model, deg).map_err(|e| e.to_string())?;
                let expected = floor_quarter(deg as u64) as usize;
                ensure!(
                    dim == expected,
                    "lambda ({a}/{b}, {c}/{d}), d = {deg}: got {dim}, expected {expected}"
                );
                checked += 1;
            }
        }
    }
    ensure!(floor_quarter(8) == 25, "d = 8 should give 25");
    Ok(format!("{checked} (model, degree) pairs, d = 8 gives 25"))
}

fn golden_matrix() -> Outcome {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/mi_d2_matrix.json");
    let golden: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let model = QuadricModel::type_mi(q(1, 3), q(1, 2));
    let m = assemble_matrix(&model, 2).map_err(|e| e.to_string())?;
    let columns: Vec<String> = m.columns.iter().map(ToString::to_string).collect();
    let rows: Vec<String> = m.rows.iter().map(|r| r.monomial.to_string()).collect();
    let as_strings = |v: &Value| -> Vec<String> {
        v.as_array()
            .unwrap()
            .iter()
            .map(|s| s.as_str().unwrap().to_string())
            .collect()
    };
    ensure!(
        columns == as_strings(&golden["columns"]),
        "column order {columns:?}"
    );
    ensure!(rows == as_strings(&golden["rows"]), "row order {rows:?}");
    let entries = golden["entries"].as_array().unwrap();
    ensure!(
        m.matrix.rows() == entries.len(),
        "row count {}",
        m.matrix.rows()
    );
    let mut nonzero = 0;
    for (r, row) in entries.iter().enumerate() {
        for (c, cell) in as_strings(row).iter().enumerate() {
            let expected = g(cell);
            ensure!(
                m.matrix.get(r, c) == &expected,
                "entry ({}, {}) is {}, golden {cell}",
                r + 1,
                c + 1,
                m.matrix.get(r, c)
            );
            nonzero += usize::from(!expected.is_zero());
        }
    }
    // the holomorphic columns are zero and the rest splits into the 3-, 2- and 2-blocks
    ensure!(m.matrix.rank() == 6, "rank {}", m.matrix.rank());
    Ok(format!("10 x 10 grid matches, {nonzero} nonzero entries"))
}

fn super_sub_rank() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for l in 1..=12usize {
        for _ in 0..100 {
            let sup: Vec<_> = (1..l).map(|_| small_nonzero(&mut rng)).collect();
            let sub: Vec<_> = (1..l).map(|_| small_nonzero(&mut rng)).collect();
            let (_, rank) = super_sub_matrix(l, &sup, &sub).map_err(|e| e.to_string())?;
            ensure!(rank == 2 * (l / 2), "l = {l}: rank {rank}");
        }
    }
    Ok("1200 random draws, rank = 2 floor(l/2)".into())
}

fn alpha_beta(model: &QuadricModel, c: &[GaussianRational]) -> (Rational, GaussianRational) {
    let n = model.n();
    let mut alpha = GaussianRational::zero();
    let mut beta = GaussianRational::zero();
    for j in 0..n {
        for k in 0..n {
            alpha += &(&(model.a().entry(j, k) * &c[j]) * &c[k].conj());
            beta += &(&(model.b().entry(j, k) * &c[j]) * &c[k]);
        }
    }
    assert!(alpha.im.is_zero());
    (alpha.re, beta)
}

fn strictly_elliptic(model: &QuadricModel, c: &[GaussianRational]) -> bool {
    let (alpha, beta) = alpha_beta(model, c);
    Rational::from_integer(4.into()) * beta.modulus_squared() < &alpha * &alpha
}

fn float_search_finds_elliptic(model: &QuadricModel, rng: &mut ChaCha8Rng) -> bool {
    let n = model.n();
    let a: Vec<Vec<num_complex::Complex64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| model.a().entry(j, k).to_complex64())
                .collect()
        })
        .collect();
    let b: Vec<Vec<num_complex::Complex64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| model.b().entry(j, k).to_complex64())
                .collect()
        })
        .collect();
    for _ in 0..20_000 {
        let c: Vec<num_complex::Complex64> = (0..n)
            .map(|_| {
                num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            })
            .collect();
        let mut alpha = num_complex::Complex64::new(0.0, 0.0);
        let mut beta = alpha;
        for j in 0..n {
            for k in 0..n {
                alpha += a[j][k] * c[j] * c[k].conj();
                beta += b[j][k] * c[j] * c[k];
            }
        }
        if alpha.re * alpha.re - 4.0 * beta.norm_sqr() > 1e-9 {
            return true;
        }
    }
    false
}

fn elliptic_directions() -> Outcome {
    let grid = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1), (2, 1)];
    let mut cases: Vec<(String, QuadricModel, bool)> = Vec::new();
    for (i, &(a, b)) in grid.iter().enumerate() {
        for &(c, d) in &grid[i..] {
            let (l1, l2) = (q(a, b), q(c, d));
            // (P): a definite A always has one; (M.I): only equal parameters >= 1/2 block it
            let blocked = l1 == l2 && l1 >= q(1, 2);
            cases.push((
                format!("P({l1}, {l2})"),
                QuadricModel::type_p(l1.clone(), l2.clone()),
                true,
            ));
            cases.push((
                format!("MI({l1}, {l2})"),
                QuadricModel::type_mi(l1, l2),
                !blocked,
            ));
        }
        if a != 0 {
            cases.push((
                format!("MII({a}/{b})"),
                QuadricModel::type_mii(q(a, b)),
                true,
            ));
        }
    }
    cases.push(("MIII".into(), QuadricModel::type_miii(), true));
    let one = q(1, 1);
    cases.push((
        "n=3 diag(1,1,-1), B = 1/2 I".into(),
        QuadricModel::diagonal_model(
            &[one.clone(), one.clone(), -one.clone()],
            &[q(1, 2), q(1, 2), q(1, 2)],
        ),
        true,
    ));
    cases.push((
        "n=3 diag(1,-1,-1), B = 2 I".into(),
        QuadricModel::diagonal_model(
            &[one.clone(), -one.clone(), -one.clone()],
            &[q(2, 1), q(2, 1), q(2, 1)],
        ),
        true,
    ));
    cases.push((
        "n=3 I, B = diag(1, 3/2, 5)".into(),
        QuadricModel::diagonal_model(
            &[one.clone(), one.clone(), one],
            &[q(1, 1), q(3, 2), q(5, 1)],
        ),
        true,
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let (mut present, mut absent) = (0, 0);
    for (name, model, expected) in &cases {
        let found = find_elliptic_direction(model).map_err(|e| format!("{name}: {e}"))?;
        match found {
            Some(c) => {
                ensure!(*expected, "{name}: unexpected direction {c:?}");
                ensure!(
                    strictly_elliptic(model, &c),
                    "{name}: returned direction {c:?} is not elliptic"
                );
                present += 1;
            }
            None => {
                ensure!(!*expected, "{name}: no direction found");
                ensure!(
                    !float_search_finds_elliptic(model, &mut rng),
                    "{name}: sampling found an elliptic direction"
                );
                absent += 1;
            }
        }
    }
    Ok(format!(
        "{} models, {present} verified directions, {absent} correctly absent",
        cases.len()
    ))
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn combinatorial_identity() -> Outcome {
    for d in 0..=20u64 {
        let sum: u64 = (1..=d).map(|j| 2 * (d - j + 1) * j.div_ceil(2)).sum();
        let lhs = binomial(d + 3, 3) - sum;
        ensure!(
            lhs == floor_quarter(d),
            "d = {d}: {lhs} != {}",
            floor_quarter(d)
        );
        ensure!(dim_formula(d) == floor_quarter(d), "dim_formula({d})");
        let (a, b) = dim_identity(d);
        ensure!(a == b && a == lhs.into(), "dim_identity({d}) = ({a}, {b})");
    }
    Ok("d = 0..20".into())
}

fn extension_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let models = models();
    let mut evaluated = 0;
    for i in 0..200 {
        let (name, model) = &models[i % models.len()];
        let n = model.n();
        let d = rng.gen_range(0..=6u32);
        let big_f = random_weighted(&mut rng, n, d);
        let f = restrict(model, &big_f).map_err(|e| e.to_string())?;
        let r = extend_polynomial(model, &f).map_err(|e| format!("{name}, F = {big_f}: {e}"))?;
        ensure!(
            r.f_ext == big_f,
            "{name}: recovered {} instead of {big_f}",
            r.f_ext
        );
        ensure!(
            r.weighted_homogeneous,
            "{name}: output not weighted homogeneous"
        );
        ensure!(
            r.f_ext.terms().all(|(m, _)| m.weighted_degree() == d),
            "{name}: wrong weighted degree"
        );
        ensure!(
            !r.non_unique && r.residual.is_zero(),
            "{name}: non-unique or residual"
        );
        // pointwise oracle at a random rational point of M
        let z: Vec<GaussianRational> = (0..n).map(|_| small_nonzero(&mut rng)).collect();
        let w = model
            .q()
            .evaluate(&z, &GaussianRational::zero())
            .map_err(|e| e.to_string())?;
        let lhs = r.f_ext.evaluate(&z, &w).map_err(|e| e.to_string())?;
        let rhs = f
            .evaluate(&z, &GaussianRational::zero())
            .map_err(|e| e.to_string())?;
        ensure!(lhs == rhs, "{name}: F(z, Q(z)) != f(z) at {z:?}");
        evaluated += 1;
    }
    Ok(format!(
        "200 random F over {} models, {evaluated} pointwise checks",
        models.len()
    ))
}

fn formal_extension() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let models = models();
    for i in 0..50 {
        let (name, base) = &models[rng.gen_range(0..models.len())];
        let n = base.n();
        let e = random_real(&mut rng, n, 3..=4);
        let pm = PerturbedModel::new(base.clone(), e.clone()).map_err(|e| e.to_string())?;
        let mut big_g = Polynomial::zero(n);
        for d in 0..=5 {
            if rng.gen_bool(0.6) {
                big_g = big_g + random_weighted(&mut rng, n, d);
            }
        }
        let f = restrict(&pm, &big_g).map_err(|e| e.to_string())?;
        let r = formal_extend(&pm, &f, 8, None)
            .map_err(|err| format!("case {i} ({name}, E = {e}): {err}"))?;
        let truncated = big_g.filter(|m| m.weighted_degree() <= 8);
        ensure!(
            r.f_ext == truncated,
            "case {i} ({name}): recovered {} instead of {truncated}",
            r.f_ext
        );
        ensure!(
            r.residual.min_degree().is_none_or(|d| d >= 9),
            "case {i}: residual has degree {:?}",
            r.residual.min_degree()
        );
        ensure!(
            r.weighted_homogeneous,
            "case {i}: parts not weighted homogeneous"
        );
    }
    Ok("50 random (model, E, G) triples to order 8".into())
}

fn one_variable() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let zzbar = parse_polynomial(1, "z1*zbar1").unwrap();
    for _ in 0..100 {
        let mut big_f = Polynomial::zero(1);
        for d in 0..=6 {
            big_f = big_f + random_combination(&mut rng, 1, &weighted_basis(d, 1), 0.5);
        }
        let f = big_f.substitute_w(&zzbar).unwrap();
        let back = reindex_zzbar(&f).map_err(|e| e.to_string())?;
        ensure!(back == big_f, "reindex gave {back} for {big_f}");
    }
    let zbar = Polynomial::zbar(1, 0);
    match reindex_zzbar(&zbar) {
        Err(Error::NonExtendable { pairs }) => ensure!(pairs == vec![(0, 1)], "pairs {pairs:?}"),
        other => return Err(format!("reindex(zbar) returned {other:?}")),
    }
    for lambda in [q(1, 4), q(1, 3), q(1, 1)] {
        let model = QuadricModel::bishop(lambda.clone());
        for _ in 0..10 {
            let mut big_g = Polynomial::zero(1);
            for d in 0..=5 {
                big_g = big_g + random_combination(&mut rng, 1, &weighted_basis(d, 1), 0.5);
            }
            let f = restrict(&model, &big_g).unwrap();
            let (tilde, agrees) = symmetrize_bishop(&lambda, &f).map_err(|e| e.to_string())?;
            ensure!(
                tilde == big_g && agrees,
                "lambda = {lambda}: got {tilde} for {big_g}"
            );
        }
        let (tilde, agrees) = symmetrize_bishop(&lambda, &zbar).map_err(|e| e.to_string())?;
        let expected = Polynomial::z(1, 0).scale(&GaussianRational::from_rational(
            -(Rational::one() / (&lambda * Rational::from_integer(2.into()))),
        ));
        ensure!(
            tilde == expected && !agrees,
            "lambda = {lambda}: zbar gave {tilde}, agrees {agrees}"
        );
    }
    Ok("100 reindex round trips, zbar rejected at (0, 1), symmetrization for lambda in {1/4, 1/3, 1}".into())
}

fn singular_sets() -> Outcome {
    let table: Vec<(&str, QuadricModel, usize, Option<Vec<&str>>)> = vec![
        (
            "P(1/4, 1/3)",
            QuadricModel::type_p(q(1, 4), q(1, 3)),
            0,
            None,
        ),
        (
            "MI(1/4, 1/3)",
            QuadricModel::type_mi(q(1, 4), q(1, 3)),
            0,
            None,
        ),
        (
            "P(1/2, 1/4)",
            QuadricModel::type_p(q(1, 2), q(1, 4)),
            1,
            Some(vec!["Re z1 = 0", "Re z2 = 0", "Im z2 = 0"]),
        ),
        (
            "P(1/2, 1/2)",
            QuadricModel::type_p(q(1, 2), q(1, 2)),
            2,
            Some(vec!["Re z1 = 0", "Re z2 = 0"]),
        ),
        (
            "MI(1/2, 1/2)",
            QuadricModel::type_mi(q(1, 2), q(1, 2)),
            2,
            Some(vec!["Re z1 = 0", "Im z2 = 0"]),
        ),
        ("MII(2/3)", QuadricModel::type_mii(q(2, 3)), 0, None),
        ("MII(1)", QuadricModel::type_mii(q(1, 1)), 0, None),
        ("MIII", QuadricModel::type_miii(), 0, None),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    for (name, model, dim, equations) in &table {
        let set = cr_singular_set(model).map_err(|e| e.to_string())?;
        ensure!(
            set.dimension() == *dim,
            "{name}: dimension {}",
            set.dimension()
        );
        ensure!(
            set.dimension() <= model.n() && set.is_totally_real(),
            "{name}: not totally real"
        );
        if let Some(eqs) = equations {
            ensure!(
                set.equation_strings() == *eqs,
                "{name}: equations {:?}",
                set.equation_strings()
            );
        }
        // oracle: random real combinations of the basis kill every dQ/dzbar_k
        let q_poly = model.q();
        let basis = set.complex_basis();
        for _ in 0..5 {
            let mut z = vec![GaussianRational::zero(); model.n()];
            for v in &basis {
                let t = Rational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=5).into());
                for (zj, vj) in z.iter_mut().zip(v) {
                    *zj += &vj.scale(&t);
                }
            }
            for k in 0..model.n() {
                let dq = q_poly
                    .derivative(Var::Zbar(k))
                    .evaluate(&z, &GaussianRational::zero())
                    .unwrap();
                ensure!(dq.is_zero(), "{name}: dQ/dzbar{} = {dq} at {z:?}", k + 1);
            }
        }
    }
    Ok(format!("{} table rows", table.len()))
}

fn crquad_cli(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_crquad"))
        .arg("--json")
        .args(args)
        .output()
        .expect("run crquad");
    let report: Value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), report)
}

fn negative_controls() -> Outcome {
    let mi = QuadricModel::type_mi(q(1, 3), q(1, 2));
    match extend_polynomial(&mi, &Polynomial::zbar(2, 0)) {
        Err(Error::NotCr { certificate, .. }) => {
            ensure!(!certificate.is_zero(), "zero certificate")
        }
        other => return Err(format!("extend(zbar1) returned {other:?}")),
    }
    let degenerate = QuadricModel::new(
        HermitianForm::diagonal(&[q(1, 1), q(0, 1)]),
        SymmetricForm::zero(2),
    )
    .unwrap();
    let z1 = Polynomial::z(2, 0);
    ensure!(
        matches!(extend_polynomial(&degenerate, &z1), Err(Error::Degenerate)),
        "extend accepted det A = 0"
    );
    let pm = PerturbedModel::new(degenerate, Polynomial::zero(2)).unwrap();
    ensure!(
        matches!(formal_extend(&pm, &z1, 4, None), Err(Error::Degenerate)),
        "formal_extend accepted det A = 0"
    );

    let dir = tempfile::tempdir().unwrap();
    let model_path = dir.path().join("mi.json");
    std::fs::write(
        &model_path,
        r#"{"n":2,"A":[[1,0],[0,-1]],"B":[["1/3","0"],["0","1/2"]]}"#,
    )
    .unwrap();
    let flat_path = dir.path().join("flat.json");
    std::fs::write(&flat_path, r#"{"n":2,"A":[[1,0],[0,0]],"B":[[0,0],[0,0]]}"#).unwrap();
    let zbar_path = dir.path().join("zbar.json");
    std::fs::write(&zbar_path, r#"{"n":2,"terms":[[["1","0"],"zbar1"]]}"#).unwrap();
    let z_path = dir.path().join("z.json");
    std::fs::write(&z_path, r#"{"n":2,"poly":"z1"}"#).unwrap();
    let (m, zb, fl, z) = (
        model_path.to_str().unwrap(),
        zbar_path.to_str().unwrap(),
        flat_path.to_str().unwrap(),
        z_path.to_str().unwrap(),
    );

    let (code, report) = crquad_cli(&["extend", "--model", m, "--poly", zb]);
    ensure!(code == 10, "extend zbar1 exited {code}");
    ensure!(report["error"]["kind"] == "NotCR", "error object {report}");
    let cert = report["error"]["details"]["certificate"]
        .as_str()
        .unwrap_or("0");
    ensure!(cert != "0" && !cert.is_empty(), "certificate {cert}");
    ensure!(
        report.get("payload").is_none(),
        "error report also carries a payload"
    );

    for args in [
        vec!["extend", "--model", fl, "--poly", z],
        vec!["formal-extend", "--model", fl, "--poly", z, "--order", "4"],
    ] {
        let (code, report) = crquad_cli(&args);
        ensure!(
            code == 5 && report["error"]["kind"] == "Degenerate",
            "{} on det A = 0 exited {code}: {report}",
            args[0]
        );
    }
    let (code, _) = crquad_cli(&["extend", "--model", m, "--poly", z]);
    ensure!(code == 0, "extend z1 exited {code}");
    let (code, report) = crquad_cli(&["reindex", "--poly", "zbar1"]);
    ensure!(
        code == 11 && report["error"]["details"]["pairs"] == serde_json::json!([[0, 1]]),
        "reindex zbar exited {code}"
    );
    Ok(
        "NotCR certificate, det A = 0 refused by extend and formal-extend, CLI exit codes 10/5/11"
            .into(),
    )
}
