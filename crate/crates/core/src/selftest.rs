//! Built-in verification tables, run by `crquad selftest`.

use serde::Serialize;

use crate::cranalysis::{
    assemble_matrix, cr_dimension, dim_formula, dim_identity, super_sub_matrix,
};
use crate::error::Error;
use crate::exactalg::{rat, ExactMatrix, GaussianRational, Rational};
use crate::extension::{extend_polynomial, reindex_zzbar, symmetrize_bishop};
use crate::poly::{parse_polynomial, Monomial};
use crate::quadric::{
    cr_singular_set, find_elliptic_direction, is_elliptic_direction, QuadricModel,
};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl Section {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub sections: Vec<Section>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.sections.iter().all(Section::all_passed)
    }

    pub fn totals(&self) -> (usize, usize) {
        let total = self.sections.iter().map(|s| s.checks.len()).sum();
        let passed = self.sections.iter().map(Section::passed).sum();
        (passed, total)
    }
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: if passed { String::new() } else { detail.into() },
    }
}

pub fn run() -> SelftestReport {
    SelftestReport {
        sections: vec![
            dimension_table(),
            block_matrix_table(),
            rank_table(),
            elliptic_table(),
            identity_table(),
            singular_table(),
            one_variable_table(),
            negative_controls(),
        ],
    }
}

/// Parameter pairs used by the dimension table.
pub const DIMENSION_LAMBDAS: [(i64, i64, i64, i64); 4] =
    [(1, 4, 1, 3), (1, 2, 1, 2), (1, 1, 2, 1), (3, 5, 3, 5)];

fn dimension_table() -> Section {
    let mut checks = Vec::new();
    for (n1, d1, n2, d2) in DIMENSION_LAMBDAS {
        let (l1, l2) = (rat(n1, d1), rat(n2, d2));
        for (tag, model) in [
            ("P", QuadricModel::type_p(l1.clone(), l2.clone())),
            ("MI", QuadricModel::type_mi(l1.clone(), l2.clone())),
        ] {
            for d in 0..=8u32 {
                let name = format!("{tag}({n1}/{d1}, {n2}/{d2}) d={d}");
                match cr_dimension(&model, d) {
                    Ok(dim) => {
                        let want = dim_formula(d as u64) as usize;
                        checks.push(check(name, dim == want, format!("got {dim}, want {want}")));
                    }
                    Err(e) => checks.push(check(name, false, e.to_string())),
                }
            }
        }
    }
    Section {
        name: "dimension formula",
        checks,
    }
}

/// Entries of the degree-2 matrix of the model with `A = diag(1, eps)`,
/// `B = diag(l1, l2)`, as (row, column, value) over the order
/// `zbar1^2, zbar1 zbar2, zbar2^2, z1 zbar1, z1 zbar2, z2 zbar1, z2 zbar2, z1^2, z1 z2, z2^2`.
pub fn block_matrix_entries(
    l1: &Rational,
    l2: &Rational,
    eps: i64,
) -> Vec<(usize, usize, Rational)> {
    let e = Rational::from_integer(eps.into());
    let k = |v: i64| Rational::from_integer(v.into());
    vec![
        (1, 0, k(4) * l2),
        (5, 0, k(2) * &e),
        (0, 1, k(-2) * l1),
        (2, 1, k(2) * l2),
        (3, 1, k(-1)),
        (6, 1, e.clone()),
        (1, 2, k(-4) * l1),
        (4, 2, k(-2)),
        (4, 3, k(2) * l2),
        (8, 3, e.clone()),
        (3, 4, k(-2) * l1),
        (7, 4, k(-1)),
        (6, 5, k(2) * l2),
        (9, 5, e),
        (5, 6, k(-2) * l1),
        (8, 6, k(-1)),
    ]
}

pub fn block_matrix(l1: &Rational, l2: &Rational, eps: i64) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(10, 10);
    for (r, c, v) in block_matrix_entries(l1, l2, eps) {
        m.set(r, c, GaussianRational::from(v));
    }
    m
}

fn block_matrix_table() -> Section {
    let mut checks = Vec::new();
    let cases = [
        ("MI(1/3, 1/2)", rat(1, 3), rat(1, 2), -1),
        ("P(1/3, 1/2)", rat(1, 3), rat(1, 2), 1),
        ("MI(1, 1)", rat(1, 1), rat(1, 1), -1),
        ("P(0, 2)", rat(0, 1), rat(2, 1), 1),
    ];
    for (name, l1, l2, eps) in cases {
        let model = if eps < 0 {
            QuadricModel::type_mi(l1.clone(), l2.clone())
        } else {
            QuadricModel::type_p(l1.clone(), l2.clone())
        };
        let want = block_matrix(&l1, &l2, eps);
        match assemble_matrix(&model, 2) {
            Ok(x) => checks.push(check(name, x.matrix == want, format!("got\n{}", x.matrix))),
            Err(e) => checks.push(check(name, false, e.to_string())),
        }
    }
    Section {
        name: "degree-2 matrix",
        checks,
    }
}

fn rank_table() -> Section {
    let mut checks = Vec::new();
    for l in 1..=12usize {
        // deterministic nonzero entries with varied real and imaginary parts
        let entry = |i: usize, s: i64| {
            let i = i as i64;
            GaussianRational::from_fracs(s * (i + 1), i + 2, (i * 7 + s) % 5 - 2, 3)
        };
        let sup: Vec<_> = (0..l.saturating_sub(1)).map(|i| entry(i, 1)).collect();
        let sub: Vec<_> = (0..l.saturating_sub(1)).map(|i| entry(i, -3)).collect();
        let want = 2 * (l / 2);
        let name = format!("l={l}");
        match super_sub_matrix(l, &sup, &sub) {
            Ok((_, rank)) => checks.push(check(
                name,
                rank == want,
                format!("rank {rank}, want {want}"),
            )),
            Err(e) => checks.push(check(name, false, e.to_string())),
        }
    }
    Section {
        name: "rank formula",
        checks,
    }
}

/// Models of the elliptic-direction table with the expected answer.
pub fn elliptic_cases() -> Vec<(String, QuadricModel, bool)> {
    let grid = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1), (2, 1)];
    let mut out = Vec::new();
    for (i, &(a, b)) in grid.iter().enumerate() {
        for &(c, d) in &grid[i..] {
            let (l1, l2) = (rat(a, b), rat(c, d));
            out.push((
                format!("P({a}/{b}, {c}/{d})"),
                QuadricModel::type_p(l1.clone(), l2.clone()),
                true,
            ));
            let half = rat(1, 2);
            let expected = !(l1 == l2 && l1 >= half);
            out.push((
                format!("MI({a}/{b}, {c}/{d})"),
                QuadricModel::type_mi(l1, l2),
                expected,
            ));
        }
        if a != 0 {
            out.push((
                format!("MII({a}/{b})"),
                QuadricModel::type_mii(rat(a, b)),
                true,
            ));
        }
    }
    out.push(("MIII".into(), QuadricModel::type_miii(), true));
    let one = rat(1, 1);
    let h = rat(1, 2);
    out.push((
        "n=3 diag(1,1,-1), B = 1/2 I".into(),
        QuadricModel::diagonal_model(
            &[one.clone(), one.clone(), -one.clone()],
            &[h.clone(), h.clone(), h.clone()],
        ),
        true,
    ));
    out.push((
        "n=3 diag(1,-1,-1), B = 2 I".into(),
        QuadricModel::diagonal_model(
            &[one.clone(), -one.clone(), -one.clone()],
            &[rat(2, 1), rat(2, 1), rat(2, 1)],
        ),
        true,
    ));
    out.push((
        "n=3 I, B = diag(1, 3/2, 5)".into(),
        QuadricModel::diagonal_model(
            &[one.clone(), one.clone(), one],
            &[rat(1, 1), rat(3, 2), rat(5, 1)],
        ),
        true,
    ));
    out
}

fn elliptic_table() -> Section {
    let mut checks = Vec::new();
    for (name, model, expected) in elliptic_cases() {
        match find_elliptic_direction(&model) {
            Ok(found) => {
                let verified = found
                    .as_ref()
                    .is_none_or(|c| is_elliptic_direction(&model, c).unwrap_or(false));
                let ok = found.is_some() == expected && verified;
                checks.push(check(
                    name,
                    ok,
                    format!("found {found:?}, expected {expected}"),
                ));
            }
            Err(e) => checks.push(check(name, false, e.to_string())),
        }
    }
    Section {
        name: "elliptic directions",
        checks,
    }
}

fn identity_table() -> Section {
    let checks = (0..=20u64)
        .map(|d| {
            let (lhs, rhs) = dim_identity(d);
            check(format!("d={d}"), lhs == rhs, format!("{lhs} != {rhs}"))
        })
        .collect();
    Section {
        name: "combinatorial identity",
        checks,
    }
}

fn singular_table() -> Section {
    let mut checks = Vec::new();
    let cases: Vec<(&str, QuadricModel, usize, Vec<&str>)> = vec![
        (
            "P(1/4, 1/3)",
            QuadricModel::type_p(rat(1, 4), rat(1, 3)),
            0,
            vec![],
        ),
        (
            "P(1/2, 1/4)",
            QuadricModel::type_p(rat(1, 2), rat(1, 4)),
            1,
            vec!["Re z1 = 0", "Re z2 = 0", "Im z2 = 0"],
        ),
        (
            "P(1/2, 1/2)",
            QuadricModel::type_p(rat(1, 2), rat(1, 2)),
            2,
            vec!["Re z1 = 0", "Re z2 = 0"],
        ),
        (
            "MI(1/2, 1/2)",
            QuadricModel::type_mi(rat(1, 2), rat(1, 2)),
            2,
            vec!["Re z1 = 0", "Im z2 = 0"],
        ),
        ("MII(2/3)", QuadricModel::type_mii(rat(2, 3)), 0, vec![]),
        ("MIII", QuadricModel::type_miii(), 0, vec![]),
    ];
    for (name, model, dim, eqs) in cases {
        match cr_singular_set(&model) {
            Ok(set) => {
                let eq_ok = eqs.is_empty() || set.equation_strings() == eqs;
                let ok = set.dimension() == dim
                    && eq_ok
                    && set.is_totally_real()
                    && set.dimension() <= model.n();
                checks.push(check(
                    name,
                    ok,
                    format!(
                        "dim {} equations {:?}",
                        set.dimension(),
                        set.equation_strings()
                    ),
                ));
            }
            Err(e) => checks.push(check(name, false, e.to_string())),
        }
    }
    Section {
        name: "singular sets",
        checks,
    }
}

fn one_variable_table() -> Section {
    let p1 = |s: &str| parse_polynomial(1, s).expect("table polynomial");
    let mut checks = Vec::new();
    let reindexed = reindex_zzbar(&p1("z^3*zbar + 2*z^2*zbar^2"));
    checks.push(check(
        "reindex z^3 zbar + 2 z^2 zbar^2",
        reindexed.as_ref().ok() == Some(&p1("z^2*w + 2*w^2")),
        format!("{reindexed:?}"),
    ));
    let rejected = matches!(reindex_zzbar(&p1("zbar")), Err(Error::NonExtendable { ref pairs }) if pairs == &[(0, 1)]);
    checks.push(check(
        "reindex rejects zbar",
        rejected,
        "expected NonExtendable (0, 1)",
    ));
    for (a, b) in [(1, 4), (1, 3), (1, 1)] {
        let lam = rat(a, b);
        let g = p1("z^2 - 3*z*w + 1/2*w^2 + 7");
        let q = QuadricModel::bishop(lam.clone()).q();
        let f = g.substitute_w(&q).expect("holomorphic");
        let ok = matches!(symmetrize_bishop(&lam, &f), Ok((ref h, true)) if h == &g);
        checks.push(check(
            format!("symmetrize G, lambda={a}/{b}"),
            ok,
            "G not recovered",
        ));
        let want = p1("z").scale(&GaussianRational::from(-(rat(1, 2) / &lam)));
        let ok = matches!(symmetrize_bishop(&lam, &p1("zbar")), Ok((ref h, false)) if h == &want);
        checks.push(check(
            format!("symmetrize zbar, lambda={a}/{b}"),
            ok,
            "expected -z/(2 lambda)",
        ));
    }
    Section {
        name: "one-variable mechanisms",
        checks,
    }
}

fn negative_controls() -> Section {
    let mut checks = Vec::new();
    let model = QuadricModel::type_p(rat(1, 4), rat(1, 3));
    let zbar1 = parse_polynomial(2, "zbar1").expect("literal");
    let ok = matches!(
        extend_polynomial(&model, &zbar1),
        Err(Error::NotCr { ref certificate, .. }) if !certificate.is_zero()
    );
    checks.push(check("zbar1 is refused as not CR", ok, "expected NotCR"));
    let degenerate = QuadricModel::diagonal_model(&[rat(1, 1), rat(0, 1)], &[rat(0, 1), rat(0, 1)]);
    let f = parse_polynomial(2, "z1*zbar1").expect("literal");
    let ok = matches!(extend_polynomial(&degenerate, &f), Err(Error::Degenerate));
    checks.push(check("degenerate A is refused", ok, "expected Degenerate"));
    let q = model.q();
    let w = Monomial::var(2, crate::poly::Var::W);
    let ok = extend_polynomial(&model, &q)
        .is_ok_and(|r| r.f_ext.coeff(&w) == GaussianRational::from_int(1));
    checks.push(check("Q extends to w", ok, "expected F = w"));
    Section {
        name: "negative controls",
        checks,
    }
}
