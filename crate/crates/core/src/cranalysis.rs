//! CR vector fields on graph models and the CR condition as an exact linear
//! system on homogeneous polynomials.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, GaussianRational};
use crate::poly::{monomials_of_degree, Monomial, Polynomial, Var};
use crate::quadric::{GraphModel, QuadricModel};

/// `L_jk = rho_{zbar_k} d/dzbar_j - rho_{zbar_j} d/dzbar_k` for `j < k`
/// (0-based indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrField {
    pub j: usize,
    pub k: usize,
    /// `rho_{zbar_j}`
    pub dj: Polynomial,
    /// `rho_{zbar_k}`
    pub dk: Polynomial,
}

impl CrField {
    /// 1-based index pair as printed.
    pub fn label(&self) -> (usize, usize) {
        (self.j + 1, self.k + 1)
    }

    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        apply_field(self, f)
    }
}

impl fmt::Display for CrField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "L{}{} = ({}) d/dzbar{} - ({}) d/dzbar{}",
            self.j + 1,
            self.k + 1,
            self.dk,
            self.j + 1,
            self.dj,
            self.k + 1
        )
    }
}

pub fn cr_fields<M: GraphModel + ?Sized>(model: &M) -> Result<Vec<CrField>> {
    let n = model.n();
    if n < 2 {
        return Err(Error::UnsupportedDimension {
            n,
            reason: "the CR condition is vacuous for n = 1",
        });
    }
    let rho = model.rho();
    let partials: Vec<Polynomial> = (0..n).map(|j| rho.derivative(Var::Zbar(j))).collect();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for j in 0..n {
        for k in j + 1..n {
            out.push(CrField {
                j,
                k,
                dj: partials[j].clone(),
                dk: partials[k].clone(),
            });
        }
    }
    Ok(out)
}

pub fn apply_field(field: &CrField, f: &Polynomial) -> Result<Polynomial> {
    if f.has_w() {
        return Err(Error::ContainsW);
    }
    if f.n() != field.dj.n() {
        return Err(Error::DimensionMismatch {
            expected: field.dj.n(),
            found: f.n(),
        });
    }
    let a = field.dk.checked_mul(&f.derivative(Var::Zbar(field.j)))?;
    let b = field.dj.checked_mul(&f.derivative(Var::Zbar(field.k)))?;
    a.checked_sub(&b)
}

/// The first field with `L f != 0`, together with `L f`.
pub fn cr_certificate<M: GraphModel + ?Sized>(
    model: &M,
    f: &Polynomial,
) -> Result<Option<(CrField, Polynomial)>> {
    for field in cr_fields(model)? {
        let lf = apply_field(&field, f)?;
        if !lf.is_zero() {
            return Ok(Some((field, lf)));
        }
    }
    Ok(None)
}

pub fn is_cr<M: GraphModel + ?Sized>(model: &M, f: &Polynomial) -> Result<bool> {
    Ok(cr_certificate(model, f)?.is_none())
}

/// Degree-`d` monomials in `z1, z2, zbar1, zbar2` ordered by ascending
/// `z`-degree, then descending exponent of `z1`, then descending exponent of
/// `zbar1`.
pub fn display_monomial_order(n: usize, d: u32) -> Result<Vec<Monomial>> {
    if n != 2 {
        return Err(Error::UnsupportedDimension {
            n,
            reason: "this monomial order is defined for n = 2",
        });
    }
    let mut out = monomials_of_degree(2, d);
    out.sort_by_key(|m| {
        (
            m.z_degree(),
            std::cmp::Reverse(m.zexp()[0]),
            std::cmp::Reverse(m.zbarexp()[0]),
        )
    });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowLabel {
    /// 1-based field index pair.
    pub field: (usize, usize),
    #[serde(serialize_with = "display_string")]
    pub monomial: Monomial,
}

fn display_string<S: serde::Serializer, T: fmt::Display>(
    value: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

/// `X` with `X c = 0` exactly when `sum c_m m` is CR; column `m` holds the
/// coefficients of `L m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientMatrix {
    pub matrix: ExactMatrix,
    pub columns: Vec<Monomial>,
    pub rows: Vec<RowLabel>,
}

impl CoefficientMatrix {
    pub fn nullity(&self) -> usize {
        self.matrix.cols() - self.matrix.rank()
    }

    pub fn entry(&self, row: &Monomial, col: &Monomial) -> Option<&GaussianRational> {
        let r = self.rows.iter().position(|l| &l.monomial == row)?;
        let c = self.columns.iter().position(|m| m == col)?;
        Some(self.matrix.get(r, c))
    }

    /// Rows labeled by monomial, one line per row.
    pub fn to_text(&self) -> String {
        let mut cells: Vec<Vec<String>> = Vec::with_capacity(self.rows.len() + 1);
        let multi = self
            .rows
            .first()
            .is_some_and(|r| self.rows.iter().any(|o| o.field != r.field));
        let label = |r: &RowLabel| {
            if multi {
                format!("L{}{}:{}", r.field.0, r.field.1, r.monomial)
            } else {
                r.monomial.to_string()
            }
        };
        let mut header = vec![String::new()];
        header.extend(self.columns.iter().map(|m| m.to_string()));
        cells.push(header);
        for (i, r) in self.rows.iter().enumerate() {
            let mut line = vec![label(r)];
            line.extend(self.matrix.row(i).iter().map(|v| v.to_string()));
            cells.push(line);
        }
        let ncols = cells[0].len();
        let widths: Vec<usize> = (0..ncols)
            .map(|c| cells.iter().map(|row| row[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &cells {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(c, (s, w))| {
                    if c == 0 {
                        format!("{s:<w$}")
                    } else {
                        format!("{s:>w$}")
                    }
                })
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }

    pub fn to_grid(&self) -> MatrixGrid {
        MatrixGrid {
            columns: self.columns.iter().map(ToString::to_string).collect(),
            rows: self.rows.clone(),
            entries: self
                .matrix
                .to_rows()
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixGrid {
    pub columns: Vec<String>,
    pub rows: Vec<RowLabel>,
    pub entries: Vec<Vec<String>>,
}

/// Stacks the coefficient matrices of all fields `L_jk`, in pair order.
///
/// `L` preserves degree on a quadric, so rows are the degree-`d` monomials.
pub fn assemble_matrix(model: &QuadricModel, d: u32) -> Result<CoefficientMatrix> {
    let n = model.n();
    let fields = cr_fields(model)?;
    let basis = if n == 2 {
        display_monomial_order(2, d)?
    } else {
        monomials_of_degree(n, d)
    };
    let images: Vec<Vec<Polynomial>> = basis
        .iter()
        .map(|m| {
            let p = Polynomial::term(m.clone(), GaussianRational::from_int(1));
            fields
                .iter()
                .map(|f| apply_field(f, &p))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut matrix = ExactMatrix::zeros(basis.len() * fields.len(), basis.len());
    let mut rows = Vec::with_capacity(basis.len() * fields.len());
    for (fi, field) in fields.iter().enumerate() {
        for (ri, m) in basis.iter().enumerate() {
            rows.push(RowLabel {
                field: field.label(),
                monomial: m.clone(),
            });
            for (ci, image) in images.iter().enumerate() {
                let c = image[fi].coeff(m);
                if !c.is_zero() {
                    matrix.set(fi * basis.len() + ri, ci, c);
                }
            }
        }
    }
    Ok(CoefficientMatrix {
        matrix,
        columns: basis,
        rows,
    })
}

/// Dimension of the space of degree-`d` homogeneous CR polynomials.
pub fn cr_dimension(model: &QuadricModel, d: u32) -> Result<usize> {
    Ok(assemble_matrix(model, d)?.nullity())
}

/// `floor((d + 2)^2 / 4)`.
pub fn dim_formula(d: u64) -> u64 {
    (d + 2) * (d + 2) / 4
}

/// Both sides of `C(d+3, 3) - sum_{j=1}^{d} 2 (d-j+1) floor((j+1)/2) = floor((d+2)^2/4)`.
pub fn dim_identity(d: u64) -> (BigUint, BigUint) {
    let binom =
        BigUint::from(d + 3) * BigUint::from(d + 2) * BigUint::from(d + 1) / BigUint::from(6u32);
    let sum: BigUint = (1..=d)
        .map(|j| BigUint::from(2 * (d - j + 1) * j.div_ceil(2)))
        .sum();
    (binom - sum, BigUint::from(dim_formula(d)))
}

/// The `l x l` matrix with the given super- and sub-diagonals and zeros
/// elsewhere, together with its rank.
pub fn super_sub_matrix(
    l: usize,
    sup: &[GaussianRational],
    sub: &[GaussianRational],
) -> Result<(ExactMatrix, usize)> {
    let expected = l.saturating_sub(1);
    for given in [sup.len(), sub.len()] {
        if given != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: given,
            });
        }
    }
    if let Some(index) = sup.iter().chain(sub).position(Zero::is_zero) {
        return Err(Error::ZeroEntry { index });
    }
    let mut m = ExactMatrix::zeros(l, l);
    for i in 0..expected {
        m.set(i, i + 1, sup[i].clone());
        m.set(i + 1, i, sub[i].clone());
    }
    let rank = m.rank();
    Ok((m, rank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::poly::parse_polynomial;

    fn p2(text: &str) -> Polynomial {
        parse_polynomial(2, text).unwrap()
    }

    fn g(text: &str) -> GaussianRational {
        text.parse().unwrap()
    }

    #[test]
    fn field_examples() {
        let mi = QuadricModel::type_mi(rat(1, 3), rat(1, 2));
        let fields = cr_fields(&mi).unwrap();
        assert_eq!(fields.len(), 1);
        assert_eq!(fields[0].dk, p2("-z2 + zbar2"));
        assert_eq!(fields[0].dj, p2("z1 + 2/3*zbar1"));
        assert_eq!(
            apply_field(&fields[0], &p2("zbar1^2")).unwrap(),
            p2("-2*z2*zbar1 + 2*zbar1*zbar2")
        );
        assert!(apply_field(&fields[0], &p2("z1^3*z2")).unwrap().is_zero());
        assert!(apply_field(&fields[0], &mi.q()).unwrap().is_zero());
        assert!(apply_field(&fields[0], &p2("w")).is_err());

        let n3 = QuadricModel::diagonal_model(
            &[rat(1, 1), rat(1, 1), rat(-1, 1)],
            &[rat(0, 1), rat(0, 1), rat(0, 1)],
        );
        let labels: Vec<_> = cr_fields(&n3).unwrap().iter().map(CrField::label).collect();
        assert_eq!(labels, [(1, 2), (1, 3), (2, 3)]);
        assert!(matches!(
            cr_fields(&QuadricModel::bishop(rat(1, 4))),
            Err(Error::UnsupportedDimension { n: 1, .. })
        ));
    }

    #[test]
    fn cr_examples() {
        let p0 = QuadricModel::type_p(rat(0, 1), rat(0, 1));
        let q = p0.q();
        assert!(is_cr(&p0, &q.pow(3)).unwrap());
        assert!(!is_cr(&p0, &p2("zbar1")).unwrap());
        assert!(is_cr(&p0, &p2("z1*(z1*zbar1 + z2*zbar2)")).unwrap());
    }

    #[test]
    fn monomial_order() {
        let names: Vec<String> = display_monomial_order(2, 2)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(
            names,
            [
                "zbar1^2",
                "zbar1*zbar2",
                "zbar2^2",
                "z1*zbar1",
                "z1*zbar2",
                "z2*zbar1",
                "z2*zbar2",
                "z1^2",
                "z1*z2",
                "z2^2"
            ]
        );
        let d1: Vec<String> = display_monomial_order(2, 1)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(d1, ["zbar1", "zbar2", "z1", "z2"]);
        assert_eq!(display_monomial_order(2, 0).unwrap().len(), 1);
        assert!(display_monomial_order(3, 2).is_err());
    }

    #[test]
    fn matrix_examples() {
        let mi = QuadricModel::type_mi(rat(1, 3), rat(1, 2));
        let x = assemble_matrix(&mi, 2).unwrap();
        assert_eq!((x.matrix.rows(), x.matrix.cols()), (10, 10));
        let m = |s: &str| crate::poly::parse_monomial(2, s).unwrap();
        assert_eq!(x.entry(&m("zbar1*zbar2"), &m("zbar1^2")), Some(&g("2")));
        assert_eq!(x.entry(&m("z2*zbar1"), &m("zbar1^2")), Some(&g("-2")));
        assert_eq!(x.nullity(), 4);

        let zero = assemble_matrix(&mi, 0).unwrap();
        assert_eq!(zero.matrix.cols(), 1);
        assert!(zero.matrix.is_zero());

        let p0 = QuadricModel::type_p(rat(0, 1), rat(0, 1));
        let x1 = assemble_matrix(&p0, 1).unwrap();
        let kernel = x1.matrix.nullspace();
        assert_eq!(kernel.len(), 2);
        for v in kernel {
            // only z1, z2 (last two columns) may be nonzero
            assert!(v[0].is_zero() && v[1].is_zero());
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(
            cr_dimension(&QuadricModel::type_mi(rat(1, 1), rat(1, 1)), 2).unwrap(),
            4
        );
        assert_eq!(
            cr_dimension(&QuadricModel::type_p(rat(1, 4), rat(1, 3)), 5).unwrap(),
            12
        );
        assert_eq!(
            cr_dimension(&QuadricModel::type_p(rat(1, 4), rat(1, 3)), 0).unwrap(),
            1
        );
        assert_eq!(dim_formula(2), 4);
        assert_eq!(dim_formula(0), 1);
        assert_eq!(dim_formula(7), 20);
        for d in 0..40 {
            let (lhs, rhs) = dim_identity(d);
            assert_eq!(lhs, rhs, "d = {d}");
        }
    }

    #[test]
    fn super_sub_examples() {
        assert_eq!(super_sub_matrix(1, &[], &[]).unwrap().1, 0);
        assert_eq!(super_sub_matrix(2, &[g("1")], &[g("1")]).unwrap().1, 2);
        let sup = [g("1/2+i"), g("-3"), g("2i"), g("7/5")];
        let sub = [g("1"), g("-1/3i"), g("4+4i"), g("-2")];
        assert_eq!(super_sub_matrix(5, &sup, &sub).unwrap().1, 4);
        assert!(matches!(
            super_sub_matrix(3, &[g("1"), g("0")], &[g("1"), g("1")]),
            Err(Error::ZeroEntry { index: 1 })
        ));
    }
}
