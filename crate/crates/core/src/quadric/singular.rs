use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::exactalg::{format_rational, ExactMatrix, GaussianRational, Rational};

use super::forms::QuadricModel;

/// A real-linear subspace of `C^n`, given in real coordinates ordered
/// `Re z1, Im z1, Re z2, Im z2, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSet {
    n: usize,
    /// Reduced row echelon form of the defining equations, zero rows dropped.
    equations: ExactMatrix,
    basis: Vec<Vec<Rational>>,
    totally_real: bool,
}

impl LinearSet {
    fn from_equations(n: usize, system: &ExactMatrix) -> Self {
        let (rref, pivots) = system.rref();
        let rows: Vec<Vec<GaussianRational>> =
            (0..pivots.len()).map(|r| rref.row(r).to_vec()).collect();
        let equations = if rows.is_empty() {
            ExactMatrix::zeros(0, 2 * n)
        } else {
            ExactMatrix::from_rows(rows).expect("rectangular")
        };
        let basis: Vec<Vec<Rational>> = system
            .nullspace()
            .into_iter()
            .map(|v| v.into_iter().map(|x| x.re).collect())
            .collect();
        let totally_real = is_totally_real(n, &basis);
        LinearSet {
            n,
            equations,
            basis,
            totally_real,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Real dimension.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn equations(&self) -> &ExactMatrix {
        &self.equations
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Basis vectors as complex points `z_j = x_j + i y_j`.
    pub fn complex_basis(&self) -> Vec<Vec<GaussianRational>> {
        self.basis
            .iter()
            .map(|v| {
                (0..self.n)
                    .map(|j| GaussianRational::new(v[2 * j].clone(), v[2 * j + 1].clone()))
                    .collect()
            })
            .collect()
    }

    pub fn is_totally_real(&self) -> bool {
        self.totally_real
    }

    /// Whether the point (in complex coordinates) lies in the set.
    pub fn contains(&self, z: &[GaussianRational]) -> bool {
        let x: Vec<GaussianRational> = z
            .iter()
            .flat_map(|c| {
                [
                    GaussianRational::from(c.re.clone()),
                    GaussianRational::from(c.im.clone()),
                ]
            })
            .collect();
        self.equations
            .mul_vec(&x)
            .is_ok_and(|r| r.iter().all(Zero::is_zero))
    }

    /// Equations such as `Re z1 + 1/2 Im z2 = 0`.
    pub fn equation_strings(&self) -> Vec<String> {
        (0..self.equations.rows())
            .map(|r| {
                let mut out = String::new();
                for (c, v) in self.equations.row(r).iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    let name = format!("{} z{}", if c % 2 == 0 { "Re" } else { "Im" }, c / 2 + 1);
                    let neg = v.re < Rational::zero();
                    let abs = if neg { -&v.re } else { v.re.clone() };
                    if out.is_empty() {
                        if neg {
                            out.push('-');
                        }
                    } else {
                        out.push_str(if neg { " - " } else { " + " });
                    }
                    if !abs.is_one() {
                        out.push_str(&format_rational(&abs));
                        out.push(' ');
                    }
                    out.push_str(&name);
                }
                out.push_str(" = 0");
                out
            })
            .collect()
    }

    pub fn summary(&self) -> LinearSetSummary {
        LinearSetSummary {
            n: self.n,
            dimension: self.dimension(),
            totally_real: self.totally_real,
            equations: self.equation_strings(),
            basis: self
                .basis
                .iter()
                .map(|v| v.iter().map(format_rational).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearSetSummary {
    pub n: usize,
    pub dimension: usize,
    pub totally_real: bool,
    pub equations: Vec<String>,
    pub basis: Vec<Vec<String>>,
}

/// `J` acts on real coordinates as multiplication by `i`.
fn is_totally_real(n: usize, basis: &[Vec<Rational>]) -> bool {
    if basis.is_empty() {
        return true;
    }
    let mut rows = Vec::with_capacity(2 * basis.len());
    for v in basis {
        rows.push(
            v.iter()
                .cloned()
                .map(GaussianRational::from)
                .collect::<Vec<_>>(),
        );
        let mut jv = Vec::with_capacity(2 * n);
        for j in 0..n {
            jv.push(GaussianRational::from(-&v[2 * j + 1]));
            jv.push(GaussianRational::from(v[2 * j].clone()));
        }
        rows.push(jv);
    }
    ExactMatrix::from_rows(rows).expect("rectangular").rank() == 2 * basis.len()
}

/// The CR singular set of the quadric inside `{w = 0}`: the points where
/// every `dQ/dzbar_k` vanishes.
pub fn cr_singular_set(model: &QuadricModel) -> Result<LinearSet> {
    model.require_nondegenerate()?;
    let n = model.n();
    let two = Rational::from_integer(2.into());
    let mut rows = Vec::with_capacity(2 * n);
    for k in 0..n {
        // dQ/dzbar_k = sum_j a_jk z_j + 2 conj(b_jk) zbar_j
        let mut re_row = Vec::with_capacity(2 * n);
        let mut im_row = Vec::with_capacity(2 * n);
        for j in 0..n {
            let a = model.a().entry(j, k);
            let b2 = model.b().entry(j, k).conj().scale(&two);
            let on_x = a + &b2;
            let on_y = &GaussianRational::i() * &(a - &b2);
            re_row.push(GaussianRational::from(on_x.re.clone()));
            re_row.push(GaussianRational::from(on_y.re.clone()));
            im_row.push(GaussianRational::from(on_x.im));
            im_row.push(GaussianRational::from(on_y.im));
        }
        rows.push(re_row);
        rows.push(im_row);
    }
    let system = ExactMatrix::from_rows(rows).expect("rectangular");
    Ok(LinearSet::from_equations(n, &system))
}

/// Whether the CR singular set has the maximal real dimension `n`.
pub fn is_completely_parabolic(model: &QuadricModel) -> Result<bool> {
    Ok(cr_singular_set(model)?.dimension() == model.n())
}

pub(crate) fn unit_vector(n: usize, k: usize) -> Vec<GaussianRational> {
    (0..n)
        .map(|j| {
            if j == k {
                GaussianRational::one()
            } else {
                GaussianRational::zero()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn g(text: &str) -> GaussianRational {
        text.parse().unwrap()
    }

    #[test]
    fn singular_set_examples() {
        let p = QuadricModel::type_p(rat(1, 2), rat(1, 2));
        let s = cr_singular_set(&p).unwrap();
        assert_eq!(s.dimension(), 2);
        assert!(s.is_totally_real());
        assert_eq!(s.equation_strings(), ["Re z1 = 0", "Re z2 = 0"]);
        assert!(s.contains(&[g("i"), g("-3i")]));
        assert!(!s.contains(&[g("1"), g("0")]));
        assert!(is_completely_parabolic(&p).unwrap());

        let mi = QuadricModel::type_mi(rat(1, 2), rat(1, 2));
        assert!(is_completely_parabolic(&mi).unwrap());
        assert!(cr_singular_set(&mi).unwrap().contains(&[g("i"), g("1")]));

        let flat = QuadricModel::type_p(rat(0, 1), rat(0, 1));
        assert_eq!(cr_singular_set(&flat).unwrap().dimension(), 0);
        assert!(!is_completely_parabolic(&flat).unwrap());

        let mii = cr_singular_set(&QuadricModel::type_mii(rat(2, 3))).unwrap();
        assert_eq!(mii.dimension(), 0);
        assert_eq!(
            cr_singular_set(&QuadricModel::type_miii())
                .unwrap()
                .dimension(),
            0
        );

        let one_half = cr_singular_set(&QuadricModel::type_p(rat(1, 2), rat(1, 4))).unwrap();
        assert_eq!(one_half.dimension(), 1);
        assert_eq!(
            one_half.equation_strings(),
            ["Re z1 = 0", "Re z2 = 0", "Im z2 = 0"]
        );

        let mi_set = cr_singular_set(&mi).unwrap();
        assert_eq!(mi_set.equation_strings(), ["Re z1 = 0", "Im z2 = 0"]);
    }

    #[test]
    fn three_dimensional_parabolic() {
        let h = rat(1, 2);
        let m = QuadricModel::diagonal_model(
            &[rat(1, 1), rat(1, 1), rat(-1, 1)],
            &[h.clone(), h.clone(), h],
        );
        let s = cr_singular_set(&m).unwrap();
        assert!(is_completely_parabolic(&m).unwrap());
        assert!(s.is_totally_real());
        let q = m.q();
        for z in s.complex_basis() {
            for k in 0..3 {
                let d = q.derivative(crate::poly::Var::Zbar(k));
                assert!(d.evaluate(&z, &g("0")).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn degenerate_is_rejected() {
        let m = QuadricModel::diagonal_model(&[rat(1, 1), rat(0, 1)], &[rat(0, 1), rat(0, 1)]);
        assert!(matches!(cr_singular_set(&m), Err(crate::Error::Degenerate)));
    }
}
