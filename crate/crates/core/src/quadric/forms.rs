use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, GaussianRational, Rational};
use crate::poly::{Monomial, Polynomial, Var};

/// Hermitian form `A(z, zbar) = sum a_jk z_j zbar_k` with `a_jk = conj(a_kj)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianForm {
    matrix: ExactMatrix,
}

impl HermitianForm {
    pub fn new(matrix: ExactMatrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        for j in 0..matrix.rows() {
            for k in j..matrix.cols() {
                if *matrix.get(j, k) != matrix.get(k, j).conj() {
                    return Err(Error::InvariantViolation(format!(
                        "A[{}][{}] != conj(A[{}][{}])",
                        j + 1,
                        k + 1,
                        k + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(HermitianForm { matrix })
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let d: Vec<GaussianRational> = entries
            .iter()
            .cloned()
            .map(GaussianRational::from)
            .collect();
        HermitianForm {
            matrix: ExactMatrix::diagonal(&d),
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn entry(&self, j: usize, k: usize) -> &GaussianRational {
        self.matrix.get(j, k)
    }

    /// `A(c, conj(c))`, always real.
    pub fn value(&self, c: &[GaussianRational]) -> Rational {
        let mut acc = GaussianRational::zero();
        for (j, cj) in c.iter().enumerate() {
            for (k, ck) in c.iter().enumerate() {
                let a = self.entry(j, k);
                if !a.is_zero() {
                    acc += &(a * &(cj * &ck.conj()));
                }
            }
        }
        debug_assert!(acc.im.is_zero());
        acc.re
    }

    pub fn determinant(&self) -> Rational {
        let det = self.matrix.determinant().expect("square");
        debug_assert!(det.im.is_zero());
        det.re
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.matrix.rank() == self.n()
    }

    pub fn negated(&self) -> HermitianForm {
        let rows = self
            .matrix
            .to_rows()
            .into_iter()
            .map(|r| r.iter().map(|v| -v).collect())
            .collect();
        HermitianForm {
            matrix: ExactMatrix::from_rows(rows).expect("square"),
        }
    }

    /// Diagonalizes by *-congruence: returns `P` with `P^* A P` diagonal.
    ///
    /// Positive diagonal entries come first. Only inertia is computed; the
    /// diagonal entries are positive or negative rationals, not normalized
    /// to +-1.
    pub fn diagonalize(&self) -> Result<HermitianDiagonalization> {
        let n = self.n();
        let mut c = self.matrix.clone();
        let mut p = ExactMatrix::identity(n);

        for k in 0..n {
            let pivot = (k..n).find(|&j| !c.get(j, j).is_zero());
            let pivot = match pivot {
                Some(j) => j,
                None => {
                    let pair = (k..n)
                        .flat_map(|j| (k..n).map(move |m| (j, m)))
                        .find(|&(j, m)| j != m && !c.get(j, m).is_zero());
                    let Some((j, m)) = pair else {
                        return Err(Error::Degenerate);
                    };
                    // column j += conj(c_jm) column m makes c_jj = 2|c_jm|^2
                    let t = c.get(j, m).conj();
                    congruence_add(&mut c, &mut p, j, m, &t);
                    j
                }
            };
            if pivot != k {
                congruence_swap(&mut c, &mut p, k, pivot);
            }
            let d = c.get(k, k).clone();
            for i in k + 1..n {
                let cki = c.get(k, i).clone();
                if cki.is_zero() {
                    continue;
                }
                let factor = -cki.checked_div(&d)?;
                congruence_add(&mut c, &mut p, i, k, &factor);
            }
        }

        let diag: Vec<Rational> = (0..n).map(|k| c.get(k, k).re.clone()).collect();
        let mut order: Vec<usize> = (0..n).filter(|&k| diag[k].is_positive()).collect();
        order.extend((0..n).filter(|&k| diag[k].is_negative()));
        let mut change = ExactMatrix::zeros(n, n);
        for (new, &old) in order.iter().enumerate() {
            for r in 0..n {
                change.set(r, new, p.get(r, old).clone());
            }
        }
        let diagonal: Vec<Rational> = order.iter().map(|&k| diag[k].clone()).collect();
        let positive = diagonal.iter().filter(|d| d.is_positive()).count();
        Ok(HermitianDiagonalization {
            change,
            diagonal,
            positive,
            negative: n - positive,
        })
    }
}

/// `column/row target += factor * column/row source`, i.e. `C <- E^* C E`
/// with `E = I + factor e_source e_target^T`, and `P <- P E`.
fn congruence_add(
    c: &mut ExactMatrix,
    p: &mut ExactMatrix,
    target: usize,
    source: usize,
    factor: &GaussianRational,
) {
    let n = c.rows();
    for r in 0..n {
        let v = c.get(r, target) + &(factor * c.get(r, source));
        c.set(r, target, v);
        let v = p.get(r, target) + &(factor * p.get(r, source));
        p.set(r, target, v);
    }
    let fc = factor.conj();
    for col in 0..n {
        let v = c.get(target, col) + &(&fc * c.get(source, col));
        c.set(target, col, v);
    }
}

fn congruence_swap(c: &mut ExactMatrix, p: &mut ExactMatrix, a: usize, b: usize) {
    let n = c.rows();
    for r in 0..n {
        let (x, y) = (c.get(r, a).clone(), c.get(r, b).clone());
        c.set(r, a, y);
        c.set(r, b, x);
        let (x, y) = (p.get(r, a).clone(), p.get(r, b).clone());
        p.set(r, a, y);
        p.set(r, b, x);
    }
    for col in 0..n {
        let (x, y) = (c.get(a, col).clone(), c.get(b, col).clone());
        c.set(a, col, y);
        c.set(b, col, x);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianDiagonalization {
    /// Columns are the new coordinate axes: `P^* A P = diag(diagonal)`.
    pub change: ExactMatrix,
    pub diagonal: Vec<Rational>,
    pub positive: usize,
    pub negative: usize,
}

impl HermitianDiagonalization {
    pub fn signs(&self) -> Vec<i8> {
        self.diagonal
            .iter()
            .map(|d| if d.is_positive() { 1 } else { -1 })
            .collect()
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.positive, self.negative)
    }

    /// Whether `l >= n - l` already holds without negating `w`.
    pub fn positive_majority(&self) -> bool {
        self.positive >= self.negative
    }

    /// Signature after negating `w` when needed to reach `l >= n - l`.
    pub fn normalized_signature(&self) -> (usize, usize) {
        if self.positive_majority() {
            (self.positive, self.negative)
        } else {
            (self.negative, self.positive)
        }
    }

    pub fn axis(&self, k: usize) -> Vec<GaussianRational> {
        self.change.column(k)
    }
}

/// Complex symmetric form `B(z, z) = sum b_jk z_j z_k`, `b_jk = b_kj`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricForm {
    matrix: ExactMatrix,
}

impl SymmetricForm {
    pub fn new(matrix: ExactMatrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        for j in 0..matrix.rows() {
            for k in j + 1..matrix.cols() {
                if matrix.get(j, k) != matrix.get(k, j) {
                    return Err(Error::InvariantViolation(format!(
                        "B[{}][{}] != B[{}][{}]",
                        j + 1,
                        k + 1,
                        k + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(SymmetricForm { matrix })
    }

    pub fn zero(n: usize) -> Self {
        SymmetricForm {
            matrix: ExactMatrix::zeros(n, n),
        }
    }

    pub fn diagonal(entries: &[GaussianRational]) -> Self {
        SymmetricForm {
            matrix: ExactMatrix::diagonal(entries),
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn entry(&self, j: usize, k: usize) -> &GaussianRational {
        self.matrix.get(j, k)
    }

    /// `B(c, c)`.
    pub fn value(&self, c: &[GaussianRational]) -> GaussianRational {
        self.bilinear(c, c)
    }

    pub fn bilinear(&self, x: &[GaussianRational], y: &[GaussianRational]) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (j, xj) in x.iter().enumerate() {
            for (k, yk) in y.iter().enumerate() {
                let b = self.entry(j, k);
                if !b.is_zero() {
                    acc += &(b * &(xj * yk));
                }
            }
        }
        acc
    }

    pub fn determinant(&self) -> GaussianRational {
        self.matrix.determinant().expect("square")
    }

    pub fn negated(&self) -> SymmetricForm {
        let rows = self
            .matrix
            .to_rows()
            .into_iter()
            .map(|r| r.iter().map(|v| -v).collect())
            .collect();
        SymmetricForm {
            matrix: ExactMatrix::from_rows(rows).expect("square"),
        }
    }
}

/// The flat quadric `w = A(z, zbar) + B(z, z) + conj(B(z, z))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricModel {
    a: HermitianForm,
    b: SymmetricForm,
}

impl QuadricModel {
    pub fn new(a: HermitianForm, b: SymmetricForm) -> Result<Self> {
        if a.n() != b.n() {
            return Err(Error::DimensionMismatch {
                expected: a.n(),
                found: b.n(),
            });
        }
        if a.n() == 0 {
            return Err(Error::UnsupportedDimension {
                n: 0,
                reason: "a model needs at least one z variable",
            });
        }
        Ok(QuadricModel { a, b })
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn a(&self) -> &HermitianForm {
        &self.a
    }

    pub fn b(&self) -> &SymmetricForm {
        &self.b
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.a.is_nondegenerate()
    }

    pub(crate) fn require_nondegenerate(&self) -> Result<()> {
        if self.is_nondegenerate() {
            Ok(())
        } else {
            Err(Error::Degenerate)
        }
    }

    /// The model after `w -> -w`.
    pub fn negated(&self) -> QuadricModel {
        QuadricModel {
            a: self.a.negated(),
            b: self.b.negated(),
        }
    }

    /// `Q = A(z, zbar) + B(z, z) + conj(B(z, z))`.
    pub fn q(&self) -> Polynomial {
        let n = self.n();
        let mut terms = Vec::new();
        for j in 0..n {
            for k in 0..n {
                let a = self.a.entry(j, k);
                if !a.is_zero() {
                    let mut m = Monomial::one(n);
                    m.set_exp(Var::Z(j), 1);
                    m.set_exp(Var::Zbar(k), 1);
                    terms.push((m, a.clone()));
                }
                let b = self.b.entry(j, k);
                if !b.is_zero() {
                    let mut m = Monomial::one(n);
                    m.set_exp(Var::Z(j), m.exp(Var::Z(j)) + 1);
                    m.set_exp(Var::Z(k), m.exp(Var::Z(k)) + 1);
                    terms.push((m.conj(), b.conj()));
                    terms.push((m, b.clone()));
                }
            }
        }
        Polynomial::from_terms(n, terms).expect("consistent dimension")
    }

    /// Type (P): `|z1|^2 + |z2|^2 + l1 (z1^2 + zbar1^2) + l2 (z2^2 + zbar2^2)`.
    pub fn type_p(l1: Rational, l2: Rational) -> Self {
        Self::diagonal_model(&[Rational::one(), Rational::one()], &[l1, l2])
    }

    /// Type (M.I): as (P) with `-|z2|^2`.
    pub fn type_mi(l1: Rational, l2: Rational) -> Self {
        Self::diagonal_model(&[Rational::one(), -Rational::one()], &[l1, l2])
    }

    /// Type (M.II): `|z1|^2 - |z2|^2 + l (z1 z2 + zbar1 zbar2)`.
    pub fn type_mii(l: Rational) -> Self {
        let half = &l / Rational::from_integer(2.into());
        let z = GaussianRational::zero();
        let h = GaussianRational::from(half);
        let b = ExactMatrix::from_rows(vec![vec![z.clone(), h.clone()], vec![h, z]]).expect("2x2");
        QuadricModel {
            a: HermitianForm::diagonal(&[Rational::one(), -Rational::one()]),
            b: SymmetricForm { matrix: b },
        }
    }

    /// Type (M.III): `|z1|^2 - |z2|^2 + (z1^2 + z2^2 + cc)/2 + z1 z2 + zbar1 zbar2`.
    pub fn type_miii() -> Self {
        let h = GaussianRational::from(Rational::new(1.into(), 2.into()));
        let b = ExactMatrix::from_rows(vec![vec![h.clone(), h.clone()], vec![h.clone(), h]])
            .expect("2x2");
        QuadricModel {
            a: HermitianForm::diagonal(&[Rational::one(), -Rational::one()]),
            b: SymmetricForm { matrix: b },
        }
    }

    /// Bishop quadric `w = |z|^2 + l (z^2 + zbar^2)`.
    pub fn bishop(l: Rational) -> Self {
        Self::diagonal_model(&[Rational::one()], &[l])
    }

    /// `A = diag(signs)`, `B = diag(lambdas)`.
    pub fn diagonal_model(a_diag: &[Rational], b_diag: &[Rational]) -> Self {
        let b: Vec<GaussianRational> = b_diag.iter().cloned().map(GaussianRational::from).collect();
        QuadricModel {
            a: HermitianForm::diagonal(a_diag),
            b: SymmetricForm::diagonal(&b),
        }
    }
}

/// `w = Q + E` with `E` real-valued and of order at least 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbedModel {
    base: QuadricModel,
    e: Polynomial,
}

impl PerturbedModel {
    pub fn new(base: QuadricModel, e: Polynomial) -> Result<Self> {
        if e.n() != base.n() {
            return Err(Error::DimensionMismatch {
                expected: base.n(),
                found: e.n(),
            });
        }
        if e.has_w() {
            return Err(Error::ContainsW);
        }
        if let Some((m, _)) = e.terms().find(|(m, _)| m.total_degree() < 3) {
            return Err(Error::NotO3 {
                term: m.to_string(),
                degree: m.total_degree(),
            });
        }
        if !e.is_real_valued()? {
            return Err(Error::InvariantViolation(
                "perturbation E is not real-valued".into(),
            ));
        }
        Ok(PerturbedModel { base, e })
    }

    pub fn base(&self) -> &QuadricModel {
        &self.base
    }

    pub fn e(&self) -> &Polynomial {
        &self.e
    }
}

/// Anything of the form `w = rho(z, zbar)` with a quadric part.
pub trait GraphModel {
    fn n(&self) -> usize;
    fn quadric(&self) -> &QuadricModel;
    fn rho(&self) -> Polynomial;
    fn is_perturbed(&self) -> bool;
}

impl GraphModel for QuadricModel {
    fn n(&self) -> usize {
        QuadricModel::n(self)
    }
    fn quadric(&self) -> &QuadricModel {
        self
    }
    fn rho(&self) -> Polynomial {
        self.q()
    }
    fn is_perturbed(&self) -> bool {
        false
    }
}

impl GraphModel for PerturbedModel {
    fn n(&self) -> usize {
        self.base.n()
    }
    fn quadric(&self) -> &QuadricModel {
        &self.base
    }
    fn rho(&self) -> Polynomial {
        &self.base.q() + &self.e
    }
    fn is_perturbed(&self) -> bool {
        !self.e.is_zero()
    }
}
