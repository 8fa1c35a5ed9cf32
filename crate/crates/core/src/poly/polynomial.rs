use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::monomial::{Monomial, Var};
use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, GaussianRational};

/// Sparse polynomial in `z_1..z_n, zbar_1..zbar_n, w` over Q(i).
///
/// `zbar_j` is an independent formal variable; whether a polynomial is
/// real-valued on `zbar = conj(z)` is a predicate, see
/// [`Polynomial::is_real_valued`]. No zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, GaussianRational::one())
    }

    pub fn constant(n: usize, c: GaussianRational) -> Self {
        Self::term(Monomial::one(n), c)
    }

    pub fn var(n: usize, var: Var) -> Self {
        Self::term(Monomial::var(n, var), GaussianRational::one())
    }

    pub fn z(n: usize, j: usize) -> Self {
        Self::var(n, Var::Z(j))
    }

    pub fn zbar(n: usize, j: usize) -> Self {
        Self::var(n, Var::Zbar(j))
    }

    pub fn w(n: usize) -> Self {
        Self::var(n, Var::W)
    }

    pub fn term(m: Monomial, c: GaussianRational) -> Self {
        let n = m.n();
        let mut p = Polynomial::zero(n);
        p.add_term(m, c);
        p
    }

    /// Collects terms, summing repeated monomials and dropping zeros.
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (Monomial, GaussianRational)>,
    ) -> Result<Self> {
        let mut p = Polynomial::zero(n);
        for (m, c) in terms {
            if m.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.n(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, GaussianRational)> {
        self.terms.into_iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_n(&self, other: &Polynomial) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            })
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_n(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_n(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_n(other)?;
        let mut out = Polynomial::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &GaussianRational) -> Polynomial {
        if factor.is_zero() {
            return Polynomial::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.n);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn has_w(&self) -> bool {
        self.terms.keys().any(|m| m.wexp() > 0)
    }

    pub fn has_zbar(&self) -> bool {
        self.terms.keys().any(|m| !m.is_holomorphic())
    }

    /// Maximal total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// Minimal total degree; `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).min()
    }

    pub fn weighted_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::weighted_degree).max()
    }

    /// Conjugation `zbar <-> z` with conjugated coefficients.
    pub fn conjugate(&self) -> Result<Polynomial> {
        if self.has_w() {
            return Err(Error::ContainsW);
        }
        Ok(Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.conj(), c.conj()))
                .collect(),
        })
    }

    /// True iff the polynomial equals its conjugate.
    pub fn is_real_valued(&self) -> Result<bool> {
        Ok(self.conjugate()? == *self)
    }

    pub fn derivative(&self, var: Var) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.set_exp(var, e - 1);
            out.add_term(dm, c * &GaussianRational::from_int(i64::from(e)));
        }
        out
    }

    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        self.filter(|m| m.total_degree() == d)
    }

    pub fn weighted_part(&self, d: u32) -> Polynomial {
        self.filter(|m| m.weighted_degree() == d)
    }

    /// Terms of total degree at most `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Polynomial {
        self.filter(|m| m.total_degree() <= max_degree)
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Distinct total degrees present, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self.terms.keys().map(Monomial::total_degree).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Distinct weighted degrees present, ascending.
    pub fn weighted_degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self.terms.keys().map(Monomial::weighted_degree).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Replaces every power of `w` by the same power of `rho`.
    ///
    /// `self` must be holomorphic (no `zbar`) and `rho` must not contain `w`.
    pub fn substitute_w(&self, rho: &Polynomial) -> Result<Polynomial> {
        self.check_n(rho)?;
        if self.has_zbar() {
            return Err(Error::MalformedInput(
                "polynomial substituted into must not contain zbar".into(),
            ));
        }
        if rho.has_w() {
            return Err(Error::MalformedInput(
                "substituted polynomial must not contain w".into(),
            ));
        }
        let mut powers = PowerCache::new(rho.clone());
        let mut out = Polynomial::zero(self.n);
        for (m, c) in &self.terms {
            let mut head = m.clone();
            head.set_exp(Var::W, 0);
            let tail = powers.get(m.wexp());
            for (tm, tc) in &tail.terms {
                out.add_term(head.mul(tm), c * tc);
            }
        }
        Ok(out)
    }

    /// Composes with an affine change of the `z` variables (and the
    /// conjugate change of the `zbar` variables); `w` is left alone.
    pub fn substitute_affine(&self, map: &AffineMap) -> Result<Polynomial> {
        if map.z_images.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: map.z_images.len(),
            });
        }
        let m = map.target_n;
        let mut z_pows: Vec<PowerCache> =
            map.z_images.iter().cloned().map(PowerCache::new).collect();
        let mut zb_pows: Vec<PowerCache> = map
            .zbar_images
            .iter()
            .cloned()
            .map(PowerCache::new)
            .collect();
        let mut out = Polynomial::zero(m);
        for (mono, c) in &self.terms {
            let mut acc = Polynomial::constant(m, c.clone());
            for j in 0..self.n {
                let a = mono.zexp()[j];
                if a > 0 {
                    acc = &acc * z_pows[j].get(a);
                }
                let b = mono.zbarexp()[j];
                if b > 0 {
                    acc = &acc * zb_pows[j].get(b);
                }
            }
            if mono.wexp() > 0 {
                acc = &acc * &Polynomial::w(m).pow(mono.wexp());
            }
            for (tm, tc) in acc.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Evaluates at `z` with `zbar = conj(z)` and the given `w`.
    pub fn evaluate(
        &self,
        z: &[GaussianRational],
        w: &GaussianRational,
    ) -> Result<GaussianRational> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: z.len(),
            });
        }
        let zbar: Vec<GaussianRational> = z.iter().map(GaussianRational::conj).collect();
        let mut total = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for j in 0..self.n {
                if m.zexp()[j] > 0 {
                    v = &v * &z[j].pow(m.zexp()[j]);
                }
                if m.zbarexp()[j] > 0 {
                    v = &v * &zbar[j].pow(m.zbarexp()[j]);
                }
            }
            if m.wexp() > 0 {
                v = &v * &w.pow(m.wexp());
            }
            total += &v;
        }
        Ok(total)
    }

    /// Coefficient vector of `self` against an ordered list of monomials.
    /// Returns `None` when `self` has a term outside the list.
    pub fn coefficients_in(&self, basis: &[Monomial]) -> Option<Vec<GaussianRational>> {
        let mut hits = 0;
        let v: Vec<GaussianRational> = basis
            .iter()
            .map(|m| {
                let c = self.coeff(m);
                if !c.is_zero() {
                    hits += 1;
                }
                c
            })
            .collect();
        (hits == self.terms.len()).then_some(v)
    }

    /// Matrix whose column `k` holds the coefficients of `polys[k]` against
    /// `rows`. Terms outside `rows` are ignored.
    pub fn coefficient_matrix(polys: &[Polynomial], rows: &[Monomial]) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(rows.len(), polys.len());
        let index: BTreeMap<&Monomial, usize> =
            rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
        for (c, p) in polys.iter().enumerate() {
            for (mono, coeff) in &p.terms {
                if let Some(&r) = index.get(mono) {
                    m.set(r, c, coeff.clone());
                }
            }
        }
        m
    }
}

/// Lazily computed powers `base^0, base^1, ...`.
struct PowerCache {
    powers: Vec<Polynomial>,
}

impl PowerCache {
    fn new(base: Polynomial) -> Self {
        PowerCache {
            powers: vec![Polynomial::one(base.n), base],
        }
    }

    fn get(&mut self, k: u32) -> &Polynomial {
        let k = k as usize;
        while self.powers.len() <= k {
            let next = &self.powers[self.powers.len() - 1] * &self.powers[1];
            self.powers.push(next);
        }
        &self.powers[k]
    }
}

/// An affine substitution `z_j -> z_image_j(xi)`, `zbar_j -> zbar_image_j(xi)`
/// into `target_n` new variables.
#[derive(Clone, Debug)]
pub struct AffineMap {
    target_n: usize,
    z_images: Vec<Polynomial>,
    zbar_images: Vec<Polynomial>,
}

impl AffineMap {
    /// `z = L xi + v`, with `L` an `n x m` matrix and `v` of length `n`.
    pub fn new(linear: &ExactMatrix, offset: &[GaussianRational]) -> Result<Self> {
        let n = linear.rows();
        let m = linear.cols();
        if offset.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: offset.len(),
            });
        }
        let mut z_images = Vec::with_capacity(n);
        for (j, v) in offset.iter().enumerate() {
            let mut p = Polynomial::constant(m, v.clone());
            for i in 0..m {
                p.add_term(Monomial::var(m, Var::Z(i)), linear.get(j, i).clone());
            }
            z_images.push(p);
        }
        let zbar_images = z_images
            .iter()
            .map(|p| p.conjugate().expect("linear images have no w"))
            .collect();
        Ok(AffineMap {
            target_n: m,
            z_images,
            zbar_images,
        })
    }

    /// `z = c xi + v` for a single new variable `xi`.
    pub fn line(c: &[GaussianRational], v: &[GaussianRational]) -> Result<Self> {
        let col = ExactMatrix::from_rows(c.iter().map(|x| vec![x.clone()]).collect())?;
        Self::new(&col, v)
    }

    /// Explicit images; each `zbar` image must be the conjugate of the
    /// corresponding `z` image.
    pub fn from_images(z_images: Vec<Polynomial>, zbar_images: Vec<Polynomial>) -> Result<Self> {
        if z_images.len() != zbar_images.len() {
            return Err(Error::DimensionMismatch {
                expected: z_images.len(),
                found: zbar_images.len(),
            });
        }
        let target_n = z_images.first().map_or(0, Polynomial::n);
        for (index, (zi, zbi)) in z_images.iter().zip(&zbar_images).enumerate() {
            if zi.n() != target_n || zbi.n() != target_n {
                return Err(Error::DimensionMismatch {
                    expected: target_n,
                    found: zi.n().max(zbi.n()),
                });
            }
            if zi.conjugate()? != *zbi {
                return Err(Error::InconsistentConjugation { index });
            }
        }
        Ok(AffineMap {
            target_n,
            z_images,
            zbar_images,
        })
    }

    pub fn target_n(&self) -> usize {
        self.target_n
    }

    pub fn z_images(&self) -> &[Polynomial] {
        &self.z_images
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs)
            .expect("polynomial dimension mismatch")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs)
            .expect("polynomial dimension mismatch")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs)
            .expect("polynomial dimension mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-GaussianRational::one())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}
