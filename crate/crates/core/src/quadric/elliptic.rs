use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{rational_to_f64, GaussianRational, Rational};

use super::forms::{HermitianDiagonalization, QuadricModel};
use super::singular::unit_vector;
use super::slice::slice;

/// `4 |B(c,c)|^2 < A(c, conj c)^2`.
pub fn is_elliptic_direction(model: &QuadricModel, c: &[GaussianRational]) -> Result<bool> {
    let zero = vec![GaussianRational::zero(); model.n()];
    let s = slice(model, c, &zero)?;
    let four = Rational::from_integer(4.into());
    Ok(four * s.beta.modulus_squared() < &s.alpha * &s.alpha)
}

/// Looks for an elliptic direction with Gaussian-rational entries.
///
/// Existence is decided exactly; the witness is found numerically and then
/// verified with [`is_elliptic_direction`].
pub fn find_elliptic_direction(model: &QuadricModel) -> Result<Option<Vec<GaussianRational>>> {
    model.require_nondegenerate()?;
    let n = model.n();
    let check = |c: &[GaussianRational]| is_elliptic_direction(model, c).unwrap_or(false);
    for k in 0..n {
        let e = unit_vector(n, k);
        if check(&e) {
            return Ok(Some(e));
        }
    }
    let diag = model.a().diagonalize()?;
    for k in 0..n {
        let axis = diag.axis(k);
        if check(&axis) {
            return Ok(Some(axis));
        }
    }
    if n == 1 {
        return Ok(None);
    }

    let same_sign = if diag.positive >= 2 {
        Some((0, 1))
    } else if diag.negative >= 2 {
        Some((diag.positive, diag.positive + 1))
    } else {
        None
    };
    let found = match same_sign {
        Some((a, b)) => {
            let plane = Plane::new(model, &diag, a, b);
            plane.definite_witness(&check)
        }
        None => {
            let plane = Plane::new(model, &diag, 0, 1);
            match plane.mixed_witness(&check) {
                MixedOutcome::None => return Ok(None),
                MixedOutcome::Found(c) => Some(c),
                MixedOutcome::Missing => None,
            }
        }
    };
    match found {
        Some(c) => Ok(Some(c)),
        None => Err(Error::InvariantViolation(
            "an elliptic direction exists but no rational witness was found".into(),
        )),
    }
}

enum MixedOutcome {
    None,
    Found(Vec<GaussianRational>),
    Missing,
}

/// The model restricted to `c = x p_a + p_b` for two diagonalizing axes.
struct Plane {
    pa: Vec<GaussianRational>,
    pb: Vec<GaussianRational>,
    da: Rational,
    db: Rational,
    b11: GaussianRational,
    b12: GaussianRational,
    b22: GaussianRational,
    det_a: Rational,
    det_b: GaussianRational,
}

const BITS: [u32; 9] = [4, 8, 12, 16, 20, 26, 32, 40, 50];

impl Plane {
    fn new(model: &QuadricModel, diag: &HermitianDiagonalization, a: usize, b: usize) -> Self {
        let pa = diag.axis(a);
        let pb = diag.axis(b);
        let form = model.b();
        Plane {
            b11: form.bilinear(&pa, &pa),
            b12: form.bilinear(&pa, &pb),
            b22: form.bilinear(&pb, &pb),
            pa,
            pb,
            da: diag.diagonal[a].clone(),
            db: diag.diagonal[b].clone(),
            det_a: model.a().determinant(),
            det_b: form.determinant(),
        }
    }

    fn direction(&self, x: &GaussianRational) -> Vec<GaussianRational> {
        self.pa
            .iter()
            .zip(&self.pb)
            .map(|(a, b)| &(x * a) + b)
            .collect()
    }

    fn beta(&self, x: &GaussianRational) -> GaussianRational {
        let two = GaussianRational::from_int(2);
        &(&(&self.b11 * x) + &(&two * &self.b12)) * x + self.b22.clone()
    }

    fn discriminant(&self) -> GaussianRational {
        &(&self.b12 * &self.b12) - &(&self.b11 * &self.b22)
    }

    fn float_roots(&self) -> [Complex64; 2] {
        let b11 = self.b11.to_complex64();
        let b12 = self.b12.to_complex64();
        let d = self.discriminant().to_complex64().sqrt();
        [(-b12 + d) / b11, (-b12 - d) / b11]
    }

    fn try_near(
        &self,
        x: Complex64,
        check: &dyn Fn(&[GaussianRational]) -> bool,
    ) -> Option<Vec<GaussianRational>> {
        if !x.re.is_finite() || !x.im.is_finite() {
            return None;
        }
        for bits in BITS {
            let c = self.direction(&GaussianRational::from_complex64(x, bits));
            if check(&c) {
                return Some(c);
            }
        }
        None
    }

    /// Rationalizes a numeric root of `beta`, refining it by exact Newton
    /// steps if plain rounding is not enough.
    fn try_root(
        &self,
        x: Complex64,
        check: &dyn Fn(&[GaussianRational]) -> bool,
    ) -> Option<Vec<GaussianRational>> {
        if let Some(c) = self.try_near(x, check) {
            return Some(c);
        }
        let two = GaussianRational::from_int(2);
        let mut xr = GaussianRational::from_complex64(x, 50);
        for _ in 0..6 {
            let slope = &two * &(&(&self.b11 * &xr) + &self.b12);
            let Ok(step) = self.beta(&xr).checked_div(&slope) else {
                return None;
            };
            xr = &xr - &step;
            let c = self.direction(&xr);
            if check(&c) {
                return Some(c);
            }
        }
        None
    }

    /// Both axes have the same sign, so any zero of `beta` is elliptic.
    fn definite_witness(
        &self,
        check: &dyn Fn(&[GaussianRational]) -> bool,
    ) -> Option<Vec<GaussianRational>> {
        if self.b11.is_zero() {
            let c = self.pa.clone();
            return check(&c).then_some(c);
        }
        if self.discriminant().is_zero() {
            let x0 = -self.b12.checked_div(&self.b11).ok()?;
            let c = self.direction(&x0);
            return check(&c).then_some(c);
        }
        self.float_roots()
            .into_iter()
            .find_map(|x| self.try_root(x, check))
            .or_else(|| self.grid_search(check))
    }

    /// `d_a > 0 > d_b`: the slice along `x p_a + p_b` has
    /// `alpha = d_a (|x|^2 - r^2)` with `r^2 = -d_b / d_a`, and is elliptic
    /// wherever `beta` vanishes off the circle `|x| = r`.
    fn mixed_witness(&self, check: &dyn Fn(&[GaussianRational]) -> bool) -> MixedOutcome {
        let found = |c: Option<Vec<GaussianRational>>| match c {
            Some(c) => MixedOutcome::Found(c),
            None => MixedOutcome::Missing,
        };
        if self.b11.is_zero() {
            let c = self.pa.clone();
            return found(check(&c).then_some(c));
        }
        if self.b22.is_zero() {
            let c = self.pb.clone();
            return found(check(&c).then_some(c));
        }
        let r2 = -(&self.db / &self.da);
        let delta = self.discriminant();

        if delta.is_zero() {
            let x0 = match self.b12.checked_div(&self.b11) {
                Ok(q) => -q,
                Err(_) => return MixedOutcome::Missing,
            };
            if x0.modulus_squared() != r2 {
                let c = self.direction(&x0);
                return found(check(&c).then_some(c));
            }
            // double root on the circle: step slightly inside or outside
            for k in 1..40u32 {
                let eps = Rational::new(1.into(), num_bigint::BigInt::from(2).pow(k));
                for t in [Rational::one() - &eps, Rational::one() + &eps] {
                    let c = self.direction(&x0.scale(&t));
                    if check(&c) {
                        return MixedOutcome::Found(c);
                    }
                }
            }
            return MixedOutcome::Missing;
        }

        if self.both_roots_on_circle(&r2, &delta) {
            let sixteen = Rational::from_integer(16.into());
            if sixteen * self.det_b.modulus_squared() >= &self.det_a * &self.det_a {
                return MixedOutcome::None;
            }
            let c = self
                .geodesic_midpoint(&r2)
                .and_then(|x| self.try_near(x, check))
                .or_else(|| self.grid_search(check));
            return found(c);
        }

        let r2f = rational_to_f64(&r2);
        let mut roots = self.float_roots();
        roots.sort_by(|a, b| {
            let da = (a.norm_sqr() - r2f).abs();
            let db = (b.norm_sqr() - r2f).abs();
            db.total_cmp(&da)
        });
        let c = roots
            .into_iter()
            .find_map(|x| self.try_root(x, check))
            .or_else(|| self.grid_search(check));
        found(c)
    }

    /// `beta` is self-inversive for the circle `|x| = r` and both of its
    /// roots lie on the circle.
    fn both_roots_on_circle(&self, r2: &Rational, delta: &GaussianRational) -> bool {
        let two = GaussianRational::from_int(2);
        let r2g = GaussianRational::from(r2.clone());
        let u = [self.b11.clone(), &two * &self.b12, self.b22.clone()];
        // coefficients of x^2 conj(beta(r^2 / conj x))
        let v = [
            self.b22.conj(),
            &(&two * &r2g) * &self.b12.conj(),
            &(&r2g * &r2g) * &self.b11.conj(),
        ];
        let proportional = &u[0] * &v[1] == &u[1] * &v[0]
            && &u[0] * &v[2] == &u[2] * &v[0]
            && &u[1] * &v[2] == &u[2] * &v[1];
        if !proportional {
            return false;
        }
        let k = r2 * self.b11.modulus_squared() - self.b12.modulus_squared();
        !k.is_negative() && delta.modulus_squared() == &k * &k
    }

    /// Point on the hyperbolic geodesic joining the two roots (in the disc
    /// `|x| < r`) that is closest to the center.
    fn geodesic_midpoint(&self, r2: &Rational) -> Option<Complex64> {
        let r = rational_to_f64(r2).sqrt();
        let [x1, x2] = self.float_roots();
        let s = (x1 + x2) / r;
        let norm = s.norm();
        if norm < 1e-12 {
            return Some(Complex64::new(0.0, 0.0));
        }
        let cos = (norm / 2.0).min(1.0);
        let sin = (1.0 - cos * cos).max(0.0).sqrt();
        if cos < 1e-12 {
            return None;
        }
        Some(s / norm * (r * (1.0 - sin) / cos))
    }

    /// Coarse search for the smallest `4|beta|^2 / alpha^2` over `x`.
    fn grid_search(
        &self,
        check: &dyn Fn(&[GaussianRational]) -> bool,
    ) -> Option<Vec<GaussianRational>> {
        let b11 = self.b11.to_complex64();
        let b12 = self.b12.to_complex64();
        let b22 = self.b22.to_complex64();
        let (da, db) = (rational_to_f64(&self.da), rational_to_f64(&self.db));
        let ratio = |x: Complex64| {
            let beta = (b11 * x + 2.0 * b12) * x + b22;
            let alpha = da * x.norm_sqr() + db;
            4.0 * beta.norm_sqr() / (alpha * alpha)
        };
        let mut samples = Vec::new();
        for i in 0..=60 {
            let rho = if i == 0 {
                0.0
            } else {
                10f64.powf(-3.0 + 6.0 * i as f64 / 60.0)
            };
            for j in 0..72 {
                let phi = std::f64::consts::TAU * j as f64 / 72.0;
                let x = Complex64::from_polar(rho, phi);
                let v = ratio(x);
                if v.is_finite() {
                    samples.push((v, x));
                }
            }
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        samples
            .into_iter()
            .take(16)
            .filter(|(v, _)| *v < 1.0)
            .find_map(|(_, x)| self.try_near(x, check))
    }
}
