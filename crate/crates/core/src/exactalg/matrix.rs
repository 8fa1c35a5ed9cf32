use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::scalar::{GaussianRational, Rational};
use crate::error::{Error, Result};

/// Dense row-major matrix over the Gaussian rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.set(k, k, GaussianRational::one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(ExactMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| GaussianRational::from_int(v)).collect())
                .collect(),
        )
        .expect("rows of equal length")
    }

    pub fn diagonal(entries: &[GaussianRational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (k, e) in entries.iter().enumerate() {
            m.set(k, k, e.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussianRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: GaussianRational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[GaussianRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<GaussianRational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<GaussianRational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).conj());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Result<Vec<GaussianRational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(GaussianRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.rows > 0 && other.rows > 0 && self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(ExactMatrix {
            rows: self.rows + other.rows,
            cols,
            data,
        })
    }

    /// Rank over Q(i).
    pub fn rank(&self) -> usize {
        Bareiss::forward(self).pivots.len()
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Result<GaussianRational> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        if self.rows == 0 {
            return Ok(GaussianRational::one());
        }
        let elim = Bareiss::forward(self);
        if elim.pivots.len() < self.rows {
            return Ok(GaussianRational::zero());
        }
        let last = elim.rows[self.rows - 1][self.cols - 1].to_gaussian_rational();
        let mut det = last;
        for s in &elim.row_scales {
            det = det.scale(&Rational::new(BigInt::one(), s.clone()));
        }
        if elim.swaps % 2 == 1 {
            det = -det;
        }
        Ok(det)
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let elim = Bareiss::forward(self);
        let rank = elim.pivots.len();
        let mut rows: Vec<Vec<GaussianRational>> = elim.rows[..rank]
            .iter()
            .map(|row| row.iter().map(GaussianInt::to_gaussian_rational).collect())
            .collect();
        for (r, &pc) in elim.pivots.iter().enumerate().rev() {
            let inv = rows[r][pc].inv().expect("pivot is nonzero");
            for v in rows[r].iter_mut().skip(pc) {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
            let pivot_row = rows[r].clone();
            for above in rows[..r].iter_mut() {
                let factor = above[pc].clone();
                if factor.is_zero() {
                    continue;
                }
                for (c, p) in pivot_row.iter().enumerate().skip(pc) {
                    if !p.is_zero() {
                        above[c] -= &(&factor * p);
                    }
                }
            }
        }
        let mut out = ExactMatrix::zeros(self.rows, self.cols);
        for (r, row) in rows.into_iter().enumerate() {
            for (c, v) in row.into_iter().enumerate() {
                out.set(r, c, v);
            }
        }
        (out, elim.pivots)
    }

    /// Basis of the right kernel, one vector per free column in ascending
    /// order, each scaled so its first nonzero entry is 1.
    pub fn nullspace(&self) -> Vec<Vec<GaussianRational>> {
        let (rref, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![GaussianRational::zero(); self.cols];
            v[free] = GaussianRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -rref.get(r, free);
            }
            let lead = v
                .iter()
                .find(|x| !x.is_zero())
                .cloned()
                .expect("basis vector has a unit entry");
            if !lead.is_one() {
                let inv = lead.inv().expect("nonzero");
                for x in v.iter_mut() {
                    *x = &*x * &inv;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `self * x = b` with every free variable set to zero,
    /// or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[GaussianRational]) -> Result<Option<Vec<GaussianRational>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut aug = ExactMatrix::zeros(self.rows, self.cols + 1);
        for (r, br) in b.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, br.clone());
        }
        let (rref, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![GaussianRational::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = rref.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(ToString::to_string).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[ {} ]", padded.join("  "))?;
        }
        Ok(())
    }
}

/// Element of Z[i], the ring in which elimination runs.
#[derive(Clone, Debug, PartialEq, Eq)]
struct GaussianInt {
    re: BigInt,
    im: BigInt,
}

impl GaussianInt {
    fn zero() -> Self {
        GaussianInt {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    fn one() -> Self {
        GaussianInt {
            re: BigInt::one(),
            im: BigInt::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    fn mul(&self, rhs: &GaussianInt) -> GaussianInt {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianInt {
                re: &self.re * &rhs.re,
                im: BigInt::zero(),
            };
        }
        GaussianInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    fn sub(&self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    /// Division known to be exact in Z[i].
    fn div_exact(&self, rhs: &GaussianInt) -> GaussianInt {
        if rhs.is_one() {
            return self.clone();
        }
        if rhs.im.is_zero() {
            debug_assert!((&self.re % &rhs.re).is_zero() && (&self.im % &rhs.re).is_zero());
            return GaussianInt {
                re: &self.re / &rhs.re,
                im: &self.im / &rhs.re,
            };
        }
        let norm = &rhs.re * &rhs.re + &rhs.im * &rhs.im;
        let num = self.mul(&GaussianInt {
            re: rhs.re.clone(),
            im: -&rhs.im,
        });
        debug_assert!((&num.re % &norm).is_zero() && (&num.im % &norm).is_zero());
        GaussianInt {
            re: num.re / &norm,
            im: num.im / norm,
        }
    }

    fn to_gaussian_rational(&self) -> GaussianRational {
        GaussianRational::new(
            Rational::from_integer(self.re.clone()),
            Rational::from_integer(self.im.clone()),
        )
    }
}

/// Result of fraction-free forward elimination.
struct Bareiss {
    /// Row echelon form over Z[i]; rows past the rank are zero.
    rows: Vec<Vec<GaussianInt>>,
    pivots: Vec<usize>,
    /// Integer each input row was multiplied by to clear denominators.
    row_scales: Vec<BigInt>,
    swaps: usize,
}

impl Bareiss {
    fn forward(m: &ExactMatrix) -> Bareiss {
        let mut row_scales = Vec::with_capacity(m.rows);
        let mut rows: Vec<Vec<GaussianInt>> = (0..m.rows)
            .map(|r| {
                let row = m.row(r);
                let lcm = row.iter().fold(BigInt::one(), |acc, v| {
                    acc.lcm(v.re.denom()).lcm(v.im.denom())
                });
                let scaled = row
                    .iter()
                    .map(|v| GaussianInt {
                        re: v.re.numer() * (&lcm / v.re.denom()),
                        im: v.im.numer() * (&lcm / v.im.denom()),
                    })
                    .collect();
                row_scales.push(lcm);
                scaled
            })
            .collect();

        let mut pivots = Vec::new();
        let mut prev = GaussianInt::one();
        let mut swaps = 0;
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            if p != r {
                rows.swap(p, r);
                row_scales.swap(p, r);
                swaps += 1;
            }
            let (head, tail) = rows.split_at_mut(r + 1);
            let pivot_row = &head[r];
            let pivot = &pivot_row[c];
            for row in tail.iter_mut() {
                let factor = row[c].clone();
                for j in c + 1..m.cols {
                    let scaled = if row[j].is_zero() {
                        GaussianInt::zero()
                    } else {
                        pivot.mul(&row[j])
                    };
                    let updated = if factor.is_zero() || pivot_row[j].is_zero() {
                        scaled
                    } else {
                        scaled.sub(&factor.mul(&pivot_row[j]))
                    };
                    row[j] = if updated.is_zero() {
                        updated
                    } else {
                        updated.div_exact(&prev)
                    };
                }
                row[c] = GaussianInt::zero();
            }
            prev = pivot.clone();
            pivots.push(c);
            r += 1;
        }
        Bareiss {
            rows,
            pivots,
            row_scales,
            swaps,
        }
    }
}
