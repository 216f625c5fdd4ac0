//! Dense complex matrices, singular values and Schatten norms.
//!
//! Matrices here are tiny (a block of a dual element rarely exceeds a few
//! dozen rows), so everything is a plain row-major `Vec`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::math;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Matrix unit `E_{ij}` of size `n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Builds from row-major data; `data.len()` must equal `rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidParameter {
                name: "data",
                reason: alloc::format!("{} entries for a {rows}x{cols} matrix", data.len()),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds from separate real and imaginary parts given as rows.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let rows = re.len();
        if im.len() != rows {
            return Err(Error::InvalidParameter {
                name: "im",
                reason: alloc::format!("{} imaginary rows for {rows} real rows", im.len()),
            });
        }
        let cols = re.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows * cols);
        for (r, (re_row, im_row)) in re.iter().zip(im).enumerate() {
            if re_row.len() != cols || im_row.len() != cols {
                return Err(Error::InvalidParameter {
                    name: "re/im",
                    reason: alloc::format!("row {r} is ragged"),
                });
            }
            data.extend(re_row.iter().zip(im_row).map(|(&a, &b)| Complex64::new(a, b)));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `diag(left) * self * diag(right)`.
    pub fn scale_rows_cols(&self, left: &[f64], right: &[f64]) -> Self {
        debug_assert_eq!(left.len(), self.rows);
        debug_assert_eq!(right.len(), self.cols);
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] *= left[i] * right[j];
            }
        }
        out
    }

    /// `self * diag(right)`.
    pub fn scale_cols(&self, right: &[f64]) -> Self {
        debug_assert_eq!(right.len(), self.cols);
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] *= right[j];
            }
        }
        out
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| math::cabs(a - b))
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|&z| math::cabs(z)).fold(0.0, f64::max)
    }

    /// Singular values in decreasing order (one-sided Jacobi).
    pub fn singular_values(&self) -> Vec<f64> {
        singular_values(self)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

const JACOBI_MAX_SWEEPS: usize = 80;
const JACOBI_TOL: f64 = 1e-15;

/// One-sided (Hestenes) Jacobi: rotate column pairs until all columns are
/// mutually orthogonal; the column norms are then the singular values.
fn singular_values(a: &CMatrix) -> Vec<f64> {
    let (m, n) = (a.rows, a.cols);
    // columns stored contiguously
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for j in 0..n {
            for k in (j + 1)..n {
                let (left, right) = cols.split_at_mut(k);
                let cj = &mut left[j];
                let ck = &mut right[0];
                let alpha: f64 = cj.iter().map(Complex64::norm_sqr).sum();
                let beta: f64 = ck.iter().map(Complex64::norm_sqr).sum();
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma: Complex64 = cj.iter().zip(ck.iter()).map(|(x, y)| x.conj() * y).sum();
                let g = math::cabs(gamma);
                if g <= JACOBI_TOL * math::sqrt(alpha) * math::sqrt(beta) {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + math::sqrt(1.0 + zeta * zeta))
                } else {
                    -1.0 / (-zeta + math::sqrt(1.0 + zeta * zeta))
                };
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = c * t;
                let unphase = phase.conj();
                for (x, y) in cj.iter_mut().zip(ck.iter_mut()) {
                    let yk = *y * unphase;
                    let xj = *x;
                    *x = xj * c - yk * s;
                    *y = xj * s + yk * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| math::sqrt(c.iter().map(Complex64::norm_sqr).sum()))
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(core::cmp::Ordering::Equal));
    sv.truncate(m.min(n));
    sv
}

/// Schatten `p`-norm `(sum sigma_i^p)^(1/p)`; operator norm at `p = inf`.
pub fn schatten_norm(m: &CMatrix, p: Exponent) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let sv = m.singular_values();
    Ok(schatten_from_singular_values(&sv, p))
}

/// `sum sigma_i^p` for finite `p` (the `p`-th power of the Schatten norm).
pub(crate) fn schatten_power(sv: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        sv.iter().sum()
    } else if p == 2.0 {
        sv.iter().map(|s| s * s).sum()
    } else {
        sv.iter().filter(|&&s| s > 0.0).map(|&s| math::powf(s, p)).sum()
    }
}

pub(crate) fn schatten_from_singular_values(sv: &[f64], p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => sv.first().copied().unwrap_or(0.0),
        Exponent::Finite(1.0) => sv.iter().sum(),
        Exponent::Finite(2.0) => math::sqrt(schatten_power(sv, 2.0)),
        Exponent::Finite(p) => math::powf(schatten_power(sv, p), 1.0 / p),
    }
}

/// Operator norm of a matrix.
pub fn op_norm(m: &CMatrix) -> f64 {
    m.singular_values().first().copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_trace_norm() {
        let id = CMatrix::identity(2);
        assert_eq!(schatten_norm(&id, Exponent::ONE).unwrap(), 2.0);
    }

    #[test]
    fn diag_hilbert_schmidt() {
        let m = CMatrix::from_diag(&[3.0, 4.0]);
        let v = schatten_norm(&m, Exponent::TWO).unwrap();
        assert!((v - 5.0).abs() < 1e-15);
    }

    #[test]
    fn matrix_unit_operator_norm() {
        let e = CMatrix::unit(2, 1, 0);
        assert_eq!(schatten_norm(&e, Exponent::Infinity).unwrap(), 1.0);
    }

    #[test]
    fn non_square_rejected() {
        let m = CMatrix::zeros(2, 3);
        assert_eq!(
            schatten_norm(&m, Exponent::ONE),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn zero_matrix_has_zero_norms() {
        let z = CMatrix::zeros(3, 3);
        for p in [Exponent::ONE, Exponent::finite(1.7).unwrap(), Exponent::Infinity] {
            assert_eq!(schatten_norm(&z, p).unwrap(), 0.0);
        }
    }

    #[test]
    fn complex_rotation_recovers_known_spectrum() {
        // U diag(5, 2) V^* with explicit unitaries has singular values (5, 2)
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let u = CMatrix::from_row_major(
            2,
            2,
            alloc::vec![c(s), Complex64::new(0.0, s), Complex64::new(0.0, s), c(s)],
        )
        .unwrap();
        let v = CMatrix::from_row_major(2, 2, alloc::vec![c(0.6), c(-0.8), c(0.8), c(0.6)]).unwrap();
        let m = u.matmul(&CMatrix::from_diag(&[5.0, 2.0])).matmul(&v.adjoint());
        let sv = m.singular_values();
        assert!((sv[0] - 5.0).abs() < 1e-14);
        assert!((sv[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rank_deficient() {
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = c(1.0);
        m[(0, 1)] = c(1.0);
        m[(1, 0)] = c(1.0);
        m[(1, 1)] = c(1.0);
        let sv = m.singular_values();
        assert!((sv[0] - 2.0).abs() < 1e-15);
        assert!(sv[1].abs() < 1e-15 && sv[2].abs() < 1e-15);
    }
}
