//! Series coefficients, the modular automorphism group and the KMS identity.
//!
//! A polynomial `f = sum c^alpha_{kl} u^alpha_{kl}` is stored through its
//! coefficient table `C(alpha)_{kl} = c^alpha_{kl}`. It relates to the
//! Fourier data by `c_{kl} = d (f^ Q)_{lk}`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dual::{check_block, DualElement};
use crate::error::Result;
use crate::linalg::CMatrix;
use crate::math;
use crate::model::{Irrep, Label, QGModel};

/// Relative tolerance for exact identities.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Coefficients of a polynomial in the matrix elements.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoeffTable {
    blocks: BTreeMap<Label, CMatrix>,
}

impl CoeffTable {
    pub fn from_blocks(blocks: impl IntoIterator<Item = (Label, CMatrix)>) -> Self {
        Self {
            blocks: blocks.into_iter().collect(),
        }
    }

    pub fn get(&self, label: Label) -> Option<&CMatrix> {
        self.blocks.get(&label)
    }

    pub fn blocks(&self) -> impl Iterator<Item = (Label, &CMatrix)> {
        self.blocks.iter().map(|(l, m)| (*l, m))
    }

    /// `c_{kl} = d (f^ Q)_{lk}`.
    pub fn from_fourier(fhat: &DualElement, model: &QGModel) -> Result<Self> {
        let mut blocks = BTreeMap::new();
        for (m, irrep) in fhat.with_irreps(model)? {
            let scaled = m.scale_cols(&irrep.qdiag).transpose();
            blocks.insert(irrep.label, scaled.scale(Complex64::new(irrep.qdim, 0.0)));
        }
        Ok(Self { blocks })
    }

    /// Inverse of [`CoeffTable::from_fourier`]: `f^_{lk} = c_{kl} / (d Q_kk)`.
    pub fn to_fourier(&self, model: &QGModel) -> Result<DualElement> {
        let mut out = DualElement::new();
        for (l, c) in self.blocks() {
            let irrep = model.irrep(l)?;
            check_block(&irrep, c)?;
            let inv: Vec<f64> = irrep.qdiag.iter().map(|q| 1.0 / (q * irrep.qdim)).collect();
            let ones = alloc::vec![1.0; irrep.dim()];
            out.insert(l, c.scale_rows_cols(&inv, &ones).transpose());
        }
        Ok(out)
    }

    /// Largest entrywise relative discrepancy against `other`.
    pub fn max_rel_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (l, a) in self.blocks() {
            let Some(b) = other.get(l) else {
                if !a.is_zero() {
                    return f64::INFINITY;
                }
                continue;
            };
            for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
                let scale = math::cabs(*x).max(math::cabs(*y));
                if scale > 0.0 {
                    worst = worst.max(math::cabs(x - y) / scale);
                }
            }
        }
        worst
    }
}

/// `sigma_z(u_{kl}) = (Q_kk Q_ll)^{iz} u_{kl}`.
pub fn sigma_factor(irrep: &Irrep, k: usize, l: usize, z: Complex64) -> Complex64 {
    math::pos_cpow(irrep.qdiag[k] * irrep.qdiag[l], Complex64::i() * z)
}

/// Applies the modular automorphism `sigma_z` to a coefficient table.
pub fn sigma_action(table: &CoeffTable, z: Complex64, model: &QGModel) -> Result<CoeffTable> {
    let mut blocks = BTreeMap::new();
    for (l, c) in table.blocks() {
        let irrep = model.irrep(l)?;
        check_block(&irrep, c)?;
        let mut out = c.clone();
        for r in 0..irrep.dim() {
            for s in 0..irrep.dim() {
                out[(r, s)] *= sigma_factor(&irrep, r, s, z);
            }
        }
        blocks.insert(l, out);
    }
    Ok(CoeffTable { blocks })
}

/// `h((u_{kl})^* u_{ij}) = delta_ki delta_lj Q_ii^{-1} / d`.
pub fn haar_adjoint_first(irrep: &Irrep, kl: (usize, usize), ij: (usize, usize)) -> f64 {
    if kl == ij {
        1.0 / (irrep.qdiag[ij.0] * irrep.qdim)
    } else {
        0.0
    }
}

/// `h(u_{ij} (u_{kl})^*) = delta_ik delta_jl Q_jj / d`.
pub fn haar_adjoint_second(irrep: &Irrep, ij: (usize, usize), kl: (usize, usize)) -> f64 {
    if kl == ij {
        irrep.qdiag[ij.1] / irrep.qdim
    } else {
        0.0
    }
}

/// Both sides of `h(ab) = h(b sigma_{-i}(a))` for `a = u_{ij}`, `b = a^*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KmsReport {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

pub fn kms_check(label: Label, i: usize, j: usize, model: &QGModel) -> Result<KmsReport> {
    let irrep = model.irrep(label)?;
    irrep.check_index(i)?;
    irrep.check_index(j)?;
    let lhs = haar_adjoint_second(&irrep, (i, j), (i, j));
    let factor = sigma_factor(&irrep, i, j, Complex64::new(0.0, -1.0));
    let rhs = factor * haar_adjoint_first(&irrep, (i, j), (i, j));
    let pass = rhs.im.abs() <= IDENTITY_TOL * rhs.norm() && math::rel_eq(lhs, rhs.re, IDENTITY_TOL);
    Ok(KmsReport { lhs, rhs: rhs.re, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sigma_scales_by_q_power() {
        let m = QGModel::suq2(0.5).unwrap();
        let t = CoeffTable::from_blocks([(Label(2), CMatrix::unit(3, 0, 1))]);
        let s = sigma_action(&t, c(0.0, -1.0), &m).unwrap();
        assert!((s.get(Label(2)).unwrap()[(0, 1)] - c(4.0, 0.0)).norm() < 1e-14);
        let same = sigma_action(&t, c(0.0, 0.0), &m).unwrap();
        assert_eq!(same, t);
        let corner = CoeffTable::from_blocks([(Label(2), CMatrix::unit(3, 0, 2))]);
        for z in [c(0.3, 0.7), c(-2.0, 1.0)] {
            let s = sigma_action(&corner, z, &m).unwrap();
            assert!(s.max_rel_diff(&corner) < 1e-15);
        }
    }

    #[test]
    fn coefficient_round_trip() {
        let m = QGModel::suq2(0.5).unwrap();
        let f = DualElement::matrix_element(&m, Label(2), 0, 1).unwrap();
        let t = CoeffTable::from_fourier(&f, &m).unwrap();
        // u_01 has coefficient 1 at (0, 1)
        assert!((t.get(Label(2)).unwrap()[(0, 1)] - c(1.0, 0.0)).norm() < 1e-14);
        let back = t.to_fourier(&m).unwrap();
        assert!(back.max_abs_diff(&f) < 1e-15);
    }

    #[test]
    fn kms_examples() {
        let m = QGModel::generic(vec![(Label(0), vec![2.0, 0.5], None)]).unwrap();
        let r = kms_check(Label(0), 0, 1, &m).unwrap();
        assert!(r.pass);
        assert!((r.lhs - 0.2).abs() < 1e-15 && (r.rhs - 0.2).abs() < 1e-15);
        let kac = QGModel::generic(vec![(Label(0), vec![1.0; 3], None)]).unwrap();
        let r = kms_check(Label(0), 2, 0, &kac).unwrap();
        assert!(r.pass && (r.lhs - 1.0 / 3.0).abs() < 1e-15);
        let q = QGModel::suq2(0.3).unwrap();
        assert!(kms_check(Label(3), 0, 3, &q).unwrap().pass);
        assert!(kms_check(Label(3), 0, 4, &q).is_err());
    }
}
