//! Functionals on the polynomial algebra, the maps `pi^(x)` and the
//! complete-boundedness obstruction.
//!
//! A functional `phi` is stored through two value tables,
//! `P(alpha)_{ij} = phi(u_{ij})` and `M(alpha)_{ij} = phi(u_{ij}^*)`.
//! Convolution is blockwise multiplication of both tables.
//!
//! Only the algebraic side is covered: `pi^(x)` is checked to be
//! multiplicative, but its contractivity needs `L^1(G)` norms and is not
//! asserted anywhere.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::dual::{check_block, DualElement};
use crate::error::Result;
use crate::interval::{first_monotone_exceedance, ScanVerdict};
use crate::linalg::CMatrix;
use crate::math;
use crate::model::{Label, QGModel};

/// Relative tolerance of the table identities.
pub const TABLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FunctionalRep {
    pub p: BTreeMap<Label, CMatrix>,
    pub m: BTreeMap<Label, CMatrix>,
}

impl FunctionalRep {
    pub fn new(p: BTreeMap<Label, CMatrix>, m: BTreeMap<Label, CMatrix>) -> Self {
        Self { p, m }
    }

    /// Shape check of both tables against the model.
    pub fn check(&self, model: &QGModel) -> Result<()> {
        for (l, b) in self.p.iter().chain(self.m.iter()) {
            check_block(&model.irrep(*l)?, b)?;
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.p.values().chain(self.m.values()).all(CMatrix::is_zero)
    }
}

/// The Haar state: value 1 on the trivial representation, 0 elsewhere.
pub fn haar_state(model: &QGModel) -> FunctionalRep {
    let mut f = FunctionalRep::default();
    if let Some(t) = model.trivial_label() {
        f.p.insert(t, CMatrix::identity(1));
        f.m.insert(t, CMatrix::identity(1));
    }
    f
}

/// Tables of `phi(y) = h(y a^*)` on matrix elements and of `h(y^* a)` on
/// their adjoints, for `a` with Fourier data `a^`:
/// `P_{ij} = conj((a^ Q)_{ji}) Q_jj` and `M_{ij} = a^_{ji}`.
///
/// Both come from the orthogonality relations alone. The pair describes a
/// single functional when `a` is self-adjoint; otherwise `phi(u_{ij}^*)`
/// involves a product of two adjoints and is not determined by the data.
pub fn from_element(ahat: &DualElement, model: &QGModel) -> Result<FunctionalRep> {
    let mut f = FunctionalRep::default();
    for (a, irrep) in ahat.with_irreps(model)? {
        let n = irrep.dim();
        let mut p = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                p[(i, j)] = (a[(j, i)] * irrep.qdiag[i]).conj() * irrep.qdiag[j];
            }
        }
        f.p.insert(irrep.label, p);
        f.m.insert(irrep.label, a.transpose());
    }
    Ok(f)
}

fn blockwise_product(a: &BTreeMap<Label, CMatrix>, b: &BTreeMap<Label, CMatrix>) -> BTreeMap<Label, CMatrix> {
    a.iter()
        .filter_map(|(l, x)| b.get(l).map(|y| (*l, x.matmul(y))))
        .collect()
}

/// `phi * psi = (phi (x) psi) Delta`: blockwise products of both tables.
pub fn convolve(phi: &FunctionalRep, psi: &FunctionalRep) -> FunctionalRep {
    FunctionalRep {
        p: blockwise_product(&phi.p, &psi.p),
        m: blockwise_product(&phi.m, &psi.m),
    }
}

/// `pi^(x)(phi) = Q^{x/2} P Q^{-x/2}`.
pub fn pi_x(phi: &FunctionalRep, x: f64, model: &QGModel) -> Result<DualElement> {
    let mut out = DualElement::new();
    for (l, p) in &phi.p {
        let irrep = model.irrep(*l)?;
        check_block(&irrep, p)?;
        out.insert(*l, p.scale_rows_cols(&irrep.qpow(0.5 * x), &irrep.qpow(-0.5 * x)));
    }
    Ok(out)
}

/// Tables of `phi o S` with `S(u_{ij}) = u_{ji}^*`, hence
/// `S(u_{ij}^*) = Q_ii^{-1} Q_jj u_{ji}`:
/// `P' = M^t` and `M' = Q^{-1} P^t Q`.
pub fn pullback_antipode(phi: &FunctionalRep, model: &QGModel) -> Result<FunctionalRep> {
    let mut out = FunctionalRep::default();
    for (l, m) in &phi.m {
        out.p.insert(*l, m.transpose());
    }
    for (l, p) in &phi.p {
        let irrep = model.irrep(*l)?;
        check_block(&irrep, p)?;
        out.m
            .insert(*l, p.transpose().scale_rows_cols(&irrep.qpow(-1.0), &irrep.qdiag));
    }
    Ok(out)
}

/// Standard Fourier data `phi^(alpha) = (id (x) phi)((u^alpha)^*) = M(alpha)^t`.
pub fn standard_fourier(phi: &FunctionalRep) -> DualElement {
    DualElement::from_blocks(phi.m.iter().map(|(l, m)| (*l, m.transpose())))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntipodeReport {
    /// Largest entrywise difference between both sides.
    pub discrepancy: f64,
    pub scale: f64,
    pub pass: bool,
}

/// Compares the standard Fourier data with `pi^(0)(phi o S)`.
pub fn antipode_relation_check(phi: &FunctionalRep, model: &QGModel) -> Result<AntipodeReport> {
    phi.check(model)?;
    let lhs = standard_fourier(phi);
    let pulled = pullback_antipode(phi, model)?;
    let rhs = pi_x(&pulled, 0.0, model)?;
    let discrepancy = lhs.max_abs_diff(&rhs);
    let scale = lhs.max_abs().max(rhs.max_abs());
    Ok(AntipodeReport {
        discrepancy,
        scale,
        pass: discrepancy <= TABLE_TOL * scale,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CbObstructionRow {
    pub label: Label,
    pub dim: f64,
    pub qdim: f64,
    /// `max(||Q||, ||Q^{-1}||)`.
    pub max_q: f64,
    /// `n max(||Q||, ||Q^{-1}||) / d`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CbObstructionScan {
    pub rows: Vec<CbObstructionRow>,
    pub verdict: ScanVerdict,
}

/// `(n / d) max(||Q||, ||Q^{-1}||)`, through logarithms once the factors
/// leave the range of `f64`.
fn obstruction_value(dim: f64, qdim: f64, log_max_q: f64, log_dim: f64, log_qdim: f64) -> f64 {
    let m = math::exp(log_max_q);
    let direct = (dim / qdim) * m;
    if direct.is_finite() && qdim.is_finite() && m.is_finite() {
        direct
    } else {
        math::exp(log_dim - log_qdim + log_max_q)
    }
}

/// Rows `n max(||Q||, ||Q^{-1}||) / d` for labels up to `kmax`; the verdict
/// is empirical divergence past `threshold`.
pub fn cb_obstruction_scan(model: &QGModel, kmax: u64, threshold: f64) -> Result<CbObstructionScan> {
    let mut rows = Vec::new();
    for label in model.labels(kmax) {
        let s = model.scalars(label)?;
        let log_max = s.log_norm_q.max(s.log_norm_qinv);
        rows.push(CbObstructionRow {
            label,
            dim: s.dim,
            qdim: s.qdim,
            max_q: math::exp(log_max),
            value: obstruction_value(s.dim, s.qdim, log_max, s.log_dim, s.log_qdim),
        });
    }
    let values: Vec<f64> = rows.iter().map(|r| r.value).collect();
    let verdict = match first_monotone_exceedance(&values, threshold) {
        Some(i) => ScanVerdict::Diverges { witness: rows[i].label },
        None => {
            let i = (0..values.len()).fold(0, |b, i| if values[i] > values[b] { i } else { b });
            ScanVerdict::Bounded {
                sup: values[i],
                witness: rows[i].label,
            }
        }
    };
    Ok(CbObstructionScan { rows, verdict })
}

/// Diagonals of `(id (x) h)(V V^*) = (n/d) Q^{-1}` and
/// `(id (x) h)(V^* V) = (n/d) Q`, with the bound
/// `||V||^2 >= n max(||Q||, ||Q^{-1}||) / d`.
#[derive(Debug, Clone, PartialEq)]
pub struct VMoments {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub lower_bound: f64,
}

pub fn v_block_moments(label: Label, model: &QGModel) -> Result<VMoments> {
    let irrep = model.irrep(label)?;
    let c = irrep.dim() as f64 / irrep.qdim;
    let left: Vec<f64> = irrep.qdiag.iter().map(|q| c * (1.0 / q)).collect();
    let right: Vec<f64> = irrep.qdiag.iter().map(|q| c * q).collect();
    // same evaluation as the obstruction scan, so both agree bit for bit
    let s = model.scalars(label)?;
    let log_max = s.log_norm_q.max(s.log_norm_qinv);
    Ok(VMoments {
        left,
        right,
        lower_bound: obstruction_value(s.dim, s.qdim, log_max, s.log_dim, s.log_qdim),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_complex::Complex64;

    fn model() -> QGModel {
        QGModel::generic(vec![
            (Label(0), vec![1.0], Some(0)),
            (Label(1), vec![2.0, 0.5], Some(1)),
        ])
        .unwrap()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn single(p: CMatrix, m: CMatrix) -> FunctionalRep {
        FunctionalRep::new([(Label(1), p)].into(), [(Label(1), m)].into())
    }

    #[test]
    fn from_element_examples() {
        let m = model();
        let a = DualElement::single(Label(1), CMatrix::unit(2, 0, 0));
        let f = from_element(&a, &m).unwrap();
        let p = &f.p[&Label(1)];
        assert_eq!(p[(0, 0)], c(4.0));
        assert_eq!(p.max_abs_diff(&CMatrix::unit(2, 0, 0).scale(c(4.0))), 0.0);
        assert!(from_element(&DualElement::new(), &m).unwrap().is_zero());
        let kac = QGModel::generic(vec![(Label(1), vec![1.0, 1.0], None)]).unwrap();
        assert_eq!(from_element(&a, &kac).unwrap().p[&Label(1)][(0, 0)], c(1.0));
    }

    #[test]
    fn from_element_matches_orthogonality() {
        // phi(u_ij) = h(u_ij a^*) with a = sum c_ab u_ab, c_ab = d Q_aa a^_ba
        use crate::modular::{haar_adjoint_first, haar_adjoint_second};
        let m = model();
        let irrep = m.irrep(Label(1)).unwrap();
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 1)] = Complex64::new(0.3, -0.2);
        a[(1, 1)] = Complex64::new(-1.1, 0.4);
        a[(1, 0)] = Complex64::new(0.5, 0.9);
        let ahat = DualElement::single(Label(1), a.clone());
        let f = from_element(&ahat, &m).unwrap();
        let coeff = |x: usize, y: usize| a[(y, x)] * irrep.qdiag[x] * irrep.qdim;
        for i in 0..2 {
            for j in 0..2 {
                let mut pv = c(0.0);
                let mut mv = c(0.0);
                for x in 0..2 {
                    for y in 0..2 {
                        pv += coeff(x, y).conj() * haar_adjoint_second(&irrep, (i, j), (x, y));
                        mv += coeff(x, y) * haar_adjoint_first(&irrep, (i, j), (x, y));
                    }
                }
                assert!((f.p[&Label(1)][(i, j)] - pv).norm() < 1e-14);
                assert!((f.m[&Label(1)][(i, j)] - mv).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn convolution_examples() {
        let id = single(CMatrix::identity(2), CMatrix::identity(2));
        assert_eq!(convolve(&id, &id), id);
        let a = single(CMatrix::unit(2, 0, 1), CMatrix::identity(2));
        let b = single(CMatrix::unit(2, 1, 0), CMatrix::identity(2));
        assert_eq!(convolve(&a, &b).p[&Label(1)], CMatrix::unit(2, 0, 0));
        let h = haar_state(&model());
        assert!(convolve(&a, &h).is_zero());
    }

    #[test]
    fn pi_x_examples() {
        let m = model();
        let f = single(CMatrix::unit(2, 1, 0), CMatrix::zeros(2, 2));
        let p = pi_x(&f, 1.0, &m).unwrap();
        assert!((p.get(Label(1)).unwrap()[(1, 0)] - c(0.5)).norm() < 1e-15);
        assert_eq!(pi_x(&f, 0.0, &m).unwrap().get(Label(1)).unwrap(), &f.p[&Label(1)]);
        let kac = QGModel::generic(vec![(Label(1), vec![1.0, 1.0], None)]).unwrap();
        assert_eq!(pi_x(&f, 3.0, &kac).unwrap().get(Label(1)).unwrap(), &f.p[&Label(1)]);
    }

    #[test]
    fn antipode_examples() {
        let m = model();
        assert!(antipode_relation_check(&haar_state(&m), &m).unwrap().pass);
        let a = DualElement::single(Label(1), CMatrix::unit(2, 0, 0));
        let f = from_element(&a, &m).unwrap();
        assert!(antipode_relation_check(&f, &m).unwrap().pass);
        // standard Fourier data recovers a^
        assert_eq!(standard_fourier(&f), a);
    }

    #[test]
    fn antipode_squared_conjugates_by_q() {
        // S^2(u_ij) = Q_ii Q_jj^{-1} u_ij
        let m = QGModel::suq2(0.5).unwrap();
        let irrep = m.irrep(Label(2)).unwrap();
        let mut p = CMatrix::zeros(3, 3);
        let mut mm = CMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                p[(i, j)] = Complex64::new(i as f64 + 1.0, j as f64 - 0.5);
                mm[(i, j)] = Complex64::new(j as f64 * 0.3, 1.0 - i as f64);
            }
        }
        let phi = FunctionalRep::new([(Label(2), p.clone())].into(), [(Label(2), mm)].into());
        let twice = pullback_antipode(&pullback_antipode(&phi, &m).unwrap(), &m).unwrap();
        let expected = p.scale_rows_cols(&irrep.qdiag, &irrep.qpow(-1.0));
        assert!(twice.p[&Label(2)].max_abs_diff(&expected) < 1e-13);
    }

    #[test]
    fn obstruction_examples() {
        let q = QGModel::suq2(0.5).unwrap();
        let scan = cb_obstruction_scan(&q, 20, 1e3).unwrap();
        assert_eq!(scan.rows.len(), 21);
        assert!(math::rel_eq(scan.rows[2].value, 16.0 / 7.0, 1e-12));
        let v = v_block_moments(Label(2), &q).unwrap();
        assert_eq!(v.lower_bound, scan.rows[2].value);
        let top = v.left.iter().chain(&v.right).copied().fold(0.0, f64::max);
        assert!(math::rel_eq(v.lower_bound, top, 1e-12));
        let of = QGModel::ofplus(vec![1.0 / 1.05, 1.0, 1.05], 1).unwrap();
        let scan = cb_obstruction_scan(&of, 200, 1e3).unwrap();
        assert!(matches!(scan.verdict, ScanVerdict::Diverges { .. }));
        let kac = QGModel::ofplus(vec![1.0, 1.0, 1.0], 1).unwrap();
        let scan = cb_obstruction_scan(&kac, 200, 1e3).unwrap();
        assert!(matches!(scan.verdict, ScanVerdict::Bounded { .. }));
    }

    #[test]
    fn v_moments_example() {
        let v = v_block_moments(Label(1), &model()).unwrap();
        assert!((v.left[0] - 0.4).abs() < 1e-15 && (v.left[1] - 1.6).abs() < 1e-15);
        assert!((v.right[0] - 1.6).abs() < 1e-15 && (v.right[1] - 0.4).abs() < 1e-15);
        assert!((v.lower_bound - 1.6).abs() < 1e-15);
    }
}
