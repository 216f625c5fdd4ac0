//! Finitely supported elements of the dual and their weighted norms.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::linalg::{schatten_from_singular_values, schatten_power, CMatrix};
use crate::math;
use crate::model::{Irrep, Label, QGModel};

/// A finitely supported family of square blocks `A(alpha)`.
///
/// Used for Fourier coefficients `f^` as well as for transform outputs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DualElement {
    blocks: BTreeMap<Label, CMatrix>,
}

impl DualElement {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_blocks(blocks: impl IntoIterator<Item = (Label, CMatrix)>) -> Self {
        Self {
            blocks: blocks.into_iter().collect(),
        }
    }

    /// Single-block element.
    pub fn single(label: Label, block: CMatrix) -> Self {
        Self::from_blocks([(label, block)])
    }

    /// Fourier coefficients of the matrix element `u^alpha_{ij}`:
    /// `(Q_ii^{-1} / d) E_{ji}`.
    pub fn matrix_element(model: &QGModel, label: Label, i: usize, j: usize) -> Result<Self> {
        let irrep = model.irrep(label)?;
        irrep.check_index(i)?;
        irrep.check_index(j)?;
        let c = 1.0 / (irrep.qdiag[i] * irrep.qdim);
        Ok(Self::single(
            label,
            CMatrix::unit(irrep.dim(), j, i).scale(Complex64::new(c, 0.0)),
        ))
    }

    pub fn insert(&mut self, label: Label, block: CMatrix) -> Option<CMatrix> {
        self.blocks.insert(label, block)
    }

    pub fn get(&self, label: Label) -> Option<&CMatrix> {
        self.blocks.get(&label)
    }

    pub fn blocks(&self) -> impl Iterator<Item = (Label, &CMatrix)> {
        self.blocks.iter().map(|(l, m)| (*l, m))
    }

    pub fn support(&self) -> Vec<Label> {
        self.blocks.keys().copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(CMatrix::is_zero)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_blocks(self.blocks().map(|(l, m)| (l, m.scale(c))))
    }

    /// Blockwise sum; labels present in only one summand are copied.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (l, m) in other.blocks() {
            let sum = match out.blocks.get(&l) {
                Some(a) => a.add(m),
                None => m.clone(),
            };
            out.blocks.insert(l, sum);
        }
        out
    }

    /// Applies `f` to every block.
    pub fn map_blocks(&self, mut f: impl FnMut(Label, &CMatrix) -> CMatrix) -> Self {
        Self::from_blocks(self.blocks().map(|(l, m)| (l, f(l, m))))
    }

    /// Largest entrywise difference over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (l, a) in self.blocks() {
            worst = worst.max(match other.get(l) {
                Some(b) => a.max_abs_diff(b),
                None => a.max_abs(),
            });
        }
        for (l, b) in other.blocks() {
            if self.get(l).is_none() {
                worst = worst.max(b.max_abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.values().map(CMatrix::max_abs).fold(0.0, f64::max)
    }

    /// Pairs every block with its irrep, checking shapes.
    pub fn with_irreps<'a>(&'a self, model: &QGModel) -> Result<Vec<(&'a CMatrix, Irrep)>> {
        self.blocks()
            .map(|(l, m)| {
                let irrep = model.irrep(l)?;
                check_block(&irrep, m)?;
                Ok((m, irrep))
            })
            .collect()
    }
}

pub(crate) fn check_block(irrep: &Irrep, m: &CMatrix) -> Result<()> {
    let n = irrep.dim();
    if m.rows() != n || m.cols() != n {
        return Err(Error::ShapeMismatch {
            label: irrep.label.0,
            expected: n,
            found: if m.rows() != n { m.rows() } else { m.cols() },
        });
    }
    Ok(())
}

/// Diagonal of `D(alpha) = (d_alpha / n_alpha) Q_alpha`.
pub fn d_operator(irrep: &Irrep) -> Vec<f64> {
    let c = irrep.qdim / irrep.dim() as f64;
    irrep.qdiag.iter().map(|q| c * q).collect()
}

/// Dual Haar weight `sum_alpha d_alpha Tr(A(alpha) Q_alpha)`, evaluated as a
/// linear functional on any finitely supported `A`.
pub fn dual_weight(a: &DualElement, model: &QGModel) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for (m, irrep) in a.with_irreps(model)? {
        let tr: Complex64 = (0..irrep.dim()).map(|i| m[(i, i)] * irrep.qdiag[i]).sum();
        total += tr * irrep.qdim;
    }
    Ok(total)
}

/// `(sum_alpha d_alpha ||A(alpha) Q_alpha^{1/p}||_{S^p}^p)^{1/p}`, or
/// `sup_alpha ||A(alpha)||_op` at `p = inf`.
pub fn lp_norm_dual(a: &DualElement, p: Exponent, model: &QGModel) -> Result<f64> {
    let pairs = a.with_irreps(model)?;
    match p {
        Exponent::Infinity => Ok(pairs
            .iter()
            .map(|(m, _)| schatten_from_singular_values(&m.singular_values(), p))
            .fold(0.0, f64::max)),
        Exponent::Finite(pv) => {
            let mut total = 0.0;
            for (m, irrep) in &pairs {
                let weighted = m.scale_cols(&irrep.qpow(1.0 / pv));
                total += irrep.qdim * schatten_power(&weighted.singular_values(), pv);
            }
            Ok(if pv == 1.0 { total } else { math::powf(total, 1.0 / pv) })
        }
    }
}

/// `h(f^* g) = sum_alpha d_alpha Tr(f^(alpha)^* g^(alpha) Q_alpha)`;
/// conjugate-linear in the first argument.
pub fn haar_inner(fhat: &DualElement, ghat: &DualElement, model: &QGModel) -> Result<Complex64> {
    let f = fhat.with_irreps(model)?;
    let mut total = Complex64::new(0.0, 0.0);
    for (fm, irrep) in f {
        let Some(gm) = ghat.get(irrep.label) else {
            continue;
        };
        check_block(&irrep, gm)?;
        let n = irrep.dim();
        let mut tr = Complex64::new(0.0, 0.0);
        for r in 0..n {
            for c in 0..n {
                tr += fm[(r, c)].conj() * gm[(r, c)] * irrep.qdiag[c];
            }
        }
        total += tr * irrep.qdim;
    }
    // blocks of g outside the support of f still need a shape check
    for (l, gm) in ghat.blocks() {
        if fhat.get(l).is_none() {
            check_block(&model.irrep(l)?, gm)?;
        }
    }
    Ok(total)
}

/// `||f||_{L^2}` through `h(f^* f)`.
pub fn l2_norm(fhat: &DualElement, model: &QGModel) -> Result<f64> {
    Ok(math::sqrt(haar_inner(fhat, fhat, model)?.re.max(0.0)))
}

/// `||f||_{L^2}` through the weighted `l^2` norm of `f^` (Plancherel).
pub fn l2_norm_via_lp(fhat: &DualElement, model: &QGModel) -> Result<f64> {
    lp_norm_dual(fhat, Exponent::TWO, model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

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

    #[test]
    fn dual_weight_examples() {
        let m = model();
        let e00 = DualElement::single(Label(1), CMatrix::unit(2, 0, 0));
        assert_eq!(dual_weight(&e00, &m).unwrap(), c(5.0));
        assert_eq!(dual_weight(&DualElement::new(), &m).unwrap(), c(0.0));
        let qinv = DualElement::single(Label(1), CMatrix::from_diag(&[0.5, 2.0]));
        assert_eq!(dual_weight(&qinv, &m).unwrap(), c(5.0));
    }

    #[test]
    fn lp_norm_examples() {
        let m = model();
        let e00 = DualElement::single(Label(1), CMatrix::unit(2, 0, 0));
        let l2 = lp_norm_dual(&e00, Exponent::TWO, &m).unwrap();
        assert!((l2 - 5f64.sqrt()).abs() < 1e-14);
        assert!((lp_norm_dual(&e00, Exponent::Infinity, &m).unwrap() - 1.0).abs() < 1e-15);
        assert!((lp_norm_dual(&e00, Exponent::ONE, &m).unwrap() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn haar_inner_examples() {
        let m = model();
        let f = DualElement::matrix_element(&m, Label(1), 0, 1).unwrap();
        assert_eq!(f.get(Label(1)).unwrap()[(1, 0)], c(0.2));
        let v = haar_inner(&f, &f, &m).unwrap();
        assert!((v.re - 0.2).abs() < 1e-15 && v.im == 0.0);
        let g = DualElement::single(Label(0), CMatrix::identity(1));
        assert_eq!(haar_inner(&f, &g, &m).unwrap(), c(0.0));
        let id = DualElement::single(Label(1), CMatrix::identity(2));
        assert!((haar_inner(&id, &id, &m).unwrap().re - 6.25).abs() < 1e-14);
    }

    #[test]
    fn l2_routes_and_homogeneity() {
        let m = model();
        let f = DualElement::matrix_element(&m, Label(1), 0, 1).unwrap();
        let a = l2_norm(&f, &m).unwrap();
        assert!((a - 0.2f64.sqrt()).abs() < 1e-15);
        assert!(math::rel_eq(a, l2_norm_via_lp(&f, &m).unwrap(), 1e-12));
        assert!(math::rel_eq(l2_norm(&f.scale(c(3.0)), &m).unwrap(), 3.0 * a, 1e-15));
        assert_eq!(l2_norm(&DualElement::new(), &m).unwrap(), 0.0);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let m = model();
        let bad = DualElement::single(Label(1), CMatrix::identity(3));
        assert!(matches!(dual_weight(&bad, &m), Err(Error::ShapeMismatch { .. })));
        assert!(matches!(
            haar_inner(&DualElement::new(), &bad, &m),
            Err(Error::ShapeMismatch { .. })
        ));
    }
}
