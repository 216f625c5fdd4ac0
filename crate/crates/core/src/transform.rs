//! Twisted Fourier transforms `F^(x)_p` and their norms.
//!
//! `F^(x)_p(f)(alpha) = Q^{-s} f^(alpha) Q^{s}` with `s = (1/p - 1/2) x`, and
//! the relevant norm is the `l^{p'}` norm of the result.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dual::{dual_weight, haar_inner, l2_norm, lp_norm_dual, DualElement};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::linalg::CMatrix;
use crate::math;
use crate::model::{Label, QGModel};

/// Relative tolerance of the pairing identity.
pub const PAIRING_TOL: f64 = 1e-12;

/// One block of a [`PermElement`]: `sum_i y_i u_{i, tau(i)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PermTerm {
    pub perm: Vec<usize>,
    pub y: Vec<Complex64>,
}

impl PermTerm {
    pub fn new(perm: Vec<usize>, y: Vec<Complex64>) -> Result<Self> {
        if perm.len() != y.len() {
            return Err(Error::InvalidParameter {
                name: "perm",
                reason: alloc::format!("{} indices but {} coefficients", perm.len(), y.len()),
            });
        }
        let mut seen = vec![false; perm.len()];
        for &t in &perm {
            if t >= perm.len() || seen[t] {
                return Err(Error::InvalidParameter {
                    name: "perm",
                    reason: alloc::format!("{perm:?} is not a permutation"),
                });
            }
            seen[t] = true;
        }
        Ok(Self { perm, y })
    }
}

/// `f = sum_alpha sum_i y^alpha_i u^alpha_{i, tau_alpha(i)}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PermElement {
    terms: BTreeMap<Label, PermTerm>,
}

impl PermElement {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, label: Label, term: PermTerm) {
        self.terms.insert(label, term);
    }

    pub fn terms(&self) -> impl Iterator<Item = (Label, &PermTerm)> {
        self.terms.iter().map(|(l, t)| (*l, t))
    }

    /// The single matrix element `c u^alpha_{ij}` on an `n`-dimensional block.
    pub fn matrix_element(label: Label, n: usize, i: usize, j: usize, c: Complex64) -> Result<Self> {
        if i >= n || j >= n {
            return Err(Error::IndexOutOfRange {
                label: label.0,
                index: i.max(j),
                dim: n,
            });
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, j);
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        y[i] = c;
        let mut e = Self::new();
        e.insert(label, PermTerm::new(perm, y)?);
        Ok(e)
    }
}

/// `f^(alpha) = sum_i (y_i Q_ii^{-1} / d) E_{tau(i), i}`.
pub fn fourier_of_perm(e: &PermElement, model: &QGModel) -> Result<DualElement> {
    let mut out = DualElement::new();
    for (label, t) in e.terms() {
        let irrep = model.irrep(label)?;
        if t.perm.len() != irrep.dim() {
            return Err(Error::ShapeMismatch {
                label: label.0,
                expected: irrep.dim(),
                found: t.perm.len(),
            });
        }
        let mut m = CMatrix::zeros(irrep.dim(), irrep.dim());
        for (i, (&tau, &y)) in t.perm.iter().zip(&t.y).enumerate() {
            m[(tau, i)] = y / (irrep.qdiag[i] * irrep.qdim);
        }
        out.insert(label, m);
    }
    Ok(out)
}

/// Block conjugation `Q^{-s} A Q^{s}` for real `s`.
pub fn conjugate_by_q(a: &DualElement, s: f64, model: &QGModel) -> Result<DualElement> {
    let pairs = a.with_irreps(model)?;
    Ok(DualElement::from_blocks(pairs.into_iter().map(|(m, irrep)| {
        (irrep.label, m.scale_rows_cols(&irrep.qpow(-s), &irrep.qpow(s)))
    })))
}

/// `F^(x)_p` applied to Fourier data.
pub fn twist_forward(a: &DualElement, p: Exponent, x: f64, model: &QGModel) -> Result<DualElement> {
    conjugate_by_q(a, p.twist() * x, model)
}

/// Inverse of [`twist_forward`].
pub fn twist_inverse(a: &DualElement, p: Exponent, x: f64, model: &QGModel) -> Result<DualElement> {
    conjugate_by_q(a, -p.twist() * x, model)
}

/// `||F^(x)_p(f)||_{l^{p'}}` computed from the transformed blocks.
pub fn twisted_norm(a: &DualElement, p: Exponent, x: f64, model: &QGModel) -> Result<f64> {
    lp_norm_dual(&twist_forward(a, p, x, model)?, p.conjugate(), model)
}

/// Closed form of [`twisted_norm`] for permutation elements.
///
/// With `b_i = Q_{tau(i) tau(i)}^{-1} Q_ii`:
/// `sup b_i^{x/2} (Q_ii^{-1}/d) |y_i|` at `p = 1`, and
/// `(sum b_i^{(p'/2 - 1) x} (Q_ii^{-1}/d)^{p'-1} |y_i|^{p'})^{1/p'}` otherwise.
pub fn closed_form_perm_norm(e: &PermElement, p: Exponent, x: f64, model: &QGModel) -> Result<f64> {
    let conj = p.conjugate();
    let mut sup: f64 = 0.0;
    let mut sum = 0.0;
    for (label, t) in e.terms() {
        let irrep = model.irrep(label)?;
        if t.perm.len() != irrep.dim() {
            return Err(Error::ShapeMismatch {
                label: label.0,
                expected: irrep.dim(),
                found: t.perm.len(),
            });
        }
        for (i, (&tau, &y)) in t.perm.iter().zip(&t.y).enumerate() {
            let ay = math::cabs(y);
            if ay == 0.0 {
                continue;
            }
            let bracket = irrep.qdiag[i] / irrep.qdiag[tau];
            let w = 1.0 / (irrep.qdiag[i] * irrep.qdim);
            match conj {
                Exponent::Infinity => {
                    sup = sup.max(math::powf(bracket, 0.5 * x) * w * ay);
                }
                Exponent::Finite(pc) => {
                    sum += math::powf(bracket, (0.5 * pc - 1.0) * x) * math::powf(w, pc - 1.0) * math::powf(ay, pc);
                }
            }
        }
    }
    Ok(match conj {
        Exponent::Infinity => sup,
        Exponent::Finite(1.0) => sum,
        Exponent::Finite(pc) => math::powf(sum, 1.0 / pc),
    })
}

/// Both sides of `h^(F^(x)_{p'}(f)^* F^(x)_p(g)) = h(f^* g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// Magnitude the discrepancy is measured against.
    pub scale: f64,
    pub pass: bool,
}

/// Checks the duality pairing. The discrepancy is measured relative to
/// `max(|lhs|, |rhs|, ||f||_2 ||g||_2)` so that nearly orthogonal pairs do
/// not fail on cancellation noise.
pub fn pairing_check(
    fhat: &DualElement,
    ghat: &DualElement,
    p: Exponent,
    x: f64,
    model: &QGModel,
) -> Result<PairingReport> {
    let tf = twist_forward(fhat, p.conjugate(), x, model)?;
    let tg = twist_forward(ghat, p, x, model)?;
    let mut prod = DualElement::new();
    for (l, a) in tf.blocks() {
        if let Some(b) = tg.get(l) {
            prod.insert(l, a.adjoint().matmul(b));
        }
    }
    let lhs = dual_weight(&prod, model)?;
    let rhs = haar_inner(fhat, ghat, model)?;
    let scale = lhs
        .norm()
        .max(rhs.norm())
        .max(l2_norm(fhat, model)? * l2_norm(ghat, model)?);
    let pass = (lhs - rhs).norm() <= PAIRING_TOL * scale;
    Ok(PairingReport { lhs, rhs, scale, pass })
}

/// Largest [`twisted_norm`] over a grid of twists and the first `x`
/// attaining it.
pub fn inequality_lhs_sup(a: &DualElement, p: Exponent, xgrid: &[f64], model: &QGModel) -> Result<(f64, f64)> {
    if xgrid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "xgrid",
            reason: "empty grid".into(),
        });
    }
    let mut best = (f64::NEG_INFINITY, xgrid[0]);
    for &x in xgrid {
        let v = twisted_norm(a, p, x, model)?;
        if v > best.0 {
            best = (v, x);
        }
    }
    Ok(best)
}

/// `n + 1` equispaced points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 0 {
        return vec![a];
    }
    (0..=n)
        .map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 })
        .collect()
}

/// Default twist grid: 33 points on `[0, 1]`.
pub fn default_xgrid() -> Vec<f64> {
    linspace(0.0, 1.0, 32)
}

/// `sum_k x_k (-c^*)^k` in `SU_q(2)`, i.e. `q^{-k} x_k u^(k)_{0k}`.
pub fn suq2_corner_element(q: f64, coeffs: &[(u64, Complex64)]) -> Result<PermElement> {
    let mut e = PermElement::new();
    for &(k, xk) in coeffs {
        let n = k as usize + 1;
        let scaled = xk * math::powf(q, -(k as f64));
        let single = PermElement::matrix_element(Label(k), n, 0, k as usize, scaled)?;
        for (l, t) in single.terms() {
            e.insert(l, t.clone());
        }
    }
    Ok(e)
}

/// The two sides `(1 - q^2, q^{-k} / d_k)` of the comparison used to pass
/// from the twisted to the classical estimate in `SU_q(2)`.
pub fn suq2_chain_sides(q: f64, k: u64) -> (f64, f64) {
    let e = (k + 1) as f64;
    // q^{-k} / d_k = (1 - q^2) / (1 - q^{2k+2})
    let rhs = (1.0 - q * q) / (1.0 - math::powf(q, 2.0 * e));
    (1.0 - q * q, rhs)
}
