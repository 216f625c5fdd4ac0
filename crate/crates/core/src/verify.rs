//! Computable consequences of the twisted Hausdorff-Young and rapid decay
//! inequalities.
//!
//! `L^p(G)` norms for `p != 2` are out of reach, so each check replaces the
//! uncomputable side by its `L^2` comparison: `||f||_p <= ||f||_2` for
//! `p <= 2` and `||f||_{p'} >= ||f||_2` for `p' >= 2`. A failure therefore
//! signals an implementation defect, never a counterexample.

use alloc::vec::Vec;

use crate::dual::{l2_norm, lp_norm_dual, DualElement};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::math;
use crate::model::{Irrep, Label, QGModel};
use crate::transform::{inequality_lhs_sup, twist_forward, twisted_norm};

/// Slack factor for inequality checks, relative to the larger side.
pub const INEQUALITY_SLACK: f64 = 1e-10;
/// Default label depth of divergence searches.
pub const DEFAULT_DEPTH: u64 = 200;

/// Which uncomputable side a check replaced by an `L^2` norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Substitution {
    /// `||f||_{L^p}` replaced by the larger `||f||_{L^2}` (`p <= 2`).
    LpByL2Above,
    /// `||f||_{L^{p'}}` replaced by the smaller `||f||_{L^2}` (`p' >= 2`).
    LpConjByL2Below,
}

impl Substitution {
    pub fn describe(self) -> &'static str {
        match self {
            Substitution::LpByL2Above => "rhs ||f||_p replaced by ||f||_2 (p <= 2)",
            Substitution::LpConjByL2Below => "lhs ||f||_p' replaced by ||f||_2 (p' >= 2)",
        }
    }
}

/// Outcome of one inequality check `lhs <= rhs + slack`.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub p: Exponent,
    /// Twist attaining the reported value (the grid argmax or argmin).
    pub x: Option<f64>,
    pub labels: Vec<Label>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
    pub substitution: Option<Substitution>,
    /// Extra quantitative data, e.g. the support factor of the RD check.
    pub witness: Option<(&'static str, f64)>,
}

impl CheckReport {
    fn inequality(name: &'static str, p: Exponent, lhs: f64, rhs: f64) -> Self {
        let slack = INEQUALITY_SLACK * math::abs(lhs).max(math::abs(rhs));
        Self {
            name,
            p,
            x: None,
            labels: Vec::new(),
            lhs,
            rhs,
            slack,
            pass: lhs <= rhs + slack,
            substitution: None,
            witness: None,
        }
    }
}

fn require_at_most_two(p: Exponent) -> Result<()> {
    if p.at_most_two() {
        Ok(())
    } else {
        Err(Error::InvalidExponent(p.value()))
    }
}

fn require_unit_grid(xgrid: &[f64]) -> Result<()> {
    if xgrid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "xgrid",
            reason: "empty grid".into(),
        });
    }
    if let Some(x) = xgrid.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::InvalidParameter {
            name: "xgrid",
            reason: alloc::format!("{x} lies outside [0, 1]"),
        });
    }
    Ok(())
}

/// `sup_x ||F^(x)_p(f)||_{l^{p'}} <= ||f||_2` over a grid in `[0, 1]`.
pub fn check_strong_hy_cap(fhat: &DualElement, p: Exponent, xgrid: &[f64], model: &QGModel) -> Result<CheckReport> {
    require_at_most_two(p)?;
    require_unit_grid(xgrid)?;
    let (lhs, x) = inequality_lhs_sup(fhat, p, xgrid, model)?;
    let mut r = CheckReport::inequality("strong-hy-cap", p, lhs, l2_norm(fhat, model)?);
    r.x = Some(x);
    r.labels = fhat.support();
    r.substitution = Some(Substitution::LpByL2Above);
    Ok(r)
}

/// `||g||_2 <= ||F^(x)_{p'}(g)||_{l^p}` for every `x` of a grid in `[0, 1]`;
/// the report carries the smallest right side and where it occurs.
pub fn check_dual_hy_cap(ghat: &DualElement, p: Exponent, xgrid: &[f64], model: &QGModel) -> Result<CheckReport> {
    require_at_most_two(p)?;
    require_unit_grid(xgrid)?;
    let conj = p.conjugate();
    let mut best = (f64::INFINITY, xgrid[0]);
    for &x in xgrid {
        let v = lp_norm_dual(&twist_forward(ghat, conj, x, model)?, p, model)?;
        if v < best.0 {
            best = (v, x);
        }
    }
    let mut r = CheckReport::inequality("dual-hy-cap", p, l2_norm(ghat, model)?, best.0);
    r.x = Some(best.1);
    r.labels = ghat.support();
    r.substitution = Some(Substitution::LpConjByL2Below);
    Ok(r)
}

/// `||f||_2 <= (sum_{supp} n^2)^{1/p - 1/2} ||D^{sx} f^ D^{s(1-x)}||_{l^2}`
/// with `s = 1/p - 1/2` and `D = (d/n) Q`, for `x` in `[0, 1]`.
pub fn check_twisted_rd(fhat: &DualElement, p: Exponent, x: f64, model: &QGModel) -> Result<CheckReport> {
    require_at_most_two(p)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter {
            name: "x",
            reason: alloc::format!("{x} lies outside [0, 1]"),
        });
    }
    let s = p.twist();
    let mut support = 0.0;
    let mut weighted = DualElement::new();
    for (m, irrep) in fhat.with_irreps(model)? {
        let n = irrep.dim() as f64;
        support += n * n;
        let d = crate::dual::d_operator(&irrep);
        let left: Vec<f64> = d.iter().map(|v| math::powf(*v, s * x)).collect();
        let right: Vec<f64> = d.iter().map(|v| math::powf(*v, s * (1.0 - x))).collect();
        weighted.insert(irrep.label, m.scale_rows_cols(&left, &right));
    }
    let factor = if support == 0.0 { 1.0 } else { math::powf(support, s) };
    let rhs = factor * lp_norm_dual(&weighted, Exponent::TWO, model)?;
    let mut r = CheckReport::inequality("twisted-rd", p, l2_norm(fhat, model)?, rhs);
    r.x = Some(x);
    r.labels = fhat.support();
    r.substitution = Some(Substitution::LpConjByL2Below);
    r.witness = Some(("support_n2", support));
    Ok(r)
}

/// `(k, sum_{|alpha| = k} n_alpha^2)` for `k = 0..=kmax`.
pub fn rd_growth_data(model: &QGModel, kmax: u64) -> Result<Vec<(u64, f64)>> {
    let labels = model.labels_of_length_at_most(kmax)?;
    let mut out: Vec<(u64, f64)> = (0..=kmax).map(|k| (k, 0.0)).collect();
    for l in labels {
        let k = model.length(l)?;
        let n = model.scalars(l)?.dim;
        out[k as usize].1 += n * n;
    }
    Ok(out)
}

/// Labels with their lower-bound ratios, up to the first exceedance.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceWitness {
    pub rows: Vec<(Label, f64)>,
    /// First label whose ratio is strictly greater than the threshold.
    pub first: Option<Label>,
}

/// `e(x) = x` for `x > 0`, `1 - x` otherwise.
fn divergence_exponent(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        1.0 - x
    }
}

/// Log of `[||Q|| ||Q^{-1}||]^{(1/2 - 1/p) e(x)}`.
fn log_divergence_ratio(log_nq: f64, log_nqinv: f64, p: Exponent, x: f64) -> f64 {
    -p.twist() * divergence_exponent(x) * (log_nq + log_nqinv)
}

/// Lower bounds on the norm of `F^(x)_p` restricted to single labels, for
/// `p > 2`, scanned until one exceeds `threshold` (strictly).
pub fn divergence_witness(
    model: &QGModel,
    p: Exponent,
    x: f64,
    threshold: f64,
    depth: u64,
) -> Result<DivergenceWitness> {
    if p.at_most_two() {
        return Err(Error::InvalidExponent(p.value()));
    }
    if model.is_kac() {
        return Err(Error::KacModel);
    }
    let log_t = math::ln(threshold);
    let mut rows = Vec::new();
    for label in model.labels(depth) {
        let s = model.scalars(label)?;
        let lr = log_divergence_ratio(s.log_norm_q, s.log_norm_qinv, p, x);
        rows.push((label, math::exp(lr)));
        if lr > log_t {
            return Ok(DivergenceWitness {
                rows,
                first: Some(label),
            });
        }
    }
    Ok(DivergenceWitness { rows, first: None })
}

fn argmax(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |b, i| if v[i] > v[b] { i } else { b })
}

fn argmin(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |b, i| if v[i] < v[b] { i } else { b })
}

/// The divergence ratio recomputed from a matrix element of a full block:
/// `||F^(x)_p(u_ij)||_{l^{p'}} / ((Q_ii^{-1}/d)^{1/p} B^{1 - 2/p})`, where
/// for `x > 0` the indices satisfy `Q_jj = ||Q||`, `Q_ii^{-1} = ||Q^{-1}||`,
/// `B = 1`, and for `x <= 0` `Q_jj^{-1} = ||Q^{-1}||`, `Q_ii = ||Q||`,
/// `B = (Q_ii^{-1} Q_jj)^{1/2}`.
pub fn divergence_direct_ratio(irrep: &Irrep, model: &QGModel, p: Exponent, x: f64) -> Result<f64> {
    let (imax, imin) = (argmax(&irrep.qdiag), argmin(&irrep.qdiag));
    let (i, j, b) = if x > 0.0 {
        (imin, imax, 1.0)
    } else {
        let b = math::sqrt(irrep.qdiag[imin] / irrep.qdiag[imax]);
        (imax, imin, b)
    };
    let f = DualElement::matrix_element(model, irrep.label, i, j)?;
    let num = twisted_norm(&f, p, x, model)?;
    let base = 1.0 / (irrep.qdiag[i] * irrep.qdim);
    let den = math::powf(base, p.recip()) * math::powf(b, 1.0 - 2.0 * p.recip());
    Ok(num / den)
}

/// `(n ||Q^{-1}|| / d)^{s} [||Q|| ||Q^{-1}||]^{s max(-x, x - 1)}` with
/// `s = 1/p - 1/2`, for `p` in `[1, 2)`.
pub fn w_lower_bound(label: Label, p: Exponent, x: f64, model: &QGModel) -> Result<f64> {
    if !p.below_two() {
        return Err(Error::InvalidExponent(p.value()));
    }
    let sc = model.scalars(label)?;
    let s = p.twist();
    let e = (-x).max(x - 1.0);
    let log = s * (sc.log_dim + sc.log_norm_qinv - sc.log_qdim) + s * e * (sc.log_norm_q + sc.log_norm_qinv);
    Ok(math::exp(log))
}

/// The same bound from matrix elements: the larger of
/// `||u_ij||_2 / ||D^{sx} u_ij^ D^{s(1-x)}||_{l^2}` over the index choices
/// `(Q_ii, Q_jj) = (min, max)` and `(max, min)`.
pub fn w_direct_ratio(irrep: &Irrep, model: &QGModel, p: Exponent, x: f64) -> Result<f64> {
    let s = p.twist();
    let (imax, imin) = (argmax(&irrep.qdiag), argmin(&irrep.qdiag));
    let d = crate::dual::d_operator(irrep);
    let left: Vec<f64> = d.iter().map(|v| math::powf(*v, s * x)).collect();
    let right: Vec<f64> = d.iter().map(|v| math::powf(*v, s * (1.0 - x))).collect();
    let mut best: f64 = 0.0;
    for (i, j) in [(imin, imax), (imax, imin)] {
        let f = DualElement::matrix_element(model, irrep.label, i, j)?;
        let w = f.map_blocks(|_, m| m.scale_rows_cols(&left, &right));
        best = best.max(l2_norm(&f, model)? / lp_norm_dual(&w, Exponent::TWO, model)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{fourier_of_perm, PermElement};
    use alloc::vec;
    use num_complex::Complex64;

    fn model() -> QGModel {
        QGModel::generic(vec![
            (Label(0), vec![1.0], Some(0)),
            (Label(1), vec![2.0, 0.5], Some(1)),
        ])
        .unwrap()
    }

    fn u01(m: &QGModel) -> DualElement {
        let e = PermElement::matrix_element(Label(1), 2, 0, 1, Complex64::new(1.0, 0.0)).unwrap();
        fourier_of_perm(&e, m).unwrap()
    }

    #[test]
    fn strong_cap_example() {
        let m = model();
        let r = check_strong_hy_cap(&u01(&m), Exponent::ONE, &[0.0, 0.5, 1.0], &m).unwrap();
        assert!(r.pass);
        assert!((r.lhs - 0.4).abs() < 1e-15 && (r.rhs - 0.2f64.sqrt()).abs() < 1e-15);
        let z = check_strong_hy_cap(&DualElement::new(), Exponent::ONE, &[0.0], &m).unwrap();
        assert!(z.pass && z.lhs == 0.0 && z.rhs == 0.0);
        assert!(check_strong_hy_cap(&u01(&m), Exponent::finite(4.0).unwrap(), &[0.0], &m).is_err());
        assert!(check_strong_hy_cap(&u01(&m), Exponent::ONE, &[1.5], &m).is_err());
    }

    #[test]
    fn dual_cap_example() {
        let m = model();
        let r = check_dual_hy_cap(&u01(&m), Exponent::ONE, &[1.0], &m).unwrap();
        assert!(r.pass);
        assert!((r.rhs - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rd_example_and_p2_equality() {
        let m = model();
        let r = check_twisted_rd(&u01(&m), Exponent::ONE, 1.0, &m).unwrap();
        assert!(r.pass);
        assert_eq!(r.witness, Some(("support_n2", 4.0)));
        let r = check_twisted_rd(&u01(&m), Exponent::TWO, 0.5, &m).unwrap();
        assert!(r.pass && math::rel_eq(r.lhs, r.rhs, 1e-12));
        assert!(check_twisted_rd(&u01(&m), Exponent::ONE, 1.5, &m).is_err());
    }

    #[test]
    fn growth_data_examples() {
        let q = QGModel::suq2(0.5).unwrap();
        let g = rd_growth_data(&q, 3).unwrap();
        assert_eq!(g[0], (0, 1.0));
        assert_eq!(g[3], (3, 16.0));
        let of = QGModel::ofplus(vec![1.0 / 1.05, 1.0, 1.05], 1).unwrap();
        assert_eq!(rd_growth_data(&of, 4).unwrap()[4], (4, 3025.0));
    }

    #[test]
    fn divergence_examples() {
        let q = QGModel::suq2(0.5).unwrap();
        let p4 = Exponent::finite(4.0).unwrap();
        let w = divergence_witness(&q, p4, 0.0, 1e6, DEFAULT_DEPTH).unwrap();
        assert_eq!(w.first, Some(Label(40)));
        let w = divergence_witness(&q, p4, 1.0, 10.0, DEFAULT_DEPTH).unwrap();
        assert_eq!(w.first, Some(Label(7)));
        let of = QGModel::ofplus(vec![1.0 / 1.05, 1.0, 1.05], 1).unwrap();
        let p3 = Exponent::finite(3.0).unwrap();
        let w = divergence_witness(&of, p3, 0.0, 10.0, DEFAULT_DEPTH).unwrap();
        let k = libm::ceil(math::ln(10.0) / (4.0 * (0.5 - 1.0 / 3.0) * math::ln(1.05)));
        assert_eq!(w.first, Some(Label(k as u64)));
        let kac = QGModel::ofplus(vec![1.0, 1.0], 1).unwrap();
        assert_eq!(divergence_witness(&kac, p4, 0.0, 10.0, 10), Err(Error::KacModel));
    }

    #[test]
    fn direct_ratio_matches_scalar_formula() {
        let q = QGModel::suq2(0.5).unwrap();
        let p = Exponent::finite(3.0).unwrap();
        for k in 1..6 {
            let irrep = q.irrep(Label(k)).unwrap();
            let s = irrep.scalars();
            for x in [-1.0, 0.0, 0.5, 2.0] {
                let direct = divergence_direct_ratio(&irrep, &q, p, x).unwrap();
                let formula = math::exp(log_divergence_ratio(s.log_norm_q, s.log_norm_qinv, p, x));
                assert!(
                    math::rel_eq(direct, formula, 1e-10),
                    "k={k} x={x}: {direct} vs {formula}"
                );
            }
        }
    }

    #[test]
    fn w_bound_examples() {
        let m = model();
        let w0 = w_lower_bound(Label(1), Exponent::ONE, 0.0, &m).unwrap();
        assert!((w0 - 1.6f64.sqrt()).abs() < 1e-14);
        let wh = w_lower_bound(Label(1), Exponent::ONE, 0.5, &m).unwrap();
        assert!((wh - 1.6f64.sqrt() * math::powf(4.0, -0.25)).abs() < 1e-14);
        let kac = QGModel::generic(vec![(Label(0), vec![1.0; 3], None)]).unwrap();
        assert!((w_lower_bound(Label(0), Exponent::ONE, 0.3, &kac).unwrap() - 1.0).abs() < 1e-15);
        let irrep = m.irrep(Label(1)).unwrap();
        for x in [0.0, 0.5, 1.0, -1.0, 2.0] {
            let direct = w_direct_ratio(&irrep, &m, Exponent::ONE, x).unwrap();
            let formula = w_lower_bound(Label(1), Exponent::ONE, x, &m).unwrap();
            assert!(math::rel_eq(direct, formula, 1e-12), "x={x}: {direct} vs {formula}");
        }
    }
}
