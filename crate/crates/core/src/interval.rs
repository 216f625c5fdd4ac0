//! Twist intervals: growth scans and the free orthogonal bounds.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::linalg::{op_norm, CMatrix};
use crate::math;
use crate::model::{Label, ModelKind, QGModel};

/// Values beyond this are treated as diverging by the empirical scans.
pub const DIVERGENCE_CUTOFF: f64 = 1e6;
/// Number of preceding values that must be nondecreasing before a cutoff
/// crossing counts as divergence.
pub const MONOTONE_WINDOW: usize = 8;
/// Candidate labels examined per step of the doubling search.
pub const DOUBLING_SEARCH_LIMIT: u64 = 1 << 16;

/// Finite union of disjoint closed intervals, sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet {
    parts: Vec<(f64, f64)>,
}

impl IntervalSet {
    /// Normalizes the input: drops empty pieces, sorts, merges overlaps.
    pub fn new(mut parts: Vec<(f64, f64)>) -> Self {
        parts.retain(|(a, b)| a <= b);
        parts.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(core::cmp::Ordering::Equal));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(parts.len());
        for (a, b) in parts {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        Self { parts: out }
    }

    pub fn interval(a: f64, b: f64) -> Self {
        Self::new(alloc::vec![(a, b)])
    }

    pub fn parts(&self) -> &[(f64, f64)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.parts.iter().any(|&(a, b)| a <= x && x <= b)
    }

    /// `other` is a subset of `self`.
    pub fn contains_set(&self, other: &IntervalSet) -> bool {
        other
            .parts
            .iter()
            .all(|&(c, d)| self.parts.iter().any(|&(a, b)| a <= c && d <= b))
    }

    /// `other` is a proper subset of `self`.
    pub fn strictly_contains(&self, other: &IntervalSet) -> bool {
        self.contains_set(other) && self != other
    }
}

/// Invariants of a non-Kac free orthogonal quantum group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfInvariants {
    pub d1: f64,
    pub fnorm: f64,
    /// `(d1 + sqrt(d1^2 - 4)) / 2`.
    pub phi_d: f64,
    /// `ln(phi_d) / (2 ln ||F||)`.
    pub r: f64,
}

impl OfInvariants {
    pub fn new(d1: f64, fnorm: f64) -> Result<Self> {
        if !(d1 > 2.0) || !d1.is_finite() {
            return Err(Error::Degenerate(alloc::format!("d1 = {d1} must exceed 2")));
        }
        if !(fnorm > 1.0) || !fnorm.is_finite() {
            return Err(Error::Degenerate(alloc::format!("||F|| = {fnorm} must exceed 1")));
        }
        let phi_d = 0.5 * (d1 + math::sqrt((d1 - 2.0) * (d1 + 2.0)));
        let r = math::ln(phi_d) / (2.0 * math::ln(fnorm));
        Ok(Self { d1, fnorm, phi_d, r })
    }

    /// Invariants read off a model: `d1 = sum lambda_i^2` and
    /// `||F|| = max |lambda_i|` for `O_F^+`; `d1 = q + 1/q` and
    /// `||F|| = q^{-1/2}` for `SU_q(2)`.
    pub fn from_model(model: &QGModel) -> Result<Self> {
        match model.kind() {
            ModelKind::OfPlus { lambdas, .. } => {
                let d1 = lambdas.iter().map(|l| l * l).sum();
                let fnorm = lambdas.iter().map(|l| math::abs(*l)).fold(0.0, f64::max);
                Self::new(d1, fnorm)
            }
            ModelKind::SuQ2 { q } => Self::new(q + 1.0 / q, 1.0 / math::sqrt(*q)),
            ModelKind::Generic => Err(Error::InvalidModel(
                "interval bounds need a free orthogonal or SU_q(2) model".into(),
            )),
        }
    }
}

/// Inner and outer bounds for the set of bounded twists.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalBounds {
    pub inner: IntervalSet,
    pub outer: IntervalSet,
}

/// `inner = [0, 1] u {|2x - 1| <= r - 2}`, `outer = {|2x - 1| <= r}`.
///
/// `r >= 1` holds exactly, but rounding can leave it a few ulps below 1; the
/// outer set is joined with `[0, 1]` so that it always contains the inner one.
pub fn of_interval_bounds(inv: &OfInvariants, p: Exponent) -> Result<IntervalBounds> {
    if !p.below_two() {
        return Err(Error::InvalidExponent(p.value()));
    }
    let r = inv.r;
    let mut inner = alloc::vec![(0.0, 1.0)];
    if r >= 2.0 {
        inner.push((0.5 * (1.0 - (r - 2.0)), 0.5 * (1.0 + (r - 2.0))));
    }
    Ok(IntervalBounds {
        inner: IntervalSet::new(inner),
        outer: IntervalSet::new(alloc::vec![(0.0, 1.0), (0.5 * (1.0 - r), 0.5 * (1.0 + r))]),
    })
}

/// `||F||^6 < phi_d`, with the witness `x = (1 + min(3, (r - 1)/2)) / 2`,
/// which satisfies `1 < |2x - 1| < r - 2` whenever the predicate holds.
pub fn cor_strict_inclusion(inv: &OfInvariants, p: Exponent) -> Result<(bool, Option<f64>)> {
    if !p.below_two() {
        return Err(Error::InvalidExponent(p.value()));
    }
    let pred = libm::pow(inv.fnorm, 6.0) < inv.phi_d;
    let witness = pred.then(|| 0.5 * (1.0 + (0.5 * (inv.r - 1.0)).min(3.0)));
    Ok((pred, witness))
}

/// Both sides of `||Q^{-x/2} f Q^{x/2}||_op <= ||F||^{gamma k} ||f Q^{1/2}||_op`,
/// `gamma = max(|2x - 1|, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainReport {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

pub fn haagerup_chain_check(qdiag: &[f64], fk: &CMatrix, x: f64, fnorm: f64, k: u32) -> Result<ChainReport> {
    if fk.rows() != qdiag.len() || fk.cols() != qdiag.len() {
        return Err(Error::ShapeMismatch {
            label: k as u64,
            expected: qdiag.len(),
            found: fk.rows(),
        });
    }
    if qdiag.iter().any(|q| !(*q > 0.0)) {
        return Err(Error::InadmissibleBlock("non-positive modular entry".into()));
    }
    let nq = qdiag.iter().copied().fold(0.0, f64::max);
    let nqinv = 1.0 / qdiag.iter().copied().fold(f64::INFINITY, f64::min);
    let target = libm::pow(fnorm, 2.0 * k as f64);
    if !math::rel_eq(nq, target, 1e-10) || !math::rel_eq(nqinv, target, 1e-10) {
        return Err(Error::InadmissibleBlock(alloc::format!(
            "||Q|| = {nq}, ||Q^-1|| = {nqinv}, expected {target}"
        )));
    }
    let pw = |t: f64| -> Vec<f64> { qdiag.iter().map(|q| math::powf(*q, t)).collect() };
    let lhs = op_norm(&fk.scale_rows_cols(&pw(-0.5 * x), &pw(0.5 * x)));
    let gamma = math::abs(2.0 * x - 1.0).max(1.0);
    let rhs = math::powf(fnorm, gamma * k as f64) * op_norm(&fk.scale_cols(&pw(0.5)));
    let slack = 1e-10 * lhs.max(rhs);
    Ok(ChainReport {
        lhs,
        rhs,
        pass: lhs <= rhs + slack,
    })
}

/// Index of the first value strictly above `cutoff` that is preceded by a
/// nondecreasing run (up to [`MONOTONE_WINDOW`] values).
pub fn first_monotone_exceedance(values: &[f64], cutoff: f64) -> Option<usize> {
    let i = values.iter().position(|v| *v > cutoff)?;
    let start = i.saturating_sub(MONOTONE_WINDOW);
    values[start..=i].windows(2).all(|w| w[0] <= w[1]).then_some(i)
}

/// Result of a scan over labels.
#[derive(Debug, Clone, PartialEq)]
pub enum ScanVerdict {
    Bounded {
        sup: f64,
        witness: Label,
    },
    /// Empirical: values crossed the cutoff after increasing.
    Diverges {
        witness: Label,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Condition5Scan {
    pub rows: Vec<(Label, f64)>,
    pub verdict: ScanVerdict,
}

/// `n ||Q^{-1}|| / d * [||Q^{-1}|| ||Q||]^{max(-x, x-1)} / n^2` over labels
/// up to `kmax`.
pub fn condition5_scan(model: &QGModel, p: Exponent, x: f64, kmax: u64) -> Result<Condition5Scan> {
    if !p.below_two() {
        return Err(Error::InvalidExponent(p.value()));
    }
    let e = (-x).max(x - 1.0);
    let mut rows = Vec::new();
    for label in model.labels(kmax) {
        let s = model.scalars(label)?;
        let log = s.log_norm_qinv - s.log_qdim + e * (s.log_norm_q + s.log_norm_qinv) - s.log_dim;
        rows.push((label, math::exp(log)));
    }
    let values: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let verdict = match first_monotone_exceedance(&values, DIVERGENCE_CUTOFF) {
        Some(i) => ScanVerdict::Diverges { witness: rows[i].0 },
        None => {
            let i = (0..values.len()).fold(0, |b, i| if values[i] > values[b] { i } else { b });
            ScanVerdict::Bounded {
                sup: values[i],
                witness: rows[i].0,
            }
        }
    };
    Ok(Condition5Scan { rows, verdict })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthClass {
    SubexponentialCandidate,
    Exponential,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthProfile {
    /// `(k, (sum_{|alpha| <= k} n_alpha^2)^{1/k})` for `k = 1..=kmax`.
    pub rows: Vec<(u64, f64)>,
    pub class: GrowthClass,
}

/// Growth profile of the ball sizes; classified as a sub-exponential
/// candidate when its last quarter is nonincreasing and ends below 1.2.
pub fn subexp_growth_profile(model: &QGModel, kmax: u64) -> Result<GrowthProfile> {
    let labels = model.labels_of_length_at_most(kmax)?;
    let mut by_len = alloc::vec![f64::NEG_INFINITY; kmax as usize + 1];
    for l in labels {
        let k = model.length(l)? as usize;
        by_len[k] = math::log_add_exp(by_len[k], 2.0 * model.scalars(l)?.log_dim);
    }
    let mut acc = f64::NEG_INFINITY;
    let mut rows = Vec::new();
    for (k, v) in by_len.iter().enumerate() {
        acc = math::log_add_exp(acc, *v);
        if k >= 1 {
            rows.push((k as u64, math::exp(acc / k as f64)));
        }
    }
    let q = rows.len() - rows.len() * 3 / 4;
    let tail = &rows[rows.len() - q..];
    let decreasing = tail.windows(2).all(|w| w[1].1 <= w[0].1);
    let class = match rows.last() {
        Some(&(_, last)) if decreasing && last < 1.2 => GrowthClass::SubexponentialCandidate,
        _ => GrowthClass::Exponential,
    };
    Ok(GrowthProfile { rows, class })
}

#[derive(Debug, Clone, PartialEq)]
pub enum DoublingSearch {
    Found(Vec<(Label, f64)>),
    /// The sequence could not be extended past the given prefix.
    NotFound(Vec<(Label, f64)>),
}

/// Looks for labels `alpha_1, alpha_2, ...` with `||Q_{alpha_1}|| > 1`,
/// `|alpha_{k+1}| <= 2 |alpha_k|` and `||Q_{alpha_{k+1}}|| = ||Q_{alpha_k}||^2`.
pub fn doubling_sequence_search(model: &QGModel, depth: usize) -> Result<DoublingSearch> {
    if model.is_kac() {
        return Err(Error::KacModel);
    }
    if !model.has_length() {
        return Err(Error::MissingLength);
    }
    let max_len = |len: u64| len.saturating_mul(2).min(DOUBLING_SEARCH_LIMIT);
    let candidates = |bound: u64| -> Result<Vec<Label>> {
        let mut v = model.labels_of_length_at_most(bound)?;
        if let Some(max) = model.max_label() {
            v.retain(|l| l.0 <= max.0);
        }
        Ok(v)
    };
    let scan_end = match model.kind() {
        ModelKind::Generic => 0,
        _ => DOUBLING_SEARCH_LIMIT.min(model.max_label().map_or(0, |l| l.0)),
    };
    let mut first = None;
    for l in model.labels(scan_end) {
        let lq = model.scalars(l)?.log_norm_q;
        if lq > 0.0 {
            first = Some((l, lq));
            break;
        }
    }
    let Some((l0, lq0)) = first else {
        return Ok(DoublingSearch::NotFound(Vec::new()));
    };
    let mut seq = alloc::vec![(l0, math::exp(lq0))];
    let mut cur = (l0, lq0);
    while seq.len() < depth {
        let bound = max_len(model.length(cur.0)?);
        let mut next = None;
        for l in candidates(bound)? {
            let lq = model.scalars(l)?.log_norm_q;
            if math::rel_eq(lq, 2.0 * cur.1, 1e-12) {
                next = Some((l, lq));
                break;
            }
        }
        match next {
            Some(n) => {
                seq.push((n.0, math::exp(n.1)));
                cur = n;
            }
            None => return Ok(DoublingSearch::NotFound(seq)),
        }
    }
    Ok(DoublingSearch::Found(seq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn of105() -> QGModel {
        QGModel::ofplus(vec![1.0 / 1.05, 1.0, 1.05], 1).unwrap()
    }

    #[test]
    fn interval_set_normalizes() {
        let s = IntervalSet::new(vec![(2.0, 3.0), (0.0, 1.0), (0.5, 2.0), (5.0, 4.0)]);
        assert_eq!(s.parts(), &[(0.0, 3.0)]);
        assert!(s.strictly_contains(&IntervalSet::interval(0.0, 1.0)));
        assert!(!s.strictly_contains(&s));
        assert!(s.contains(3.0) && !s.contains(3.1));
    }

    #[test]
    fn of_bounds_example() {
        let inv = OfInvariants::from_model(&of105()).unwrap();
        assert!((inv.d1 - 3.00953).abs() < 1e-5);
        assert!((inv.r - 9.906).abs() < 1e-3);
        let b = of_interval_bounds(&inv, Exponent::ONE).unwrap();
        let (a, c) = b.inner.parts()[0];
        assert!((a + 3.453).abs() < 1e-3 && (c - 4.453).abs() < 1e-3);
        let (a, c) = b.outer.parts()[0];
        assert!((a + 4.453).abs() < 1e-3 && (c - 5.453).abs() < 1e-3);
        assert!(b.outer.contains_set(&b.inner));
        let (pred, w) = cor_strict_inclusion(&inv, Exponent::ONE).unwrap();
        assert!(pred);
        assert_eq!(w, Some(2.0));
    }

    #[test]
    fn suq2_data_gives_unit_interval() {
        let inv = OfInvariants::from_model(&QGModel::suq2(0.5).unwrap()).unwrap();
        assert_eq!(inv.phi_d, 2.0);
        assert!((inv.r - 1.0).abs() < 1e-15);
        let b = of_interval_bounds(&inv, Exponent::ONE).unwrap();
        assert_eq!(b.inner.parts(), &[(0.0, 1.0)]);
        let (a, c) = b.outer.parts()[0];
        assert!(a.abs() < 1e-15 && (c - 1.0).abs() < 1e-15);
        assert_eq!(cor_strict_inclusion(&inv, Exponent::ONE).unwrap(), (false, None));
    }

    #[test]
    fn predicate_is_strict_at_boundary() {
        // phi_d = 64 = 2^6 exactly
        let inv = OfInvariants::new(64.015625, 2.0).unwrap();
        assert_eq!(inv.phi_d, 64.0);
        assert!(!cor_strict_inclusion(&inv, Exponent::ONE).unwrap().0);
    }

    #[test]
    fn degenerate_invariants_rejected() {
        assert!(OfInvariants::new(2.0, 1.1).is_err());
        assert!(OfInvariants::new(3.0, 1.0).is_err());
    }

    #[test]
    fn chain_examples() {
        let e10 = CMatrix::unit(2, 1, 0);
        let r = haagerup_chain_check(&[4.0, 0.25], &e10, 2.0, 2.0, 1).unwrap();
        assert!(r.pass && (r.lhs - 16.0).abs() < 1e-13 && (r.rhs - 16.0).abs() < 1e-13);
        let r = haagerup_chain_check(&[4.0, 0.25], &e10, 0.5, 2.0, 1).unwrap();
        assert!(r.pass && (r.lhs - 2.0).abs() < 1e-14 && (r.rhs - 4.0).abs() < 1e-14);
        let z = CMatrix::zeros(2, 2);
        let r = haagerup_chain_check(&[4.0, 0.25], &z, 3.0, 2.0, 1).unwrap();
        assert!(r.pass && r.lhs == 0.0);
        assert!(haagerup_chain_check(&[4.0, 0.5], &e10, 0.0, 2.0, 1).is_err());
    }

    #[test]
    fn condition5_examples() {
        let q = QGModel::suq2(0.5).unwrap();
        let p = Exponent::ONE;
        assert!(
            matches!(condition5_scan(&q, p, 0.5, 60).unwrap().verdict, ScanVerdict::Bounded { sup, .. } if sup <= 1.0)
        );
        assert!(matches!(
            condition5_scan(&q, p, 2.0, 60).unwrap().verdict,
            ScanVerdict::Diverges { .. }
        ));
        let kac = QGModel::generic(vec![(Label(0), vec![1.0], Some(0)), (Label(1), vec![1.0; 2], Some(1))]).unwrap();
        assert!(
            matches!(condition5_scan(&kac, p, 3.0, 10).unwrap().verdict, ScanVerdict::Bounded { sup, .. } if sup <= 1.0)
        );
    }

    #[test]
    fn growth_profile_examples() {
        let q = QGModel::suq2(0.5).unwrap();
        let g = subexp_growth_profile(&q, 100).unwrap();
        let last = g.rows.last().unwrap().1;
        assert!(math::rel_eq(last, libm::pow(348551.0, 0.01), 1e-12));
        assert!((last - 1.1361).abs() < 1e-4);
        assert_eq!(g.class, GrowthClass::SubexponentialCandidate);
        let g = subexp_growth_profile(&of105(), 100).unwrap();
        assert_eq!(g.class, GrowthClass::Exponential);
        let trivial = QGModel::generic(vec![(Label(0), vec![1.0], Some(0))]).unwrap();
        let g = subexp_growth_profile(&trivial, 10).unwrap();
        assert!(g.rows.iter().all(|r| r.1 == 1.0));
    }

    #[test]
    fn doubling_examples() {
        let q = QGModel::suq2(0.5).unwrap();
        let DoublingSearch::Found(seq) = doubling_sequence_search(&q, 5).unwrap() else {
            panic!("no sequence");
        };
        let labels: Vec<u64> = seq.iter().map(|s| s.0 .0).collect();
        assert_eq!(labels, vec![1, 2, 4, 8, 16]);
        let norms = [2.0, 4.0, 16.0, 256.0, 65536.0];
        for (s, n) in seq.iter().zip(norms) {
            assert!(math::rel_eq(s.1, n, 1e-12));
        }
        let DoublingSearch::Found(seq) = doubling_sequence_search(&of105(), 3).unwrap() else {
            panic!("no sequence");
        };
        let labels: Vec<u64> = seq.iter().map(|s| s.0 .0).collect();
        assert_eq!(labels, vec![1, 2, 4]);
        assert!((seq[2].1 - 1.47746).abs() < 1e-5);
        let kac = QGModel::ofplus(vec![1.0, 1.0], 1).unwrap();
        assert_eq!(doubling_sequence_search(&kac, 3), Err(Error::KacModel));
    }
}
