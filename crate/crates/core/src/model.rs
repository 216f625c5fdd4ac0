//! Spectral data of the dual of a compact quantum group.
//!
//! Every irreducible representation is described by its diagonal modular
//! matrix `Q` (stored as the vector of its diagonal, in the basis order of
//! the model file) and the derived quantum dimension `d = Tr Q`. All
//! index-dependent formulas elsewhere in the crate refer to this order.
//!
//! Two families are generated on demand:
//!
//! * `SU_q(2)`, where label `k` has dimension `k + 1` and
//!   `Q_k = diag(q^{2i-k})`, `i = 0..=k`;
//! * free orthogonal `O_F^+` with `F = sum_i lambda_i e_{i,N+1-i}`. Labels 0
//!   and 1 carry full blocks (`Q_1 = F^*F`); higher labels carry only the
//!   scalar invariants `n_k`, `d_k` and `||Q_k|| = ||Q_k^{-1}|| = ||F||^{2k}`
//!   unless synthetic spectra are switched on.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::math;

/// Relative tolerance of the admissibility identity `Tr Q = Tr Q^{-1}`.
pub const ADMISSIBILITY_TOL: f64 = 1e-12;
/// Relative tolerance on `lambda_i lambda_{N+1-i} = sign`.
pub const LAMBDA_PAIRING_TOL: f64 = 1e-6;
/// Number of labels whose scalar invariants are tabulated for `O_F^+`.
pub const OFPLUS_TABLE_DEPTH: u64 = 1024;
/// Labels of bundled models checked by [`validate_model`].
pub const VALIDATION_DEPTH: u64 = 40;
/// Largest block for which a synthetic spectrum is produced.
pub const SYNTHETIC_MAX_DIM: usize = 64;

/// Identifier of an irreducible representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u64);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for Label {
    fn from(v: u64) -> Self {
        Label(v)
    }
}

/// One irreducible representation with its full diagonal modular matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Irrep {
    pub label: Label,
    pub qdiag: Vec<f64>,
    /// `Tr Q`, summed from `qdiag`.
    pub qdim: f64,
    /// The spectrum is an interpolated stand-in, not the true `Q`.
    pub synthetic: bool,
}

impl Irrep {
    pub fn new(label: Label, qdiag: Vec<f64>) -> Self {
        let qdim = qdiag.iter().sum();
        Self {
            label,
            qdiag,
            qdim,
            synthetic: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.qdiag.len()
    }

    pub fn norm_q(&self) -> f64 {
        self.qdiag.iter().copied().fold(0.0, f64::max)
    }

    pub fn norm_qinv(&self) -> f64 {
        1.0 / self.qdiag.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `Tr Q^{-1}`.
    pub fn qdim_inv(&self) -> f64 {
        self.qdiag.iter().map(|q| 1.0 / q).sum()
    }

    pub fn is_trivially_scaled(&self) -> bool {
        self.qdiag.iter().all(|&q| q == 1.0)
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.dim() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                label: self.label.0,
                index,
                dim: self.dim(),
            })
        }
    }

    /// `Q^t` entrywise, for real `t`.
    pub fn qpow(&self, t: f64) -> Vec<f64> {
        self.qdiag.iter().map(|&q| math::powf(q, t)).collect()
    }

    pub fn scalars(&self) -> IrrepScalars {
        let n = self.dim();
        IrrepScalars {
            label: self.label,
            dim: n as f64,
            dim_exact: Some(n as u128),
            qdim: self.qdim,
            log_dim: math::ln(n as f64),
            log_qdim: math::ln(self.qdim),
            log_norm_q: math::ln(self.norm_q()),
            log_norm_qinv: math::ln(self.norm_qinv()),
            has_block: true,
        }
    }
}

/// Scalar invariants of a label; available for every label of every model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrrepScalars {
    pub label: Label,
    /// `n_alpha` (may be `inf` once it no longer fits an `f64`).
    pub dim: f64,
    /// `n_alpha` when it fits in a `u128`.
    pub dim_exact: Option<u128>,
    pub qdim: f64,
    pub log_dim: f64,
    pub log_qdim: f64,
    pub log_norm_q: f64,
    pub log_norm_qinv: f64,
    /// A full modular matrix is available for this label.
    pub has_block: bool,
}

impl IrrepScalars {
    pub fn norm_q(&self) -> f64 {
        math::exp(self.log_norm_q)
    }

    pub fn norm_qinv(&self) -> f64 {
        math::exp(self.log_norm_qinv)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    Generic,
    SuQ2 { q: f64 },
    OfPlus { lambdas: Vec<f64>, sign: i8 },
}

#[derive(Debug, Clone, PartialEq)]
struct GenericEntry {
    irrep: Irrep,
    length: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OfRow {
    dim_exact: Option<u128>,
    log_dim: f64,
    log_qdim: f64,
    dim: f64,
    qdim: f64,
}

/// A family of irreducible representations with optional length function.
///
/// Immutable after construction; the `O_F^+` scalar tables are filled in
/// the constructor, so shared references can be used from any thread.
#[derive(Debug, Clone, PartialEq)]
pub struct QGModel {
    kind: ModelKind,
    generic: BTreeMap<Label, GenericEntry>,
    of_table: Vec<OfRow>,
    synthetic: bool,
}

impl QGModel {
    /// A finite model. Each entry is `(label, qdiag, length)`; lengths must
    /// be given for all irreps or for none.
    pub fn generic(irreps: Vec<(Label, Vec<f64>, Option<u64>)>) -> Result<Self> {
        if irreps.is_empty() {
            return Err(Error::InvalidModel("generic model without irreps".into()));
        }
        let with_len = irreps.iter().filter(|e| e.2.is_some()).count();
        if with_len != 0 && with_len != irreps.len() {
            return Err(Error::InvalidModel(
                "length must be given for every irrep or for none".into(),
            ));
        }
        let mut generic = BTreeMap::new();
        for (label, qdiag, length) in irreps {
            if qdiag.is_empty() {
                return Err(Error::InvalidModel(format!("irrep {label} has empty qdiag")));
            }
            if qdiag.iter().any(|q| !q.is_finite()) {
                return Err(Error::InvalidModel(format!("irrep {label} has non-finite qdiag")));
            }
            let entry = GenericEntry {
                irrep: Irrep::new(label, qdiag),
                length,
            };
            if generic.insert(label, entry).is_some() {
                return Err(Error::InvalidModel(format!("duplicate label {label}")));
            }
        }
        Ok(Self {
            kind: ModelKind::Generic,
            generic,
            of_table: Vec::new(),
            synthetic: false,
        })
    }

    /// `SU_q(2)` for `0 < q < 1`.
    pub fn suq2(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidParameter {
                name: "q",
                reason: format!("{q} is not in (0, 1)"),
            });
        }
        Ok(Self {
            kind: ModelKind::SuQ2 { q },
            generic: BTreeMap::new(),
            of_table: Vec::new(),
            synthetic: false,
        })
    }

    /// Free orthogonal quantum group for `F = sum_i lambda_i e_{i,N+1-i}`.
    pub fn ofplus(lambdas: Vec<f64>, sign: i8) -> Result<Self> {
        if lambdas.len() < 2 {
            return Err(Error::InvalidModel("O_F^+ needs N >= 2".into()));
        }
        if lambdas.iter().any(|l| *l == 0.0 || !l.is_finite()) {
            return Err(Error::InvalidModel("lambdas must be finite and nonzero".into()));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidModel(format!("sign must be +1 or -1, got {sign}")));
        }
        let n1 = lambdas.len() as u128;
        let d1: f64 = lambdas.iter().map(|l| l * l).sum();
        if d1 < 2.0 {
            return Err(Error::InvalidModel(format!(
                "d_1 = {d1} < 2: recurrences are not those of a quantum group"
            )));
        }
        let of_table = ofplus_table(n1, d1, OFPLUS_TABLE_DEPTH);
        Ok(Self {
            kind: ModelKind::OfPlus { lambdas, sign },
            generic: BTreeMap::new(),
            of_table,
            synthetic: false,
        })
    }

    /// Enables interpolated spectra for `O_F^+` labels `k >= 2` (flagged
    /// `synthetic` on every block produced).
    pub fn with_synthetic_spectra(mut self, on: bool) -> Self {
        self.synthetic = on;
        self
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn synthetic_spectra(&self) -> bool {
        self.synthetic
    }

    /// Short human-readable identification, e.g. `suq2(q=0.5)`.
    pub fn describe(&self) -> String {
        match &self.kind {
            ModelKind::Generic => format!("generic({} irreps)", self.generic.len()),
            ModelKind::SuQ2 { q } => format!("suq2(q={q})"),
            ModelKind::OfPlus { lambdas, sign } => {
                let mut s = String::from("ofplus(lambdas=[");
                for (i, l) in lambdas.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    s.push_str(&format!("{l}"));
                }
                s.push_str(&format!("], sign={sign})"));
                s
            }
        }
    }

    pub fn is_kac(&self) -> bool {
        match &self.kind {
            ModelKind::Generic => self.generic.values().all(|e| e.irrep.is_trivially_scaled()),
            ModelKind::SuQ2 { .. } => false,
            ModelKind::OfPlus { lambdas, .. } => lambdas.iter().all(|l| math::abs(*l) == 1.0),
        }
    }

    pub fn is_bundled(&self) -> bool {
        !matches!(self.kind, ModelKind::Generic)
    }

    pub fn has_length(&self) -> bool {
        match self.kind {
            ModelKind::Generic => self.generic.values().all(|e| e.length.is_some()),
            _ => true,
        }
    }

    /// Number of irreps of a finite model, `None` for the infinite families.
    pub fn finite_size(&self) -> Option<usize> {
        match self.kind {
            ModelKind::Generic => Some(self.generic.len()),
            _ => None,
        }
    }

    /// Largest label that can be generated for a bundled model.
    pub fn max_label(&self) -> Option<Label> {
        match self.kind {
            ModelKind::Generic => self.generic.keys().next_back().copied(),
            ModelKind::SuQ2 { .. } => Some(Label(u64::MAX)),
            ModelKind::OfPlus { .. } => Some(Label(OFPLUS_TABLE_DEPTH)),
        }
    }

    pub fn contains(&self, label: Label) -> bool {
        match self.kind {
            ModelKind::Generic => self.generic.contains_key(&label),
            ModelKind::SuQ2 { .. } => true,
            ModelKind::OfPlus { .. } => label.0 <= OFPLUS_TABLE_DEPTH,
        }
    }

    /// Natural length of a label.
    pub fn length(&self, label: Label) -> Result<u64> {
        match self.kind {
            ModelKind::Generic => {
                let e = self.generic.get(&label).ok_or(Error::UnknownLabel(label.0))?;
                e.length.ok_or(Error::MissingLength)
            }
            _ => {
                if self.contains(label) {
                    Ok(label.0)
                } else {
                    Err(Error::UnknownLabel(label.0))
                }
            }
        }
    }

    /// Labels in model order: all labels of a finite model, or
    /// `0..=max_bundled` for the infinite families.
    pub fn labels(&self, max_bundled: u64) -> Vec<Label> {
        match self.kind {
            ModelKind::Generic => self.generic.keys().copied().collect(),
            ModelKind::SuQ2 { .. } => (0..=max_bundled).map(Label).collect(),
            ModelKind::OfPlus { .. } => (0..=max_bundled.min(OFPLUS_TABLE_DEPTH)).map(Label).collect(),
        }
    }

    /// All labels of length at most `k`.
    pub fn labels_of_length_at_most(&self, k: u64) -> Result<Vec<Label>> {
        if !self.has_length() {
            return Err(Error::MissingLength);
        }
        Ok(match self.kind {
            ModelKind::Generic => self
                .generic
                .values()
                .filter(|e| e.length.is_some_and(|l| l <= k))
                .map(|e| e.irrep.label)
                .collect(),
            _ => self.labels(k),
        })
    }

    /// Label of the trivial representation.
    pub fn trivial_label(&self) -> Option<Label> {
        match self.kind {
            ModelKind::Generic => self
                .generic
                .values()
                .find(|e| e.length == Some(0))
                .or_else(|| self.generic.values().find(|e| e.irrep.qdiag == [1.0]))
                .map(|e| e.irrep.label),
            _ => Some(Label(0)),
        }
    }

    /// Full block of a label.
    ///
    /// Fails with [`Error::ScalarOnly`] for `O_F^+` labels `k >= 2` unless
    /// synthetic spectra are enabled and the block is small enough.
    pub fn irrep(&self, label: Label) -> Result<Irrep> {
        match &self.kind {
            ModelKind::Generic => self
                .generic
                .get(&label)
                .map(|e| e.irrep.clone())
                .ok_or(Error::UnknownLabel(label.0)),
            ModelKind::SuQ2 { q } => Ok(suq2_irrep(*q, label)),
            ModelKind::OfPlus { lambdas, .. } => {
                if !self.contains(label) {
                    return Err(Error::UnknownLabel(label.0));
                }
                match label.0 {
                    0 => Ok(Irrep::new(label, vec![1.0])),
                    1 => {
                        // (F^*F)_{jj} = lambda_{N+1-j}^2
                        let qdiag = lambdas.iter().rev().map(|l| l * l).collect();
                        Ok(Irrep::new(label, qdiag))
                    }
                    _ => {
                        if !self.synthetic {
                            return Err(Error::ScalarOnly(label.0));
                        }
                        let s = self.scalars(label)?;
                        let n = s.dim_exact.filter(|&n| n <= SYNTHETIC_MAX_DIM as u128);
                        let n = n.ok_or(Error::ScalarOnly(label.0))? as usize;
                        let qdiag = synthetic_spectrum(n, s.log_norm_q, s.qdim).ok_or(Error::ScalarOnly(label.0))?;
                        let mut irrep = Irrep::new(label, qdiag);
                        irrep.synthetic = true;
                        Ok(irrep)
                    }
                }
            }
        }
    }

    /// Scalar invariants of a label.
    pub fn scalars(&self, label: Label) -> Result<IrrepScalars> {
        match &self.kind {
            ModelKind::Generic => self
                .generic
                .get(&label)
                .map(|e| e.irrep.scalars())
                .ok_or(Error::UnknownLabel(label.0)),
            ModelKind::SuQ2 { q } => Ok(suq2_scalars(*q, label)),
            ModelKind::OfPlus { lambdas, .. } => {
                let row = self
                    .of_table
                    .get(label.0 as usize)
                    .ok_or(Error::UnknownLabel(label.0))?;
                let fnorm = lambdas.iter().map(|l| math::abs(*l)).fold(0.0, f64::max);
                let log_norm = 2.0 * (label.0 as f64) * math::ln(fnorm);
                let has_block =
                    label.0 <= 1 || (self.synthetic && row.dim_exact.is_some_and(|n| n <= SYNTHETIC_MAX_DIM as u128));
                Ok(IrrepScalars {
                    label,
                    dim: row.dim,
                    dim_exact: row.dim_exact,
                    qdim: row.qdim,
                    log_dim: row.log_dim,
                    log_qdim: row.log_qdim,
                    log_norm_q: log_norm,
                    log_norm_qinv: log_norm,
                    has_block,
                })
            }
        }
    }

    /// Closed-form quantum dimension of a bundled label, if any.
    pub fn closed_form_qdim(&self, label: Label) -> Option<f64> {
        match &self.kind {
            ModelKind::SuQ2 { q } => Some(suq2_qdim(*q, label.0)),
            ModelKind::OfPlus { .. } => self.of_table.get(label.0 as usize).map(|r| r.qdim),
            ModelKind::Generic => None,
        }
    }
}

/// `d_k = (q^{-(k+1)} - q^{k+1}) / (q^{-1} - q)`.
pub fn suq2_qdim(q: f64, k: u64) -> f64 {
    let e = (k + 1) as f64;
    (math::powf(q, -e) - math::powf(q, e)) / (1.0 / q - q)
}

fn suq2_log_qdim(q: f64, k: u64) -> f64 {
    let e = (k + 1) as f64;
    -e * math::ln(q) + libm::log1p(-math::powf(q, 2.0 * e)) - math::ln(1.0 / q - q)
}

fn suq2_irrep(q: f64, label: Label) -> Irrep {
    let k = label.0 as i64;
    let qdiag = (0..=k).map(|i| math::powf(q, (2 * i - k) as f64)).collect();
    Irrep::new(label, qdiag)
}

fn suq2_scalars(q: f64, label: Label) -> IrrepScalars {
    let k = label.0;
    let n = k as f64 + 1.0;
    let log_norm = -(k as f64) * math::ln(q);
    let qdim = suq2_qdim(q, k);
    IrrepScalars {
        label,
        dim: n,
        dim_exact: Some(k as u128 + 1),
        qdim,
        log_dim: math::ln(n),
        log_qdim: if qdim.is_finite() {
            math::ln(qdim)
        } else {
            suq2_log_qdim(q, k)
        },
        log_norm_q: log_norm,
        log_norm_qinv: log_norm,
        has_block: true,
    }
}

/// `n_{k+2} = n_1 n_{k+1} - n_k` and `d_{k+2} = d_1 d_{k+1} - d_k`, kept as
/// log-ratios once the values leave the range of `f64`.
fn ofplus_table(n1: u128, d1: f64, depth: u64) -> Vec<OfRow> {
    let mut rows = Vec::with_capacity(depth as usize + 1);
    rows.push(OfRow {
        dim_exact: Some(1),
        log_dim: 0.0,
        log_qdim: 0.0,
        dim: 1.0,
        qdim: 1.0,
    });
    let (mut n_prev, mut n_cur) = (Some(1u128), Some(n1));
    let n1f = n1 as f64;
    let (mut n_ratio, mut d_ratio) = (n1f, d1);
    let (mut log_n, mut log_d) = (math::ln(n1f), math::ln(d1));
    let (mut d_prev, mut d_cur) = (1.0f64, d1);
    for k in 1..=depth {
        let dim = n_cur.map_or(math::exp(log_n), |n| n as f64);
        let qdim = if d_cur.is_finite() { d_cur } else { math::exp(log_d) };
        rows.push(OfRow {
            dim_exact: n_cur,
            log_dim: log_n,
            log_qdim: log_d,
            dim,
            qdim,
        });
        if k == depth {
            break;
        }
        let n_next = match (n_prev, n_cur) {
            (Some(a), Some(b)) => b.checked_mul(n1).and_then(|x| x.checked_sub(a)),
            _ => None,
        };
        n_prev = n_cur;
        n_cur = n_next;
        let d_next = d1 * d_cur - d_prev;
        d_prev = d_cur;
        d_cur = d_next;
        n_ratio = n1f - 1.0 / n_ratio;
        d_ratio = d1 - 1.0 / d_ratio;
        log_n += math::ln(n_ratio);
        log_d += math::ln(d_ratio);
        // prefer the directly accumulated values while they are finite
        if let Some(n) = n_cur {
            log_n = math::ln(n as f64);
        }
        if d_cur.is_finite() {
            log_d = math::ln(d_cur);
        }
    }
    rows
}

/// Reciprocal-symmetric spectrum of size `n` spanning `[M^{-1}, M]`
/// (`M = exp(log_norm)`) with trace `qdim`.
///
/// The extremes `M` and `M^{-1}` are always present; the remaining entries
/// are pairs `M^{+-s e_j}` on a geometric grid `e_j = j / (pairs + 1)`, plus
/// a single `1` when `n` is odd, and `s` in `[0, 1]` is fitted so the trace
/// matches. Returns `None` when no `s` achieves the trace.
pub fn synthetic_spectrum(n: usize, log_norm: f64, qdim: f64) -> Option<Vec<f64>> {
    if n < 2 {
        return (n == 1 && log_norm == 0.0).then(|| vec![1.0]);
    }
    let rest = n - 2;
    let pairs = rest / 2;
    let odd = rest % 2 == 1;
    let grid: Vec<f64> = (1..=pairs).map(|j| j as f64 / (pairs + 1) as f64).collect();
    let m = math::exp(log_norm);
    let trace = |s: f64| -> f64 {
        let mut t = m + 1.0 / m + if odd { 1.0 } else { 0.0 };
        for e in &grid {
            t += 2.0 * libm::cosh(s * e * log_norm);
        }
        t
    };
    let (lo, hi) = (trace(0.0), trace(1.0));
    let tol = 1e-12 * qdim;
    if qdim < lo - tol || qdim > hi + tol {
        return None;
    }
    let (mut a, mut b) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if trace(mid) < qdim {
            a = mid;
        } else {
            b = mid;
        }
    }
    let s = 0.5 * (a + b);
    let mut spec = Vec::with_capacity(n);
    spec.push(m);
    spec.push(1.0 / m);
    for e in &grid {
        spec.push(math::exp(s * e * log_norm));
        spec.push(math::exp(-s * e * log_norm));
    }
    if odd {
        spec.push(1.0);
    }
    spec.sort_by(|x, y| y.partial_cmp(x).unwrap_or(core::cmp::Ordering::Equal));
    Some(spec)
}

/// What kind of invariant a [`Violation`] breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// A `qdiag` entry is not strictly positive.
    NonPositiveEntry,
    /// `Tr Q != Tr Q^{-1}`.
    TraceMismatch,
    /// Summed `Tr Q` disagrees with the closed-form quantum dimension.
    QdimMismatch,
    /// `lambda_i lambda_{N+1-i} != sign`.
    LambdaPairing,
    /// `|lambda_i|` is not monotone increasing.
    LambdaOrder,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::NonPositiveEntry => "non-positive qdiag entry",
            ViolationKind::TraceMismatch => "Tr Q != Tr Q^-1",
            ViolationKind::QdimMismatch => "qdim differs from closed form",
            ViolationKind::LambdaPairing => "lambda_i lambda_(N+1-i) != sign",
            ViolationKind::LambdaOrder => "|lambda_i| not increasing",
        })
    }
}

/// One invariant breach; `magnitude` is the offending value or the relative
/// discrepancy, depending on `kind`.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub label: Option<Label>,
    pub index: Option<usize>,
    pub kind: ViolationKind,
    pub magnitude: f64,
}

fn check_irrep(irrep: &Irrep, out: &mut Vec<Violation>) {
    let mut positive = true;
    for (i, &q) in irrep.qdiag.iter().enumerate() {
        if !(q > 0.0) {
            positive = false;
            out.push(Violation {
                label: Some(irrep.label),
                index: Some(i),
                kind: ViolationKind::NonPositiveEntry,
                magnitude: q,
            });
        }
    }
    if positive {
        let (tr, tr_inv) = (irrep.qdim, irrep.qdim_inv());
        if !math::rel_eq(tr, tr_inv, ADMISSIBILITY_TOL) {
            out.push(Violation {
                label: Some(irrep.label),
                index: None,
                kind: ViolationKind::TraceMismatch,
                magnitude: math::rel_diff(tr, tr_inv),
            });
        }
    }
}

/// Every invariant breach of the model, ordered by label then index.
///
/// Finite models are checked completely; bundled families are checked on
/// labels `0..=VALIDATION_DEPTH` (full blocks where they exist).
pub fn validate_model(model: &QGModel) -> Vec<Violation> {
    let mut out = Vec::new();
    match model.kind() {
        ModelKind::Generic => {
            for e in model.generic.values() {
                check_irrep(&e.irrep, &mut out);
            }
        }
        ModelKind::SuQ2 { q } => {
            for k in 0..=VALIDATION_DEPTH {
                let irrep = suq2_irrep(*q, Label(k));
                check_irrep(&irrep, &mut out);
                let closed = suq2_qdim(*q, k);
                if !math::rel_eq(irrep.qdim, closed, ADMISSIBILITY_TOL) {
                    out.push(Violation {
                        label: Some(Label(k)),
                        index: None,
                        kind: ViolationKind::QdimMismatch,
                        magnitude: math::rel_diff(irrep.qdim, closed),
                    });
                }
            }
        }
        ModelKind::OfPlus { lambdas, sign } => {
            let n = lambdas.len();
            for i in 0..n {
                let prod = lambdas[i] * lambdas[n - 1 - i];
                let target = *sign as f64;
                if math::abs(prod - target) > LAMBDA_PAIRING_TOL {
                    out.push(Violation {
                        label: None,
                        index: Some(i),
                        kind: ViolationKind::LambdaPairing,
                        magnitude: prod,
                    });
                }
            }
            for i in 1..n {
                if math::abs(lambdas[i]) < math::abs(lambdas[i - 1]) {
                    out.push(Violation {
                        label: None,
                        index: Some(i),
                        kind: ViolationKind::LambdaOrder,
                        magnitude: math::abs(lambdas[i]),
                    });
                }
            }
            for k in 0..=1 {
                if let Ok(irrep) = model.irrep(Label(k)) {
                    check_irrep(&irrep, &mut out);
                }
            }
            if model.synthetic {
                for k in 2..=VALIDATION_DEPTH {
                    if let Ok(irrep) = model.irrep(Label(k)) {
                        check_irrep(&irrep, &mut out);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_dim(qdiag: Vec<f64>) -> QGModel {
        QGModel::generic(vec![(Label(0), vec![1.0], Some(0)), (Label(1), qdiag, Some(1))]).unwrap()
    }

    #[test]
    fn symmetric_spectrum_is_admissible() {
        assert!(validate_model(&two_dim(vec![2.0, 0.5])).is_empty());
    }

    #[test]
    fn trace_mismatch_reported_once() {
        let v = validate_model(&two_dim(vec![2.0, 1.0]));
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::TraceMismatch);
        assert_eq!(v[0].label, Some(Label(1)));
        // 3 vs 1.5
        assert!((v[0].magnitude - 0.5).abs() < 1e-15);
    }

    #[test]
    fn non_positive_entry_reported_with_index() {
        let v = validate_model(&two_dim(vec![2.0, -0.5]));
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::NonPositiveEntry);
        assert_eq!(v[0].index, Some(1));
    }

    #[test]
    fn suq2_valid_and_closed_form() {
        let m = QGModel::suq2(0.5).unwrap();
        assert!(validate_model(&m).is_empty());
        let d: Vec<f64> = (0..4).map(|k| m.scalars(Label(k)).unwrap().qdim).collect();
        assert_eq!(d, vec![1.0, 2.5, 5.25, 10.625]);
        let irrep = m.irrep(Label(2)).unwrap();
        assert_eq!(irrep.qdiag, vec![4.0, 1.0, 0.25]);
    }

    #[test]
    fn suq2_rejects_q_outside_unit_interval() {
        assert!(QGModel::suq2(1.0).is_err());
        assert!(QGModel::suq2(0.0).is_err());
    }

    #[test]
    fn ofplus_dims_follow_recurrence() {
        let m = QGModel::ofplus(vec![1.0 / 1.05, 1.0, 1.05], 1).unwrap();
        let dims: Vec<u128> = (0..6)
            .map(|k| m.scalars(Label(k)).unwrap().dim_exact.unwrap())
            .collect();
        assert_eq!(dims, vec![1, 3, 8, 21, 55, 144]);
        assert!(validate_model(&m).is_empty());
        assert_eq!(m.irrep(Label(2)), Err(Error::ScalarOnly(2)));
    }

    #[test]
    fn ofplus_fundamental_block_is_f_star_f() {
        let m = QGModel::ofplus(vec![0.5, 2.0], -1).unwrap();
        let q1 = m.irrep(Label(1)).unwrap();
        assert_eq!(q1.qdiag, vec![4.0, 0.25]);
        assert_eq!(m.scalars(Label(1)).unwrap().qdim, 4.25);
    }

    #[test]
    fn ofplus_bad_lambdas_flagged() {
        let m = QGModel::ofplus(vec![1.05, 1.0, 1.0 / 1.05], 1).unwrap();
        let v = validate_model(&m);
        assert!(v.iter().any(|v| v.kind == ViolationKind::LambdaOrder));
        let m = QGModel::ofplus(vec![0.5, 1.0, 1.5], 1).unwrap();
        assert!(validate_model(&m)
            .iter()
            .any(|v| v.kind == ViolationKind::LambdaPairing));
    }

    #[test]
    fn synthetic_spectra_are_admissible_and_flagged() {
        let m = QGModel::ofplus(vec![1.0 / 1.05, 1.0, 1.05], 1)
            .unwrap()
            .with_synthetic_spectra(true);
        for k in 2..=3 {
            let irrep = m.irrep(Label(k)).unwrap();
            let s = m.scalars(Label(k)).unwrap();
            assert!(irrep.synthetic);
            assert_eq!(irrep.dim() as u128, s.dim_exact.unwrap());
            assert!(math::rel_eq(irrep.qdim, s.qdim, 1e-12));
            assert!(math::rel_eq(irrep.qdim, irrep.qdim_inv(), 1e-12));
            assert!(math::rel_eq(irrep.norm_q(), s.norm_q(), 1e-12));
        }
        assert!(validate_model(&m).is_empty());
    }

    #[test]
    fn kac_detection() {
        assert!(QGModel::ofplus(vec![1.0, 1.0, 1.0], 1).unwrap().is_kac());
        assert!(two_dim(vec![1.0, 1.0]).is_kac());
        assert!(!two_dim(vec![2.0, 0.5]).is_kac());
        assert!(!QGModel::suq2(0.9).unwrap().is_kac());
    }

    #[test]
    fn length_all_or_none() {
        let r = QGModel::generic(vec![(Label(0), vec![1.0], Some(0)), (Label(1), vec![1.0], None)]);
        assert!(r.is_err());
        let m = QGModel::generic(vec![(Label(0), vec![1.0], None)]).unwrap();
        assert!(!m.has_length());
        assert_eq!(m.length(Label(0)), Err(Error::MissingLength));
    }
}
