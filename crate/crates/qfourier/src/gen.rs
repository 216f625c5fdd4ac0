//! Seeded random generators for check suites.
//!
//! Every case gets its own ChaCha8 stream, `(suite_id << 32) | case`, so a
//! case can be replayed alone and parallel runs stay byte-identical.

use qfourier_core::linalg::CMatrix;
use qfourier_core::model::{Label, QGModel};
use qfourier_core::transform::{PermElement, PermTerm};
use qfourier_core::{Complex64, DualElement};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Default label cutoff for random elements over bundled models.
pub const DEFAULT_KMAX: u64 = 5;

pub fn case_rng(seed: u64, suite_id: u32, case: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((u64::from(suite_id) << 32) | u64::from(case));
    rng
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> CMatrix {
    let data = (0..n * n).map(|_| gaussian(rng)).collect();
    CMatrix::from_row_major(n, n, data).expect("n*n entries")
}

/// Labels up to `kmax` that carry a full block.
pub fn block_labels(model: &QGModel, kmax: u64) -> Vec<Label> {
    model
        .labels(kmax)
        .into_iter()
        .filter(|l| model.irrep(*l).is_ok())
        .collect()
}

fn dims(model: &QGModel, labels: &[Label]) -> Vec<(Label, usize)> {
    labels
        .iter()
        .map(|&l| (l, model.irrep(l).map(|i| i.dim()).unwrap_or(1)))
        .collect()
}

/// Gaussian element on a nonempty random subset of `labels`.
pub fn random_dual(rng: &mut impl Rng, model: &QGModel, labels: &[Label]) -> DualElement {
    assert!(!labels.is_empty(), "random_dual needs at least one label");
    let dims = dims(model, labels);
    let mut out = DualElement::new();
    while out.is_empty() {
        for &(l, n) in &dims {
            if rng.random_bool(0.5) {
                out.insert(l, random_matrix(rng, n));
            }
        }
    }
    out
}

/// Random permutation-diagonal element on a nonempty subset of `labels`.
pub fn random_perm(rng: &mut impl Rng, model: &QGModel, labels: &[Label]) -> PermElement {
    assert!(!labels.is_empty(), "random_perm needs at least one label");
    let dims = dims(model, labels);
    let mut e = PermElement::new();
    let mut any = false;
    while !any {
        for &(l, n) in &dims {
            if rng.random_bool(0.5) {
                any = true;
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(rng);
                let y = (0..n).map(|_| gaussian(rng)).collect();
                e.insert(l, PermTerm::new(perm, y).expect("shuffled identity is a bijection"));
            }
        }
    }
    e
}

/// Positive spectrum with `Tr Q = Tr Q^{-1}`; entries spread over
/// `[e^{-spread}, e^{spread}]` before rescaling.
pub fn admissible_spectrum(rng: &mut impl Rng, n: usize, spread: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(-spread..=spread).exp()).collect();
    let tr: f64 = raw.iter().sum();
    let tr_inv: f64 = raw.iter().map(|q| 1.0 / q).sum();
    let c = (tr_inv / tr).sqrt();
    raw.into_iter().map(|q| q * c).collect()
}

/// Generic model with a trivial label 0 and `irreps - 1` random blocks;
/// label `k` gets length `k`.
pub fn random_generic_model(rng: &mut impl Rng, irreps: usize, max_dim: usize) -> QGModel {
    let mut list = vec![(Label(0), vec![1.0], Some(0))];
    for k in 1..irreps.max(1) {
        let n = rng.random_range(1..=max_dim.max(1));
        list.push((Label(k as u64), admissible_spectrum(rng, n, 1.5), Some(k as u64)));
    }
    QGModel::generic(list).expect("admissible by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use qfourier_core::validate_model;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let a: f64 = case_rng(7, 1, 0).sample(StandardNormal);
        let b: f64 = case_rng(7, 1, 0).sample(StandardNormal);
        let c: f64 = case_rng(7, 1, 1).sample(StandardNormal);
        let d: f64 = case_rng(7, 2, 0).sample(StandardNormal);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn random_models_validate() {
        let mut rng = case_rng(1, 0, 0);
        for _ in 0..20 {
            let m = random_generic_model(&mut rng, 5, 6);
            assert!(validate_model(&m).is_empty());
        }
    }

    #[test]
    fn block_labels_skip_scalar_only() {
        let m = QGModel::ofplus(vec![0.5, 1.0, 2.0], 1).unwrap();
        assert_eq!(block_labels(&m, 5), vec![Label(0), Label(1)]);
    }
}
