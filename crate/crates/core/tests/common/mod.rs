#![allow(dead_code)]

use num_complex::Complex64;
use qfourier_core::linalg::CMatrix;
use qfourier_core::model::{Label, QGModel};
use qfourier_core::transform::{PermElement, PermTerm};
use qfourier_core::DualElement;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    let data = (0..rows * cols).map(|_| gaussian(rng)).collect();
    CMatrix::from_row_major(rows, cols, data).unwrap()
}

/// Random positive spectrum rescaled so that `Tr Q = Tr Q^{-1}`.
pub fn admissible_spectrum(rng: &mut impl Rng, n: usize, spread: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(-spread..=spread).exp()).collect();
    let tr: f64 = raw.iter().sum();
    let tr_inv: f64 = raw.iter().map(|q| 1.0 / q).sum();
    let c = (tr_inv / tr).sqrt();
    raw.iter().map(|q| q * c).collect()
}

pub fn random_generic_model(rng: &mut impl Rng, irreps: usize, max_dim: usize) -> QGModel {
    let mut list = vec![(Label(0), vec![1.0], Some(0))];
    for k in 1..irreps {
        let n = rng.random_range(1..=max_dim);
        list.push((Label(k as u64), admissible_spectrum(rng, n, 1.5), Some(k as u64)));
    }
    QGModel::generic(list).unwrap()
}

/// Random element supported on a nonempty random subset of `labels`.
pub fn random_dual(rng: &mut impl Rng, model: &QGModel, labels: &[Label]) -> DualElement {
    let mut out = DualElement::new();
    while out.is_empty() {
        for &l in labels {
            if rng.random_bool(0.5) {
                let n = model.irrep(l).unwrap().dim();
                out.insert(l, random_matrix(rng, n, n));
            }
        }
    }
    out
}

pub fn random_perm(rng: &mut impl Rng, model: &QGModel, labels: &[Label]) -> PermElement {
    let mut e = PermElement::new();
    let mut any = false;
    while !any {
        for &l in labels {
            if rng.random_bool(0.5) {
                any = true;
                let n = model.irrep(l).unwrap().dim();
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(rng);
                let y = (0..n).map(|_| gaussian(rng)).collect();
                e.insert(l, PermTerm::new(perm, y).unwrap());
            }
        }
    }
    e
}

pub fn labels(k: u64) -> Vec<Label> {
    (0..=k).map(Label).collect()
}
