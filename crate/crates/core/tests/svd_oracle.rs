mod common;

use nalgebra::{Complex, DMatrix};
use qfourier_core::linalg::CMatrix;

fn oracle(m: &CMatrix) -> Vec<f64> {
    let a = DMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        let z = m[(i, j)];
        Complex::new(z.re, z.im)
    });
    let mut sv: Vec<f64> = a.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}

#[test]
fn jacobi_matches_reference_svd() {
    let mut rng = common::rng(11);
    for n in [1, 2, 3, 5, 8, 13, 21, 41, 64] {
        for _ in 0..3 {
            let m = common::random_matrix(&mut rng, n, n);
            let ours = m.singular_values();
            let theirs = oracle(&m);
            let top = theirs[0];
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).abs() <= 1e-13 * top, "n={n}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn jacobi_handles_graded_and_rank_deficient_blocks() {
    let mut rng = common::rng(12);
    for n in [4, 9, 16] {
        // rows scaled over several orders of magnitude, like twisted blocks
        let mut m = common::random_matrix(&mut rng, n, n);
        let scale: Vec<f64> = (0..n).map(|i| 4f64.powi(i as i32 - n as i32 / 2)).collect();
        let ones = vec![1.0; n];
        m = m.scale_rows_cols(&scale, &ones);
        let theirs = oracle(&m);
        for (a, b) in m.singular_values().iter().zip(&theirs) {
            assert!((a - b).abs() <= 1e-13 * theirs[0], "n={n}: {a} vs {b}");
        }
        let u = common::random_matrix(&mut rng, n, 2);
        let v = common::random_matrix(&mut rng, 2, n);
        let low = u.matmul(&v);
        let sv = low.singular_values();
        assert!(sv[2..].iter().all(|s| *s <= 1e-12 * sv[0]));
    }
}
