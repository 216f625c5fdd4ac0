//! Twisted Fourier analysis on duals of compact quantum groups.
//!
//! The crate works with spectral data only: each irreducible representation
//! is a diagonal modular matrix `Q` and its quantum dimension `d = Tr Q`.
//! On top of that it provides weighted noncommutative `l^p` norms on the
//! dual, the twisted transforms `F^(x)_p` and `pi^(x)`, computable
//! consequences of the Hausdorff-Young type inequalities, and the interval
//! analysis for free orthogonal quantum groups.
//!
//! `no_std` with `alloc`; enable the `std` feature to link the standard
//! library.

#![cfg_attr(not(any(test, feature = "std")), no_std)]
// `!(a > b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod math;

pub mod dual;
pub mod error;
pub mod exponent;
pub mod interval;
pub mod linalg;
pub mod model;
pub mod modular;
pub mod similarity;
pub mod transform;
pub mod verify;

pub use dual::{dual_weight, haar_inner, l2_norm, lp_norm_dual, DualElement};
pub use error::{Error, Result};
pub use exponent::{Exponent, ExponentPair};
pub use linalg::{op_norm, schatten_norm, CMatrix};
pub use math::{rel_diff, rel_eq};
pub use model::{validate_model, Irrep, IrrepScalars, Label, ModelKind, QGModel, Violation, ViolationKind};
pub use num_complex::Complex64;
