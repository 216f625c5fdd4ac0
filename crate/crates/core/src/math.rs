//! Thin wrappers over `libm` so the crate computes identically with and
//! without `std`.

use num_complex::Complex64;

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// `|z|` without intermediate overflow.
#[inline]
pub(crate) fn cabs(z: Complex64) -> f64 {
    libm::hypot(z.re, z.im)
}

/// `exp(w)` for complex `w`.
#[inline]
pub(crate) fn cexp(w: Complex64) -> Complex64 {
    let r = libm::exp(w.re);
    Complex64::new(r * libm::cos(w.im), r * libm::sin(w.im))
}

/// Principal power `a^w` of a strictly positive real base.
#[inline]
pub(crate) fn pos_cpow(a: f64, w: Complex64) -> Complex64 {
    cexp(w * libm::log(a))
}

/// `log(exp(a) + exp(b))`.
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + libm::log1p(libm::exp(lo - hi))
}

/// Relative agreement `|a - b| <= tol * max(|a|, |b|)`; two zeros agree.
pub fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    let scale = abs(a).max(abs(b));
    abs(a - b) <= tol * scale
}

/// Relative discrepancy `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = abs(a).max(abs(b));
    if scale == 0.0 {
        0.0
    } else {
        abs(a - b) / scale
    }
}
