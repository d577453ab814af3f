//! Scalar helpers routed through `libm`, so every result is identical in
//! `std` and `no_std` builds and across platforms.

use num_complex::Complex64;

pub(crate) use libm::{cos, fabs, sin, sqrt};

pub(crate) const TAU: f64 = core::f64::consts::TAU;

/// Unit-magnitude complex exponential `exp(j·phase)`.
pub(crate) fn cis(phase: f64) -> Complex64 {
    Complex64::new(cos(phase), sin(phase))
}

/// Complex magnitude through `libm`.
pub(crate) fn cabs(z: Complex64) -> f64 {
    sqrt(z.norm_sqr())
}

/// Greatest common divisor (Euclid).
pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}
