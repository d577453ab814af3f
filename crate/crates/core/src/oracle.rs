//! Brute-force reference path for the variance closed forms.
//!
//! Nothing here touches the spectral machinery: interference and fading
//! variances are rebuilt from the data-modulated quadratic forms of
//! [`crate::correlation`] and per-chip integrals, averaged over the four
//! equally likely bit pairs. The closed forms in [`crate::snr`] are
//! tested against this module, and the closed chip integral is in turn
//! pinned by Simpson quadrature (exact here, because the integrand is a
//! quadratic polynomial in the offset).

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::correlation::{quad_form, BitPair};
use crate::error::{Error, Result};
use crate::seqset::SequenceSet;
use crate::snr::ChannelProfile;

/// Integrand description for one chip interval: the interference
/// amplitude ramps linearly from `b` (weight of the earlier delay) to `a`
/// across a chip of duration `t_c`, and the integral is of its squared
/// magnitude `|a·u + b·(t_c - u)|²` over `u ∈ [0, t_c]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChipIntegralInputs {
    a: Complex64,
    b: Complex64,
    t_c: f64,
}

impl ChipIntegralInputs {
    /// Validates the chip duration.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidParameter`] unless `t_c` is finite and positive.
    pub fn new(a: Complex64, b: Complex64, t_c: f64) -> Result<Self> {
        if !t_c.is_finite() || t_c <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "t_c",
                value: t_c,
            });
        }
        Ok(Self { a, b, t_c })
    }

    /// Amplitude multiplying the rising ramp.
    pub fn a(&self) -> Complex64 {
        self.a
    }

    /// Amplitude multiplying the falling ramp.
    pub fn b(&self) -> Complex64 {
        self.b
    }

    /// Chip duration.
    pub fn t_c(&self) -> f64 {
        self.t_c
    }
}

/// Closed form of the chip integral:
/// `t_c³/3 · (|a|² + |b|² + Re(a·conj(b)))`.
pub fn chip_integral_closed(inputs: &ChipIntegralInputs) -> f64 {
    let t3 = inputs.t_c * inputs.t_c * inputs.t_c;
    t3 / 3.0 * (inputs.a.norm_sqr() + inputs.b.norm_sqr() + (inputs.a * inputs.b.conj()).re)
}

/// Composite-Simpson evaluation of the same chip integral.
///
/// The integrand is a quadratic polynomial in the offset, so Simpson
/// quadrature is exact up to rounding for any admissible panel count;
/// this is the independent numeric check of [`chip_integral_closed`].
///
/// # Errors
///
/// [`Error::BadPanelCount`] unless `panels` is even and at least 2.
pub fn chip_integral_numeric(inputs: &ChipIntegralInputs, panels: usize) -> Result<f64> {
    if panels < 2 || panels % 2 != 0 {
        return Err(Error::BadPanelCount { panels });
    }
    let f = |u: f64| (inputs.a * u + inputs.b * (inputs.t_c - u)).norm_sqr();
    let h = inputs.t_c / panels as f64;
    let mut acc = f(0.0) + f(inputs.t_c);
    for p in 1..panels {
        let weight = if p % 2 == 1 { 4.0 } else { 2.0 };
        acc += weight * f(p as f64 * h);
    }
    Ok(acc * h / 3.0)
}

/// Brute-force variance of one ordered user pair, from direct sums only.
///
/// For `k != i` this is the interference contribution of user `k` on user
/// `i`'s decision statistic: the bit-averaged sum of chip integrals over
/// all `N` delay cells, scaled by `P/(4T) · (1 + γ_k²·L_k)`. For `k == i`
/// it is the fading self-interference bound with prefactor
/// `P/4 · γ_i²·C_i·M_i` and the same bit-averaged integral sum.
///
/// # Panics
///
/// Panics when `i` or `k` is out of range or the channel does not
/// describe every user in the set.
pub fn variance_oracle(set: &SequenceSet, i: usize, k: usize, channel: &ChannelProfile) -> f64 {
    assert_eq!(
        channel.users().len(),
        set.k_users(),
        "channel must describe every user in the set"
    );
    let n = set.n();
    let t = channel.symbol_t();
    let t_c = t / n as f64;
    let mut bit_avg = 0.0;
    for bits in BitPair::ALL {
        let q: Vec<Complex64> = (0..=n)
            .map(|l| quad_form(set, i, k, l, bits).expect("lag within 0..=N"))
            .collect();
        for l in 0..n {
            let inputs = ChipIntegralInputs::new(q[l], q[l + 1], t_c).expect("t_c > 0");
            bit_avg += chip_integral_closed(&inputs);
        }
    }
    bit_avg /= 4.0;
    let p = channel.power();
    if i == k {
        let user = &channel.users()[i];
        let gamma2 = user.gamma() * user.gamma();
        p / 4.0 * gamma2 * user.c_bound() * f64::from(user.m_spread()) * bit_avg
    } else {
        let user = &channel.users()[k];
        let gamma2 = user.gamma() * user.gamma();
        p / (4.0 * t) * (1.0 + gamma2 * channel.l_factor(k)) * bit_avg
    }
}
