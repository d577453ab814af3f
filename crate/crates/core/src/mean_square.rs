//! Mean-square correlation indices along three equivalent routes —
//! aperiodic lag sums, periodic/odd decomposition, and spectral
//! coefficients — plus the index-based sandwich brackets around the SNR
//! lower bound.
//!
//! For user `i` the autocorrelation index is
//! `R_AC = (1/N²)·Σ_{l≠0} |C_{i,i}(l)|²` and the crosscorrelation index
//! averages `(1/N²)·Σ_l |C_{i,k}(l)|²` over the other users. Splitting
//! each aperiodic value into its periodic and odd parts halves the lag
//! range, and expanding those parts over the two harmonic bases turns
//! both indices into fourth-order moments of the spectral coefficients.
//! All three routes agree to rounding; tests and the verification suite
//! pin that agreement.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::correlation::CorrelationProfile;
use crate::error::{Error, Result};
use crate::math;
use crate::seqset::{SequenceSet, ENERGY_REL_TOL};
use crate::snr::{self, ChannelProfile};
use crate::spectral::SpectralCoefficients;

/// Mean-square correlation indices of a set: one value per user plus the
/// set-wide averages. Crosscorrelation entries are absent for single-user
/// sets, where no pair exists.
#[derive(Debug, Clone, PartialEq)]
pub struct MsqIndices {
    /// Autocorrelation index of each user.
    pub r_ac_per_user: Vec<f64>,
    /// Crosscorrelation index of each user; `None` for single-user sets.
    pub r_cc_per_user: Option<Vec<f64>>,
    /// Average autocorrelation index.
    pub r_ac: f64,
    /// Average crosscorrelation index; `None` for single-user sets.
    pub r_cc: Option<f64>,
}

impl MsqIndices {
    fn from_per_user(r_ac_per_user: Vec<f64>, r_cc_per_user: Option<Vec<f64>>) -> Self {
        fn mean(v: &[f64]) -> f64 {
            v.iter().sum::<f64>() / v.len() as f64
        }
        let r_ac = mean(&r_ac_per_user);
        let r_cc = r_cc_per_user.as_deref().map(mean);
        Self {
            r_ac_per_user,
            r_cc_per_user,
            r_ac,
            r_cc,
        }
    }
}

/// Indices from the defining aperiodic lag sums.
pub fn msq_direct(set: &SequenceSet) -> MsqIndices {
    let n = set.n();
    let k_users = set.k_users();
    let nsq = (n * n) as f64;
    let r_ac_per_user: Vec<f64> = (0..k_users)
        .map(|i| {
            let prof = CorrelationProfile::compute(set, i, i);
            let sum: f64 = prof
                .aperiodic()
                .iter()
                .enumerate()
                .filter(|&(idx, _)| idx != n - 1) // skip lag zero
                .map(|(_, z)| z.norm_sqr())
                .sum();
            sum / nsq
        })
        .collect();
    let r_cc_per_user = (k_users > 1).then(|| {
        (0..k_users)
            .map(|i| {
                let sum: f64 = (0..k_users)
                    .filter(|&k| k != i)
                    .map(|k| {
                        CorrelationProfile::compute(set, i, k)
                            .aperiodic()
                            .iter()
                            .map(Complex64::norm_sqr)
                            .sum::<f64>()
                    })
                    .sum();
                sum / ((k_users - 1) as f64 * nsq)
            })
            .collect()
    });
    MsqIndices::from_per_user(r_ac_per_user, r_cc_per_user)
}

/// Indices from the periodic/odd split of the aperiodic values, which
/// needs only delays `0..N` per pair.
pub fn msq_theta(set: &SequenceSet) -> MsqIndices {
    let n = set.n();
    let k_users = set.k_users();
    let two_nsq = 2.0 * (n * n) as f64;
    let pair_sum = |i: usize, k: usize, from: usize| -> f64 {
        let prof = CorrelationProfile::compute(set, i, k);
        (from..n)
            .map(|l| prof.periodic()[l].norm_sqr() + prof.odd()[l].norm_sqr())
            .sum()
    };
    let r_ac_per_user: Vec<f64> = (0..k_users).map(|i| pair_sum(i, i, 1) / two_nsq).collect();
    let r_cc_per_user = (k_users > 1).then(|| {
        (0..k_users)
            .map(|i| {
                let sum: f64 = (0..k_users)
                    .filter(|&k| k != i)
                    .map(|k| pair_sum(i, k, 0))
                    .sum();
                sum / ((k_users - 1) as f64 * two_nsq)
            })
            .collect()
    });
    MsqIndices::from_per_user(r_ac_per_user, r_cc_per_user)
}

/// Autocorrelation index of one user from its spectral coefficients:
/// `(1/2N)·Σ_m (|α_m|⁴ + |β_m|⁴) - 1`.
pub(crate) fn r_ac_user_from_coeffs(c: &SpectralCoefficients) -> f64 {
    let quartic: f64 = c
        .alpha()
        .iter()
        .zip(c.beta())
        .map(|(a, b)| {
            let na = a.norm_sqr();
            let nb = b.norm_sqr();
            na * na + nb * nb
        })
        .sum();
    quartic / (2.0 * c.n() as f64) - 1.0
}

/// Crosscorrelation index of one user from spectral coefficients:
/// `(1/(2(K-1)N))·Σ_{k≠i} Σ_m (|α_m^i|²|α_m^k|² + |β_m^i|²|β_m^k|²)`.
/// `None` when the set has a single user.
pub(crate) fn r_cc_user_from_coeffs(coeffs: &[SpectralCoefficients], i: usize) -> Option<f64> {
    let k_users = coeffs.len();
    if k_users < 2 {
        return None;
    }
    let n = coeffs[i].n();
    let sum: f64 = (0..k_users)
        .filter(|&k| k != i)
        .map(|k| {
            (0..n)
                .map(|mm| {
                    coeffs[i].alpha()[mm].norm_sqr() * coeffs[k].alpha()[mm].norm_sqr()
                        + coeffs[i].beta()[mm].norm_sqr() * coeffs[k].beta()[mm].norm_sqr()
                })
                .sum::<f64>()
        })
        .sum();
    Some(sum / (2.0 * (k_users - 1) as f64 * n as f64))
}

/// Indices from spectral coefficients, one entry per user.
///
/// # Errors
///
/// [`Error::EmptySet`] for an empty slice, [`Error::DimensionMismatch`]
/// when the users disagree in length, and [`Error::NormViolation`] when a
/// coefficient vector strays from the radius-`√N` hypersphere beyond
/// [`ENERGY_REL_TOL`] relative.
pub fn msq_spectral(coeffs: &[SpectralCoefficients]) -> Result<MsqIndices> {
    if coeffs.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = coeffs[0].n();
    let limit = ENERGY_REL_TOL * n as f64;
    for c in coeffs {
        if c.n() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: c.n(),
            });
        }
        for coeff in [c.alpha(), c.beta()] {
            let norm_sq: f64 = coeff.iter().map(Complex64::norm_sqr).sum();
            if math::fabs(norm_sq - n as f64) > limit {
                return Err(Error::NormViolation {
                    norm_sq,
                    expected: n as f64,
                });
            }
        }
    }
    let r_ac_per_user: Vec<f64> = coeffs.iter().map(r_ac_user_from_coeffs).collect();
    let r_cc_per_user = (coeffs.len() > 1).then(|| {
        (0..coeffs.len())
            .map(|i| r_cc_user_from_coeffs(coeffs, i).expect("multi-user set"))
            .collect()
    });
    Ok(MsqIndices::from_per_user(r_ac_per_user, r_cc_per_user))
}

fn inv_sqrt_or_inf(bracket: f64) -> f64 {
    if bracket > 0.0 {
        1.0 / math::sqrt(bracket)
    } else {
        f64::INFINITY
    }
}

/// Sandwich around [`crate::snr::snr_lower_bound`] for user `i`, built
/// from the mean-square indices alone: `(sandwich_lower, sandwich_upper)`
/// with `sandwich_lower <= snr_lower_bound <= sandwich_upper`.
///
/// With `Z_U`/`Z_L` the largest/smallest pair weight over all users, the
/// brackets are
///
/// ```text
/// lower: (Z_ii·(R_AC + 1) + Z_U·(K-1)·R_CC)/(2N) + N_0/(2PT)
/// upper: (Z_ii·(R_AC + 1) + Z_L·(K-1)·R_CC)/(6N) + N_0/(2PT)
/// ```
///
/// inverted through `x^{-1/2}`. A degenerate all-zero bracket (no
/// fading, no other users, no noise) yields infinite bounds.
///
/// # Panics
///
/// Panics when `i` is out of range or the channel does not describe the
/// set's users.
pub fn sandwich_bounds(set: &SequenceSet, i: usize, channel: &ChannelProfile) -> (f64, f64) {
    channel
        .check_users(set.k_users())
        .expect("channel must describe the set's users");
    let coeffs = snr::coefficients_of(set);
    sandwich_from_coeffs(&coeffs, i, channel)
}

/// Sandwich bounds from precomputed coefficients.
pub(crate) fn sandwich_from_coeffs(
    coeffs: &[SpectralCoefficients],
    i: usize,
    channel: &ChannelProfile,
) -> (f64, f64) {
    let n = coeffs[i].n() as f64;
    let k_users = coeffs.len();
    let r_ac = r_ac_user_from_coeffs(&coeffs[i]);
    let cross = r_cc_user_from_coeffs(coeffs, i).map_or(0.0, |r_cc| (k_users - 1) as f64 * r_cc);
    let mut z_u = f64::NEG_INFINITY;
    let mut z_l = f64::INFINITY;
    for k in 0..k_users {
        let z = snr::z_factor(i, k, channel);
        z_u = z_u.max(z);
        z_l = z_l.min(z);
    }
    let core = snr::z_factor(i, i, channel) * (r_ac + 1.0);
    let noise = snr::noise_term(channel);
    let lower_bracket = (core + z_u * cross) / (2.0 * n) + noise;
    let upper_bracket = (core + z_l * cross) / (6.0 * n) + noise;
    (
        inv_sqrt_or_inf(lower_bracket),
        inv_sqrt_or_inf(upper_bracket),
    )
}
