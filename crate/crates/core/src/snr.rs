//! Closed-form interference/fading variances and the SNR lower bound,
//! evaluated on the spectral side.
//!
//! For users `i != k` the interference power of `k` on `i`'s decision
//! statistic is `P·T²/(12N²) · (1 + γ_k²·L_k) · Σ_m S_m^{i,k}`, where the
//! per-mode coupling is
//!
//! ```text
//! S_m^{i,k} = |α_m^i|²·|α_m^k|²·(1 + cos(2πm/N)/2)
//!           + |β_m^i|²·|β_m^k|²·(1 + cos(2π(m/N + 1/(2N)))/2)
//! ```
//!
//! The self pair bounds the fading self-noise with prefactor
//! `P·T³·γ_i²·C_i·M_i/(12N²)`. Collecting both through the per-pair
//! weights `Z_{i,k}` gives the reciprocal-square SNR bracket
//! `Σ_k Z_{i,k}·Σ_m S_m^{i,k}/(6N²) + N_0/(2PT)`, whose inverse square
//! root lower-bounds the output SNR. Every formula in this module is
//! tested against the brute-force integration path in [`crate::oracle`].

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gradient::ParamVector;
use crate::math;
use crate::mean_square;
use crate::seqset::SequenceSet;
use crate::spectral::{to_spectral, SpectralCoefficients};

/// Fading and spreading description of one user's channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserChannel {
    gamma: f64,
    c_bound: f64,
    m_spread: u32,
}

impl UserChannel {
    /// Validates one user's parameters.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidParameter`] unless `gamma >= 0` (finite),
    /// `c_bound > 0` (finite), and `m_spread >= 1`.
    pub fn new(gamma: f64, c_bound: f64, m_spread: u32) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
            });
        }
        if !c_bound.is_finite() || c_bound <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "c_bound",
                value: c_bound,
            });
        }
        if m_spread < 1 {
            return Err(Error::InvalidParameter {
                name: "m_spread",
                value: f64::from(m_spread),
            });
        }
        Ok(Self {
            gamma,
            c_bound,
            m_spread,
        })
    }

    /// Fading gain ratio `γ` (zero disables fading for this user).
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Delay-profile bound `C`.
    pub fn c_bound(&self) -> f64 {
        self.c_bound
    }

    /// Multipath spread `M` in symbols.
    pub fn m_spread(&self) -> u32 {
        self.m_spread
    }
}

/// Global channel description: common power `P`, symbol duration `T`,
/// one-sided noise density `N_0`, and one [`UserChannel`] per user.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelProfile {
    power: f64,
    symbol_t: f64,
    noise_n0: f64,
    users: Vec<UserChannel>,
}

impl ChannelProfile {
    /// Validates the global parameters.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidParameter`] unless `power > 0`, `symbol_t > 0`,
    /// and `noise_n0 >= 0` (all finite); [`Error::EmptySet`] when no
    /// users are described.
    pub fn new(power: f64, symbol_t: f64, noise_n0: f64, users: Vec<UserChannel>) -> Result<Self> {
        if !power.is_finite() || power <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "power",
                value: power,
            });
        }
        if !symbol_t.is_finite() || symbol_t <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "symbol_t",
                value: symbol_t,
            });
        }
        if !noise_n0.is_finite() || noise_n0 < 0.0 {
            return Err(Error::InvalidParameter {
                name: "noise_n0",
                value: noise_n0,
            });
        }
        if users.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(Self {
            power,
            symbol_t,
            noise_n0,
            users,
        })
    }

    /// Common signal power `P`.
    pub fn power(&self) -> f64 {
        self.power
    }

    /// Symbol duration `T`.
    pub fn symbol_t(&self) -> f64 {
        self.symbol_t
    }

    /// One-sided noise spectral density `N_0`.
    pub fn noise_n0(&self) -> f64 {
        self.noise_n0
    }

    /// Per-user channel descriptions.
    pub fn users(&self) -> &[UserChannel] {
        &self.users
    }

    /// Worst-case interference memory `L_k = M_k·C_k·T` of user `k`.
    ///
    /// # Panics
    ///
    /// Panics when `k` is out of range.
    pub fn l_factor(&self, k: usize) -> f64 {
        let u = &self.users[k];
        f64::from(u.m_spread) * u.c_bound * self.symbol_t
    }

    /// Checks that the profile describes exactly `k_users` users.
    ///
    /// # Errors
    ///
    /// [`Error::ChannelSizeMismatch`] otherwise.
    pub fn check_users(&self, k_users: usize) -> Result<()> {
        if self.users.len() != k_users {
            return Err(Error::ChannelSizeMismatch {
                users: k_users,
                channel: self.users.len(),
            });
        }
        Ok(())
    }
}

/// Plain-basis mode weight `1 + cos(2πm/N)/2`, always in `[1/2, 3/2]`.
pub fn mode_weight_plain(m: usize, n: usize) -> f64 {
    1.0 + 0.5 * math::cos(math::TAU * m as f64 / n as f64)
}

/// Shifted-basis mode weight `1 + cos(2π(m/N + 1/(2N)))/2`, always in
/// `[1/2, 3/2]`.
pub fn mode_weight_shifted(m: usize, n: usize) -> f64 {
    1.0 + 0.5 * math::cos(math::TAU * (m as f64 / n as f64 + 1.0 / (2.0 * n as f64)))
}

/// Per-mode spectral coupling `S_m^{i,k}` between two users.
///
/// # Errors
///
/// [`Error::DimensionMismatch`] when the coefficient vectors belong to
/// different lengths, [`Error::ModeOutOfRange`] unless `1 <= m <= N`.
pub fn s_term(ci: &SpectralCoefficients, ck: &SpectralCoefficients, m: usize) -> Result<f64> {
    if ci.n() != ck.n() {
        return Err(Error::DimensionMismatch {
            left: ci.n(),
            right: ck.n(),
        });
    }
    let n = ci.n();
    if m < 1 || m > n {
        return Err(Error::ModeOutOfRange { m, n });
    }
    let mm = m - 1;
    let a = ci.alpha()[mm].norm_sqr() * ck.alpha()[mm].norm_sqr() * mode_weight_plain(m, n);
    let b = ci.beta()[mm].norm_sqr() * ck.beta()[mm].norm_sqr() * mode_weight_shifted(m, n);
    Ok(a + b)
}

/// Full spectral coupling `Σ_{m=1}^{N} S_m^{i,k}` of one user pair.
///
/// # Errors
///
/// [`Error::DimensionMismatch`] as in [`s_term`].
pub fn s_sum(ci: &SpectralCoefficients, ck: &SpectralCoefficients) -> Result<f64> {
    if ci.n() != ck.n() {
        return Err(Error::DimensionMismatch {
            left: ci.n(),
            right: ck.n(),
        });
    }
    Ok((1..=ci.n())
        .map(|m| s_term(ci, ck, m).expect("mode in range"))
        .sum())
}

/// Pair weight `Z_{i,k}` of the SNR bracket: `γ_i²·C_i·M_i·T` on the
/// diagonal (fading), `1 + γ_k²·L_k` off it (interference).
///
/// # Panics
///
/// Panics when an index is out of range.
pub fn z_factor(i: usize, k: usize, channel: &ChannelProfile) -> f64 {
    let u = &channel.users()[k];
    if i == k {
        u.gamma() * u.gamma() * u.c_bound() * f64::from(u.m_spread()) * channel.symbol_t()
    } else {
        1.0 + u.gamma() * u.gamma() * channel.l_factor(k)
    }
}

/// Closed-form interference variance contributed by user `k != i`:
/// `P·T²/(12N²) · (1 + γ_k²·L_k) · Σ_m S_m^{i,k}`.
///
/// # Errors
///
/// [`Error::ChannelSizeMismatch`] when the channel does not describe the
/// set's users.
///
/// # Panics
///
/// Panics when `i == k` or an index is out of range.
pub fn pair_interference_variance(
    set: &SequenceSet,
    i: usize,
    k: usize,
    channel: &ChannelProfile,
) -> Result<f64> {
    assert_ne!(i, k, "pair variance needs two distinct users");
    channel.check_users(set.k_users())?;
    let ci = to_spectral(set.user(i)).expect("set invariant guarantees the norm");
    let ck = to_spectral(set.user(k)).expect("set invariant guarantees the norm");
    Ok(pair_interference_from_coeffs(&ci, &ck, k, channel))
}

/// Pair interference term from precomputed coefficients.
pub(crate) fn pair_interference_from_coeffs(
    ci: &SpectralCoefficients,
    ck: &SpectralCoefficients,
    k: usize,
    channel: &ChannelProfile,
) -> f64 {
    let n = ci.n() as f64;
    let p = channel.power();
    let t = channel.symbol_t();
    let u = &channel.users()[k];
    let weight = 1.0 + u.gamma() * u.gamma() * channel.l_factor(k);
    p * t * t / (12.0 * n * n) * weight * s_sum(ci, ck).expect("equal lengths")
}

/// Total interference variance on user `i`'s decision statistic:
/// the sum of [`pair_interference_variance`] over all `k != i`. Zero for
/// a single-user set.
///
/// # Errors
///
/// [`Error::ChannelSizeMismatch`] when the channel does not describe the
/// set's users.
///
/// # Panics
///
/// Panics when `i` is out of range.
pub fn interference_variance(set: &SequenceSet, i: usize, channel: &ChannelProfile) -> Result<f64> {
    channel.check_users(set.k_users())?;
    let coeffs = coefficients_of(set);
    Ok((0..set.k_users())
        .filter(|&k| k != i)
        .map(|k| pair_interference_from_coeffs(&coeffs[i], &coeffs[k], k, channel))
        .sum())
}

/// Upper bound on the fading self-noise variance of user `i`:
/// `P·T³·γ_i²·C_i·M_i/(12N²) · Σ_m S_m^{i,i}`. Zero when `γ_i = 0`.
///
/// # Panics
///
/// Panics when `i` is out of range or the channel does not describe the
/// set's users.
pub fn fading_variance_bound(set: &SequenceSet, i: usize, channel: &ChannelProfile) -> f64 {
    channel
        .check_users(set.k_users())
        .expect("channel must describe the set's users");
    let ci = to_spectral(set.user(i)).expect("set invariant guarantees the norm");
    fading_from_coeffs(&ci, i, channel)
}

/// Fading bound from precomputed coefficients.
pub(crate) fn fading_from_coeffs(
    ci: &SpectralCoefficients,
    i: usize,
    channel: &ChannelProfile,
) -> f64 {
    let n = ci.n() as f64;
    let p = channel.power();
    let t = channel.symbol_t();
    // P·T³·γ²CM/(12N²) = P·T²/(12N²) · Z_{i,i}.
    p * t * t / (12.0 * n * n) * z_factor(i, i, channel) * s_sum(ci, ci).expect("equal lengths")
}

/// Closed-form lower bound on user `i`'s output SNR:
/// `[Σ_k Z_{i,k}·Σ_m S_m^{i,k}/(6N²) + N_0/(2PT)]^{-1/2}`.
///
/// # Errors
///
/// [`Error::ChannelSizeMismatch`] when the channel does not describe the
/// set's users, and [`Error::ZeroDenominator`] when the bracket vanishes
/// (no interference, no fading, no noise), where the bound is undefined.
///
/// # Panics
///
/// Panics when `i` is out of range.
pub fn snr_lower_bound(set: &SequenceSet, i: usize, channel: &ChannelProfile) -> Result<f64> {
    channel.check_users(set.k_users())?;
    let coeffs = coefficients_of(set);
    let bracket = bracket_from_coeffs(&coeffs, i, channel);
    if bracket <= 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(1.0 / math::sqrt(bracket))
}

/// Reciprocal-square bracket of the SNR bound, from precomputed
/// coefficients.
pub(crate) fn bracket_from_coeffs(
    coeffs: &[SpectralCoefficients],
    i: usize,
    channel: &ChannelProfile,
) -> f64 {
    let n = coeffs[i].n() as f64;
    let interference: f64 = (0..coeffs.len())
        .map(|k| z_factor(i, k, channel) * s_sum(&coeffs[i], &coeffs[k]).expect("equal lengths"))
        .sum();
    interference / (6.0 * n * n) + noise_term(channel)
}

/// Thermal-noise term `N_0/(2PT)` of the bracket.
pub(crate) fn noise_term(channel: &ChannelProfile) -> f64 {
    channel.noise_n0() / (2.0 * channel.power() * channel.symbol_t())
}

/// Per-mode coupling evaluated on free parameters (split real/imaginary
/// coefficient vectors) instead of validated spectral coefficients; the
/// value agrees with [`s_term`] whenever the parameters represent actual
/// coefficients.
///
/// # Errors
///
/// [`Error::DimensionMismatch`] when the two parameter vectors disagree
/// in length (or are internally ragged), [`Error::ModeOutOfRange`]
/// unless `1 <= m <= N`.
pub fn s_hat_term(pi: &ParamVector, pk: &ParamVector, m: usize) -> Result<f64> {
    let n = pi.len_checked()?;
    let nk = pk.len_checked()?;
    if n != nk {
        return Err(Error::DimensionMismatch { left: n, right: nk });
    }
    if m < 1 || m > n {
        return Err(Error::ModeOutOfRange { m, n });
    }
    let mm = m - 1;
    let ai = pi.alpha_re[mm] * pi.alpha_re[mm] + pi.alpha_im[mm] * pi.alpha_im[mm];
    let ak = pk.alpha_re[mm] * pk.alpha_re[mm] + pk.alpha_im[mm] * pk.alpha_im[mm];
    let bi = pi.beta_re[mm] * pi.beta_re[mm] + pi.beta_im[mm] * pi.beta_im[mm];
    let bk = pk.beta_re[mm] * pk.beta_re[mm] + pk.beta_im[mm] * pk.beta_im[mm];
    Ok(ai * ak * mode_weight_plain(m, n) + bi * bk * mode_weight_shifted(m, n))
}

/// Spectral coefficients of every user of a validated set.
pub(crate) fn coefficients_of(set: &SequenceSet) -> Vec<SpectralCoefficients> {
    set.seqs()
        .iter()
        .map(|s| to_spectral(s).expect("set invariant guarantees the norm"))
        .collect()
}

/// Everything the analysis pipeline reports about one user.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrReport {
    /// User index the row describes.
    pub user: usize,
    /// Spectral coupling `Σ_m S_m^{i,k}` against every user `k`.
    pub s_sums: Vec<f64>,
    /// Total interference variance from the other users.
    pub var_interference: f64,
    /// Fading self-noise variance bound.
    pub var_fading_bound: f64,
    /// Closed-form SNR lower bound.
    pub snr_lower: f64,
    /// Mean-square autocorrelation index of this user.
    pub r_ac: f64,
    /// Mean-square crosscorrelation index; absent for single-user sets.
    pub r_cc: Option<f64>,
    /// Index-based lower sandwich bound on `snr_lower`.
    pub sandwich_lower: f64,
    /// Index-based upper sandwich bound on `snr_lower`.
    pub sandwich_upper: f64,
}

/// Builds the per-user analysis rows for a whole set.
///
/// # Errors
///
/// [`Error::ChannelSizeMismatch`] when the channel does not describe the
/// set's users, [`Error::ZeroDenominator`] when the SNR bracket vanishes.
pub fn build_reports(set: &SequenceSet, channel: &ChannelProfile) -> Result<Vec<SnrReport>> {
    channel.check_users(set.k_users())?;
    let coeffs = coefficients_of(set);
    (0..set.k_users())
        .map(|i| build_report_for_user(&coeffs, i, channel))
        .collect()
}

/// Builds one user's analysis row from precomputed coefficients. Rows
/// for different users can be built concurrently; the inputs are shared
/// read-only.
///
/// # Errors
///
/// [`Error::ZeroDenominator`] when the SNR bracket vanishes.
///
/// # Panics
///
/// Panics when `i` is out of range or `coeffs` does not match the
/// channel's user count.
pub fn build_report_for_user(
    coeffs: &[SpectralCoefficients],
    i: usize,
    channel: &ChannelProfile,
) -> Result<SnrReport> {
    assert_eq!(
        channel.users().len(),
        coeffs.len(),
        "channel must describe every user"
    );
    let s_sums: Vec<f64> = coeffs
        .iter()
        .map(|ck| s_sum(&coeffs[i], ck).expect("equal lengths"))
        .collect();
    let var_interference = (0..coeffs.len())
        .filter(|&k| k != i)
        .map(|k| pair_interference_from_coeffs(&coeffs[i], &coeffs[k], k, channel))
        .sum();
    let var_fading_bound = fading_from_coeffs(&coeffs[i], i, channel);
    let bracket = bracket_from_coeffs(coeffs, i, channel);
    if bracket <= 0.0 {
        return Err(Error::ZeroDenominator);
    }
    let snr_lower = 1.0 / math::sqrt(bracket);
    let r_ac = mean_square::r_ac_user_from_coeffs(&coeffs[i]);
    let r_cc = mean_square::r_cc_user_from_coeffs(coeffs, i);
    let (sandwich_lower, sandwich_upper) = mean_square::sandwich_from_coeffs(coeffs, i, channel);
    Ok(SnrReport {
        user: i,
        s_sums,
        var_interference,
        var_fading_bound,
        snr_lower,
        r_ac,
        r_cc,
        sandwich_lower,
        sandwich_upper,
    })
}
