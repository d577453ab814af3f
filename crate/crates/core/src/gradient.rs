//! The SNR-bracket objective on free spectral parameters and its analytic
//! gradients, in parameter space and in sequence space, with
//! central-difference references for validation.
//!
//! Each user's coefficients are split into four real vectors (real and
//! imaginary parts on both bases). The objective for user `i` is the
//! reciprocal-square SNR bracket
//! `Σ_k Z_{i,k}·Σ_m Ŝ_m^{i,k}/(6N²) + N_0/(2PT)` evaluated through
//! [`crate::snr::s_hat_term`]; minimizing it maximizes the SNR lower
//! bound. Because `Ŝ` is quadratic in each squared amplitude, the
//! gradient is closed-form and mode-local. The chain rule through the
//! unitary projections turns the parameter gradient into a sequence-space
//! gradient without materializing any matrix.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{self, cis, TAU};
use crate::seqset::SequenceSet;
use crate::snr::{
    mode_weight_plain, mode_weight_shifted, noise_term, s_hat_term, z_factor, ChannelProfile,
};
use crate::spectral::{project, SpectralCoefficients};

/// One user's free spectral parameters: the real and imaginary parts of
/// the coefficients on both bases, as four independent real vectors.
///
/// The fields are deliberately public — optimizers mutate them freely; no
/// hypersphere constraint is enforced here.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector {
    /// Real parts of the plain-basis coefficients.
    pub alpha_re: Vec<f64>,
    /// Imaginary parts of the plain-basis coefficients.
    pub alpha_im: Vec<f64>,
    /// Real parts of the shifted-basis coefficients.
    pub beta_re: Vec<f64>,
    /// Imaginary parts of the shifted-basis coefficients.
    pub beta_im: Vec<f64>,
}

impl ParamVector {
    /// All-zero parameters for `n` modes.
    pub fn zeros(n: usize) -> Self {
        Self {
            alpha_re: alloc::vec![0.0; n],
            alpha_im: alloc::vec![0.0; n],
            beta_re: alloc::vec![0.0; n],
            beta_im: alloc::vec![0.0; n],
        }
    }

    fn split(alpha: &[Complex64], beta: &[Complex64]) -> Self {
        Self {
            alpha_re: alpha.iter().map(|z| z.re).collect(),
            alpha_im: alpha.iter().map(|z| z.im).collect(),
            beta_re: beta.iter().map(|z| z.re).collect(),
            beta_im: beta.iter().map(|z| z.im).collect(),
        }
    }

    /// Parameters matching validated spectral coefficients.
    pub fn from_coeffs(c: &SpectralCoefficients) -> Self {
        Self::split(c.alpha(), c.beta())
    }

    /// Parameters of an arbitrary (possibly off-sphere) sequence, for the
    /// finite-difference paths that perturb chips.
    pub(crate) fn from_sequence(s: &[Complex64]) -> Self {
        let (alpha, beta) = project(s);
        Self::split(&alpha, &beta)
    }

    /// Number of modes, taken from the first block without validation.
    pub fn n(&self) -> usize {
        self.alpha_re.len()
    }

    /// Number of modes after checking that all four blocks agree.
    ///
    /// # Errors
    ///
    /// [`Error::DimensionMismatch`] when the blocks are ragged.
    pub fn len_checked(&self) -> Result<usize> {
        let n = self.alpha_re.len();
        for block in [&self.alpha_im, &self.beta_re, &self.beta_im] {
            if block.len() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: block.len(),
                });
            }
        }
        Ok(n)
    }
}

fn block(p: &ParamVector, b: usize) -> &[f64] {
    match b {
        0 => &p.alpha_re,
        1 => &p.alpha_im,
        2 => &p.beta_re,
        _ => &p.beta_im,
    }
}

fn block_mut(p: &mut ParamVector, b: usize) -> &mut Vec<f64> {
    match b {
        0 => &mut p.alpha_re,
        1 => &mut p.alpha_im,
        2 => &mut p.beta_re,
        _ => &mut p.beta_im,
    }
}

/// SNR-bracket objective for user `i` on free parameters: smaller is
/// better, and on parameters taken from an actual sequence set it equals
/// `snr_lower_bound^{-2}`.
///
/// # Errors
///
/// [`Error::EmptySet`] for no users, [`Error::ChannelSizeMismatch`] when
/// the channel describes a different user count, and
/// [`Error::DimensionMismatch`] for ragged or unequal-length parameters.
///
/// # Panics
///
/// Panics when `i` is out of range.
pub fn objective(params: &[ParamVector], i: usize, channel: &ChannelProfile) -> Result<f64> {
    if params.is_empty() {
        return Err(Error::EmptySet);
    }
    channel.check_users(params.len())?;
    assert!(i < params.len(), "user index out of range");
    let n = params[i].len_checked()?;
    let mut interference = 0.0;
    for (k, pk) in params.iter().enumerate() {
        let z = z_factor(i, k, channel);
        let mut sum = 0.0;
        for m in 1..=n {
            sum += s_hat_term(&params[i], pk, m)?;
        }
        interference += z * sum;
    }
    Ok(interference / (6.0 * (n * n) as f64) + noise_term(channel))
}

/// Analytic gradient of [`objective`] for user `i` with respect to user
/// `wrt`'s parameters. The gradient is mode-local: entry `m` depends only
/// on mode-`m` parameters.
///
/// # Panics
///
/// Panics when a user index is out of range, the channel describes a
/// different user count, or the parameter vectors are ragged.
pub fn grad_params(
    params: &[ParamVector],
    i: usize,
    channel: &ChannelProfile,
    wrt: usize,
) -> ParamVector {
    assert!(!params.is_empty(), "at least one user is required");
    channel
        .check_users(params.len())
        .expect("channel must describe every user");
    assert!(i < params.len(), "user index out of range");
    assert!(wrt < params.len(), "differentiation index out of range");
    let n = params[0]
        .len_checked()
        .expect("parameter blocks must agree in length");
    for p in params {
        assert_eq!(
            p.len_checked()
                .expect("parameter blocks must agree in length"),
            n,
            "users must share one length"
        );
    }
    let scale = 1.0 / (6.0 * (n * n) as f64);
    let zs: Vec<f64> = (0..params.len()).map(|k| z_factor(i, k, channel)).collect();
    let amp_sq = |p: &ParamVector, b0: usize, mm: usize| -> f64 {
        let re = block(p, b0)[mm];
        let im = block(p, b0 + 1)[mm];
        re * re + im * im
    };
    let mut g = ParamVector::zeros(n);
    for mm in 0..n {
        let weights = [mode_weight_plain(mm + 1, n), mode_weight_shifted(mm + 1, n)];
        for (half, w) in weights.iter().enumerate() {
            let b0 = 2 * half; // 0 → alpha blocks, 2 → beta blocks
            let own = amp_sq(&params[i], b0, mm);
            let factor = if wrt == i {
                let cross: f64 = (0..params.len())
                    .filter(|&k| k != i)
                    .map(|k| zs[k] * amp_sq(&params[k], b0, mm))
                    .sum();
                scale * w * (2.0 * zs[i] * own + cross)
            } else {
                scale * w * zs[wrt] * own
            };
            block_mut(&mut g, b0)[mm] = 2.0 * block(&params[wrt], b0)[mm] * factor;
            block_mut(&mut g, b0 + 1)[mm] = 2.0 * block(&params[wrt], b0 + 1)[mm] * factor;
        }
    }
    g
}

/// Central-difference reference for [`grad_params`].
///
/// # Errors
///
/// [`Error::InvalidParameter`] unless `eps` is finite and positive, plus
/// anything [`objective`] reports for the inputs.
///
/// # Panics
///
/// Panics when a user index is out of range.
pub fn fd_grad_params(
    params: &[ParamVector],
    i: usize,
    channel: &ChannelProfile,
    wrt: usize,
    eps: f64,
) -> Result<ParamVector> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "eps",
            value: eps,
        });
    }
    assert!(wrt < params.len(), "differentiation index out of range");
    let n = params[wrt].len_checked()?;
    let mut work = params.to_vec();
    let mut out = ParamVector::zeros(n);
    for b in 0..4 {
        for mm in 0..n {
            let orig = block(&work[wrt], b)[mm];
            block_mut(&mut work[wrt], b)[mm] = orig + eps;
            let plus = objective(&work, i, channel)?;
            block_mut(&mut work[wrt], b)[mm] = orig - eps;
            let minus = objective(&work, i, channel)?;
            block_mut(&mut work[wrt], b)[mm] = orig;
            block_mut(&mut out, b)[mm] = (plus - minus) / (2.0 * eps);
        }
    }
    Ok(out)
}

/// Analytic sequence-space gradient of [`objective`] for user `i` with
/// respect to user `wrt`'s chips. Entry `p` carries `∂f/∂Re s_p` in its
/// real part and `∂f/∂Im s_p` in its imaginary part; it is the image of
/// the parameter gradient under the two basis maps, accumulated directly
/// from the defining sums.
///
/// # Panics
///
/// Panics when a user index is out of range or the channel does not
/// describe the set's users.
pub fn grad_sequence(
    set: &SequenceSet,
    i: usize,
    channel: &ChannelProfile,
    wrt: usize,
) -> Vec<Complex64> {
    channel
        .check_users(set.k_users())
        .expect("channel must describe the set's users");
    let params: Vec<ParamVector> = set
        .seqs()
        .iter()
        .map(|s| ParamVector::from_sequence(s))
        .collect();
    let g = grad_params(&params, i, channel, wrt);
    let n = set.n();
    let nf = n as f64;
    let scale = 1.0 / math::sqrt(nf);
    (0..n)
        .map(|p| {
            let mut h = Complex64::new(0.0, 0.0);
            for mm in 0..n {
                let ga = Complex64::new(g.alpha_re[mm], g.alpha_im[mm]);
                let gb = Complex64::new(g.beta_re[mm], g.beta_im[mm]);
                let freq = (mm + 1) as f64 / nf;
                h += cis(TAU * p as f64 * freq) * ga
                    + cis(TAU * p as f64 * (freq + 1.0 / (2.0 * nf))) * gb;
            }
            h * scale
        })
        .collect()
}

/// Central-difference reference for [`grad_sequence`], perturbing each
/// chip's real and imaginary part and projecting the perturbed sequence
/// (which leaves the energy sphere) onto the bases.
///
/// # Errors
///
/// [`Error::InvalidParameter`] unless `eps` is finite and positive,
/// [`Error::ChannelSizeMismatch`] when the channel does not describe the
/// set's users.
///
/// # Panics
///
/// Panics when a user index is out of range.
pub fn fd_grad_sequence(
    set: &SequenceSet,
    i: usize,
    channel: &ChannelProfile,
    wrt: usize,
    eps: f64,
) -> Result<Vec<Complex64>> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "eps",
            value: eps,
        });
    }
    channel.check_users(set.k_users())?;
    let mut work: Vec<ParamVector> = set
        .seqs()
        .iter()
        .map(|s| ParamVector::from_sequence(s))
        .collect();
    let n = set.n();
    let mut chips: Vec<Complex64> = set.user(wrt).to_vec();
    let eval = |chips: &mut Vec<Complex64>,
                work: &mut Vec<ParamVector>,
                p: usize,
                chip: Complex64|
     -> Result<f64> {
        chips[p] = chip;
        work[wrt] = ParamVector::from_sequence(chips);
        objective(work, i, channel)
    };
    let mut out = Vec::with_capacity(n);
    for p in 0..n {
        let orig = chips[p];
        let plus_re = eval(
            &mut chips,
            &mut work,
            p,
            Complex64::new(orig.re + eps, orig.im),
        )?;
        let minus_re = eval(
            &mut chips,
            &mut work,
            p,
            Complex64::new(orig.re - eps, orig.im),
        )?;
        let plus_im = eval(
            &mut chips,
            &mut work,
            p,
            Complex64::new(orig.re, orig.im + eps),
        )?;
        let minus_im = eval(
            &mut chips,
            &mut work,
            p,
            Complex64::new(orig.re, orig.im - eps),
        )?;
        eval(&mut chips, &mut work, p, orig)?;
        out.push(Complex64::new(
            (plus_re - minus_re) / (2.0 * eps),
            (plus_im - minus_im) / (2.0 * eps),
        ));
    }
    Ok(out)
}

fn rel(x: f64, y: f64, floor: f64) -> f64 {
    math::fabs(x - y) / math::fabs(x).max(math::fabs(y)).max(floor)
}

/// Worst componentwise relative deviation between two parameter vectors,
/// with `floor` guarding the denominator near zero.
///
/// # Panics
///
/// Panics when the vectors disagree in shape.
pub fn max_rel_error(a: &ParamVector, b: &ParamVector, floor: f64) -> f64 {
    let mut worst = 0.0f64;
    for blk in 0..4 {
        let (xs, ys) = (block(a, blk), block(b, blk));
        assert_eq!(xs.len(), ys.len(), "parameter vectors must agree in shape");
        for (x, y) in xs.iter().zip(ys) {
            worst = worst.max(rel(*x, *y, floor));
        }
    }
    worst
}

/// Worst componentwise relative deviation between two complex vectors,
/// comparing real and imaginary parts separately.
///
/// # Panics
///
/// Panics when the vectors disagree in length.
pub fn max_rel_error_complex(a: &[Complex64], b: &[Complex64], floor: f64) -> f64 {
    assert_eq!(a.len(), b.len(), "vectors must agree in length");
    a.iter().zip(b).fold(0.0f64, |worst, (x, y)| {
        worst
            .max(rel(x.re, y.re, floor))
            .max(rel(x.im, y.im, floor))
    })
}
