//! Aperiodic, periodic, and odd correlations, plus the data-modulated
//! quadratic form that feeds the interference integrals.
//!
//! Everything here is evaluated as direct sums over chips. This module is
//! the reference path: the spectral identities in [`crate::spectral`] and
//! the closed forms in [`crate::snr`] are tested against these sums.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::seqset::SequenceSet;

/// Aperiodic crosscorrelation `C_{i,k}(l)` between users `i` and `k`.
///
/// For `0 <= l <= N-1` this is `Σ conj(s_i[m+l])·s_k[m]` over the
/// overlap; for `1-N <= l < 0` it is `Σ conj(s_i[m])·s_k[m+|l|]`; lags
/// beyond `±(N-1)` have no overlap and return zero. The symmetry
/// `C_{k,i}(-l) = conj(C_{i,k}(l))` holds exactly.
///
/// # Panics
///
/// Panics when `i` or `k` is out of range.
pub fn aperiodic_corr(set: &SequenceSet, i: usize, k: usize, l: i64) -> Complex64 {
    let n = set.n() as i64;
    let si = set.user(i);
    let sk = set.user(k);
    if l >= 0 {
        if l > n - 1 {
            return Complex64::new(0.0, 0.0);
        }
        let l = l as usize;
        (0..set.n() - l).map(|m| si[m + l].conj() * sk[m]).sum()
    } else {
        if -l > n - 1 {
            return Complex64::new(0.0, 0.0);
        }
        let shift = (-l) as usize;
        (0..set.n() - shift)
            .map(|m| si[m].conj() * sk[m + shift])
            .sum()
    }
}

/// Periodic (even) correlation `θ_{i,k}(l) = C(l) + C(l-N)` for
/// `0 <= l <= N-1`.
///
/// # Errors
///
/// [`Error::LagOutOfRange`] for `l >= N`.
pub fn periodic_corr(set: &SequenceSet, i: usize, k: usize, l: usize) -> Result<Complex64> {
    let n = set.n();
    if l >= n {
        return Err(Error::LagOutOfRange {
            lag: l as i64,
            max: n as i64 - 1,
        });
    }
    Ok(aperiodic_corr(set, i, k, l as i64) + aperiodic_corr(set, i, k, l as i64 - n as i64))
}

/// Odd correlation `θ̂_{i,k}(l) = C(l) - C(l-N)` for `0 <= l <= N-1`.
///
/// # Errors
///
/// [`Error::LagOutOfRange`] for `l >= N`.
pub fn odd_corr(set: &SequenceSet, i: usize, k: usize, l: usize) -> Result<Complex64> {
    let n = set.n();
    if l >= n {
        return Err(Error::LagOutOfRange {
            lag: l as i64,
            max: n as i64 - 1,
        });
    }
    Ok(aperiodic_corr(set, i, k, l as i64) - aperiodic_corr(set, i, k, l as i64 - n as i64))
}

/// Consecutive data bits `(b_prev, b_cur)` of the interfering user, each
/// `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BitPair {
    prev: i8,
    cur: i8,
}

impl BitPair {
    /// The four equally likely bit pairs, in a fixed enumeration order.
    pub const ALL: [BitPair; 4] = [
        BitPair { prev: 1, cur: 1 },
        BitPair { prev: 1, cur: -1 },
        BitPair { prev: -1, cur: 1 },
        BitPair { prev: -1, cur: -1 },
    ];

    /// Validates that both bits are `+1` or `-1`.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidBit`] otherwise.
    pub fn new(prev: i8, cur: i8) -> Result<Self> {
        for value in [prev, cur] {
            if value != 1 && value != -1 {
                return Err(Error::InvalidBit { value });
            }
        }
        Ok(Self { prev, cur })
    }

    /// Bit carried by the previous symbol, as `±1.0`.
    pub fn prev(self) -> f64 {
        f64::from(self.prev)
    }

    /// Bit carried by the current symbol, as `±1.0`.
    pub fn cur(self) -> f64 {
        f64::from(self.cur)
    }
}

/// Data-modulated quadratic form at delay `l` chips.
///
/// This is the value `s_i* B s_k` where `B` places `b_prev` on the
/// wraparound band (the `l` chips of the previous symbol still inside the
/// window) and `b_cur` on the in-symbol band of width `N - l`. The bands
/// are evaluated as the two direct boundary sums in `O(N)`; the matrix is
/// never materialized. `l` runs over `0..=N`: at `l = 0` only the current
/// symbol contributes and at `l = N` only the previous one does (full
/// wraparound).
///
/// For bits `(+1,+1)` the value equals `θ_{i,k}(l)`, for `(-1,-1)` it is
/// `-θ_{i,k}(l)`, for `(-1,+1)` it equals `θ̂_{i,k}(l)`, and for
/// `(+1,-1)` it is `-θ̂_{i,k}(l)` (taking `θ`, `θ̂` to be zero-extended
/// at `l = N` to `C(0)` and `-C(0)` wraparound values respectively).
///
/// # Errors
///
/// [`Error::LagOutOfRange`] for `l > N`.
///
/// # Panics
///
/// Panics when `i` or `k` is out of range.
pub fn quad_form(
    set: &SequenceSet,
    i: usize,
    k: usize,
    l: usize,
    bits: BitPair,
) -> Result<Complex64> {
    let n = set.n();
    if l > n {
        return Err(Error::LagOutOfRange {
            lag: l as i64,
            max: n as i64,
        });
    }
    let si = set.user(i);
    let sk = set.user(k);
    let wrap: Complex64 = (0..l).map(|m| si[m].conj() * sk[n - l + m]).sum();
    let direct: Complex64 = (0..n - l).map(|m| si[l + m].conj() * sk[m]).sum();
    Ok(wrap * bits.prev() + direct * bits.cur())
}

/// All correlations of one user pair: the aperiodic values over
/// `l = 1-N ..= N-1` and the periodic/odd values over `l = 0..=N-1`.
///
/// The stored arrays satisfy `θ(l) = C(l) + C(l-N)` and
/// `θ̂(l) = C(l) - C(l-N)` by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationProfile {
    i: usize,
    k: usize,
    n: usize,
    aperiodic: Vec<Complex64>,
    periodic: Vec<Complex64>,
    odd: Vec<Complex64>,
}

impl CorrelationProfile {
    /// Computes the full profile for the ordered pair `(i, k)`.
    ///
    /// # Panics
    ///
    /// Panics when `i` or `k` is out of range.
    pub fn compute(set: &SequenceSet, i: usize, k: usize) -> Self {
        let n = set.n();
        let aperiodic = (1 - n as i64..=n as i64 - 1)
            .map(|l| aperiodic_corr(set, i, k, l))
            .collect::<Vec<_>>();
        let periodic = (0..n)
            .map(|l| {
                aperiodic[idx(l as i64, n)]
                    + if l == 0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        aperiodic[idx(l as i64 - n as i64, n)]
                    }
            })
            .collect();
        let odd = (0..n)
            .map(|l| {
                aperiodic[idx(l as i64, n)]
                    - if l == 0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        aperiodic[idx(l as i64 - n as i64, n)]
                    }
            })
            .collect();
        Self {
            i,
            k,
            n,
            aperiodic,
            periodic,
            odd,
        }
    }

    /// The ordered user pair `(i, k)`.
    pub fn pair(&self) -> (usize, usize) {
        (self.i, self.k)
    }

    /// Sequence length `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Aperiodic value at lag `l`; zero outside `1-N ..= N-1`.
    pub fn aperiodic_at(&self, l: i64) -> Complex64 {
        if l <= -(self.n as i64) || l >= self.n as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            self.aperiodic[idx(l, self.n)]
        }
    }

    /// Aperiodic values in lag order `1-N ..= N-1`.
    pub fn aperiodic(&self) -> &[Complex64] {
        &self.aperiodic
    }

    /// Periodic values in lag order `0 ..= N-1`.
    pub fn periodic(&self) -> &[Complex64] {
        &self.periodic
    }

    /// Odd values in lag order `0 ..= N-1`.
    pub fn odd(&self) -> &[Complex64] {
        &self.odd
    }
}

/// Index of lag `l` inside the `1-N ..= N-1` storage order.
fn idx(l: i64, n: usize) -> usize {
    (l + n as i64 - 1) as usize
}
