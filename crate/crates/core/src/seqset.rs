//! Sequence families and the validated sequence-set container.
//!
//! Every sequence in a set shares one length `N >= 2` and carries energy
//! `Σ_n |s_{k,n}|² = N`. Generation is a pure function of the generator
//! description: a given family/size/root/seed quadruple produces a
//! bit-identical set on every platform, because the seeded stream is
//! ChaCha8 and all transcendental math goes through `libm`.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::math;

/// Relative slack accepted on `Σ_n |s_n|² = N` when adopting foreign data.
///
/// Generated sets sit far inside this gate (unit-modulus chips are exact
/// to machine precision); the looser tolerance exists so that sets
/// serialized with finite decimal precision still validate.
pub const ENERGY_REL_TOL: f64 = 1e-6;

/// Sequence families with closed-form or seeded constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Every chip is `1 + 0j`.
    AllOnes,
    /// Unit-modulus chips with independent uniform phases.
    RandomPhase,
    /// Chips drawn from `{+1, -1}` with equal probability.
    RandomBinary,
    /// Zadoff-Chu sequences (odd length, root coprime to the length).
    ZadoffChu,
}

/// Everything needed to rebuild a sequence set deterministically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSpec {
    /// Family to draw from.
    pub family: Family,
    /// Sequence length (chips per symbol).
    pub n: usize,
    /// Zadoff-Chu root; ignored by the other families.
    pub root: u64,
    /// Seed for the random families; ignored by the deterministic ones.
    pub seed: u64,
}

/// A set of `k_users` complex sequences of common length `n`.
///
/// Construction validates the container invariants (common length >= 2,
/// per-user energy within [`ENERGY_REL_TOL`] of `n`); the data is
/// immutable afterwards, so the invariants hold for the set's lifetime.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceSet {
    n: usize,
    seqs: Vec<Vec<Complex64>>,
}

impl SequenceSet {
    /// Adopts raw sequences after validating the set invariants.
    ///
    /// # Errors
    ///
    /// [`Error::EmptySet`] when no sequences are given,
    /// [`Error::LengthTooShort`] when the common length is below 2,
    /// [`Error::RaggedSet`] when lengths differ, and
    /// [`Error::EnergyViolation`] (naming the offending user) when a
    /// sequence's energy strays beyond `ENERGY_REL_TOL` relative.
    pub fn new(seqs: Vec<Vec<Complex64>>) -> Result<Self> {
        let Some(first) = seqs.first() else {
            return Err(Error::EmptySet);
        };
        let n = first.len();
        if n < 2 {
            return Err(Error::LengthTooShort { n });
        }
        for (user, s) in seqs.iter().enumerate() {
            if s.len() != n {
                return Err(Error::RaggedSet {
                    user,
                    len: s.len(),
                    expected: n,
                });
            }
            let e = energy(s);
            if math::fabs(e - n as f64) > ENERGY_REL_TOL * n as f64 {
                return Err(Error::EnergyViolation {
                    user,
                    energy: e,
                    expected: n as f64,
                });
            }
        }
        Ok(Self { n, seqs })
    }

    /// Common sequence length `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of users `K`.
    pub fn k_users(&self) -> usize {
        self.seqs.len()
    }

    /// User `k`'s sequence.
    ///
    /// # Panics
    ///
    /// Panics when `k` is out of range.
    pub fn user(&self, k: usize) -> &[Complex64] {
        &self.seqs[k]
    }

    /// All sequences, indexed by user.
    pub fn seqs(&self) -> &[Vec<Complex64>] {
        &self.seqs
    }
}

/// Energy `Σ_n |s_n|²` of one sequence.
pub fn energy(s: &[Complex64]) -> f64 {
    s.iter().map(Complex64::norm_sqr).sum()
}

/// Builds a `k_users`-sequence set from a generator description.
///
/// The construction is pure: equal inputs give bit-identical sets across
/// runs and platforms.
///
/// # Errors
///
/// [`Error::LengthTooShort`] for `n < 2`, [`Error::EmptySet`] for
/// `k_users == 0`, [`Error::InvalidParameter`] for a Zadoff-Chu length
/// that is even, and [`Error::InvalidRoot`] when a Zadoff-Chu root is not
/// coprime to `n`.
pub fn generate(spec: &GeneratorSpec, k_users: usize) -> Result<SequenceSet> {
    if spec.n < 2 {
        return Err(Error::LengthTooShort { n: spec.n });
    }
    if k_users == 0 {
        return Err(Error::EmptySet);
    }
    let n = spec.n;
    let seqs = match spec.family {
        Family::AllOnes => {
            let one = alloc::vec![Complex64::new(1.0, 0.0); n];
            alloc::vec![one; k_users]
        }
        Family::RandomPhase => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            (0..k_users)
                .map(|_| {
                    (0..n)
                        .map(|_| math::cis(math::TAU * unit_f64(&mut rng)))
                        .collect()
                })
                .collect()
        }
        Family::RandomBinary => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            (0..k_users)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let sign = if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 };
                            Complex64::new(sign, 0.0)
                        })
                        .collect()
                })
                .collect()
        }
        Family::ZadoffChu => zadoff_chu(n, spec.root, k_users)?,
    };
    SequenceSet::new(seqs)
}

/// Uniform draw from `[0, 1)` built from the top 53 bits of one `u64`,
/// independent of any distribution crate's value-stability policy.
fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
}

/// Zadoff-Chu family: chip `n` (1-based) of the base sequence is
/// `exp(-jπ·root·(n-1)n / N)`, defined for odd `N` with `gcd(root, N) = 1`.
/// User `k` (0-based) receives the base sequence cyclically shifted by `k`
/// chips, which preserves unit modulus and the perfect periodic
/// autocorrelation. Even lengths are rejected: the `(n-1)n` phase profile
/// is only period-`N` when `N` is odd, so an even-length "sequence" from
/// this formula would silently lose the flat autocorrelation.
fn zadoff_chu(n: usize, root: u64, k_users: usize) -> Result<Vec<Vec<Complex64>>> {
    if n % 2 == 0 {
        return Err(Error::InvalidParameter {
            name: "zadoff-chu length (odd required)",
            value: n as f64,
        });
    }
    if math::gcd(root, n as u64) != 1 {
        return Err(Error::InvalidRoot { root, n });
    }
    let two_n = 2 * n as u128;
    let base: Vec<Complex64> = (0..n)
        .map(|p| {
            // Phase is -π·root·p(p+1)/N with p = n-1; reduce the integer
            // product modulo 2N first so the angle stays in [0, 2π).
            let prod = (root as u128 * p as u128 * (p as u128 + 1)) % two_n;
            math::cis(-core::f64::consts::PI * prod as f64 / n as f64)
        })
        .collect();
    Ok((0..k_users)
        .map(|k| (0..n).map(|p| base[(p + k) % n]).collect())
        .collect())
}
