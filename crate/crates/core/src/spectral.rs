//! Unitary spectral decomposition of sequences onto two harmonic bases —
//! a plain one and a half-bin-shifted one — plus the closed-form coupling
//! matrices between them and the per-delay eigenvalues that diagonalize
//! the data-modulated quadratic form.
//!
//! Basis `m` of size `N` has chips `exp(2πj·p·(m/N + η))` for chip index
//! `p = 0..N-1`; the plain basis uses `η = 0` and the shifted basis
//! `η = 1/(2N)`. Mode indices `m` run `1..=N` throughout. A sequence `s`
//! with energy `N` has coefficients `alpha` (plain) and `beta` (shifted),
//! both on the radius-`√N` hypersphere, and each determines the other
//! through the unitary coupling matrix `Φ` (`alpha = Φ·beta`) and its
//! inverse `Φ̂` (`beta = Φ̂·alpha`).
//!
//! Transforms are explicit `O(N²)` matrix products by design: the sizes
//! of interest are small and the explicit form keeps every identity
//! directly comparable with its defining sum.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::correlation::{quad_form, BitPair};
use crate::error::{Error, Result};
use crate::math::{self, cis, TAU};
use crate::seqset::{energy, SequenceSet, ENERGY_REL_TOL};

/// One column of a harmonic basis: chips `exp(2πj·p·(m/n + eta))` for
/// `p = 0..n-1`.
///
/// # Errors
///
/// [`Error::ModeOutOfRange`] unless `1 <= m <= n`, and
/// [`Error::LengthTooShort`] for `n < 2`.
pub fn basis_vector(m: usize, eta: f64, n: usize) -> Result<Vec<Complex64>> {
    if n < 2 {
        return Err(Error::LengthTooShort { n });
    }
    if m < 1 || m > n {
        return Err(Error::ModeOutOfRange { m, n });
    }
    let freq = m as f64 / n as f64 + eta;
    Ok((0..n).map(|p| cis(TAU * p as f64 * freq)).collect())
}

/// Spectral coefficients of one sequence on the two bases.
///
/// Both coefficient vectors keep the sequence's energy: `‖alpha‖² =
/// ‖beta‖² = N` up to rounding, because both transforms are unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients {
    n: usize,
    alpha: Vec<Complex64>,
    beta: Vec<Complex64>,
}

impl SpectralCoefficients {
    /// Sequence length `N` (also the number of modes per basis).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Plain-basis coefficients, mode `m` at index `m - 1`.
    pub fn alpha(&self) -> &[Complex64] {
        &self.alpha
    }

    /// Shifted-basis coefficients, mode `m` at index `m - 1`.
    pub fn beta(&self) -> &[Complex64] {
        &self.beta
    }

    /// Rebuilds the sequence from the plain-basis coefficients:
    /// `s_p = (1/√N) Σ_m alpha_m · exp(2πj·p·m/N)`.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let n = self.n;
        let scale = 1.0 / math::sqrt(n as f64);
        (0..n)
            .map(|p| {
                let sum: Complex64 = self
                    .alpha
                    .iter()
                    .enumerate()
                    .map(|(mm, &a)| a * cis(TAU * p as f64 * (mm + 1) as f64 / n as f64))
                    .sum();
                sum * scale
            })
            .collect()
    }
}

#[cfg(test)]
impl SpectralCoefficients {
    /// Test-only constructor that bypasses the norm gate, for exercising
    /// downstream validation.
    pub(crate) fn from_raw(n: usize, alpha: Vec<Complex64>, beta: Vec<Complex64>) -> Self {
        Self { n, alpha, beta }
    }
}

/// Projects a sequence onto both bases without validating its norm.
/// Shared by [`to_spectral`] and the finite-difference path in
/// [`crate::gradient`], which perturbs sequences off the hypersphere.
pub(crate) fn project(s: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = s.len();
    let scale = 1.0 / math::sqrt(n as f64);
    let coeff = |eta: f64| -> Vec<Complex64> {
        (1..=n)
            .map(|m| {
                let freq = m as f64 / n as f64 + eta;
                let sum: Complex64 = s
                    .iter()
                    .enumerate()
                    .map(|(p, &sp)| cis(-TAU * p as f64 * freq) * sp)
                    .sum();
                sum * scale
            })
            .collect()
    };
    (coeff(0.0), coeff(1.0 / (2.0 * n as f64)))
}

/// Decomposes an energy-`N` sequence into its spectral coefficients.
///
/// # Errors
///
/// [`Error::LengthTooShort`] for fewer than two chips and
/// [`Error::NormViolation`] when `Σ|s_p|²` strays from `N` beyond
/// [`ENERGY_REL_TOL`] relative.
pub fn to_spectral(s: &[Complex64]) -> Result<SpectralCoefficients> {
    let n = s.len();
    if n < 2 {
        return Err(Error::LengthTooShort { n });
    }
    let e = energy(s);
    if math::fabs(e - n as f64) > ENERGY_REL_TOL * n as f64 {
        return Err(Error::NormViolation {
            norm_sq: e,
            expected: n as f64,
        });
    }
    let (alpha, beta) = project(s);
    Ok(SpectralCoefficients { n, alpha, beta })
}

/// Eigenvalue of the plain basis at mode `m` (1-based) and delay `l`
/// chips: `exp(-2πj·l·m/N)`.
pub fn eigenvalue(m: usize, l: usize, n: usize) -> Complex64 {
    cis(-TAU * l as f64 * m as f64 / n as f64)
}

/// Eigenvalue of the shifted basis at mode `m` (1-based) and delay `l`
/// chips: `exp(-2πj·l·(m/N + 1/(2N)))`.
pub fn eigenvalue_shifted(m: usize, l: usize, n: usize) -> Complex64 {
    cis(-TAU * l as f64 * (m as f64 / n as f64 + 1.0 / (2.0 * n as f64)))
}

/// Dense row-major complex matrix, just enough linear algebra for the
/// unitary-structure checks: products, adjoints, and Frobenius residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Builds a matrix from an entry function over (row, column).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Row count.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Column count.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at (row, column).
    ///
    /// # Panics
    ///
    /// Panics out of range.
    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of range"
        );
        self.data[r * self.cols + c]
    }

    /// Matrix product `self · rhs`.
    ///
    /// # Panics
    ///
    /// Panics on inner-dimension mismatch.
    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        CMatrix::from_fn(self.rows, rhs.cols, |r, c| {
            (0..self.cols).map(|t| self.at(r, t) * rhs.at(t, c)).sum()
        })
    }

    /// Matrix-vector product `self · v`.
    ///
    /// # Panics
    ///
    /// Panics when `v.len()` differs from the column count.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "vector length must match columns");
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c) * v[c]).sum())
            .collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).conj())
    }

    /// Frobenius distance to the identity (square matrices).
    ///
    /// # Panics
    ///
    /// Panics when the matrix is not square.
    pub fn identity_residual(&self) -> f64 {
        assert_eq!(
            self.rows, self.cols,
            "identity residual needs a square matrix"
        );
        let mut acc = 0.0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let want = if r == c {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                acc += (self.at(r, c) - want).norm_sqr();
            }
        }
        math::sqrt(acc)
    }

    /// Frobenius distance of `self*·self` from the identity.
    pub fn unitarity_residual(&self) -> f64 {
        self.adjoint().mul(self).identity_residual()
    }
}

/// The two basis matrices and the two coupling matrices for one size.
///
/// `v` and `v_hat` hold the normalized basis columns (chip `p` in row
/// `p`, mode `m` in column `m-1`); `phi` maps shifted coefficients to
/// plain ones (`alpha = phi·beta`) and `phi_hat` is its inverse. All four
/// are unitary, and `phi·phi_hat = I`. Built once per size and read-only
/// afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisMatrices {
    n: usize,
    v: CMatrix,
    v_hat: CMatrix,
    phi: CMatrix,
    phi_hat: CMatrix,
}

impl BasisMatrices {
    /// Size the matrices were built for.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Plain basis matrix `V` (columns scaled by `1/√N`).
    pub fn v(&self) -> &CMatrix {
        &self.v
    }

    /// Shifted basis matrix `V̂`.
    pub fn v_hat(&self) -> &CMatrix {
        &self.v_hat
    }

    /// Coupling matrix: `alpha = phi·beta`.
    pub fn phi(&self) -> &CMatrix {
        &self.phi
    }

    /// Inverse coupling matrix: `beta = phi_hat·alpha`.
    pub fn phi_hat(&self) -> &CMatrix {
        &self.phi_hat
    }
}

/// Builds the basis and coupling matrices for size `n`.
///
/// The coupling matrices come from their closed forms: entry `(m, m')`
/// (1-based) of `phi` is `(2/N) / (1 - exp(2πj·((m'-m)/N + 1/(2N))))`,
/// and `phi_hat` carries `-1/(2N)` in place of `+1/(2N)`. The closed
/// forms equal `V*·V̂` and `V̂*·V`; tests pin that equality.
///
/// # Panics
///
/// Panics for `n < 2`.
pub fn build_matrices(n: usize) -> BasisMatrices {
    assert!(n >= 2, "basis matrices need n >= 2");
    let nf = n as f64;
    let scale = 1.0 / math::sqrt(nf);
    let v = CMatrix::from_fn(n, n, |p, mm| {
        cis(TAU * p as f64 * (mm + 1) as f64 / nf) * scale
    });
    let v_hat = CMatrix::from_fn(n, n, |p, mm| {
        cis(TAU * p as f64 * ((mm + 1) as f64 / nf + 1.0 / (2.0 * nf))) * scale
    });
    let one = Complex64::new(1.0, 0.0);
    let phi = CMatrix::from_fn(n, n, |mm, cc| {
        let d = cc as f64 - mm as f64;
        one * (2.0 / nf) / (one - cis(TAU * (d / nf + 1.0 / (2.0 * nf))))
    });
    let phi_hat = CMatrix::from_fn(n, n, |mm, cc| {
        let d = cc as f64 - mm as f64;
        one * (2.0 / nf) / (one - cis(TAU * (d / nf - 1.0 / (2.0 * nf))))
    });
    BasisMatrices {
        n,
        v,
        v_hat,
        phi,
        phi_hat,
    }
}

/// Residual `|s_i* B s_k - Σ_m λ_m·conj(coeff_m^i)·coeff_m^k|` between
/// the direct quadratic form and its eigenvalue expansion at delay `l`.
///
/// Bits `(+1,+1)`/`(-1,-1)` take the plain-basis expansion with sign
/// `±1`; bits `(-1,+1)`/`(+1,-1)` take the shifted-basis expansion with
/// sign `±1`.
///
/// # Panics
///
/// Panics when a user index is out of range or `l > N`.
pub fn eigen_check(set: &SequenceSet, i: usize, k: usize, l: usize, bits: BitPair) -> f64 {
    let n = set.n();
    let direct = quad_form(set, i, k, l, bits).expect("delay within 0..=N");
    let ci = to_spectral(set.user(i)).expect("set invariant guarantees the norm");
    let ck = to_spectral(set.user(k)).expect("set invariant guarantees the norm");
    let same_sign = bits.prev() == bits.cur();
    let expansion: Complex64 = if same_sign {
        (1..=n)
            .map(|m| eigenvalue(m, l, n) * ci.alpha()[m - 1].conj() * ck.alpha()[m - 1])
            .sum::<Complex64>()
            * bits.cur()
    } else {
        (1..=n)
            .map(|m| eigenvalue_shifted(m, l, n) * ci.beta()[m - 1].conj() * ck.beta()[m - 1])
            .sum::<Complex64>()
            * bits.cur()
    };
    math::cabs(direct - expansion)
}

/// Worst residual over the six delay-sum orthogonality identities of the
/// eigenvalue families at size `n`:
///
/// - `Σ_{l=0}^{N-1} λ_m(l)·conj(λ_{m'}(l)) = N·δ_{mm'}` for both
///   families, at delays `l` and `l+1` (four identities);
/// - the cross sums over `(l, l+1)` equal `N·exp(2πj·m'/N)·δ_{mm'}`
///   (plain) and `N·exp(2πj·(m'/N + 1/(2N)))·δ_{mm'}` (shifted).
///
/// # Panics
///
/// Panics for `n < 2`.
pub fn orthogonality_residual(n: usize) -> f64 {
    assert!(n >= 2, "orthogonality sums need n >= 2");
    let nf = n as f64;
    let mut worst = 0.0f64;
    for m in 1..=n {
        for mp in 1..=n {
            let delta = if m == mp { nf } else { 0.0 };
            let mut s = [Complex64::new(0.0, 0.0); 6];
            for l in 0..n {
                let a = eigenvalue(m, l, n);
                let ap = eigenvalue(mp, l, n);
                let a1 = eigenvalue(m, l + 1, n);
                let ap1 = eigenvalue(mp, l + 1, n);
                let b = eigenvalue_shifted(m, l, n);
                let bp = eigenvalue_shifted(mp, l, n);
                let b1 = eigenvalue_shifted(m, l + 1, n);
                let bp1 = eigenvalue_shifted(mp, l + 1, n);
                s[0] += a * ap.conj();
                s[1] += b * bp.conj();
                s[2] += a1 * ap1.conj();
                s[3] += b1 * bp1.conj();
                s[4] += a * ap1.conj();
                s[5] += b * bp1.conj();
            }
            let plain_phase = cis(TAU * mp as f64 / nf);
            let shifted_phase = cis(TAU * (mp as f64 / nf + 1.0 / (2.0 * nf)));
            let want = [
                Complex64::new(delta, 0.0),
                Complex64::new(delta, 0.0),
                Complex64::new(delta, 0.0),
                Complex64::new(delta, 0.0),
                plain_phase * delta,
                shifted_phase * delta,
            ];
            for (got, want) in s.iter().zip(want.iter()) {
                worst = worst.max(math::cabs(got - want));
            }
        }
    }
    worst
}

/// Worst residual over the unitary-structure identities at size `n`:
/// unitarity of `V`, `V̂`, `Φ`, `Φ̂`; `Φ·Φ̂ = I`; and agreement of the
/// closed-form `Φ`, `Φ̂` with `V*·V̂`, `V̂*·V`.
///
/// # Panics
///
/// Panics for `n < 2`.
pub fn unitary_structure_residual(n: usize) -> f64 {
    let mats = build_matrices(n);
    let mut worst = 0.0f64;
    for mat in [mats.v(), mats.v_hat(), mats.phi(), mats.phi_hat()] {
        worst = worst.max(mat.unitarity_residual());
    }
    worst = worst.max(mats.phi().mul(mats.phi_hat()).identity_residual());
    let from_bases = mats.v().adjoint().mul(mats.v_hat());
    let mut diff = 0.0;
    for r in 0..n {
        for c in 0..n {
            diff += (from_bases.at(r, c) - mats.phi().at(r, c)).norm_sqr();
        }
    }
    worst = worst.max(math::sqrt(diff));
    let from_bases_hat = mats.v_hat().adjoint().mul(mats.v());
    let mut diff_hat = 0.0;
    for r in 0..n {
        for c in 0..n {
            diff_hat += (from_bases_hat.at(r, c) - mats.phi_hat().at(r, c)).norm_sqr();
        }
    }
    worst.max(math::sqrt(diff_hat))
}

/// Tolerance for identity residuals: `1e-9` through `N = 256`, growing
/// linearly with `N` beyond that.
pub fn identity_tol(n: usize) -> f64 {
    if n <= 256 {
        1e-9
    } else {
        1e-9 * n as f64 / 256.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqset::{generate, Family, GeneratorSpec};

    fn random_set(n: usize, k: usize, seed: u64) -> SequenceSet {
        generate(
            &GeneratorSpec {
                family: Family::RandomPhase,
                n,
                root: 1,
                seed,
            },
            k,
        )
        .unwrap()
    }

    #[test]
    fn top_mode_basis_is_constant() {
        let w = basis_vector(4, 0.0, 4).unwrap();
        for z in &w {
            assert!(math::cabs(z - Complex64::new(1.0, 0.0)) < 1e-12);
        }
    }

    #[test]
    fn half_band_mode_alternates_sign() {
        let w = basis_vector(2, 0.0, 4).unwrap();
        let want = [1.0, -1.0, 1.0, -1.0];
        for (z, sign) in w.iter().zip(want) {
            assert!(math::cabs(z - Complex64::new(sign, 0.0)) < 1e-12);
        }
    }

    #[test]
    fn plain_basis_columns_are_orthogonal() {
        let w1 = basis_vector(1, 0.0, 8).unwrap();
        let w2 = basis_vector(2, 0.0, 8).unwrap();
        let dot: Complex64 = w1.iter().zip(&w2).map(|(a, b)| a.conj() * b).sum();
        assert!(math::cabs(dot) < 1e-12);
    }

    #[test]
    fn mode_and_length_ranges_are_enforced() {
        assert_eq!(
            basis_vector(0, 0.0, 4).unwrap_err(),
            Error::ModeOutOfRange { m: 0, n: 4 }
        );
        assert_eq!(
            basis_vector(5, 0.0, 4).unwrap_err(),
            Error::ModeOutOfRange { m: 5, n: 4 }
        );
        assert_eq!(
            basis_vector(1, 0.0, 1).unwrap_err(),
            Error::LengthTooShort { n: 1 }
        );
    }

    #[test]
    fn all_ones_concentrates_on_the_top_plain_mode() {
        let set = generate(
            &GeneratorSpec {
                family: Family::AllOnes,
                n: 4,
                root: 1,
                seed: 0,
            },
            1,
        )
        .unwrap();
        let c = to_spectral(set.user(0)).unwrap();
        for mm in 0..3 {
            assert!(math::cabs(c.alpha()[mm]) < 1e-12, "mode {}", mm + 1);
        }
        assert!(math::cabs(c.alpha()[3] - Complex64::new(2.0, 0.0)) < 1e-12);
    }

    #[test]
    fn shifted_basis_vector_concentrates_on_one_shifted_mode() {
        let n = 8;
        let c_phase = Complex64::new(0.6, 0.8);
        let w = basis_vector(1, 1.0 / (2.0 * n as f64), n).unwrap();
        let s: Vec<Complex64> = w.iter().map(|&z| z * c_phase).collect();
        let coeffs = to_spectral(&s).unwrap();
        let want = c_phase * math::sqrt(n as f64);
        assert!(math::cabs(coeffs.beta()[0] - want) < 1e-12);
        for mm in 1..n {
            assert!(math::cabs(coeffs.beta()[mm]) < 1e-12, "mode {}", mm + 1);
        }
    }

    #[test]
    fn both_coefficient_vectors_sit_on_the_hypersphere() {
        for seed in [1u64, 7, 40] {
            let set = random_set(12, 1, seed);
            let c = to_spectral(set.user(0)).unwrap();
            let na: f64 = c.alpha().iter().map(Complex64::norm_sqr).sum();
            let nb: f64 = c.beta().iter().map(Complex64::norm_sqr).sum();
            assert!(math::fabs(na - 12.0) < 1e-9 * 12.0);
            assert!(math::fabs(nb - 12.0) < 1e-9 * 12.0);
        }
    }

    #[test]
    fn reconstruction_returns_the_sequence() {
        let set = random_set(10, 1, 3);
        let c = to_spectral(set.user(0)).unwrap();
        let back = c.reconstruct();
        for (a, b) in back.iter().zip(set.user(0)) {
            assert!(math::cabs(a - b) < 1e-9);
        }
    }

    #[test]
    fn norm_gate_rejects_off_sphere_input() {
        let s = alloc::vec![Complex64::new(1.1, 0.0); 4];
        match to_spectral(&s).unwrap_err() {
            Error::NormViolation { norm_sq, expected } => {
                assert!(math::fabs(norm_sq - 4.84) < 1e-12);
                assert_eq!(expected, 4.0);
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert_eq!(
            to_spectral(&[Complex64::new(1.0, 0.0)]).unwrap_err(),
            Error::LengthTooShort { n: 1 }
        );
    }

    #[test]
    fn coupling_matrices_close_the_two_by_two_loop() {
        // Independent hand evaluation of the closed forms at N = 2.
        let n = 2.0;
        let entry = |d: f64, sign: f64| {
            Complex64::new(2.0 / n, 0.0)
                / (Complex64::new(1.0, 0.0) - cis(TAU * (d / n + sign / (2.0 * n))))
        };
        let phi = [
            [entry(0.0, 1.0), entry(1.0, 1.0)],
            [entry(-1.0, 1.0), entry(0.0, 1.0)],
        ];
        let phi_hat = [
            [entry(0.0, -1.0), entry(1.0, -1.0)],
            [entry(-1.0, -1.0), entry(0.0, -1.0)],
        ];
        for r in 0..2 {
            for c in 0..2 {
                let prod: Complex64 = (0..2).map(|t| phi[r][t] * phi_hat[t][c]).sum();
                let want = if r == c { 1.0 } else { 0.0 };
                assert!(
                    math::cabs(prod - Complex64::new(want, 0.0)) < 1e-12,
                    "({r},{c})"
                );
            }
        }
        // The crate's construction agrees with the hand evaluation.
        let mats = build_matrices(2);
        for r in 0..2 {
            for c in 0..2 {
                assert!(math::cabs(mats.phi().at(r, c) - phi[r][c]) < 1e-12);
                assert!(math::cabs(mats.phi_hat().at(r, c) - phi_hat[r][c]) < 1e-12);
            }
        }
    }

    #[test]
    fn unitary_structure_residuals_are_tiny() {
        for n in [2usize, 3, 8, 17] {
            let worst = unitary_structure_residual(n);
            assert!(worst < 1e-12, "n={n}: {worst}");
        }
    }

    #[test]
    fn coupling_matrix_converts_shifted_to_plain_coefficients() {
        let set = random_set(8, 1, 21);
        let c = to_spectral(set.user(0)).unwrap();
        let mats = build_matrices(8);
        let alpha_from_beta = mats.phi().mul_vec(c.beta());
        let beta_from_alpha = mats.phi_hat().mul_vec(c.alpha());
        for mm in 0..8 {
            assert!(math::cabs(alpha_from_beta[mm] - c.alpha()[mm]) < 1e-10);
            assert!(math::cabs(beta_from_alpha[mm] - c.beta()[mm]) < 1e-10);
        }
    }

    #[test]
    fn eigen_expansion_matches_quad_form_on_hand_case() {
        let set = generate(
            &GeneratorSpec {
                family: Family::AllOnes,
                n: 4,
                root: 1,
                seed: 0,
            },
            1,
        )
        .unwrap();
        let bits = BitPair::new(1, 1).unwrap();
        assert!(eigen_check(&set, 0, 0, 1, bits) < 1e-10);
    }

    #[test]
    fn eigen_expansion_matches_quad_form_for_all_delays() {
        let set = random_set(8, 2, 13);
        for (i, k) in [(0usize, 0usize), (0, 1)] {
            for l in 0..=8 {
                for bits in BitPair::ALL {
                    let r = eigen_check(&set, i, k, l, bits);
                    assert!(r < 1e-9, "pair ({i},{k}) delay {l} bits {bits:?}: {r}");
                }
            }
        }
    }

    #[test]
    fn delay_sum_orthogonality_holds() {
        for n in [2usize, 5, 16] {
            let worst = orthogonality_residual(n);
            assert!(worst < 1e-9, "n={n}: {worst}");
        }
    }

    #[test]
    fn tolerance_policy_scales_past_256() {
        assert_eq!(identity_tol(64), 1e-9);
        assert_eq!(identity_tol(256), 1e-9);
        assert!(math::fabs(identity_tol(512) - 2e-9) < 1e-24);
    }
}
