//! Scoring kernels for complex spreading-sequence sets in asynchronous
//! code-division multiple access.
//!
//! The crate covers, for a set of `K` unit-energy sequences of length `N`:
//!
//! - aperiodic / periodic / odd correlations and the data-modulated
//!   quadratic form behind the interference integrals ([`correlation`]);
//! - a pair of unitary spectral bases (plain and half-bin-shifted), the
//!   closed-form coupling matrices between them, and the eigenvalue
//!   identities that diagonalize every delay ([`spectral`]);
//! - closed-form interference/fading variances and the resulting SNR
//!   lower bound ([`snr`]);
//! - mean-square correlation indices in three equivalent formulations and
//!   the index-based sandwich that encloses the SNR bound ([`mean_square`]);
//! - analytic gradients of the SNR bracket in parameter and sequence
//!   space, with central-difference validation ([`gradient`]);
//! - a brute-force integration oracle that shares no code with the
//!   spectral machinery and pins every closed form down ([`oracle`]).
//!
//! The crate is `no_std` + `alloc`; all scalar math is routed through
//! `libm`, so results are bit-identical across platforms and between
//! `std` and `no_std` builds. File formats and the command-line front end
//! live in the companion `seqsnr` crate.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

pub mod correlation;
mod error;
pub mod gradient;
mod math;
pub mod mean_square;
pub mod oracle;
pub mod seqset;
pub mod snr;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
