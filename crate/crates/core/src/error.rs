use core::fmt;

/// Errors reported by the scoring kernels.
///
/// Operations whose documented contract lists error conditions return
/// these; violated preconditions that are not part of a contract (such as
/// out-of-range user indices) panic instead.
#[derive(Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// Sequences must be at least two chips long.
    LengthTooShort {
        /// Offending length.
        n: usize,
    },
    /// A sequence set or channel profile must describe at least one user.
    EmptySet,
    /// Sequences in one set do not share a common length.
    RaggedSet {
        /// Index of the offending user.
        user: usize,
        /// That user's sequence length.
        len: usize,
        /// Length established by user 0.
        expected: usize,
    },
    /// A sequence's energy differs from the common value beyond tolerance.
    EnergyViolation {
        /// Index of the offending user.
        user: usize,
        /// Measured energy `Σ_n |s_n|²`.
        energy: f64,
        /// Required energy (the sequence length).
        expected: f64,
    },
    /// Zadoff-Chu root must be coprime to the sequence length.
    InvalidRoot {
        /// Offending root.
        root: u64,
        /// Sequence length.
        n: usize,
    },
    /// Lag outside the range the requested quantity is defined on.
    LagOutOfRange {
        /// Offending lag.
        lag: i64,
        /// Largest admissible lag (the smallest is implied by context).
        max: i64,
    },
    /// Mode index outside `1..=n`.
    ModeOutOfRange {
        /// Offending mode index.
        m: usize,
        /// Number of modes.
        n: usize,
    },
    /// Vector norm too far from the common sphere radius.
    NormViolation {
        /// Measured squared norm.
        norm_sq: f64,
        /// Required squared norm.
        expected: f64,
    },
    /// Operands sized for different sequence lengths.
    DimensionMismatch {
        /// Length of the left operand.
        left: usize,
        /// Length of the right operand.
        right: usize,
    },
    /// Channel profile does not describe exactly the users in the set.
    ChannelSizeMismatch {
        /// Users in the sequence set.
        users: usize,
        /// Users described by the channel profile.
        channel: usize,
    },
    /// A scalar parameter lies outside its admissible range.
    InvalidParameter {
        /// Parameter name.
        name: &'static str,
        /// Offending value.
        value: f64,
    },
    /// The SNR bracket vanished; its inverse square root is undefined.
    ZeroDenominator,
    /// Quadrature needs an even panel count of at least two.
    BadPanelCount {
        /// Offending panel count.
        panels: usize,
    },
    /// Data bits must be +1 or -1.
    InvalidBit {
        /// Offending value.
        value: i8,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::LengthTooShort { n } => {
                write!(f, "sequence length {n} is below the minimum of 2")
            }
            Error::EmptySet => write!(f, "at least one user must be described"),
            Error::RaggedSet {
                user,
                len,
                expected,
            } => write!(
                f,
                "user {user} has {len} chips but the set's length is {expected}"
            ),
            Error::EnergyViolation {
                user,
                energy,
                expected,
            } => write!(
                f,
                "user {user} has energy {energy} but sequences of length {expected} \
                 must have energy {expected}"
            ),
            Error::InvalidRoot { root, n } => {
                write!(f, "root {root} is not coprime to the sequence length {n}")
            }
            Error::LagOutOfRange { lag, max } => {
                write!(f, "lag {lag} outside the admissible range (max {max})")
            }
            Error::ModeOutOfRange { m, n } => {
                write!(f, "mode index {m} outside 1..={n}")
            }
            Error::NormViolation { norm_sq, expected } => write!(
                f,
                "squared norm {norm_sq} too far from the required value {expected}"
            ),
            Error::DimensionMismatch { left, right } => {
                write!(f, "operands sized for lengths {left} and {right}")
            }
            Error::ChannelSizeMismatch { users, channel } => write!(
                f,
                "sequence set has {users} users but the channel profile describes {channel}"
            ),
            Error::InvalidParameter { name, value } => {
                write!(f, "parameter {name} = {value} outside its admissible range")
            }
            Error::ZeroDenominator => {
                write!(f, "SNR bracket is zero; the bound is undefined")
            }
            Error::BadPanelCount { panels } => {
                write!(f, "quadrature needs an even panel count >= 2, got {panels}")
            }
            Error::InvalidBit { value } => write!(f, "data bit must be +1 or -1, got {value}"),
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
