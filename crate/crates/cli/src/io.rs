//! File formats: JSON sequence-set and channel files, and the CSV export
//! of a correlation profile.
//!
//! Set files are `{"n": int, "k": int, "sequences": [[[re, im], ...], ...]}`
//! with `k` outer entries of `n` `[re, im]` pairs; channel files are
//! `{"p": real, "t": real, "n0": real, "users": [{"gamma": real,
//! "c": real, "m": int}, ...]}`. Unknown fields are rejected so schema
//! drift is caught at the parse, and normalization is validated on load —
//! never silently repaired.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use seqsnr_core::correlation::CorrelationProfile;
use seqsnr_core::seqset::SequenceSet;
use seqsnr_core::snr::{ChannelProfile, UserChannel};
use seqsnr_core::Complex64;
use serde::{Deserialize, Serialize};

/// Anything that can go wrong loading or saving files; every variant is
/// an input error for exit-code purposes.
#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error("{path}: {message}")]
    Shape { path: String, message: String },
    #[error("{path}: {source}")]
    Invalid {
        path: String,
        source: seqsnr_core::Error,
    },
}

/// On-disk shape of a sequence set.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSetFile {
    pub n: usize,
    pub k: usize,
    pub sequences: Vec<Vec<[f64; 2]>>,
}

/// On-disk shape of one user's channel parameters.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelUserFile {
    pub gamma: f64,
    pub c: f64,
    pub m: u32,
}

/// On-disk shape of a channel profile.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub p: f64,
    pub t: f64,
    pub n0: f64,
    pub users: Vec<ChannelUserFile>,
}

fn read_to_string(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn shape_err(path: &Path, message: String) -> IoError {
    IoError::Shape {
        path: path.display().to_string(),
        message,
    }
}

/// Loads and validates a sequence-set file.
pub fn load_set(path: &Path) -> Result<SequenceSet, IoError> {
    let text = read_to_string(path)?;
    let file: SequenceSetFile = serde_json::from_str(&text).map_err(|source| IoError::Parse {
        path: path.display().to_string(),
        source,
    })?;
    if file.sequences.len() != file.k {
        return Err(shape_err(
            path,
            format!(
                "field \"k\" is {} but \"sequences\" has {} entries",
                file.k,
                file.sequences.len()
            ),
        ));
    }
    for (row, seq) in file.sequences.iter().enumerate() {
        if seq.len() != file.n {
            return Err(shape_err(
                path,
                format!(
                    "field \"n\" is {} but sequence {} has {} chips",
                    file.n,
                    row,
                    seq.len()
                ),
            ));
        }
    }
    let seqs = file
        .sequences
        .iter()
        .map(|seq| seq.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    SequenceSet::new(seqs).map_err(|source| IoError::Invalid {
        path: path.display().to_string(),
        source,
    })
}

/// Serializes JSON with every float printed at 17 significant digits, so
/// files are byte-stable and round-trip losslessly.
struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Writes a sequence set in the on-disk schema.
pub fn save_set(path: &Path, set: &SequenceSet) -> Result<(), IoError> {
    let file = SequenceSetFile {
        n: set.n(),
        k: set.k_users(),
        sequences: set
            .seqs()
            .iter()
            .map(|seq| seq.iter().map(|z| [z.re, z.im]).collect())
            .collect(),
    };
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    file.serialize(&mut ser).map_err(|source| IoError::Parse {
        path: path.display().to_string(),
        source,
    })?;
    buf.push(b'\n');
    fs::write(path, buf).map_err(|source| IoError::Write {
        path: path.display().to_string(),
        source,
    })
}

/// Loads and validates a channel file.
pub fn load_channel(path: &Path) -> Result<ChannelProfile, IoError> {
    let text = read_to_string(path)?;
    let file: ChannelFile = serde_json::from_str(&text).map_err(|source| IoError::Parse {
        path: path.display().to_string(),
        source,
    })?;
    let users = file
        .users
        .iter()
        .map(|u| UserChannel::new(u.gamma, u.c, u.m))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|source| IoError::Invalid {
            path: path.display().to_string(),
            source,
        })?;
    ChannelProfile::new(file.p, file.t, file.n0, users).map_err(|source| IoError::Invalid {
        path: path.display().to_string(),
        source,
    })
}

/// Formats a float at 17 significant digits for CSV cells.
pub fn csv_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes one pair's correlation profile as CSV: aperiodic values over
/// the full lag window `1-N ..= N-1`, periodic and odd values (defined
/// for `0 ..= N-1`) left empty on negative lags.
pub fn write_correlation_csv(
    out: &mut dyn Write,
    profile: &CorrelationProfile,
) -> std::io::Result<()> {
    let n = profile.n() as i64;
    let mut text = String::from("l,re_c,im_c,re_theta,im_theta,re_theta_hat,im_theta_hat\n");
    for l in (1 - n)..n {
        let c = profile.aperiodic_at(l);
        let _ = write!(text, "{l},{},{}", csv_num(c.re), csv_num(c.im));
        if l >= 0 {
            let theta = profile.periodic()[l as usize];
            let odd = profile.odd()[l as usize];
            let _ = write!(
                text,
                ",{},{},{},{}",
                csv_num(theta.re),
                csv_num(theta.im),
                csv_num(odd.re),
                csv_num(odd.im)
            );
        } else {
            text.push_str(",,,,");
        }
        text.push('\n');
    }
    out.write_all(text.as_bytes())
}
