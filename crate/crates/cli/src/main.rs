//! Command-line scoring of complex spreading-sequence sets: deterministic
//! generation, per-user SNR analysis, oracle-backed verification, and
//! gradient checking.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error.

mod io;
mod report;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use seqsnr_core::correlation::CorrelationProfile;
use seqsnr_core::gradient::{
    fd_grad_params, fd_grad_sequence, grad_params, grad_sequence, objective, ParamVector,
};
use seqsnr_core::seqset::{generate, Family, GeneratorSpec};
use seqsnr_core::spectral::to_spectral;

#[derive(Parser)]
#[command(
    name = "seqsnr",
    version,
    about = "Scores complex spreading-sequence sets for asynchronous CDMA: \
             SNR lower bounds, correlation indices, and gradients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    /// Every chip is 1 + 0j.
    AllOnes,
    /// Unit-modulus chips with uniform random phases.
    RandomPhase,
    /// Chips drawn from {+1, -1}.
    RandomBinary,
    /// Zadoff-Chu (odd length, root coprime to the length).
    ZadoffChu,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::AllOnes => Family::AllOnes,
            FamilyArg::RandomPhase => Family::RandomPhase,
            FamilyArg::RandomBinary => Family::RandomBinary,
            FamilyArg::ZadoffChu => Family::ZadoffChu,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl FormatArg {
    fn name(self) -> &'static str {
        match self {
            FormatArg::Json => "json",
            FormatArg::Csv => "csv",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a sequence-set file deterministically from a seed.
    Generate {
        /// Sequence family to draw from.
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Sequence length (chips per symbol).
        #[arg(long)]
        n: usize,
        /// Number of users (sequences) in the set.
        #[arg(long)]
        users: usize,
        /// Generator seed; identical seeds reproduce identical sets.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Zadoff-Chu root (must be coprime to the odd length).
        #[arg(long, default_value_t = 1)]
        root: u64,
        /// Output path for the set file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Score every user of a set against a channel profile.
    Analyze {
        /// Sequence-set file to score.
        #[arg(long)]
        input: PathBuf,
        /// Channel profile file.
        #[arg(long)]
        channel: PathBuf,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report format.
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        /// Also export one pair's correlation profile as CSV here.
        #[arg(long)]
        correlation_out: Option<PathBuf>,
        /// Which (i, k) pair the correlation export describes.
        #[arg(long, num_args = 2, value_names = ["I", "K"], requires = "correlation_out")]
        correlation_pair: Option<Vec<usize>>,
    },
    /// Re-derive every closed form against the brute-force oracle.
    Verify {
        /// Sequence length for the generated trial sets.
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Number of users per trial set.
        #[arg(long, default_value_t = 3)]
        users: usize,
        /// Number of seeded trials.
        #[arg(long, default_value_t = 20)]
        trials: u64,
        /// Base seed; trial t uses seed + t.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Residual tolerance for every check.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Compare analytic gradients with central differences.
    GradCheck {
        /// Sequence-set file.
        #[arg(long)]
        input: PathBuf,
        /// Channel profile file.
        #[arg(long)]
        channel: PathBuf,
        /// User whose objective is differentiated.
        #[arg(long)]
        user: usize,
        /// Central-difference step.
        #[arg(long, default_value_t = 1e-5)]
        eps: f64,
        /// Relative tolerance on each gradient component.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Absolute allowance per component. Defaults to a few units of the
        /// rounding noise a central difference carries (machine epsilon times
        /// the objective magnitude, divided by eps); pass 0 to compare purely
        /// relatively.
        #[arg(long)]
        atol: Option<f64>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Io(#[from] io::IoError),
    #[error("{0}")]
    Core(#[from] seqsnr_core::Error),
    #[error("{0}")]
    Config(String),
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Reads the SEQSNR_THREADS cap; absent means one worker per available
/// core. Anything but an integer >= 1 is an input error.
fn thread_cap() -> Result<usize, CliError> {
    match std::env::var("SEQSNR_THREADS") {
        Ok(text) => match text.trim().parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(config_err(format!(
                "SEQSNR_THREADS must be an integer >= 1, got {text:?}"
            ))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |p| p.get())),
    }
}

/// Input and output paths must be distinct so a report never clobbers
/// its own inputs.
fn check_distinct(input: &Path, output: &Path) -> Result<(), CliError> {
    let same = input == output
        || match (input.canonicalize(), output.canonicalize()) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        };
    if same {
        return Err(config_err(format!(
            "input and output paths must differ, both are {}",
            input.display()
        )));
    }
    Ok(())
}

fn write_or_stdout(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| {
            CliError::Io(io::IoError::Write {
                path: path.display().to_string(),
                source,
            })
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_generate(
    family: FamilyArg,
    n: usize,
    users: usize,
    seed: u64,
    root: u64,
    out: &Path,
) -> Result<ExitCode, CliError> {
    let spec = GeneratorSpec {
        family: family.into(),
        n,
        root,
        seed,
    };
    let set = generate(&spec, users)?;
    io::save_set(out, &set)?;
    println!(
        "wrote {}: n={} users={} seed={} root={}",
        out.display(),
        set.n(),
        set.k_users(),
        seed,
        root
    );
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn run_analyze(
    input: &Path,
    channel_path: &Path,
    out: Option<&Path>,
    format: FormatArg,
    correlation_out: Option<&Path>,
    correlation_pair: Option<&[usize]>,
) -> Result<ExitCode, CliError> {
    let threads = thread_cap()?;
    if let Some(out) = out {
        check_distinct(input, out)?;
        check_distinct(channel_path, out)?;
    }
    if let Some(corr) = correlation_out {
        check_distinct(input, corr)?;
        check_distinct(channel_path, corr)?;
    }
    let set = io::load_set(input)?;
    let channel = io::load_channel(channel_path)?;
    let pair = match correlation_pair {
        Some(&[i, k]) => Some([i, k]),
        Some(_) => unreachable!("clap enforces exactly two values"),
        None => correlation_out.map(|_| [0, 0]),
    };
    let echo = report::AnalyzeEcho {
        input: input.display().to_string(),
        channel: channel_path.display().to_string(),
        format: format.name(),
        correlation_out: correlation_out.map(|p| p.display().to_string()),
        correlation_pair: pair,
    };
    let rows = report::build_rows(&set, &channel, threads)?;
    if let Some(corr_path) = correlation_out {
        let [i, k] = pair.expect("pair defaults when the export is requested");
        if i >= set.k_users() || k >= set.k_users() {
            return Err(config_err(format!(
                "correlation pair ({i}, {k}) is out of range for {} users",
                set.k_users()
            )));
        }
        let profile = CorrelationProfile::compute(&set, i, k);
        let mut buf = Vec::new();
        io::write_correlation_csv(&mut buf, &profile).map_err(|source| {
            CliError::Io(io::IoError::Write {
                path: corr_path.display().to_string(),
                source,
            })
        })?;
        std::fs::write(corr_path, buf).map_err(|source| {
            CliError::Io(io::IoError::Write {
                path: corr_path.display().to_string(),
                source,
            })
        })?;
    }
    let text = match format {
        FormatArg::Json => report::render_json(&echo, set.n(), set.k_users(), &rows),
        FormatArg::Csv => report::render_csv(&echo, set.n(), set.k_users(), &rows),
    };
    write_or_stdout(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn run_verify(
    n: usize,
    users: usize,
    trials: u64,
    seed: u64,
    tol: f64,
) -> Result<ExitCode, CliError> {
    if !(tol > 0.0) {
        return Err(config_err(format!("tol must be > 0, got {tol}")));
    }
    if trials == 0 {
        return Err(config_err("trials must be >= 1"));
    }
    let report = verify::run(n, users, trials, seed, tol)?;
    print!("{}", verify::render(&report, n, users, seed, tol));
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

/// Worst component discrepancy measured against a mixed allowance: each
/// pair must satisfy `|a - b| <= max(atol, rtol * max(|a|, |b|))`, so the
/// returned ratio passes at <= 1. Identical components contribute zero.
fn worst_ratio(pairs: impl Iterator<Item = (f64, f64)>, atol: f64, rtol: f64) -> f64 {
    let mut worst = 0.0f64;
    for (a, b) in pairs {
        let diff = (a - b).abs();
        if diff > 0.0 {
            worst = worst.max(diff / (rtol * a.abs().max(b.abs())).max(atol));
        }
    }
    worst
}

fn param_components(p: &ParamVector) -> impl Iterator<Item = f64> + '_ {
    p.alpha_re
        .iter()
        .chain(&p.alpha_im)
        .chain(&p.beta_re)
        .chain(&p.beta_im)
        .copied()
}

fn run_grad_check(
    input: &Path,
    channel_path: &Path,
    user: usize,
    eps: f64,
    tol: f64,
    atol_flag: Option<f64>,
) -> Result<ExitCode, CliError> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(config_err(format!(
            "eps must be a positive real, got {eps}"
        )));
    }
    if !(tol > 0.0) {
        return Err(config_err(format!("tol must be > 0, got {tol}")));
    }
    if let Some(a) = atol_flag {
        if !(a >= 0.0) || !a.is_finite() {
            return Err(config_err(format!(
                "atol must be a non-negative real, got {a}"
            )));
        }
    }
    let set = io::load_set(input)?;
    let channel = io::load_channel(channel_path)?;
    channel.check_users(set.k_users())?;
    if user >= set.k_users() {
        return Err(config_err(format!(
            "user {user} is out of range for {} users",
            set.k_users()
        )));
    }
    let params = set
        .seqs()
        .iter()
        .map(|s| to_spectral(s).map(|c| ParamVector::from_coeffs(&c)))
        .collect::<Result<Vec<_>, _>>()?;
    // Each central difference rounds two objective evaluations, leaving
    // absolute noise of order machine-epsilon * |objective| / eps on every
    // component; the default allowance sits a safety factor above that so
    // components smaller than the measurement noise are compared absolutely
    // instead of failing on digits the probe cannot resolve.
    let f_scale = objective(&params, user, &channel)?.abs();
    let atol = atol_flag.unwrap_or(4.0 * f64::EPSILON * f_scale / eps);
    let mut worst_params = 0.0f64;
    let mut worst_seq = 0.0f64;
    for wrt in 0..set.k_users() {
        let analytic = grad_params(&params, user, &channel, wrt);
        let fd = fd_grad_params(&params, user, &channel, wrt, eps)?;
        worst_params = worst_params.max(worst_ratio(
            param_components(&analytic).zip(param_components(&fd)),
            atol,
            tol,
        ));
        let analytic_seq = grad_sequence(&set, user, &channel, wrt);
        let fd_seq = fd_grad_sequence(&set, user, &channel, wrt, eps)?;
        let seq_pairs = analytic_seq
            .iter()
            .flat_map(|c| [c.re, c.im])
            .zip(fd_seq.iter().flat_map(|c| [c.re, c.im]));
        worst_seq = worst_seq.max(worst_ratio(seq_pairs, atol, tol));
    }
    let pass = worst_params <= 1.0 && worst_seq <= 1.0;
    println!(
        "tool=seqsnr version={} command=grad-check input={} channel={} user={user} eps={eps:e} tol={tol:e}",
        env!("CARGO_PKG_VERSION"),
        input.display(),
        channel_path.display(),
    );
    println!(
        "absolute allowance {atol:.3e}{}",
        if atol_flag.is_none() {
            " (from the rounding noise of the objective)"
        } else {
            ""
        }
    );
    println!("parameter-space worst error ratio {worst_params:.3e} (pass <= 1)");
    println!("sequence-space worst error ratio {worst_seq:.3e} (pass <= 1)");
    println!("grad-check: {}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate {
            family,
            n,
            users,
            seed,
            root,
            out,
        } => run_generate(*family, *n, *users, *seed, *root, out),
        Command::Analyze {
            input,
            channel,
            out,
            format,
            correlation_out,
            correlation_pair,
        } => run_analyze(
            input,
            channel,
            out.as_deref(),
            *format,
            correlation_out.as_deref(),
            correlation_pair.as_deref(),
        ),
        Command::Verify {
            n,
            users,
            trials,
            seed,
            tol,
        } => run_verify(*n, *users, *trials, *seed, *tol),
        Command::GradCheck {
            input,
            channel,
            user,
            eps,
            tol,
            atol,
        } => run_grad_check(input, channel, *user, *eps, *tol, *atol),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
