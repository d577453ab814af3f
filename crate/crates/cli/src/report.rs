//! Analysis report assembly: per-user scoring rows rendered as JSON or
//! CSV, with the run configuration and tool version embedded so every
//! report is self-contained.
//!
//! Per-user rows are independent, so they may be computed on multiple
//! threads; rows are always assembled in user order, making the output
//! byte-identical regardless of the thread count.

use serde::Serialize;

use seqsnr_core::seqset::SequenceSet;
use seqsnr_core::snr::{build_report_for_user, ChannelProfile, SnrReport};
use seqsnr_core::spectral::to_spectral;

use crate::io::csv_num;

/// The analyze flags echoed into every report.
#[derive(Serialize)]
pub struct AnalyzeEcho {
    pub input: String,
    pub channel: String,
    pub format: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlation_out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlation_pair: Option<[usize; 2]>,
}

/// One user's scoring row as reported.
#[derive(Serialize)]
pub struct UserRow {
    pub user: usize,
    pub s_sums: Vec<f64>,
    pub var_interference: f64,
    pub var_fading_bound: f64,
    pub snr_lower: f64,
    pub snr_db: f64,
    pub r_ac: f64,
    pub r_cc: Option<f64>,
    pub sandwich_lower: f64,
    pub sandwich_upper: f64,
}

impl From<SnrReport> for UserRow {
    fn from(r: SnrReport) -> Self {
        UserRow {
            user: r.user,
            s_sums: r.s_sums,
            var_interference: r.var_interference,
            var_fading_bound: r.var_fading_bound,
            snr_lower: r.snr_lower,
            snr_db: 20.0 * r.snr_lower.log10(),
            r_ac: r.r_ac,
            r_cc: r.r_cc,
            sandwich_lower: r.sandwich_lower,
            sandwich_upper: r.sandwich_upper,
        }
    }
}

/// Whole analyze report in its JSON shape.
#[derive(Serialize)]
struct AnalyzeReport<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a AnalyzeEcho,
    n: usize,
    k_users: usize,
    users: &'a [UserRow],
}

/// Computes every user's row, fanning out across at most `threads`
/// workers over contiguous user ranges.
pub fn build_rows(
    set: &SequenceSet,
    channel: &ChannelProfile,
    threads: usize,
) -> Result<Vec<UserRow>, seqsnr_core::Error> {
    channel.check_users(set.k_users())?;
    let coeffs = set
        .seqs()
        .iter()
        .map(|s| to_spectral(s))
        .collect::<Result<Vec<_>, _>>()?;
    let k = set.k_users();
    let workers = threads.clamp(1, k);
    let mut slots: Vec<Option<Result<SnrReport, seqsnr_core::Error>>> =
        (0..k).map(|_| None).collect();
    let chunk = k.div_ceil(workers);
    std::thread::scope(|scope| {
        for (w, part) in slots.chunks_mut(chunk).enumerate() {
            let coeffs = &coeffs;
            scope.spawn(move || {
                for (off, slot) in part.iter_mut().enumerate() {
                    *slot = Some(build_report_for_user(coeffs, w * chunk + off, channel));
                }
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| {
            slot.expect("every user range was assigned")
                .map(UserRow::from)
        })
        .collect()
}

/// Renders the report as pretty JSON.
pub fn render_json(echo: &AnalyzeEcho, n: usize, k_users: usize, rows: &[UserRow]) -> String {
    let report = AnalyzeReport {
        tool: "seqsnr",
        version: env!("CARGO_PKG_VERSION"),
        command: "analyze",
        config: echo,
        n,
        k_users,
        users: rows,
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    text
}

/// Renders the report as CSV with `#` comment lines carrying the config.
pub fn render_csv(echo: &AnalyzeEcho, n: usize, k_users: usize, rows: &[UserRow]) -> String {
    let mut text = format!(
        "# tool=seqsnr version={} command=analyze\n# input={} channel={} format={}\n# n={n} k_users={k_users}\n",
        env!("CARGO_PKG_VERSION"),
        echo.input,
        echo.channel,
        echo.format,
    );
    text.push_str("user");
    for k in 0..k_users {
        text.push_str(&format!(",s_sum_{k}"));
    }
    text.push_str(
        ",var_interference,var_fading_bound,snr_lower,snr_db,r_ac,r_cc,sandwich_lower,sandwich_upper\n",
    );
    for row in rows {
        text.push_str(&row.user.to_string());
        for s in &row.s_sums {
            text.push(',');
            text.push_str(&csv_num(*s));
        }
        for x in [
            row.var_interference,
            row.var_fading_bound,
            row.snr_lower,
            row.snr_db,
            row.r_ac,
        ] {
            text.push(',');
            text.push_str(&csv_num(x));
        }
        text.push(',');
        if let Some(r_cc) = row.r_cc {
            text.push_str(&csv_num(r_cc));
        }
        text.push(',');
        text.push_str(&csv_num(row.sandwich_lower));
        text.push(',');
        text.push_str(&csv_num(row.sandwich_upper));
        text.push('\n');
    }
    text
}
