//! Subcommand bodies of the `leakexp` binary. Each returns the text it would
//! print, so the same code is reachable from tests.

use std::f64::consts::LN_2;
use std::fmt;

use leakexp::format::csv_num;
use leakexp::{
    best_matrix_search, critical_rate, critical_rate_bec, curve, exact_leakage, exact_leakage_bec,
    expurgation_rate, less_noisy_erasure_param, mc_p_ml_erasure, p_ml_erasure, trial_seed,
    BinMatrix, Channel, CurveKind, CurveTable, Error, LeakageReport, PmlResult, RateGrid,
};
use rayon::prelude::*;
use serde::Serialize;

pub const VERIFY_HEADER: &str = "trial,leakage_nats,bound_nats,slack_nats";
pub const SCALING_HEADER: &str = "n,k,best_leakage_nats,minus_log_leakage_over_n";

/// Monte Carlo sample count used by `pml` when the block is too long for
/// enumeration and no count was given.
pub const DEFAULT_MC_SAMPLES: u64 = 100_000;

// Redraws allowed per trial before giving up on a full-rank matrix.
const MAX_REDRAWS: u64 = 256;

/// An error paired with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(exit_code(&e), e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(1, e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

/// 2 bad input, 3 size limit, 4 degenerate parameter, 5 invariant violation.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::TooLarge { .. } => 3,
        Error::Degenerate(_) | Error::EmptyCode => 4,
        Error::Invariant(_) => 5,
        _ => 2,
    }
}

pub fn parse_matrix(text: &str) -> CliResult<BinMatrix> {
    Ok(text.parse::<BinMatrix>()?)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

pub fn leakage(m: &BinMatrix, channel: Channel) -> CliResult<String> {
    let report: LeakageReport = exact_leakage(m, channel)?;
    Ok(json(&report))
}

/// Decoding error probability over BEC(delta). Enumerates exactly unless
/// `samples` is given or `n` is beyond the enumeration limit.
pub fn pml(m: &BinMatrix, delta: f64, samples: Option<u64>, seed: u64) -> CliResult<String> {
    let result: PmlResult = match samples {
        Some(s) => mc_p_ml_erasure(m, delta, s, seed)?,
        None if m.cols() > leakexp::leakage::MAX_EXACT_N => {
            mc_p_ml_erasure(m, delta, DEFAULT_MC_SAMPLES, seed)?
        }
        None => p_ml_erasure(m, delta)?,
    };
    Ok(json(&result))
}

/// Full-rank `k x n` matrix for one trial; rank-deficient draws are replaced
/// by redraws from a derived seed.
pub fn trial_matrix(k: usize, n: usize, seed: u64, trial: u64) -> CliResult<BinMatrix> {
    let base = trial_seed(seed, trial);
    for attempt in 0..MAX_REDRAWS {
        let m = BinMatrix::random(k, n, trial_seed(base, attempt))?;
        if m.rank() == k {
            return Ok(m);
        }
    }
    Err(Error::Degenerate(format!(
        "no full-rank {k}x{n} matrix after {MAX_REDRAWS} draws"
    ))
    .into())
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOutcome {
    pub csv: String,
    pub violations: Vec<u64>,
}

pub fn verify_bound(
    k: usize,
    n: usize,
    eps: f64,
    trials: u64,
    seed: u64,
) -> CliResult<VerifyOutcome> {
    if k > n {
        return Err(Error::RowsExceedColumns { k, n }.into());
    }
    if n > leakexp::leakage::MAX_EXACT_N {
        return Err(Error::TooLarge {
            what: "block length n for exact enumeration",
            value: n,
            limit: leakexp::leakage::MAX_EXACT_N,
        }
        .into());
    }
    let reports = (0..trials)
        .into_par_iter()
        .map(|t| {
            let m = trial_matrix(k, n, seed, t)?;
            Ok(exact_leakage_bec(&m, eps)?)
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut csv = String::from(VERIFY_HEADER);
    csv.push('\n');
    let mut violations = Vec::new();
    for (t, r) in reports.iter().enumerate() {
        let bound = r.bound_nats.unwrap_or(f64::NAN);
        let slack = r.slack_nats.unwrap_or(f64::NAN);
        if slack < -leakexp::leakage::BOUND_TOLERANCE {
            violations.push(t as u64);
        }
        csv.push_str(&format!(
            "{t},{},{},{}\n",
            csv_num(r.leakage_nats),
            csv_num(bound),
            csv_num(slack)
        ));
    }
    Ok(VerifyOutcome { csv, violations })
}

#[derive(Serialize)]
struct SearchOutput<'a> {
    k: usize,
    n: usize,
    channel: String,
    matrix: Vec<String>,
    report: &'a LeakageReport,
}

pub fn search(k: usize, n: usize, channel: Channel, trials: u64, seed: u64) -> CliResult<String> {
    let (m, report) = best_matrix_search(k, n, channel, trials, seed)?;
    let text = m.to_text();
    let out = SearchOutput {
        k,
        n,
        channel: channel.to_string(),
        matrix: text.lines().skip(1).map(str::to_owned).collect(),
        report: &report,
    };
    Ok(json(&out))
}

/// Row count for a key rate in nats per symbol.
pub fn key_length(rate: f64, n: usize) -> usize {
    let k = (rate * n as f64 / LN_2).round();
    if k.is_nan() || k < 1.0 {
        1
    } else {
        (k as usize).min(n)
    }
}

pub fn scaling(
    rate: f64,
    ns: &[usize],
    channel: Channel,
    trials: u64,
    seed: u64,
) -> CliResult<String> {
    if !(rate >= 0.0 && rate.is_finite()) {
        return Err(Error::Rate { rate, max: LN_2 }.into());
    }
    let mut csv = String::from(SCALING_HEADER);
    csv.push('\n');
    for &n in ns {
        let k = key_length(rate, n);
        let (_, report) = best_matrix_search(k, n, channel, trials, trial_seed(seed, n as u64))?;
        let i = report.leakage_nats;
        csv.push_str(&format!(
            "{n},{k},{},{}\n",
            csv_num(i),
            csv_num(-i.ln() / n as f64)
        ));
    }
    Ok(csv)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Fig3,
    Fig4,
    Fig5,
}

impl Preset {
    pub fn parse(name: &str) -> CliResult<Self> {
        match name {
            "fig3" => Ok(Preset::Fig3),
            "fig4" => Ok(Preset::Fig4),
            "fig5" => Ok(Preset::Fig5),
            other => Err(Error::Unknown {
                what: "preset",
                name: other.into(),
            }
            .into()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
        }
    }

    pub fn channel(self) -> Channel {
        match self {
            Preset::Fig3 => Channel::Bec(0.5),
            Preset::Fig4 => Channel::Bsc(0.11),
            Preset::Fig5 => Channel::Bsc(0.25),
        }
    }

    pub fn kinds(self) -> [CurveKind; 2] {
        match self {
            Preset::Fig3 => [CurveKind::ErBec, CurveKind::ExBec],
            Preset::Fig4 | Preset::Fig5 => [CurveKind::ErBsc, CurveKind::ExBscReduction],
        }
    }
}

pub const PRESET_STEPS: usize = 200;

/// Curves for a figure preset or for explicit kinds, each paired with the
/// file name it is written to.
pub fn exponent_tables(
    preset: Option<Preset>,
    kinds: &[CurveKind],
    channel: Option<Channel>,
    grid: RateGrid,
    clamp: bool,
) -> CliResult<Vec<(String, CurveTable)>> {
    let (channel, kinds, prefix) = match preset {
        Some(p) => (p.channel(), p.kinds().to_vec(), p.name().to_string()),
        None => {
            let channel =
                channel.ok_or_else(|| Failure::new(2, "exponents needs --preset or --channel"))?;
            if kinds.is_empty() {
                return Err(Failure::new(
                    2,
                    "exponents needs --preset or at least one --kind",
                ));
            }
            (
                channel,
                kinds.to_vec(),
                channel.to_string().replace(':', "-"),
            )
        }
    };
    kinds
        .into_iter()
        .map(|kind| {
            let table = curve(kind, channel, grid, clamp)?;
            Ok((format!("{prefix}_{}.csv", kind.name()), table))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Rates {
    pub channel: String,
    #[serde(rename = "R_cr_nats")]
    pub r_cr_nats: f64,
    #[serde(rename = "R_cr_bits")]
    pub r_cr_bits: f64,
    #[serde(rename = "R_x_nats")]
    pub r_x_nats: f64,
    #[serde(rename = "R_x_bits")]
    pub r_x_bits: f64,
    pub delta: f64,
}

/// Critical and expurgation rates. For BSC(eps) the expurgation rate is taken
/// at the less noisy erasure channel, `delta = 1 - 4 eps (1 - eps)`; for
/// BEC(eps) at `delta = 1 - eps`.
pub fn rates(channel: Channel) -> CliResult<Rates> {
    let (r_cr, delta) = match channel {
        Channel::Bsc(eps) => (critical_rate(eps)?, 1.0 - less_noisy_erasure_param(eps)?),
        Channel::Bec(eps) => (critical_rate_bec(eps)?, 1.0 - eps),
    };
    let r_x = expurgation_rate(delta)?;
    if r_x > r_cr {
        return Err(
            Error::Invariant(format!("R_x = {r_x} exceeds R_cr = {r_cr} for {channel}")).into(),
        );
    }
    Ok(Rates {
        channel: channel.to_string(),
        r_cr_nats: r_cr,
        r_cr_bits: r_cr / LN_2,
        r_x_nats: r_x,
        r_x_bits: r_x / LN_2,
        delta,
    })
}

pub fn rates_json(channel: Channel) -> CliResult<String> {
    Ok(json(&rates(channel)?))
}

/// Parses a comma-separated list of block lengths.
pub fn parse_n_list(s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Failure::new(2, format!("invalid block length {t:?} in --n")))
        })
        .collect()
}
