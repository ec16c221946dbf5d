//! Experiment driver behind the `bench` binary.
//!
//! Builds a channel, runs the recursive updater and the Schur recursion over
//! a correlation stream in known-R (exact model correlations) or unknown-R
//! (sample estimates) mode, compares each reconstruction against the exact
//! `R_N(n)` and emits one CSV row per instant and algorithm.

use std::fmt;
use std::path::PathBuf;

use crate::channel::{
    exact_correlation, generate_channel, receive, sample_correlation_stream, ChannelParams,
    Constellation, StreamEntry,
};
use crate::linalg::reconstruct;
use crate::metrics::compare;
use crate::rchol::{factors_of, rchol_init, rchol_update, FirstColumnObservation, RcholState};
use crate::schur::{schur_decompose, ToeplitzSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Known,
    Unknown,
}

impl Mode {
    fn as_str(&self) -> &'static str {
        match self {
            Mode::Known => "known",
            Mode::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Rchol,
    Schur,
}

impl Algo {
    fn as_str(&self) -> &'static str {
        match self {
            Algo::Rchol => "rchol",
            Algo::Schur => "schur",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub algos: Vec<Algo>,
    pub m: usize,
    pub n: usize,
    pub lc: usize,
    pub t: usize,
    pub alpha: f64,
    pub snr_db: f64,
    pub lambda: f64,
    pub seed: u64,
    pub guard: f64,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            mode: Mode::Known,
            algos: vec![Algo::Rchol, Algo::Schur],
            m: 2,
            n: 8,
            lc: 3,
            t: 5000,
            alpha: 0.999,
            snr_db: 20.0,
            lambda: 0.98,
            seed: 1,
            guard: 1e-9,
            out: None,
        }
    }
}

/// Config or command-line problem; the binary exits with code 2 on these.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

pub const USAGE: &str = "usage: bench [--config <path>] [--mode known|unknown] [--algos rchol,schur]\n             [--M <count>] [--N <count>] [--Lc <count>] [--T <count>]\n             [--alpha <0..1>] [--snr-db <dB>] [--lambda <0..1>] [--seed <int>]\n             [--guard <real>] [--out <path>]\n\nFlags override values from the --config file (flat `key = value` lines,\nsame keys as the flags, `#` comments).";

fn apply_kv(cfg: &mut ExperimentConfig, key: &str, value: &str) -> Result<(), UsageError> {
    let bad = |what: &str| UsageError(format!("invalid value for {what}: {value}"));
    match key {
        "mode" => {
            cfg.mode = match value {
                "known" => Mode::Known,
                "unknown" => Mode::Unknown,
                _ => return Err(bad("mode")),
            }
        }
        "algos" => {
            let mut algos = Vec::new();
            for part in value.split(',') {
                match part.trim() {
                    "rchol" => algos.push(Algo::Rchol),
                    "schur" => algos.push(Algo::Schur),
                    _ => return Err(bad("algos")),
                }
            }
            if algos.is_empty() {
                return Err(bad("algos"));
            }
            cfg.algos = algos;
        }
        "M" => cfg.m = value.parse().map_err(|_| bad("M"))?,
        "N" => cfg.n = value.parse().map_err(|_| bad("N"))?,
        "Lc" => cfg.lc = value.parse().map_err(|_| bad("Lc"))?,
        "T" => cfg.t = value.parse().map_err(|_| bad("T"))?,
        "alpha" => cfg.alpha = value.parse().map_err(|_| bad("alpha"))?,
        "snr-db" => cfg.snr_db = value.parse().map_err(|_| bad("snr-db"))?,
        "lambda" => cfg.lambda = value.parse().map_err(|_| bad("lambda"))?,
        "seed" => cfg.seed = value.parse().map_err(|_| bad("seed"))?,
        "guard" => cfg.guard = value.parse().map_err(|_| bad("guard"))?,
        "out" => cfg.out = Some(PathBuf::from(value)),
        _ => return Err(UsageError(format!("unknown key: {key}"))),
    }
    Ok(())
}

fn validate(cfg: &ExperimentConfig) -> Result<(), UsageError> {
    if cfg.m < 1 {
        return Err(UsageError("M must be at least 1".into()));
    }
    if cfg.n < 1 {
        return Err(UsageError("N must be at least 1".into()));
    }
    if cfg.lc < 1 {
        return Err(UsageError("Lc must be at least 1".into()));
    }
    if cfg.t < cfg.n + cfg.lc {
        return Err(UsageError(format!(
            "T must be at least N + Lc = {}",
            cfg.n + cfg.lc
        )));
    }
    if !(0.0..=1.0).contains(&cfg.alpha) {
        return Err(UsageError("alpha must be in [0, 1]".into()));
    }
    if !(cfg.lambda > 0.0 && cfg.lambda <= 1.0) {
        return Err(UsageError("lambda must be in (0, 1]".into()));
    }
    if cfg.guard <= 0.0 {
        return Err(UsageError("guard must be positive".into()));
    }
    Ok(())
}

fn parse_config_file(cfg: &mut ExperimentConfig, path: &str) -> Result<(), UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {path}: {e}")))?;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(UsageError(format!(
                "{path}:{}: expected `key = value`, got `{raw}`",
                lineno + 1
            )));
        };
        apply_kv(cfg, key.trim(), value.trim())?;
    }
    Ok(())
}

/// Parse flags (and an optional `--config` file; flags override file values).
pub fn parse_config(args: &[String]) -> Result<ExperimentConfig, UsageError> {
    let mut cfg = ExperimentConfig::default();
    // config file first, so flags win
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            let path = it
                .next()
                .ok_or_else(|| UsageError("--config needs a path".into()))?;
            parse_config_file(&mut cfg, path)?;
        }
    }
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let Some(key) = a.strip_prefix("--") else {
            return Err(UsageError(format!("unexpected argument: {a}")));
        };
        let value = it
            .next()
            .ok_or_else(|| UsageError(format!("--{key} needs a value")))?;
        if key == "config" {
            continue;
        }
        apply_kv(&mut cfg, key, value)?;
    }
    validate(&cfg)?;
    Ok(cfg)
}

#[derive(Clone, Debug)]
pub struct CsvRow {
    pub n: Option<usize>, // None for the summary row
    pub algo: Algo,
    pub mode: Mode,
    pub status: String,
    pub max_abs_diff: Option<f64>,
    pub max_ratio: Option<f64>,
    pub n_guarded: Option<usize>,
    pub frob_rel_err: Option<f64>,
}

pub const CSV_HEADER: &str = "n,algo,mode,status,max_abs_diff,max_ratio,n_guarded,frob_rel_err";

fn fmt_opt(x: Option<f64>) -> String {
    // 17 significant digits: round-trip exact for doubles
    x.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

pub fn render_csv(rows: &[CsvRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let n =
            r.n.map(|v| v.to_string())
                .unwrap_or_else(|| "SUMMARY".to_string());
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            n,
            r.algo.as_str(),
            r.mode.as_str(),
            r.status,
            fmt_opt(r.max_abs_diff),
            fmt_opt(r.max_ratio),
            r.n_guarded.map(|v| v.to_string()).unwrap_or_default(),
            fmt_opt(r.frob_rel_err),
        ));
    }
    out
}

struct RcholTracker {
    state: Option<RcholState>,
    m: usize,
    n: usize,
}

impl RcholTracker {
    /// Feed one observation; on failure the tracker drops its state and
    /// re-seeds at the next instant.
    fn feed(&mut self, obs: &FirstColumnObservation) -> Result<(), String> {
        let attempt = match &self.state {
            Some(s) if s.time() + 1 == obs.time() => rchol_update(s, obs),
            _ => rchol_init(obs, self.m, self.n),
        };
        match attempt {
            Ok(s) => {
                self.state = Some(s);
                Ok(())
            }
            Err(e) => {
                self.state = None;
                Err(e.to_string())
            }
        }
    }
}

/// Run the experiment and return the per-instant rows plus one summary row
/// per algorithm (worst value over the measurement window).
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<CsvRow>, crate::LinalgError> {
    let noise_var = 10f64.powf(-cfg.snr_db / 10.0);
    let ch = generate_channel(&ChannelParams {
        m: cfg.m,
        lc: cfg.lc,
        t: cfg.t,
        alpha: cfg.alpha,
        noise_var,
        seed: cfg.seed,
        constellation: Constellation::Qpsk,
    })?;

    // measurement window
    let n0 = cfg.n + cfg.lc - 1;

    // data the algorithms consume, per instant
    let estimates: Vec<StreamEntry> = match cfg.mode {
        Mode::Known => {
            let first = (cfg.n - 1 + cfg.lc - 1).max(1);
            let mut v = Vec::new();
            for n in first..cfg.t {
                v.push(exact_correlation(&ch, cfg.n, n)?);
            }
            v
        }
        Mode::Unknown => {
            let y = receive(&ch);
            sample_correlation_stream(&y, cfg.n, cfg.lambda)?.entries
        }
    };

    let mut tracker = RcholTracker {
        state: None,
        m: cfg.m,
        n: cfg.n,
    };
    let mut rows: Vec<CsvRow> = Vec::new();
    let mut summary: Vec<(Algo, f64, f64, f64, usize, usize)> = cfg
        .algos
        .iter()
        .map(|&a| (a, 0.0f64, 0.0f64, 0.0f64, 0usize, 0usize))
        .collect();

    for entry in &estimates {
        let n = entry.obs.time();
        // warm the recursive tracker on pre-window data as well
        let rchol_status = if cfg.algos.contains(&Algo::Rchol) {
            tracker.feed(&entry.obs)
        } else {
            Ok(())
        };
        if n < n0 {
            continue;
        }
        let reference = exact_correlation(&ch, cfg.n, n)?
            .full
            .expect("exact mode carries the full matrix");

        for &algo in &cfg.algos {
            let estimate = match algo {
                Algo::Schur => ToeplitzSpec::new(entry.obs.blocks().to_vec())
                    .and_then(|spec| schur_decompose(&spec))
                    .map(|f| reconstruct(&f))
                    .map_err(|e| e.to_string()),
                Algo::Rchol => match (&rchol_status, &tracker.state) {
                    (Ok(()), Some(s)) => factors_of(s)
                        .map(|f| reconstruct(&f))
                        .map_err(|e| e.to_string()),
                    (Err(e), _) => Err(e.clone()),
                    (Ok(()), None) => Err("no state".to_string()),
                },
            };
            match estimate {
                Ok(est) => {
                    let rep = compare(&reference, &est, cfg.guard)?;
                    for s in summary.iter_mut().filter(|s| s.0 == algo) {
                        s.1 = s.1.max(rep.max_abs_diff);
                        s.2 = s.2.max(rep.max_ratio);
                        s.3 = s.3.max(rep.frob_rel_err);
                        s.4 = s.4.max(rep.n_guarded);
                    }
                    rows.push(CsvRow {
                        n: Some(n),
                        algo,
                        mode: cfg.mode,
                        status: "ok".into(),
                        max_abs_diff: Some(rep.max_abs_diff),
                        max_ratio: Some(rep.max_ratio),
                        n_guarded: Some(rep.n_guarded),
                        frob_rel_err: Some(rep.frob_rel_err),
                    });
                }
                Err(msg) => {
                    for s in summary.iter_mut().filter(|s| s.0 == algo) {
                        s.5 += 1;
                    }
                    rows.push(CsvRow {
                        n: Some(n),
                        algo,
                        mode: cfg.mode,
                        status: sanitize_status(&msg),
                        max_abs_diff: None,
                        max_ratio: None,
                        n_guarded: None,
                        frob_rel_err: None,
                    });
                }
            }
        }
    }

    for (algo, diff, ratio, frob, guarded, errors) in summary {
        rows.push(CsvRow {
            n: None,
            algo,
            mode: cfg.mode,
            status: format!("errors={errors}"),
            max_abs_diff: Some(diff),
            max_ratio: Some(ratio),
            n_guarded: Some(guarded),
            frob_rel_err: Some(frob),
        });
    }
    Ok(rows)
}

fn sanitize_status(msg: &str) -> String {
    msg.replace([',', '\n'], ";")
}

/// Worst-over-window values from a summary row.
pub fn summary_for(rows: &[CsvRow], algo: Algo) -> Option<&CsvRow> {
    rows.iter().find(|r| r.n.is_none() && r.algo == algo)
}
