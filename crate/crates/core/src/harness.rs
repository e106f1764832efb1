//! Experiment harness: configuration files, sweeps, baselines and the CSV
//! artifacts written for plotting.
//!
//! Configuration is flat TOML whose keys are the model symbols (`n`, `l`,
//! `r`, `epsilon`, `p`, `a`), the zero-weight policy `depletion`
//! (`floor-at-one`, `keep-last-word` or `remove-and-reseed`) and the engine
//! keys of [`SimConfig`]. A run
//! directory holds:
//!
//! | file             | columns                                                   |
//! |------------------|-----------------------------------------------------------|
//! | `timeseries.csv` | `t`, the seven series means, then their `_se` columns      |
//! | `snapshots.csv`  | `run,t,agent,object,word,weight`                          |
//! | `scatter.csv`    | `run,agent,object,top,second` at the final time            |
//! | `gaps.csv`       | `d,N(d)` averaged over runs and agents at the final time   |
//! | `runs.csv`       | `run,seed,reseed_repairs,noise_firings,diagonal_fraction`  |
//! | `manifest.toml`  | the exact configuration, loadable again with `--config`   |
//!
//! Objects are written one-based, agents as `A`/`B`. Floats carry six
//! significant digits; undefined values are empty fields.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::engine::{self, run_rng, EngineError, RunArtifacts, SimConfig, SERIES_COLUMNS};
use crate::metrics::{expected_distinct, random_baseline_distinct, random_baseline_gaps, GapHistogram};

/// Version of the CSV layouts described in the module docs.
pub const SCHEMA_VERSION: u32 = 1;

const CONFIG_KEYS: [&str; 14] = [
    "n",
    "l",
    "r",
    "epsilon",
    "p",
    "a",
    "depletion",
    "total_time",
    "measure_every",
    "snapshot_at",
    "runs",
    "seed",
    "strict_ranges",
    "diagonal_threshold",
];
const MANIFEST_KEYS: [&str; 2] = ["code_version", "schema_version"];
const SWEEP_KEYS: [&str; 2] = ["sweep_axis", "sweep_values"];

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl HarnessError {
    /// Process exit code: 2 for configuration problems, 3 for failures
    /// while running or writing.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Engine(EngineError::Params(_) | EngineError::Config(_)) => 2,
            HarnessError::Engine(EngineError::Select(_)) => 3,
            HarnessError::Io { .. } => 3,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_table(text: &str) -> Result<toml::Table, HarnessError> {
    text.parse::<toml::Table>()
        .map_err(|e| HarnessError::Config(e.to_string()))
}

fn check_keys(table: &toml::Table, allowed: &[&[&str]]) -> Result<(), HarnessError> {
    for key in table.keys() {
        if !allowed.iter().any(|set| set.contains(&key.as_str())) {
            return Err(HarnessError::Config(format!("unknown key `{key}`")));
        }
    }
    Ok(())
}

fn config_from_table(mut table: toml::Table) -> Result<SimConfig, HarnessError> {
    for key in MANIFEST_KEYS.iter().chain(&SWEEP_KEYS) {
        table.remove(*key);
    }
    toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| HarnessError::Config(e.to_string()))
}

/// Parses a run configuration (or a manifest written by [`cmd_run`]).
pub fn parse_config(text: &str) -> Result<SimConfig, HarnessError> {
    let table = parse_table(text)?;
    check_keys(&table, &[&CONFIG_KEYS, &MANIFEST_KEYS])?;
    config_from_table(table)
}

pub fn load_config(path: &Path) -> Result<SimConfig, HarnessError> {
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Config(format!(
        "{}: {source}",
        path.display()
    )))?;
    parse_config(&text)
}

/// Command-line overrides applied on top of a configuration file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub runs: Option<usize>,
    pub strict: Option<bool>,
    pub snapshot_at: Option<Vec<u64>>,
}

impl Overrides {
    pub fn apply(&self, config: &mut SimConfig) {
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(runs) = self.runs {
            config.runs = runs;
        }
        if let Some(strict) = self.strict {
            config.strict_ranges = strict;
        }
        if let Some(times) = &self.snapshot_at {
            config.snapshot_at = times.clone();
        }
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    code_version: &'a str,
    schema_version: u32,
    #[serde(flatten)]
    config: &'a SimConfig,
}

pub fn manifest_text(config: &SimConfig) -> String {
    let manifest = Manifest {
        code_version: env!("CARGO_PKG_VERSION"),
        schema_version: SCHEMA_VERSION,
        config,
    };
    toml::to_string(&manifest).expect("configuration serializes")
}

/// Formats a float with six significant digits.
pub fn fmt_sig6(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.00000".to_string();
    }
    // the exponent of the rounded mantissa already accounts for carries
    let sci = format!("{x:.5e}");
    let exponent: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .expect("scientific format has an exponent");
    if !(-4..15).contains(&exponent) {
        return sci;
    }
    let decimals = (5 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_sig6).unwrap_or_default()
}

fn agent_label(agent: usize) -> &'static str {
    ["A", "B"][agent]
}

pub fn timeseries_csv(art: &RunArtifacts) -> String {
    let mut out = String::from("t");
    for col in SERIES_COLUMNS {
        write!(out, ",{col}").unwrap();
    }
    for col in SERIES_COLUMNS {
        write!(out, ",{col}_se").unwrap();
    }
    out.push('\n');
    for row in &art.series {
        write!(out, "{}", row.t).unwrap();
        for v in row.mean.iter().chain(&row.stderr) {
            write!(out, ",{}", fmt_opt(*v)).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn snapshots_csv(art: &RunArtifacts) -> String {
    let mut out = String::from("run,t,agent,object,word,weight\n");
    for run in &art.runs {
        for snap in &run.snapshots {
            for (agent, lex) in snap.agents.iter().enumerate() {
                for (object, inv) in lex.inventories().iter().enumerate() {
                    for e in inv.entries() {
                        writeln!(
                            out,
                            "{},{},{},{},{},{}",
                            run.index,
                            snap.t,
                            agent_label(agent),
                            object + 1,
                            e.word,
                            e.weight
                        )
                        .unwrap();
                    }
                }
            }
        }
    }
    out
}

pub fn scatter_csv(art: &RunArtifacts) -> String {
    let mut out = String::from("run,agent,object,top,second\n");
    for run in &art.runs {
        for rec in run.final_scatter() {
            writeln!(
                out,
                "{},{},{},{},{}",
                run.index,
                agent_label(rec.agent),
                rec.object + 1,
                rec.top,
                rec.second.map(|w| w.to_string()).unwrap_or_default()
            )
            .unwrap();
        }
    }
    out
}

pub fn gaps_csv(gaps: &GapHistogram) -> String {
    let mut out = String::from("d,N(d)\n");
    for (d, c) in &gaps.counts {
        writeln!(out, "{d},{}", fmt_sig6(*c)).unwrap();
    }
    out
}

pub fn runs_csv(art: &RunArtifacts) -> String {
    let mut out = String::from("run,seed,reseed_repairs,noise_firings,diagonal_fraction\n");
    for (run, diag) in art.runs.iter().zip(art.diagonal_fractions()) {
        writeln!(
            out,
            "{},{},{},{},{}",
            run.index,
            run.seed,
            run.reseed_repairs,
            run.noise_firings,
            fmt_opt(diag)
        )
        .unwrap();
    }
    out
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<(), HarnessError> {
    let path = dir.join(name);
    fs::write(&path, body).map_err(io_err(&path))
}

/// Writes every artifact of a finished batch into `dir`.
pub fn write_artifacts(art: &RunArtifacts, dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    write_file(dir, "manifest.toml", &manifest_text(&art.config))?;
    write_file(dir, "timeseries.csv", &timeseries_csv(art))?;
    write_file(dir, "snapshots.csv", &snapshots_csv(art))?;
    write_file(dir, "scatter.csv", &scatter_csv(art))?;
    write_file(dir, "gaps.csv", &gaps_csv(&art.gaps))?;
    write_file(dir, "runs.csv", &runs_csv(art))?;
    Ok(())
}

/// Runs a configuration and writes its artifact directory.
pub fn cmd_run(config: &SimConfig, out: &Path) -> Result<RunArtifacts, HarnessError> {
    let art = engine::run(config)?;
    write_artifacts(&art, out)?;
    Ok(art)
}

/// Model parameter a sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    N,
    L,
    R,
    Epsilon,
    P,
    A,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::N => "n",
            Axis::L => "l",
            Axis::R => "r",
            Axis::Epsilon => "epsilon",
            Axis::P => "p",
            Axis::A => "a",
        }
    }

    fn parse(name: &str) -> Result<Axis, HarnessError> {
        Ok(match name {
            "n" => Axis::N,
            "l" => Axis::L,
            "r" => Axis::R,
            "epsilon" => Axis::Epsilon,
            "p" => Axis::P,
            "a" => Axis::A,
            other => return Err(HarnessError::Config(format!("unknown sweep axis `{other}`"))),
        })
    }

    fn is_integer(self) -> bool {
        !matches!(self, Axis::Epsilon | Axis::P)
    }
}

/// A base configuration and the values one parameter takes across points.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub base: SimConfig,
    pub axis: Axis,
    pub values: Vec<f64>,
}

impl SweepSpec {
    /// Configuration of one sweep point.
    pub fn point(&self, value: f64) -> SimConfig {
        let mut c = self.base.clone();
        let p = &mut c.params;
        match self.axis {
            Axis::N => p.n = value as usize,
            Axis::L => p.l = value as usize,
            Axis::R => p.r = value as u32,
            Axis::Epsilon => p.epsilon = value,
            Axis::P => p.p = value,
            Axis::A => p.a = value as u32,
        }
        c
    }

    pub fn label(&self, value: f64) -> String {
        format!("{}={value}", self.axis.name())
    }
}

/// Parses a sweep file: a run configuration plus `sweep_axis` and
/// `sweep_values`.
pub fn parse_sweep(text: &str) -> Result<SweepSpec, HarnessError> {
    let table = parse_table(text)?;
    check_keys(&table, &[&CONFIG_KEYS, &MANIFEST_KEYS, &SWEEP_KEYS])?;
    let axis = table
        .get("sweep_axis")
        .and_then(toml::Value::as_str)
        .ok_or_else(|| HarnessError::Config("sweep_axis must be a string".into()))
        .and_then(Axis::parse)?;
    let raw = table
        .get("sweep_values")
        .and_then(toml::Value::as_array)
        .ok_or_else(|| HarnessError::Config("sweep_values must be a list".into()))?;
    let mut values = Vec::with_capacity(raw.len());
    for v in raw {
        let x = match v {
            toml::Value::Integer(i) => *i as f64,
            toml::Value::Float(f) => *f,
            other => return Err(HarnessError::Config(format!("bad sweep value {other}"))),
        };
        if axis.is_integer() && (x < 0.0 || x.fract() != 0.0) {
            return Err(HarnessError::Config(format!(
                "sweep axis {} needs non-negative integers, got {x}",
                axis.name()
            )));
        }
        values.push(x);
    }
    if values.is_empty() {
        return Err(HarnessError::Config("sweep_values is empty".into()));
    }
    let base = config_from_table(table)?;
    let spec = SweepSpec { base, axis, values };
    for &v in &spec.values {
        spec.point(v).validate()?;
    }
    Ok(spec)
}

pub fn load_sweep(path: &Path) -> Result<SweepSpec, HarnessError> {
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Config(format!(
        "{}: {source}",
        path.display()
    )))?;
    parse_sweep(&text)
}

/// Runs every sweep point into `out/<axis>=<value>/` and writes
/// `out/summary.csv` with the final-time series row of each point.
pub fn cmd_sweep(spec: &SweepSpec, out: &Path) -> Result<Vec<RunArtifacts>, HarnessError> {
    fs::create_dir_all(out).map_err(io_err(out))?;
    let arts = spec
        .values
        .par_iter()
        .map(|&v| cmd_run(&spec.point(v), &out.join(spec.label(v))))
        .collect::<Result<Vec<_>, _>>()?;

    let mut summary = String::from(spec.axis.name());
    for col in SERIES_COLUMNS {
        write!(summary, ",{col}").unwrap();
    }
    for col in SERIES_COLUMNS {
        write!(summary, ",{col}_se").unwrap();
    }
    summary.push('\n');
    for (v, art) in spec.values.iter().zip(&arts) {
        let last = art.series.last().expect("series has the t=0 row");
        write!(summary, "{v}").unwrap();
        for x in last.mean.iter().chain(&last.stderr) {
            write!(summary, ",{}", fmt_opt(*x)).unwrap();
        }
        summary.push('\n');
    }
    write_file(out, "summary.csv", &summary)?;
    Ok(arts)
}

/// Random-draw reference for homonymy and gap statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct Baseline {
    pub n: usize,
    pub r: u32,
    pub trials: usize,
    pub seed: u64,
    pub distinct_mean: f64,
    pub distinct_sd: f64,
    pub distinct_closed_form: f64,
    pub gaps: GapHistogram,
}

pub fn baseline(n: usize, r: u32, trials: usize, seed: u64) -> Result<Baseline, HarnessError> {
    if n == 0 || r == 0 || trials == 0 {
        return Err(HarnessError::Config("baseline needs n, r and trials ≥ 1".into()));
    }
    let mut rng = run_rng(seed, 0);
    let (distinct_mean, distinct_sd) = random_baseline_distinct(n, r, trials, &mut rng);
    let gaps = random_baseline_gaps(n, r, trials, &mut rng);
    Ok(Baseline {
        n,
        r,
        trials,
        seed,
        distinct_mean,
        distinct_sd,
        distinct_closed_form: expected_distinct(n, r),
        gaps,
    })
}

/// Writes `baseline.csv` (distinct-count statistics) and
/// `baseline_gaps.csv` (`d,N(d)`) into `out`.
pub fn cmd_baseline(
    n: usize,
    r: u32,
    trials: usize,
    seed: u64,
    out: &Path,
) -> Result<Baseline, HarnessError> {
    let b = baseline(n, r, trials, seed)?;
    fs::create_dir_all(out).map_err(io_err(out))?;
    let body = format!(
        "n,r,trials,seed,distinct_mean,distinct_sd,distinct_closed_form\n{},{},{},{},{},{},{}\n",
        b.n,
        b.r,
        b.trials,
        b.seed,
        fmt_sig6(b.distinct_mean),
        fmt_sig6(b.distinct_sd),
        fmt_sig6(b.distinct_closed_form)
    );
    write_file(out, "baseline.csv", &body)?;
    write_file(out, "baseline_gaps.csv", &gaps_csv(&b.gaps))?;
    Ok(b)
}
