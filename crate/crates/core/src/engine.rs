//! Run orchestration.
//!
//! A run starts from two lexicons whose inventories each hold one uniformly
//! drawn word at unit weight, then executes time units of `2n` attempts
//! with the agents alternating as speaker (first agent on even attempts).
//! Metrics are sampled every `measure_every` units and lexicon snapshots
//! are taken at the requested times.
//!
//! # Random streams
//!
//! Every run owns a [`ChaCha8Rng`] seeded with
//! `splitmix64(splitmix64(seed) + run_index)` through
//! [`rand::SeedableRng::seed_from_u64`]. Runs are therefore reproducible one
//! by one and independent of how many runs execute or in which order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{
    communication_round_with, ModelParams, ParamError, RangeWarning, RoundOutcome, RoundScratch,
    SelectError,
};
use crate::lexicon::{AgentLexicon, Inventory, Word};
use crate::metrics::{
    diagonal_fraction, distinct_top_words, gap_distribution, mean_sd, scatter_snapshot,
    GapHistogram, MetricsWindow, Rank, ScatterRecord,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("invalid run configuration: {0}")]
    Config(String),
    #[error("simulation failed: {0}")]
    Select(#[from] SelectError),
}

/// Everything needed to reproduce a batch of runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    #[serde(flatten)]
    pub params: ModelParams,
    /// Horizon in time units.
    pub total_time: u64,
    #[serde(default = "one")]
    pub measure_every: u64,
    #[serde(default)]
    pub snapshot_at: Vec<u64>,
    #[serde(default = "one_usize")]
    pub runs: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "yes")]
    pub strict_ranges: bool,
    /// Distance under which a second word counts as lying on the diagonal;
    /// defaults to the noise amplitude.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal_threshold: Option<u32>,
}

fn one() -> u64 {
    1
}

fn one_usize() -> usize {
    1
}

fn yes() -> bool {
    true
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            params: ModelParams::default(),
            total_time: 1000,
            measure_every: 1,
            snapshot_at: Vec::new(),
            runs: 1,
            seed: 0,
            strict_ranges: true,
            diagonal_threshold: None,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<Vec<RangeWarning>, EngineError> {
        if self.runs == 0 {
            return Err(EngineError::Config("runs must be at least 1".into()));
        }
        if self.measure_every == 0 {
            return Err(EngineError::Config("measure_every must be at least 1".into()));
        }
        Ok(self.params.validate(self.strict_ranges)?)
    }

    pub fn diagonal_threshold(&self) -> u32 {
        self.diagonal_threshold.unwrap_or(self.params.a)
    }

    /// Times (in units) at which metrics are sampled: 0, every
    /// `measure_every` units, and the horizon itself.
    pub fn sample_times(&self) -> Vec<u64> {
        let mut times: Vec<u64> = (0..=self.total_time)
            .step_by(self.measure_every as usize)
            .collect();
        if times.last() != Some(&self.total_time) {
            times.push(self.total_time);
        }
        times
    }
}

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of run `run_index` under master seed `seed`.
pub fn run_seed(seed: u64, run_index: u64) -> u64 {
    splitmix64(splitmix64(seed).wrapping_add(run_index))
}

pub fn run_rng(seed: u64, run_index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(run_seed(seed, run_index))
}

/// Both agents, the attempt clock and the run's random stream.
#[derive(Clone, Debug)]
pub struct SimState {
    pub agents: [AgentLexicon; 2],
    /// Attempts elapsed.
    pub clock: u64,
    pub rng: ChaCha8Rng,
    pub reseed_repairs: u64,
    pub noise_firings: u64,
    params: ModelParams,
    scratch: RoundScratch,
}

impl SimState {
    /// Fresh state: every inventory of both agents is a single uniform word
    /// at unit weight (first agent's objects drawn first).
    pub fn initialize(
        params: &ModelParams,
        strict: bool,
        mut rng: ChaCha8Rng,
    ) -> Result<SimState, EngineError> {
        params.validate(strict)?;
        let mut agent = || {
            AgentLexicon::new(
                (0..params.n)
                    .map(|_| {
                        Inventory::singleton(params.l, Word(rng.gen_range(1..=params.r)))
                            .expect("capacity validated")
                    })
                    .collect(),
            )
        };
        let agents = [agent(), agent()];
        Ok(SimState {
            agents,
            clock: 0,
            rng,
            reseed_repairs: 0,
            noise_firings: 0,
            params: params.clone(),
            scratch: RoundScratch::default(),
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Attempts per time unit.
    pub fn unit(&self) -> u64 {
        2 * self.params.n as u64
    }

    /// Elapsed time units (attempts / 2n).
    pub fn time(&self) -> f64 {
        self.clock as f64 / self.unit() as f64
    }

    /// One attempt; the first agent speaks on even clock values.
    pub fn step(&mut self) -> Result<RoundOutcome, SelectError> {
        let [a, b] = &mut self.agents;
        let (speaker, hearer) = if self.clock.is_multiple_of(2) { (a, b) } else { (b, a) };
        let out =
            communication_round_with(speaker, hearer, &self.params, &mut self.rng, &mut self.scratch)?;
        self.clock += 1;
        self.reseed_repairs += u64::from(out.reseeded);
        self.noise_firings += u64::from(out.noise_fired);
        Ok(out)
    }

    /// Runs one time unit, handing every outcome to `sink`.
    pub fn step_time_unit_with(
        &mut self,
        mut sink: impl FnMut(&RoundOutcome),
    ) -> Result<(), SelectError> {
        for _ in 0..self.unit() {
            sink(&self.step()?);
        }
        Ok(())
    }

    pub fn step_time_unit(&mut self) -> Result<Vec<RoundOutcome>, SelectError> {
        let mut outcomes = Vec::with_capacity(self.unit() as usize);
        self.step_time_unit_with(|o| outcomes.push(*o))?;
        Ok(outcomes)
    }
}

/// Metrics of one run at one sampling time. The window covers the attempts
/// since the previous sample.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub t: u64,
    pub window: MetricsWindow,
    pub distinct_top: [usize; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub t: u64,
    pub agents: [AgentLexicon; 2],
}

/// Output of one independent run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub index: usize,
    pub seed: u64,
    pub samples: Vec<Sample>,
    pub snapshots: Vec<Snapshot>,
    pub final_agents: [AgentLexicon; 2],
    pub reseed_repairs: u64,
    pub noise_firings: u64,
}

impl RunRecord {
    pub fn sample_at(&self, t: u64) -> Option<&Sample> {
        self.samples.iter().find(|s| s.t == t)
    }

    /// Merged window over the samples with `from < t <= to`.
    pub fn window_between(&self, from: u64, to: u64) -> MetricsWindow {
        let mut w = MetricsWindow::default();
        for s in self.samples.iter().filter(|s| s.t > from && s.t <= to) {
            w.merge(&s.window);
        }
        w
    }

    pub fn final_scatter(&self) -> Vec<ScatterRecord> {
        scatter_snapshot(&self.final_agents[0], &self.final_agents[1])
    }

    /// Final gap histograms of both agents.
    pub fn final_gaps(&self) -> [GapHistogram; 2] {
        [
            gap_distribution(&self.final_agents[0]),
            gap_distribution(&self.final_agents[1]),
        ]
    }

    /// Mean of the two agents' distinct largest-weight word counts at `t`.
    pub fn mean_distinct_top(&self, t: u64) -> Option<f64> {
        self.sample_at(t)
            .map(|s| (s.distinct_top[0] + s.distinct_top[1]) as f64 / 2.0)
    }
}

/// Per-time-point series columns, in output order.
pub const SERIES_COLUMNS: [&str; 7] = [
    "success_rate",
    "distinct_top_A",
    "distinct_top_B",
    "rank1_fraction",
    "rank2_fraction",
    "rank1_success",
    "rank2_success",
];

impl Sample {
    /// Values in [`SERIES_COLUMNS`] order; absent where undefined.
    pub fn values(&self) -> [Option<f64>; 7] {
        let w = &self.window;
        [
            w.success_rate().ok(),
            Some(self.distinct_top[0] as f64),
            Some(self.distinct_top[1] as f64),
            w.rank_fraction(Rank::First).ok(),
            w.rank_fraction(Rank::Second).ok(),
            w.success_rate_by_rank(Rank::First),
            w.success_rate_by_rank(Rank::Second),
        ]
    }
}

/// Cross-run mean and standard error of every column at one time point.
/// Runs where a value is undefined are left out of that column.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesRow {
    pub t: u64,
    pub mean: [Option<f64>; 7],
    pub stderr: [Option<f64>; 7],
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunArtifacts {
    pub config: SimConfig,
    pub warnings: Vec<RangeWarning>,
    pub runs: Vec<RunRecord>,
    pub series: Vec<SeriesRow>,
    /// Final-time gap histogram averaged over all runs and both agents.
    pub gaps: GapHistogram,
}

impl RunArtifacts {
    /// Per-run final diagonal fractions (both agents pooled).
    pub fn diagonal_fractions(&self) -> Vec<Option<f64>> {
        let threshold = self.config.diagonal_threshold();
        self.runs
            .iter()
            .map(|r| diagonal_fraction(&r.final_scatter(), threshold))
            .collect()
    }
}

/// Executes a single run of a batch.
pub fn run_single(config: &SimConfig, index: usize) -> Result<RunRecord, EngineError> {
    let seed = run_seed(config.seed, index as u64);
    let mut state = SimState::initialize(
        &config.params,
        config.strict_ranges,
        ChaCha8Rng::seed_from_u64(seed),
    )?;
    let sample_times = config.sample_times();
    let mut snapshot_times: Vec<u64> = config
        .snapshot_at
        .iter()
        .copied()
        .filter(|&t| t <= config.total_time)
        .collect();
    snapshot_times.sort_unstable();
    snapshot_times.dedup();

    let distinct = |s: &SimState| {
        [
            distinct_top_words(&s.agents[0]),
            distinct_top_words(&s.agents[1]),
        ]
    };
    let mut samples = Vec::with_capacity(sample_times.len());
    let mut snapshots = Vec::with_capacity(snapshot_times.len());
    let mut next_sample = sample_times.iter().peekable();
    let mut next_snapshot = snapshot_times.iter().peekable();
    let mut window = MetricsWindow::default();

    for t in 0..=config.total_time {
        if t > 0 {
            state.step_time_unit_with(|o| window.record(o))?;
            window.window_length += 1;
        }
        if next_sample.peek() == Some(&&t) {
            next_sample.next();
            samples.push(Sample {
                t,
                window: std::mem::take(&mut window),
                distinct_top: distinct(&state),
            });
        }
        if next_snapshot.peek() == Some(&&t) {
            next_snapshot.next();
            snapshots.push(Snapshot {
                t,
                agents: state.agents.clone(),
            });
        }
    }

    Ok(RunRecord {
        index,
        seed,
        samples,
        snapshots,
        final_agents: state.agents,
        reseed_repairs: state.reseed_repairs,
        noise_firings: state.noise_firings,
    })
}

/// Executes all runs of `config` (in parallel) and aggregates them.
pub fn run(config: &SimConfig) -> Result<RunArtifacts, EngineError> {
    let warnings = config.validate()?;
    let runs = (0..config.runs)
        .into_par_iter()
        .map(|i| run_single(config, i))
        .collect::<Result<Vec<_>, _>>()?;
    let series = aggregate_series(&runs);
    let finals: Vec<GapHistogram> = runs.iter().flat_map(|r| r.final_gaps()).collect();
    Ok(RunArtifacts {
        config: config.clone(),
        warnings,
        series,
        gaps: GapHistogram::average(&finals),
        runs,
    })
}

fn aggregate_series(runs: &[RunRecord]) -> Vec<SeriesRow> {
    let Some(first) = runs.first() else {
        return Vec::new();
    };
    first
        .samples
        .iter()
        .enumerate()
        .map(|(i, sample)| {
            let mut mean = [None; 7];
            let mut stderr = [None; 7];
            for col in 0..SERIES_COLUMNS.len() {
                let values: Vec<f64> = runs
                    .iter()
                    .filter_map(|r| r.samples[i].values()[col])
                    .collect();
                if values.is_empty() {
                    continue;
                }
                let (m, sd) = mean_sd(&values);
                mean[col] = Some(m);
                if values.len() > 1 {
                    stderr[col] = Some(sd / (values.len() as f64).sqrt());
                }
            }
            SeriesRow {
                t: sample.t,
                mean,
                stderr,
            }
        })
        .collect()
}
