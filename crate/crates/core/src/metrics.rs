//! Observables of a run: success rates, rank statistics, homonymy counts,
//! neighbour-gap histograms and the random-draw baselines they are
//! compared against.

use std::collections::{BTreeMap, HashSet};

use rand::Rng;
use thiserror::Error;

use crate::dynamics::RoundOutcome;
use crate::lexicon::{AgentLexicon, Word};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("metrics window holds no attempts")]
pub struct EmptyWindow;

/// Counters accumulated over a stretch of communication attempts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MetricsWindow {
    /// Length of the window in time units.
    pub window_length: u64,
    pub attempts: u64,
    pub successes: u64,
    pub rank1_utterances: u64,
    pub rank2_utterances: u64,
    pub rank1_successes: u64,
    pub rank2_successes: u64,
}

/// Utterance rank selector for the rank-conditioned statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rank {
    First,
    Second,
}

impl MetricsWindow {
    pub fn record(&mut self, outcome: &RoundOutcome) {
        self.attempts += 1;
        let success = u64::from(outcome.success);
        self.successes += success;
        match outcome.speaker_rank {
            1 => {
                self.rank1_utterances += 1;
                self.rank1_successes += success;
            }
            2 => {
                self.rank2_utterances += 1;
                self.rank2_successes += success;
            }
            _ => {}
        }
    }

    pub fn merge(&mut self, other: &MetricsWindow) {
        self.window_length += other.window_length;
        self.attempts += other.attempts;
        self.successes += other.successes;
        self.rank1_utterances += other.rank1_utterances;
        self.rank2_utterances += other.rank2_utterances;
        self.rank1_successes += other.rank1_successes;
        self.rank2_successes += other.rank2_successes;
    }

    pub fn success_rate(&self) -> Result<f64, EmptyWindow> {
        ratio(self.successes, self.attempts).ok_or(EmptyWindow)
    }

    /// Fraction of attempts that uttered a word of the given rank.
    pub fn rank_fraction(&self, rank: Rank) -> Result<f64, EmptyWindow> {
        let count = match rank {
            Rank::First => self.rank1_utterances,
            Rank::Second => self.rank2_utterances,
        };
        ratio(count, self.attempts).ok_or(EmptyWindow)
    }

    /// Success rate restricted to utterances of the given rank; absent when
    /// the window saw no such utterance.
    pub fn success_rate_by_rank(&self, rank: Rank) -> Option<f64> {
        match rank {
            Rank::First => ratio(self.rank1_successes, self.rank1_utterances),
            Rank::Second => ratio(self.rank2_successes, self.rank2_utterances),
        }
    }
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Number of different largest-weight words in a lexicon. Smaller values
/// mean more homonymy.
pub fn distinct_top_words(lex: &AgentLexicon) -> usize {
    distinct(&lex.top_words())
}

fn distinct(words: &[Word]) -> usize {
    words.iter().collect::<HashSet<_>>().len()
}

/// Histogram `N(d)` of distances between neighbouring sorted words.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GapHistogram {
    pub counts: BTreeMap<u32, f64>,
    /// Number of histograms averaged into this one.
    pub sample_size: usize,
}

impl GapHistogram {
    /// Histogram of the `len - 1` consecutive gaps of the sorted words.
    /// Duplicates are kept and produce `d = 0` gaps.
    pub fn from_words(words: &[Word]) -> Self {
        let mut sorted: Vec<u32> = words.iter().map(|w| w.0).collect();
        sorted.sort_unstable();
        let mut counts = BTreeMap::new();
        for pair in sorted.windows(2) {
            *counts.entry(pair[1] - pair[0]).or_insert(0.0) += 1.0;
        }
        GapHistogram {
            counts,
            sample_size: 1,
        }
    }

    pub fn get(&self, d: u32) -> f64 {
        self.counts.get(&d).copied().unwrap_or(0.0)
    }

    /// Total count over all distances.
    pub fn mass(&self) -> f64 {
        self.counts.values().sum()
    }

    /// Pointwise mean, weighting each input by its own sample size.
    pub fn average<'a>(histograms: impl IntoIterator<Item = &'a GapHistogram>) -> GapHistogram {
        let mut sums: BTreeMap<u32, f64> = BTreeMap::new();
        let mut samples = 0;
        for h in histograms {
            for (&d, &c) in &h.counts {
                *sums.entry(d).or_insert(0.0) += c * h.sample_size as f64;
            }
            samples += h.sample_size;
        }
        if samples > 0 {
            for c in sums.values_mut() {
                *c /= samples as f64;
            }
        }
        GapHistogram {
            counts: sums,
            sample_size: samples,
        }
    }
}

/// Gap histogram of an agent's largest-weight words.
pub fn gap_distribution(lex: &AgentLexicon) -> GapHistogram {
    GapHistogram::from_words(&lex.top_words())
}

/// Expected number of distinct values among `n` uniform draws from `[1, r]`:
/// `r (1 - (1 - 1/r)^n)`.
pub fn expected_distinct(n: usize, r: u32) -> f64 {
    let r = f64::from(r);
    -r * (n as f64 * (-1.0 / r).ln_1p()).exp_m1()
}

fn random_words<R: Rng + ?Sized>(n: usize, r: u32, rng: &mut R) -> Vec<Word> {
    (0..n).map(|_| Word(rng.gen_range(1..=r))).collect()
}

/// Monte Carlo mean and standard deviation of the number of distinct values
/// among `n` uniform draws from `[1, r]`.
pub fn random_baseline_distinct<R: Rng + ?Sized>(
    n: usize,
    r: u32,
    trials: usize,
    rng: &mut R,
) -> (f64, f64) {
    assert!(trials >= 1, "need at least one trial");
    let counts: Vec<f64> = (0..trials)
        .map(|_| distinct(&random_words(n, r, rng)) as f64)
        .collect();
    mean_sd(&counts)
}

/// Average gap histogram of `n` uniform draws from `[1, r]`.
pub fn random_baseline_gaps<R: Rng + ?Sized>(
    n: usize,
    r: u32,
    trials: usize,
    rng: &mut R,
) -> GapHistogram {
    let hists: Vec<_> = (0..trials)
        .map(|_| GapHistogram::from_words(&random_words(n, r, rng)))
        .collect();
    GapHistogram::average(&hists)
}

/// Largest- and second-largest-weight word of one inventory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScatterRecord {
    /// 0 for the first agent, 1 for the second.
    pub agent: usize,
    pub object: usize,
    pub top: Word,
    pub second: Option<Word>,
}

pub fn scatter_snapshot(lex_a: &AgentLexicon, lex_b: &AgentLexicon) -> Vec<ScatterRecord> {
    [lex_a, lex_b]
        .into_iter()
        .enumerate()
        .flat_map(|(agent, lex)| {
            lex.inventories()
                .iter()
                .enumerate()
                .map(move |(object, inv)| ScatterRecord {
                    agent,
                    object,
                    top: inv.top_entry().expect("inventories are never empty").word,
                    second: inv.second_entry().map(|e| e.word),
                })
        })
        .collect()
}

/// Fraction of records with a second word within `threshold` of the top
/// word, among the records that have a second word at all.
pub fn diagonal_fraction(records: &[ScatterRecord], threshold: u32) -> Option<f64> {
    let (mut near, mut total) = (0u64, 0u64);
    for rec in records {
        if let Some(second) = rec.second {
            total += 1;
            near += u64::from(rec.top.distance(second) <= threshold);
        }
    }
    ratio(near, total)
}

/// Probability that two distinct uniform words of `[1, r]` lie within
/// `threshold` of each other.
pub fn random_pair_diagonal_probability(r: u32, threshold: u32) -> f64 {
    if r < 2 {
        return 0.0;
    }
    let r = f64::from(r);
    let a = f64::from(threshold).min(r - 1.0);
    (2.0 * a * r - a * (a + 1.0)) / (r * (r - 1.0))
}

/// Sample mean and (n - 1)-normalised standard deviation.
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::Inventory;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lex_of_tops(tops: &[u32]) -> AgentLexicon {
        AgentLexicon::new(
            tops.iter()
                .map(|&w| Inventory::singleton(5, Word(w)).unwrap())
                .collect(),
        )
    }

    fn outcome(success: bool, rank: usize) -> RoundOutcome {
        RoundOutcome {
            object: 0,
            uttered: Word(1),
            received: Word(1),
            decoded: if success { 0 } else { 1 },
            success,
            speaker_rank: rank,
            noise_fired: false,
            reseeded: false,
        }
    }

    #[test]
    fn window_rates() {
        let mut w = MetricsWindow::default();
        assert_eq!(w.success_rate(), Err(EmptyWindow));
        assert_eq!(w.rank_fraction(Rank::First), Err(EmptyWindow));
        assert_eq!(w.success_rate_by_rank(Rank::Second), None);

        for _ in 0..10 {
            w.record(&outcome(false, 1));
        }
        assert_eq!(w.success_rate(), Ok(0.0));

        let mut all = MetricsWindow::default();
        for _ in 0..10 {
            all.record(&outcome(true, 1));
        }
        assert_eq!(all.success_rate(), Ok(1.0));
        assert_eq!(all.rank_fraction(Rank::First), Ok(1.0));
        assert_eq!(all.rank_fraction(Rank::Second), Ok(0.0));
        assert_eq!(all.success_rate_by_rank(Rank::Second), None);

        let mut mixed = MetricsWindow::default();
        for i in 0..100 {
            mixed.record(&outcome(i % 2 == 0, if i < 3 { 2 } else { 1 }));
        }
        assert_eq!(mixed.rank_fraction(Rank::Second), Ok(0.03));
        assert_eq!(mixed.success_rate_by_rank(Rank::Second), Some(2.0 / 3.0));

        let mut merged = w;
        merged.merge(&all);
        assert_eq!(merged.attempts, 20);
        assert_eq!(merged.success_rate(), Ok(0.5));
    }

    #[test]
    fn distinct_top_extremes() {
        assert_eq!(distinct_top_words(&lex_of_tops(&[4, 4, 4, 4])), 1);
        assert_eq!(distinct_top_words(&lex_of_tops(&[1, 2, 3, 4])), 4);
    }

    #[test]
    fn gap_histogram_cases() {
        let h = gap_distribution(&lex_of_tops(&[10, 5, 5]));
        assert_eq!(h.get(0), 1.0);
        assert_eq!(h.get(5), 1.0);
        assert_eq!(h.mass(), 2.0);

        let h = gap_distribution(&lex_of_tops(&[9; 6]));
        assert_eq!(h.get(0), 5.0);

        let avg = GapHistogram::average(&[
            GapHistogram::from_words(&[Word(1), Word(1)]),
            GapHistogram::from_words(&[Word(1), Word(3)]),
        ]);
        assert_eq!(avg.sample_size, 2);
        assert_eq!(avg.get(0), 0.5);
        assert_eq!(avg.get(2), 0.5);
    }

    #[test]
    fn baseline_degenerate_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(random_baseline_distinct(1, 1000, 50, &mut rng), (1.0, 0.0));
        assert_eq!(random_baseline_distinct(300, 1, 50, &mut rng), (1.0, 0.0));
        assert!((expected_distinct(1, 1000) - 1.0).abs() < 1e-12);
        assert!((expected_distinct(300, 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn baseline_matches_closed_form() {
        assert!((expected_distinct(500, 1000) - 393.6).abs() < 0.05);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let trials = 2000;
        let (mean, sd) = random_baseline_distinct(500, 1000, trials, &mut rng);
        let se = sd / (trials as f64).sqrt();
        assert!((mean - expected_distinct(500, 1000)).abs() < 3.0 * se, "{mean} ± {se}");
    }

    #[test]
    fn baseline_zero_gaps_match_collisions() {
        // Every repeated value contributes exactly one zero gap.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_baseline_gaps(500, 1000, 4000, &mut rng);
        let expected = 500.0 - expected_distinct(500, 1000);
        assert!((h.get(0) - expected).abs() < 0.3, "{}", h.get(0));
        assert!((h.mass() - 499.0).abs() < 1e-9);
    }

    #[test]
    fn scatter_and_diagonal() {
        let a = lex_of_tops(&[3, 7]);
        let b = AgentLexicon::new(vec![
            Inventory::from_entries(5, [(100, 5), (104, 2)]).unwrap(),
            Inventory::from_entries(5, [(10, 5), (900, 2)]).unwrap(),
        ]);
        let recs = scatter_snapshot(&a, &b);
        assert_eq!(recs.len(), 4);
        assert!(recs[..2].iter().all(|r| r.agent == 0 && r.second.is_none()));
        assert_eq!(recs[2].second, Some(Word(104)));
        assert_eq!(diagonal_fraction(&recs, 5), Some(0.5));
        assert_eq!(diagonal_fraction(&recs[..2], 5), None);
    }

    #[test]
    fn random_pair_probability_by_enumeration() {
        for (r, a) in [(50u32, 3u32), (20, 0), (7, 10), (500, 10)] {
            let mut near = 0u64;
            let mut total = 0u64;
            for x in 1..=r {
                for y in 1..=r {
                    if x != y {
                        total += 1;
                        near += u64::from(x.abs_diff(y) <= a);
                    }
                }
            }
            let exact = near as f64 / total as f64;
            assert!((random_pair_diagonal_probability(r, a) - exact).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn gap_mass_is_n_minus_one(words in prop::collection::vec(1u32..300, 1..200)) {
            let words: Vec<Word> = words.into_iter().map(Word).collect();
            let h = GapHistogram::from_words(&words);
            prop_assert_eq!(h.mass(), (words.len() - 1) as f64);
            let lex = AgentLexicon::new(
                words.iter().map(|&w| Inventory::singleton(5, w).unwrap()).collect(),
            );
            let d = distinct_top_words(&lex);
            prop_assert!(d >= 1 && d <= words.len());
            prop_assert_eq!(h.get(0) as usize, words.len() - d);
        }
    }
}
