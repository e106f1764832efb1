//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Runs at the reduced scale (n=100, r=500) by default. Set
//! `NAMING_GAME_FULL=1` for the reference scale (n=500, r=1000), which takes
//! several minutes on one core.

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};

use naming_game::dynamics::{roulette_select, similarity, ModelParams};
use naming_game::engine::{run, run_rng, RunArtifacts, SimConfig, SimState};
use naming_game::harness::{self, parse_config};
use naming_game::lexicon::{Inventory, Word};
use naming_game::metrics::{
    distinct_top_words, expected_distinct, mean_sd, random_pair_diagonal_probability, Rank,
    MetricsWindow,
};

const SEED: u64 = 20_090_615;
const RUNS: usize = 10;
const HORIZON: u64 = 1000;
const ALPHA: f64 = 0.01;
const NOISE_P: f64 = 0.05;
const NOISE_A: u32 = 10;

struct Scale {
    n: usize,
    r: u32,
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn base_config(scale: &Scale) -> SimConfig {
    SimConfig {
        params: ModelParams {
            n: scale.n,
            l: 10,
            r: scale.r,
            epsilon: 1e-5,
            p: 0.0,
            a: 0,
            ..ModelParams::default()
        },
        total_time: HORIZON,
        measure_every: 1,
        snapshot_at: vec![],
        runs: RUNS,
        seed: SEED,
        strict_ranges: true,
        diagonal_threshold: Some(NOISE_A),
    }
}

fn with_params(scale: &Scale, f: impl FnOnce(&mut ModelParams)) -> SimConfig {
    let mut c = base_config(scale);
    f(&mut c.params);
    c
}

// --- statistics -----------------------------------------------------------

fn t_upper_tail(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return if t > 0.0 { 0.0 } else { 1.0 };
    }
    1.0 - StudentsT::new(0.0, 1.0, df).unwrap().cdf(t)
}

/// One-sided Welch test of mean(a) > mean(b); returns the p-value.
fn welch_greater(a: &[f64], b: &[f64]) -> f64 {
    let (ma, sa) = mean_sd(a);
    let (mb, sb) = mean_sd(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (va, vb) = (sa * sa / na, sb * sb / nb);
    let se = (va + vb).sqrt();
    if se == 0.0 {
        return if ma > mb { 0.0 } else { 1.0 };
    }
    let df = (va + vb).powi(2) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    t_upper_tail((ma - mb) / se, df)
}

/// One-sided paired test of mean(after - before) > 0.
fn paired_greater(after: &[f64], before: &[f64]) -> f64 {
    let diffs: Vec<f64> = after.iter().zip(before).map(|(a, b)| a - b).collect();
    let (m, sd) = mean_sd(&diffs);
    let n = diffs.len() as f64;
    if sd == 0.0 {
        return if m > 0.0 { 0.0 } else { 1.0 };
    }
    t_upper_tail(m / (sd / n.sqrt()), n - 1.0)
}

/// Two-sided one-sample test of mean(x) = mu.
fn one_sample_two_sided(x: &[f64], mu: f64) -> f64 {
    let (m, sd) = mean_sd(x);
    let n = x.len() as f64;
    let t = (m - mu) / (sd / n.sqrt());
    2.0 * t_upper_tail(t.abs(), n - 1.0)
}

fn mean(x: &[f64]) -> f64 {
    mean_sd(x).0
}

fn per_run(art: &RunArtifacts, f: impl Fn(&MetricsWindow) -> f64, from: u64, to: u64) -> Vec<f64> {
    art.runs.iter().map(|r| f(&r.window_between(from, to))).collect()
}

fn success(w: &MetricsWindow) -> f64 {
    w.success_rate().unwrap()
}

fn rank2_fraction(w: &MetricsWindow) -> f64 {
    w.rank_fraction(Rank::Second).unwrap()
}

// --- criteria ---------------------------------------------------------------

fn initialization_baseline(scale: &Scale) -> Verdict {
    let params = base_config(scale).params;
    let counts: Vec<f64> = (0..100)
        .flat_map(|i| {
            let s = SimState::initialize(&params, true, run_rng(SEED, i)).unwrap();
            s.agents.map(|a| distinct_top_words(&a) as f64)
        })
        .collect();
    let (m, sd) = mean_sd(&counts);
    let se = sd / (counts.len() as f64).sqrt();
    let expected = expected_distinct(scale.n, scale.r);
    verdict(
        (m - expected).abs() <= 3.0 * se,
        format!("mean {m:.2} over {} lexicons vs closed form {expected:.2} (3σ = {:.2})", counts.len(), 3.0 * se),
    )
}

fn convergence_trend(base: &RunArtifacts) -> Verdict {
    let early = mean(&per_run(base, success, 0, 1));
    let late = mean(&per_run(base, success, HORIZON - 1, HORIZON));
    verdict(
        late - early >= 0.3 && late > 0.8,
        format!("success t=1 {early:.4}, t=1000 {late:.4}"),
    )
}

fn epsilon_degradation(base: &RunArtifacts, wide: &RunArtifacts) -> Verdict {
    let small = per_run(base, success, 900, HORIZON);
    let large = per_run(wide, success, 900, HORIZON);
    let p = welch_greater(&small, &large);
    verdict(
        p < ALPHA,
        format!("final success ε=1e-5 {:.4} vs ε=0.1 {:.4}, p = {p:.2e}", mean(&small), mean(&large)),
    )
}

fn homonymy_persistence(scale: &Scale, base: &RunArtifacts, large_r: &RunArtifacts) -> Verdict {
    let at = |art: &RunArtifacts, t| -> Vec<f64> {
        art.runs.iter().map(|r| r.mean_distinct_top(t).unwrap()).collect()
    };
    let (start, end) = (at(base, 0), at(base, HORIZON));
    let p = paired_greater(&end, &start);
    let n = scale.n as f64;
    let large_end = mean(&at(large_r, HORIZON));
    verdict(
        p < ALPHA && mean(&end) < n && large_end > 0.99 * n,
        format!(
            "r={}: {:.1} → {:.1} (p = {p:.2e}, n = {n}); r=10^4 final {large_end:.1}",
            scale.r,
            mean(&start),
            mean(&end)
        ),
    )
}

fn synonymy_transience(base: &RunArtifacts) -> Verdict {
    let early = per_run(base, rank2_fraction, 10, 110);
    let late = per_run(base, rank2_fraction, 900, HORIZON);
    let p = paired_greater(&early, &late);
    verdict(
        p < ALPHA,
        format!("rank-2 fraction [10,110] {:.4} vs [900,1000] {:.4}, p = {p:.2e}", mean(&early), mean(&late)),
    )
}

fn synonym_validity(base: &RunArtifacts) -> Verdict {
    let mut pooled = MetricsWindow::default();
    for r in &base.runs {
        pooled.merge(&r.window_between(10, 100));
    }
    let rate = pooled.success_rate_by_rank(Rank::Second).unwrap_or(0.0);
    verdict(
        rate > 0.5,
        format!("rank-2 success in [10,100] {rate:.4} over {} utterances", pooled.rank2_utterances),
    )
}

fn noise_redistribution(scale: &Scale, base: &RunArtifacts, noisy: &RunArtifacts) -> Verdict {
    let baseline = harness::baseline(scale.n, scale.r, 10_000, SEED).unwrap();
    let (b0, q0, n0) = (baseline.gaps.get(0), base.gaps.get(0), noisy.gaps.get(0));
    verdict(
        n0 < q0 && q0 < b0,
        format!("N(0): noisy {n0:.2} < noiseless {q0:.2} < random {b0:.2}"),
    )
}

fn diagonal_accumulation(scale: &Scale, base: &RunArtifacts, noisy: &RunArtifacts) -> Verdict {
    let fractions = |art: &RunArtifacts| -> Vec<f64> {
        art.diagonal_fractions().into_iter().map(|f| f.unwrap()).collect()
    };
    let (quiet, loud) = (fractions(base), fractions(noisy));
    let p = welch_greater(&loud, &quiet);
    let expected = random_pair_diagonal_probability(scale.r, NOISE_A);
    let p_random = one_sample_two_sided(&quiet, expected);
    verdict(
        p < ALPHA && p_random > ALPHA,
        format!(
            "|top−second| ≤ {NOISE_A}: noisy {:.4}, noiseless {:.4} (p = {p:.2e}); random pair {expected:.4} (p = {p_random:.3})",
            mean(&loud),
            mean(&quiet)
        ),
    )
}

fn single_object_oracle() -> Verdict {
    let config = SimConfig {
        params: ModelParams { n: 1, ..ModelParams::default() },
        total_time: 200,
        runs: 3,
        strict_ranges: false,
        ..SimConfig::default()
    };
    let art = run(&config).unwrap();
    let all_one = art
        .runs
        .iter()
        .flat_map(|r| r.samples.iter().skip(1))
        .all(|s| s.window.success_rate() == Ok(1.0));
    verdict(all_one, "n=1, 3 runs × 200 units: every window at 1.0".into())
}

fn read_csvs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn determinism(scale: &Scale) -> Verdict {
    let tmp = tempfile::tempdir().unwrap();
    let mut config = with_params(scale, |p| {
        p.p = NOISE_P;
        p.a = NOISE_A;
    });
    config.total_time = 50;
    config.runs = 3;
    config.snapshot_at = vec![0, 25, 50];
    let (a, b, c) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c"));
    harness::cmd_run(&config, &a).unwrap();
    harness::cmd_run(&config, &b).unwrap();
    let manifest = parse_config(&fs::read_to_string(a.join("manifest.toml")).unwrap()).unwrap();
    harness::cmd_run(&manifest, &c).unwrap();
    let (fa, fb, fc) = (read_csvs(&a), read_csvs(&b), read_csvs(&c));
    verdict(
        fa.len() >= 5 && fa == fb && fa == fc,
        format!("{} CSV files identical across two runs and a manifest replay", fa.len()),
    )
}

fn similarity_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x11);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let size = rng.gen_range(1..=20);
        let mut words: Vec<u32> = Vec::new();
        while words.len() < size {
            let w = rng.gen_range(1..=10_000);
            if !words.contains(&w) {
                words.push(w);
            }
        }
        let entries: Vec<(u32, u32)> = words.iter().map(|&w| (w, rng.gen_range(1..=100))).collect();
        let x_c = rng.gen_range(1..=10_000u32);
        let eps = 10f64.powf(rng.gen_range(-5.0..=-1.0));

        // normalise the weights first, then sum the kernel terms
        let total: u64 = entries.iter().map(|&(_, w)| u64::from(w)).sum();
        let direct: f64 = entries
            .iter()
            .map(|&(x, w)| (w as f64 / total as f64) / (eps + (x as i64 - x_c as i64).abs() as f64))
            .sum();

        let inv = Inventory::from_entries(20, entries).unwrap();
        let got = similarity(&inv, Word(x_c), eps).unwrap();
        worst = worst.max(((got - direct) / direct).abs());
    }
    verdict(worst <= 1e-12, format!("max relative error {worst:.2e} over 10^4 inventories"))
}

fn roulette_statistics() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x22);
    let draws = 100_000;
    let mut worst_p: f64 = 1.0;
    for _ in 0..20 {
        let k = rng.gen_range(2..=12);
        let weights: Vec<f64> = (0..k)
            .map(|_| if rng.gen_bool(0.15) { 0.0 } else { rng.gen_range(0.01..10.0) })
            .collect();
        if weights.iter().all(|&w| w == 0.0) {
            continue;
        }
        let mut counts = vec![0u64; k];
        for _ in 0..draws {
            counts[roulette_select(&weights, &mut rng).unwrap()] += 1;
        }
        let total: f64 = weights.iter().sum();
        let mut chi2 = 0.0;
        let mut cells = 0;
        for (c, w) in counts.iter().zip(&weights) {
            if *w == 0.0 {
                assert_eq!(*c, 0, "zero-weight index drawn");
                continue;
            }
            let expected = draws as f64 * w / total;
            chi2 += (*c as f64 - expected).powi(2) / expected;
            cells += 1;
        }
        let p = if cells < 2 {
            1.0
        } else {
            1.0 - ChiSquared::new((cells - 1) as f64).unwrap().cdf(chi2)
        };
        worst_p = worst_p.min(p);
    }
    verdict(worst_p > 1e-3, format!("smallest χ² p-value {worst_p:.4} over 20 weight vectors"))
}

fn main() -> ExitCode {
    let full = std::env::var("NAMING_GAME_FULL").is_ok_and(|v| v == "1");
    let scale = if full { Scale { n: 500, r: 1000 } } else { Scale { n: 100, r: 500 } };
    println!(
        "acceptance at n={}, r={} ({} scale), {RUNS} runs × {HORIZON} units",
        scale.n,
        scale.r,
        if full { "reference" } else { "reduced" }
    );

    let base = run(&base_config(&scale)).unwrap();
    let wide = run(&with_params(&scale, |p| p.epsilon = 0.1)).unwrap();
    let large_r = run(&with_params(&scale, |p| p.r = 10_000)).unwrap();
    let noisy = run(&with_params(&scale, |p| {
        p.p = NOISE_P;
        p.a = NOISE_A;
    }))
    .unwrap();

    let criteria: Vec<(&str, Verdict)> = vec![
        ("initialization baseline", initialization_baseline(&scale)),
        ("convergence trend", convergence_trend(&base)),
        ("epsilon degradation", epsilon_degradation(&base, &wide)),
        ("homonymy persistence", homonymy_persistence(&scale, &base, &large_r)),
        ("synonymy transience", synonymy_transience(&base)),
        ("synonym validity", synonym_validity(&base)),
        ("noise redistribution", noise_redistribution(&scale, &base, &noisy)),
        ("diagonal accumulation", diagonal_accumulation(&scale, &base, &noisy)),
        ("single-object oracle", single_object_oracle()),
        ("determinism", determinism(&scale)),
        ("similarity oracle", similarity_oracle()),
        ("roulette statistics", roulette_statistics()),
    ];

    let mut failed = 0;
    for (i, (name, v)) in criteria.iter().enumerate() {
        let mark = if v.pass { "PASS" } else { "FAIL" };
        println!("[{mark}] {:>2}. {name}: {}", i + 1, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
