//! Time evolution of the success rate, the number of distinct
//! largest-weight words and the share of second-rank utterances.
//!
//! ```bash
//! cargo run --release --example convergence            # n=100, r=500
//! cargo run --release --example convergence -- full    # n=500, r=1000
//! ```

use naming_game::engine::{run, SimConfig};
use naming_game::metrics::{MetricsWindow, Rank};
use naming_game::ModelParams;

fn main() {
    let full = std::env::args().nth(1).as_deref() == Some("full");
    let (n, r) = if full { (500, 1000) } else { (100, 500) };
    let config = SimConfig {
        params: ModelParams { n, r, ..ModelParams::default() },
        total_time: 1000,
        runs: 10,
        seed: 2009,
        ..SimConfig::default()
    };
    let art = run(&config).expect("valid configuration");
    let runs = art.runs.len() as f64;

    println!("n={n} l={} r={r} eps={}, {} runs", config.params.l, config.params.epsilon, config.runs);
    println!(
        "{:>9} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "t", "success", "distinct", "rank2", "r1_succ", "r2_succ"
    );
    for (from, to) in [(0, 1), (1, 10), (10, 110), (110, 300), (300, 600), (600, 900), (900, 1000)] {
        let mut w = MetricsWindow::default();
        for run in &art.runs {
            w.merge(&run.window_between(from, to));
        }
        let distinct = art.runs.iter().map(|r| r.mean_distinct_top(to).unwrap()).sum::<f64>() / runs;
        let rate = |rank| {
            w.success_rate_by_rank(rank)
                .map_or_else(|| "-".to_string(), |x| format!("{x:.4}"))
        };
        println!(
            "{:>9} {:>9.4} {:>9.1} {:>9.4} {:>9} {:>9}",
            format!("{from}-{to}"),
            w.success_rate().unwrap(),
            distinct,
            w.rank_fraction(Rank::Second).unwrap(),
            rate(Rank::First),
            rate(Rank::Second),
        );
    }
    let start = art.runs.iter().map(|r| r.mean_distinct_top(0).unwrap()).sum::<f64>() / runs;
    println!("distinct largest-weight words at t=0: {start:.1}");
}
