//! Homonymy as a function of the size of the verbal space: distinct
//! largest-weight words at the start and the end of a run, next to the
//! random-draw expectation.
//!
//! ```bash
//! cargo run --release --example homonymy
//! ```

use naming_game::engine::{run, SimConfig};
use naming_game::metrics::expected_distinct;
use naming_game::ModelParams;

fn main() {
    let n = 100;
    println!("{:>6} {:>10} {:>10} {:>10}", "r", "random", "t=0", "t=1000");
    for r in [500, 1000, 2000, 5000, 10_000] {
        let config = SimConfig {
            params: ModelParams { n, r, ..ModelParams::default() },
            total_time: 1000,
            measure_every: 1000,
            runs: 5,
            seed: 11,
            ..SimConfig::default()
        };
        let art = run(&config).unwrap();
        let mean_at = |t| {
            art.runs.iter().map(|run| run.mean_distinct_top(t).unwrap()).sum::<f64>() / art.runs.len() as f64
        };
        println!(
            "{r:>6} {:>10.2} {:>10.2} {:>10.2}",
            expected_distinct(n, r),
            mean_at(0),
            mean_at(1000)
        );
    }
}
