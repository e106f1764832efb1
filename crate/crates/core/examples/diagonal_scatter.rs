//! Largest versus second-largest word of every inventory at the end of a
//! run. Under noise the pairs crowd near the diagonal.
//!
//! ```bash
//! cargo run --release --example diagonal_scatter -- scatter.csv
//! ```

use naming_game::engine::{run, SimConfig};
use naming_game::harness::scatter_csv;
use naming_game::metrics::{mean_sd, random_pair_diagonal_probability};
use naming_game::ModelParams;

fn main() {
    let out = std::env::args().nth(1);
    let threshold = 10;
    let config = |p, a| SimConfig {
        params: ModelParams { n: 100, r: 500, p, a, ..ModelParams::default() },
        total_time: 1000,
        measure_every: 1000,
        runs: 10,
        seed: 5,
        diagonal_threshold: Some(threshold),
        ..SimConfig::default()
    };

    println!("share of pairs with |top - second| <= {threshold}");
    println!("  random pair: {:.4}", random_pair_diagonal_probability(500, threshold));
    for (label, p, a) in [("p=0", 0.0, 0), ("p=0.05 a=10", 0.05, 10)] {
        let art = run(&config(p, a)).unwrap();
        let fractions: Vec<f64> = art.diagonal_fractions().into_iter().flatten().collect();
        let (m, sd) = mean_sd(&fractions);
        println!("  {label}: {m:.4} ± {sd:.4}");
        if let (Some(path), true) = (&out, p > 0.0) {
            std::fs::write(path, scatter_csv(&art)).unwrap();
            println!("noisy scatter written to {path}");
        }
    }
}
