//! Spacing of the largest-weight words along the verbal space, with and
//! without transmission noise, against uniformly drawn words.
//!
//! ```bash
//! cargo run --release --example noise_gaps
//! ```

use naming_game::engine::{run, SimConfig};
use naming_game::harness::baseline;
use naming_game::ModelParams;

fn main() {
    let (n, r) = (100, 500);
    let config = |p, a| SimConfig {
        params: ModelParams { n, r, p, a, ..ModelParams::default() },
        total_time: 1000,
        measure_every: 100,
        runs: 10,
        seed: 3,
        ..SimConfig::default()
    };
    let quiet = run(&config(0.0, 0)).unwrap();
    let noisy = run(&config(0.05, 10)).unwrap();
    let random = baseline(n, r, 10_000, 3).unwrap();

    println!("N(d): mean number of neighbouring top words at distance d");
    println!("{:>4} {:>10} {:>10} {:>10}", "d", "random", "p=0", "p=0.05");
    for d in 0..=15 {
        println!(
            "{d:>4} {:>10.3} {:>10.3} {:>10.3}",
            random.gaps.get(d),
            quiet.gaps.get(d),
            noisy.gaps.get(d)
        );
    }
}
