//! Parameter sweep through the harness: final success rate across epsilon,
//! with every point's artifact directory written to disk.
//!
//! ```bash
//! cargo run --release --example epsilon_sweep -- /tmp/eps-sweep
//! ```

use std::path::PathBuf;

use naming_game::harness::{cmd_sweep, parse_sweep};

const SWEEP: &str = r#"
n = 100
l = 10
r = 500
epsilon = 1e-5
p = 0.0
a = 0
total_time = 1000
measure_every = 10
runs = 5
seed = 17
sweep_axis = "epsilon"
sweep_values = [1e-5, 1e-3, 1e-2, 0.05, 0.1]
"#;

fn main() {
    let out = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("naming-game-eps-sweep"), PathBuf::from);
    let spec = parse_sweep(SWEEP).unwrap();
    let arts = cmd_sweep(&spec, &out).unwrap();
    println!("{:>8} {:>10} {:>8}", "epsilon", "success", "se");
    for (v, art) in spec.values.iter().zip(&arts) {
        let last = art.series.last().unwrap();
        println!("{v:>8} {:>10.4} {:>8.4}", last.mean[0].unwrap(), last.stderr[0].unwrap_or(0.0));
    }
    println!("artifacts in {}", out.display());
}
