//! What happens to a speaker word that fails at unit weight. The three
//! policies give very different long-run behaviour.
//!
//! ```bash
//! cargo run --release --example depletion_policies
//! ```

use naming_game::dynamics::Depletion;
use naming_game::engine::{run, SimConfig};
use naming_game::ModelParams;

fn main() {
    println!("{:>18} {:>9} {:>9} {:>9}", "policy", "success", "distinct", "reseeds");
    for depletion in [Depletion::FloorAtOne, Depletion::KeepLastWord, Depletion::RemoveAndReseed] {
        let config = SimConfig {
            params: ModelParams { n: 100, r: 500, depletion, ..ModelParams::default() },
            total_time: 1000,
            measure_every: 100,
            runs: 5,
            seed: 23,
            ..SimConfig::default()
        };
        let art = run(&config).unwrap();
        let last = art.series.last().unwrap();
        let reseeds: u64 = art.runs.iter().map(|r| r.reseed_repairs).sum();
        println!(
            "{:>18} {:>9.4} {:>9.1} {:>9}",
            format!("{depletion:?}"),
            last.mean[0].unwrap(),
            (last.mean[1].unwrap() + last.mean[2].unwrap()) / 2.0,
            reseeds
        );
    }
}
