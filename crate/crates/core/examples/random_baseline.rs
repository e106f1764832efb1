//! Distinct words among n uniform draws from r: Monte Carlo against the
//! closed form.
//!
//! ```bash
//! cargo run --release --example random_baseline
//! ```

use naming_game::harness::baseline;

fn main() {
    println!("{:>5} {:>6} {:>10} {:>8} {:>12}", "n", "r", "mc_mean", "mc_sd", "closed_form");
    for (n, r) in [(1, 1000), (100, 500), (500, 1000), (1000, 1000), (500, 10_000)] {
        let b = baseline(n, r, 10_000, 1).unwrap();
        println!(
            "{n:>5} {r:>6} {:>10.3} {:>8.3} {:>12.3}",
            b.distinct_mean, b.distinct_sd, b.distinct_closed_form
        );
    }
}
