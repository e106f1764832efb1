//! Driving the engine by hand: step attempt by attempt and watch one
//! object's inventories converge.
//!
//! ```bash
//! cargo run --release --example stepping
//! ```

use naming_game::engine::{run_rng, SimState};
use naming_game::metrics::MetricsWindow;
use naming_game::ModelParams;

fn main() {
    let params = ModelParams { n: 100, r: 500, ..ModelParams::default() };
    let mut state = SimState::initialize(&params, true, run_rng(42, 0)).unwrap();
    for t in 1..=200u32 {
        let mut window = MetricsWindow::default();
        state.step_time_unit_with(|o| window.record(o)).unwrap();
        if t.is_power_of_two() || t == 200 {
            let [a, b] = &state.agents;
            let top = |lex: &naming_game::AgentLexicon| lex.inventory(0).top_entry().unwrap();
            println!(
                "t={t:>3} success={:.3} object 1: A top {} (w={}), B top {} (w={})",
                window.success_rate().unwrap(),
                top(a).word.0,
                top(a).weight,
                top(b).word.0,
                top(b).weight,
            );
        }
    }
}
