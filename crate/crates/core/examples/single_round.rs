//! One communication attempt between two hand-built lexicons, traced step
//! by step.
//!
//! ```bash
//! cargo run --example single_round
//! ```

use naming_game::dynamics::{communication_round, similarity};
use naming_game::{AgentLexicon, Inventory, ModelParams, Word};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lexicon(objects: &[&[(u32, u32)]]) -> AgentLexicon {
    AgentLexicon::new(
        objects
            .iter()
            .map(|entries| Inventory::from_entries(10, entries.iter().copied()).unwrap())
            .collect(),
    )
}

fn show(name: &str, lex: &AgentLexicon) {
    for (i, inv) in lex.inventories().iter().enumerate() {
        let words: Vec<String> = inv.entries().iter().map(|e| format!("{}:{}", e.word.0, e.weight)).collect();
        println!("  {name} object {}: {}", i + 1, words.join(" "));
    }
}

fn main() {
    let params = ModelParams { n: 3, r: 100, p: 0.05, a: 3, ..ModelParams::default() };
    let mut a = lexicon(&[&[(10, 3), (12, 1)], &[(50, 2)], &[(90, 1)]]);
    let mut b = lexicon(&[&[(11, 2)], &[(48, 1), (70, 1)], &[(20, 4)]]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    println!("before:");
    show("A", &a);
    show("B", &b);

    println!("similarity of B's inventories to word 11:");
    for (i, inv) in b.inventories().iter().enumerate() {
        println!("  object {}: {:.6}", i + 1, similarity(inv, Word(11), params.epsilon).unwrap());
    }

    for round in 0..4 {
        let out = if round % 2 == 0 {
            communication_round(&mut a, &mut b, &params, &mut rng)
        } else {
            communication_round(&mut b, &mut a, &params, &mut rng)
        }
        .unwrap();
        println!(
            "round {round} ({} speaks): object {} -> word {} (rank {}) -> heard {}{} -> decoded {} [{}]",
            if round % 2 == 0 { "A" } else { "B" },
            out.object + 1,
            out.uttered.0,
            out.speaker_rank,
            out.received.0,
            if out.noise_fired { " (noise)" } else { "" },
            out.decoded + 1,
            if out.success { "success" } else { "failure" },
        );
    }

    println!("after:");
    show("A", &a);
    show("B", &b);
}
