//! One communication attempt between a speaker and a hearer.
//!
//! The speaker picks an object uniformly, utters a word from that object's
//! inventory by roulette selection over the word weights, the channel may
//! shift the word by a bounded random offset, and the hearer decodes it by
//! roulette selection over the similarity scores of all of its
//! inventories. Success and failure then adjust both lexicons.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::{AgentLexicon, Delta, Inventory, Reinforced, Word};

/// Model parameters: object count, inventory capacity, verbal space size,
/// similarity regulariser and the two noise parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub l: usize,
    pub r: u32,
    pub epsilon: f64,
    pub p: f64,
    pub a: u32,
    /// What a failed utterance does to a speaker word of weight 1.
    #[serde(default)]
    pub depletion: Depletion,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            n: 500,
            l: 10,
            r: 1000,
            epsilon: 1e-5,
            p: 0.0,
            a: 0,
            depletion: Depletion::default(),
        }
    }
}

/// Handling of a speaker word whose weight would drop to zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Depletion {
    /// Remove the word; an inventory left empty is re-seeded with one
    /// uniform random word at unit weight.
    RemoveAndReseed,
    /// Remove the word unless it is the only one in its inventory, which
    /// then keeps weight 1.
    KeepLastWord,
    /// Weights never drop below 1.
    #[default]
    FloorAtOne,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("parameter {name} = {value} is invalid: {reason}")]
    Invalid {
        name: &'static str,
        value: String,
        reason: &'static str,
    },
    #[error("{0}")]
    OutOfRange(RangeWarning),
}

/// A parameter outside the studied ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeWarning {
    pub name: &'static str,
    pub value: String,
    pub range: &'static str,
}

impl fmt::Display for RangeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parameter {} = {} is outside the studied range {}",
            self.name, self.value, self.range
        )
    }
}

impl ModelParams {
    /// Checks the parameters.
    ///
    /// Values that make the model ill-defined are always rejected. Values
    /// outside the studied ranges (`100 ≤ n ≤ 1000`, `5 ≤ l ≤ 20`,
    /// `500 ≤ r ≤ 10^4`, `1e-5 ≤ ε ≤ 0.1`, `0 ≤ p ≤ 0.05`, `0 ≤ a ≤ 10`)
    /// are errors when `strict` is set and returned as warnings otherwise.
    pub fn validate(&self, strict: bool) -> Result<Vec<RangeWarning>, ParamError> {
        let invalid = |name, value: String, reason| ParamError::Invalid {
            name,
            value,
            reason,
        };
        if self.n == 0 {
            return Err(invalid("n", self.n.to_string(), "need at least one object"));
        }
        if self.l == 0 {
            return Err(invalid("l", self.l.to_string(), "capacity must be positive"));
        }
        if self.r == 0 {
            return Err(invalid("r", self.r.to_string(), "verbal space must be non-empty"));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(invalid(
                "epsilon",
                self.epsilon.to_string(),
                "must be finite and positive",
            ));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(invalid("p", self.p.to_string(), "must be a probability"));
        }

        let mut warnings = Vec::new();
        let mut check = |ok: bool, name, value: String, range| {
            if !ok {
                warnings.push(RangeWarning { name, value, range });
            }
        };
        check((100..=1000).contains(&self.n), "n", self.n.to_string(), "[100, 1000]");
        check((5..=20).contains(&self.l), "l", self.l.to_string(), "[5, 20]");
        check((500..=10_000).contains(&self.r), "r", self.r.to_string(), "[500, 10000]");
        check(
            (1e-5..=1e-1).contains(&self.epsilon),
            "epsilon",
            self.epsilon.to_string(),
            "[1e-5, 0.1]",
        );
        check((0.0..=0.05).contains(&self.p), "p", self.p.to_string(), "[0, 0.05]");
        check(self.a <= 10, "a", self.a.to_string(), "[0, 10]");

        if strict && !warnings.is_empty() {
            return Err(ParamError::OutOfRange(warnings.swap_remove(0)));
        }
        Ok(warnings)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SelectError {
    #[error("roulette selection over an empty pool")]
    EmptyPool,
    #[error("roulette selection needs at least one positive finite weight")]
    DegeneratePool,
}

/// Draws index `i` with probability `weights[i] / Σ weights`.
pub fn roulette_select<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> Result<usize, SelectError> {
    if weights.is_empty() {
        return Err(SelectError::EmptyPool);
    }
    let total: f64 = weights.iter().sum();
    if !(total.is_finite() && total > 0.0) || weights.iter().any(|w| *w < 0.0) {
        return Err(SelectError::DegeneratePool);
    }
    Ok(select_with_total(weights, total, rng))
}

fn select_with_total<R: Rng + ?Sized>(weights: &[f64], total: f64, rng: &mut R) -> usize {
    let mut target = rng.gen::<f64>() * total;
    let mut last_positive = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            if target < w {
                return i;
            }
            target -= w;
            last_positive = i;
        }
    }
    // rounding pushed the target past the final bucket
    last_positive
}

/// Speaker side: picks a word of inventory `object` by weight and reports
/// its rank (1 = largest weight) at the moment of selection.
pub fn speaker_utter<R: Rng + ?Sized>(
    lex: &AgentLexicon,
    object: usize,
    rng: &mut R,
) -> Result<(Word, usize), SelectError> {
    let inv = lex.inventory(object);
    let total = inv.total_weight();
    if total == 0 {
        return Err(SelectError::EmptyPool);
    }
    let mut target = rng.gen_range(0..total);
    for entry in inv.entries() {
        let w = u64::from(entry.weight);
        if target < w {
            let rank = inv.rank_of(entry.word).expect("entry is stored");
            return Ok((entry.word, rank));
        }
        target -= w;
    }
    unreachable!("target below total weight")
}

/// Channel noise: with probability `p` the word is shifted by `η`, uniform
/// on `[-a, a]`, redrawn until the result lies in `[1, r]`.
pub fn apply_noise<R: Rng + ?Sized>(x: Word, params: &ModelParams, rng: &mut R) -> Word {
    transmit(x, params, rng).0
}

/// Like [`apply_noise`] but also reports whether the noise fired.
fn transmit<R: Rng + ?Sized>(x: Word, params: &ModelParams, rng: &mut R) -> (Word, bool) {
    if params.p <= 0.0 || !rng.gen_bool(params.p) {
        return (x, false);
    }
    if params.a == 0 {
        return (x, true);
    }
    let a = i64::from(params.a);
    let r = i64::from(params.r);
    let x = i64::from(x.0);
    loop {
        let shifted = x + rng.gen_range(-a..=a);
        if (1..=r).contains(&shifted) {
            return (Word(shifted as u32), true);
        }
    }
}

/// Weighted inverse-distance similarity of `x_c` to an inventory:
/// `(1 / Σ w_i) Σ w_i / (ε + |x_i - x_c|)`.
///
/// Returns `None` for an empty inventory.
pub fn similarity(inv: &Inventory, x_c: Word, epsilon: f64) -> Option<f64> {
    if inv.is_empty() {
        return None;
    }
    let mut acc = 0.0;
    let mut total = 0.0;
    for e in inv.entries() {
        let w = f64::from(e.weight);
        acc += w / (epsilon + f64::from(e.word.distance(x_c)));
        total += w;
    }
    Some(acc / total)
}

/// Hearer side: roulette selection of an inventory with the similarity
/// scores as weights.
pub fn hearer_decode<R: Rng + ?Sized>(
    lex: &AgentLexicon,
    x_c: Word,
    epsilon: f64,
    rng: &mut R,
) -> Result<usize, SelectError> {
    let mut scores = Vec::with_capacity(lex.objects());
    decode_into(lex, x_c, epsilon, &mut scores, rng)
}

fn decode_into<R: Rng + ?Sized>(
    lex: &AgentLexicon,
    x_c: Word,
    epsilon: f64,
    scores: &mut Vec<f64>,
    rng: &mut R,
) -> Result<usize, SelectError> {
    scores.clear();
    let mut total = 0.0;
    for inv in lex.inventories() {
        let s = similarity(inv, x_c, epsilon).ok_or(SelectError::EmptyPool)?;
        total += s;
        scores.push(s);
    }
    if scores.is_empty() {
        return Err(SelectError::EmptyPool);
    }
    if !(total.is_finite() && total > 0.0) {
        return Err(SelectError::DegeneratePool);
    }
    Ok(select_with_total(scores, total, rng))
}

/// Success: the speaker reinforces the uttered word, the hearer reinforces
/// (or learns) the word it received.
pub fn update_on_success(
    speaker_inv: &mut Inventory,
    hearer_inv: &mut Inventory,
    uttered: Word,
    received: Word,
) {
    speaker_inv
        .reinforce(uttered, Delta::Up)
        .expect("uttered word comes from the speaker inventory");
    hearer_inv.reinforce_or_add(received);
}

/// Failure: the speaker weakens the uttered word, the hearer reinforces or
/// learns the received word in the inventory of the object the speaker
/// meant. A speaker word at weight 1 is treated according to `depletion`.
/// Returns true when the speaker's entry was removed.
pub fn update_on_failure(
    speaker_inv: &mut Inventory,
    hearer_target_inv: &mut Inventory,
    uttered: Word,
    received: Word,
    depletion: Depletion,
) -> bool {
    let weight = speaker_inv
        .weight_of(uttered)
        .expect("uttered word comes from the speaker inventory");
    let keep = weight == 1
        && match depletion {
            Depletion::RemoveAndReseed => false,
            Depletion::KeepLastWord => speaker_inv.len() == 1,
            Depletion::FloorAtOne => true,
        };
    let removed = !keep
        && speaker_inv.reinforce(uttered, Delta::Down) == Ok(Reinforced::Removed);
    hearer_target_inv.reinforce_or_add(received);
    removed
}

/// Full record of one communication attempt. Object indices are zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundOutcome {
    pub object: usize,
    pub uttered: Word,
    pub received: Word,
    pub decoded: usize,
    pub success: bool,
    pub speaker_rank: usize,
    pub noise_fired: bool,
    /// The failure emptied the speaker inventory and it was re-seeded.
    pub reseeded: bool,
}

/// Reusable buffers for [`communication_round_with`].
#[derive(Clone, Debug, Default)]
pub struct RoundScratch {
    scores: Vec<f64>,
}

/// Runs one complete attempt and mutates both lexicons.
pub fn communication_round<R: Rng + ?Sized>(
    speaker: &mut AgentLexicon,
    hearer: &mut AgentLexicon,
    params: &ModelParams,
    rng: &mut R,
) -> Result<RoundOutcome, SelectError> {
    communication_round_with(speaker, hearer, params, rng, &mut RoundScratch::default())
}

pub fn communication_round_with<R: Rng + ?Sized>(
    speaker: &mut AgentLexicon,
    hearer: &mut AgentLexicon,
    params: &ModelParams,
    rng: &mut R,
    scratch: &mut RoundScratch,
) -> Result<RoundOutcome, SelectError> {
    let object = rng.gen_range(0..speaker.objects());
    let (uttered, speaker_rank) = speaker_utter(speaker, object, rng)?;
    let (received, noise_fired) = transmit(uttered, params, rng);
    let decoded = decode_into(hearer, received, params.epsilon, &mut scratch.scores, rng)?;
    let success = decoded == object;
    let mut reseeded = false;
    if success {
        update_on_success(
            speaker.inventory_mut(object),
            hearer.inventory_mut(object),
            uttered,
            received,
        );
    } else {
        update_on_failure(
            speaker.inventory_mut(object),
            hearer.inventory_mut(object),
            uttered,
            received,
            params.depletion,
        );
        let inv = speaker.inventory_mut(object);
        if inv.is_empty() {
            inv.reset_to(Word(rng.gen_range(1..=params.r)));
            reseeded = true;
        }
    }
    Ok(RoundOutcome {
        object,
        uttered,
        received,
        decoded,
        success,
        speaker_rank,
        noise_fired,
        reseeded,
    })
}
