//! Words, weighted inventories and whole-agent lexicons.
//!
//! An [`Inventory`] holds at most `capacity` distinct words, each with a
//! positive integer weight. An [`AgentLexicon`] owns one inventory per
//! object; objects are addressed by zero-based index internally and written
//! out one-based by the harness.
//!
//! Ordering used everywhere ("rank"): larger weight first, ties broken by
//! the smaller word value. Eviction removes the last entry under that
//! ordering among the minimum-weight ones, i.e. the minimum weight with the
//! smallest word value.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// A word of the verbal space `[1, r]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub u32);

impl Word {
    pub fn value(self) -> u32 {
        self.0
    }

    /// Absolute distance between two code points.
    pub fn distance(self, other: Word) -> u32 {
        self.0.abs_diff(other.0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LexEntry {
    pub word: Word,
    pub weight: u32,
}

impl LexEntry {
    pub fn new(word: Word, weight: u32) -> Self {
        LexEntry { word, weight }
    }

    /// Rank ordering: heavier first, then smaller word.
    fn rank_cmp(&self, other: &LexEntry) -> Ordering {
        other
            .weight
            .cmp(&self.weight)
            .then(self.word.cmp(&other.word))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LexiconError {
    #[error("word {0} is not stored in the inventory")]
    WordAbsent(Word),
    #[error("word {0} is already stored in the inventory")]
    WordPresent(Word),
    #[error("inventory capacity must be at least 1")]
    ZeroCapacity,
}

/// Reinforcement direction for [`Inventory::reinforce`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Delta {
    Up,
    Down,
}

/// Result of a weight change.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reinforced {
    /// The entry survived with the given new weight.
    Weight(u32),
    /// The weight dropped to zero and the entry was removed.
    Removed,
}

/// Bounded set of weighted words describing one object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inventory {
    entries: Vec<LexEntry>,
    capacity: usize,
}

impl Inventory {
    pub fn new(capacity: usize) -> Result<Self, LexiconError> {
        if capacity == 0 {
            return Err(LexiconError::ZeroCapacity);
        }
        Ok(Inventory {
            entries: Vec::with_capacity(capacity),
            capacity,
        })
    }

    /// Inventory holding a single word at unit weight.
    pub fn singleton(capacity: usize, word: Word) -> Result<Self, LexiconError> {
        let mut inv = Inventory::new(capacity)?;
        inv.entries.push(LexEntry::new(word, 1));
        Ok(inv)
    }

    /// Builds an inventory from explicit entries, keeping insertion order.
    ///
    /// Zero weights, duplicate words and overflow are rejected so that the
    /// result satisfies every inventory invariant.
    pub fn from_entries(
        capacity: usize,
        entries: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self, LexiconError> {
        let mut inv = Inventory::new(capacity)?;
        for (word, weight) in entries {
            let word = Word(word);
            if inv.contains(word) {
                return Err(LexiconError::WordPresent(word));
            }
            assert!(weight >= 1, "stored weights must be positive");
            assert!(inv.entries.len() < capacity, "inventory over capacity");
            inv.entries.push(LexEntry::new(word, weight));
        }
        Ok(inv)
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn total_weight(&self) -> u64 {
        self.entries.iter().map(|e| u64::from(e.weight)).sum()
    }

    pub fn position(&self, word: Word) -> Option<usize> {
        self.entries.iter().position(|e| e.word == word)
    }

    pub fn contains(&self, word: Word) -> bool {
        self.position(word).is_some()
    }

    pub fn weight_of(&self, word: Word) -> Option<u32> {
        self.position(word).map(|i| self.entries[i].weight)
    }

    /// The largest-weight entry.
    pub fn top_entry(&self) -> Option<LexEntry> {
        self.entries.iter().copied().min_by(LexEntry::rank_cmp)
    }

    /// The second entry under the rank ordering, if there are two or more.
    pub fn second_entry(&self) -> Option<LexEntry> {
        let top = self.top_entry()?;
        self.entries
            .iter()
            .copied()
            .filter(|e| e.word != top.word)
            .min_by(LexEntry::rank_cmp)
    }

    /// One-based rank of `word` (1 = largest weight), or `None` if absent.
    pub fn rank_of(&self, word: Word) -> Option<usize> {
        let target = self.entries[self.position(word)?];
        let ahead = self
            .entries
            .iter()
            .filter(|e| e.rank_cmp(&target) == Ordering::Less)
            .count();
        Some(ahead + 1)
    }

    /// Changes the weight of a stored word by one; removes the entry when
    /// its weight reaches zero.
    pub fn reinforce(&mut self, word: Word, delta: Delta) -> Result<Reinforced, LexiconError> {
        let idx = self.position(word).ok_or(LexiconError::WordAbsent(word))?;
        let entry = &mut self.entries[idx];
        match delta {
            Delta::Up => {
                entry.weight += 1;
                Ok(Reinforced::Weight(entry.weight))
            }
            Delta::Down if entry.weight <= 1 => {
                self.entries.remove(idx);
                Ok(Reinforced::Removed)
            }
            Delta::Down => {
                entry.weight -= 1;
                Ok(Reinforced::Weight(entry.weight))
            }
        }
    }

    /// Inserts a new word at unit weight, evicting the lightest entry first
    /// when the inventory is full. Returns the evicted entry.
    pub fn add_word(&mut self, word: Word) -> Result<Option<LexEntry>, LexiconError> {
        if self.contains(word) {
            return Err(LexiconError::WordPresent(word));
        }
        let evicted = if self.entries.len() >= self.capacity {
            let idx = self
                .entries
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| a.weight.cmp(&b.weight).then(a.word.cmp(&b.word)))
                .map(|(i, _)| i)
                .expect("full inventory has entries");
            Some(self.entries.remove(idx))
        } else {
            None
        };
        self.entries.push(LexEntry::new(word, 1));
        Ok(evicted)
    }

    /// Increments `word` if present, otherwise adds it at unit weight.
    pub fn reinforce_or_add(&mut self, word: Word) {
        match self.position(word) {
            Some(idx) => self.entries[idx].weight += 1,
            None => {
                self.add_word(word).expect("word checked absent");
            }
        }
    }

    pub(crate) fn reset_to(&mut self, word: Word) {
        self.entries.clear();
        self.entries.push(LexEntry::new(word, 1));
    }
}

/// One inventory per object, indexed by object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgentLexicon {
    inventories: Vec<Inventory>,
}

impl AgentLexicon {
    pub fn new(inventories: Vec<Inventory>) -> Self {
        AgentLexicon { inventories }
    }

    /// Number of objects.
    pub fn objects(&self) -> usize {
        self.inventories.len()
    }

    pub fn inventory(&self, object: usize) -> &Inventory {
        &self.inventories[object]
    }

    pub fn inventory_mut(&mut self, object: usize) -> &mut Inventory {
        &mut self.inventories[object]
    }

    pub fn inventories(&self) -> &[Inventory] {
        &self.inventories
    }

    /// Largest-weight word of every inventory, in object order.
    pub fn top_words(&self) -> Vec<Word> {
        self.inventories
            .iter()
            .map(|inv| inv.top_entry().expect("inventories are never empty").word)
            .collect()
    }

    pub fn all_nonempty(&self) -> bool {
        self.inventories.iter().all(|inv| !inv.is_empty())
    }
}
