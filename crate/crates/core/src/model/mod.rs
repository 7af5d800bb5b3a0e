// Copyright 2026 The profp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Uncertain transaction databases under possible-worlds semantics.
//!
//! Every transaction lists the items that exist in it with nonzero
//! probability. Items and transactions are mutually independent, so the
//! probability of a world is the product of per-entry presence/absence
//! probabilities.

mod format;
mod synth;

pub use format::{format_probability, parse_database, serialize_database, ParseError};
pub use synth::{generate_synthetic, GenParams};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Transaction identifier, 1-based.
pub type Tid = u32;

/// Index of an item in a database's vocabulary. Ids are assigned in label
/// order, so comparing ids compares labels lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(pub u32);

impl ItemId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An item label: a non-empty token without whitespace or `:`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Item(String);

impl Item {
    pub fn new(label: impl Into<String>) -> Result<Item, DbError> {
        let label = label.into();
        let valid = !label.is_empty()
            && !label.starts_with('#')
            && !label
                .chars()
                .any(|c| c.is_whitespace() || c == ':' || c == ',');
        if valid {
            Ok(Item(label))
        } else {
            Err(DbError::InvalidLabel(label))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One (item, existential probability) pair of a transaction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Entry {
    pub item: ItemId,
    pub prob: f64,
}

impl Entry {
    pub fn is_certain(&self) -> bool {
        self.prob == 1.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UncertainTransaction {
    pub tid: Tid,
    /// Sorted by item, no duplicates, every prob in (0, 1].
    pub entries: Vec<Entry>,
}

impl UncertainTransaction {
    pub fn prob_of(&self, item: ItemId) -> f64 {
        match self.entries.binary_search_by_key(&item, |e| e.item) {
            Ok(pos) => self.entries[pos].prob,
            Err(_) => 0.0,
        }
    }

    /// Probability that every item of the sorted `itemset` is present.
    pub fn containment_prob(&self, itemset: &[ItemId]) -> f64 {
        let mut p = 1.0;
        let mut entries = self.entries.iter();
        'items: for &item in itemset {
            for e in entries.by_ref() {
                if e.item == item {
                    p *= e.prob;
                    continue 'items;
                }
                if e.item > item {
                    return 0.0;
                }
            }
            return 0.0;
        }
        p
    }

    pub fn uncertain_count(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_certain()).count()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum DbError {
    #[error("invalid item label {0:?}")]
    InvalidLabel(String),
    #[error("probability {prob} for item {item} is outside (0, 1]")]
    InvalidProbability { item: String, prob: f64 },
    #[error("item {item} appears twice in transaction {tid}")]
    DuplicateItem { item: String, tid: Tid },
    #[error("world is inconsistent with the database: {0}")]
    InconsistentWorld(String),
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

/// Ordered transactions t1..tN over a lexicographically ordered vocabulary.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct UncertainDatabase {
    items: Vec<Item>,
    transactions: Vec<UncertainTransaction>,
}

impl UncertainDatabase {
    /// Builds a database from labelled rows; row `i` becomes tid `i + 1`.
    pub fn from_rows<S: AsRef<str>>(rows: &[Vec<(S, f64)>]) -> Result<Self, DbError> {
        let mut labels = BTreeSet::new();
        for row in rows {
            for (label, _) in row {
                labels.insert(label.as_ref());
            }
        }
        let items = labels
            .iter()
            .map(|l| Item::new(*l))
            .collect::<Result<Vec<_>, _>>()?;
        let ids: BTreeMap<&str, ItemId> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (*l, ItemId(i as u32)))
            .collect();

        let mut transactions = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let tid = i as Tid + 1;
            let mut entries = Vec::with_capacity(row.len());
            for (label, prob) in row {
                let label = label.as_ref();
                if !(*prob > 0.0 && *prob <= 1.0) {
                    return Err(DbError::InvalidProbability {
                        item: label.to_string(),
                        prob: *prob,
                    });
                }
                entries.push(Entry {
                    item: ids[label],
                    prob: *prob,
                });
            }
            entries.sort_by_key(|e| e.item);
            if let Some(w) = entries.windows(2).find(|w| w[0].item == w[1].item) {
                return Err(DbError::DuplicateItem {
                    item: items[w[0].item.index()].to_string(),
                    tid,
                });
            }
            transactions.push(UncertainTransaction { tid, entries });
        }
        Ok(UncertainDatabase {
            items,
            transactions,
        })
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn transactions(&self) -> &[UncertainTransaction] {
        &self.transactions
    }

    pub fn transaction(&self, tid: Tid) -> Option<&UncertainTransaction> {
        tid.checked_sub(1)
            .and_then(|i| self.transactions.get(i as usize))
    }

    /// The vocabulary, sorted; `items()[id.index()]` is the label of `id`.
    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn item_ids(&self) -> impl Iterator<Item = ItemId> {
        (0..self.items.len() as u32).map(ItemId)
    }

    pub fn item_id(&self, label: &str) -> Option<ItemId> {
        self.items
            .binary_search_by(|it| it.as_str().cmp(label))
            .ok()
            .map(|i| ItemId(i as u32))
    }

    pub fn label(&self, id: ItemId) -> &str {
        self.items[id.index()].as_str()
    }

    /// Resolves labels to a sorted, deduplicated itemset. Unknown labels
    /// yield `None`.
    pub fn itemset(&self, labels: &[&str]) -> Option<Vec<ItemId>> {
        let mut ids = labels
            .iter()
            .map(|l| self.item_id(l))
            .collect::<Option<Vec<_>>>()?;
        ids.sort();
        ids.dedup();
        Some(ids)
    }

    pub fn join_labels(&self, itemset: &[ItemId]) -> String {
        itemset
            .iter()
            .map(|&id| self.label(id))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn entry_count(&self) -> usize {
        self.transactions.iter().map(|t| t.entries.len()).sum()
    }

    /// Number of entries with probability strictly inside (0, 1).
    pub fn uncertain_entry_count(&self) -> usize {
        self.transactions.iter().map(|t| t.uncertain_count()).sum()
    }

    pub fn max_transaction_len(&self) -> usize {
        self.transactions
            .iter()
            .map(|t| t.entries.len())
            .max()
            .unwrap_or(0)
    }

    /// Probability of a (partial) world. Only the transactions named in
    /// `world` take part in the product; the rest are marginalized out.
    pub fn world_probability(&self, world: &World) -> Result<f64, DbError> {
        let mut p = 1.0;
        for (&tid, present) in &world.present {
            let t = self
                .transaction(tid)
                .ok_or_else(|| DbError::InconsistentWorld(format!("no transaction {tid}")))?;
            for &item in present {
                if t.prob_of(item) == 0.0 {
                    return Err(DbError::InconsistentWorld(format!(
                        "item {} cannot be present in t{tid}",
                        self.describe(item)
                    )));
                }
            }
            for e in &t.entries {
                if present.contains(&e.item) {
                    p *= e.prob;
                } else if e.is_certain() {
                    return Err(DbError::InconsistentWorld(format!(
                        "certain item {} is absent from t{tid}",
                        self.label(e.item)
                    )));
                } else {
                    p *= 1.0 - e.prob;
                }
            }
        }
        Ok(p)
    }

    fn describe(&self, item: ItemId) -> String {
        self.items
            .get(item.index())
            .map(|i| i.to_string())
            .unwrap_or_else(|| format!("#{}", item.0))
    }
}

/// For each chosen transaction, the set of its items that are present.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct World {
    present: BTreeMap<Tid, BTreeSet<ItemId>>,
}

impl World {
    pub fn new() -> World {
        World::default()
    }

    pub fn with(mut self, tid: Tid, items: impl IntoIterator<Item = ItemId>) -> World {
        self.present.entry(tid).or_default().extend(items);
        self
    }

    pub fn insert(&mut self, tid: Tid, items: impl IntoIterator<Item = ItemId>) {
        self.present.entry(tid).or_default().extend(items);
    }
}

/// The running example: eight transactions over items A..D.
pub fn running_example() -> UncertainDatabase {
    let rows: Vec<Vec<(&str, f64)>> = vec![
        vec![("A", 1.0), ("B", 0.2), ("C", 0.5)],
        vec![("A", 0.1), ("D", 1.0)],
        vec![("A", 1.0), ("B", 1.0), ("C", 1.0), ("D", 0.4)],
        vec![("A", 1.0), ("B", 1.0), ("D", 0.5)],
        vec![("B", 0.1), ("C", 1.0)],
        vec![("C", 0.1), ("D", 0.5)],
        vec![("A", 1.0), ("B", 1.0), ("C", 1.0)],
        vec![("A", 0.5), ("B", 1.0)],
    ];
    UncertainDatabase::from_rows(&rows).expect("running example is well formed")
}
