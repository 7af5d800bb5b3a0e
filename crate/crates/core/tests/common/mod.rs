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

//! Helpers shared by the integration tests: random databases and direct
//! database scans that bypass the tree.

#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::Rng;

use profp::{ItemId, UncertainDatabase};

pub const EXAMPLE: &str = include_str!("../data/example.db");

pub fn example() -> UncertainDatabase {
    profp::parse_database(EXAMPLE).unwrap()
}

/// Label of the `i`th item in generated databases.
pub fn label(i: usize) -> String {
    ((b'a' + i as u8) as char).to_string()
}

/// Builds a database from per-transaction `(item index, probability)` lists,
/// keeping the first occurrence of a repeated item. Once `max_uncertain`
/// uncertain entries exist, further ones become certain.
pub fn db_from_cells(rows: &[Vec<(usize, f64)>], max_uncertain: usize) -> UncertainDatabase {
    let mut uncertain = 0;
    let rows: Vec<Vec<(String, f64)>> = rows
        .iter()
        .map(|row| {
            let mut seen = BTreeMap::new();
            for &(i, p) in row {
                seen.entry(i).or_insert(p);
            }
            seen.into_iter()
                .map(|(i, mut p)| {
                    if p < 1.0 {
                        if uncertain == max_uncertain {
                            p = 1.0;
                        } else {
                            uncertain += 1;
                        }
                    }
                    (label(i), p)
                })
                .collect()
        })
        .collect();
    UncertainDatabase::from_rows(&rows).unwrap()
}

/// Probabilities with three decimals, so text round trips are exact.
pub fn prob_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![
        2 => Just(1.0),
        3 => (1u32..1000).prop_map(|k| k as f64 / 1000.0),
    ]
}

pub fn db_strategy(
    max_tx: usize,
    n_items: usize,
    max_uncertain: usize,
) -> impl Strategy<Value = UncertainDatabase> {
    prop::collection::vec(
        prop::collection::vec((0..n_items, prob_strategy()), 0..=n_items),
        0..=max_tx,
    )
    .prop_map(move |rows| db_from_cells(&rows, max_uncertain))
}

/// Databases without any uncertain entry.
pub fn certain_db_strategy(
    max_tx: usize,
    n_items: usize,
) -> impl Strategy<Value = UncertainDatabase> {
    prop::collection::vec(
        prop::collection::btree_set(0..n_items, 0..=n_items),
        0..=max_tx,
    )
    .prop_map(|rows| {
        let rows: Vec<Vec<(usize, f64)>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|i| (i, 1.0)).collect())
            .collect();
        db_from_cells(&rows, 0)
    })
}

/// A random database from `rng`, for the seeded acceptance loops.
pub fn random_db<R: Rng>(
    rng: &mut R,
    max_tx: usize,
    max_items: usize,
    max_uncertain: usize,
) -> UncertainDatabase {
    let n_tx = rng.gen_range(1..=max_tx);
    let n_items = rng.gen_range(1..=max_items);
    let mut rows = Vec::with_capacity(n_tx);
    for _ in 0..n_tx {
        let mut row = Vec::new();
        for i in 0..n_items {
            if !rng.gen_bool(0.6) {
                continue;
            }
            let p = if rng.gen_bool(0.5) {
                1.0
            } else {
                rng.gen_range(1..100) as f64 / 100.0
            };
            row.push((i, p));
        }
        rows.push(row);
    }
    db_from_cells(&rows, max_uncertain)
}

/// Certain support and the containment probabilities strictly inside (0, 1),
/// computed from the transactions alone.
pub fn scan(db: &UncertainDatabase, itemset: &[ItemId]) -> (u64, Vec<f64>) {
    let mut certain = 0;
    let mut probs = Vec::new();
    for t in db.transactions() {
        let mut p = 1.0;
        for &i in itemset {
            p *= t
                .entries
                .iter()
                .find(|e| e.item == i)
                .map_or(0.0, |e| e.prob);
        }
        if p == 1.0 {
            certain += 1;
        } else if p > 0.0 {
            probs.push(p);
        }
    }
    (certain, probs)
}

/// Tids, in order, of the transactions where `itemset` is uncertain.
pub fn scan_uncertain_tids(db: &UncertainDatabase, itemset: &[ItemId]) -> Vec<u32> {
    db.transactions()
        .iter()
        .filter(|t| {
            let p = t.containment_prob(itemset);
            p > 0.0 && p < 1.0
        })
        .map(|t| t.tid)
        .collect()
}

/// Every nonempty subset of the database's items, as sorted id lists.
pub fn all_itemsets(db: &UncertainDatabase) -> Vec<Vec<ItemId>> {
    let n = db.items().len();
    (1u32..(1 << n))
        .map(|mask| {
            (0..n as u32)
                .filter(|i| mask >> i & 1 == 1)
                .map(ItemId)
                .collect()
        })
        .collect()
}

/// Exact distribution of a sum of independent Bernoulli variables by
/// enumerating all outcomes.
pub fn enumerate_bernoulli(probs: &[f64]) -> Vec<f64> {
    let n = probs.len();
    let mut out = vec![0.0; n + 1];
    for mask in 0u32..(1 << n) {
        let mut w = 1.0;
        for (k, &p) in probs.iter().enumerate() {
            w *= if mask >> k & 1 == 1 { p } else { 1.0 - p };
        }
        out[mask.count_ones() as usize] += w;
    }
    out
}

/// Every non-root node id, in preorder.
pub fn node_ids(tree: &profp::ProFpTree) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stack: Vec<usize> = tree.root().children.iter().rev().copied().collect();
    while let Some(id) = stack.pop() {
        out.push(id);
        stack.extend(tree.node(id).children.iter().rev());
    }
    out
}

/// Root path -> count for every node of the tree.
pub fn path_counts(tree: &profp::ProFpTree) -> BTreeMap<Vec<ItemId>, u64> {
    node_ids(tree)
        .into_iter()
        .map(|id| (tree.path_items(id), tree.node(id).count))
        .collect()
}

/// The classic FP-tree of a certain database in the same item order: one
/// node per distinct transaction prefix, counting the transactions that
/// share it.
pub fn classic_fp_tree(db: &UncertainDatabase) -> BTreeMap<Vec<ItemId>, u64> {
    let mut out = BTreeMap::new();
    for t in db.transactions() {
        let items: Vec<ItemId> = t.entries.iter().map(|e| e.item).collect();
        for k in 1..=items.len() {
            *out.entry(items[..k].to_vec()).or_insert(0) += 1;
        }
    }
    out
}
