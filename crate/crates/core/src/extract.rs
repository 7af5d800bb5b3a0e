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

//! Certain support and uncertain transactions of an item, read off a
//! (conditional) tree by following its node-link chain.

use thiserror::Error;

use crate::model::{ItemId, Tid};
use crate::tree::{LookupTable, ProFpTree};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtractionResult {
    pub certain_support: u64,
    /// Sorted.
    pub uncertain_tids: Vec<Tid>,
}

/// Existential probabilities aligned with the uncertain tids they came from.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ExtractionError {
    #[error("transaction {tid} was marked uncertain but the itemset has probability {prob}")]
    Inconsistent { tid: Tid, prob: f64 },
}

/// Sums `count + |ufp|` along the chain of `item` and unions the `uft` sets.
/// Tids in `ufp` are certain for the item itself, so they count towards
/// certain support rather than the uncertain tids.
pub fn extract(tree: &ProFpTree, item: ItemId) -> ExtractionResult {
    let mut certain_support = 0;
    let total = tree.chain(item).map(|id| tree.node(id).uft.len()).sum();
    let mut uncertain_tids = Vec::with_capacity(total);
    for id in tree.chain(item) {
        let n = tree.node(id);
        certain_support += n.count + n.ufp.len() as u64;
        uncertain_tids.extend_from_slice(&n.uft);
    }
    // every tid lives on exactly one path, so chains never repeat a tid
    if !uncertain_tids.is_sorted() {
        uncertain_tids.sort_unstable();
    }
    ExtractionResult {
        certain_support,
        uncertain_tids,
    }
}

/// P(itemset ⊆ t) for every t in `utids`, multiplying lookup-table entries.
/// An item with no entry for t is certain in t. `itemset` must be sorted.
pub fn calculate_probabilities(
    lookup: &LookupTable,
    itemset: &[ItemId],
    utids: &[Tid],
) -> Result<ProbabilityVector, ExtractionError> {
    let mut probs = Vec::with_capacity(utids.len());
    for &tid in utids {
        let prob = containment(lookup.row(tid), itemset);
        if !(prob > 0.0 && prob < 1.0) {
            return Err(ExtractionError::Inconsistent { tid, prob });
        }
        probs.push(prob);
    }
    Ok(ProbabilityVector(probs))
}

/// Product over `itemset` of the row's entries, both sorted by item.
fn containment(row: &[(ItemId, f64)], itemset: &[ItemId]) -> f64 {
    let mut prob = 1.0;
    let mut k = 0;
    for &item in itemset {
        while k < row.len() && row[k].0 < item {
            k += 1;
        }
        if k < row.len() && row[k].0 == item {
            prob *= row[k].1;
        }
    }
    prob
}
