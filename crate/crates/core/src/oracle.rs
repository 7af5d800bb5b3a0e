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

//! Exhaustive possible-worlds enumeration, used as ground truth on small
//! inputs. Worlds are enumerated over per-transaction containment events
//! `X ⊆ t`, which are independent across transactions.

use thiserror::Error;

use crate::miner::PfiResult;
use crate::model::{ItemId, UncertainDatabase};
use crate::spdf::SupportPdf;

pub const MAX_ORACLE_ITEMS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_uncertain_entries: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_uncertain_entries: 20,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("itemset is uncertain in {needed} transactions; the oracle budget is {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
    #[error("database has {0} items; the oracle enumerates at most {MAX_ORACLE_ITEMS}")]
    TooManyItems(usize),
}

/// Support distribution of `itemset` by summing world probabilities.
pub fn brute_force_support_pdf(
    db: &UncertainDatabase,
    itemset: &[ItemId],
    budget: OracleBudget,
) -> Result<SupportPdf, OracleError> {
    let (certain, uncertain) = containment(db, itemset);
    if uncertain.len() > budget.max_uncertain_entries {
        return Err(OracleError::BudgetExceeded {
            needed: uncertain.len(),
            budget: budget.max_uncertain_entries,
        });
    }
    let m = uncertain.len();
    let mut coeffs = vec![0.0; m + 1];
    for world in 0u64..(1u64 << m) {
        let mut p = 1.0;
        for (k, &q) in uncertain.iter().enumerate() {
            p *= if world >> k & 1 == 1 { q } else { 1.0 - q };
        }
        coeffs[world.count_ones() as usize] += p;
    }
    Ok(SupportPdf::new(certain, coeffs))
}

/// Every nonempty itemset whose frequentness reaches `tau`.
pub fn brute_force_pfi(
    db: &UncertainDatabase,
    min_sup: u64,
    tau: f64,
    budget: OracleBudget,
) -> Result<Vec<PfiResult>, OracleError> {
    let n_items = db.items().len();
    if n_items > MAX_ORACLE_ITEMS {
        return Err(OracleError::TooManyItems(n_items));
    }
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << n_items) {
        let itemset: Vec<ItemId> = (0..n_items as u32)
            .filter(|i| mask >> i & 1 == 1)
            .map(ItemId)
            .collect();
        let pdf = brute_force_support_pdf(db, &itemset, budget)?;
        let freq = tail_probability(&pdf, min_sup);
        if freq >= tau {
            let (certain, uncertain) = containment(db, &itemset);
            out.push(PfiResult {
                itemset,
                frequentness: freq,
                certain_support: certain,
                expected_support: certain as f64 + uncertain.iter().sum::<f64>(),
            });
        }
    }
    out.sort_by(PfiResult::order);
    Ok(out)
}

/// P(support ≥ min_sup) summed over the worlds that reach it. When every
/// world reaches it the answer is exactly 1.
pub fn tail_probability(pdf: &SupportPdf, min_sup: u64) -> f64 {
    if pdf.base() >= min_sup {
        return 1.0;
    }
    pdf.iter()
        .filter(|&(s, _)| s >= min_sup)
        .map(|(_, c)| c)
        .sum()
}

/// Certain support and the P(X ⊆ t) values strictly inside (0, 1), by scan.
fn containment(db: &UncertainDatabase, itemset: &[ItemId]) -> (u64, Vec<f64>) {
    let mut certain = 0;
    let mut uncertain = Vec::new();
    for t in db.transactions() {
        let p = t.containment_prob(itemset);
        if p == 1.0 {
            certain += 1;
        } else if p > 0.0 {
            uncertain.push(p);
        }
    }
    (certain, uncertain)
}
