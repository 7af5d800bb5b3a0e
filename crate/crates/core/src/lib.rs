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

//! Probabilistic frequent itemset mining in uncertain transaction databases.
//!
//! An itemset is a probabilistic frequent itemset (PFI) when the
//! probability that it occurs in at least `min_sup` transactions reaches
//! `tau`. The crate mines PFIs with a probabilistic FP-tree and pattern
//! growth ([`miner::profp_growth`]), computes exact support distributions
//! with generating functions ([`spdf`]), and ships two independent engines
//! to check them against: a levelwise Apriori baseline using the Poisson
//! binomial recurrence and an exhaustive possible-worlds oracle.

pub mod bench;
pub mod conditional;
pub mod extract;
pub mod miner;
pub mod model;
pub mod oracle;
pub mod spdf;
pub mod tree;

pub use conditional::{build_conditional, Accumulator};
pub use extract::{calculate_probabilities, extract, ExtractionResult, ProbabilityVector};
pub use miner::{
    itemset_support_pdf, mine, pro_apriori, profp_growth, singleton_prescan, Algorithm, MinSupport,
    MiningConfig, MiningOutcome, PfiResult,
};
pub use model::{
    generate_synthetic, parse_database, serialize_database, GenParams, Item, ItemId, Tid,
    UncertainDatabase, UncertainTransaction, World,
};
pub use oracle::{brute_force_pfi, brute_force_support_pdf, OracleBudget};
pub use spdf::{
    expected_support, frequentness_probability, pbr_frequentness, support_pdf, update_pdf,
    FrequentnessQuery, SupportPdf,
};
pub use tree::{build_tree, ProFpNode, ProFpTree, TreeStats};
