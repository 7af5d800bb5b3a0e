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

//! Probabilistic frequent itemset mining.
//!
//! [`profp_growth`] grows itemsets by suffix over conditional trees and
//! prunes every extension of an itemset that is not frequent. Frequentness
//! is antimonotone, so the pruning never loses a result. [`pro_apriori`] is
//! the levelwise baseline that scans the database once per candidate.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::io::{self, Write};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::conditional::{build_conditional, build_conditional_filtered};
use crate::extract::{calculate_probabilities, extract, ExtractionError};
use crate::model::{ItemId, UncertainDatabase};
use crate::oracle::{brute_force_pfi, OracleBudget, OracleError};
use crate::spdf::{frequentness, pbr_frequentness, support_pdf, SupportPdf, TruncatedGf};
use crate::tree::{build_tree, build_tree_filtered, ProFpTree, TreeStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    ProFp,
    Apriori,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MiningConfig {
    /// Absolute minimum support, at least 1.
    pub min_sup: u64,
    /// Frequentness threshold in (0, 1]; itemsets with frequentness ≥ tau
    /// are reported.
    pub tau: f64,
    pub algorithm: Algorithm,
    /// Drop infrequent single items before building the tree.
    pub prescan: bool,
    /// Decide frequentness as soon as the partial value reaches tau.
    pub early_stop: bool,
    /// Worker threads for the growth recursion; 1 runs inline.
    pub threads: usize,
    pub oracle_budget: OracleBudget,
}

impl MiningConfig {
    pub fn new(min_sup: u64, tau: f64) -> MiningConfig {
        MiningConfig {
            min_sup,
            tau,
            algorithm: Algorithm::ProFp,
            prescan: true,
            early_stop: true,
            threads: 1,
            oracle_budget: OracleBudget::default(),
        }
    }

    pub fn with_algorithm(mut self, algorithm: Algorithm) -> MiningConfig {
        self.algorithm = algorithm;
        self
    }

    pub fn validate(&self) -> Result<(), MineError> {
        if self.min_sup == 0 {
            return Err(MineError::InvalidConfig(
                "min_sup must be at least 1".into(),
            ));
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return Err(MineError::InvalidConfig(format!(
                "tau = {} is outside (0, 1]",
                self.tau
            )));
        }
        if self.threads == 0 {
            return Err(MineError::InvalidConfig(
                "threads must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// A minimum support given either as an absolute count or as a fraction of
/// the database size. Fractions are written with a decimal point and resolve
/// to `ceil(fraction · N)`, computed exactly on the decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinSupport {
    Absolute(u64),
    Fraction { numerator: u64, denominator: u64 },
}

impl MinSupport {
    pub fn resolve(&self, n_transactions: usize) -> u64 {
        match *self {
            MinSupport::Absolute(k) => k,
            MinSupport::Fraction {
                numerator,
                denominator,
            } => {
                let scaled = numerator as u128 * n_transactions as u128;
                let den = denominator as u128;
                (scaled.div_ceil(den) as u64).max(1)
            }
        }
    }
}

impl std::str::FromStr for MinSupport {
    type Err = String;

    fn from_str(s: &str) -> Result<MinSupport, String> {
        let s = s.trim();
        match s.split_once('.') {
            None => match s.parse::<u64>() {
                Ok(k) if k >= 1 => Ok(MinSupport::Absolute(k)),
                _ => Err(format!(
                    "minimum support {s:?} must be an integer >= 1 or a fraction in (0, 1)"
                )),
            },
            Some((int, frac)) => {
                let digits_ok = !frac.is_empty()
                    && frac.len() <= 18
                    && frac.bytes().all(|b| b.is_ascii_digit())
                    && int.bytes().all(|b| b == b'0');
                let numerator = if digits_ok {
                    frac.parse::<u64>().unwrap_or(0)
                } else {
                    0
                };
                if numerator == 0 {
                    return Err(format!(
                        "fractional minimum support {s:?} must lie in (0, 1)"
                    ));
                }
                Ok(MinSupport::Fraction {
                    numerator,
                    denominator: 10u64.pow(frac.len() as u32),
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PfiResult {
    /// Sorted ascending.
    pub itemset: Vec<ItemId>,
    pub frequentness: f64,
    pub certain_support: u64,
    pub expected_support: f64,
}

impl PfiResult {
    /// Output order: by itemset size, then lexicographically.
    pub fn order(a: &PfiResult, b: &PfiResult) -> Ordering {
        a.itemset
            .len()
            .cmp(&b.itemset.len())
            .then_with(|| a.itemset.cmp(&b.itemset))
    }
}

/// An itemset whose frequentness reached tau before all of its uncertain
/// transactions were folded in.
#[derive(Clone, Debug, PartialEq)]
pub struct EarlyStop {
    pub itemset: Vec<ItemId>,
    /// Partial frequentness at the stop point.
    pub bound: f64,
    /// Uncertain transactions folded in when the decision was made.
    pub consumed: usize,
    pub total: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MiningStats {
    /// Itemsets whose frequentness was computed.
    pub evaluated: usize,
    pub early_stops: Vec<EarlyStop>,
    pub conditional_trees: usize,
    pub tree: Option<TreeStats>,
    pub lookup_size: Option<usize>,
    pub tree_build: Option<Duration>,
    /// Apriori candidates per level.
    pub candidates: Vec<usize>,
}

impl MiningStats {
    fn merge(&mut self, other: MiningStats) {
        self.evaluated += other.evaluated;
        self.early_stops.extend(other.early_stops);
        self.conditional_trees += other.conditional_trees;
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MiningOutcome {
    pub results: Vec<PfiResult>,
    pub stats: MiningStats,
}

#[derive(Debug, Error, PartialEq)]
pub enum MineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Extraction(#[from] ExtractionError),
}

/// Runs the engine selected by `cfg.algorithm`.
pub fn mine(db: &UncertainDatabase, cfg: &MiningConfig) -> Result<MiningOutcome, MineError> {
    match cfg.algorithm {
        Algorithm::ProFp => profp_growth(db, cfg),
        Algorithm::Apriori => pro_apriori(db, cfg),
        Algorithm::BruteForce => {
            cfg.validate()?;
            let results = brute_force_pfi(db, cfg.min_sup, cfg.tau, cfg.oracle_budget)?;
            Ok(MiningOutcome {
                results,
                stats: MiningStats::default(),
            })
        }
    }
}

/// Support distribution of `itemset` (sorted) read off the tree: condition
/// on every item but the first, largest first, then extract the first.
pub fn itemset_support_pdf(
    tree: &ProFpTree,
    itemset: &[ItemId],
) -> Result<SupportPdf, ExtractionError> {
    let Some((&first, rest)) = itemset.split_first() else {
        return Ok(SupportPdf::new(0, vec![1.0]));
    };
    let mut cond: Option<ProFpTree> = None;
    for &item in rest.iter().rev() {
        let next = build_conditional(cond.as_ref().unwrap_or(tree), item);
        cond = Some(next);
    }
    let t = cond.as_ref().unwrap_or(tree);
    let ext = extract(t, first);
    let probs = calculate_probabilities(t.lookup(), itemset, &ext.uncertain_tids)?;
    Ok(support_pdf(ext.certain_support, probs.as_slice()))
}

/// Items whose singleton frequentness reaches `cfg.tau`, from one scan.
pub fn singleton_prescan(db: &UncertainDatabase, cfg: &MiningConfig) -> BTreeSet<ItemId> {
    let mut certain = vec![0u64; db.items().len()];
    let mut probs: Vec<Vec<f64>> = vec![Vec::new(); db.items().len()];
    for t in db.transactions() {
        for e in &t.entries {
            if e.is_certain() {
                certain[e.item.index()] += 1;
            } else {
                probs[e.item.index()].push(e.prob);
            }
        }
    }
    db.item_ids()
        .filter(|i| frequentness(certain[i.index()], &probs[i.index()], cfg.min_sup) >= cfg.tau)
        .collect()
}

struct Growth<'a> {
    cfg: &'a MiningConfig,
    parallel: bool,
}

#[derive(Default)]
struct Branch {
    results: Vec<PfiResult>,
    stats: MiningStats,
}

impl Branch {
    fn absorb(&mut self, other: Branch) {
        self.results.extend(other.results);
        self.stats.merge(other.stats);
    }
}

pub fn profp_growth(
    db: &UncertainDatabase,
    cfg: &MiningConfig,
) -> Result<MiningOutcome, MineError> {
    cfg.validate()?;
    let start = Instant::now();
    let tree = if cfg.prescan {
        let keep = singleton_prescan(db, cfg);
        build_tree_filtered(db, |i| keep.contains(&i))
    } else {
        build_tree(db)
    };
    let build_time = start.elapsed();

    let growth = Growth {
        cfg,
        parallel: cfg.threads > 1,
    };
    let branch = if growth.parallel {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| MineError::InvalidConfig(e.to_string()))?;
        pool.install(|| growth.grow(&tree, &[]))?
    } else {
        growth.grow(&tree, &[])?
    };

    let mut results = branch.results;
    results.sort_by(PfiResult::order);
    let mut stats = branch.stats;
    stats
        .early_stops
        .sort_by(|a, b| (a.itemset.len(), &a.itemset).cmp(&(b.itemset.len(), &b.itemset)));
    stats.tree = Some(tree.stats());
    stats.lookup_size = Some(tree.lookup().len());
    stats.tree_build = Some(build_time);
    Ok(MiningOutcome { results, stats })
}

impl Growth<'_> {
    /// Mines every frequent `{i} ∪ suffix` for `i` in `tree`, where `tree`
    /// is conditioned on `suffix`, in reverse item order. All items are
    /// evaluated first; the conditional trees then keep only the items found
    /// frequent, since no extension of an infrequent itemset can be frequent.
    fn grow(&self, tree: &ProFpTree, suffix: &[ItemId]) -> Result<Branch, MineError> {
        let items = tree.header_items();
        let evaluated: Vec<Branch> = if self.parallel {
            items
                .par_iter()
                .rev()
                .map(|&i| self.evaluate_item(tree, suffix, i))
                .collect::<Result<_, _>>()?
        } else {
            items
                .iter()
                .rev()
                .map(|&i| self.evaluate_item(tree, suffix, i))
                .collect::<Result<_, _>>()?
        };
        let frequent: Vec<ItemId> = evaluated
            .iter()
            .filter_map(|b| b.results.first().map(|r| r.itemset[0]))
            .collect();
        let mut keep = vec![false; items.last().map_or(0, |i| i.index() + 1)];
        for &i in &frequent {
            keep[i.index()] = true;
        }

        let deeper: Vec<Branch> = if self.parallel {
            frequent
                .par_iter()
                .map(|&i| self.descend(tree, suffix, i, &keep))
                .collect::<Result<_, _>>()?
        } else {
            frequent
                .iter()
                .map(|&i| self.descend(tree, suffix, i, &keep))
                .collect::<Result<_, _>>()?
        };
        let mut branch = Branch::default();
        for part in evaluated.into_iter().chain(deeper) {
            branch.absorb(part);
        }
        Ok(branch)
    }

    /// Frequentness of `{item} ∪ suffix`; the branch holds the result when
    /// it is frequent.
    fn evaluate_item(
        &self,
        tree: &ProFpTree,
        suffix: &[ItemId],
        item: ItemId,
    ) -> Result<Branch, MineError> {
        let mut branch = Branch::default();
        let ext = extract(tree, item);
        let mut itemset = Vec::with_capacity(suffix.len() + 1);
        itemset.push(item);
        itemset.extend_from_slice(suffix);
        let probs = calculate_probabilities(tree.lookup(), &itemset, &ext.uncertain_tids)?;
        let probs = probs.as_slice();

        branch.stats.evaluated += 1;
        let freq = self.evaluate(ext.certain_support, probs, &itemset, &mut branch.stats);
        if freq >= self.cfg.tau {
            branch.results.push(PfiResult {
                itemset,
                frequentness: freq,
                certain_support: ext.certain_support,
                expected_support: ext.certain_support as f64 + probs.iter().sum::<f64>(),
            });
        }
        Ok(branch)
    }

    fn descend(
        &self,
        tree: &ProFpTree,
        suffix: &[ItemId],
        item: ItemId,
        keep: &[bool],
    ) -> Result<Branch, MineError> {
        let cond = build_conditional_filtered(tree, item, |i| keep[i.index()]);
        let mut itemset = Vec::with_capacity(suffix.len() + 1);
        itemset.push(item);
        itemset.extend_from_slice(suffix);
        let mut branch = if cond.is_empty() {
            Branch::default()
        } else {
            self.grow(&cond, &itemset)?
        };
        branch.stats.conditional_trees += 1;
        Ok(branch)
    }

    /// Exact frequentness. With early stop on, the tau test is made as soon
    /// as the partial value allows it and recorded; the remaining factors
    /// are still folded in so the reported value is exact.
    fn evaluate(
        &self,
        certain: u64,
        probs: &[f64],
        itemset: &[ItemId],
        stats: &mut MiningStats,
    ) -> f64 {
        let min_sup = self.cfg.min_sup;
        if !self.cfg.early_stop || certain >= min_sup || certain + (probs.len() as u64) < min_sup {
            return frequentness(certain, probs, min_sup);
        }
        let mut gf = TruncatedGf::with_capacity(certain, min_sup, probs.len());
        let mut decided = false;
        for (k, &p) in probs.iter().enumerate() {
            gf.push(p);
            if !decided && k + 1 < probs.len() && gf.tail() >= self.cfg.tau {
                decided = true;
                stats.early_stops.push(EarlyStop {
                    itemset: itemset.to_vec(),
                    bound: gf.tail(),
                    consumed: k + 1,
                    total: probs.len(),
                });
            }
        }
        gf.tail()
    }
}

/// Levelwise candidate generation with one database scan per candidate and
/// the Poisson binomial recurrence for frequentness.
pub fn pro_apriori(db: &UncertainDatabase, cfg: &MiningConfig) -> Result<MiningOutcome, MineError> {
    cfg.validate()?;
    let mut results = Vec::new();
    let mut stats = MiningStats::default();
    let mut level: Vec<Vec<ItemId>> = db.item_ids().map(|i| vec![i]).collect();
    let mut probs = Vec::new();
    while !level.is_empty() {
        stats.candidates.push(level.len());
        let mut frequent = Vec::new();
        for cand in level {
            probs.clear();
            let mut certain = 0u64;
            for t in db.transactions() {
                let p = t.containment_prob(&cand);
                if p == 1.0 {
                    certain += 1;
                } else if p > 0.0 {
                    probs.push(p);
                }
            }
            stats.evaluated += 1;
            let freq = pbr_frequentness(certain, &probs, cfg.min_sup);
            if freq >= cfg.tau {
                results.push(PfiResult {
                    itemset: cand.clone(),
                    frequentness: freq,
                    certain_support: certain,
                    expected_support: certain as f64 + probs.iter().sum::<f64>(),
                });
                frequent.push(cand);
            }
        }
        level = next_candidates(&frequent);
    }
    results.sort_by(PfiResult::order);
    Ok(MiningOutcome { results, stats })
}

/// Joins frequent k-itemsets sharing a (k-1)-prefix and keeps the joins all
/// of whose k-subsets are frequent. `frequent` must be sorted.
fn next_candidates(frequent: &[Vec<ItemId>]) -> Vec<Vec<ItemId>> {
    let known: HashSet<&[ItemId]> = frequent.iter().map(|s| s.as_slice()).collect();
    let mut out = Vec::new();
    for (i, a) in frequent.iter().enumerate() {
        let k = a.len();
        for b in &frequent[i + 1..] {
            if a[..k - 1] != b[..k - 1] {
                break;
            }
            let mut cand = a.clone();
            cand.push(b[k - 1]);
            let closed = (0..k - 1).all(|skip| {
                let sub: Vec<ItemId> = cand
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != skip)
                    .map(|(_, &x)| x)
                    .collect();
                known.contains(sub.as_slice())
            });
            if closed {
                out.push(cand);
            }
        }
    }
    out
}

/// `itemset<TAB>frequentness<TAB>certain_support<TAB>expected_support`,
/// probabilities with 9 decimals.
pub fn write_tsv<W: Write>(
    out: &mut W,
    db: &UncertainDatabase,
    results: &[PfiResult],
) -> io::Result<()> {
    for r in results {
        writeln!(
            out,
            "{}\t{:.9}\t{}\t{:.9}",
            db.join_labels(&r.itemset),
            r.frequentness,
            r.certain_support,
            r.expected_support
        )?;
    }
    Ok(())
}
