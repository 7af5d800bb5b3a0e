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

mod common;

use proptest::prelude::*;

use profp::conditional::build_conditional_filtered;
use profp::spdf::frequentness;
use profp::{
    build_conditional, build_tree, extract, itemset_support_pdf, mine, parse_database,
    pbr_frequentness, serialize_database, support_pdf, update_pdf, Algorithm, ItemId, MiningConfig,
    ProFpTree, UncertainDatabase,
};

use common::{certain_db_strategy, db_strategy, enumerate_bernoulli, scan, scan_uncertain_tids};

fn probs_strategy(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.001f64..0.999, 0..=max)
}

fn conditioned(tree: &ProFpTree, rest: &[ItemId]) -> ProFpTree {
    let mut cur = tree.clone();
    for &item in rest.iter().rev() {
        cur = build_conditional(&cur, item);
    }
    cur
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn mined(db: &UncertainDatabase, cfg: &MiningConfig) -> Vec<(Vec<ItemId>, f64)> {
    mine(db, cfg)
        .unwrap()
        .results
        .into_iter()
        .map(|r| (r.itemset, r.frequentness))
        .collect()
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(db in db_strategy(12, 6, 40)) {
        let text = serialize_database(&db);
        prop_assert_eq!(parse_database(&text).unwrap(), db);
    }

    #[test]
    fn tree_accounts_for_every_entry(db in db_strategy(20, 7, 60)) {
        let tree = build_tree(&db);
        let ids = common::node_ids(&tree);
        let uft: usize = ids.iter().map(|&i| tree.node(i).uft.len()).sum();
        prop_assert_eq!(uft, db.uncertain_entry_count());
        let held: u64 = ids
            .iter()
            .map(|&i| {
                let n = tree.node(i);
                n.count + n.uft.len() as u64 + n.ufp.len() as u64
            })
            .sum();
        prop_assert_eq!(held, db.entry_count() as u64);
        prop_assert!(ids.len() <= db.entry_count());
        prop_assert!(tree.height() <= db.max_transaction_len());
        prop_assert_eq!(tree.lookup().len(), db.uncertain_entry_count());
    }

    #[test]
    fn certain_tree_is_the_classic_fp_tree(db in certain_db_strategy(20, 6)) {
        let tree = build_tree(&db);
        prop_assert_eq!(common::path_counts(&tree), common::classic_fp_tree(&db));
        prop_assert!(tree.lookup().is_empty());
        let stats = tree.stats();
        prop_assert_eq!((stats.uft_entries, stats.ufp_entries), (0, 0));
    }

    #[test]
    fn extraction_matches_a_scan(db in db_strategy(12, 5, 30)) {
        let tree = build_tree(&db);
        for itemset in common::all_itemsets(&db) {
            let (first, rest) = itemset.split_first().unwrap();
            let cond = conditioned(&tree, rest);
            let ext = extract(&cond, *first);
            let (certain, probs) = scan(&db, &itemset);
            prop_assert_eq!(ext.certain_support, certain, "{:?}", itemset);
            prop_assert_eq!(&ext.uncertain_tids, &scan_uncertain_tids(&db, &itemset));
            let pdf = itemset_support_pdf(&tree, &itemset).unwrap();
            prop_assert_eq!(pdf.base(), certain);
            prop_assert!(close(pdf.coeffs(), support_pdf(certain, &probs).coeffs(), 1e-12));
        }
    }

    #[test]
    fn conditional_tid_sets_are_sorted_and_disjoint(db in db_strategy(12, 5, 30)) {
        let tree = build_tree(&db);
        for item in tree.header_items() {
            let cond = build_conditional(&tree, item);
            for id in common::node_ids(&cond) {
                let n = cond.node(id);
                prop_assert!(n.uft.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(n.ufp.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(n.uft.iter().all(|t| n.ufp.binary_search(t).is_err()));
            }
        }
    }

    #[test]
    fn filtering_keeps_extracted_values(
        db in db_strategy(12, 6, 30),
        mask in prop::collection::vec(any::<bool>(), 6),
    ) {
        let tree = build_tree(&db);
        for item in tree.header_items() {
            let full = build_conditional(&tree, item);
            let filtered = build_conditional_filtered(&tree, item, |i| mask[i.index()]);
            prop_assert!(filtered.stats().node_count <= full.stats().node_count);
            for kept in full.header_items() {
                if mask[kept.index()] {
                    prop_assert_eq!(extract(&filtered, kept), extract(&full, kept));
                } else {
                    prop_assert!(!filtered.contains_item(kept));
                }
            }
        }
    }

    #[test]
    fn pdf_is_permutation_invariant(probs in probs_strategy(40), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut shuffled = probs.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let a = support_pdf(3, &probs);
        let b = support_pdf(3, &shuffled);
        prop_assert!(close(a.coeffs(), b.coeffs(), 1e-12));
    }

    #[test]
    fn generating_function_agrees_with_recurrence(
        probs in probs_strategy(60),
        certain in 0u64..5,
        min_sup in 1u64..40,
    ) {
        let gf = frequentness(certain, &probs, min_sup);
        let pbr = pbr_frequentness(certain, &probs, min_sup);
        prop_assert!((gf - pbr).abs() <= 1e-12, "{} vs {}", gf, pbr);
    }

    #[test]
    fn pdf_matches_enumeration(probs in probs_strategy(12)) {
        let pdf = support_pdf(0, &probs);
        prop_assert!(close(pdf.coeffs(), &enumerate_bernoulli(&probs), 1e-12));
    }

    #[test]
    fn frequentness_is_monotone_in_min_sup(probs in probs_strategy(30), certain in 0u64..4) {
        let top = certain + probs.len() as u64 + 2;
        let values: Vec<f64> = (1..=top).map(|m| frequentness(certain, &probs, m)).collect();
        prop_assert!(values.windows(2).all(|w| w[1] <= w[0] + 1e-15));
        prop_assert_eq!(*values.last().unwrap(), 0.0);
    }

    #[test]
    fn update_with_same_probability_is_identity(probs in probs_strategy(30), k in any::<prop::sample::Index>()) {
        prop_assume!(!probs.is_empty());
        let p = probs[k.index(probs.len())];
        let pdf = support_pdf(0, &probs);
        let same = update_pdf(&pdf, p, p).unwrap();
        prop_assert!(close(same.coeffs(), pdf.coeffs(), 1e-9));
    }

    #[test]
    fn update_round_trips(
        probs in probs_strategy(30),
        k in any::<prop::sample::Index>(),
        new_p in 0.001f64..0.999,
    ) {
        prop_assume!(!probs.is_empty());
        let i = k.index(probs.len());
        let pdf = support_pdf(0, &probs);
        let there = update_pdf(&pdf, probs[i], new_p).unwrap();
        let mut replaced = probs.clone();
        replaced[i] = new_p;
        prop_assert!(close(there.coeffs(), support_pdf(0, &replaced).coeffs(), 1e-9));
        let back = update_pdf(&there, new_p, probs[i]).unwrap();
        prop_assert!(close(back.coeffs(), pdf.coeffs(), 1e-9));
    }

    #[test]
    fn engines_agree(
        db in db_strategy(8, 5, 12),
        min_sup in 1u64..5,
        tau in prop_oneof![Just(1.0), 0.05f64..1.0],
    ) {
        let cfg = MiningConfig::new(min_sup, tau);
        let growth = mined(&db, &cfg);
        let apriori = mined(&db, &cfg.clone().with_algorithm(Algorithm::Apriori));
        let oracle = mined(&db, &cfg.clone().with_algorithm(Algorithm::BruteForce));
        for other in [&apriori, &oracle] {
            prop_assert_eq!(growth.len(), other.len());
            for (a, b) in growth.iter().zip(other.iter()) {
                prop_assert_eq!(&a.0, &b.0);
                prop_assert!((a.1 - b.1).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn prescan_and_early_stop_do_not_change_results(
        db in db_strategy(12, 6, 30),
        min_sup in 1u64..6,
        tau in 0.05f64..1.0,
    ) {
        let cfg = MiningConfig::new(min_sup, tau);
        let mut plain = cfg.clone();
        plain.prescan = false;
        plain.early_stop = false;
        prop_assert_eq!(mine(&db, &cfg).unwrap().results, mine(&db, &plain).unwrap().results);
    }

    #[test]
    fn results_are_downward_closed(
        db in db_strategy(12, 6, 30),
        min_sup in 1u64..6,
        tau in 0.05f64..1.0,
    ) {
        let results = mined(&db, &MiningConfig::new(min_sup, tau));
        let found: std::collections::BTreeMap<_, _> = results.iter().cloned().collect();
        for (itemset, freq) in &results {
            for skip in 0..itemset.len() {
                if itemset.len() == 1 {
                    break;
                }
                let mut sub = itemset.clone();
                sub.remove(skip);
                let sub_freq = found.get(&sub);
                prop_assert!(sub_freq.is_some(), "{:?} lacks {:?}", itemset, sub);
                prop_assert!(*sub_freq.unwrap() >= freq - 1e-12);
            }
        }
    }

    #[test]
    fn thread_count_does_not_change_output(
        db in db_strategy(16, 7, 40),
        min_sup in 1u64..6,
        tau in 0.05f64..1.0,
    ) {
        let cfg = MiningConfig::new(min_sup, tau);
        let mut threaded = cfg.clone();
        threaded.threads = 3;
        prop_assert_eq!(mine(&db, &cfg).unwrap().results, mine(&db, &threaded).unwrap().results);
    }
}
