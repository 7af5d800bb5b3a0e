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

//! The probabilistic frequent pattern tree.
//!
//! A prefix tree over lexicographically ordered transactions. Each node
//! keeps the number of transactions in which its whole path is certain
//! (`count`), the tids in which its own item is uncertain (`uft`), and the
//! tids in which its item is certain but some earlier path item is not
//! (`ufp`). The header table threads all nodes of an item into a chain and
//! the lookup table stores every uncertain (tid, item) probability.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use smallvec::SmallVec;
use thiserror::Error;

use crate::model::{Entry, ItemId, Tid, UncertainDatabase, UncertainTransaction};

pub type NodeId = usize;

pub const ROOT: NodeId = 0;

#[derive(Debug, Error, PartialEq)]
pub enum TreeError {
    #[error("transaction {tid} is not sorted by item or repeats an item")]
    UnsortedTransaction { tid: Tid },
    #[error("transaction {tid} inserted after transaction {last}")]
    TidOutOfOrder { tid: Tid, last: Tid },
    #[error("transaction {tid} has probability {prob} outside (0, 1]")]
    InvalidProbability { tid: Tid, prob: f64 },
}

/// Tid set of a node. Most nodes of a conditional tree hold only a few tids,
/// so short sets are stored inline.
pub type TidList = SmallVec<[Tid; 4]>;

#[derive(Clone, Debug, PartialEq)]
pub struct ProFpNode {
    /// `None` only for the root.
    pub item: Option<ItemId>,
    pub count: u64,
    /// Sorted tids.
    pub uft: TidList,
    /// Sorted tids.
    pub ufp: TidList,
    pub parent: Option<NodeId>,
    /// Ordered by item.
    pub children: SmallVec<[NodeId; 2]>,
    pub node_link: Option<NodeId>,
}

impl ProFpNode {
    pub(crate) fn new(item: Option<ItemId>, parent: Option<NodeId>) -> ProFpNode {
        ProFpNode {
            item,
            count: 0,
            uft: TidList::new(),
            ufp: TidList::new(),
            parent,
            children: SmallVec::new(),
            node_link: None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0 && self.uft.is_empty() && self.ufp.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeaderEntry {
    pub first: NodeId,
    pub last: NodeId,
    pub len: usize,
}

/// Maps (tid, item) to the item's probability in that transaction, for
/// uncertain entries only.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LookupTable {
    // row of tid t is entries[starts[t]..starts[t + 1]], sorted by item
    starts: Vec<usize>,
    entries: Vec<(ItemId, f64)>,
}

impl LookupTable {
    pub fn get(&self, tid: Tid, item: ItemId) -> Option<f64> {
        let row = self.row(tid);
        row.binary_search_by_key(&item, |e| e.0)
            .ok()
            .map(|k| row[k].1)
    }

    /// Appends an entry. Entries must arrive in increasing (tid, item) order.
    pub(crate) fn insert(&mut self, tid: Tid, item: ItemId, prob: f64) {
        let t = tid as usize;
        if self.starts.is_empty() {
            self.starts.push(0);
        }
        while self.starts.len() < t + 2 {
            self.starts.push(self.entries.len());
        }
        assert_eq!(self.starts.len(), t + 2, "lookup entries out of tid order");
        if let Some(&(last, _)) = self.entries[self.starts[t]..].last() {
            assert!(last < item, "lookup entries out of item order");
        }
        self.entries.push((item, prob));
        self.starts[t + 1] += 1;
    }

    /// Uncertain entries of one transaction, sorted by item.
    pub fn row(&self, tid: Tid) -> &[(ItemId, f64)] {
        let t = tid as usize;
        if t + 1 < self.starts.len() {
            &self.entries[self.starts[t]..self.starts[t + 1]]
        } else {
            &[]
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries sorted by (tid, item).
    pub fn entries(&self) -> Vec<(Tid, ItemId, f64)> {
        (0..self.starts.len().saturating_sub(1))
            .flat_map(|t| {
                self.row(t as Tid)
                    .iter()
                    .map(move |&(i, p)| (t as Tid, i, p))
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TreeStats {
    pub node_count: usize,
    pub uft_entries: usize,
    pub ufp_entries: usize,
}

#[derive(Clone, Debug)]
pub struct ProFpTree {
    pub(crate) nodes: Vec<ProFpNode>,
    pub(crate) header: BTreeMap<ItemId, HeaderEntry>,
    pub(crate) lookup: Arc<LookupTable>,
    last_tid: Tid,
}

impl Default for ProFpTree {
    fn default() -> Self {
        ProFpTree::new()
    }
}

impl ProFpTree {
    pub fn new() -> ProFpTree {
        ProFpTree::with_lookup(Arc::new(LookupTable::default()))
    }

    pub(crate) fn with_lookup(lookup: Arc<LookupTable>) -> ProFpTree {
        ProFpTree {
            nodes: vec![ProFpNode::new(None, None)],
            header: BTreeMap::new(),
            lookup,
            last_tid: 0,
        }
    }

    pub fn node(&self, id: NodeId) -> &ProFpNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> &ProFpNode {
        &self.nodes[ROOT]
    }

    pub fn lookup(&self) -> &LookupTable {
        &self.lookup
    }

    pub fn shared_lookup(&self) -> Arc<LookupTable> {
        Arc::clone(&self.lookup)
    }

    pub fn header(&self) -> &BTreeMap<ItemId, HeaderEntry> {
        &self.header
    }

    /// Items present in the header table, ascending.
    pub fn header_items(&self) -> Vec<ItemId> {
        self.header.keys().copied().collect()
    }

    pub fn contains_item(&self, item: ItemId) -> bool {
        self.header.contains_key(&item)
    }

    /// Node ids of `item` in node-link order.
    pub fn chain(&self, item: ItemId) -> ChainIter<'_> {
        ChainIter {
            tree: self,
            next: self.header.get(&item).map(|h| h.first),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1
    }

    /// Inserts one transaction along a single root path.
    pub fn insert_transaction(&mut self, t: &UncertainTransaction) -> Result<(), TreeError> {
        if t.entries.windows(2).any(|w| w[0].item >= w[1].item) {
            return Err(TreeError::UnsortedTransaction { tid: t.tid });
        }
        if let Some(e) = t.entries.iter().find(|e| !(e.prob > 0.0 && e.prob <= 1.0)) {
            return Err(TreeError::InvalidProbability {
                tid: t.tid,
                prob: e.prob,
            });
        }
        if t.tid <= self.last_tid {
            return Err(TreeError::TidOutOfOrder {
                tid: t.tid,
                last: self.last_tid,
            });
        }
        self.insert_entries(t.tid, t.entries.iter());
        Ok(())
    }

    fn insert_entries<'a>(&mut self, tid: Tid, entries: impl Iterator<Item = &'a Entry>) {
        self.last_tid = tid;
        let mut node = ROOT;
        let mut uncertain_prefix = false;
        for e in entries {
            let child = self.child_or_insert(node, e.item);
            let n = &mut self.nodes[child];
            if e.is_certain() {
                if uncertain_prefix {
                    n.ufp.push(tid);
                } else {
                    n.count += 1;
                }
            } else {
                n.uft.push(tid);
                uncertain_prefix = true;
                Arc::make_mut(&mut self.lookup).insert(tid, e.item, e.prob);
            }
            node = child;
        }
    }

    fn child_or_insert(&mut self, parent: NodeId, item: ItemId) -> NodeId {
        let pos = {
            let nodes = &self.nodes;
            nodes[parent]
                .children
                .binary_search_by_key(&Some(item), |&c| nodes[c].item)
        };
        match pos {
            Ok(i) => self.nodes[parent].children[i],
            Err(i) => {
                let id = self.push_node(item, parent);
                self.nodes[parent].children.insert(i, id);
                id
            }
        }
    }

    /// Appends a node and threads it onto the end of its item's chain.
    pub(crate) fn push_node(&mut self, item: ItemId, parent: NodeId) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(ProFpNode::new(Some(item), Some(parent)));
        self.link(id, item);
        id
    }

    /// Appends `id` to the chain of `item`.
    fn link(&mut self, id: NodeId, item: ItemId) {
        match self.header.get_mut(&item) {
            Some(h) => {
                self.nodes[h.last].node_link = Some(id);
                h.last = id;
                h.len += 1;
            }
            None => {
                self.header.insert(
                    item,
                    HeaderEntry {
                        first: id,
                        last: id,
                        len: 1,
                    },
                );
            }
        }
    }

    /// Sorts every child list by item and rethreads the chains in preorder.
    pub(crate) fn relink(&mut self) {
        for id in 0..self.nodes.len() {
            let mut children = std::mem::take(&mut self.nodes[id].children);
            if !children.is_sorted_by_key(|&c| self.nodes[c].item) {
                children.sort_unstable_by_key(|&c| self.nodes[c].item);
            }
            self.nodes[id].children = children;
            self.nodes[id].node_link = None;
        }
        let mut heads: Vec<Option<HeaderEntry>> = Vec::new();
        let mut stack = vec![ROOT];
        while let Some(id) = stack.pop() {
            if let Some(item) = self.nodes[id].item {
                if heads.len() <= item.index() {
                    heads.resize(item.index() + 1, None);
                }
                match &mut heads[item.index()] {
                    Some(h) => {
                        self.nodes[h.last].node_link = Some(id);
                        h.last = id;
                        h.len += 1;
                    }
                    slot => {
                        *slot = Some(HeaderEntry {
                            first: id,
                            last: id,
                            len: 1,
                        })
                    }
                }
            }
            stack.extend(self.nodes[id].children.iter().rev());
        }
        self.header = heads
            .into_iter()
            .enumerate()
            .filter_map(|(i, h)| Some((ItemId(i as u32), h?)))
            .collect();
    }

    pub fn stats(&self) -> TreeStats {
        let mut s = TreeStats::default();
        for n in &self.nodes[1..] {
            s.node_count += 1;
            s.uft_entries += n.uft.len();
            s.ufp_entries += n.ufp.len();
        }
        s
    }

    pub fn height(&self) -> usize {
        fn depth(tree: &ProFpTree, id: NodeId) -> usize {
            1 + tree.nodes[id]
                .children
                .iter()
                .map(|&c| depth(tree, c))
                .max()
                .unwrap_or(0)
        }
        depth(self, ROOT) - 1
    }

    /// Root-excluded items on the path from the root to `id`, ascending.
    pub fn path_items(&self, id: NodeId) -> Vec<ItemId> {
        let mut items = Vec::new();
        let mut cur = Some(id);
        while let Some(c) = cur {
            if let Some(item) = self.nodes[c].item {
                items.push(item);
            }
            cur = self.nodes[c].parent;
        }
        items.reverse();
        items
    }

    /// Preorder dump, one node per line:
    /// `depth item count uft:{tids} ufp:{tids}`.
    pub fn dump(&self, label: impl Fn(ItemId) -> String) -> String {
        let mut out = String::new();
        let mut stack: Vec<(NodeId, usize)> = self.nodes[ROOT]
            .children
            .iter()
            .rev()
            .map(|&c| (c, 1))
            .collect();
        while let Some((id, depth)) = stack.pop() {
            let n = &self.nodes[id];
            let _ = writeln!(
                out,
                "{depth} {} {} uft:{{{}}} ufp:{{{}}}",
                label(n.item.expect("non-root node has an item")),
                n.count,
                join_tids(&n.uft),
                join_tids(&n.ufp)
            );
            stack.extend(n.children.iter().rev().map(|&c| (c, depth + 1)));
        }
        out
    }
}

fn join_tids(tids: &[Tid]) -> String {
    tids.iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub struct ChainIter<'a> {
    tree: &'a ProFpTree,
    next: Option<NodeId>,
}

impl<'a> Iterator for ChainIter<'a> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        let id = self.next?;
        self.next = self.tree.nodes[id].node_link;
        Some(id)
    }
}

/// Builds the tree by inserting the transactions of `db` in tid order.
pub fn build_tree(db: &UncertainDatabase) -> ProFpTree {
    let mut tree = ProFpTree::new();
    for t in db.transactions() {
        tree.insert_entries(t.tid, t.entries.iter());
    }
    tree
}

/// Like [`build_tree`], restricted to the items for which `keep` is true.
pub fn build_tree_filtered(db: &UncertainDatabase, keep: impl Fn(ItemId) -> bool) -> ProFpTree {
    let mut tree = ProFpTree::new();
    for t in db.transactions() {
        tree.insert_entries(t.tid, t.entries.iter().filter(|e| keep(e.item)));
    }
    tree
}

/// Dump with labels resolved through `db`.
pub fn dump_with_labels(tree: &ProFpTree, db: &UncertainDatabase) -> String {
    tree.dump(|id| db.label(id).to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::running_example;

    fn prefix_tree(n: usize) -> (UncertainDatabase, ProFpTree) {
        let db = running_example();
        let mut tree = ProFpTree::new();
        for t in &db.transactions()[..n] {
            tree.insert_transaction(t).unwrap();
        }
        (db, tree)
    }

    #[test]
    fn first_transaction_builds_first_branch() {
        let (db, tree) = prefix_tree(1);
        assert_eq!(
            dump_with_labels(&tree, &db),
            "1 A 1 uft:{} ufp:{}\n2 B 0 uft:{1} ufp:{}\n3 C 0 uft:{1} ufp:{}\n"
        );
    }

    #[test]
    fn uncertain_prefix_sends_certain_item_to_ufp() {
        let (db, tree) = prefix_tree(2);
        assert!(dump_with_labels(&tree, &db).ends_with("2 D 0 uft:{} ufp:{2}\n"));
    }

    #[test]
    fn t8_marks_a_uncertain_and_b_from_prefix() {
        let (db, tree) = prefix_tree(8);
        let a = db.item_id("A").unwrap();
        let b = db.item_id("B").unwrap();
        let a_node = tree.chain(a).next().unwrap();
        assert_eq!(tree.node(a_node).uft.as_slice(), &[2, 8]);
        let b_under_a = tree
            .chain(b)
            .find(|&n| tree.node(n).parent == Some(a_node))
            .unwrap();
        assert_eq!(tree.node(b_under_a).ufp.as_slice(), &[8]);
        assert_eq!(tree.node(b_under_a).count, 3);
    }

    #[test]
    fn lookup_table_holds_the_uncertain_entries() {
        let db = running_example();
        let tree = build_tree(&db);
        let got: Vec<_> = tree
            .lookup()
            .entries()
            .into_iter()
            .map(|(t, i, p)| (t, db.label(i).to_string(), p))
            .collect();
        let want: Vec<(Tid, String, f64)> = [
            (1, "B", 0.2),
            (1, "C", 0.5),
            (2, "A", 0.1),
            (3, "D", 0.4),
            (4, "D", 0.5),
            (5, "B", 0.1),
            (6, "C", 0.1),
            (6, "D", 0.5),
            (8, "A", 0.5),
        ]
        .into_iter()
        .map(|(t, l, p)| (t, l.to_string(), p))
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn running_example_stats() {
        let tree = build_tree(&running_example());
        // uft holds one tid per uncertain occurrence; ufp adds the certain
        // occurrences of D in t2, C in t5 and B in t8.
        assert_eq!(
            tree.stats(),
            TreeStats {
                node_count: 10,
                uft_entries: 9,
                ufp_entries: 3
            }
        );
        assert_eq!(tree.height(), 4);
    }

    #[test]
    fn empty_and_certain_stats() {
        let empty = UncertainDatabase::default();
        assert_eq!(build_tree(&empty).stats(), TreeStats::default());
        let db = UncertainDatabase::from_rows(&[vec![("a", 1.0), ("b", 1.0), ("c", 1.0)]]).unwrap();
        let tree = build_tree(&db);
        assert_eq!(
            tree.stats(),
            TreeStats {
                node_count: 3,
                uft_entries: 0,
                ufp_entries: 0
            }
        );
        assert!(tree.lookup().is_empty());
        assert!(tree.nodes[1..].iter().all(|n| n.count == 1));
    }

    #[test]
    fn insert_rejects_bad_transactions() {
        let db = running_example();
        let mut tree = ProFpTree::new();
        let mut t = db.transaction(1).unwrap().clone();
        t.entries.reverse();
        assert_eq!(
            tree.insert_transaction(&t),
            Err(TreeError::UnsortedTransaction { tid: 1 })
        );
        tree.insert_transaction(db.transaction(2).unwrap()).unwrap();
        assert_eq!(
            tree.insert_transaction(db.transaction(1).unwrap()),
            Err(TreeError::TidOutOfOrder { tid: 1, last: 2 })
        );
    }

    #[test]
    fn header_chain_visits_every_node_once() {
        let db = running_example();
        let tree = build_tree(&db);
        let mut seen = vec![0; tree.nodes.len()];
        for (&item, h) in tree.header() {
            let chain: Vec<_> = tree.chain(item).collect();
            assert_eq!(chain.len(), h.len);
            assert_eq!(*chain.last().unwrap(), h.last);
            for id in chain {
                assert_eq!(tree.node(id).item, Some(item));
                seen[id] += 1;
            }
        }
        assert_eq!(seen[0], 0);
        assert!(seen[1..].iter().all(|&c| c == 1));
        let d = db.item_id("D").unwrap();
        assert_eq!(tree.chain(d).count(), 4);
    }

    #[test]
    fn repeated_prefix_adds_no_nodes() {
        let db = UncertainDatabase::from_rows(&[
            vec![("a", 1.0), ("b", 0.5), ("c", 1.0)],
            vec![("a", 0.3), ("b", 1.0)],
        ])
        .unwrap();
        let tree = build_tree(&db);
        assert_eq!(tree.stats().node_count, 3);
    }
}
