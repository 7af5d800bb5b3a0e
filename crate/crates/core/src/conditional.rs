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

//! Conditional trees.
//!
//! `tree_{X ∪ i}` keeps the ancestor paths of every `i` node of `tree_X`.
//! Each `i` node pushes its values up to all of its ancestors:
//!
//! * `count` and `uft` are added unchanged;
//! * a tid in the `i` node's `ufp` is certain for `i`, so the ancestor's
//!   own sets in `tree_X` decide where it goes: its `ufp` stays `ufp`, its
//!   `uft` stays `uft`, and anything else was certain there and becomes a
//!   `count`.

use crate::model::{ItemId, Tid};
use crate::tree::{ProFpNode, ProFpTree, TidList, ROOT};

/// Values collected for one node of the conditional tree, together with the
/// tid sets of the matching node in the source tree.
#[derive(Clone, Debug)]
pub struct Accumulator<'a> {
    pub count: u64,
    pub uft: Vec<Tid>,
    pub ufp: Vec<Tid>,
    orig_uft: &'a [Tid],
    orig_ufp: &'a [Tid],
}

impl<'a> Accumulator<'a> {
    pub fn new(orig: &'a ProFpNode) -> Accumulator<'a> {
        Accumulator::from_sets(&orig.uft, &orig.ufp)
    }

    pub fn from_sets(orig_uft: &'a [Tid], orig_ufp: &'a [Tid]) -> Accumulator<'a> {
        Accumulator {
            count: 0,
            uft: Vec::new(),
            ufp: Vec::new(),
            orig_uft,
            orig_ufp,
        }
    }

    pub fn add(&mut self, source: &ProFpNode) {
        route(
            self.orig_uft,
            self.orig_ufp,
            source,
            &mut self.count,
            &mut self.uft,
            &mut self.ufp,
        );
    }

    /// Sorted, deduplicated (count, uft, ufp).
    pub fn finish(mut self) -> (u64, Vec<Tid>, Vec<Tid>) {
        self.uft.sort_unstable();
        self.uft.dedup();
        self.ufp.sort_unstable();
        self.ufp.dedup();
        (self.count, self.uft, self.ufp)
    }
}

trait TidSink {
    fn append(&mut self, tids: &[Tid]);
}

impl TidSink for Vec<Tid> {
    fn append(&mut self, tids: &[Tid]) {
        self.extend_from_slice(tids);
    }
}

impl TidSink for TidList {
    fn append(&mut self, tids: &[Tid]) {
        self.extend_from_slice(tids);
    }
}

fn route<L: TidSink>(
    orig_uft: &[Tid],
    orig_ufp: &[Tid],
    source: &ProFpNode,
    count: &mut u64,
    uft: &mut L,
    ufp: &mut L,
) {
    *count += source.count;
    uft.append(&source.uft);
    for &t in &source.ufp {
        if orig_ufp.binary_search(&t).is_ok() {
            ufp.append(&[t]);
        } else if orig_uft.binary_search(&t).is_ok() {
            uft.append(&[t]);
        } else {
            *count += 1;
        }
    }
}

/// Builds the conditional tree of `tree_x` for `item`. `item` must precede
/// every item of the itemset `tree_x` is conditioned on. Returns an empty
/// tree sharing the lookup table when `item` is absent.
pub fn build_conditional(tree_x: &ProFpTree, item: ItemId) -> ProFpTree {
    build_conditional_filtered(tree_x, item, |_| true)
}

/// [`build_conditional`] restricted to the items accepted by `keep`.
/// Paths that differ only in dropped items are merged. Every kept node
/// receives exactly the values it would get in the unrestricted tree, since
/// the routing of a tid depends only on the node it is routed at.
pub fn build_conditional_filtered(
    tree_x: &ProFpTree,
    item: ItemId,
    keep: impl Fn(ItemId) -> bool,
) -> ProFpTree {
    const UNMAPPED: usize = usize::MAX;

    let mut out = ProFpTree::with_lookup(tree_x.shared_lookup());
    out.nodes
        .reserve(tree_x.header().get(&item).map_or(0, |h| 2 * h.len));
    // source node -> conditional node
    let mut map = vec![UNMAPPED; tree_x.nodes.len()];
    let mut path = Vec::new();

    for inode in tree_x.chain(item) {
        let source = &tree_x.nodes[inode];
        path.clear();
        let mut cur = source.parent;
        while let Some(c) = cur {
            if c == ROOT {
                break;
            }
            let n = &tree_x.nodes[c];
            if keep(n.item.expect("non-root node has an item")) {
                path.push(c);
            }
            cur = n.parent;
        }
        let mut parent = ROOT;
        for &anc in path.iter().rev() {
            let orig = &tree_x.nodes[anc];
            if map[anc] == UNMAPPED {
                let existing = out.nodes[parent]
                    .children
                    .iter()
                    .copied()
                    .find(|&c| out.nodes[c].item == orig.item);
                map[anc] = existing.unwrap_or_else(|| {
                    let id = out.nodes.len();
                    out.nodes.push(ProFpNode::new(orig.item, Some(parent)));
                    out.nodes[parent].children.push(id);
                    id
                });
            }
            parent = map[anc];
            let n = &mut out.nodes[parent];
            route(
                &orig.uft,
                &orig.ufp,
                source,
                &mut n.count,
                &mut n.uft,
                &mut n.ufp,
            );
        }
    }

    for n in &mut out.nodes[1..] {
        debug_assert!(!n.is_empty());
        if !n.uft.is_sorted() {
            n.uft.sort_unstable();
        }
        if !n.ufp.is_sorted() {
            n.ufp.sort_unstable();
        }
    }
    out.relink();
    out
}
