// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Largest weight common subtree embeddings between two rooted trees.
//!
//! For every pair `(u, v)` the table holds two values:
//!
//! * `RootToRoot`: `w(u, v)` plus a maximum weight matching between the
//!   children of `u` and of `v`, where child pair `(b, c)` weighs
//!   `max(skip(b, c), rtr(b, c) + w(edge ub, edge vc))`;
//! * `Skip`: the best entry of either type for `(b, v)` with `b` a child of
//!   `u`, or for `(u, c)` with `c` a child of `v`, minus the penalty.
//!
//! Entries are filled bottom-up; the overall optimum is the largest
//! root-to-root entry.

use crate::embedding::{trace, DpSource, Embedding, EntryType, TracebackError};
use crate::matching::solve_mwm_counted;
use crate::tree::RootedView;
use crate::weights::{PairScorer, WeightScheme};

/// Filled dynamic programming table for two rooted trees.
#[derive(Debug, Clone)]
pub struct DpTable<'a> {
    view1: RootedView<'a>,
    view2: RootedView<'a>,
    scorer: PairScorer,
    n2: usize,
    rtr: Vec<f64>,
    sk: Vec<f64>,
    matching_solves: usize,
    matching_work: u64,
}

impl<'a> DpTable<'a> {
    pub fn entry(&self, u: usize, v: usize, t: EntryType) -> f64 {
        DpSource::entry(self, u, v, t)
    }

    pub fn view1(&self) -> &RootedView<'a> {
        &self.view1
    }

    pub fn view2(&self) -> &RootedView<'a> {
        &self.view2
    }

    /// Number of stored values (two per vertex pair).
    pub fn table_entries(&self) -> usize {
        self.rtr.len() + self.sk.len()
    }

    pub fn matching_solves(&self) -> usize {
        self.matching_solves
    }

    /// Inner iterations spent in the matching solver.
    pub fn matching_work(&self) -> u64 {
        self.matching_work
    }

    /// Best root-to-root entry over all pairs; first pair in index order on
    /// ties.
    pub fn best_pair(&self) -> Option<(usize, usize)> {
        let mut best: Option<(f64, usize, usize)> = None;
        for u in 0..self.view1.tree().len() {
            for v in 0..self.n2 {
                let w = self.rtr(u, v);
                if w > f64::NEG_INFINITY && best.is_none_or(|(b, ..)| w > b) {
                    best = Some((w, u, v));
                }
            }
        }
        best.map(|(_, u, v)| (u, v))
    }

    /// Embedding realizing the root-to-root entry at `start`.
    pub fn traceback(&self, start: (usize, usize)) -> Result<Embedding, TracebackError> {
        let (u, v) = start;
        let mut emb = Embedding {
            pairs: Vec::new(),
            weight: self.rtr(u, v),
            roots: Some((self.view1.root(), self.view2.root())),
            skipped1: Vec::new(),
            skipped2: Vec::new(),
        };
        trace(self, u, v, EntryType::RootToRoot, &mut emb)?;
        Ok(emb)
    }
}

impl DpSource for DpTable<'_> {
    #[inline]
    fn rtr(&self, u: usize, v: usize) -> f64 {
        self.rtr[u * self.n2 + v]
    }

    #[inline]
    fn sk(&self, u: usize, v: usize) -> f64 {
        self.sk[u * self.n2 + v]
    }

    fn vertex2(&self, v: usize) -> usize {
        v
    }

    fn children1(&self, u: usize) -> &[usize] {
        self.view1.children(u)
    }

    fn children2(&self, v: usize, out: &mut Vec<usize>) {
        out.extend_from_slice(self.view2.children(v));
    }

    fn edge_weight(&self, b: usize, c: usize) -> f64 {
        match (self.view1.parent_edge(b), self.view2.parent_edge(c)) {
            (Some(e1), Some(e2)) => self.scorer.edge(e1, e2),
            _ => unreachable!("children always have a parent edge"),
        }
    }
}

/// Fills both tables bottom-up: second tree in postorder outside, first tree
/// in postorder inside.
pub fn compute_tables<'a>(
    view1: &RootedView<'a>,
    view2: &RootedView<'a>,
    scheme: &WeightScheme,
) -> DpTable<'a> {
    let (t1, t2) = (view1.tree(), view2.tree());
    let n1 = t1.len();
    let n2 = t2.len();
    let mut table = DpTable {
        view1: view1.clone(),
        view2: view2.clone(),
        scorer: PairScorer::new(t1, t2, scheme),
        n2,
        rtr: vec![f64::NEG_INFINITY; n1 * n2],
        sk: vec![f64::NEG_INFINITY; n1 * n2],
        matching_solves: 0,
        matching_work: 0,
    };
    let mut cols = Vec::new();
    for &v in view2.postorder() {
        for &u in view1.postorder() {
            let sk = if table.scorer.forbids_skips {
                f64::NEG_INFINITY
            } else {
                let down1 = view1
                    .children(u)
                    .iter()
                    .map(|&b| table.best_of(b, v))
                    .fold(f64::NEG_INFINITY, f64::max);
                let down2 = view2
                    .children(v)
                    .iter()
                    .map(|&c| table.best_of(u, c))
                    .fold(f64::NEG_INFINITY, f64::max);
                down1.max(down2) - table.scorer.penalty
            };
            let mut rtr = table.scorer.vertex(u, v);
            if rtr > f64::NEG_INFINITY && !view1.is_leaf(u) && !view2.is_leaf(v) {
                let inst = table.instance(u, v, &mut cols);
                rtr += solve_mwm_counted(&inst, &mut table.matching_work).weight;
                table.matching_solves += 1;
            }
            table.sk[u * n2 + v] = sk;
            table.rtr[u * n2 + v] = rtr;
        }
    }
    table
}

/// Best embedding between two rooted trees, or `None` when every vertex pair
/// is forbidden.
pub fn lawecse_rooted(
    view1: &RootedView<'_>,
    view2: &RootedView<'_>,
    scheme: &WeightScheme,
) -> Option<Embedding> {
    let table = compute_tables(view1, view2, scheme);
    let start = table.best_pair()?;
    Some(table.traceback(start).expect("best entry is finite"))
}

/// Best embedding that maps the root of the first tree onto the root of the
/// second, or `None` if no such embedding has finite weight.
pub fn root_to_root(
    view1: &RootedView<'_>,
    view2: &RootedView<'_>,
    scheme: &WeightScheme,
) -> Option<Embedding> {
    let table = compute_tables(view1, view2, scheme);
    table.traceback((view1.root(), view2.root())).ok()
}
