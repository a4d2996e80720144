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

//! Largest weight common subtree embeddings between unrooted trees.
//!
//! The first tree is rooted once at a fixed vertex `r`. The second tree is
//! handled through directed contexts: the subtree below `v` when `w` is its
//! parent is the same for every root outside it, so one table column per
//! context covers all roots of the second tree at once.
//!
//! For a pair `(u, v)` all contexts of `v` share one matching graph over
//! `C(u)` and `N(v)`; a context with parent `w` uses the graph with `w`
//! deleted. The first context of a pair that is computed may be solved on
//! its own; from the second one on, the full graph is solved once and every
//! deletion is derived from it. The children-side maxima of all contexts of
//! a pair are likewise answered from one best/second-best summary.
//!
//! The optimum is the larger of
//!
//! * the best root-to-root entry over all pairs and contexts, and
//! * for a vertex `u` of the first tree skipped between two of its children,
//!   the best combination of two children mapped into the two sides of an
//!   edge `vw` of the second tree, minus the penalty for `u`.

use crate::embedding::{better_type, trace, DpSource, Embedding, EntryType};
use crate::matching::{
    best_cardinality_two_rows, solve_all_deletions_counted, solve_mwm_counted, Side,
};
use crate::rooted::compute_tables;
use crate::tree::{DirectedContext, LabeledTree, Orientation, RootedView};
use crate::weights::{PairScorer, WeightScheme};

/// Maximum of a set with one element left out, answered in constant time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeaveOneOutMax {
    best: (f64, usize),
    second: (f64, usize),
}

impl Default for LeaveOneOutMax {
    fn default() -> Self {
        Self {
            best: (f64::NEG_INFINITY, usize::MAX),
            second: (f64::NEG_INFINITY, usize::MAX),
        }
    }
}

impl LeaveOneOutMax {
    /// Summarizes `values`; element `k` of the iterator has index `k`.
    pub fn new(values: impl IntoIterator<Item = f64>) -> Self {
        let mut s = Self::default();
        for (k, x) in values.into_iter().enumerate() {
            if x > s.best.0 || s.best.1 == usize::MAX {
                s.second = s.best;
                s.best = (x, k);
            } else if x > s.second.0 || s.second.1 == usize::MAX {
                s.second = (x, k);
            }
        }
        s
    }

    /// Maximum over all elements; `-inf` when empty.
    pub fn max(&self) -> f64 {
        self.best.0
    }

    /// Maximum over all elements except index `exclude`.
    pub fn query(&self, exclude: usize) -> f64 {
        if exclude == self.best.1 {
            self.second.0
        } else {
            self.best.0
        }
    }
}

/// Counters collected while solving.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub table_entries: usize,
    /// Matching problems solved from scratch.
    pub matching_solves: usize,
    /// Largest number of from-scratch solves charged to one vertex pair.
    pub max_solves_per_pair: usize,
    /// Elementary steps: table entries plus inner matching iterations.
    pub work: u64,
}

/// How the optimum of [`ContextTable`] is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    /// A root-to-root entry.
    Rooted { u: usize, context: DirectedContext },
    /// `skipped` is an inner vertex joining two children, each embedded into
    /// one side of an edge of the second tree.
    Split {
        skipped: usize,
        first: (usize, DirectedContext),
        second: (usize, DirectedContext),
    },
}

const UNTOUCHED: u32 = u32::MAX;
const FULL: u32 = u32::MAX - 1;

/// Table entries for the rooted first tree against every directed context of
/// the second tree.
#[derive(Debug, Clone)]
pub struct ContextTable<'a> {
    t2: &'a LabeledTree,
    view1: RootedView<'a>,
    scorer: PairScorer,
    n1: usize,
    /// First context id of each vertex; slot `deg(v)` is the root context.
    offset: Vec<usize>,
    ctx_vertex: Vec<usize>,
    /// Edge to the context parent; unused for root contexts.
    ctx_parent_edge: Vec<usize>,
    /// `incoming[offset[v] + i]`: context of the i-th neighbor with `v` as
    /// its parent.
    incoming: Vec<usize>,
    rtr: Vec<f64>,
    sk: Vec<f64>,
    stats: SolveStats,
}

impl DpSource for ContextTable<'_> {
    #[inline]
    fn rtr(&self, u: usize, x: usize) -> f64 {
        self.rtr[x * self.n1 + u]
    }

    #[inline]
    fn sk(&self, u: usize, x: usize) -> f64 {
        self.sk[x * self.n1 + u]
    }

    fn vertex2(&self, x: usize) -> usize {
        self.ctx_vertex[x]
    }

    fn children1(&self, u: usize) -> &[usize] {
        self.view1.children(u)
    }

    fn children2(&self, x: usize, out: &mut Vec<usize>) {
        let v = self.ctx_vertex[x];
        let slot = x - self.offset[v];
        let deg = self.t2.degree(v);
        out.extend(
            (0..deg)
                .filter(|&i| i != slot)
                .map(|i| self.incoming[self.offset[v] + i]),
        );
    }

    fn edge_weight(&self, b: usize, y: usize) -> f64 {
        let e1 = self.view1.parent_edge(b).expect("child has a parent edge");
        self.scorer.edge(e1, self.ctx_parent_edge[y])
    }
}

impl<'a> ContextTable<'a> {
    /// Fills every entry. `r` is the root of the first tree.
    pub fn compute(
        t1: &'a LabeledTree,
        r: usize,
        t2: &'a LabeledTree,
        scheme: &WeightScheme,
    ) -> Self {
        let view1 = t1.root_at_index(r);
        let n1 = t1.len();
        let n2 = t2.len();
        let mut offset = Vec::with_capacity(n2 + 1);
        let mut ctx_vertex = Vec::new();
        let mut ctx_parent_edge = Vec::new();
        for v in 0..n2 {
            offset.push(ctx_vertex.len());
            for &(_, e) in t2.neighbors(v) {
                ctx_vertex.push(v);
                ctx_parent_edge.push(e);
            }
            ctx_vertex.push(v);
            ctx_parent_edge.push(usize::MAX);
        }
        offset.push(ctx_vertex.len());
        let nctx = ctx_vertex.len();
        let mut incoming = vec![0; nctx];
        for v in 0..n2 {
            for (i, &(c, _)) in t2.neighbors(v).iter().enumerate() {
                let back = t2
                    .neighbors(c)
                    .binary_search_by_key(&v, |&(n, _)| n)
                    .expect("adjacency is symmetric");
                incoming[offset[v] + i] = offset[c] + back;
            }
        }
        let mut table = ContextTable {
            t2,
            view1,
            scorer: PairScorer::new(t1, t2, scheme),
            n1,
            offset,
            ctx_vertex,
            ctx_parent_edge,
            incoming,
            rtr: vec![f64::NAN; n1 * nctx],
            sk: vec![f64::NEG_INFINITY; n1 * nctx],
            stats: SolveStats {
                table_entries: 2 * n1 * nctx,
                ..SolveStats::default()
            },
        };
        let mut fill = Filler {
            state: vec![UNTOUCHED; n1 * n2],
            loo: vec![LeaveOneOutMax::default(); n1 * n2],
            solves: vec![0; n1 * n2],
            cols: Vec::new(),
        };
        table.fill_all(&mut fill);
        table.stats.max_solves_per_pair = fill.solves.iter().copied().max().unwrap_or(0) as usize;
        table.stats.work += table.stats.table_entries as u64;
        table
    }

    pub fn first_tree_root(&self) -> usize {
        self.view1.root()
    }

    pub fn stats(&self) -> SolveStats {
        self.stats
    }

    pub fn context_count(&self) -> usize {
        self.ctx_vertex.len()
    }

    /// Dense id of a directed context of the second tree.
    pub fn context_id(&self, ctx: DirectedContext) -> usize {
        let v = ctx.vertex;
        match ctx.orientation {
            Orientation::Root => self.offset[v] + self.t2.degree(v),
            Orientation::Parent(w) => {
                let i = self
                    .t2
                    .neighbors(v)
                    .binary_search_by_key(&w, |&(n, _)| n)
                    .expect("context parent must be a neighbor");
                self.offset[v] + i
            }
        }
    }

    pub fn context(&self, id: usize) -> DirectedContext {
        let v = self.ctx_vertex[id];
        let slot = id - self.offset[v];
        let orientation = if slot == self.t2.degree(v) {
            Orientation::Root
        } else {
            Orientation::Parent(self.t2.neighbors(v)[slot].0)
        };
        DirectedContext {
            vertex: v,
            orientation,
        }
    }

    pub fn entry(&self, u: usize, ctx: DirectedContext, t: EntryType) -> f64 {
        DpSource::entry(self, u, self.context_id(ctx), t)
    }

    fn fill_all(&mut self, fill: &mut Filler) {
        let nctx = self.ctx_vertex.len();
        let n2 = self.t2.len();
        let mut done = vec![false; nctx];
        let mut order = Vec::new();
        let mut stack = Vec::new();
        let mut kids = Vec::new();
        let post1: Vec<usize> = self.view1.postorder().to_vec();
        for s in 0..n2 {
            order.clear();
            stack.push((self.offset[s] + self.t2.degree(s), false));
            while let Some((x, expanded)) = stack.pop() {
                if expanded {
                    order.push(x);
                    continue;
                }
                stack.push((x, true));
                kids.clear();
                self.children2(x, &mut kids);
                for &y in kids.iter().rev() {
                    if !done[y] {
                        stack.push((y, false));
                    }
                }
            }
            for &x in &order {
                for &u in &post1 {
                    self.fill_entry(u, x, fill);
                }
                done[x] = true;
            }
        }
    }

    fn fill_entry(&mut self, u: usize, x: usize, fill: &mut Filler) {
        let n2 = self.t2.len();
        let v = self.ctx_vertex[x];
        let base = self.offset[v];
        let deg = self.t2.degree(v);
        let slot = x - base;
        let pair = u * n2 + v;

        // Every neighbor column of v is complete once a root context is
        // reached, or once a second context of v is reached.
        let full = match fill.state[pair] {
            UNTOUCHED if slot != deg => {
                fill.state[pair] = slot as u32;
                false
            }
            FULL => true,
            _ => {
                fill.state[pair] = FULL;
                fill.loo[pair] =
                    LeaveOneOutMax::new((0..deg).map(|i| self.best_of(u, self.incoming[base + i])));
                true
            }
        };

        let idx = x * self.n1 + u;
        if self.rtr[idx].is_nan() {
            let wv = self.scorer.vertex(u, v);
            let kids2 = if slot == deg { deg } else { deg - 1 };
            let has_children = !self.view1.is_leaf(u) && kids2 > 0;
            if wv == f64::NEG_INFINITY || !has_children {
                self.rtr[idx] = wv;
            } else if !full {
                let inst = self.instance(u, x, &mut fill.cols);
                let m = solve_mwm_counted(&inst, &mut self.stats.work);
                self.rtr[idx] = wv + m.weight;
                self.stats.matching_solves += 1;
                fill.solves[pair] += 1;
            } else {
                let root_ctx = base + deg;
                let inst = self.instance(u, root_ctx, &mut fill.cols);
                let family = solve_all_deletions_counted(&inst, Side::Right, &mut self.stats.work);
                self.stats.matching_solves += 1;
                fill.solves[pair] += 1;
                for j in 0..=deg {
                    let k = (base + j) * self.n1 + u;
                    if self.rtr[k].is_nan() {
                        self.rtr[k] = wv
                            + if j == deg {
                                family.base.weight
                            } else {
                                family.per_deleted[j]
                            };
                    }
                }
            }
        }

        self.sk[idx] = if self.scorer.forbids_skips {
            f64::NEG_INFINITY
        } else {
            let down1 = self
                .view1
                .children(u)
                .iter()
                .map(|&b| self.best_of(b, x))
                .fold(f64::NEG_INFINITY, f64::max);
            let down2 = if full {
                let loo = &fill.loo[pair];
                if slot == deg {
                    loo.max()
                } else {
                    loo.query(slot)
                }
            } else {
                (0..deg)
                    .filter(|&i| i != slot)
                    .map(|i| self.best_of(u, self.incoming[base + i]))
                    .fold(f64::NEG_INFINITY, f64::max)
            };
            down1.max(down2) - self.scorer.penalty
        };
    }

    /// Best root-to-root entry over all pairs and contexts.
    pub fn m1(&self) -> (f64, Option<Witness>) {
        let mut best: Option<(f64, usize, usize)> = None;
        for x in 0..self.ctx_vertex.len() {
            for u in 0..self.n1 {
                let w = self.rtr(u, x);
                if w > f64::NEG_INFINITY && best.is_none_or(|(b, ..)| w > b) {
                    best = Some((w, u, x));
                }
            }
        }
        match best {
            Some((w, u, x)) => (
                w,
                Some(Witness::Rooted {
                    u,
                    context: self.context(x),
                }),
            ),
            None => (f64::NEG_INFINITY, None),
        }
    }

    /// Best split through a skipped vertex of the first tree; `-inf` when
    /// skipping is forbidden.
    pub fn m2(&self) -> (f64, Option<Witness>) {
        if self.scorer.forbids_skips {
            return (f64::NEG_INFINITY, None);
        }
        type Side2 = (usize, usize);
        let mut best: Option<(f64, usize, Side2, Side2)> = None;
        let mut col_v = Vec::new();
        let mut col_w = Vec::new();
        let sides: Vec<(usize, usize)> = self
            .t2
            .edges()
            .iter()
            .map(|e| {
                (
                    self.context_id(DirectedContext {
                        vertex: e.a,
                        orientation: Orientation::Parent(e.b),
                    }),
                    self.context_id(DirectedContext {
                        vertex: e.b,
                        orientation: Orientation::Parent(e.a),
                    }),
                )
            })
            .collect();
        for u in 0..self.n1 {
            let kids = self.view1.children(u);
            if kids.len() < 2 {
                continue;
            }
            for &(xv, xw) in &sides {
                col_v.clear();
                col_w.clear();
                col_v.extend(kids.iter().map(|&b| self.best_of(b, xv)));
                col_w.extend(kids.iter().map(|&b| self.best_of(b, xw)));
                if let Some((w, i1, i2)) = best_cardinality_two_rows(&col_v, &col_w) {
                    let w = w - self.scorer.penalty;
                    if best.is_none_or(|(b, ..)| w > b) {
                        best = Some((w, u, (kids[i1], xv), (kids[i2], xw)));
                    }
                }
            }
        }
        match best {
            Some((w, u, (b1, x1), (b2, x2))) => (
                w,
                Some(Witness::Split {
                    skipped: u,
                    first: (b1, self.context(x1)),
                    second: (b2, self.context(x2)),
                }),
            ),
            None => (f64::NEG_INFINITY, None),
        }
    }

    /// Reconstructs the embedding described by `witness`.
    pub fn traceback(&self, witness: Witness) -> Embedding {
        let mut emb = Embedding {
            pairs: Vec::new(),
            weight: f64::NEG_INFINITY,
            roots: None,
            skipped1: Vec::new(),
            skipped2: Vec::new(),
        };
        match witness {
            Witness::Rooted { u, context } => {
                let x = self.context_id(context);
                emb.weight = self.rtr(u, x);
                trace(self, u, x, EntryType::RootToRoot, &mut emb).expect("witness is finite");
            }
            Witness::Split {
                skipped,
                first,
                second,
            } => {
                let (b1, x1) = (first.0, self.context_id(first.1));
                let (b2, x2) = (second.0, self.context_id(second.1));
                emb.weight = self.best_of(b1, x1) + self.best_of(b2, x2) - self.scorer.penalty;
                emb.skipped1.push(skipped);
                trace(self, b1, x1, better_type(self, b1, x1), &mut emb)
                    .expect("witness is finite");
                trace(self, b2, x2, better_type(self, b2, x2), &mut emb)
                    .expect("witness is finite");
            }
        }
        emb.roots = emb.top();
        emb
    }

    /// Optimal embedding, or `None` if every vertex pair is forbidden.
    pub fn solve(&self) -> Option<Embedding> {
        let (w1, wit1) = self.m1();
        let (w2, wit2) = self.m2();
        let witness = if w2 > w1 { wit2 } else { wit1 };
        witness.map(|w| self.traceback(w))
    }
}

struct Filler {
    state: Vec<u32>,
    loo: Vec<LeaveOneOutMax>,
    solves: Vec<u8>,
    cols: Vec<usize>,
}

/// Context tables for the first tree rooted at `r` against all directed
/// contexts of the second tree.
pub fn compute_all_context_tables<'a>(
    t1: &'a LabeledTree,
    r: usize,
    t2: &'a LabeledTree,
    scheme: &WeightScheme,
) -> ContextTable<'a> {
    ContextTable::compute(t1, r, t2, scheme)
}

/// Optimal unrooted embedding, fixing the first declared vertex of `t1` as
/// its root.
pub fn lawecse_unrooted(
    t1: &LabeledTree,
    t2: &LabeledTree,
    scheme: &WeightScheme,
) -> Option<Embedding> {
    lawecse_unrooted_with_root(t1, 0, t2, scheme).0
}

/// Like [`lawecse_unrooted`] with an explicit root for the first tree; also
/// reports solver counters.
pub fn lawecse_unrooted_with_root(
    t1: &LabeledTree,
    r: usize,
    t2: &LabeledTree,
    scheme: &WeightScheme,
) -> (Option<Embedding>, SolveStats) {
    let table = ContextTable::compute(t1, r, t2, scheme);
    (table.solve(), table.stats())
}

/// Reference solver: one rooted computation per pair of roots.
pub fn naive_unrooted(
    t1: &LabeledTree,
    t2: &LabeledTree,
    scheme: &WeightScheme,
) -> Option<Embedding> {
    naive_unrooted_with_stats(t1, t2, scheme).0
}

pub fn naive_unrooted_with_stats(
    t1: &LabeledTree,
    t2: &LabeledTree,
    scheme: &WeightScheme,
) -> (Option<Embedding>, SolveStats) {
    let mut stats = SolveStats::default();
    let mut best: Option<(f64, usize, usize, (usize, usize))> = None;
    let views2: Vec<_> = (0..t2.len()).map(|s| t2.root_at_index(s)).collect();
    for r in 0..t1.len() {
        let view1 = t1.root_at_index(r);
        for view2 in &views2 {
            let table = compute_tables(&view1, view2, scheme);
            stats.table_entries += table.table_entries();
            stats.matching_solves += table.matching_solves();
            stats.work += table.matching_work();
            if let Some((u, v)) = table.best_pair() {
                let w = table.entry(u, v, EntryType::RootToRoot);
                if best.is_none_or(|(b, ..)| w > b) {
                    best = Some((w, r, view2.root(), (u, v)));
                }
            }
        }
    }
    stats.work += stats.table_entries as u64;
    let emb = best.map(|(_, r, s, start)| {
        let view1 = t1.root_at_index(r);
        let table = compute_tables(&view1, &views2[s], scheme);
        table.traceback(start).expect("best entry is finite")
    });
    (emb, stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split() -> (LabeledTree, LabeledTree, WeightScheme) {
        let t = LabeledTree::parse(
            "v r white\nv u yellow\nv u2 yellow\nv u3 red\nv u0 red\n\
             e r u |\ne u u2 |\ne u2 u3 |\ne u u0 |\n",
        )
        .unwrap();
        let t2 = LabeledTree::parse(
            "v v white\nv v0 white\nv v1 white\nv x1 white\nv x2 white\n\
             e v v0 |\ne v0 v1 |\ne v0 x1 |\ne v0 x2 |\n",
        )
        .unwrap();
        let s = WeightScheme::parse(
            "vdefault 1\npenalty 0.2\nvpair yellow white -5\nvpair red white 2",
        )
        .unwrap();
        (t, t2, s)
    }

    fn ctx(v: usize, w: Option<usize>) -> DirectedContext {
        DirectedContext {
            vertex: v,
            orientation: w.map_or(Orientation::Root, Orientation::Parent),
        }
    }

    #[test]
    fn leave_one_out() {
        let l = LeaveOneOutMax::new([3.0, 7.0, 5.0, 7.0]);
        assert_eq!(l.max(), 7.0);
        assert_eq!(l.query(1), 7.0);
        assert_eq!(l.query(0), 7.0);
        let l = LeaveOneOutMax::new([3.0, 9.0, 5.0]);
        assert_eq!(l.query(1), 5.0);
        assert_eq!(l.query(2), 9.0);
        let l = LeaveOneOutMax::new([4.0]);
        assert_eq!(l.query(0), f64::NEG_INFINITY);
        assert_eq!(LeaveOneOutMax::new([]).max(), f64::NEG_INFINITY);
    }

    #[test]
    fn split_entries() {
        let (t, t2, s) = split();
        let table = compute_all_context_tables(&t, 0, &t2, &s);
        let (u0, u2) = (t.index_of("u0").unwrap(), t.index_of("u2").unwrap());
        let (v0, v1) = (t2.index_of("v0").unwrap(), t2.index_of("v1").unwrap());
        let sk = table.entry(u2, ctx(v1, Some(v0)), EntryType::Skip);
        assert!((sk - 1.8).abs() < 1e-12);
        assert_eq!(
            table.entry(u0, ctx(v0, Some(v1)), EntryType::RootToRoot),
            2.0
        );
        let (m1, _) = table.m1();
        assert!((m1 - 2.8).abs() < 1e-12);
        let (m2, wit) = table.m2();
        assert!((m2 - 3.6).abs() < 1e-12);
        assert!(matches!(wit, Some(Witness::Split { skipped: 1, .. })));
    }

    #[test]
    fn split_unrooted() {
        let (t, t2, s) = split();
        let emb = lawecse_unrooted(&t, &t2, &s).unwrap();
        assert!((emb.weight - 3.6).abs() < 1e-12);
        // {(u0,v0),(u3,v1)} and {(u0,v),(u3,v0)} tie
        let named: Vec<_> = emb
            .sorted_pairs()
            .into_iter()
            .map(|(a, b)| (t.id(a), t2.id(b)))
            .collect();
        assert!(
            named == [("u3", "v1"), ("u0", "v0")] || named == [("u3", "v0"), ("u0", "v")],
            "{named:?}"
        );
        let mut skipped: Vec<_> = emb.skipped1.iter().map(|&x| t.id(x)).collect();
        skipped.sort();
        assert_eq!(skipped, ["u", "u2"]);
        let naive = naive_unrooted(&t, &t2, &s).unwrap();
        assert!((naive.weight - 3.6).abs() < 1e-12);
    }

    #[test]
    fn single_vertex_second_tree() {
        let (t, _, s) = split();
        let t2 = LabeledTree::parse("v z white").unwrap();
        let emb = lawecse_unrooted(&t, &t2, &s).unwrap();
        assert_eq!(emb.weight, 2.0);
        assert_eq!(emb.pairs.len(), 1);
    }

    #[test]
    fn all_forbidden_is_infeasible() {
        let (t, t2, _) = split();
        assert!(lawecse_unrooted(&t, &t2, &WeightScheme::new()).is_none());
        assert!(naive_unrooted(&t, &t2, &WeightScheme::new()).is_none());
    }
}
