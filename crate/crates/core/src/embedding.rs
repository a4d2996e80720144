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

//! Embedding results and the table traceback shared by the rooted and the
//! unrooted solver.

use thiserror::Error;

use crate::matching::{solve_mwm, MatchingInstance};

/// Kind of a table entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntryType {
    /// The two subtree roots are mapped onto each other.
    RootToRoot,
    /// At least one of the two subtree roots is an inner vertex of a
    /// topological path; the penalty for it is already subtracted.
    Skip,
}

/// A common subtree embedding: the vertex pairs it maps, its weight and the
/// vertices it skips on topological paths.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    /// `(vertex of the first tree, vertex of the second tree)`; the first pair
    /// is the root of the embedded subtree.
    pub pairs: Vec<(usize, usize)>,
    pub weight: f64,
    /// Roots of the two trees under which the embedding is valid.
    pub roots: Option<(usize, usize)>,
    /// Inner vertices of topological paths in the first tree.
    pub skipped1: Vec<usize>,
    /// Inner vertices of topological paths in the second tree.
    pub skipped2: Vec<usize>,
}

impl Embedding {
    /// The pair at the root of the embedded subtree.
    pub fn top(&self) -> Option<(usize, usize)> {
        self.pairs.first().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs sorted by first-tree vertex.
    pub fn sorted_pairs(&self) -> Vec<(usize, usize)> {
        let mut p = self.pairs.clone();
        p.sort_unstable();
        p
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TracebackError {
    #[error("entry ({u}, {v}) is not finite: {value}")]
    InfiniteEntry { u: usize, v: usize, value: f64 },
}

/// Read access to a filled table. Second-tree positions are opaque handles:
/// plain vertices for the rooted table, directed contexts for the unrooted one.
pub(crate) trait DpSource {
    fn rtr(&self, u: usize, x: usize) -> f64;
    fn sk(&self, u: usize, x: usize) -> f64;
    fn vertex2(&self, x: usize) -> usize;
    fn children1(&self, u: usize) -> &[usize];
    fn children2(&self, x: usize, out: &mut Vec<usize>);
    /// Weight of the edge from `b` to its parent against the edge from the
    /// vertex of `y` to its parent.
    fn edge_weight(&self, b: usize, y: usize) -> f64;

    fn entry(&self, u: usize, x: usize, t: EntryType) -> f64 {
        match t {
            EntryType::RootToRoot => self.rtr(u, x),
            EntryType::Skip => self.sk(u, x),
        }
    }

    fn best_of(&self, u: usize, x: usize) -> f64 {
        self.rtr(u, x).max(self.sk(u, x))
    }

    /// Matching edge weight between child `b` and child handle `y`.
    fn match_weight(&self, b: usize, y: usize) -> f64 {
        self.sk(b, y).max(self.rtr(b, y) + self.edge_weight(b, y))
    }

    /// Matching instance of entry `(u, x)`; rows are `children1(u)`, columns
    /// are the child handles written to `cols`.
    fn instance(&self, u: usize, x: usize, cols: &mut Vec<usize>) -> MatchingInstance {
        cols.clear();
        self.children2(x, cols);
        let rows = self.children1(u);
        MatchingInstance::from_fn(rows.len(), cols.len(), |i, j| {
            self.match_weight(rows[i], cols[j])
        })
    }
}

/// Reconstructs the embedding behind entry `(u, x, t)`.
///
/// Matchings are re-solved from the table; skip entries re-derive their
/// maximizing case. Ties prefer first-tree children, then root-to-root.
pub(crate) fn trace<S: DpSource>(
    src: &S,
    u: usize,
    x: usize,
    t: EntryType,
    out: &mut Embedding,
) -> Result<(), TracebackError> {
    let value = src.entry(u, x, t);
    if !value.is_finite() {
        return Err(TracebackError::InfiniteEntry {
            u,
            v: src.vertex2(x),
            value,
        });
    }
    let mut stack = vec![(u, x, t)];
    let mut cols = Vec::new();
    let mut kids = Vec::new();
    while let Some((u, x, t)) = stack.pop() {
        match t {
            EntryType::RootToRoot => {
                out.pairs.push((u, src.vertex2(x)));
                let inst = src.instance(u, x, &mut cols);
                let m = solve_mwm(&inst);
                // reversed so the first matched child is expanded first
                for &(i, j) in m.pairs.iter().rev() {
                    let (b, y) = (src.children1(u)[i], cols[j]);
                    let via_rtr = src.rtr(b, y) + src.edge_weight(b, y);
                    let kind = if via_rtr >= src.sk(b, y) {
                        EntryType::RootToRoot
                    } else {
                        EntryType::Skip
                    };
                    stack.push((b, y, kind));
                }
            }
            EntryType::Skip => {
                let mut best: Option<(f64, usize, usize, EntryType, bool)> = None;
                let mut consider = |val: f64, b, y, kind, first_side| {
                    if val > f64::NEG_INFINITY && best.is_none_or(|(w, ..)| val > w) {
                        best = Some((val, b, y, kind, first_side));
                    }
                };
                for &b in src.children1(u) {
                    consider(src.rtr(b, x), b, x, EntryType::RootToRoot, true);
                    consider(src.sk(b, x), b, x, EntryType::Skip, true);
                }
                kids.clear();
                src.children2(x, &mut kids);
                for &y in &kids {
                    consider(src.rtr(u, y), u, y, EntryType::RootToRoot, false);
                    consider(src.sk(u, y), u, y, EntryType::Skip, false);
                }
                let (_, b, y, kind, first_side) =
                    best.expect("finite skip entry has a finite predecessor");
                if first_side {
                    out.skipped1.push(u);
                } else {
                    out.skipped2.push(src.vertex2(x));
                }
                stack.push((b, y, kind));
            }
        }
    }
    Ok(())
}

/// Best entry type for a position when either may be used.
pub(crate) fn better_type<S: DpSource>(src: &S, u: usize, x: usize) -> EntryType {
    if src.rtr(u, x) >= src.sk(u, x) {
        EntryType::RootToRoot
    } else {
        EntryType::Skip
    }
}
