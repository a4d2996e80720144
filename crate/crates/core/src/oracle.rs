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

//! Brute-force ground truth for small instances.
//!
//! Nothing here uses the dynamic programs or the matching solver. Mappings
//! are enumerated exhaustively, checked against the definition of a common
//! subtree embedding and weighed path by path.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::embedding::Embedding;
use crate::tree::{LabeledTree, RootedView};
use crate::weights::WeightScheme;

/// Largest tree the exhaustive search accepts.
pub const ORACLE_SIZE_CAP: usize = 8;

/// Why a mapping is not a common subtree embedding.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("empty mapping")]
    Empty,
    #[error("vertex {vertex} does not exist in tree {tree}")]
    UnknownVertex { tree: u8, vertex: usize },
    #[error("vertex {vertex} of tree {tree} is mapped twice")]
    NotInjective { tree: u8, vertex: usize },
    #[error("mapped vertices have {tops} topmost vertices in tree {tree}")]
    NotOneTop { tree: u8, tops: usize },
    #[error("nearest mapped ancestors of pair {pair} disagree")]
    AncestryMismatch { pair: usize },
    #[error(
        "pairs {first} and {second} leave their common parent through one edge in tree {tree}"
    )]
    SharedPath {
        tree: u8,
        first: usize,
        second: usize,
    },
    #[error("no choice of roots makes the mapping an embedding")]
    NoRoots,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("tree with {size} vertices exceeds the oracle cap of {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error(transparent)]
    Invalid(#[from] Violation),
}

/// Search space of [`oracle_best`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// Both trees rooted at the given vertices.
    Rooted(usize, usize),
    /// As `Rooted`, with the first root mapped onto the second.
    RootToRoot(usize, usize),
    Unrooted,
}

/// Tree structure of a valid mapping: `parent[k]` is the pair directly above
/// pair `k` in the common subtree.
#[derive(Debug, Clone)]
struct Shape {
    parent: Vec<Option<usize>>,
}

fn nearest_mapped_above(
    view: &RootedView<'_>,
    mapped: &[Option<usize>],
    v: usize,
) -> Option<usize> {
    let mut x = v;
    while x != view.root() {
        x = view.parent(x);
        if mapped[x].is_some() {
            return Some(x);
        }
    }
    None
}

fn shape_under(
    t1: &LabeledTree,
    t2: &LabeledTree,
    pairs: &[(usize, usize)],
    roots: (usize, usize),
) -> Result<Shape, Violation> {
    if pairs.is_empty() {
        return Err(Violation::Empty);
    }
    let mut pos1 = vec![None; t1.len()];
    let mut pos2 = vec![None; t2.len()];
    for (k, &(x, y)) in pairs.iter().enumerate() {
        if x >= t1.len() {
            return Err(Violation::UnknownVertex { tree: 1, vertex: x });
        }
        if y >= t2.len() {
            return Err(Violation::UnknownVertex { tree: 2, vertex: y });
        }
        if pos1[x].replace(k).is_some() {
            return Err(Violation::NotInjective { tree: 1, vertex: x });
        }
        if pos2[y].replace(k).is_some() {
            return Err(Violation::NotInjective { tree: 2, vertex: y });
        }
    }
    let v1 = t1.root_at_index(roots.0);
    let v2 = t2.root_at_index(roots.1);
    let mut parent = Vec::with_capacity(pairs.len());
    for (k, &(x, y)) in pairs.iter().enumerate() {
        let a = nearest_mapped_above(&v1, &pos1, x).map(|a| pos1[a].unwrap());
        let b = nearest_mapped_above(&v2, &pos2, y).map(|b| pos2[b].unwrap());
        if a != b {
            return Err(Violation::AncestryMismatch { pair: k });
        }
        parent.push(a);
    }
    let tops = parent.iter().filter(|p| p.is_none()).count();
    if tops != 1 {
        return Err(Violation::NotOneTop { tree: 1, tops });
    }
    let mut exits: BTreeMap<(u8, usize, usize), usize> = BTreeMap::new();
    for (k, p) in parent.iter().enumerate() {
        let Some(p) = *p else { continue };
        let c1 = v1.child_towards(pairs[p].0, pairs[k].0).unwrap();
        let c2 = v2.child_towards(pairs[p].1, pairs[k].1).unwrap();
        for (tree, c) in [(1u8, c1), (2u8, c2)] {
            if let Some(&first) = exits.get(&(tree, p, c)) {
                return Err(Violation::SharedPath {
                    tree,
                    first,
                    second: k,
                });
            }
            exits.insert((tree, p, c), k);
        }
    }
    Ok(Shape { parent })
}

fn shape_of(
    t1: &LabeledTree,
    t2: &LabeledTree,
    pairs: &[(usize, usize)],
    roots: Option<(usize, usize)>,
) -> Result<Shape, Violation> {
    match roots {
        Some(r) => shape_under(t1, t2, pairs, r),
        None => {
            let mut last = Violation::Empty;
            for &top in pairs {
                match shape_under(t1, t2, pairs, top) {
                    Ok(s) => return Ok(s),
                    Err(e @ (Violation::UnknownVertex { .. } | Violation::NotInjective { .. })) => {
                        return Err(e)
                    }
                    Err(_) => last = Violation::NoRoots,
                }
            }
            Err(last)
        }
    }
}

/// Checks that `pairs` is a common subtree embedding, under the given roots
/// or, without roots, under some choice of roots.
pub fn is_valid_embedding(
    t1: &LabeledTree,
    t2: &LabeledTree,
    pairs: &[(usize, usize)],
    roots: Option<(usize, usize)>,
) -> Result<(), Violation> {
    shape_of(t1, t2, pairs, roots).map(|_| ())
}

/// Weight of a mapping and the inner vertices of its topological paths.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub weight: f64,
    pub skipped1: Vec<usize>,
    pub skipped2: Vec<usize>,
}

/// Weighs a valid mapping path by path.
pub fn weight_of_embedding(
    t1: &LabeledTree,
    t2: &LabeledTree,
    pairs: &[(usize, usize)],
    roots: Option<(usize, usize)>,
    scheme: &WeightScheme,
) -> Result<Evaluation, Violation> {
    let shape = shape_of(t1, t2, pairs, roots)?;
    let mut eval = Evaluation {
        weight: 0.0,
        skipped1: Vec::new(),
        skipped2: Vec::new(),
    };
    for &(x, y) in pairs {
        eval.weight += scheme.vertex_weight(t1.label(x), t2.label(y));
    }
    for (k, p) in shape.parent.iter().enumerate() {
        let Some(p) = *p else { continue };
        let path1 = t1.path(pairs[p].0, pairs[k].0);
        let path2 = t2.path(pairs[p].1, pairs[k].1);
        if path1.len() == 2 && path2.len() == 2 {
            let e1 = t1.edge_between(path1[0], path1[1]).unwrap();
            let e2 = t2.edge_between(path2[0], path2[1]).unwrap();
            eval.weight += scheme.edge_weight(t1.edge_label(e1), t2.edge_label(e2));
        } else {
            let inner1 = &path1[1..path1.len() - 1];
            let inner2 = &path2[1..path2.len() - 1];
            let inner = (inner1.len() + inner2.len()) as f64;
            eval.weight -= if scheme.forbids_skips() {
                f64::INFINITY
            } else {
                scheme.penalty() * inner
            };
            eval.skipped1.extend_from_slice(inner1);
            eval.skipped2.extend_from_slice(inner2);
        }
    }
    eval.skipped1.sort_unstable();
    eval.skipped2.sort_unstable();
    Ok(eval)
}

type Visitor<'v> = dyn FnMut(&[(usize, usize)]) + 'v;

/// Exhaustive search over partial maps of the first tree, in preorder.
/// A branch is cut only once it violates the embedding conditions for good.
struct Search<'a> {
    v1: RootedView<'a>,
    v2: RootedView<'a>,
    order: Vec<usize>,
    phi: Vec<Option<usize>>,
    used: Vec<bool>,
    nma: Vec<Option<usize>>,
    mapped: usize,
    force_root: bool,
}

impl Search<'_> {
    fn run(&mut self, i: usize, visit: &mut Visitor<'_>) {
        if i == self.order.len() {
            if self.mapped > 0 {
                let pairs: Vec<_> = self
                    .order
                    .iter()
                    .filter_map(|&x| self.phi[x].map(|y| (x, y)))
                    .collect();
                visit(&pairs);
            }
            return;
        }
        let x = self.order[i];
        let root = x == self.v1.root();
        self.nma[x] = if root {
            None
        } else {
            let p = self.v1.parent(x);
            if self.phi[p].is_some() {
                Some(p)
            } else {
                self.nma[p]
            }
        };
        if !(self.force_root && root) {
            self.run(i + 1, visit);
        }
        for y in 0..self.used.len() {
            if self.used[y] || !self.allowed(i, x, y) {
                continue;
            }
            self.phi[x] = Some(y);
            self.used[y] = true;
            self.mapped += 1;
            self.run(i + 1, visit);
            self.mapped -= 1;
            self.used[y] = false;
            self.phi[x] = None;
        }
    }

    fn allowed(&self, i: usize, x: usize, y: usize) -> bool {
        if self.force_root && x == self.v1.root() && y != self.v2.root() {
            return false;
        }
        let Some(a) = self.nma[x] else {
            return self.mapped == 0;
        };
        let fa = self.phi[a].unwrap();
        let mut z = y;
        let mut above = None;
        while z != self.v2.root() {
            z = self.v2.parent(z);
            if self.used[z] {
                above = Some(z);
                break;
            }
        }
        if above != Some(fa) {
            return false;
        }
        let below = (0..self.used.len()).any(|z| self.used[z] && self.v2.is_ancestor_or_self(y, z));
        if below {
            return false;
        }
        let c1 = self.v1.child_towards(a, x);
        let c2 = self.v2.child_towards(fa, y);
        self.order[..i].iter().all(|&s| match self.phi[s] {
            Some(fs) if self.nma[s] == Some(a) => {
                self.v1.child_towards(a, s) != c1 && self.v2.child_towards(fa, fs) != c2
            }
            _ => true,
        })
    }
}

/// Calls `visit` once for every embedding valid under roots `(r, s)`.
pub fn for_each_embedding(
    t1: &LabeledTree,
    t2: &LabeledTree,
    roots: (usize, usize),
    root_to_root: bool,
    mut visit: impl FnMut(&[(usize, usize)]),
) {
    let v1 = t1.root_at_index(roots.0);
    let order = v1.preorder().to_vec();
    let mut search = Search {
        v1,
        v2: t2.root_at_index(roots.1),
        order,
        phi: vec![None; t1.len()],
        used: vec![false; t2.len()],
        nma: vec![None; t1.len()],
        mapped: 0,
        force_root: root_to_root,
    };
    search.run(0, &mut visit);
}

/// Best embedding by exhaustive enumeration; `Ok(None)` when every
/// embedding has weight `-inf`.
pub fn oracle_best(
    t1: &LabeledTree,
    t2: &LabeledTree,
    scheme: &WeightScheme,
    mode: OracleMode,
) -> Result<Option<Embedding>, OracleError> {
    for t in [t1, t2] {
        if t.len() > ORACLE_SIZE_CAP {
            return Err(OracleError::TooLarge {
                size: t.len(),
                cap: ORACLE_SIZE_CAP,
            });
        }
    }
    let searches: Vec<((usize, usize), bool)> = match mode {
        OracleMode::Rooted(r, s) => vec![((r, s), false)],
        OracleMode::RootToRoot(r, s) => vec![((r, s), true)],
        // every unrooted embedding is root-to-root below its own top pair
        OracleMode::Unrooted => (0..t1.len())
            .flat_map(|x| (0..t2.len()).map(move |y| ((x, y), true)))
            .collect(),
    };
    let mut best: Option<Embedding> = None;
    for (roots, forced) in searches {
        let mut err = None;
        for_each_embedding(t1, t2, roots, forced, |pairs| {
            match weight_of_embedding(t1, t2, pairs, Some(roots), scheme) {
                Ok(eval) => {
                    let better = eval.weight > f64::NEG_INFINITY
                        && best.as_ref().is_none_or(|b| eval.weight > b.weight);
                    if better {
                        best = Some(Embedding {
                            pairs: pairs.to_vec(),
                            weight: eval.weight,
                            roots: Some(roots),
                            skipped1: eval.skipped1,
                            skipped2: eval.skipped2,
                        });
                    }
                }
                Err(v) => err = Some(v),
            }
        });
        if let Some(v) = err {
            return Err(v.into());
        }
    }
    Ok(best)
}

/// Size of a maximum common subtree by vertex labels: the largest connected
/// vertex set of `t1` whose induced labeled tree is isomorphic to one of
/// `t2`. Zero when no label is shared.
pub fn max_common_subtree_size(t1: &LabeledTree, t2: &LabeledTree) -> usize {
    let mut ids: BTreeMap<&str, usize> = BTreeMap::new();
    for l in t1.labels().iter().chain(t2.labels()) {
        let next = ids.len();
        ids.entry(l.as_str()).or_insert(next);
    }
    let forms2: HashSet<String> = connected_subsets(t2)
        .into_iter()
        .map(|m| canonical(t2, m, &ids))
        .collect();
    connected_subsets(t1)
        .into_iter()
        .filter(|&m| forms2.contains(&canonical(t1, m, &ids)))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

fn connected_subsets(t: &LabeledTree) -> Vec<u32> {
    assert!(t.len() < 32, "subset enumeration is limited to 31 vertices");
    (1u32..(1 << t.len()))
        .filter(|&m| {
            let start = m.trailing_zeros() as usize;
            let mut seen = 1u32 << start;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &(w, _) in t.neighbors(v) {
                    if m & (1 << w) != 0 && seen & (1 << w) == 0 {
                        seen |= 1 << w;
                        stack.push(w);
                    }
                }
            }
            seen == m
        })
        .collect()
}

/// Smallest rooted encoding over all roots of the subtree induced by `mask`.
fn canonical(t: &LabeledTree, mask: u32, ids: &BTreeMap<&str, usize>) -> String {
    fn encode(
        t: &LabeledTree,
        mask: u32,
        ids: &BTreeMap<&str, usize>,
        v: usize,
        from: usize,
    ) -> String {
        let mut kids: Vec<String> = t
            .neighbors(v)
            .iter()
            .filter(|&&(w, _)| w != from && mask & (1 << w) != 0)
            .map(|&(w, _)| encode(t, mask, ids, w, v))
            .collect();
        kids.sort();
        format!("({}{})", ids[t.label(v)], kids.concat())
    }
    (0..t.len())
        .filter(|&v| mask & (1 << v) != 0)
        .map(|v| encode(t, mask, ids, v, usize::MAX))
        .min()
        .unwrap()
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

    #[test]
    fn split_known_mapping() {
        let (t, t2, s) = split();
        // u0 -> v0, u3 -> v1
        let pairs = [(4, 1), (3, 2)];
        assert!(is_valid_embedding(&t, &t2, &pairs, Some((4, 1))).is_ok());
        assert!(is_valid_embedding(&t, &t2, &pairs, None).is_ok());
        let eval = weight_of_embedding(&t, &t2, &pairs, None, &s).unwrap();
        assert!((eval.weight - 3.6).abs() < 1e-12);
        assert_eq!(eval.skipped1, [1, 2]);
        // under T rooted at r, u0 and u3 are incomparable but v0 is above v1
        assert!(is_valid_embedding(&t, &t2, &pairs, Some((0, 0))).is_err());
    }

    #[test]
    fn split_optima() {
        let (t, t2, s) = split();
        let rooted = oracle_best(&t, &t2, &s, OracleMode::Rooted(0, 0))
            .unwrap()
            .unwrap();
        assert!((rooted.weight - 2.8).abs() < 1e-12);
        let un = oracle_best(&t, &t2, &s, OracleMode::Unrooted)
            .unwrap()
            .unwrap();
        assert!((un.weight - 3.6).abs() < 1e-12);
    }

    #[test]
    fn bonus_weights() {
        let t = LabeledTree::parse("v u1 white\nv u2 white\ne u1 u2 |").unwrap();
        let t2 = LabeledTree::parse("v v1 white\nv v2 white\nv v3 white\ne v1 v2 |\ne v2 v3 red|")
            .unwrap();
        let s =
            WeightScheme::parse("vdefault 1\nepair | | 3\nepair | red| -1\npenalty 0.3").unwrap();
        let direct = weight_of_embedding(&t, &t2, &[(0, 0), (1, 1)], Some((0, 0)), &s).unwrap();
        assert_eq!(direct.weight, 5.0);
        let skipping = weight_of_embedding(&t, &t2, &[(0, 0), (1, 2)], Some((0, 0)), &s).unwrap();
        assert!((skipping.weight - 1.7).abs() < 1e-12);
        assert_eq!(skipping.skipped2, [1]);
    }

    #[test]
    fn violations() {
        let (t, t2, _) = split();
        assert_eq!(
            is_valid_embedding(&t, &t2, &[], None),
            Err(Violation::Empty)
        );
        assert!(matches!(
            is_valid_embedding(&t, &t2, &[(0, 0), (1, 0)], None),
            Err(Violation::NotInjective { tree: 2, .. })
        ));
        // u2 and u0 are siblings below u; v and v1 sit on one path through v0
        let shared = [(1, 0), (2, 1), (4, 2)];
        assert!(matches!(
            is_valid_embedding(&t, &t2, &shared, Some((0, 0))),
            Err(Violation::AncestryMismatch { .. })
        ));
        let path = LabeledTree::parse("v a A\nv b A\nv c A\ne a b\ne b c").unwrap();
        let star = LabeledTree::parse("v a A\nv b A\nv c A\nv d A\ne a b\ne a c\ne a d").unwrap();
        // b and c both below a, leaving through the same child in the path
        assert!(matches!(
            is_valid_embedding(&star, &path, &[(0, 0), (1, 1), (2, 2)], Some((0, 0))),
            Err(Violation::AncestryMismatch { .. })
        ));
        let spider = LabeledTree::parse("v a A\nv m A\nv b A\nv c A\ne a m\ne m b\ne m c").unwrap();
        assert!(matches!(
            is_valid_embedding(&star, &spider, &[(0, 0), (1, 2), (2, 3)], Some((0, 0))),
            Err(Violation::SharedPath { tree: 2, .. })
        ));
    }

    #[test]
    fn enumerated_embeddings_are_valid() {
        let (t, t2, s) = split();
        let mut n = 0;
        for_each_embedding(&t, &t2, (0, 0), false, |pairs| {
            n += 1;
            is_valid_embedding(&t, &t2, pairs, Some((0, 0))).unwrap();
            let mut rev = pairs.to_vec();
            rev.reverse();
            let a = weight_of_embedding(&t, &t2, pairs, None, &s)
                .unwrap()
                .weight;
            let b = weight_of_embedding(&t, &t2, &rev, None, &s).unwrap().weight;
            assert_eq!(a, b);
        });
        assert!(n > 25);
    }

    #[test]
    fn disjoint_labels_are_infeasible() {
        let a = LabeledTree::parse("v a A\nv b A\ne a b").unwrap();
        let b = LabeledTree::parse("v a B").unwrap();
        let s = WeightScheme::new().with_vertex_pair("A", "A", 1.0);
        assert_eq!(oracle_best(&a, &b, &s, OracleMode::Unrooted).unwrap(), None);
        assert_eq!(max_common_subtree_size(&a, &b), 0);
    }

    #[test]
    fn size_cap() {
        let big = LabeledTree::parse(
            &((0..9).map(|i| format!("v n{i} A\n")).collect::<String>()
                + &(1..9).map(|i| format!("e n0 n{i}\n")).collect::<String>()),
        )
        .unwrap();
        assert!(matches!(
            oracle_best(&big, &big, &WeightScheme::new(), OracleMode::Unrooted),
            Err(OracleError::TooLarge { size: 9, .. })
        ));
    }

    #[test]
    fn mcs_of_path_and_star() {
        let path = LabeledTree::parse("v a A\nv b A\nv c A\nv d A\ne a b\ne b c\ne c d").unwrap();
        let star = LabeledTree::parse("v a A\nv b A\nv c A\nv d A\ne a b\ne a c\ne a d").unwrap();
        assert_eq!(max_common_subtree_size(&path, &star), 3);
        assert_eq!(max_common_subtree_size(&path, &path), 4);
    }
}
