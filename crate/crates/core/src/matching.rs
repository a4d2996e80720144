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

//! Maximum weight matchings on small dense bipartite graphs.
//!
//! The solver works on the smaller side `U` (size `s`) against the larger
//! side `V` (size `t`). Each vertex of `U` gets a private copy joined by a
//! weight-0 edge, so a maximum weight matching of `U`-cardinality `s` in the
//! extended graph is a maximum weight matching of the original. That
//! assignment is found by successive shortest paths with potentials in
//! `O(s^2 (s + t))`.
//!
//! [`solve_all_deletions`] additionally derives the optimum for every graph
//! obtained by deleting one vertex of a chosen side, by repairing the base
//! matching with a single best alternating path per deleted vertex.

/// A dense weighted bipartite graph. `f64::NEG_INFINITY` marks an absent edge.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingInstance {
    rows: usize,
    cols: usize,
    weights: Vec<f64>,
}

impl MatchingInstance {
    /// Row-major `rows x cols` weights.
    pub fn new(rows: usize, cols: usize, weights: Vec<f64>) -> Self {
        assert_eq!(weights.len(), rows * cols, "weight matrix has wrong size");
        assert!(
            weights.iter().all(|w| !w.is_nan() && *w != f64::INFINITY),
            "weights must be finite or -inf"
        );
        Self {
            rows,
            cols,
            weights,
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut weights = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                weights.push(f(i, j));
            }
        }
        Self::new(rows, cols, weights)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn weight(&self, row: usize, col: usize) -> f64 {
        self.weights[row * self.cols + col]
    }

    /// The instance with one vertex of `side` removed. Remaining indices keep
    /// their relative order.
    pub fn without(&self, side: Side, index: usize) -> Self {
        match side {
            Side::Left => {
                assert!(index < self.rows);
                Self::from_fn(self.rows - 1, self.cols, |i, j| {
                    self.weight(if i < index { i } else { i + 1 }, j)
                })
            }
            Side::Right => {
                assert!(index < self.cols);
                Self::from_fn(self.rows, self.cols - 1, |i, j| {
                    self.weight(i, if j < index { j } else { j + 1 })
                })
            }
        }
    }

    /// The same instance with every non-positive entry replaced by -inf.
    pub fn positive_part(&self) -> Self {
        Self::new(
            self.rows,
            self.cols,
            self.weights
                .iter()
                .map(|&w| if w > 0.0 { w } else { f64::NEG_INFINITY })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A set of `(row, col)` pairs with their total weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub weight: f64,
}

/// The instance seen from its smaller side. Only edges with positive weight
/// survive; the others can never improve a matching.
struct Oriented<'a> {
    inst: &'a MatchingInstance,
    small_is_left: bool,
    s: usize,
    t: usize,
}

impl<'a> Oriented<'a> {
    fn new(inst: &'a MatchingInstance) -> Self {
        let small_is_left = inst.rows <= inst.cols;
        let (s, t) = if small_is_left {
            (inst.rows, inst.cols)
        } else {
            (inst.cols, inst.rows)
        };
        Self {
            inst,
            small_is_left,
            s,
            t,
        }
    }

    /// Weight of the edge between small vertex `i` and large vertex `j`,
    /// `None` if it is absent or non-positive.
    #[inline]
    fn edge(&self, i: usize, j: usize) -> Option<f64> {
        let w = if self.small_is_left {
            self.inst.weight(i, j)
        } else {
            self.inst.weight(j, i)
        };
        (w > 0.0).then_some(w)
    }

    fn to_pair(&self, i: usize, j: usize) -> (usize, usize) {
        if self.small_is_left {
            (i, j)
        } else {
            (j, i)
        }
    }
}

/// Optimal assignment of the small side into real vertices or private copies.
struct Assignment {
    /// Large-side partner of each small vertex; `None` means its copy.
    small_mate: Vec<Option<usize>>,
    large_mate: Vec<Option<usize>>,
    weight: f64,
}

fn assign(o: &Oriented<'_>, ops: &mut u64) -> Assignment {
    let (s, t) = (o.s, o.t);
    let m = t + s;
    // 1-based rows and columns; column 0 and row 0 are sentinels
    let cost = |i: usize, j: usize| -> f64 {
        if j <= t {
            o.edge(i - 1, j - 1).map_or(f64::INFINITY, |w| -w)
        } else if j - t == i {
            0.0
        } else {
            f64::INFINITY
        }
    };
    let mut pot_row = vec![0.0f64; s + 1];
    let mut pot_col = vec![0.0f64; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    let mut minv = vec![0.0f64; m + 1];
    let mut used = vec![false; m + 1];
    for i in 1..=s {
        owner[0] = i;
        let mut j0 = 0;
        minv.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            *ops += m as u64;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - pot_row[i0] - pot_col[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            debug_assert!(delta.is_finite(), "own copy keeps every row feasible");
            for j in 0..=m {
                if used[j] {
                    pot_row[owner[j]] += delta;
                    pot_col[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut small_mate = vec![None; s];
    let mut large_mate = vec![None; t];
    for j in 1..=t {
        if owner[j] != 0 {
            small_mate[owner[j] - 1] = Some(j - 1);
            large_mate[j - 1] = Some(owner[j] - 1);
        }
    }
    let weight = small_mate
        .iter()
        .enumerate()
        .filter_map(|(i, mate)| mate.and_then(|j| o.edge(i, j)))
        .sum();
    Assignment {
        small_mate,
        large_mate,
        weight,
    }
}

/// Maximum weight matching over matchings of any cardinality.
///
/// Pairs are reported as `(row, col)` sorted by row.
pub fn solve_mwm(instance: &MatchingInstance) -> Matching {
    solve_mwm_counted(instance, &mut 0)
}

/// [`solve_mwm`] that adds its elementary step count to `ops`.
pub(crate) fn solve_mwm_counted(instance: &MatchingInstance, ops: &mut u64) -> Matching {
    let o = Oriented::new(instance);
    let a = assign(&o, ops);
    let mut pairs: Vec<_> = a
        .small_mate
        .iter()
        .enumerate()
        .filter_map(|(i, mate)| mate.map(|j| o.to_pair(i, j)))
        .collect();
    pairs.sort_unstable();
    Matching {
        pairs,
        weight: a.weight,
    }
}

/// Optimal matching weights of an instance and of every instance with one
/// vertex of `side` deleted.
#[derive(Debug, Clone)]
pub struct DeletionFamily {
    pub base: Matching,
    pub side: Side,
    /// `per_deleted[c]` is the optimum with vertex `c` of `side` removed.
    pub per_deleted: Vec<f64>,
}

impl DeletionFamily {
    pub fn weight_without(&self, c: usize) -> f64 {
        self.per_deleted[c]
    }
}

/// Computes the base matching and, for every vertex `c` on `side`, the
/// optimum of the instance without `c`.
///
/// Deleting an unmatched vertex keeps the base weight. Deleting a matched
/// vertex on the larger side leaves its partner free; the repair is the best
/// augmenting path from that partner. Deleting a matched vertex on the
/// smaller side frees its partner on the larger side; the repair is the best
/// even-length alternating path from there, possibly empty. Both searches are
/// label-correcting longest-path passes over the matched part of the graph.
pub fn solve_all_deletions(instance: &MatchingInstance, side: Side) -> DeletionFamily {
    solve_all_deletions_counted(instance, side, &mut 0)
}

/// [`solve_all_deletions`] that adds its elementary step count to `ops`.
pub(crate) fn solve_all_deletions_counted(
    instance: &MatchingInstance,
    side: Side,
    ops: &mut u64,
) -> DeletionFamily {
    let o = Oriented::new(instance);
    let a = assign(&o, ops);
    let deleting_small = (side == Side::Left) == o.small_is_left;
    let per_deleted = if deleting_small {
        (0..o.s).map(|c| delete_small(&o, &a, c, ops)).collect()
    } else {
        *ops += (o.s * o.t) as u64;
        let exits = best_exits(&o, &a);
        (0..o.t)
            .map(|c| delete_large(&o, &a, &exits, c, ops))
            .collect()
    };
    let mut pairs: Vec<_> = a
        .small_mate
        .iter()
        .enumerate()
        .filter_map(|(i, mate)| mate.map(|j| o.to_pair(i, j)))
        .collect();
    pairs.sort_unstable();
    DeletionFamily {
        base: Matching {
            pairs,
            weight: a.weight,
        },
        side,
        per_deleted,
    }
}

/// Best gain for ending an augmenting path at small vertex `i`: its own copy
/// (weight 0, free whenever `i` is matched to a real vertex) or a free vertex
/// of the large side.
fn best_exits(o: &Oriented<'_>, a: &Assignment) -> Vec<f64> {
    (0..o.s)
        .map(|i| {
            let copy = if a.small_mate[i].is_some() {
                0.0
            } else {
                f64::NEG_INFINITY
            };
            (0..o.t)
                .filter(|&j| a.large_mate[j].is_none())
                .filter_map(|j| o.edge(i, j))
                .fold(copy, f64::max)
        })
        .collect()
}

fn delete_large(o: &Oriented<'_>, a: &Assignment, exits: &[f64], c: usize, ops: &mut u64) -> f64 {
    let Some(start) = a.large_mate[c] else {
        return a.weight;
    };
    let lost = o.edge(start, c).expect("matched edge is positive");
    // gain[x]: best weight change of an alternating path from `start` that
    // leaves small vertex x without a partner
    let mut gain = vec![f64::NEG_INFINITY; o.s];
    gain[start] = 0.0;
    for _ in 0..o.s {
        let mut changed = false;
        for x in 0..o.s {
            if gain[x] == f64::NEG_INFINITY {
                continue;
            }
            *ops += o.s as u64;
            for (z, mate) in a.small_mate.iter().enumerate() {
                let Some(y) = *mate else { continue };
                if y == c || z == x {
                    continue;
                }
                let Some(w_xy) = o.edge(x, y) else { continue };
                let w_zy = o.edge(z, y).expect("matched edge is positive");
                let g = gain[x] + w_xy - w_zy;
                if g > gain[z] {
                    gain[z] = g;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let best = gain
        .iter()
        .zip(exits)
        .filter(|(g, _)| **g > f64::NEG_INFINITY)
        .map(|(g, e)| g + e)
        .fold(f64::NEG_INFINITY, f64::max);
    a.weight - lost + best
}

fn delete_small(o: &Oriented<'_>, a: &Assignment, c: usize, ops: &mut u64) -> f64 {
    let Some(start) = a.small_mate[c] else {
        return a.weight;
    };
    let lost = o.edge(c, start).expect("matched edge is positive");
    // gain[y]: best weight change of an even alternating path from `start`
    // that leaves large vertex y free
    let mut gain = vec![f64::NEG_INFINITY; o.t];
    gain[start] = 0.0;
    let mut best = 0.0f64;
    let mut frontier = vec![start];
    for _ in 0..=o.s {
        let mut next = Vec::new();
        for &y in &frontier {
            *ops += o.s as u64;
            for x in 0..o.s {
                if x == c || a.small_mate[x] == Some(y) {
                    continue;
                }
                let Some(w_xy) = o.edge(x, y) else { continue };
                let released = match a.small_mate[x] {
                    Some(y2) => o.edge(x, y2).expect("matched edge is positive"),
                    None => 0.0,
                };
                let g = gain[y] + w_xy - released;
                match a.small_mate[x] {
                    Some(y2) => {
                        if g > gain[y2] {
                            gain[y2] = g;
                            next.push(y2);
                        }
                    }
                    None => best = best.max(g),
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        next.dedup();
        frontier = next;
    }
    let best = gain
        .iter()
        .filter(|g| **g > f64::NEG_INFINITY)
        .fold(best, |acc, &g| acc.max(g));
    a.weight - lost + best
}

/// Best value of `col_v[b1] + col_w[b2]` over distinct rows `b1 != b2`;
/// returns the value together with the two rows.
///
/// Only the two largest finite entries of each column can take part in an
/// optimum, so at most four combinations are inspected.
pub fn best_cardinality_two_rows(col_v: &[f64], col_w: &[f64]) -> Option<(f64, usize, usize)> {
    assert_eq!(col_v.len(), col_w.len(), "columns must share the row set");
    let top_v = top_two(col_v);
    let top_w = top_two(col_w);
    let mut best: Option<(f64, usize, usize)> = None;
    for &(b1, x) in top_v.iter().flatten() {
        for &(b2, y) in top_w.iter().flatten() {
            if b1 == b2 {
                continue;
            }
            let sum = x + y;
            if best.is_none_or(|(w, _, _)| sum > w) {
                best = Some((sum, b1, b2));
            }
        }
    }
    best
}

/// Value-only form of [`best_cardinality_two_rows`]; `-inf` when no two
/// distinct rows admit a finite combination.
pub fn best_cardinality_two(col_v: &[f64], col_w: &[f64]) -> f64 {
    best_cardinality_two_rows(col_v, col_w).map_or(f64::NEG_INFINITY, |(w, _, _)| w)
}

fn top_two(col: &[f64]) -> [Option<(usize, f64)>; 2] {
    let mut top: [Option<(usize, f64)>; 2] = [None, None];
    for (k, &x) in col.iter().enumerate() {
        if !x.is_finite() {
            continue;
        }
        match top {
            [None, _] => top[0] = Some((k, x)),
            [Some((_, a)), _] if x > a => {
                top[1] = top[0];
                top[0] = Some((k, x));
            }
            [_, None] => top[1] = Some((k, x)),
            [_, Some((_, b))] if x > b => top[1] = Some((k, x)),
            _ => {}
        }
    }
    top
}
