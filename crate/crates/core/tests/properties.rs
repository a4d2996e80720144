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

use lawecse::generate::{random_matching, random_scheme, random_tree};
use lawecse::matching::best_cardinality_two;
use lawecse::oracle::{for_each_embedding, OracleMode};
use lawecse::{
    is_valid_embedding, lawecse_rooted, lawecse_unrooted, lawecse_unrooted_with_root,
    naive_unrooted, oracle_best, root_to_root, solve_all_deletions, solve_mwm, weight_of_embedding,
    Embedding, LabeledTree, LeaveOneOutMax, MatchingInstance, RootedView, Side, WeightScheme,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LABELS: [&str; 3] = ["A", "B", "C"];
const EDGES: [&str; 2] = ["x", "y"];
const TOL: f64 = 1e-9;

fn w(e: &Option<Embedding>) -> f64 {
    e.as_ref().map_or(f64::NEG_INFINITY, |e| e.weight)
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= TOL
}

fn le(a: f64, b: f64) -> bool {
    a <= b + TOL
}

fn penalty(k: u8) -> f64 {
    [0.0, 0.3, 1.0, f64::INFINITY][k as usize % 4]
}

struct Case {
    t1: LabeledTree,
    t2: LabeledTree,
    scheme: WeightScheme,
    rng: ChaCha8Rng,
}

fn case(seed: u64, n1: usize, n2: usize, p: f64) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = rng.gen_range(2..=5);
    let t1 = random_tree(&mut rng, n1, cap, &LABELS, &EDGES);
    let t2 = random_tree(&mut rng, n2, cap, &LABELS, &EDGES);
    let scheme = random_scheme(&mut rng, &LABELS, &EDGES, 0.1, p);
    Case {
        t1,
        t2,
        scheme,
        rng,
    }
}

fn brute_mwm(inst: &MatchingInstance) -> f64 {
    fn go(inst: &MatchingInstance, r: usize, used: &mut Vec<bool>) -> f64 {
        if r == inst.rows() {
            return 0.0;
        }
        let mut best = go(inst, r + 1, used);
        for c in 0..inst.cols() {
            let x = inst.weight(r, c);
            if !used[c] && x > f64::NEG_INFINITY {
                used[c] = true;
                best = best.max(x + go(inst, r + 1, used));
                used[c] = false;
            }
        }
        best
    }
    go(inst, 0, &mut vec![false; inst.cols()])
}

fn shape_below(view: &RootedView<'_>, v: usize) -> String {
    let kids: Vec<String> = view
        .children(v)
        .iter()
        .map(|&c| shape_below(view, c))
        .collect();
    format!("{}({})", view.tree().id(v), kids.join(","))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rooting_partitions_vertices(seed: u64, n in 1usize..30) {
        let c = case(seed, n, 1, 0.0);
        for r in 0..n {
            let view = c.t1.root_at_index(r);
            let mut seen = vec![false; n];
            seen[r] = true;
            for v in 0..n {
                for &ch in view.children(v) {
                    prop_assert!(!seen[ch]);
                    seen[ch] = true;
                    prop_assert_eq!(view.parent(ch), v);
                }
            }
            prop_assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn shared_subtrees_below_a_context(seed: u64, n in 2usize..25) {
        let mut c = case(seed, n, 1, 0.0);
        let s = c.rng.gen_range(0..n);
        let v = (s + 1 + c.rng.gen_range(0..n - 1)) % n;
        let view = c.t1.root_at_index(s);
        let parent = view.parent(v);
        let reference = shape_below(&view, v);
        for s2 in 0..n {
            let other = c.t1.root_at_index(s2);
            if s2 != v && other.parent(v) == parent {
                prop_assert_eq!(shape_below(&other, v), reference.clone());
            }
        }
    }

    #[test]
    fn tree_round_trip(seed: u64, n in 1usize..40) {
        let c = case(seed, n, 1, 0.0);
        let back = LabeledTree::parse(&c.t1.serialize()).unwrap();
        prop_assert_eq!(back.serialize(), c.t1.serialize());
        for v in 0..n {
            prop_assert_eq!(back.id(v), c.t1.id(v));
            prop_assert_eq!(back.label(v), c.t1.label(v));
            prop_assert_eq!(back.neighbors(v), c.t1.neighbors(v));
        }
    }

    #[test]
    fn scheme_round_trip(seed: u64, k: u8) {
        let c = case(seed, 1, 1, penalty(k));
        let back = WeightScheme::parse(&c.scheme.serialize()).unwrap();
        for a in LABELS.iter().chain(["Z"].iter()) {
            for b in LABELS.iter().chain(["Z"].iter()) {
                prop_assert_eq!(back.vertex_weight(a, b), c.scheme.vertex_weight(a, b));
            }
        }
        for a in EDGES.iter().chain(["-"].iter()) {
            for b in EDGES.iter().chain(["-"].iter()) {
                prop_assert_eq!(back.edge_weight(a, b), c.scheme.edge_weight(a, b));
            }
        }
        prop_assert_eq!(back.penalty(), c.scheme.penalty());
    }

    #[test]
    fn matching_is_optimal_and_consistent(seed: u64, rows in 0usize..=5, cols in 0usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_matching(&mut rng, rows, cols, 0.2);
        let m = solve_mwm(&inst);
        prop_assert!(m.weight >= 0.0);
        prop_assert!(close(m.weight, brute_mwm(&inst)));
        prop_assert!(m.pairs.len() <= rows.min(cols));
        let mut used_r = vec![false; rows];
        let mut used_c = vec![false; cols];
        let mut sum = 0.0;
        for &(r, c) in &m.pairs {
            prop_assert!(!used_r[r] && !used_c[c]);
            used_r[r] = true;
            used_c[c] = true;
            prop_assert!(inst.weight(r, c) > f64::NEG_INFINITY);
            sum += inst.weight(r, c);
        }
        prop_assert!(close(sum, m.weight));
        prop_assert!(close(solve_mwm(&inst.positive_part()).weight, m.weight));
        let t = MatchingInstance::from_fn(cols, rows, |i, j| inst.weight(j, i));
        prop_assert!(close(solve_mwm(&t).weight, m.weight));
    }

    #[test]
    fn deletion_family(seed: u64, rows in 0usize..=8, cols in 0usize..=20, left: bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_matching(&mut rng, rows, cols, 0.1);
        let side = if left { Side::Left } else { Side::Right };
        let fam = solve_all_deletions(&inst, side);
        prop_assert!(close(fam.base.weight, solve_mwm(&inst).weight));
        for c in 0..fam.per_deleted.len() {
            prop_assert!(close(fam.weight_without(c), solve_mwm(&inst.without(side, c)).weight));
        }
    }

    #[test]
    fn cardinality_two(col_v in prop::collection::vec(prop::option::of(-5.0f64..5.0), 0..8), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let col_v: Vec<f64> = col_v.into_iter().map(|x| x.unwrap_or(f64::NEG_INFINITY)).collect();
        let col_w: Vec<f64> = col_v.iter().map(|_| {
            if rng.gen_bool(0.2) { f64::NEG_INFINITY } else { rng.gen_range(-5.0..5.0) }
        }).collect();
        let mut want = f64::NEG_INFINITY;
        for (i, &a) in col_v.iter().enumerate() {
            for (j, &b) in col_w.iter().enumerate() {
                if i != j {
                    want = want.max(a + b);
                }
            }
        }
        prop_assert_eq!(best_cardinality_two(&col_v, &col_w), want);
    }

    #[test]
    fn leave_one_out(values in prop::collection::vec(-10i32..10, 0..12)) {
        let xs: Vec<f64> = values.iter().map(|&v| v as f64).collect();
        let l = LeaveOneOutMax::new(xs.iter().copied());
        for i in 0..xs.len() {
            let direct = xs.iter().enumerate().filter(|&(j, _)| j != i)
                .map(|(_, &x)| x).fold(f64::NEG_INFINITY, f64::max);
            prop_assert_eq!(l.query(i), direct);
        }
        prop_assert_eq!(l.max(), xs.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mode_ordering_and_validity(seed: u64, n1 in 1usize..=9, n2 in 1usize..=9, k: u8) {
        let mut c = case(seed, n1, n2, penalty(k));
        let (r, s) = (c.rng.gen_range(0..n1), c.rng.gen_range(0..n2));
        let (v1, v2) = (c.t1.root_at_index(r), c.t2.root_at_index(s));
        let rtr = root_to_root(&v1, &v2, &c.scheme);
        let rooted = lawecse_rooted(&v1, &v2, &c.scheme);
        let un = lawecse_unrooted(&c.t1, &c.t2, &c.scheme);
        prop_assert!(le(w(&rtr), w(&rooted)));
        prop_assert!(le(w(&rooted), w(&un)));
        for (e, roots) in [(&rtr, Some((r, s))), (&rooted, Some((r, s))), (&un, None)] {
            if let Some(e) = e {
                let eval = weight_of_embedding(&c.t1, &c.t2, &e.pairs, roots, &c.scheme).unwrap();
                prop_assert!(close(eval.weight, e.weight));
                prop_assert_eq!(&eval.skipped1, &{ let mut v = e.skipped1.clone(); v.sort(); v });
                prop_assert_eq!(&eval.skipped2, &{ let mut v = e.skipped2.clone(); v.sort(); v });
            }
        }
    }

    #[test]
    fn monotone_in_penalty(seed: u64, n1 in 1usize..=12, n2 in 1usize..=12) {
        let c = case(seed, n1, n2, 0.0);
        let mut last = f64::INFINITY;
        for p in [0.0, 0.1, 0.5, 2.0, f64::INFINITY] {
            let s = c.scheme.clone().with_penalty(p);
            let x = w(&lawecse_unrooted(&c.t1, &c.t2, &s));
            prop_assert!(le(x, last));
            last = x;
        }
    }

    #[test]
    fn choice_of_fixed_root(seed: u64, n1 in 1usize..=15, n2 in 1usize..=15, k: u8) {
        let c = case(seed, n1, n2, penalty(k));
        let base = w(&lawecse_unrooted_with_root(&c.t1, 0, &c.t2, &c.scheme).0);
        for r in 1..n1 {
            let (e, stats) = lawecse_unrooted_with_root(&c.t1, r, &c.t2, &c.scheme);
            prop_assert!(close(w(&e), base));
            prop_assert!(stats.max_solves_per_pair <= 2);
        }
    }

    #[test]
    fn unrooted_dominates_every_root_pair(seed: u64, n1 in 1usize..=8, n2 in 1usize..=8, k: u8) {
        let c = case(seed, n1, n2, penalty(k));
        let un = w(&lawecse_unrooted(&c.t1, &c.t2, &c.scheme));
        let mut best = f64::NEG_INFINITY;
        for r in 0..n1 {
            for s in 0..n2 {
                let x = w(&lawecse_rooted(&c.t1.root_at_index(r), &c.t2.root_at_index(s), &c.scheme));
                prop_assert!(le(x, un));
                best = best.max(x);
            }
        }
        prop_assert!(close(best, un));
    }

    #[test]
    fn naive_matches_oracle(seed: u64, n1 in 1usize..=6, n2 in 1usize..=6, k: u8) {
        let c = case(seed, n1, n2, penalty(k));
        let naive = w(&naive_unrooted(&c.t1, &c.t2, &c.scheme));
        let oracle = w(&oracle_best(&c.t1, &c.t2, &c.scheme, OracleMode::Unrooted).unwrap());
        prop_assert!(close(naive, oracle));
    }

    #[test]
    fn oracle_ordering_and_enumeration(seed: u64, n1 in 1usize..=6, n2 in 1usize..=6, k: u8) {
        let mut c = case(seed, n1, n2, penalty(k));
        let (r, s) = (c.rng.gen_range(0..n1), c.rng.gen_range(0..n2));
        let a = w(&oracle_best(&c.t1, &c.t2, &c.scheme, OracleMode::RootToRoot(r, s)).unwrap());
        let b = w(&oracle_best(&c.t1, &c.t2, &c.scheme, OracleMode::Rooted(r, s)).unwrap());
        let u = w(&oracle_best(&c.t1, &c.t2, &c.scheme, OracleMode::Unrooted).unwrap());
        prop_assert!(a <= b && b <= u);
        let mut bad = None;
        for_each_embedding(&c.t1, &c.t2, (r, s), false, |pairs| {
            if bad.is_none() && is_valid_embedding(&c.t1, &c.t2, pairs, Some((r, s))).is_err() {
                bad = Some(pairs.to_vec());
            }
            let fwd = weight_of_embedding(&c.t1, &c.t2, pairs, None, &c.scheme).unwrap().weight;
            let mut rev = pairs.to_vec();
            rev.reverse();
            let back = weight_of_embedding(&c.t1, &c.t2, &rev, None, &c.scheme).unwrap().weight;
            if bad.is_none() && !close(fwd, back) {
                bad = Some(pairs.to_vec());
            }
        });
        prop_assert_eq!(bad, None);
    }

    /// Equal labels weigh 1, others are forbidden, skips are free: the
    /// optimum counts the mapped vertices of a largest label-preserving
    /// common embedding.
    #[test]
    fn label_equality_counts_vertices(seed: u64, n1 in 1usize..=6, n2 in 1usize..=6) {
        let c = case(seed, n1, n2, 0.0);
        let s = LABELS.iter().fold(WeightScheme::new(), |s, a| s.with_vertex_pair(a, a, 1.0));
        let got = lawecse_unrooted(&c.t1, &c.t2, &s).map_or(0.0, |e| e.weight);
        let mut most = 0;
        for x in 0..n1 {
            for y in 0..n2 {
                for_each_embedding(&c.t1, &c.t2, (x, y), true, |pairs| {
                    if pairs.iter().all(|&(a, b)| c.t1.label(a) == c.t2.label(b)) {
                        most = most.max(pairs.len());
                    }
                });
            }
        }
        prop_assert_eq!(got, most as f64);
    }
}
