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

//! Random trees and weight schemes for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::matching::MatchingInstance;
use crate::tree::{LabeledTree, TreeBuilder};
use crate::weights::WeightScheme;

/// Random tree by uniform attachment: vertex `i` joins a uniformly chosen
/// earlier vertex whose degree is still below `max_degree`.
pub fn random_tree<R: Rng>(
    rng: &mut R,
    n: usize,
    max_degree: usize,
    vertex_labels: &[&str],
    edge_labels: &[&str],
) -> LabeledTree {
    assert!(n >= 1, "a tree needs a vertex");
    assert!(
        max_degree >= 2 || n <= 2,
        "degree cap too small for {n} vertices"
    );
    let mut b = TreeBuilder::new();
    let mut degree = vec![0usize; n];
    let mut open: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        let label = vertex_labels.choose(rng).expect("empty alphabet");
        b.vertex(&format!("n{i}"), label, 0).unwrap();
        if i > 0 {
            let k = rng.gen_range(0..open.len());
            let p = open[k];
            let label = edge_labels.choose(rng).expect("empty alphabet");
            b.edge(&format!("n{p}"), &format!("n{i}"), label, 0)
                .unwrap();
            degree[p] += 1;
            degree[i] += 1;
            if degree[p] == max_degree {
                open.swap_remove(k);
            }
        }
        if degree[i] < max_degree {
            open.push(i);
        }
    }
    b.build().unwrap()
}

/// Weight uniform in `[-2, 2]`, or `-inf` with probability `forbidden`.
pub fn random_weight<R: Rng>(rng: &mut R, forbidden: f64) -> f64 {
    if rng.gen_bool(forbidden) {
        f64::NEG_INFINITY
    } else {
        rng.gen_range(-2.0..=2.0)
    }
}

/// Scheme with an explicit random weight for every ordered label pair.
pub fn random_scheme<R: Rng>(
    rng: &mut R,
    vertex_labels: &[&str],
    edge_labels: &[&str],
    forbidden: f64,
    penalty: f64,
) -> WeightScheme {
    let mut s = WeightScheme::new().with_penalty(penalty);
    for a in vertex_labels {
        for b in vertex_labels {
            s = s.with_vertex_pair(a, b, random_weight(rng, forbidden));
        }
    }
    for a in edge_labels {
        for b in edge_labels {
            s = s.with_edge_pair(a, b, random_weight(rng, forbidden));
        }
    }
    s
}

/// Scheme whose optimum is a maximum common subtree: equal labels weigh 1,
/// everything else is forbidden, and no vertex may be skipped.
pub fn mcs_scheme(vertex_labels: &[&str]) -> WeightScheme {
    vertex_labels
        .iter()
        .fold(WeightScheme::new().with_penalty(f64::INFINITY), |s, a| {
            s.with_vertex_pair(a, a, 1.0)
        })
}

/// Dense instance with entries from [`random_weight`].
pub fn random_matching<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    forbidden: f64,
) -> MatchingInstance {
    MatchingInstance::from_fn(rows, cols, |_, _| random_weight(rng, forbidden))
}
