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

//! Compares the solvers with exhaustive search on random small trees.

use lawecse::generate::{random_scheme, random_tree};
use lawecse::oracle::{weight_of_embedding, OracleMode};
use lawecse::{lawecse_rooted, lawecse_unrooted, oracle_best, root_to_root};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let labels = ["A", "B", "C"];
    let edges = ["x", "y"];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut agree = 0;
    let total = 100;
    for i in 0..total {
        let t1 = random_tree(&mut rng, 6, 3, &labels, &edges);
        let t2 = random_tree(&mut rng, 6, 3, &labels, &edges);
        let p = [0.0, 0.3, f64::INFINITY][i % 3];
        let s = random_scheme(&mut rng, &labels, &edges, 0.1, p);
        let w = |e: Option<lawecse::Embedding>| e.map_or(f64::NEG_INFINITY, |e| e.weight);
        let (a, b) = (t1.root_at_index(0), t2.root_at_index(0));
        let got = [
            w(lawecse_rooted(&a, &b, &s)),
            w(root_to_root(&a, &b, &s)),
            w(lawecse_unrooted(&t1, &t2, &s)),
        ];
        let modes = [
            OracleMode::Rooted(0, 0),
            OracleMode::RootToRoot(0, 0),
            OracleMode::Unrooted,
        ];
        let want = modes.map(|m| w(oracle_best(&t1, &t2, &s, m).unwrap()));
        let ok = got
            .iter()
            .zip(&want)
            .all(|(g, w)| g == w || (g - w).abs() < 1e-9);
        if ok {
            agree += 1;
        } else {
            println!("instance {i}: solver {got:?} oracle {want:?}");
        }
        if let Some(e) = lawecse_unrooted(&t1, &t2, &s) {
            let eval = weight_of_embedding(&t1, &t2, &e.pairs, None, &s).expect("valid embedding");
            assert!((eval.weight - e.weight).abs() < 1e-9);
        }
    }
    println!("{agree}/{total} instances agree in all three modes");
}
