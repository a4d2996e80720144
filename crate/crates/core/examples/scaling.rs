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

//! Work and time of the unrooted solver against the naive all-roots method.
//!
//! Run with `--release`.

use std::time::Instant;

use lawecse::generate::{random_scheme, random_tree};
use lawecse::lawecse_unrooted_with_root;
use lawecse::unrooted::naive_unrooted_with_stats;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let labels = ["A", "B", "C"];
    let edges = ["x", "y"];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    println!(
        "{:>6} {:>14} {:>10} {:>14} {:>10}",
        "n", "work", "ms", "naive work", "naive ms"
    );
    for n in [25, 50, 100, 200, 400, 800] {
        let t1 = random_tree(&mut rng, n, 5, &labels, &edges);
        let t2 = random_tree(&mut rng, n, 5, &labels, &edges);
        let s = random_scheme(&mut rng, &labels, &edges, 0.1, 0.3);
        let start = Instant::now();
        let (e, stats) = lawecse_unrooted_with_root(&t1, 0, &t2, &s);
        let ms = start.elapsed().as_secs_f64() * 1e3;
        let naive = if n <= 50 {
            let start = Instant::now();
            let (f, ns) = naive_unrooted_with_stats(&t1, &t2, &s);
            let gap = e.as_ref().map_or(0.0, |e| e.weight) - f.as_ref().map_or(0.0, |f| f.weight);
            assert!(gap.abs() < 1e-9);
            format!(
                "{:>14} {:>10.1}",
                ns.work,
                start.elapsed().as_secs_f64() * 1e3
            )
        } else {
            String::new()
        };
        println!("{n:>6} {:>14} {ms:>10.1} {naive}", stats.work);
    }
}
