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

//! Edge-pair weights reward mapping edges onto edges; the penalty charges
//! every vertex skipped in between. Sweeping the penalty shows the switch.

use lawecse::{lawecse_rooted, LabeledTree, WeightScheme};

fn main() {
    let t = LabeledTree::parse("v u1 white\nv u2 white\ne u1 u2 |").unwrap();
    let t2 =
        LabeledTree::parse("v v1 white\nv v2 grey\nv v3 white\ne v1 v2 |\ne v2 v3 red|").unwrap();
    let base = WeightScheme::parse("vpair white white 1\nepair | | 3\nepair | red| -1").unwrap();
    let (a, b) = (t.root_at_index(0), t2.root_at_index(0));

    for p in [0.0, 0.3, 1.0, 2.0, f64::INFINITY] {
        let s = base.clone().with_penalty(p);
        match lawecse_rooted(&a, &b, &s) {
            Some(e) => {
                let pairs: Vec<_> = e.pairs.iter().map(|&(x, y)| (t.id(x), t2.id(y))).collect();
                println!("p = {p:<4} weight {:<5.2} {pairs:?}", e.weight);
            }
            None => println!("p = {p:<4} infeasible"),
        }
    }

    // with v2 white the edge u1u2 maps onto v1v2 for the edge bonus
    let white =
        LabeledTree::parse("v v1 white\nv v2 white\nv v3 white\ne v1 v2 |\ne v2 v3 red|").unwrap();
    let e = lawecse_rooted(&a, &white.root_at_index(0), &base.with_penalty(0.3)).unwrap();
    println!("v2 white: weight {}", e.weight);
}
