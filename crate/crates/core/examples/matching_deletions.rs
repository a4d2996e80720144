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

//! Maximum weight matching and the optimum after deleting each vertex, from
//! one solve.

use lawecse::{solve_all_deletions, solve_mwm, MatchingInstance, Side};

fn main() {
    let ni = f64::NEG_INFINITY;
    // rows s1 s2, columns r1 t2 r3
    let g = MatchingInstance::from_rows(&[vec![1.0, 4.0, 3.0], vec![ni, 2.0, 1.0]]);
    let m = solve_mwm(&g);
    println!("matching {:?} weight {}", m.pairs, m.weight);

    for (side, names) in [
        (Side::Right, ["r1", "t2", "r3"].as_slice()),
        (Side::Left, &["s1", "s2"]),
    ] {
        let fam = solve_all_deletions(&g, side);
        for (c, name) in names.iter().enumerate() {
            let direct = solve_mwm(&g.without(side, c)).weight;
            println!(
                "without {name}: {} (from scratch {direct})",
                fam.weight_without(c)
            );
        }
    }
}
