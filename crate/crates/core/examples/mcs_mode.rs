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

//! An infinite penalty with unit weights for equal labels turns the problem
//! into maximum common subtree.

use lawecse::generate::mcs_scheme;
use lawecse::{lawecse_unrooted, max_common_subtree_size, LabeledTree};

fn main() {
    // the second skeleton has an extra S between O and C
    let chain = LabeledTree::parse(
        "v c1 C\nv c2 C\nv o1 O\nv c3 C\nv n1 N\ne c1 c2\ne c2 o1\ne o1 c3\ne c3 n1",
    )
    .unwrap();
    let branched = LabeledTree::parse(
        "v a C\nv b C\nv c O\nv g S\nv d C\nv e N\nv f C\ne a b\ne b c\ne b f\ne c g\ne g d\ne d e",
    )
    .unwrap();
    let scheme = mcs_scheme(&["C", "N", "O"]);
    let e = lawecse_unrooted(&chain, &branched, &scheme).unwrap();
    let pairs: Vec<_> = e
        .sorted_pairs()
        .into_iter()
        .map(|(a, b)| (chain.id(a), branched.id(b)))
        .collect();
    println!("common subtree of {} vertices: {pairs:?}", e.weight);
    println!(
        "brute force: {}",
        max_common_subtree_size(&chain, &branched)
    );

    let with_skips = scheme.with_penalty(0.0);
    let e = lawecse_unrooted(&chain, &branched, &with_skips).unwrap();
    println!("with free skips: {} mapped vertices", e.weight);
}
