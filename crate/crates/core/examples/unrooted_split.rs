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

//! Rooting the first tree at `r` misses the best embedding; the unrooted
//! solver finds it by joining two children of a skipped vertex.

use lawecse::{lawecse_rooted, lawecse_unrooted, LabeledTree, WeightScheme};

fn main() {
    let t = LabeledTree::parse(
        "v r white\nv u yellow\nv u2 yellow\nv u3 red\nv u0 red\n\
         e r u |\ne u u2 |\ne u2 u3 |\ne u u0 |",
    )
    .unwrap();
    let t2 = LabeledTree::parse(
        "v v white\nv v0 white\nv v1 white\nv x1 white\nv x2 white\n\
         e v v0 |\ne v0 v1 |\ne v0 x1 |\ne v0 x2 |",
    )
    .unwrap();
    let scheme =
        WeightScheme::parse("vdefault 1\nvpair yellow white -5\nvpair red white 2\npenalty 0.2")
            .unwrap();

    let show = |label: &str, e: &lawecse::Embedding| {
        let pairs: Vec<_> = e.pairs.iter().map(|&(a, b)| (t.id(a), t2.id(b))).collect();
        let skipped: Vec<_> = e.skipped1.iter().map(|&a| t.id(a)).collect();
        println!("{label}: {:.1} {pairs:?} skipping {skipped:?}", e.weight);
    };

    let rooted = lawecse_rooted(&t.root_at("r").unwrap(), &t2.root_at("v").unwrap(), &scheme);
    show("rooted at r and v", &rooted.unwrap());
    show("unrooted", &lawecse_unrooted(&t, &t2, &scheme).unwrap());
}
