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

//! Loads trees and a weight scheme from the bundled data files and prints the
//! rooted views.

use std::path::PathBuf;

use lawecse::{LabeledTree, WeightScheme};

fn main() -> anyhow::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let t = LabeledTree::parse(&std::fs::read_to_string(dir.join("split_t1.tree"))?)?;
    let scheme = WeightScheme::parse(&std::fs::read_to_string(dir.join("split.weights"))?)?;

    for root in ["r", "u0"] {
        let view = t.root_at(root)?;
        println!("rooted at {root}:");
        for &v in view.preorder() {
            let kids: Vec<&str> = view.children(v).iter().map(|&c| t.id(c)).collect();
            println!(
                "  {:<3} depth {} children {:?}",
                t.id(v),
                view.depth(v),
                kids
            );
        }
    }
    println!("directed contexts: {}", t.directed_contexts().len());
    println!("w(red, white) = {}", scheme.vertex_weight("red", "white"));
    println!("penalty = {}", scheme.penalty());

    match LabeledTree::parse("v a A\nv b B\ne a b\ne b a") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
