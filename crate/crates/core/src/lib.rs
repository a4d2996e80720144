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

//! Largest weight common subtree embeddings between labeled trees.
//!
//! A common subtree embedding maps a tree `S` topologically into two trees:
//! edges of `S` become paths whose inner vertices are skipped. Its weight is
//! the sum of label-pair weights of mapped vertices, plus edge-pair weights
//! for edges mapped onto single edges, minus a penalty per skipped vertex.
//!
//! ```
//! use lawecse::{lawecse_unrooted, LabeledTree, WeightScheme};
//!
//! let t1 = LabeledTree::parse("v a C\nv b O\nv c N\ne a b\ne b c").unwrap();
//! let t2 = LabeledTree::parse("v x C\nv y N\ne x y").unwrap();
//! let scheme = WeightScheme::parse("vpair C C 1\nvpair N N 1\npenalty 0.5").unwrap();
//! let emb = lawecse_unrooted(&t1, &t2, &scheme).unwrap();
//! assert_eq!(emb.weight, 1.5);
//! ```

pub mod cli;
pub mod embedding;
pub mod generate;
pub mod matching;
pub mod oracle;
pub mod rooted;
pub mod tree;
pub mod unrooted;
pub mod weights;

pub use embedding::{Embedding, EntryType, TracebackError};
pub use matching::{
    best_cardinality_two, solve_all_deletions, solve_mwm, DeletionFamily, Matching,
    MatchingInstance, Side,
};
pub use oracle::{
    is_valid_embedding, max_common_subtree_size, oracle_best, weight_of_embedding, OracleMode,
};
pub use rooted::{compute_tables, lawecse_rooted, root_to_root, DpTable};
pub use tree::{DirectedContext, LabeledTree, Orientation, RootedView, TreeError};
pub use unrooted::{
    compute_all_context_tables, lawecse_unrooted, lawecse_unrooted_with_root, naive_unrooted,
    ContextTable, LeaveOneOutMax, SolveStats,
};
pub use weights::{WeightScheme, WeightsError};
