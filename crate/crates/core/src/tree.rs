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

//! Vertex- and edge-labeled trees, rooted views and directed contexts.
//!
//! Vertices are addressed by dense indices `0..n` assigned in declaration
//! order. Every neighbor list is sorted by index, so child lists of any
//! rooted view follow declaration order as well.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

/// Label used for edges declared without one.
pub const DEFAULT_EDGE_LABEL: &str = "-";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("line {line}: malformed line: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: duplicate vertex id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: unknown endpoint `{id}`")]
    UnknownEndpoint { line: usize, id: String },
    #[error("line {line}: self-loop on `{id}`")]
    SelfLoop { line: usize, id: String },
    #[error("line {line}: edge {a} - {b} closes a cycle")]
    Cycle { line: usize, a: String, b: String },
    #[error("tree is disconnected: {vertices} vertices but only {edges} edges")]
    Disconnected { vertices: usize, edges: usize },
    #[error("tree has no vertices")]
    Empty,
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
}

/// An undirected edge between two vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub label: String,
}

/// Immutable labeled tree.
#[derive(Debug, Clone)]
pub struct LabeledTree {
    ids: Vec<String>,
    labels: Vec<String>,
    edges: Vec<Edge>,
    /// Sorted by neighbor index; each entry is `(neighbor, edge index)`.
    adjacency: Vec<Vec<(usize, usize)>>,
    index: HashMap<String, usize>,
}

/// Incremental builder used by the parser and by generators.
#[derive(Debug, Default)]
pub struct TreeBuilder {
    ids: Vec<String>,
    labels: Vec<String>,
    edges: Vec<Edge>,
    index: HashMap<String, usize>,
    // union-find for cycle detection
    uf: Vec<usize>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.uf[x] != x {
            self.uf[x] = self.uf[self.uf[x]];
            x = self.uf[x];
        }
        x
    }

    /// Declares a vertex; `line` is only used for diagnostics.
    pub fn vertex(&mut self, id: &str, label: &str, line: usize) -> Result<usize, TreeError> {
        if self.index.contains_key(id) {
            return Err(TreeError::DuplicateId {
                line,
                id: id.to_string(),
            });
        }
        let idx = self.ids.len();
        self.ids.push(id.to_string());
        self.labels.push(label.to_string());
        self.index.insert(id.to_string(), idx);
        self.uf.push(idx);
        Ok(idx)
    }

    pub fn edge(&mut self, a: &str, b: &str, label: &str, line: usize) -> Result<(), TreeError> {
        let lookup = |id: &str| {
            self.index
                .get(id)
                .copied()
                .ok_or_else(|| TreeError::UnknownEndpoint {
                    line,
                    id: id.to_string(),
                })
        };
        let ia = lookup(a)?;
        let ib = lookup(b)?;
        if ia == ib {
            return Err(TreeError::SelfLoop {
                line,
                id: a.to_string(),
            });
        }
        let (ra, rb) = (self.find(ia), self.find(ib));
        if ra == rb {
            return Err(TreeError::Cycle {
                line,
                a: a.to_string(),
                b: b.to_string(),
            });
        }
        self.uf[ra] = rb;
        self.edges.push(Edge {
            a: ia,
            b: ib,
            label: label.to_string(),
        });
        Ok(())
    }

    pub fn build(self) -> Result<LabeledTree, TreeError> {
        let n = self.ids.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if self.edges.len() + 1 != n {
            return Err(TreeError::Disconnected {
                vertices: n,
                edges: self.edges.len(),
            });
        }
        let mut adjacency = vec![Vec::new(); n];
        for (k, e) in self.edges.iter().enumerate() {
            adjacency[e.a].push((e.b, k));
            adjacency[e.b].push((e.a, k));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(LabeledTree {
            ids: self.ids,
            labels: self.labels,
            edges: self.edges,
            adjacency,
            index: self.index,
        })
    }
}

impl LabeledTree {
    /// Parses the line-based tree format:
    ///
    /// ```text
    /// # comment
    /// v <id> <label>
    /// e <id1> <id2> [<label>]
    /// ```
    pub fn parse(text: &str) -> Result<Self, TreeError> {
        let mut builder = TreeBuilder::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            match fields.as_slice() {
                ["v", id, label] => {
                    builder.vertex(id, label, line)?;
                }
                ["e", a, b] => builder.edge(a, b, DEFAULT_EDGE_LABEL, line)?,
                ["e", a, b, label] => builder.edge(a, b, label, line)?,
                ["v", ..] => {
                    return Err(TreeError::Malformed {
                        line,
                        reason: "expected `v <id> <label>`".into(),
                    })
                }
                ["e", ..] => {
                    return Err(TreeError::Malformed {
                        line,
                        reason: "expected `e <id1> <id2> [<label>]`".into(),
                    })
                }
                [other, ..] => {
                    return Err(TreeError::Malformed {
                        line,
                        reason: format!("unknown record `{other}`"),
                    })
                }
                [] => unreachable!(),
            }
        }
        builder.build()
    }

    /// Writes the tree back in the format accepted by [`LabeledTree::parse`].
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (id, label) in self.ids.iter().zip(&self.labels) {
            let _ = writeln!(out, "v {id} {label}");
        }
        for e in &self.edges {
            let _ = writeln!(out, "e {} {} {}", self.ids[e.a], self.ids[e.b], e.label);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_label(&self, edge: usize) -> &str {
        &self.edges[edge].label
    }

    /// Index of the vertex declared with `id`.
    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `(neighbor, edge index)` pairs, sorted by neighbor.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    /// Edge index joining `a` and `b`, if adjacent.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency[a]
            .binary_search_by_key(&b, |&(n, _)| n)
            .ok()
            .map(|k| self.adjacency[a][k].1)
    }

    /// Vertices on the unique path from `a` to `b`, both ends included.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let view = self.root_at_index(a);
        let mut path = vec![b];
        let mut x = b;
        while x != a {
            x = view.parent(x);
            path.push(x);
        }
        path.reverse();
        path
    }

    pub fn root_at(&self, root: &str) -> Result<RootedView<'_>, TreeError> {
        let r = self
            .index_of(root)
            .ok_or_else(|| TreeError::UnknownVertex(root.to_string()))?;
        Ok(self.root_at_index(r))
    }

    /// Roots the tree at vertex index `root`.
    ///
    /// Panics if `root` is out of range.
    pub fn root_at_index(&self, root: usize) -> RootedView<'_> {
        assert!(root < self.len(), "root index out of range");
        let n = self.len();
        let mut parent = vec![usize::MAX; n];
        let mut parent_edge = vec![usize::MAX; n];
        let mut children = vec![Vec::new(); n];
        let mut preorder = Vec::with_capacity(n);
        parent[root] = root;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            preorder.push(v);
            for &(w, e) in &self.adjacency[v] {
                if w != parent[v] {
                    parent[w] = v;
                    parent_edge[w] = e;
                    children[v].push(w);
                }
            }
            // reversed so the smallest child is visited first
            stack.extend(children[v].iter().rev().copied());
        }
        let mut postorder = Vec::with_capacity(n);
        post_order(root, &children, &mut postorder);
        RootedView {
            tree: self,
            root,
            parent,
            parent_edge,
            children,
            preorder,
            postorder,
        }
    }

    /// All directed contexts: one `Parent(w)` per directed edge `w -> v`
    /// and one `Root` per vertex, grouped by vertex in index order.
    pub fn directed_contexts(&self) -> Vec<DirectedContext> {
        let mut out = Vec::with_capacity(2 * self.edges.len() + self.len());
        for v in 0..self.len() {
            for &(w, _) in &self.adjacency[v] {
                out.push(DirectedContext {
                    vertex: v,
                    orientation: Orientation::Parent(w),
                });
            }
            out.push(DirectedContext {
                vertex: v,
                orientation: Orientation::Root,
            });
        }
        out
    }
}

fn post_order(root: usize, children: &[Vec<usize>], out: &mut Vec<usize>) {
    // (vertex, next child position)
    let mut stack = vec![(root, 0usize)];
    while let Some(top) = stack.last_mut() {
        let (v, k) = *top;
        if k < children[v].len() {
            top.1 += 1;
            stack.push((children[v][k], 0));
        } else {
            out.push(v);
            stack.pop();
        }
    }
}

/// A tree with a chosen root.
#[derive(Debug, Clone)]
pub struct RootedView<'a> {
    tree: &'a LabeledTree,
    root: usize,
    parent: Vec<usize>,
    parent_edge: Vec<usize>,
    children: Vec<Vec<usize>>,
    preorder: Vec<usize>,
    postorder: Vec<usize>,
}

impl<'a> RootedView<'a> {
    pub fn tree(&self) -> &'a LabeledTree {
        self.tree
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Parent of `v`; the root is its own parent.
    pub fn parent(&self, v: usize) -> usize {
        self.parent[v]
    }

    /// Edge index from `v` to its parent. Undefined for the root.
    pub fn parent_edge(&self, v: usize) -> Option<usize> {
        (v != self.root).then(|| self.parent_edge[v])
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    /// Children always precede their parent.
    pub fn postorder(&self) -> &[usize] {
        &self.postorder
    }

    /// Depth-first preorder, smallest child first.
    pub fn preorder(&self) -> &[usize] {
        &self.preorder
    }

    /// True if `a` is an ancestor of `d` or equal to it.
    pub fn is_ancestor_or_self(&self, a: usize, mut d: usize) -> bool {
        loop {
            if d == a {
                return true;
            }
            if d == self.root {
                return false;
            }
            d = self.parent[d];
        }
    }

    /// Number of edges from the root.
    pub fn depth(&self, mut v: usize) -> usize {
        let mut d = 0;
        while v != self.root {
            v = self.parent[v];
            d += 1;
        }
        d
    }

    /// The child of `a` whose subtree contains the proper descendant `d`.
    pub fn child_towards(&self, a: usize, mut d: usize) -> Option<usize> {
        while d != self.root {
            let p = self.parent[d];
            if p == a {
                return Some(d);
            }
            d = p;
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    /// The neighbor `w` is the parent; identifies the rooted subtree below `v`
    /// that every root outside it sees.
    Parent(usize),
    Root,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DirectedContext {
    pub vertex: usize,
    pub orientation: Orientation,
}

impl DirectedContext {
    /// Children of the context vertex under this orientation, in index order.
    pub fn children<'t>(&self, tree: &'t LabeledTree) -> impl Iterator<Item = usize> + 't {
        let skip = match self.orientation {
            Orientation::Parent(w) => Some(w),
            Orientation::Root => None,
        };
        tree.neighbors(self.vertex)
            .iter()
            .map(|&(w, _)| w)
            .filter(move |&w| Some(w) != skip)
    }
}
