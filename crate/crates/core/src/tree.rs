//! Rooted-tree model, ingestion and validation, and the edge-to-node
//! weight reinterpretation.
//!
//! Input edges are undirected; orientation is derived by traversal from
//! the declared root. Every non-root node then represents the edge to its
//! parent, so an edge-minimum query from `v` to an ancestor `u` becomes a
//! node-minimum query on the half-open path `[v, u)`.

use crate::oracle::IntWeightOracle;
use thiserror::Error;

pub(crate) const UNDEF: u32 = u32::MAX;

/// Validation errors for edge-list ingestion.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("node {node} out of range for n = {n}")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge between {0} and {1}")]
    DuplicateEdge(usize, usize),
    #[error("edge list contains a cycle")]
    Cycle,
    #[error("input is disconnected: reached {reached} of {n} nodes from the root")]
    Disconnected { reached: usize, n: usize },
    #[error("expected {expected} edges for n = {n}, got {got}")]
    WrongEdgeCount { expected: usize, n: usize, got: usize },
    #[error("n must be at least 1")]
    Empty,
}

/// Precondition errors for per-node path operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("unknown node {node} (n = {n})")]
    UnknownNode { node: usize, n: usize },
    #[error("hop count {l} exceeds depth {depth} of node {v}")]
    HopOutOfRange { v: usize, l: usize, depth: usize },
    #[error("node {0} is the root")]
    RootNotAllowed(usize),
}

/// Errors while reading the text tree/query formats.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{0}")]
    Tree(#[from] TreeError),
}

/// Immutable rooted tree over dense node identifiers `0..n`.
///
/// `depth(root) = 0`; the height is the maximum depth. Children of each
/// node are kept in ascending id order so that every decomposition built
/// on top is deterministic.
#[derive(Debug, Clone)]
pub struct RootedTree {
    root: usize,
    parent: Vec<u32>,
    depth: Vec<u32>,
    height: u32,
    child_offsets: Vec<u32>,
    child_list: Vec<u32>,
    bfs_order: Vec<u32>,
}

impl RootedTree {
    /// Build from oriented parent links: `parents[v]` is the parent of
    /// `v`, and `parents[root]` is ignored. Links must be acyclic.
    pub fn from_parents(root: usize, parents: &[usize]) -> Result<Self, TreeError> {
        let n = parents.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if root >= n {
            return Err(TreeError::NodeOutOfRange { node: root, n });
        }
        for (v, &p) in parents.iter().enumerate() {
            if v != root && p >= n {
                return Err(TreeError::NodeOutOfRange { node: p, n });
            }
            if v != root && p == v {
                return Err(TreeError::SelfLoop(v));
            }
        }

        // Children in ascending id order by construction.
        let mut counts = vec![0u32; n + 1];
        for (v, &p) in parents.iter().enumerate() {
            if v != root {
                counts[p + 1] += 1;
            }
        }
        let mut child_offsets = vec![0u32; n + 1];
        for i in 0..n {
            child_offsets[i + 1] = child_offsets[i] + counts[i + 1];
        }
        let mut cursor = child_offsets.clone();
        let mut child_list = vec![0u32; n - 1];
        for (v, &p) in parents.iter().enumerate() {
            if v != root {
                child_list[cursor[p] as usize] = v as u32;
                cursor[p] += 1;
            }
        }

        // BFS from the root assigns depths and detects unreachable nodes
        // (which is how a parent-link cycle manifests).
        let mut depth = vec![UNDEF; n];
        let mut bfs_order = Vec::with_capacity(n);
        depth[root] = 0;
        bfs_order.push(root as u32);
        let mut head = 0;
        while head < bfs_order.len() {
            let v = bfs_order[head] as usize;
            head += 1;
            let lo = child_offsets[v] as usize;
            let hi = child_offsets[v + 1] as usize;
            for &c in &child_list[lo..hi] {
                depth[c as usize] = depth[v] + 1;
                bfs_order.push(c);
            }
        }
        if bfs_order.len() != n {
            return Err(TreeError::Cycle);
        }
        let height = depth.iter().copied().max().unwrap_or(0);
        let parent = parents
            .iter()
            .enumerate()
            .map(|(v, &p)| if v == root { v as u32 } else { p as u32 })
            .collect();
        Ok(Self {
            root,
            parent,
            depth,
            height,
            child_offsets,
            child_list,
            bfs_order,
        })
    }

    /// Build from an undirected edge list on nodes `0..n`, orienting away
    /// from `root`.
    pub fn from_edges(n: usize, root: usize, edges: &[(usize, usize)]) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if root >= n {
            return Err(TreeError::NodeOutOfRange { node: root, n });
        }
        if edges.len() != n - 1 {
            return Err(TreeError::WrongEdgeCount {
                expected: n - 1,
                n,
                got: edges.len(),
            });
        }
        let mut adj_heads = vec![UNDEF; n];
        // Forward-star adjacency: (next, endpoint) per half-edge.
        let mut half_edges: Vec<(u32, u32)> = Vec::with_capacity(2 * edges.len());
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n {
                return Err(TreeError::NodeOutOfRange { node: u, n });
            }
            if v >= n {
                return Err(TreeError::NodeOutOfRange { node: v, n });
            }
            if u == v {
                return Err(TreeError::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(TreeError::DuplicateEdge(u, v));
            }
            half_edges.push((adj_heads[u], v as u32));
            adj_heads[u] = (half_edges.len() - 1) as u32;
            half_edges.push((adj_heads[v], u as u32));
            adj_heads[v] = (half_edges.len() - 1) as u32;
        }

        // BFS orientation from the root.
        let mut parents = vec![0usize; n];
        let mut visited = vec![false; n];
        let mut queue = Vec::with_capacity(n);
        visited[root] = true;
        queue.push(root);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            let mut e = adj_heads[v];
            while e != UNDEF {
                let (next, to) = half_edges[e as usize];
                let to = to as usize;
                if !visited[to] {
                    visited[to] = true;
                    parents[to] = v;
                    queue.push(to);
                } else if v == root || to != parents[v] {
                    // An edge back to an already-visited node other than
                    // our BFS parent closes a cycle. Duplicate edges were
                    // rejected above, so the parent edge is seen at most
                    // once in each direction.
                    return Err(TreeError::Cycle);
                }
                e = next;
            }
        }
        let reached = queue.len();
        if reached != n {
            return Err(TreeError::Disconnected { reached, n });
        }
        Self::from_parents(root, &parents)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty() // never true: a tree has at least its root
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn is_root(&self, v: usize) -> bool {
        v == self.root
    }

    /// Parent of `v`, or `None` for the root.
    pub fn parent(&self, v: usize) -> Option<usize> {
        if v == self.root {
            None
        } else {
            Some(self.parent[v] as usize)
        }
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v] as usize
    }

    pub fn height(&self) -> usize {
        self.height as usize
    }

    pub fn children(&self, v: usize) -> &[u32] {
        let lo = self.child_offsets[v] as usize;
        let hi = self.child_offsets[v + 1] as usize;
        &self.child_list[lo..hi]
    }

    /// Nodes in BFS order from the root; every parent precedes its children.
    pub fn bfs_order(&self) -> &[u32] {
        &self.bfs_order
    }

    pub(crate) fn parent_raw(&self, v: usize) -> u32 {
        if v == self.root {
            UNDEF
        } else {
            self.parent[v]
        }
    }

    /// Ancestor of `v` at distance `dist`, by walking parent links.
    pub fn ancestor_at(&self, v: usize, dist: usize) -> Result<usize, QueryError> {
        self.check_hops(v, dist)?;
        let mut x = v;
        for _ in 0..dist {
            x = self.parent[x] as usize;
        }
        Ok(x)
    }

    /// The half-open path `[v, pre_l(v))`: `v`, its parent, and so on for
    /// `l` nodes, excluding the ancestor endpoint. Empty when `l = 0`.
    pub fn half_open_path(&self, v: usize, l: usize) -> Result<Vec<usize>, QueryError> {
        self.check_hops(v, l)?;
        let mut path = Vec::with_capacity(l);
        let mut x = v;
        for _ in 0..l {
            path.push(x);
            x = self.parent[x] as usize;
        }
        Ok(path)
    }

    pub(crate) fn check_hops(&self, v: usize, l: usize) -> Result<(), QueryError> {
        let n = self.len();
        if v >= n {
            return Err(QueryError::UnknownNode { node: v, n });
        }
        let depth = self.depth(v);
        if l > depth {
            return Err(QueryError::HopOutOfRange { v, l, depth });
        }
        Ok(())
    }
}

/// Ingest an undirected weighted edge list, returning the oriented tree
/// plus the integer oracle in node-weighted form: the value of node `v`
/// is the weight of the edge `(parent(v), v)`.
pub fn build_tree(
    n: usize,
    root: usize,
    edges: &[(usize, usize, i64)],
) -> Result<(RootedTree, IntWeightOracle), TreeError> {
    let bare: Vec<(usize, usize)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
    let tree = RootedTree::from_edges(n, root, &bare)?;
    let mut weights = vec![0i64; n];
    for &(u, v, w) in edges {
        // One endpoint is the parent of the other after orientation.
        let child = if tree.parent(v) == Some(u) { v } else { u };
        weights[child] = w;
    }
    Ok((tree, IntWeightOracle::new(root, weights)))
}

/// Parse the text tree format:
///
/// ```text
/// # comment
/// n root
/// u v w        (n-1 undirected weighted edges)
/// ```
pub fn parse_tree(text: &str) -> Result<(RootedTree, IntWeightOracle), ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize, i64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |msg: String| ParseError::Line { line: line_no, msg };
        if header.is_none() {
            if fields.len() != 2 {
                return Err(bad(format!("expected `n root`, got {line:?}")));
            }
            let n = fields[0]
                .parse::<usize>()
                .map_err(|e| bad(format!("bad node count {:?}: {e}", fields[0])))?;
            let root = fields[1]
                .parse::<usize>()
                .map_err(|e| bad(format!("bad root {:?}: {e}", fields[1])))?;
            header = Some((n, root));
        } else {
            if fields.len() != 3 {
                return Err(bad(format!("expected `u v w`, got {line:?}")));
            }
            let u = fields[0]
                .parse::<usize>()
                .map_err(|e| bad(format!("bad endpoint {:?}: {e}", fields[0])))?;
            let v = fields[1]
                .parse::<usize>()
                .map_err(|e| bad(format!("bad endpoint {:?}: {e}", fields[1])))?;
            let w = fields[2]
                .parse::<i64>()
                .map_err(|e| bad(format!("bad weight {:?}: {e}", fields[2])))?;
            edges.push((u, v, w));
        }
    }
    let (n, root) = header.ok_or(ParseError::Line {
        line: text.lines().count() + 1,
        msg: "missing `n root` header".into(),
    })?;
    Ok(build_tree(n, root, &edges)?)
}

/// Render a tree plus node weights in the text format accepted by
/// [`parse_tree`]. Edges are listed parent-first in ascending child order.
pub fn format_tree(tree: &RootedTree, oracle: &IntWeightOracle) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", tree.len(), tree.root());
    for v in 0..tree.len() {
        if let Some(p) = tree.parent(v) {
            let _ = writeln!(out, "{} {} {}", p, v, oracle.weight(v));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{CompOrder, WeightOracle};

    /// Fixture used throughout the crate's tests.
    pub(crate) fn t1() -> (RootedTree, IntWeightOracle) {
        build_tree(
            7,
            0,
            &[(0, 1, 5), (1, 2, 3), (2, 3, 4), (3, 4, 1), (1, 5, 2), (5, 6, 6)],
        )
        .unwrap()
    }

    #[test]
    fn single_edge() {
        let (tree, _) = build_tree(2, 0, &[(0, 1, 5)]).unwrap();
        assert_eq!(tree.len(), 2);
        assert_eq!(tree.depth(1), 1);
        assert_eq!(tree.height(), 1);
        assert_eq!(tree.parent(1), Some(0));
        assert_eq!(tree.parent(0), None);
    }

    #[test]
    fn t1_depths_and_height() {
        let (tree, oracle) = t1();
        let depths: Vec<usize> = (0..7).map(|v| tree.depth(v)).collect();
        assert_eq!(depths, vec![0, 1, 2, 3, 4, 2, 3]);
        assert_eq!(tree.height(), 4);
        assert_eq!(oracle.weight(4), 1);
        assert_eq!(oracle.weight(6), 6);
    }

    #[test]
    fn orientation_is_derived_not_assumed() {
        // Same tree with edges written child-first.
        let (tree, oracle) = build_tree(3, 2, &[(1, 2, 10), (0, 1, 20)]).unwrap();
        assert_eq!(tree.parent(1), Some(2));
        assert_eq!(tree.parent(0), Some(1));
        assert_eq!(oracle.weight(1), 10);
        assert_eq!(oracle.weight(0), 20);
    }

    #[test]
    fn validation_errors_are_distinct() {
        assert_eq!(
            build_tree(2, 0, &[(0, 1, 1), (1, 0, 2)]).unwrap_err(),
            TreeError::WrongEdgeCount { expected: 1, n: 2, got: 2 }
        );
        assert_eq!(
            build_tree(3, 0, &[(0, 1, 1), (1, 0, 2)]).unwrap_err(),
            TreeError::DuplicateEdge(1, 0)
        );
        assert_eq!(
            build_tree(4, 0, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap_err(),
            TreeError::Cycle
        );
        assert!(build_tree(4, 0, &[(0, 1, 1), (1, 2, 1), (1, 3, 1)]).is_ok());
        assert_eq!(
            build_tree(4, 0, &[(0, 1, 1), (2, 3, 1), (2, 3, 2)]).unwrap_err(),
            TreeError::DuplicateEdge(2, 3)
        );
        assert_eq!(
            build_tree(5, 0, &[(0, 1, 1), (1, 2, 1), (3, 4, 1), (3, 4, 2)]).unwrap_err(),
            TreeError::DuplicateEdge(3, 4)
        );
        assert_eq!(
            build_tree(3, 0, &[(0, 1, 1), (0, 5, 1)]).unwrap_err(),
            TreeError::NodeOutOfRange { node: 5, n: 3 }
        );
        assert_eq!(
            build_tree(2, 0, &[(1, 1, 1)]).unwrap_err(),
            TreeError::SelfLoop(1)
        );
    }

    #[test]
    fn disconnected_input() {
        // Cycle in a component away from the root: BFS simply never
        // reaches it.
        assert_eq!(
            RootedTree::from_edges(4, 0, &[(1, 2), (2, 3), (3, 1)]).unwrap_err(),
            TreeError::Disconnected { reached: 1, n: 4 }
        );
        // Cycle in the root's own component is reported as such.
        assert_eq!(
            RootedTree::from_edges(4, 0, &[(0, 1), (1, 2), (0, 2)]).unwrap_err(),
            TreeError::Cycle
        );
    }

    #[test]
    fn single_node_tree() {
        let (tree, _) = build_tree(1, 0, &[]).unwrap();
        assert_eq!(tree.len(), 1);
        assert_eq!(tree.height(), 0);
        assert_eq!(tree.half_open_path(0, 0).unwrap(), Vec::<usize>::new());
        assert!(matches!(
            tree.half_open_path(0, 1),
            Err(QueryError::HopOutOfRange { .. })
        ));
    }

    #[test]
    fn half_open_paths() {
        let (tree, _) = t1();
        assert_eq!(tree.half_open_path(4, 0).unwrap(), Vec::<usize>::new());
        assert_eq!(tree.half_open_path(4, 3).unwrap(), vec![4, 3, 2]);
        assert_eq!(tree.half_open_path(6, 3).unwrap(), vec![6, 5, 1]);
        assert!(matches!(
            tree.half_open_path(4, 5),
            Err(QueryError::HopOutOfRange { v: 4, l: 5, depth: 4 })
        ));
        assert!(matches!(
            tree.half_open_path(9, 0),
            Err(QueryError::UnknownNode { node: 9, n: 7 })
        ));
    }

    #[test]
    fn half_open_path_length_and_endpoint() {
        let (tree, _) = t1();
        for v in 0..tree.len() {
            for l in 0..=tree.depth(v) {
                let path = tree.half_open_path(v, l).unwrap();
                assert_eq!(path.len(), l);
                if l > 0 {
                    let last = *path.last().unwrap();
                    assert_eq!(tree.parent(last), Some(tree.ancestor_at(v, l).unwrap()));
                }
            }
        }
    }

    #[test]
    fn node_weights_reproduce_edge_weights() {
        let (tree, oracle) = t1();
        // Comparing nodes agrees with comparing the weights of their
        // parent edges, for all non-root pairs.
        for a in 1..tree.len() {
            for b in 1..tree.len() {
                if a == b {
                    continue;
                }
                assert_eq!(oracle.less(a, b), oracle.weight(a) < oracle.weight(b));
            }
        }
        let comp = CompOrder::new(&oracle, tree.root());
        assert!(comp.precedes(4, 3)); // weight 1 vs 4
    }

    #[test]
    fn children_are_ascending() {
        let (tree, _) = t1();
        assert_eq!(tree.children(1), &[2, 5]);
        assert_eq!(tree.children(0), &[1]);
        assert!(tree.children(4).is_empty());
    }

    #[test]
    fn parse_and_format_round_trip() {
        let (tree, oracle) = t1();
        let text = format_tree(&tree, &oracle);
        let (tree2, oracle2) = parse_tree(&text).unwrap();
        assert_eq!(tree2.len(), tree.len());
        for v in 0..tree.len() {
            assert_eq!(tree2.parent(v), tree.parent(v));
            if v != tree.root() {
                assert_eq!(oracle2.weight(v), oracle.weight(v));
            }
        }
    }

    #[test]
    fn parse_rejects_garbage_with_line_numbers() {
        let err = parse_tree("2 0\n0 x 1\n").unwrap_err();
        match err {
            ParseError::Line { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_tree("# only a comment\n").unwrap_err();
        assert!(matches!(err, ParseError::Line { .. }));
    }

    #[test]
    fn parse_skips_comments_and_blank_lines() {
        let (tree, oracle) =
            parse_tree("# header\n\n2 0\n# edge below\n0 1 -7\n").unwrap();
        assert_eq!(tree.len(), 2);
        assert_eq!(oracle.weight(1), -7);
    }
}
