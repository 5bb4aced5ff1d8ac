//! Longest-path decomposition and its extension into ladders.
//!
//! The decomposition partitions the vertices into root-ward paths: each
//! non-leaf keeps the edge to one child of maximum leaf-distance, and
//! removing every other child edge leaves a forest of paths. Each path is
//! then extended upward through the ancestors of its top vertex until its
//! vertex count doubles or the root is reached. Base paths partition the
//! tree; the extended ladders may overlap in the appended ancestors.
//!
//! Every array is stored from its deepest node toward the root, so the
//! position of a node `y` inside a ladder with deepest node `z` is
//! `depth(z) - depth(y)`.

use crate::tree::{RootedTree, UNDEF};

/// One path of the longest-path decomposition: its deepest node and its
/// vertex count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathSpec {
    pub deepest: u32,
    pub len: u32,
}

/// The longest-path decomposition of a tree.
#[derive(Debug, Clone)]
pub struct LongestPathDecomposition {
    /// Max distance from each node down to a leaf in its subtree.
    down: Vec<u32>,
    paths: Vec<PathSpec>,
    /// Index into `paths` for every node.
    path_of: Vec<u32>,
}

impl LongestPathDecomposition {
    pub fn down(&self, v: usize) -> usize {
        self.down[v] as usize
    }

    pub fn paths(&self) -> &[PathSpec] {
        &self.paths
    }

    pub fn path_of(&self, v: usize) -> usize {
        self.path_of[v] as usize
    }
}

/// Break the tree into vertex-disjoint longest paths.
///
/// Ties among children with equal leaf-distance go to the smallest child
/// id, so the decomposition is deterministic.
pub fn longest_path_decomposition(tree: &RootedTree) -> LongestPathDecomposition {
    let n = tree.len();
    let mut down = vec![0u32; n];
    for &v in tree.bfs_order().iter().rev() {
        let v = v as usize;
        if let Some(p) = tree.parent(v) {
            down[p] = down[p].max(down[v] + 1);
        }
    }

    // Kept child per node: scanning ids in ascending order makes the
    // smallest qualifying child win.
    let mut keep = vec![UNDEF; n];
    for v in 0..n {
        if let Some(p) = tree.parent(v) {
            if keep[p] == UNDEF && down[v] + 1 == down[p] {
                keep[p] = v as u32;
            }
        }
    }

    // Path heads are the root and every child that was not kept.
    let mut paths = Vec::new();
    let mut path_of = vec![UNDEF; n];
    for head in 0..n {
        let is_head = match tree.parent(head) {
            None => true,
            Some(p) => keep[p] != head as u32,
        };
        if !is_head {
            continue;
        }
        let index = paths.len() as u32;
        let mut len = 0u32;
        let mut v = head;
        loop {
            path_of[v] = index;
            len += 1;
            if keep[v] == UNDEF {
                break;
            }
            v = keep[v] as usize;
        }
        paths.push(PathSpec {
            deepest: v as u32,
            len,
        });
    }
    LongestPathDecomposition {
        down,
        paths,
        path_of,
    }
}

/// Ladders: each decomposition path doubled upward, plus per-node
/// pointers to the ladder of the path containing the node.
#[derive(Debug, Clone)]
pub struct LadderDecomposition {
    /// Flat storage; ladder `i` is `nodes[offsets[i]..offsets[i+1]]`,
    /// deepest node first.
    offsets: Vec<u32>,
    nodes: Vec<u32>,
    deepest: Vec<u32>,
    deepest_depth: Vec<u32>,
    /// Base-ladder index per node. Appended ancestors keep the pointer of
    /// their own decomposition path.
    base: Vec<u32>,
}

impl LadderDecomposition {
    pub fn num_ladders(&self) -> usize {
        self.deepest.len()
    }

    pub fn ladder(&self, i: usize) -> &[u32] {
        &self.nodes[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    pub fn deepest(&self, i: usize) -> usize {
        self.deepest[i] as usize
    }

    pub fn deepest_depth(&self, i: usize) -> usize {
        self.deepest_depth[i] as usize
    }

    /// Index of the base ladder of `v`.
    pub fn base_ladder(&self, v: usize) -> usize {
        self.base[v] as usize
    }

    /// Position of a node of depth `depth` inside ladder `i`, counted
    /// from the deepest node. Valid only for nodes the ladder contains.
    pub fn position_of_depth(&self, i: usize, depth: usize) -> usize {
        self.deepest_depth(i) - depth
    }

    pub fn total_len(&self) -> usize {
        self.nodes.len()
    }
}

/// Extend every decomposition path `(v, len)` to `(v, min(2 len,
/// depth(v) + 1))` by walking ancestors of its top vertex.
pub fn extend_to_ladders(
    lpd: &LongestPathDecomposition,
    tree: &RootedTree,
) -> LadderDecomposition {
    let paths = lpd.paths();
    let mut offsets = Vec::with_capacity(paths.len() + 1);
    let mut nodes = Vec::new();
    let mut deepest = Vec::with_capacity(paths.len());
    let mut deepest_depth = Vec::with_capacity(paths.len());
    offsets.push(0u32);
    for spec in paths {
        let z = spec.deepest as usize;
        let target = (2 * spec.len as usize).min(tree.depth(z) + 1);
        let mut v = z;
        for step in 0..target {
            nodes.push(v as u32);
            if step + 1 < target {
                v = tree.parent(v).expect("ladder length capped at depth+1");
            }
        }
        offsets.push(nodes.len() as u32);
        deepest.push(z as u32);
        deepest_depth.push(tree.depth(z) as u32);
    }
    let base = (0..tree.len()).map(|v| lpd.path_of(v) as u32).collect();
    LadderDecomposition {
        offsets,
        nodes,
        deepest,
        deepest_depth,
        base,
    }
}
