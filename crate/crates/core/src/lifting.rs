//! Binary lifting with half-open ancestor-block minima, and the
//! nearest-lower-ancestor data computed from it.
//!
//! `up[k][v]` is the `2^k`-th ancestor of `v` and `min_block[k][v]` the
//! total-order minimum of the half-open block `[v, up[k][v])`, chosen by
//! comp calls during preprocessing. The two entries for a `(k, v)` pair
//! are stored side by side so a query fetches both with one lookup.

use crate::oracle::CompOrder;
use crate::tree::{RootedTree, UNDEF};

const INF: u32 = u32::MAX;

/// Per-level ancestor jumps plus block minima.
#[derive(Debug, Clone)]
pub struct LiftingTables {
    n: usize,
    levels: usize,
    /// Level-major, stride `n`; `[0]` is the ancestor, `[1]` the block
    /// minimum. Entries where the jump exits the tree hold `UNDEF` and
    /// are never consulted by queries.
    entries: Vec<[u32; 2]>,
}

impl LiftingTables {
    /// Number of levels: `⌊log2 h⌋ + 1`, with a single level for trees of
    /// height at most one.
    pub fn levels(&self) -> usize {
        self.levels
    }

    /// `2^k`-th ancestor of `v`, if the jump stays inside the tree.
    pub fn up(&self, k: usize, v: usize) -> Option<usize> {
        match self.entries[k * self.n + v][0] {
            UNDEF => None,
            p => Some(p as usize),
        }
    }

    /// Minimum node on `[v, pre_{2^k}(v))`, defined when that ancestor
    /// exists.
    pub fn min_block(&self, k: usize, v: usize) -> Option<usize> {
        match self.entries[k * self.n + v][1] {
            UNDEF => None,
            m => Some(m as usize),
        }
    }

    #[inline]
    pub(crate) fn entry(&self, k: usize, v: usize) -> [u32; 2] {
        self.entries[k * self.n + v]
    }

    pub(crate) fn entries_raw(&self) -> &[[u32; 2]] {
        &self.entries
    }

    /// Test hook: overwrite one stored block minimum.
    pub(crate) fn corrupt_entry(&mut self, k: usize, v: usize, min: u32) {
        self.entries[k * self.n + v][1] = min;
    }
}

/// Nearest strictly-lower proper ancestor of every node: its distance
/// (`None` when no such ancestor exists) and its identity.
#[derive(Debug, Clone)]
pub struct LowerAncestorData {
    lower_dist: Vec<u32>,
    lower_parent: Vec<u32>,
}

impl LowerAncestorData {
    pub fn lower_dist(&self, v: usize) -> Option<usize> {
        match self.lower_dist[v] {
            INF => None,
            d => Some(d as usize),
        }
    }

    pub fn lower_parent(&self, v: usize) -> Option<usize> {
        match self.lower_parent[v] {
            UNDEF => None,
            p => Some(p as usize),
        }
    }

    /// Distance with infinity encoded as `u32::MAX`, strictly greater
    /// than any depth.
    #[inline]
    pub(crate) fn dist_raw(&self, v: usize) -> u32 {
        self.lower_dist[v]
    }

    pub(crate) fn raw(&self) -> (&[u32], &[u32]) {
        (&self.lower_dist, &self.lower_parent)
    }
}

/// Fill the lifting tables bottom-up, spending at most
/// `n * (⌊log2 h⌋ + 1)` comp calls.
pub fn build_lifting(tree: &RootedTree, comp: &CompOrder<'_>) -> LiftingTables {
    let n = tree.len();
    let h = tree.height();
    let levels = if h <= 1 { 1 } else { h.ilog2() as usize + 1 };
    let mut entries = vec![[UNDEF, UNDEF]; levels * n];
    for (v, entry) in entries[..n].iter_mut().enumerate() {
        *entry = [tree.parent_raw(v), v as u32];
    }
    for k in 1..levels {
        let jump = 1usize << k;
        for v in 0..n {
            if tree.depth(v) < jump {
                continue;
            }
            let mid = entries[(k - 1) * n + v];
            let [up2, other_min] = entries[(k - 1) * n + mid[0] as usize];
            let min = comp.pick_min(mid[1] as usize, other_min as usize) as u32;
            entries[k * n + v] = [up2, min];
        }
    }
    LiftingTables { n, levels, entries }
}

/// Descending-power search for the nearest lower ancestor of every node.
///
/// Starting at the parent, a block whose stored minimum is not lower than
/// `v` cannot contain a lower ancestor and is skipped whole; the node
/// left standing after all powers is the only remaining candidate. Nodes
/// whose parent is the root finish immediately: the root is maximal.
/// Costs O(log h) comp calls per node.
pub fn compute_lower_dist(
    tree: &RootedTree,
    lift: &LiftingTables,
    comp: &CompOrder<'_>,
) -> LowerAncestorData {
    let n = tree.len();
    let root = tree.root();
    let mut lower_dist = vec![INF; n];
    let mut lower_parent = vec![UNDEF; n];
    for v in 0..n {
        if v == root {
            continue;
        }
        let mut x = tree.parent(v).expect("non-root");
        let mut d = 1u32;
        for t in (0..lift.levels()).rev() {
            if x == root {
                break;
            }
            let [up, min] = lift.entry(t, x);
            if up != UNDEF && !comp.precedes(min as usize, v) {
                x = up as usize;
                d += 1 << t;
            }
        }
        if x != root && comp.precedes(x, v) {
            lower_dist[v] = d;
            lower_parent[v] = x as u32;
        }
    }
    LowerAncestorData {
        lower_dist,
        lower_parent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{CompOrder, CountingOracle, IntWeightOracle};
    use crate::tree::build_tree;

    fn t1() -> (RootedTree, IntWeightOracle) {
        build_tree(
            7,
            0,
            &[(0, 1, 5), (1, 2, 3), (2, 3, 4), (3, 4, 1), (1, 5, 2), (5, 6, 6)],
        )
        .unwrap()
    }

    #[test]
    fn star_has_a_single_level() {
        let (tree, oracle) = build_tree(4, 0, &[(0, 1, 1), (0, 2, 2), (0, 3, 3)]).unwrap();
        let comp = CompOrder::new(&oracle, tree.root());
        let lift = build_lifting(&tree, &comp);
        assert_eq!(lift.levels(), 1);
        for v in 0..4 {
            assert_eq!(lift.min_block(0, v), Some(v));
        }
        assert_eq!(lift.up(0, 1), Some(0));
        assert_eq!(lift.up(0, 0), None);
    }

    #[test]
    fn t1_jump_and_block_minima() {
        let (tree, oracle) = t1();
        let comp = CompOrder::new(&oracle, tree.root());
        let lift = build_lifting(&tree, &comp);
        assert_eq!(lift.up(1, 4), Some(2));
        assert_eq!(lift.min_block(1, 4), Some(4)); // weights 1 vs 4
        assert_eq!(lift.up(2, 4), Some(0)); // pre_4(4) is the root
        assert_eq!(lift.min_block(2, 4), Some(4)); // min of weights 1,4,3,5
        // Jumps that exit the tree are undefined.
        assert_eq!(lift.up(2, 3), None);
        assert_eq!(lift.min_block(2, 3), None);
    }

    #[test]
    fn block_minima_match_explicit_paths() {
        let (tree, oracle) = t1();
        let comp = CompOrder::new(&oracle, tree.root());
        let lift = build_lifting(&tree, &comp);
        for v in 0..tree.len() {
            for k in 0..lift.levels() {
                let jump = 1usize << k;
                if tree.depth(v) < jump {
                    continue;
                }
                let path = tree.half_open_path(v, jump).unwrap();
                let mut best = path[0];
                for &x in &path[1..] {
                    best = comp.pick_min(best, x);
                }
                assert_eq!(lift.min_block(k, v), Some(best), "v={v} k={k}");
            }
        }
    }

    #[test]
    fn t1_lower_distances() {
        let (tree, oracle) = t1();
        let comp = CompOrder::new(&oracle, tree.root());
        let lift = build_lifting(&tree, &comp);
        let lower = compute_lower_dist(&tree, &lift, &comp);
        assert_eq!(lower.lower_dist(3), Some(1)); // node 2, weight 3 < 4
        assert_eq!(lower.lower_parent(3), Some(2));
        assert_eq!(lower.lower_dist(6), Some(1)); // node 5, weight 2 < 6
        assert_eq!(lower.lower_parent(6), Some(5));
        assert_eq!(lower.lower_dist(4), None);
        assert_eq!(lower.lower_dist(2), None);
        // Depth-1 nodes never have one: the root is maximal.
        assert_eq!(lower.lower_dist(1), None);
        assert_eq!(lower.lower_parent(1), None);
    }

    #[test]
    fn parent_lower_means_distance_one() {
        let (tree, oracle) = build_tree(3, 0, &[(0, 1, 2), (1, 2, 9)]).unwrap();
        let comp = CompOrder::new(&oracle, tree.root());
        let lift = build_lifting(&tree, &comp);
        let lower = compute_lower_dist(&tree, &lift, &comp);
        assert_eq!(lower.lower_dist(2), Some(1));
        assert_eq!(lower.lower_parent(2), Some(1));
    }

    #[test]
    fn depth_one_nodes_cost_no_comparisons() {
        let (tree, oracle) = build_tree(3, 0, &[(0, 1, 1), (0, 2, 2)]).unwrap();
        let counting = CountingOracle::new(&oracle);
        let comp = CompOrder::new(&counting, tree.root());
        let lift = build_lifting(&tree, &comp);
        let snap = counting.snapshot();
        let lower = compute_lower_dist(&tree, &lift, &comp);
        assert!(counting.no_calls_since(snap));
        assert_eq!(lower.lower_dist(1), None);
        assert_eq!(lower.lower_dist(2), None);
    }

    #[test]
    fn randomized_equivalence_with_brute_force() {
        use crate::generate::{shaped_tree, TreeShape};
        use crate::reference::BruteForceModel;
        for seed in 0..6u64 {
            let n = 100 + (seed as usize) * 80; // up to 500
            let (tree, oracle) = shaped_tree(TreeShape::Random, n, seed).unwrap();
            let comp = CompOrder::new(&oracle, tree.root());
            let lift = build_lifting(&tree, &comp);
            for v in 0..n {
                for k in 0..lift.levels() {
                    let jump = 1usize << k;
                    if tree.depth(v) < jump {
                        // Level 0 always stores the node itself; higher
                        // levels whose jump exits the tree stay unset.
                        if k > 0 {
                            assert_eq!(lift.min_block(k, v), None);
                        }
                        continue;
                    }
                    let path = tree.half_open_path(v, jump).unwrap();
                    let mut best = path[0];
                    for &x in &path[1..] {
                        best = comp.pick_min(best, x);
                    }
                    assert_eq!(lift.min_block(k, v), Some(best), "seed={seed} v={v} k={k}");
                }
            }
            let lower = compute_lower_dist(&tree, &lift, &comp);
            let model = BruteForceModel::new(&tree, &comp);
            for v in 0..n {
                if tree.is_root(v) {
                    continue;
                }
                let expected = model.brute_lower_dist(v).unwrap();
                let got = lower
                    .lower_dist(v)
                    .map(|d| (d, lower.lower_parent(v).unwrap()));
                assert_eq!(got, expected, "seed={seed} v={v}");
            }
        }
    }

    #[test]
    fn comp_call_budget() {
        let (tree, oracle) = t1();
        let counting = CountingOracle::new(&oracle);
        let comp = CompOrder::new(&counting, tree.root());
        let lift = build_lifting(&tree, &comp);
        let build_comps = comp.comp_calls();
        let n = tree.len() as u64;
        let lg_h = (tree.height() as u64).ilog2() as u64;
        assert!(build_comps <= n * (lg_h + 1));
        compute_lower_dist(&tree, &lift, &comp);
        assert!(comp.comp_calls() <= 2 * n * (lg_h + 2));
        // Oracle calls stay within twice the comp count.
        assert!(counting.calls() <= 2 * comp.comp_calls());
    }
}
