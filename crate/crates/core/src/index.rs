//! The assembled path-minimum index: build once against the oracle,
//! answer any leaf-to-ancestor query afterwards in constant time with
//! zero oracle calls.
//!
//! Construction order: total order over the node-weighted tree, lg
//! table, ladder decomposition, one modified RMQ per ladder, binary
//! lifting with block minima, nearest-lower-ancestor distances. The
//! finished index holds no reference to the oracle, so queries cannot
//! reach it even by accident.

use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};

use crate::ladders::{extend_to_ladders, longest_path_decomposition, LadderDecomposition};
use crate::lifting::{build_lifting, compute_lower_dist, LiftingTables, LowerAncestorData};
use crate::oracle::{CompOrder, CountingOracle, WeightOracle};
use crate::rmq::{build_pre_lower, build_sparse_table, rmq_query_unchecked, LgTable, PreLowerArray, SparseTable};
use crate::tree::{QueryError, RootedTree, UNDEF};

/// Outcome of a path-minimum query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryResult {
    /// The queried path has no edges (`l = 0`).
    Empty,
    /// Node id of the minimum; it represents the edge to its parent.
    Min(usize),
}

impl QueryResult {
    pub fn node(&self) -> Option<usize> {
        match self {
            QueryResult::Empty => None,
            QueryResult::Min(v) => Some(*v),
        }
    }
}

/// Counters recorded while building an index.
#[derive(Debug, Clone, Copy)]
pub struct BuildStats {
    /// Oracle invocations during preprocessing (queries make none).
    pub oracle_calls: u64,
    /// Total-order evaluations; each one costs at most two oracle calls.
    pub comp_calls: u64,
    pub build_time: Duration,
}

/// Per-node fields the query path touches, packed so one node costs one
/// cache line fill instead of three.
#[repr(C, align(16))]
#[derive(Clone, Copy)]
struct NodeMeta {
    depth: u32,
    /// Distance to the nearest strictly-lower ancestor; `u32::MAX` when
    /// none exists.
    lower_dist: u32,
    base_ladder: u32,
}

/// Static leaf-to-ancestor path-minimum index.
pub struct PathMinIndex {
    tree: RootedTree,
    lg: LgTable,
    ladders: LadderDecomposition,
    ladder_tables: Vec<(SparseTable, PreLowerArray)>,
    lift: LiftingTables,
    lower: LowerAncestorData,
    meta: Vec<NodeMeta>,
    stats: BuildStats,
}

impl PathMinIndex {
    /// Run the whole offline construction against `oracle`.
    ///
    /// The oracle is wrapped in a private call counter so the recorded
    /// stats are exact regardless of what the caller passes in.
    pub fn build(tree: RootedTree, oracle: &dyn WeightOracle) -> Self {
        let started = Instant::now();
        let counting = CountingOracle::new(oracle);
        let comp = CompOrder::new(&counting, tree.root());

        let lg = LgTable::new(tree.height() + 1);
        let lpd = longest_path_decomposition(&tree);
        let ladders = extend_to_ladders(&lpd, &tree);
        let mut ladder_tables = Vec::with_capacity(ladders.num_ladders());
        let mut scratch: Vec<usize> = Vec::new();
        for i in 0..ladders.num_ladders() {
            scratch.clear();
            scratch.extend(ladders.ladder(i).iter().map(|&x| x as usize));
            let st = build_sparse_table(&scratch, &comp).expect("ladders are never empty");
            let pre = build_pre_lower(&scratch, &comp);
            ladder_tables.push((st, pre));
        }
        let lift = build_lifting(&tree, &comp);
        let lower = compute_lower_dist(&tree, &lift, &comp);
        let meta = (0..tree.len())
            .map(|v| NodeMeta {
                depth: tree.depth(v) as u32,
                lower_dist: lower.dist_raw(v),
                base_ladder: ladders.base_ladder(v) as u32,
            })
            .collect();

        let stats = BuildStats {
            oracle_calls: counting.calls(),
            comp_calls: comp.comp_calls(),
            build_time: started.elapsed(),
        };
        Self {
            tree,
            lg,
            ladders,
            ladder_tables,
            lift,
            lower,
            meta,
            stats,
        }
    }

    /// Minimum node on the half-open path `[v, pre_l(v))`, or `Empty`
    /// when `l = 0`. Constant time, no oracle or comp calls.
    ///
    /// With `k = lg[l]`, the lifting table answers the lower block
    /// `[v, p)` outright (`a`). Any remainder `[p, u)` is shorter than
    /// `2^k` while `p` has a descendant at distance `2^k`, so the base
    /// ladder of `p` covers the whole remainder and its RMQ supplies `b`.
    /// The two candidates are combined through `lower_dist(a)`: an
    /// ancestor of `a` at distance up to `depth(a) - depth(b)` is lower
    /// than `a` iff `b` is.
    pub fn query(&self, v: usize, l: usize) -> Result<QueryResult, QueryError> {
        let n = self.tree.len();
        if v >= n {
            return Err(QueryError::UnknownNode { node: v, n });
        }
        let depth_v = self.meta[v].depth as usize;
        if l > depth_v {
            return Err(QueryError::HopOutOfRange { v, l, depth: depth_v });
        }
        if l == 0 {
            return Ok(QueryResult::Empty);
        }

        let k = self.lg.get(l);
        let [p, a] = self.lift.entry(k, v);
        debug_assert_ne!(p, UNDEF, "jump of 2^lg[l] stays within depth");
        let a = a as usize;
        if l == 1usize << k {
            return Ok(QueryResult::Min(a));
        }

        let p = p as usize;
        let ladder_index = self.meta[p].base_ladder as usize;
        let ladder = self.ladders.ladder(ladder_index);
        let deepest_depth = self.ladders.deepest_depth(ladder_index);
        let pos_p = deepest_depth - (depth_v - (1 << k));
        let pos_u = deepest_depth - (depth_v - l);
        assert!(
            pos_u < ladder.len(),
            "base ladder of {p} must contain the remainder segment"
        );
        let (st, pre) = &self.ladder_tables[ladder_index];
        let pos_b = rmq_query_unchecked(st, pre, &self.lg, pos_p, pos_u);
        let b = ladder[pos_b] as usize;

        let a_meta = self.meta[a];
        let gap = a_meta.depth - self.meta[b].depth;
        if a_meta.lower_dist > gap {
            Ok(QueryResult::Min(a))
        } else {
            Ok(QueryResult::Min(b))
        }
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn stats(&self) -> &BuildStats {
        &self.stats
    }

    pub fn lg(&self) -> &LgTable {
        &self.lg
    }

    pub fn ladders(&self) -> &LadderDecomposition {
        &self.ladders
    }

    pub fn ladder_tables(&self) -> &[(SparseTable, PreLowerArray)] {
        &self.ladder_tables
    }

    pub fn lift(&self) -> &LiftingTables {
        &self.lift
    }

    pub fn lower(&self) -> &LowerAncestorData {
        &self.lower
    }

    /// SHA-256 over every stored table, as lowercase hex. Two builds of
    /// the same input must agree byte for byte.
    pub fn structural_digest(&self) -> String {
        fn put(hasher: &mut Sha256, x: u64) {
            hasher.update(x.to_le_bytes());
        }
        let mut hasher = Sha256::new();
        let n = self.tree.len();
        put(&mut hasher, n as u64);
        put(&mut hasher, self.tree.root() as u64);
        for v in 0..n {
            put(&mut hasher, self.tree.parent(v).map_or(u64::MAX, |p| p as u64));
            put(&mut hasher, self.tree.depth(v) as u64);
        }
        put(&mut hasher, self.lg.max() as u64);
        put(&mut hasher, self.ladders.num_ladders() as u64);
        for i in 0..self.ladders.num_ladders() {
            put(&mut hasher, self.ladders.deepest(i) as u64);
            for &x in self.ladders.ladder(i) {
                put(&mut hasher, x as u64);
            }
        }
        for (st, pre) in &self.ladder_tables {
            put(&mut hasher, st.levels() as u64);
            for &x in st.rows() {
                put(&mut hasher, x as u64);
            }
            for &x in pre.raw() {
                put(&mut hasher, x as i64 as u64);
            }
        }
        put(&mut hasher, self.lift.levels() as u64);
        for entry in self.lift.entries_raw() {
            put(&mut hasher, entry[0] as u64);
            put(&mut hasher, entry[1] as u64);
        }
        let (dist, parent) = self.lower.raw();
        for (&d, &p) in dist.iter().zip(parent) {
            put(&mut hasher, d as u64);
            put(&mut hasher, p as u64);
        }
        let digest = hasher.finalize();
        let mut out = String::with_capacity(64);
        for byte in digest {
            use std::fmt::Write;
            let _ = write!(out, "{byte:02x}");
        }
        out
    }

    /// Damage one stored minimum so verification harnesses can prove
    /// they detect mismatches. Test hook; never reachable from normal
    /// builds.
    #[doc(hidden)]
    pub fn corrupt_one_stored_minimum(&mut self) -> Option<(usize, usize)> {
        let mut deepest = None;
        for v in 0..self.tree.len() {
            if !self.tree.is_root(v) {
                let better = match deepest {
                    None => true,
                    Some(best) => self.tree.depth(v) > self.tree.depth(best),
                };
                if better {
                    deepest = Some(v);
                }
            }
        }
        let v = deepest?;
        let wrong = self.tree.parent(v).expect("non-root");
        self.lift.corrupt_entry(0, v, wrong as u32);
        Some((v, 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::IntWeightOracle;
    use crate::reference::BruteForceModel;
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
    fn empty_query() {
        let (tree, oracle) = t1();
        let index = PathMinIndex::build(tree, &oracle);
        assert_eq!(index.query(4, 0).unwrap(), QueryResult::Empty);
    }

    #[test]
    fn t1_walkthrough_queries() {
        let (tree, oracle) = t1();
        let index = PathMinIndex::build(tree, &oracle);
        // (4, 3): a = node 4, remainder picks b = node 2, gap 2,
        // lower_dist(4) = infinity, so a wins.
        assert_eq!(index.query(4, 3).unwrap(), QueryResult::Min(4));
        // (6, 3): weights 6, 2, 5.
        assert_eq!(index.query(6, 3).unwrap(), QueryResult::Min(5));
        // (4, 4): l is a power of two, answered by the lifting block.
        assert_eq!(index.query(4, 4).unwrap(), QueryResult::Min(4));
    }

    #[test]
    fn walkthrough_intermediate_values() {
        let (tree, oracle) = t1();
        let index = PathMinIndex::build(tree, &oracle);
        // Recompute the (4, 3) steps through the public accessors.
        let k = index.lg().get(3);
        assert_eq!(k, 1);
        assert_eq!(index.lift().up(k, 4), Some(2));
        assert_eq!(index.lift().min_block(k, 4), Some(4));
        let li = index.ladders().base_ladder(2);
        assert_eq!(index.ladders().ladder(li), &[4, 3, 2, 1, 0]);
        // p = node 2 sits at position 2, u = node 1 at position 3; the
        // remainder RMQ returns node 2 as b.
        assert_eq!(index.ladders().position_of_depth(li, 2), 2);
        assert_eq!(index.lower().lower_dist(4), None);
    }

    #[test]
    fn right_candidate_wins_when_a_has_a_lower_ancestor_in_range() {
        // Path 0-1-2-3-4 with weights chosen so the remainder segment
        // holds the minimum: query (4, 3) has a = node 3, b = node 2.
        let (tree, oracle) =
            build_tree(5, 0, &[(0, 1, 1), (1, 2, 5), (2, 3, 6), (3, 4, 7)]).unwrap();
        let index = PathMinIndex::build(tree, &oracle);
        assert_eq!(index.query(4, 3).unwrap(), QueryResult::Min(2));
        // The argument behind the combination step: when b wins,
        // lower_parent(a) lies on [p, b].
        let a = 3;
        let gap = index.tree().depth(a) - index.tree().depth(2);
        let dist = index.lower().lower_dist(a).unwrap();
        assert!(dist <= gap);
        let c = index.lower().lower_parent(a).unwrap();
        let p = index.lift().up(index.lg().get(3), 4).unwrap();
        assert!(index.tree().depth(c) <= index.tree().depth(p));
        assert!(index.tree().depth(c) >= index.tree().depth(2));
    }

    #[test]
    fn single_node_tree() {
        let (tree, oracle) = build_tree(1, 0, &[]).unwrap();
        let index = PathMinIndex::build(tree, &oracle);
        assert_eq!(index.query(0, 0).unwrap(), QueryResult::Empty);
        assert!(matches!(
            index.query(0, 1),
            Err(QueryError::HopOutOfRange { .. })
        ));
    }

    #[test]
    fn precondition_errors() {
        let (tree, oracle) = t1();
        let index = PathMinIndex::build(tree, &oracle);
        assert!(matches!(
            index.query(9, 0),
            Err(QueryError::UnknownNode { node: 9, n: 7 })
        ));
        assert!(matches!(
            index.query(4, 9),
            Err(QueryError::HopOutOfRange { v: 4, l: 9, depth: 4 })
        ));
    }

    #[test]
    fn matches_brute_force_on_t1_exhaustively() {
        let (tree, oracle) = t1();
        let index = PathMinIndex::build(tree.clone(), &oracle);
        let comp = CompOrder::new(&oracle, tree.root());
        let model = BruteForceModel::new(&tree, &comp);
        for v in 0..tree.len() {
            for l in 0..=tree.depth(v) {
                assert_eq!(
                    index.query(v, l).unwrap(),
                    model.brute_min(v, l).unwrap(),
                    "query ({v}, {l})"
                );
            }
        }
    }

    #[test]
    fn queries_are_safe_from_multiple_threads() {
        fn assert_sync<T: Sync + Send>() {}
        assert_sync::<PathMinIndex>();

        let (tree, oracle) = t1();
        let index = PathMinIndex::build(tree, &oracle);
        std::thread::scope(|scope| {
            for offset in 0..4usize {
                let index = &index;
                scope.spawn(move || {
                    for round in 0..200 {
                        let v = (offset + round) % index.tree().len();
                        for l in 0..=index.tree().depth(v) {
                            index.query(v, l).unwrap();
                        }
                    }
                });
            }
        });
    }

    #[test]
    fn build_records_stats_and_digest_is_stable() {
        let (tree, oracle) = t1();
        let index = PathMinIndex::build(tree.clone(), &oracle);
        assert!(index.stats().oracle_calls > 0);
        assert!(index.stats().comp_calls > 0);
        let again = PathMinIndex::build(tree, &oracle);
        assert_eq!(index.structural_digest(), again.structural_digest());
    }

    #[test]
    fn preprocessing_call_bound_at_n_1000() {
        use crate::generate::{shaped_tree, TreeShape};
        let n = 1000;
        let (tree, oracle) = shaped_tree(TreeShape::Random, n, 11).unwrap();
        let h = tree.height();
        let index = PathMinIndex::build(tree, &oracle);
        let lg_h = if h <= 1 { 0 } else { h.ilog2() as u64 };
        let bound = 10 * n as u64 * (lg_h + 2);
        assert!(
            index.stats().oracle_calls <= bound,
            "{} > {bound}",
            index.stats().oracle_calls
        );
    }

    #[test]
    fn corruption_hook_flips_an_answer() {
        let (tree, oracle) = t1();
        let mut index = PathMinIndex::build(tree, &oracle);
        let (v, l) = index.corrupt_one_stored_minimum().unwrap();
        assert_eq!(index.query(v, l).unwrap(), QueryResult::Min(3));
    }
}
