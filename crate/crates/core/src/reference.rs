//! Structure-free brute-force models: the ground truth every indexed
//! structure is validated against.
//!
//! Everything here walks the tree or the array directly and shares the
//! same total order as the main structure, so equivalence checks are
//! exact rather than value-approximate.

use crate::index::QueryResult;
use crate::oracle::CompOrder;
use crate::rmq::PreLowerArray;
use crate::tree::{QueryError, RootedTree};

/// Brute-force evaluator over one tree and one total order.
pub struct BruteForceModel<'a> {
    tree: &'a RootedTree,
    comp: &'a CompOrder<'a>,
}

impl<'a> BruteForceModel<'a> {
    pub fn new(tree: &'a RootedTree, comp: &'a CompOrder<'a>) -> Self {
        Self { tree, comp }
    }

    /// Minimum on the half-open path `[v, pre_l(v))` by a linear parent
    /// walk; `Empty` when `l = 0`.
    pub fn brute_min(&self, v: usize, l: usize) -> Result<QueryResult, QueryError> {
        self.tree.check_hops(v, l)?;
        if l == 0 {
            return Ok(QueryResult::Empty);
        }
        let mut best = v;
        let mut x = v;
        for _ in 1..l {
            x = self.tree.parent(x).expect("path stays below the root");
            best = self.comp.pick_min(best, x);
        }
        Ok(QueryResult::Min(best))
    }

    /// Running minima along the full root-ward walk from `v`: entry
    /// `l - 1` answers the query `(v, l)`. One pass gives every answer
    /// for a node, which keeps exhaustive sweeps affordable.
    pub fn all_path_mins(&self, v: usize) -> Vec<usize> {
        let depth = self.tree.depth(v);
        let mut out = Vec::with_capacity(depth);
        if depth == 0 {
            return out;
        }
        let mut best = v;
        let mut x = v;
        out.push(best);
        for _ in 1..depth {
            x = self.tree.parent(x).expect("above the root");
            best = self.comp.pick_min(best, x);
            out.push(best);
        }
        out
    }

    /// Distance to and identity of the nearest strictly-lower proper
    /// ancestor, by scanning the ancestor path; `None` when every
    /// ancestor (all the way up to, excluding, the root) is higher.
    pub fn brute_lower_dist(&self, v: usize) -> Result<Option<(usize, usize)>, QueryError> {
        if self.tree.is_root(v) {
            return Err(QueryError::RootNotAllowed(v));
        }
        if v >= self.tree.len() {
            return Err(QueryError::UnknownNode { node: v, n: self.tree.len() });
        }
        let mut x = v;
        for dist in 1..=self.tree.depth(v) {
            x = self.tree.parent(x).expect("walk ends at the root");
            if self.tree.is_root(x) {
                break;
            }
            if self.comp.precedes(x, v) {
                return Ok(Some((dist, x)));
            }
        }
        Ok(None)
    }
}

/// Literal evaluation of the nearest-previous-lower definition in
/// O(m^2): for each position, the largest earlier position holding a
/// strictly lower element.
pub fn brute_pre_lower(array: &[usize], comp: &CompOrder<'_>) -> PreLowerArray {
    let mut out = Vec::with_capacity(array.len());
    for i in 0..array.len() {
        let mut found = -1i32;
        for j in (0..i).rev() {
            if comp.precedes(array[j], array[i]) {
                found = j as i32;
                break;
            }
        }
        out.push(found);
    }
    PreLowerArray::from_raw(out)
}
