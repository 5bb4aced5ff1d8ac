//! Comparison oracles and the total order used for all stored minima.
//!
//! After edge-to-node conversion every non-root node carries the value of
//! the edge to its parent. The only value operation available anywhere in
//! this crate is [`WeightOracle::less`]; [`CompOrder`] turns it into a
//! strict total order by breaking ties on node identifiers and treating
//! the root as maximal (without consulting the oracle).

use std::cell::Cell;

/// Strict comparison over the hidden values of non-root nodes.
///
/// Implementations must behave like a fixed real-valued assignment:
/// irreflexive, asymmetric and transitive, with equal values permitted.
/// Repeated identical calls must return identical answers.
pub trait WeightOracle {
    /// `true` iff the value of `a` is strictly smaller than the value of `b`.
    ///
    /// Both arguments must be non-root nodes of the same tree.
    fn less(&self, a: usize, b: usize) -> bool;
}

impl<T: WeightOracle + ?Sized> WeightOracle for &T {
    fn less(&self, a: usize, b: usize) -> bool {
        (**self).less(a, b)
    }
}

/// Concrete oracle over 64-bit signed integer weights, one per non-root
/// node. The slot at the root is never read; the index itself never sees
/// the weights, only comparison outcomes.
#[derive(Debug, Clone)]
pub struct IntWeightOracle {
    root: usize,
    weights: Vec<i64>,
}

impl IntWeightOracle {
    /// `weights[v]` is the value of the edge `(parent(v), v)`; the entry at
    /// `root` is ignored.
    pub fn new(root: usize, weights: Vec<i64>) -> Self {
        Self { root, weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Raw weight of a non-root node, for display and test fixtures only.
    pub fn weight(&self, v: usize) -> i64 {
        debug_assert_ne!(v, self.root, "the root carries no value");
        self.weights[v]
    }
}

impl WeightOracle for IntWeightOracle {
    fn less(&self, a: usize, b: usize) -> bool {
        debug_assert_ne!(a, self.root, "oracle is never queried on the root");
        debug_assert_ne!(b, self.root, "oracle is never queried on the root");
        self.weights[a] < self.weights[b]
    }
}

/// Wrapper that counts every call forwarded to the inner oracle.
///
/// Mandatory in CLI mode, where it arms the zero-calls-at-query-time
/// guard; optional in library use.
#[derive(Debug)]
pub struct CountingOracle<O> {
    inner: O,
    calls: Cell<u64>,
}

impl<O: WeightOracle> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            calls: Cell::new(0),
        }
    }

    /// Total inner-oracle invocations since construction.
    pub fn calls(&self) -> u64 {
        self.calls.get()
    }

    /// Snapshot of the counter, for later comparison.
    pub fn snapshot(&self) -> u64 {
        self.calls.get()
    }

    /// Calls made since `snapshot` was taken.
    pub fn calls_since(&self, snapshot: u64) -> u64 {
        self.calls.get() - snapshot
    }

    /// `true` iff no call has been forwarded since `snapshot`.
    pub fn no_calls_since(&self, snapshot: u64) -> bool {
        self.calls.get() == snapshot
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: WeightOracle> WeightOracle for CountingOracle<O> {
    fn less(&self, a: usize, b: usize) -> bool {
        self.calls.set(self.calls.get() + 1);
        self.inner.less(a, b)
    }
}

/// Strict total order on the nodes of one tree.
///
/// Non-root nodes are ordered by value first and by ascending numeric
/// identifier on ties, so every stored minimum is unique and reproducible
/// across runs. The root is larger than every other node; comparisons
/// involving it are answered by branching on the identifier and make no
/// oracle calls. One evaluation costs at most two oracle calls.
pub struct CompOrder<'a> {
    oracle: &'a dyn WeightOracle,
    root: usize,
    comps: Cell<u64>,
}

impl<'a> CompOrder<'a> {
    pub fn new(oracle: &'a dyn WeightOracle, root: usize) -> Self {
        Self {
            oracle,
            root,
            comps: Cell::new(0),
        }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// `true` iff `v` precedes `u` in the total order.
    ///
    /// Panics if `v == u`: the order is strict.
    pub fn precedes(&self, v: usize, u: usize) -> bool {
        assert_ne!(v, u, "comp is a strict order, got equal nodes {v}");
        self.comps.set(self.comps.get() + 1);
        if v == self.root {
            return false;
        }
        if u == self.root {
            return true;
        }
        if self.oracle.less(v, u) {
            true
        } else if self.oracle.less(u, v) {
            false
        } else {
            v < u
        }
    }

    /// The smaller of two distinct nodes under the total order.
    pub fn pick_min(&self, v: usize, u: usize) -> usize {
        if self.precedes(v, u) {
            v
        } else {
            u
        }
    }

    /// Number of `precedes` evaluations performed so far.
    pub fn comp_calls(&self) -> u64 {
        self.comps.get()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(weights: Vec<i64>, root: usize) -> (IntWeightOracle, usize) {
        (IntWeightOracle::new(root, weights), root)
    }

    #[test]
    fn value_order_wins() {
        let (oracle, root) = order(vec![0, 1, 2], 0);
        let comp = CompOrder::new(&oracle, root);
        assert!(comp.precedes(1, 2));
        assert!(!comp.precedes(2, 1));
    }

    #[test]
    fn ties_break_by_identifier() {
        let (oracle, root) = order(vec![0, 7, 7], 0);
        let comp = CompOrder::new(&oracle, root);
        assert!(comp.precedes(1, 2));
        assert!(!comp.precedes(2, 1));
    }

    #[test]
    fn root_is_maximal_without_oracle_calls() {
        let counting = CountingOracle::new(IntWeightOracle::new(0, vec![0, 5, 5]));
        let comp = CompOrder::new(&counting, 0);
        assert!(!comp.precedes(0, 2));
        assert!(comp.precedes(2, 0));
        assert_eq!(counting.calls(), 0);
    }

    #[test]
    fn fresh_counter_is_zero_and_ties_cost_two() {
        let counting = CountingOracle::new(IntWeightOracle::new(0, vec![0, 5, 5]));
        assert_eq!(counting.snapshot(), 0);
        let comp = CompOrder::new(&counting, 0);
        comp.precedes(1, 2);
        assert_eq!(counting.calls(), 2);
        let snap = counting.snapshot();
        comp.precedes(1, 2);
        assert_eq!(counting.calls_since(snap), 2);
        assert!(!counting.no_calls_since(snap));
    }

    #[test]
    fn distinct_values_cost_one_or_two_calls() {
        let counting = CountingOracle::new(IntWeightOracle::new(0, vec![0, 1, 2]));
        let comp = CompOrder::new(&counting, 0);
        comp.precedes(1, 2); // resolves on the first oracle call
        assert_eq!(counting.calls(), 1);
        comp.precedes(2, 1); // first call false, second true
        assert_eq!(counting.calls(), 3);
    }

    #[test]
    #[should_panic(expected = "strict order")]
    fn equal_arguments_are_rejected() {
        let (oracle, root) = order(vec![0, 1], 0);
        let comp = CompOrder::new(&oracle, root);
        comp.precedes(1, 1);
    }

    /// Antisymmetry and transitivity over all pairs/triples of a 64-node
    /// set with many ties.
    #[test]
    fn strict_total_order_exhaustive() {
        let n = 64;
        let weights: Vec<i64> = (0..n).map(|i| (i as i64 * 7) % 5).collect();
        let oracle = IntWeightOracle::new(0, weights);
        let comp = CompOrder::new(&oracle, 0);
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                assert_ne!(comp.precedes(a, b), comp.precedes(b, a), "{a} {b}");
                for c in 0..n {
                    if c == a || c == b {
                        continue;
                    }
                    if comp.precedes(a, b) && comp.precedes(b, c) {
                        assert!(comp.precedes(a, c), "{a} {b} {c}");
                    }
                }
            }
        }
    }

    /// Each comp costs one or two oracle calls except root comparisons,
    /// which cost none.
    #[test]
    fn call_accounting_bounds() {
        let n = 16;
        let weights: Vec<i64> = (0..n).map(|i| (i as i64 * 3) % 4).collect();
        let counting = CountingOracle::new(IntWeightOracle::new(0, weights));
        let comp = CompOrder::new(&counting, 0);
        let mut non_root_comps = 0u64;
        for a in 1..n {
            for b in 1..n {
                if a != b {
                    comp.precedes(a, b);
                    non_root_comps += 1;
                }
            }
        }
        let calls = counting.calls();
        assert!(calls >= non_root_comps);
        assert!(calls <= 2 * non_root_comps);
        assert_eq!(comp.comp_calls(), non_root_comps);
    }
}
