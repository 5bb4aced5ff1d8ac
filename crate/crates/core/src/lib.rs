//! Static leaf-to-ancestor path-minimum queries on rooted weighted trees,
//! in the comparison-oracle model.
//!
//! Edge values are hidden behind a strict comparison oracle. After an
//! `O(n log h)` preprocessing phase (counted in oracle calls), any query
//! "minimum edge value on the upward path from `v` to its ancestor at
//! distance `l`" is answered in constant time with **zero** oracle calls.
//!
//! The index combines four pieces:
//! - an edge-to-node weight conversion with a deterministic id tie-break
//!   ([`CompOrder`]),
//! - a ladder (longest-path) decomposition ([`ladders`]),
//! - sparse-table RMQ over ladder arrays whose two-block overlap is
//!   resolved comparison-free via nearest-previous-lower positions
//!   ([`rmq`]),
//! - binary lifting with half-open ancestor-block minima and
//!   nearest-lower-ancestor distances ([`lifting`]).
//!
//! [`mod@reference`] holds independent brute-force models used to
//! validate every structure, and [`adversary`] generates the instance
//! family that witnesses the information-theoretic floor on
//! preprocessing comparisons.

pub mod adversary;
pub mod generate;
pub mod index;
pub mod ladders;
pub mod lifting;
pub mod oracle;
pub mod reference;
pub mod rmq;
pub mod tree;

pub use index::{PathMinIndex, QueryResult};
pub use oracle::{CompOrder, CountingOracle, IntWeightOracle, WeightOracle};
pub use tree::{build_tree, QueryError, RootedTree, TreeError};
