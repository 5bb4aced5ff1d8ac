//! Seeded tree generators for verification and benchmarking.
//!
//! Weights are drawn from a deliberately small range so equal values are
//! common and the identifier tie-break is exercised everywhere.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::oracle::IntWeightOracle;
use crate::tree::RootedTree;

/// Weights land in `0..=7`: plenty of ties at any interesting size.
const WEIGHT_RANGE: i64 = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenerateError {
    #[error("height {h} is infeasible for n = {n} nodes")]
    InfeasibleHeight { n: usize, h: usize },
    #[error("n must be at least 1")]
    Empty,
}

/// Benchmark tree shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeShape {
    /// Single chain: height `n - 1`.
    Path,
    /// Root plus `n - 1` leaves: height 1.
    Star,
    /// Node `i` attaches to a uniformly random earlier node.
    Random,
    /// A spine of about `n / 2` nodes, one leaf per spine node.
    Caterpillar,
    /// Complete binary heap layout.
    Binary,
}

impl TreeShape {
    pub const ALL: [TreeShape; 5] = [
        TreeShape::Path,
        TreeShape::Star,
        TreeShape::Random,
        TreeShape::Caterpillar,
        TreeShape::Binary,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TreeShape::Path => "path",
            TreeShape::Star => "star",
            TreeShape::Random => "random",
            TreeShape::Caterpillar => "caterpillar",
            TreeShape::Binary => "binary",
        }
    }
}

impl std::str::FromStr for TreeShape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "path" => Ok(TreeShape::Path),
            "star" => Ok(TreeShape::Star),
            "random" => Ok(TreeShape::Random),
            "caterpillar" => Ok(TreeShape::Caterpillar),
            "binary" => Ok(TreeShape::Binary),
            other => Err(format!(
                "unknown shape {other:?} (expected path, star, random, caterpillar or binary)"
            )),
        }
    }
}

impl std::fmt::Display for TreeShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn random_weights(n: usize, rng: &mut ChaCha8Rng) -> Vec<i64> {
    (0..n).map(|_| rng.random_range(0..WEIGHT_RANGE)).collect()
}

/// Tree of the given shape rooted at 0, with seeded tie-heavy weights.
pub fn shaped_tree(shape: TreeShape, n: usize, seed: u64) -> Result<(RootedTree, IntWeightOracle), GenerateError> {
    if n == 0 {
        return Err(GenerateError::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parents = vec![0usize; n];
    match shape {
        TreeShape::Path => {
            for (i, p) in parents.iter_mut().enumerate().skip(1) {
                *p = i - 1;
            }
        }
        TreeShape::Star => {}
        TreeShape::Random => {
            for (i, p) in parents.iter_mut().enumerate().skip(1) {
                *p = rng.random_range(0..i);
            }
        }
        TreeShape::Caterpillar => {
            let spine = n.div_ceil(2);
            for (i, p) in parents.iter_mut().enumerate().skip(1) {
                *p = if i < spine { i - 1 } else { i - spine };
            }
        }
        TreeShape::Binary => {
            for (i, p) in parents.iter_mut().enumerate().skip(1) {
                *p = (i - 1) / 2;
            }
        }
    }
    let tree = RootedTree::from_parents(0, &parents).expect("generated parents are valid");
    let weights = random_weights(n, &mut rng);
    Ok((tree, IntWeightOracle::new(0, weights)))
}

/// Random tree with exactly the requested height: a root path of `h`
/// edges guarantees the height, and every further node attaches to a
/// uniformly random node of depth below `h`.
pub fn random_tree_with_height(
    n: usize,
    h: usize,
    seed: u64,
) -> Result<(RootedTree, IntWeightOracle), GenerateError> {
    if n == 0 {
        return Err(GenerateError::Empty);
    }
    if h >= n || (h == 0 && n > 1) {
        return Err(GenerateError::InfeasibleHeight { n, h });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parents = vec![0usize; n];
    let mut depth = vec![0usize; n];
    let mut eligible: Vec<usize> = Vec::with_capacity(n);
    if h > 0 {
        eligible.push(0);
    }
    for (i, p) in parents.iter_mut().enumerate().take(h + 1).skip(1) {
        *p = i - 1;
        depth[i] = i;
    }
    eligible.extend(1..h);
    for i in (h + 1)..n {
        let p = eligible[rng.random_range(0..eligible.len())];
        parents[i] = p;
        depth[i] = depth[p] + 1;
        if depth[i] < h {
            eligible.push(i);
        }
    }
    let tree = RootedTree::from_parents(0, &parents).expect("generated parents are valid");
    debug_assert_eq!(tree.height(), h);
    let weights = random_weights(n, &mut rng);
    Ok((tree, IntWeightOracle::new(0, weights)))
}
