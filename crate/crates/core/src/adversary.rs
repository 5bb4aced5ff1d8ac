//! Adversarial instance family witnessing the preprocessing lower bound,
//! plus desk-scale checks of the counting argument behind it.
//!
//! One subtree is a spine `b_1..b_X` under a dummy root with strictly
//! increasing fixed weights and one leaf per spine node. Each leaf weight
//! falls into one of the open intervals below or between spine weights,
//! so leaf `i` admits `i` distinct nearest-lower-ancestor outcomes and a
//! subtree admits `X!` answer vectors. With `q` weight-disjoint copies
//! the family carries `(X!)^q` pairwise-distinguishable answer vectors,
//! forcing at least `ceil(q * log2(X!))` comparisons out of any correct
//! preprocessing that answers queries comparison-free.

use num_bigint::BigUint;
use std::collections::HashSet;
use thiserror::Error;

use crate::oracle::{CompOrder, IntWeightOracle};
use crate::reference::BruteForceModel;
use crate::tree::{build_tree, RootedTree, TreeError};

/// Hard cap on the number of enumerated instances in
/// [`check_distinguishability`].
pub const ENUMERATION_GUARD: u64 = 100_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AdversaryError {
    #[error("x and q must be at least 1 (got x = {x}, q = {q})")]
    BadParams { x: usize, q: usize },
    #[error("choice matrix must be {q} copies of {x} entries")]
    MalformedChoice { x: usize, q: usize },
    #[error("choice {choice} out of range for leaf {leaf}: it allows 0..={max}")]
    ChoiceOutOfRange { leaf: usize, choice: u32, max: u32 },
    #[error("(x!)^q = {count} exceeds the enumeration guard of {guard}")]
    EnumerationTooLarge { count: BigUint, guard: u64 },
    #[error("parameter choice requires 8 <= h <= n, got n = {n}, h = {h}")]
    HeightOutOfRange { n: usize, h: usize },
    #[error("pad_to = {pad} is below the base instance size {base}")]
    PadTooSmall { pad: usize, base: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Interval selector per leaf: entry `i - 1` of a copy picks, for leaf
/// `i`, one of the `i` open intervals `(-inf, w(b_1))`,
/// `(w(b_1), w(b_2))`, ..., `(w(b_{i-1}), w(b_i))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightChoice {
    per_copy: Vec<Vec<u32>>,
}

impl WeightChoice {
    pub fn new(per_copy: Vec<Vec<u32>>) -> Self {
        Self { per_copy }
    }

    /// Every leaf weight below the whole spine: all answers "none".
    pub fn all_below(x: usize, q: usize) -> Self {
        Self {
            per_copy: vec![vec![0; x]; q],
        }
    }

    /// Every leaf in the deepest admissible interval: leaf `i` maps to
    /// `b_{i-1}`.
    pub fn all_max(x: usize, q: usize) -> Self {
        Self {
            per_copy: vec![(0..x as u32).collect(); q],
        }
    }

    pub fn get(&self, copy: usize, leaf: usize) -> u32 {
        self.per_copy[copy][leaf - 1]
    }

    fn validate(&self, x: usize, q: usize) -> Result<(), AdversaryError> {
        if self.per_copy.len() != q || self.per_copy.iter().any(|c| c.len() != x) {
            return Err(AdversaryError::MalformedChoice { x, q });
        }
        for copy in &self.per_copy {
            for (idx, &choice) in copy.iter().enumerate() {
                let leaf = idx + 1;
                if choice as usize >= leaf {
                    return Err(AdversaryError::ChoiceOutOfRange {
                        leaf,
                        choice,
                        max: idx as u32,
                    });
                }
            }
        }
        Ok(())
    }
}

/// A generated lower-bound instance with its canonical leaf list.
pub struct AdversarialInstance {
    pub x: usize,
    pub q: usize,
    pub tree: RootedTree,
    pub oracle: IntWeightOracle,
    /// Answer-relevant leaves, copy-major then by spine index.
    pub leaves: Vec<usize>,
}

fn spine_node(x: usize, copy: usize, i: usize) -> usize {
    1 + copy * 2 * x + (i - 1)
}

fn leaf_node(x: usize, copy: usize, i: usize) -> usize {
    1 + copy * 2 * x + x + (i - 1)
}

/// Concrete weights realizing the chosen intervals: spine weights
/// `10 i` inside a copy, leaf choices at interval midpoints `10 j + 5`,
/// copies offset into disjoint ranges.
pub fn generate_instance(
    x: usize,
    q: usize,
    choice: &WeightChoice,
    pad_to: Option<usize>,
) -> Result<AdversarialInstance, AdversaryError> {
    if x < 1 || q < 1 {
        return Err(AdversaryError::BadParams { x, q });
    }
    choice.validate(x, q)?;
    let base = 1 + 2 * q * x;
    let n = match pad_to {
        Some(pad) if pad < base => return Err(AdversaryError::PadTooSmall { pad, base }),
        Some(pad) => pad,
        None => base,
    };
    let stride = 10 * (x as i64 + 2);
    let mut edges: Vec<(usize, usize, i64)> = Vec::with_capacity(n - 1);
    let mut leaves = Vec::with_capacity(q * x);
    for copy in 0..q {
        let offset = stride * copy as i64;
        for i in 1..=x {
            let b = spine_node(x, copy, i);
            let parent = if i == 1 { 0 } else { spine_node(x, copy, i - 1) };
            edges.push((parent, b, offset + 10 * i as i64));
            let leaf = leaf_node(x, copy, i);
            edges.push((b, leaf, offset + 10 * choice.get(copy, i) as i64 + 5));
            leaves.push(leaf);
        }
    }
    // Padding leaves carry fixed, distinct, very large values so the
    // answer-vector count is unchanged.
    let huge_base = stride * q as i64;
    for (k, v) in (base..n).enumerate() {
        edges.push((0, v, huge_base + 10 * (k as i64 + 1)));
    }
    let (tree, oracle) = build_tree(n, 0, &edges)?;
    Ok(AdversarialInstance {
        x,
        q,
        tree,
        oracle,
        leaves,
    })
}

/// Independent height-two subtrees `root - b - leaf`; each bit chooses
/// which of the two edges is lighter. Covers heights `2 <= h < 8`, where
/// the spine family does not apply.
pub fn height_two_instance(
    subtrees: usize,
    bits: &[bool],
) -> Result<AdversarialInstance, AdversaryError> {
    if subtrees < 1 || bits.len() != subtrees {
        return Err(AdversaryError::MalformedChoice { x: 1, q: subtrees });
    }
    let n = 1 + 2 * subtrees;
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaves = Vec::with_capacity(subtrees);
    for (s, &leaf_is_lighter) in bits.iter().enumerate() {
        let b = 1 + 2 * s;
        let leaf = 2 + 2 * s;
        let base = 30 * s as i64;
        let (wb, wl) = if leaf_is_lighter {
            (base + 20, base + 10)
        } else {
            (base + 10, base + 20)
        };
        edges.push((0, b, wb));
        edges.push((b, leaf, wl));
        leaves.push(leaf);
    }
    let (tree, oracle) = build_tree(n, 0, &edges)?;
    Ok(AdversarialInstance {
        x: 1,
        q: subtrees,
        tree,
        oracle,
        leaves,
    })
}

/// Nearest-lower-ancestor label per canonical leaf: `None` or the spine
/// node id.
pub fn answer_vector(instance: &AdversarialInstance) -> Vec<Option<usize>> {
    let comp = CompOrder::new(&instance.oracle, instance.tree.root());
    let model = BruteForceModel::new(&instance.tree, &comp);
    instance
        .leaves
        .iter()
        .map(|&leaf| {
            model
                .brute_lower_dist(leaf)
                .expect("leaves are non-root")
                .map(|(_, node)| node)
        })
        .collect()
}

/// Full brute-force answer table over all (leaf, endpoint) queries; two
/// instances answer queries identically iff these tables are equal.
fn answer_table(instance: &AdversarialInstance) -> Vec<u32> {
    let comp = CompOrder::new(&instance.oracle, instance.tree.root());
    let model = BruteForceModel::new(&instance.tree, &comp);
    let mut table = Vec::new();
    for &leaf in &instance.leaves {
        for min_node in model.all_path_mins(leaf) {
            table.push(min_node as u32);
        }
    }
    table
}

/// Outcome of a distinguishability enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinguishabilityReport {
    /// Distinct (answer table, answer vector) outcomes observed.
    pub vectors: u64,
    /// The predicted count.
    pub expected: u64,
    /// All enumerated tables were pairwise distinct.
    pub distinct: bool,
}

impl DistinguishabilityReport {
    pub fn passed(&self) -> bool {
        self.distinct && self.vectors == self.expected
    }
}

fn factorial(x: usize) -> BigUint {
    (1..=x as u64).map(BigUint::from).product()
}

fn expected_vectors(x: usize, q: usize) -> BigUint {
    factorial(x).pow(q as u32)
}

/// Enumerate every choice matrix for `(x, q)`, build each instance, and
/// check that all full query tables are pairwise distinct and number
/// exactly `(x!)^q`.
pub fn check_distinguishability(x: usize, q: usize) -> Result<DistinguishabilityReport, AdversaryError> {
    if x < 1 || q < 1 {
        return Err(AdversaryError::BadParams { x, q });
    }
    let expected_big = expected_vectors(x, q);
    if expected_big > BigUint::from(ENUMERATION_GUARD) {
        return Err(AdversaryError::EnumerationTooLarge {
            count: expected_big,
            guard: ENUMERATION_GUARD,
        });
    }
    let expected: u64 = expected_big.try_into().expect("guarded");

    let mut tables: HashSet<Vec<u32>> = HashSet::new();
    let mut vectors: HashSet<Vec<Option<usize>>> = HashSet::new();
    let mut enumerated = 0u64;
    let radices: Vec<u32> = (0..q).flat_map(|_| 1..=x as u32).collect();
    let mut digits = vec![0u32; radices.len()];
    loop {
        let per_copy: Vec<Vec<u32>> = (0..q)
            .map(|c| digits[c * x..(c + 1) * x].to_vec())
            .collect();
        let instance = generate_instance(x, q, &WeightChoice::new(per_copy), None)?;
        tables.insert(answer_table(&instance));
        vectors.insert(answer_vector(&instance));
        enumerated += 1;

        let mut idx = 0;
        loop {
            if idx == digits.len() {
                let distinct =
                    tables.len() as u64 == enumerated && vectors.len() as u64 == enumerated;
                return Ok(DistinguishabilityReport {
                    vectors: tables.len() as u64,
                    expected,
                    distinct,
                });
            }
            digits[idx] += 1;
            if digits[idx] < radices[idx] {
                break;
            }
            digits[idx] = 0;
            idx += 1;
        }
    }
}

/// Same enumeration for the height-two family: `2^subtrees` outcomes.
pub fn check_distinguishability_height_two(
    subtrees: usize,
) -> Result<DistinguishabilityReport, AdversaryError> {
    if !(1..=16).contains(&subtrees) {
        return Err(AdversaryError::BadParams { x: 1, q: subtrees });
    }
    let expected = 1u64 << subtrees;
    let mut tables: HashSet<Vec<u32>> = HashSet::new();
    for mask in 0u64..expected {
        let bits: Vec<bool> = (0..subtrees).map(|s| mask >> s & 1 == 1).collect();
        let instance = height_two_instance(subtrees, &bits)?;
        tables.insert(answer_table(&instance));
    }
    Ok(DistinguishabilityReport {
        vectors: tables.len() as u64,
        expected,
        distinct: tables.len() as u64 == expected,
    })
}

/// `ceil(q * log2(x!))` in exact integer arithmetic: the number of
/// two-outcome comparisons needed to separate `(x!)^q` answer vectors.
pub fn info_lower_bound(x: usize, q: usize) -> u64 {
    let count = expected_vectors(x, q);
    if count <= BigUint::from(1u32) {
        return 0;
    }
    (count - BigUint::from(1u32)).bits()
}

/// The published parameters for a budget of `n` nodes and height `h`:
/// `x = floor(min(h/2, n/4))`, `q = floor((n-1) / (2x))`.
pub fn parameter_choice(n: usize, h: usize) -> Result<(usize, usize), AdversaryError> {
    if h < 8 || h > n {
        return Err(AdversaryError::HeightOutOfRange { n, h });
    }
    let x = (h / 2).min(n / 4);
    let q = (n - 1) / (2 * x);
    Ok((x, q))
}
