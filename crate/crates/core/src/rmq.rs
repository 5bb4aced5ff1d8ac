//! Range-minimum queries over a ladder array with all comparisons paid at
//! build time.
//!
//! The sparse table stores, for every power-of-two block, the *position*
//! of its minimum under [`CompOrder`]; choices between candidate
//! positions are made while building. The classic query overlaps two
//! blocks and would need one more comparison to combine them; storing the
//! nearest previous strictly-lower position for every index removes it,
//! so a query touches no oracle at all.
//!
//! [`CompOrder`]: crate::oracle::CompOrder

use crate::oracle::CompOrder;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RmqError {
    #[error("array must be non-empty")]
    EmptyArray,
    #[error("empty range [{l}, {r})")]
    EmptyRange { l: usize, r: usize },
    #[error("range [{l}, {r}) out of bounds for length {len}")]
    RangeOutOfBounds { l: usize, r: usize, len: usize },
}

/// Table of `⌊log2 i⌋` for `1 <= i <= max`, so queries never touch
/// floating point.
#[derive(Debug, Clone)]
pub struct LgTable {
    table: Vec<u32>,
}

impl LgTable {
    pub fn new(max: usize) -> Self {
        let mut table = vec![0u32; max + 1];
        for i in 2..=max {
            table[i] = table[i / 2] + 1;
        }
        Self { table }
    }

    /// `⌊log2 i⌋`; `i` must be in `1..=max`.
    #[inline]
    pub fn get(&self, i: usize) -> usize {
        debug_assert!(i >= 1);
        self.table[i] as usize
    }

    pub fn max(&self) -> usize {
        self.table.len() - 1
    }
}

/// Sparse table over a sequence of distinct node ids, storing the
/// position of the block minimum per `(level, start)`.
#[derive(Debug, Clone)]
pub struct SparseTable {
    len: usize,
    levels: usize,
    /// Level-major, stride `len`; row `k` is valid for starts
    /// `0..=len - 2^k`.
    table: Vec<u32>,
}

impl SparseTable {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Stored minimum position of the block `[start, start + 2^level)`.
    #[inline]
    pub fn block_min(&self, level: usize, start: usize) -> usize {
        debug_assert!(start + (1 << level) <= self.len);
        self.table[level * self.len + start] as usize
    }

    pub(crate) fn rows(&self) -> &[u32] {
        &self.table
    }
}

/// Build the sparse table for `array` under `comp`, spending at most
/// `m * ⌊log2 m⌋` comp calls.
pub fn build_sparse_table(array: &[usize], comp: &CompOrder<'_>) -> Result<SparseTable, RmqError> {
    let m = array.len();
    if m == 0 {
        return Err(RmqError::EmptyArray);
    }
    let levels = m.ilog2() as usize + 1;
    let mut table = vec![0u32; levels * m];
    for (i, slot) in table[..m].iter_mut().enumerate() {
        *slot = i as u32;
    }
    for k in 1..levels {
        let half = 1usize << (k - 1);
        for i in 0..=(m - (1 << k)) {
            let left = table[(k - 1) * m + i] as usize;
            let right = table[(k - 1) * m + i + half] as usize;
            let min = if comp.precedes(array[left], array[right]) {
                left
            } else {
                right
            };
            table[k * m + i] = min as u32;
        }
    }
    Ok(SparseTable { len: m, levels, table })
}

/// For every position, the largest earlier position holding a strictly
/// lower element, or -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreLowerArray {
    pre_lower: Vec<i32>,
}

impl PreLowerArray {
    pub fn len(&self) -> usize {
        self.pre_lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pre_lower.is_empty()
    }

    /// `-1` when no earlier strictly-lower element exists, so the result
    /// compares against positions with plain integer comparisons.
    #[inline]
    pub fn get(&self, i: usize) -> i64 {
        self.pre_lower[i] as i64
    }

    pub fn from_raw(pre_lower: Vec<i32>) -> Self {
        Self { pre_lower }
    }

    pub(crate) fn raw(&self) -> &[i32] {
        &self.pre_lower
    }
}

/// Monotone-stack construction of [`PreLowerArray`], at most `2m` comp
/// calls: each position is pushed once and the comparison that pops it is
/// charged to the popped entry.
pub fn build_pre_lower(array: &[usize], comp: &CompOrder<'_>) -> PreLowerArray {
    let mut pre_lower = Vec::with_capacity(array.len());
    let mut stack: Vec<u32> = Vec::new();
    for (i, &node) in array.iter().enumerate() {
        while let Some(&top) = stack.last() {
            if comp.precedes(array[top as usize], node) {
                break;
            }
            stack.pop();
        }
        pre_lower.push(stack.last().map_or(-1, |&p| p as i32));
        stack.push(i as u32);
    }
    PreLowerArray { pre_lower }
}

/// Position of the unique minimum of the array over `[l, r)`, using the
/// stored tables only: no comp or oracle calls, constant time.
///
/// The two stored blocks of size `2^k` covering the range give candidate
/// positions `m1 <= m2`; when they differ, `pre_lower(m2) < m1` holds iff
/// the right candidate is the lower one.
#[inline]
pub fn rmq_query(
    table: &SparseTable,
    pre: &PreLowerArray,
    lg: &LgTable,
    l: usize,
    r: usize,
) -> Result<usize, RmqError> {
    if l >= r {
        return Err(RmqError::EmptyRange { l, r });
    }
    if r > table.len() {
        return Err(RmqError::RangeOutOfBounds { l, r, len: table.len() });
    }
    Ok(rmq_query_unchecked(table, pre, lg, l, r))
}

#[inline]
pub(crate) fn rmq_query_unchecked(
    table: &SparseTable,
    pre: &PreLowerArray,
    lg: &LgTable,
    l: usize,
    r: usize,
) -> usize {
    let k = lg.get(r - l);
    let m1 = table.block_min(k, l);
    let m2 = table.block_min(k, r - (1 << k));
    if m1 == m2 {
        return m1;
    }
    debug_assert!(m1 < m2, "distinct candidates straddle the overlap");
    if pre.get(m2) < m1 as i64 {
        m2
    } else {
        m1
    }
}
