//! Set partitions as restricted growth strings.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Enumerates every partition of `n` records into at most `k` nonempty
/// blocks, each exactly once, in lexicographic restricted-growth-string order:
/// record 0 is in block 0 and each record's block is at most one more than
/// the largest block used before it.
#[derive(Debug, Clone)]
pub struct PartitionIterator {
    k: usize,
    current: Option<Vec<usize>>,
}

impl PartitionIterator {
    pub fn new(n_records: usize, k: usize) -> Self {
        let current = if k == 0 && n_records > 0 { None } else { Some(vec![0; n_records]) };
        Self { k, current }
    }

    /// Continue from an explicit restricted growth string (inclusive).
    pub fn starting_at(rgs: Vec<usize>, k: usize) -> Self {
        Self { k, current: Some(rgs) }
    }
}

/// Advances `a` to the next restricted growth string with blocks `< k`,
/// leaving positions before `floor` untouched. Returns false when exhausted.
pub fn advance(a: &mut [usize], k: usize, floor: usize) -> bool {
    let n = a.len();
    let mut prefix_max = vec![0usize; n];
    let mut m = 0;
    for i in 0..n {
        prefix_max[i] = m;
        m = m.max(a[i]);
    }
    for i in (floor.max(1)..n).rev() {
        if a[i] + 1 < k && a[i] <= prefix_max[i] {
            a[i] += 1;
            for x in &mut a[i + 1..] {
                *x = 0;
            }
            return true;
        }
    }
    false
}

impl Iterator for PartitionIterator {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        if advance(&mut next, self.k, 0) {
            self.current = Some(next);
        }
        Some(out)
    }
}

/// Stirling number of the second kind `S(n, k)`.
pub fn stirling2(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut row = vec![BigUint::zero(); k + 1];
    row[0] = BigUint::one();
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = &row[j] * BigUint::from(j) + &row[j - 1];
        }
        row[0] = BigUint::zero();
    }
    row[k].clone()
}

/// Number of partitions of `n` records into at most `k` nonempty blocks.
pub fn partition_count(n: usize, k: usize) -> BigUint {
    if n == 0 {
        return BigUint::one();
    }
    (1..=k.min(n)).map(|j| stirling2(n, j)).sum()
}

/// Number of blocks used by a restricted growth string.
pub fn block_count(rgs: &[usize]) -> usize {
    rgs.iter().max().map_or(0, |m| m + 1)
}
