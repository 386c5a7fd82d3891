//! Operation counting shared by every algorithm.

use std::cmp::Ordering;

use rand::Rng;
use serde::Serialize;

/// Counts of the elementary operations an algorithm performed.
///
/// `level_sizes[j]` is the total number of points handled by recursive calls
/// at depth `j`. `auxiliary` holds work done inside substituted primitives
/// (kept apart so it does not blur the main count).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WorkLedger {
    pub level_sizes: Vec<u64>,
    pub comparisons: u64,
    pub orientation_tests: u64,
    pub auxiliary: u64,
    pub max_depth: usize,
}

impl WorkLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record a recursive call at `depth` on `n` points.
    pub fn enter(&mut self, depth: usize, n: usize) {
        if self.level_sizes.len() <= depth {
            self.level_sizes.resize(depth + 1, 0);
        }
        self.level_sizes[depth] += n as u64;
        self.max_depth = self.max_depth.max(depth);
    }

    /// Comparisons plus orientation tests.
    pub fn work(&self) -> u64 {
        self.comparisons + self.orientation_tests
    }

    pub fn total_level_size(&self) -> u64 {
        self.level_sizes.iter().sum()
    }

    pub fn absorb(&mut self, other: &WorkLedger) {
        self.comparisons += other.comparisons;
        self.orientation_tests += other.orientation_tests;
        self.auxiliary += other.auxiliary;
        for (d, n) in other.level_sizes.iter().enumerate() {
            if self.level_sizes.len() <= d {
                self.level_sizes.resize(d + 1, 0);
            }
            self.level_sizes[d] += n;
        }
        self.max_depth = self.max_depth.max(other.max_depth);
    }
}

/// Randomized selection of the element of rank `k` (0-based) under `cmp`.
/// Every call of `cmp` is charged to `ledger.comparisons`.
pub(crate) fn select<T: Copy, R: Rng>(
    items: &[T],
    mut k: usize,
    mut cmp: impl FnMut(&T, &T) -> Ordering,
    rng: &mut R,
    ledger: &mut WorkLedger,
) -> T {
    assert!(k < items.len(), "rank out of range");
    let mut cur: Vec<T> = items.to_vec();
    loop {
        if cur.len() == 1 {
            return cur[0];
        }
        let pivot = cur[rng.gen_range(0..cur.len())];
        let (mut lo, mut eq, mut hi) = (Vec::new(), 0usize, Vec::new());
        for x in &cur {
            ledger.comparisons += 1;
            match cmp(x, &pivot) {
                Ordering::Less => lo.push(*x),
                Ordering::Equal => eq += 1,
                Ordering::Greater => hi.push(*x),
            }
        }
        if k < lo.len() {
            cur = lo;
        } else if k < lo.len() + eq {
            return pivot;
        } else {
            k -= lo.len() + eq;
            cur = hi;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn select_matches_sorting() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v: Vec<i32> = (0..200).map(|_| rng.gen_range(-50..50)).collect();
        let mut s = v.clone();
        s.sort();
        let mut l = WorkLedger::new();
        for k in [0, 17, 100, 199] {
            assert_eq!(select(&v, k, |a, b| a.cmp(b), &mut rng, &mut l), s[k]);
        }
        assert!(l.comparisons > 0);
    }

    #[test]
    fn levels_accumulate() {
        let mut l = WorkLedger::new();
        l.enter(0, 10);
        l.enter(1, 5);
        l.enter(1, 4);
        assert_eq!(l.level_sizes, vec![10, 9]);
        assert_eq!(l.max_depth, 1);
    }
}
