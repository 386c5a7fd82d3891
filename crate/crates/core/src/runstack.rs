//! Stack of weighted runs with TimSort-style collapse rules.
//!
//! Each entry carries a positive weight. After every push the stack is
//! collapsed until, reading from the top, each weight is at least the one above
//! it and at least the sum of the two above it. Weights therefore grow like
//! Fibonacci numbers toward the bottom and the height stays logarithmic in the
//! total weight.

use crate::ledger::WorkLedger;
use crate::Result;

#[derive(Debug)]
pub struct RunStack<T> {
    entries: Vec<(T, u64)>,
    /// Weights bottom-to-top after each push and its collapse.
    pub trace: Vec<Vec<u64>>,
    pub max_height: usize,
    pub merges: u64,
    /// Merges forced by the full-stack check rather than the four local rules.
    pub fallback_merges: u64,
}

impl<T> Default for RunStack<T> {
    fn default() -> Self {
        RunStack { entries: Vec::new(), trace: Vec::new(), max_height: 0, merges: 0, fallback_merges: 0 }
    }
}

/// True when bottom-to-top weights satisfy both growth conditions everywhere.
pub fn stack_invariant_holds(weights: &[u64]) -> bool {
    let h = weights.len();
    (0..h.saturating_sub(1)).all(|k| weights[k] >= weights[k + 1])
        && (0..h.saturating_sub(2)).all(|k| weights[k] >= weights[k + 1] + weights[k + 2])
}

impl<T> RunStack<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weights(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.1).collect()
    }

    /// Push a run and restore the invariants. `merge(deeper, upper)` combines
    /// two adjacent entries.
    pub fn push(&mut self, run: T, weight: u64, merge: &mut impl FnMut(T, T) -> Result<T>) -> Result<()> {
        assert!(weight > 0, "run weight must be positive");
        self.entries.push((run, weight));
        self.max_height = self.max_height.max(self.entries.len());
        self.collapse(merge)?;
        self.trace.push(self.weights());
        Ok(())
    }

    fn collapse(&mut self, merge: &mut impl FnMut(T, T) -> Result<T>) -> Result<()> {
        loop {
            let h = self.entries.len();
            let w = |i: usize| self.entries[h - i].1;
            let at = if h >= 3 && w(1) > w(3) {
                h - 3
            } else if (h >= 2 && w(1) >= w(2))
                || (h >= 3 && w(1) + w(2) >= w(3))
                || (h >= 4 && w(2) + w(3) >= w(4))
            {
                h - 2
            } else {
                break;
            };
            self.merge_at(at, merge)?;
        }
        while let Some(at) = self.first_violation() {
            self.fallback_merges += 1;
            self.merge_at(at, merge)?;
        }
        Ok(())
    }

    fn first_violation(&self) -> Option<usize> {
        let w = self.weights();
        let h = w.len();
        (0..h.saturating_sub(1)).rev().find_map(|k| {
            if w[k] < w[k + 1] {
                Some(k)
            } else if k + 2 < h && w[k] < w[k + 1] + w[k + 2] {
                Some(k + 1)
            } else {
                None
            }
        })
    }

    /// Merge entries `at` and `at + 1`.
    fn merge_at(&mut self, at: usize, merge: &mut impl FnMut(T, T) -> Result<T>) -> Result<()> {
        let (upper, wu) = self.entries.remove(at + 1);
        let (deeper, wd) = self.entries.remove(at);
        self.entries.insert(at, (merge(deeper, upper)?, wd + wu));
        self.merges += 1;
        Ok(())
    }

    /// Merge everything that is left, top first. Returns the final run and
    /// its weight.
    pub fn finish(mut self, merge: &mut impl FnMut(T, T) -> Result<T>) -> Result<Option<(T, u64)>> {
        while self.entries.len() > 1 {
            let at = self.entries.len() - 2;
            self.merge_at(at, merge)?;
        }
        Ok(self.entries.pop())
    }
}

/// Natural merge sort driven by the run stack. Descending runs are reversed
/// on entry, so the sort is not stable.
pub fn run_merge_sort<T: Ord + Clone>(seq: &[T]) -> (Vec<T>, WorkLedger) {
    let mut ledger = WorkLedger::new();
    let runs = crate::entropy::run_decompose(seq);
    ledger.comparisons += seq.len().saturating_sub(1) as u64;
    let mut stack = RunStack::new();
    let mut cmps = 0u64;
    let mut merge = |a: Vec<T>, b: Vec<T>| -> Result<Vec<T>> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            cmps += 1;
            if b[j] < a[i] {
                out.push(b[j].clone());
                j += 1;
            } else {
                out.push(a[i].clone());
                i += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(out)
    };
    for r in runs {
        let mut v = seq[r.start..r.start + r.len].to_vec();
        if r.direction == crate::entropy::Direction::NonIncreasing {
            v.reverse();
        }
        stack.push(v, r.len as u64, &mut merge).expect("sorting merge is infallible");
    }
    let height = stack.max_height;
    let out = stack.finish(&mut merge).expect("sorting merge is infallible").map(|r| r.0).unwrap_or_default();
    ledger.comparisons += cmps;
    ledger.max_depth = height;
    (out, ledger)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_check() {
        assert!(stack_invariant_holds(&[8, 5, 3, 1]));
        assert!(stack_invariant_holds(&[5]));
        assert!(!stack_invariant_holds(&[5, 3, 3]));
        assert!(!stack_invariant_holds(&[1, 2]));
    }

    #[test]
    fn stack_stays_fibonacci() {
        let mut s = RunStack::new();
        let mut add = |a: u64, b: u64| Ok(a + b);
        for w in [5u64, 3, 1, 1, 7, 2, 2, 2, 9, 1, 4, 1, 1, 1, 1, 30] {
            s.push(w, w, &mut add).unwrap();
        }
        assert!(s.trace.iter().all(|t| stack_invariant_holds(t)));
        let total: u64 = [5u64, 3, 1, 1, 7, 2, 2, 2, 9, 1, 4, 1, 1, 1, 1, 30].iter().sum();
        assert_eq!(s.finish(&mut add).unwrap(), Some((total, total)));
    }

    #[test]
    fn sorts_with_runs() {
        let v = vec![1, 4, 6, 3, 2, 2, 9, 10, 0, 5, 5];
        let (s, l) = run_merge_sort(&v);
        let mut w = v.clone();
        w.sort();
        assert_eq!(s, w);
        assert!(l.comparisons > 0);
        assert_eq!(run_merge_sort::<i32>(&[]).0, Vec::<i32>::new());
    }
}
