//! Maximal points in the plane, by marriage-before-conquest with a sortedness
//! shortcut. Work adapts to how the input is arranged: an x- or y-sorted input
//! finishes in one linear sweep, and blocks hidden under the staircase are
//! pruned early.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{dominates, Point2};
use crate::ledger::{select, WorkLedger};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximaResult {
    /// Maximal points sorted by increasing x.
    pub maxima: Vec<Point2>,
    pub ledger: WorkLedger,
}

/// Maxima with the default seed.
pub fn maxima_set(points: &[Point2]) -> MaximaResult {
    maxima_set_with_seed(points, 0)
}

/// Maxima; `seed` drives the randomized median selection only, the output
/// does not depend on it.
pub fn maxima_set_with_seed(points: &[Point2], seed: u64) -> MaximaResult {
    let mut ledger = WorkLedger::new();
    let mut seen = HashSet::with_capacity(points.len());
    let pts: Vec<Point2> = points.iter().copied().filter(|p| seen.insert(*p)).collect();
    let Some(&pmax) = pts.iter().max() else {
        return MaximaResult { maxima: Vec::new(), ledger };
    };
    ledger.comparisons += pts.len() as u64;
    let pts: Vec<Point2> = pts.into_iter().filter(|&p| !dominates(pmax, p)).collect();
    ledger.comparisons += pts.len() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    recurse(pts, 0, &mut rng, &mut ledger, &mut out);
    MaximaResult { maxima: out, ledger }
}

/// Coordinate a sequence is monotone in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Certificate returned by [`sortedness_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SortedBy {
    pub axis: Axis,
    pub descending: bool,
}

/// One pass testing x-ascending, x-descending, y-ascending and y-descending
/// order at once (ties broken by the other coordinate). The first order that
/// holds is returned, in that priority.
pub fn sortedness_check(points: &[Point2]) -> Option<SortedBy> {
    sortedness(points, &mut WorkLedger::new())
}

pub(crate) fn sortedness(pts: &[Point2], ledger: &mut WorkLedger) -> Option<SortedBy> {
    let (mut xa, mut xd, mut ya, mut yd) = (true, true, true, true);
    for w in pts.windows(2) {
        ledger.comparisons += 2;
        let cx = w[0].cmp(&w[1]);
        let cy = w[0].cmp_yx(&w[1]);
        xa &= cx.is_lt();
        xd &= cx.is_gt();
        ya &= cy.is_lt();
        yd &= cy.is_gt();
        if !(xa || xd || ya || yd) {
            return None;
        }
    }
    let (axis, descending) = if xa {
        (Axis::X, false)
    } else if xd {
        (Axis::X, true)
    } else if ya {
        (Axis::Y, false)
    } else {
        (Axis::Y, true)
    };
    Some(SortedBy { axis, descending })
}

/// Maxima of a sequence that is monotone in x (either direction), in one
/// linear scan.
pub fn maxima_sorted_sweep(points: &[Point2]) -> crate::Result<Vec<Point2>> {
    match sortedness_check(points) {
        Some(o) if o.axis == Axis::X => Ok(sweep(points, o, &mut WorkLedger::new())),
        _ if points.len() <= 1 => Ok(points.to_vec()),
        _ => Err(crate::Error::pre("sequence is not monotone in x")),
    }
}

/// Split at the lower median in lexicographic order, preserving input order
/// on both sides. Returns `(left, right, median)`; `left` holds the points
/// `<= median`.
pub fn stable_partition_median_x(points: &[Point2], seed: u64) -> crate::Result<(Vec<Point2>, Vec<Point2>, Point2)> {
    if points.len() < 2 {
        return Err(crate::Error::pre("need at least two points to split"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(split_median(points.to_vec(), &mut rng, &mut WorkLedger::new()))
}

pub(crate) fn split_median(
    pts: Vec<Point2>,
    rng: &mut ChaCha8Rng,
    ledger: &mut WorkLedger,
) -> (Vec<Point2>, Vec<Point2>, Point2) {
    let med = select(&pts, (pts.len() - 1) / 2, |a, b| a.cmp(b), rng, ledger);
    ledger.comparisons += pts.len() as u64;
    let (left, right) = pts.into_iter().partition(|p| *p <= med);
    (left, right, med)
}

/// Linear sweep over a sorted sequence.
fn sweep(pts: &[Point2], order: SortedBy, ledger: &mut WorkLedger) -> Vec<Point2> {
    let mut out = Vec::new();
    match order.axis {
        Axis::X => {
            // scan by decreasing x; a point survives iff it beats the best y
            // seen among strictly larger x
            let it: Box<dyn Iterator<Item = &Point2>> =
                if !order.descending { Box::new(pts.iter().rev()) } else { Box::new(pts.iter()) };
            let (mut best_right, mut group_x, mut group_best) = (i64::MIN, i64::MIN, i64::MIN);
            for &p in it {
                ledger.comparisons += 2;
                if p.x != group_x {
                    best_right = best_right.max(group_best);
                    group_x = p.x;
                    group_best = i64::MIN;
                }
                if p.y >= best_right {
                    out.push(p);
                }
                group_best = group_best.max(p.y);
            }
            out.reverse();
        }
        Axis::Y => {
            let it: Box<dyn Iterator<Item = &Point2>> =
                if !order.descending { Box::new(pts.iter().rev()) } else { Box::new(pts.iter()) };
            let (mut best_above, mut group_y, mut group_best) = (i64::MIN, i64::MIN, i64::MIN);
            for &p in it {
                ledger.comparisons += 2;
                if p.y != group_y {
                    best_above = best_above.max(group_best);
                    group_y = p.y;
                    group_best = i64::MIN;
                }
                if p.x >= best_above {
                    out.push(p);
                }
                group_best = group_best.max(p.x);
            }
            out.sort_unstable();
        }
    }
    out
}

fn recurse(pts: Vec<Point2>, depth: usize, rng: &mut ChaCha8Rng, ledger: &mut WorkLedger, out: &mut Vec<Point2>) {
    ledger.enter(depth, pts.len());
    if pts.len() <= 1 {
        out.extend(pts);
        return;
    }
    if let Some(order) = sortedness(&pts, ledger) {
        out.extend(sweep(&pts, order, ledger));
        return;
    }
    let (left, right, _) = split_median(pts, rng, ledger);

    // highest point on the right, ties to larger x
    ledger.comparisons += right.len() as u64;
    let q = *right.iter().max_by(|a, b| a.cmp_yx(b)).expect("right half is nonempty");

    ledger.comparisons += (left.len() + right.len()) as u64;
    let mut left: Vec<Point2> = left.into_iter().filter(|&p| !dominates(q, p)).collect();
    let right: Vec<Point2> = right.into_iter().filter(|&p| p != q && !dominates(q, p)).collect();

    // left points sharing q's abscissa escape q but may lie under a right
    // point with strictly larger x
    if left.iter().any(|p| p.x == q.x) {
        ledger.comparisons += (left.len() + right.len()) as u64;
        if let Some(top) = right.iter().filter(|p| p.x > q.x).map(|p| p.y).max() {
            left.retain(|p| !(p.x == q.x && p.y < top));
        }
    }

    recurse(left, depth + 1, rng, ledger, out);
    let start = out.len();
    recurse(right, depth + 1, rng, ledger, out);
    let at = start + out[start..].partition_point(|p| *p < q);
    out.insert(at, q);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::maxima_brute;

    fn pts(v: &[(i64, i64)]) -> Vec<Point2> {
        v.iter().map(|&(x, y)| Point2::new(x, y)).collect()
    }

    #[test]
    fn staircase_is_all_maximal() {
        let s = pts(&[(1, 5), (2, 4), (3, 3)]);
        assert_eq!(maxima_set(&s).maxima, s);
    }

    #[test]
    fn diagonal_has_one_maximum() {
        let s = pts(&[(1, 1), (2, 2), (3, 3)]);
        assert_eq!(maxima_set(&s).maxima, pts(&[(3, 3)]));
    }

    #[test]
    fn duplicates_are_collapsed() {
        let s = pts(&[(2, 2), (2, 2), (1, 3), (1, 3)]);
        assert_eq!(maxima_set(&s).maxima, pts(&[(1, 3), (2, 2)]));
    }

    #[test]
    fn equal_abscissa_across_the_split() {
        let s = pts(&[(5, 1), (0, 0), (5, 10), (7, 3), (1, 2), (6, 0), (2, 9), (5, 4)]);
        assert_eq!(maxima_set(&s).maxima, maxima_brute(&s));
    }

    #[test]
    fn y_sorted_input_takes_the_sweep() {
        let s = pts(&[(3, 0), (1, 1), (2, 2), (0, 3), (2, 3), (4, 4)]);
        let r = maxima_set(&s);
        assert_eq!(r.maxima, maxima_brute(&s));
        assert_eq!(r.ledger.max_depth, 0);
    }

    #[test]
    fn sortedness_certificates() {
        assert_eq!(sortedness_check(&pts(&[(1, 5), (2, 1), (3, 9)])), Some(SortedBy { axis: Axis::X, descending: false }));
        assert_eq!(sortedness_check(&pts(&[(1, 5), (7, 3), (3, 1)])), Some(SortedBy { axis: Axis::Y, descending: true }));
        assert_eq!(sortedness_check(&pts(&[(1, 5), (7, 9), (3, 1)])), None);
    }

    #[test]
    fn sorted_sweep_cases() {
        let stair = pts(&[(1, 9), (2, 5), (3, 1)]);
        assert_eq!(maxima_sorted_sweep(&stair).unwrap(), stair);
        assert_eq!(maxima_sorted_sweep(&pts(&[(1, 1), (2, 5), (3, 9)])).unwrap(), pts(&[(3, 9)]));
        assert!(maxima_sorted_sweep(&pts(&[(2, 1), (1, 5), (3, 9)])).is_err());
    }

    #[test]
    fn median_split_is_stable() {
        let s = pts(&[(3, 0), (1, 0), (2, 0), (4, 0)]);
        let (l, r, m) = stable_partition_median_x(&s, 9).unwrap();
        assert_eq!((l, r, m), (pts(&[(1, 0), (2, 0)]), pts(&[(3, 0), (4, 0)]), Point2::new(2, 0)));
    }

    #[test]
    fn dominated_by_pmax_needs_no_recursion() {
        let mut s: Vec<Point2> = (0..50).map(|i| Point2::new(i % 7, i % 11)).collect();
        s.push(Point2::new(100, 100));
        let r = maxima_set(&s);
        assert_eq!(r.maxima, pts(&[(100, 100)]));
        assert_eq!(r.ledger.max_depth, 0);
    }

    #[test]
    fn empty_input() {
        assert!(maxima_set(&[]).maxima.is_empty());
    }
}
