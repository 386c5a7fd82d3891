//! Planar convex hull by marriage-before-conquest.
//!
//! Each call prunes everything strictly under the chord between its extreme
//! points, finishes with a linear scan when the survivors are already sorted
//! by x, and otherwise finds the hull edge over the median (the bridge)
//! before recursing on the two outer sides.
//!
//! Ties in x are broken by y throughout, which is the same as shearing the
//! plane by an infinitesimal amount; orientation tests are unaffected.

use std::cmp::Ordering;
use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{orient2, Point2, Sign};
use crate::ledger::{select, WorkLedger};
use crate::maxima::{sortedness, split_median, Axis};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hull2Result {
    /// Counterclockwise, starting at the lexicographically smallest vertex.
    pub vertices: Vec<Point2>,
    /// Set when the hull is a point or a segment.
    pub degenerate: bool,
    pub ledger: WorkLedger,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HullOptions {
    pub seed: u64,
    /// Also list input points lying on hull edges.
    pub keep_collinear: bool,
}

pub fn convex_hull(points: &[Point2]) -> Hull2Result {
    convex_hull_with(points, HullOptions::default())
}

pub fn convex_hull_with(points: &[Point2], opts: HullOptions) -> Hull2Result {
    let mut seen = HashSet::with_capacity(points.len());
    let pts: Vec<Point2> = points.iter().copied().filter(|p| seen.insert(*p)).collect();
    let mut ledger = WorkLedger::new();
    if pts.len() <= 2 {
        let mut v = pts;
        v.sort_unstable();
        return Hull2Result { vertices: v, degenerate: true, ledger };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let upper = upper_hull_impl(pts.clone(), &mut rng, &mut ledger, None);
    let rotated: Vec<Point2> = pts.iter().map(|p| Point2 { x: -p.x, y: -p.y }).collect();
    let mut lower: Vec<Point2> = upper_hull_impl(rotated, &mut rng, &mut ledger, None)
        .into_iter()
        .map(|p| Point2 { x: -p.x, y: -p.y })
        .collect();
    lower.reverse();

    let degenerate = upper.len() == 2 && lower.len() == 2;
    let mut vertices = lower.clone();
    vertices.pop();
    vertices.extend(upper.iter().rev().take(upper.len() - 1));
    if degenerate {
        vertices.truncate(2);
    }
    if opts.keep_collinear {
        vertices = with_collinear(&pts, &lower, &upper, degenerate);
    }
    Hull2Result { vertices, degenerate, ledger }
}

/// Reinsert boundary points that lie on hull edges.
fn with_collinear(pts: &[Point2], lower: &[Point2], upper: &[Point2], degenerate: bool) -> Vec<Point2> {
    if degenerate {
        let mut v = pts.to_vec();
        v.sort_unstable();
        return v;
    }
    let mut on_lower: Vec<Vec<Point2>> = vec![Vec::new(); lower.len()];
    let mut on_upper: Vec<Vec<Point2>> = vec![Vec::new(); upper.len()];
    for &p in pts {
        for (chain, bins) in [(lower, &mut on_lower), (upper, &mut on_upper)] {
            let i = chain.partition_point(|v| *v < p);
            if i > 0 && i < chain.len() && chain[i] != p && orient2(chain[i - 1], chain[i], p) == Sign::Zero {
                bins[i - 1].push(p);
            }
        }
    }
    let mut out = Vec::new();
    for i in 0..lower.len() - 1 {
        out.push(lower[i]);
        on_lower[i].sort_unstable();
        out.extend(&on_lower[i]);
    }
    for i in (1..upper.len()).rev() {
        out.push(upper[i]);
        on_upper[i - 1].sort_unstable_by(|a, b| b.cmp(a));
        out.extend(&on_upper[i - 1]);
    }
    out
}

/// Upper hull from the lexicographically smallest to the largest point.
pub fn upper_hull(points: &[Point2], seed: u64) -> (Vec<Point2>, WorkLedger) {
    let mut seen = HashSet::with_capacity(points.len());
    let pts: Vec<Point2> = points.iter().copied().filter(|p| seen.insert(*p)).collect();
    let mut ledger = WorkLedger::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = upper_hull_impl(pts, &mut rng, &mut ledger, None);
    (h, ledger)
}

/// Like [`upper_hull`], also returning every point discarded by a pruning step.
#[doc(hidden)]
pub fn upper_hull_traced(points: &[Point2], seed: u64) -> (Vec<Point2>, WorkLedger, Vec<Point2>) {
    let mut seen = HashSet::with_capacity(points.len());
    let pts: Vec<Point2> = points.iter().copied().filter(|p| seen.insert(*p)).collect();
    let mut ledger = WorkLedger::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pruned = Vec::new();
    let h = upper_hull_impl(pts, &mut rng, &mut ledger, Some(&mut pruned));
    (h, ledger, pruned)
}

fn upper_hull_impl(
    pts: Vec<Point2>,
    rng: &mut ChaCha8Rng,
    ledger: &mut WorkLedger,
    mut pruned: Option<&mut Vec<Point2>>,
) -> Vec<Point2> {
    let mut out = Vec::new();
    if !pts.is_empty() {
        recurse(pts, 0, rng, ledger, &mut out, &mut pruned);
    }
    out
}

fn recurse(
    mut pts: Vec<Point2>,
    depth: usize,
    rng: &mut ChaCha8Rng,
    ledger: &mut WorkLedger,
    out: &mut Vec<Point2>,
    pruned: &mut Option<&mut Vec<Point2>>,
) {
    ledger.enter(depth, pts.len());
    ledger.comparisons += 2 * pts.len() as u64;
    let l = *pts.iter().min().unwrap();
    let r = *pts.iter().max().unwrap();
    if l == r {
        out.push(l);
        return;
    }
    ledger.orientation_tests += pts.len() as u64;
    pts.retain(|&p| {
        let keep = p == l || p == r || orient2(l, r, p) != Sign::Negative;
        if !keep {
            if let Some(v) = pruned.as_deref_mut() {
                v.push(p);
            }
        }
        keep
    });
    if pts.len() <= 2 {
        out.extend([l, r]);
        return;
    }
    if let Some(order) = sortedness(&pts, ledger).filter(|o| o.axis == Axis::X) {
        if order.descending {
            pts.reverse();
        }
        out.extend(scan_upper(&pts, ledger));
        return;
    }
    let (left, right, med) = split_median(pts, rng, ledger);
    let (q, q2) = bridge_ks(left.iter().chain(right.iter()).copied().collect(), med, rng, ledger);
    ledger.comparisons += (left.len() + right.len()) as u64;
    if let Some(v) = pruned.as_deref_mut() {
        v.extend(left.iter().chain(right.iter()).filter(|p| q < **p && **p < q2));
    }
    let left: Vec<Point2> = left.into_iter().filter(|p| *p <= q).collect();
    let right: Vec<Point2> = right.into_iter().filter(|p| *p >= q2).collect();
    recurse(left, depth + 1, rng, ledger, out, pruned);
    recurse(right, depth + 1, rng, ledger, out, pruned);
}

/// Upper chain of a lexicographically increasing sequence.
fn scan_upper(pts: &[Point2], ledger: &mut WorkLedger) -> Vec<Point2> {
    let mut h: Vec<Point2> = Vec::with_capacity(pts.len());
    for &p in pts {
        while h.len() >= 2 {
            ledger.orientation_tests += 1;
            if orient2(h[h.len() - 2], h[h.len() - 1], p) == Sign::Negative {
                break;
            }
            h.pop();
        }
        h.push(p);
    }
    h
}

/// Full hull of a sequence monotone in x, in linear time.
pub fn graham_scan_sorted(points: &[Point2]) -> Result<Vec<Point2>> {
    let mut ledger = WorkLedger::new();
    let mut pts = points.to_vec();
    pts.dedup();
    match sortedness(&pts, &mut ledger) {
        Some(o) if o.axis == Axis::X => {
            if o.descending {
                pts.reverse();
            }
        }
        _ if pts.len() <= 1 => return Ok(pts),
        _ => return Err(Error::pre("sequence is not monotone in x")),
    }
    let upper = scan_upper(&pts, &mut ledger);
    let rotated: Vec<Point2> = pts.iter().rev().map(|p| Point2 { x: -p.x, y: -p.y }).collect();
    let lower: Vec<Point2> = scan_upper(&rotated, &mut ledger).into_iter().rev().map(|p| Point2 { x: -p.x, y: -p.y }).collect();
    if upper.len() <= 2 && lower.len() <= 2 {
        return Ok(upper);
    }
    let mut v = lower;
    v.pop();
    v.extend(upper.iter().rev().take(upper.len() - 1));
    Ok(v)
}

/// Compare the slopes of lexicographically increasing pairs. A pair sharing
/// its x-coordinate counts as infinitely steep.
fn cmp_slope(a: (Point2, Point2), b: (Point2, Point2)) -> Ordering {
    let (dxa, dya) = ((a.1.x - a.0.x) as i128, (a.1.y - a.0.y) as i128);
    let (dxb, dyb) = ((b.1.x - b.0.x) as i128, (b.1.y - b.0.y) as i128);
    match (dxa == 0, dxb == 0) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        (false, false) => (dya * dxb).cmp(&(dyb * dxa)),
    }
}

/// Upper bridge over the split `{p <= split} | {p > split}` (lexicographic).
/// Returns the extreme contact points of the bridge line.
fn bridge_ks(mut cand: Vec<Point2>, split: Point2, rng: &mut ChaCha8Rng, ledger: &mut WorkLedger) -> (Point2, Point2) {
    loop {
        if cand.len() == 2 {
            let (a, b) = (cand[0].min(cand[1]), cand[0].max(cand[1]));
            return (a, b);
        }
        let mut next: Vec<Point2> = Vec::with_capacity(cand.len());
        let mut pairs: Vec<(Point2, Point2)> = Vec::with_capacity(cand.len() / 2);
        for c in cand.chunks(2) {
            match c {
                [a, b] => pairs.push((*a.min(b), *a.max(b))),
                [a] => next.push(*a),
                _ => unreachable!(),
            }
        }
        let k = select(&pairs, pairs.len() / 2, |a, b| cmp_slope(*a, *b), rng, ledger);
        let (dx, dy) = ((k.1.x - k.0.x) as i128, (k.1.y - k.0.y) as i128);
        ledger.orientation_tests += cand.len() as u64;
        let height = |p: &Point2| dx * p.y as i128 - dy * p.x as i128;
        let top = cand.iter().map(height).max().unwrap();
        let contact = cand.iter().filter(|p| height(p) == top);
        let lo = *contact.clone().min().unwrap();
        let hi = *contact.max().unwrap();
        if lo <= split && hi > split {
            return (lo, hi);
        }
        let bridge_is_flatter = hi <= split;
        ledger.orientation_tests += pairs.len() as u64;
        for &(a, b) in &pairs {
            match (bridge_is_flatter, cmp_slope((a, b), k)) {
                (true, Ordering::Less) | (false, Ordering::Greater) => next.extend([a, b]),
                (true, _) => next.push(b),
                (false, _) => next.push(a),
            }
        }
        cand = next;
    }
}

/// Upper bridge over the vertical line `x = m` (points with `x <= m` on the
/// left). Errors if either side is empty.
pub fn bridge(points: &[Point2], m: i64, seed: u64) -> Result<(Point2, Point2)> {
    let mut seen = HashSet::with_capacity(points.len());
    let pts: Vec<Point2> = points.iter().copied().filter(|p| seen.insert(*p)).collect();
    if !pts.iter().any(|p| p.x <= m) || !pts.iter().any(|p| p.x > m) {
        return Err(Error::pre(format!("no points on one side of x = {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(bridge_ks(pts, Point2 { x: m, y: i64::MAX }, &mut rng, &mut WorkLedger::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{bridge_brute, hull2_monotone};

    fn pts(v: &[(i64, i64)]) -> Vec<Point2> {
        v.iter().map(|&(x, y)| Point2::new(x, y)).collect()
    }

    #[test]
    fn triangle_is_counterclockwise() {
        let h = convex_hull(&pts(&[(4, 4), (0, 0), (5, 0)]));
        assert_eq!(h.vertices, pts(&[(0, 0), (5, 0), (4, 4)]));
        assert!(!h.degenerate);
    }

    #[test]
    fn collinear_input_is_degenerate() {
        let h = convex_hull(&pts(&[(2, 2), (0, 0), (1, 1), (3, 3)]));
        assert_eq!(h.vertices, pts(&[(0, 0), (3, 3)]));
        assert!(h.degenerate);
        let k = convex_hull_with(&pts(&[(2, 2), (0, 0), (1, 1)]), HullOptions { keep_collinear: true, ..Default::default() });
        assert_eq!(k.vertices.len(), 3);
    }

    #[test]
    fn keep_collinear_lists_edge_points() {
        let s = pts(&[(0, 0), (2, 0), (4, 0), (4, 4), (2, 4), (0, 4), (0, 2), (2, 2)]);
        let h = convex_hull_with(&s, HullOptions { keep_collinear: true, ..Default::default() });
        assert_eq!(h.vertices, pts(&[(0, 0), (2, 0), (4, 0), (4, 4), (2, 4), (0, 4), (0, 2)]));
        assert_eq!(convex_hull(&s).vertices, pts(&[(0, 0), (4, 0), (4, 4), (0, 4)]));
    }

    #[test]
    fn points_under_the_chord_leave_two_endpoints() {
        let (h, l) = upper_hull(&pts(&[(0, 10), (3, 2), (5, 1), (7, 4), (10, 10)]), 1);
        assert_eq!(h, pts(&[(0, 10), (10, 10)]));
        assert_eq!(l.max_depth, 0);
    }

    #[test]
    fn vertical_edges_at_the_ends() {
        let s = pts(&[(0, 0), (0, 5), (3, 1), (3, 7), (1, 2), (2, 9), (3, 0)]);
        assert_eq!(convex_hull(&s).vertices, hull2_monotone(&s));
    }

    #[test]
    fn bridge_on_a_parabola() {
        let s: Vec<Point2> = (-10..=10).map(|t| Point2::new(t, -t * t)).collect();
        assert_eq!(bridge(&s, 3, 5).unwrap(), (Point2::new(3, -9), Point2::new(4, -16)));
        assert_eq!(bridge(&s, 3, 5).unwrap(), bridge_brute(&s, Point2 { x: 3, y: i64::MAX }).unwrap());
        assert!(bridge(&s, 20, 5).is_err());
    }

    #[test]
    fn two_point_bridge() {
        assert_eq!(bridge(&pts(&[(5, 0), (0, 0)]), 2, 0).unwrap(), (Point2::new(0, 0), Point2::new(5, 0)));
    }

    #[test]
    fn sorted_scan_drops_interior_points() {
        let s = pts(&[(0, 0), (1, 1), (2, -3), (3, 0), (4, 5), (5, 0)]);
        assert_eq!(graham_scan_sorted(&s).unwrap(), hull2_monotone(&s));
        assert_eq!(graham_scan_sorted(&pts(&[(0, 0), (1, 1)])).unwrap(), pts(&[(0, 0), (1, 1)]));
        assert!(graham_scan_sorted(&pts(&[(3, 0), (1, 1), (2, 2)])).is_err());
    }
}
