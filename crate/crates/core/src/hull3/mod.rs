//! Upper hull in space by rounds of partition-and-prune.
//!
//! Each round splits the surviving points into `r` subsets with polyhedral
//! cells, drops every subset whose cell lies strictly below the upper hull,
//! and squares `r` for the next round. The survivors go to a randomized
//! incremental hull at the end.

mod incremental;
mod lp;
mod partition;

use std::collections::{BTreeSet, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::{Box3, Plane3, Point2, Point3};
use crate::hull2::convex_hull;
use crate::ledger::WorkLedger;
use crate::oracles::upper_planes;
use incremental::{hull_faces, Solid};

pub use lp::{cell_below_upper_hull, point_below_upper_hull};
pub use partition::{
    eight_partition, levels_for, octant_bounds, recursive_partition, OctantSplit, PartitionTree, SplitPlane,
    MIN_SAMPLE, MIN_SPLIT, SAMPLE_THRESHOLD,
};

/// Points kept per subset for the quick pruning pass.
const TOP_PER_PART: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RoundReport {
    /// Target subset count for the round.
    pub r: usize,
    /// Subsets actually produced.
    pub parts: usize,
    pub input: usize,
    pub pruned: usize,
    pub retries: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hull3Options {
    pub seed: u64,
    /// Also compute the full hull of every input point.
    pub full: bool,
    /// Run the pruning rounds; off means a plain incremental hull.
    pub prune: bool,
}

impl Default for Hull3Options {
    fn default() -> Self {
        Hull3Options { seed: 0, full: false, prune: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hull3Result {
    /// Upper facets as index triples, counterclockwise seen from above.
    pub upper: Vec<[usize; 3]>,
    /// Every facet, outward-oriented, when requested.
    pub full: Option<Vec<[usize; 3]>>,
    /// Indices dropped by the pruning rounds.
    pub pruned: Vec<usize>,
    pub rounds: Vec<RoundReport>,
    /// Set when the input is coplanar: the hull polygon's indices,
    /// counterclockwise in the projection used.
    pub flat: Option<Vec<usize>>,
    pub ledger: WorkLedger,
}

impl Hull3Result {
    /// Supporting planes of the upper facets.
    pub fn upper_planes(&self, points: &[Point3]) -> BTreeSet<Plane3> {
        upper_planes(points, &self.upper)
    }

    /// Pruned points not strictly below every upper facet plane.
    pub fn pruning_violations(&self, points: &[Point3]) -> usize {
        let planes = self.upper_planes(points);
        if planes.is_empty() {
            return self.pruned.len();
        }
        self.pruned.iter().filter(|&&i| planes.iter().any(|pl| pl.eval(points[i]) >= 0)).count()
    }
}

pub fn hull3d(points: &[Point3], seed: u64) -> Hull3Result {
    hull3d_with(points, Hull3Options { seed, ..Default::default() })
}

/// Upper hull of a point set; coplanar input falls back to a planar hull and
/// sets [`Hull3Result::flat`].
pub fn hull3d_with(points: &[Point3], opts: Hull3Options) -> Hull3Result {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut ledger = WorkLedger::new();
    let mut alive: Vec<usize> = (0..points.len()).collect();
    let mut pruned = Vec::new();
    let mut rounds = Vec::new();
    if opts.prune {
        prune(points, &mut alive, &mut pruned, &mut rounds, &mut rng, &mut ledger);
    }
    let (upper, flat) = match hull_faces(points, &alive, &mut rng, &mut ledger) {
        Solid::Faces(faces) => {
            let up = faces.into_iter().filter(|&f| crate::oracles::normal(points, f)[2] > 0).collect();
            (up, None)
        }
        Solid::Flat => {
            let (up, ring) = flat_hull(points, &alive);
            (up, Some(ring))
        }
    };
    let full = opts.full.then(|| {
        let all: Vec<usize> = (0..points.len()).collect();
        match hull_faces(points, &all, &mut rng, &mut WorkLedger::new()) {
            Solid::Faces(f) => f,
            Solid::Flat => Vec::new(),
        }
    });
    Hull3Result { upper, full, pruned, rounds, flat, ledger }
}

fn prune(
    points: &[Point3],
    alive: &mut Vec<usize>,
    pruned: &mut Vec<usize>,
    rounds: &mut Vec<RoundReport>,
    rng: &mut ChaCha8Rng,
    ledger: &mut WorkLedger,
) {
    let n = points.len();
    if n < MIN_SPLIT {
        return;
    }
    let last = (n as f64).log2().log2().floor() as u32;
    for j in 0..=last {
        let m = alive.len();
        // r_j = 2^(2^j); every part at the last level must still be splittable
        let want = 2usize.saturating_pow(1 << j);
        let cap = (m as f64).log(16.0).floor() as u32;
        let levels = levels_for(want).min(cap);
        if levels == 0 {
            break;
        }
        let Ok(tree) = partition::partition_indices(points, alive, 8usize.pow(levels), rng, ledger) else { break };
        let full: Vec<Point3> = alive.iter().map(|&i| points[i]).collect();
        let bbox = Box3::of(&full).expect("nonempty");
        let mut quick: Vec<Point3> = Vec::new();
        for part in &tree.subsets {
            let mut top: Vec<Point3> = part.iter().map(|&i| points[i]).collect();
            top.sort_by_key(|p| std::cmp::Reverse(p.z));
            quick.extend(top.into_iter().take(TOP_PER_PART));
        }
        let mut keep = Vec::with_capacity(m);
        let mut cut = 0;
        for (part, cell) in tree.subsets.iter().zip(&tree.cells) {
            if part.is_empty() {
                continue;
            }
            let mut aux = 0;
            let verdict = lp::cell_below(cell, &bbox, &quick, &full, rng, &mut aux);
            ledger.auxiliary += aux;
            match verdict {
                Ok((true, tested)) => {
                    ledger.comparisons += tested as u64;
                    pruned.extend_from_slice(part);
                    cut += part.len();
                }
                Ok((false, tested)) => {
                    ledger.comparisons += tested as u64;
                    keep.extend_from_slice(part);
                }
                Err(_) => keep.extend_from_slice(part),
            }
        }
        rounds.push(RoundReport { r: want, parts: tree.r, input: m, pruned: cut, retries: tree.retries });
        *alive = keep;
    }
}

/// Planar hull of coplanar points, projected along the dominant axis of
/// their plane; the polygon is fanned into upper facets unless the plane is
/// vertical.
fn flat_hull(points: &[Point3], idx: &[usize]) -> (Vec<[usize; 3]>, Vec<usize>) {
    let mut distinct: Vec<usize> = idx.to_vec();
    distinct.sort_by_key(|&i| (points[i], i));
    distinct.dedup_by_key(|i| points[*i]);
    let normal = distinct.first().and_then(|&a| {
        distinct.iter().find_map(|&b| {
            distinct.iter().find_map(|&c| Plane3::through(points[a], points[b], points[c]).map(|pl| [pl.a, pl.b, pl.c]))
        })
    });
    let axis = normal.map_or(2, |n| (0..3).max_by_key(|&i| n[i].unsigned_abs()).unwrap_or(2));
    let proj = |p: Point3| match axis {
        0 => Point2 { x: p.y, y: p.z },
        1 => Point2 { x: p.z, y: p.x },
        _ => Point2 { x: p.x, y: p.y },
    };
    let back: HashMap<Point2, usize> = distinct.iter().map(|&i| (proj(points[i]), i)).collect();
    let ring: Vec<usize> = convex_hull(&distinct.iter().map(|&i| proj(points[i])).collect::<Vec<_>>())
        .vertices
        .iter()
        .map(|p| back[p])
        .collect();
    let mut up = Vec::new();
    if let Some(n) = normal {
        if n[2] != 0 && ring.len() >= 3 {
            for k in 1..ring.len() - 1 {
                let mut t = [ring[0], ring[k], ring[k + 1]];
                if crate::oracles::normal(points, t)[2] < 0 {
                    t.swap(1, 2);
                }
                up.push(t);
            }
        }
    }
    (up, ring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{ball, paraboloid};
    use crate::oracles::{hull3_incremental, upper_hull_planes_brute};

    #[test]
    fn tent_with_one_point_inside() {
        let pts = vec![
            Point3::new(0, 0, 0),
            Point3::new(10, 0, 0),
            Point3::new(0, 10, 0),
            Point3::new(10, 10, 0),
            Point3::new(5, 5, 10),
            Point3::new(5, 4, 1),
        ];
        let h = hull3d(&pts, 1);
        assert_eq!(h.upper_planes(&pts), upper_hull_planes_brute(&pts));
        assert!(h.upper.iter().all(|f| !f.contains(&5)));
    }

    #[test]
    fn matches_incremental_oracle() {
        for seed in 0..20 {
            let pts = ball(150, 200, seed);
            let h = hull3d(&pts, seed);
            let want = upper_planes(&pts, &hull3_incremental(&pts).unwrap());
            assert_eq!(h.upper_planes(&pts), want, "seed {seed}");
            assert_eq!(h.pruning_violations(&pts), 0);
        }
    }

    #[test]
    fn paraboloid_keeps_everything() {
        let pts = paraboloid(300, 1000, 2);
        let h = hull3d(&pts, 2);
        assert!(h.pruned.is_empty());
        let on: BTreeSet<usize> = h.upper.iter().flatten().copied().collect();
        assert_eq!(on.len(), 300);
    }

    #[test]
    fn coplanar_input_is_flagged() {
        let pts: Vec<Point3> = (0..20).map(|k| Point3::new(k % 5, k / 5, 2 * (k % 5) + 3 * (k / 5))).collect();
        let h = hull3d(&pts, 0);
        assert_eq!(h.flat.as_ref().map(|r| r.len()), Some(4));
        assert_eq!(h.upper.len(), 2);
    }
}
