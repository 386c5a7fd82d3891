use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{arrange, fill_triangle, BlockSpec, PlantedInstance};
use crate::entropy::{partition_entropy, verify_respectful_hull, BlockKind, HullMode, Range, RangePartition, RangedBlock};
use crate::geometry::{orient2, Point2, Rect, Sign, Triangle2};
use crate::oracles::hull2_monotone;
use crate::{Error, Result};

/// Two parabolic arcs `y = ±(c - t^2)` at `x = 2t`, scaled by `s`. Every point
/// of both arcs together is in convex position once `c > t^2` for all `t`
/// used.
struct Lens {
    c: i64,
    s: i64,
}

impl Lens {
    fn at(&self, upper: bool, t: i64) -> Point2 {
        let y = self.c - t * t;
        Point2::new(2 * t * self.s, if upper { y } else { -y } * self.s)
    }

    /// Triangle bounded by the chord from `a` to `b` and the tangents there.
    fn cap(&self, upper: bool, a: i64, b: i64) -> Triangle2 {
        let (p, q) = (self.at(upper, a), self.at(upper, b));
        if a == b {
            return Triangle2::new(p, p, p);
        }
        let y = self.c - a * b;
        let apex = Point2::new((a + b) * self.s, if upper { y } else { -y } * self.s);
        Triangle2::new(p, q, apex)
    }
}

/// Planted hull instance.
///
/// Sorted blocks become consecutive stretches of two parabolic arcs, placed
/// around the lens in random order; each one's range is the cap between its
/// chord and the tangents at its ends, so caps are pairwise disjoint. Covered
/// blocks fill small triangles strictly inside the polygon spanned by the
/// stretch endpoints, which keeps them clear of every cap.
pub fn gen_hull_planted(blocks: &[BlockSpec], seed: u64, shuffle: bool) -> Result<PlantedInstance> {
    if blocks.iter().any(|b| b.size == 0) {
        return Err(Error::pre("block sizes must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sorted: Vec<usize> = (0..blocks.len()).filter(|&i| blocks[i].kind == BlockKind::Sorted).collect();
    sorted.shuffle(&mut rng);
    let total: usize = sorted.iter().map(|&i| blocks[i].size).sum();
    let mut upper_count = 0;
    let mut side = vec![true; blocks.len()];
    for &i in &sorted {
        side[i] = upper_count * 2 < total;
        if side[i] {
            upper_count += blocks[i].size;
        }
    }
    let lower_count = total - upper_count;
    let covered_total: usize = blocks.iter().filter(|b| b.kind == BlockKind::Covered).map(|b| b.size).sum();
    let t = upper_count.max(lower_count).max(1) as i64;
    let lens = Lens { c: t * t + 1, s: ((64.0 * ((covered_total + 1) as f64).sqrt()) as i64 / t).max(1) };

    let mut made: Vec<(BlockKind, Vec<Point2>)> = vec![(BlockKind::Covered, Vec::new()); blocks.len()];
    let mut caps: Vec<Option<Triangle2>> = vec![None; blocks.len()];
    let mut next = [-(upper_count as i64) / 2, -(lower_count as i64) / 2];
    let mut ends: Vec<Point2> = Vec::new();
    for &i in &sorted {
        let up = side[i];
        let k = usize::from(!up);
        let (a, b) = (next[k], next[k] + blocks[i].size as i64 - 1);
        next[k] = b + 1;
        let mut pts: Vec<Point2> = (a..=b).map(|t| lens.at(up, t)).collect();
        if rng.gen_bool(0.5) {
            pts.reverse();
        }
        ends.extend([lens.at(up, a), lens.at(up, b)]);
        caps[i] = Some(lens.cap(up, a, b));
        made[i] = (BlockKind::Sorted, pts);
    }

    let covered: Vec<usize> = (0..blocks.len()).filter(|&i| blocks[i].kind == BlockKind::Covered).collect();
    if !covered.is_empty() {
        let poly = hull2_monotone(&ends);
        if poly.len() < 3 {
            return Err(Error::pre("covered blocks need sorted blocks that enclose an area"));
        }
        let inside = |p: Point2| (0..poly.len()).all(|j| orient2(poly[j], poly[(j + 1) % poly.len()], p) == Sign::Positive);
        let bb = Rect::bounding(poly.iter().copied()).unwrap();
        let span = (bb.xmax - bb.xmin).min(bb.ymax - bb.ymin);
        for &i in &covered {
            let size = blocks[i].size;
            let min_rho = ((16 * size) as f64).sqrt() as i64 + 2;
            let mut rho = (span / (4 * (covered.len() as f64).sqrt() as i64 + 4)).max(min_rho);
            let mut attempts = 0u32;
            let tri = loop {
                attempts += 1;
                if attempts > 200_000 {
                    return Err(Error::pre("no room for a covered block inside the planted hull"));
                }
                let c = Point2::new(rng.gen_range(bb.xmin..=bb.xmax), rng.gen_range(bb.ymin..=bb.ymax));
                if !inside(c) {
                    continue;
                }
                let mut corner = || Point2::new(c.x + rng.gen_range(-rho..=rho), c.y + rng.gen_range(-rho..=rho));
                let tri = Triangle2::new(corner(), corner(), corner());
                let [p, q, r] = tri.vertices();
                if !(inside(p) && inside(q) && inside(r)) {
                    rho = (rho * 15 / 16).max(min_rho);
                    continue;
                }
                if crate::geometry::cross(p, q, r).unsigned_abs() >= 8 * size as u128 {
                    break tri;
                }
            };
            made[i] = (BlockKind::Covered, fill_triangle(&tri, size, &mut rng));
            caps[i] = Some(tri);
        }
    }

    finish(blocks, made, caps, shuffle, &mut rng, seed, "hull-planted")
}

fn finish(
    blocks: &[BlockSpec],
    made: Vec<(BlockKind, Vec<Point2>)>,
    caps: Vec<Option<Triangle2>>,
    shuffle: bool,
    rng: &mut ChaCha8Rng,
    seed: u64,
    generator: &str,
) -> Result<PlantedInstance> {
    let (points, members) = arrange(made, shuffle, rng);
    let certificate = RangePartition {
        n: points.len(),
        blocks: blocks
            .iter()
            .zip(members)
            .zip(caps)
            .map(|((b, m), cap)| RangedBlock { kind: b.kind, member_indices: m, range: Range::Triangle(cap.unwrap()) })
            .collect(),
    };
    verify_respectful_hull(&points, &certificate, HullMode::Full)
        .map_err(|v| Error::pre(format!("planted certificate rejected: {v}")))?;
    let entropy_bound = partition_entropy(&certificate.sizes(), points.len())?;
    Ok(PlantedInstance { points, certificate, entropy_bound, generator: generator.into(), seed })
}

/// `n` points in convex position on both arcs of a lens, listed in x order:
/// one sorted block, entropy zero.
pub fn circle_sorted(n: usize, seed: u64) -> Result<PlantedInstance> {
    if n == 0 {
        return Err(Error::pre("need at least one point"));
    }
    let (up, low) = (n.div_ceil(2) as i64, (n / 2) as i64);
    let lens = Lens { c: up * up + 1, s: 1 };
    let mut pts: Vec<Point2> = (0..up).map(|i| lens.at(true, i - up / 2)).collect();
    pts.extend((0..low).map(|i| lens.at(false, i - low / 2)));
    pts.sort_unstable();
    let bb = Rect::bounding(pts.iter().copied()).unwrap();
    let (w, h) = ((bb.xmax - bb.xmin).max(1), (bb.ymax - bb.ymin).max(1));
    let o = Point2::new(bb.xmin, bb.ymin);
    let tri = Triangle2::new(o, Point2::new(o.x + 2 * w, o.y), Point2::new(o.x, o.y + 2 * h));
    let blocks = [BlockSpec::sorted(n)];
    let made = vec![(BlockKind::Sorted, pts)];
    finish(&blocks, made, vec![Some(tri)], false, &mut ChaCha8Rng::seed_from_u64(seed), seed, "circle-sorted")
}
