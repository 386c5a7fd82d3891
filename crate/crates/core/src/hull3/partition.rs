//! Balanced eight-way splits by three planes, and the cell tree built by
//! applying them recursively.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::{HalfSpace3, Plane3, Point3, PolyCell3};
use crate::ledger::WorkLedger;
use crate::{Error, Result};

/// Inputs smaller than this are searched directly instead of through a sample.
pub const SAMPLE_THRESHOLD: usize = 4096;
/// Floor on the sample size; `n^(1/10)` alone is far too small to steer three planes.
pub const MIN_SAMPLE: usize = 512;
/// Smallest input that can be split so every octant gets a point.
pub const MIN_SPLIT: usize = 16;

const NORMAL_RANGE: i64 = 4096;
/// Normals are scaled into this range so cell vertices stay exact in 256 bits.
const NORMAL_LIMIT: i128 = 1 << 30;
const B_CANDIDATES: usize = 24;
const C_CANDIDATES: usize = 48;

/// Oriented plane `normal . p = threshold`. The `+` side is `normal . p >= threshold`,
/// so a point on the plane counts as `+`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SplitPlane {
    pub normal: [i64; 3],
    pub threshold: i128,
}

impl SplitPlane {
    pub fn value(&self, p: Point3) -> i128 {
        let n = self.normal;
        n[0] as i128 * p.x as i128 + n[1] as i128 * p.y as i128 + n[2] as i128 * p.z as i128
    }

    pub fn plus(&self, p: Point3) -> bool {
        self.value(p) >= self.threshold
    }

    pub fn plane(&self) -> Plane3 {
        let n = self.normal;
        Plane3::new(n[0] as i128, n[1] as i128, n[2] as i128, self.threshold).expect("split normal is nonzero")
    }

    /// Closed halfspace containing the `+` side, or the `-` side.
    pub fn halfspace(&self, plus: bool) -> HalfSpace3 {
        let plane = self.plane();
        let n = self.normal;
        let lead = if n[2] != 0 { n[2] } else if n[1] != 0 { n[1] } else { n[0] };
        // Plane3 flips the normal to make its leading entry positive
        HalfSpace3 { plane, positive: plus == (lead > 0) }
    }
}

/// Three planes and the eight octants they cut a point set into.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OctantSplit {
    pub planes: [SplitPlane; 3],
    /// `parts[k]` holds the points on the `+` side of plane `j` exactly when
    /// bit `j` of `k` is set.
    pub parts: [Vec<usize>; 8],
    /// Candidate triples rejected before this one.
    pub retries: usize,
    /// Size of the sample the accepted triple was found on.
    pub sample_size: usize,
    /// Samples drawn in total, counting those outside the size window.
    pub sample_draws: usize,
}

impl OctantSplit {
    /// Label of the octant holding `p`.
    pub fn octant(&self, p: Point3) -> usize {
        (0..3).filter(|&j| self.planes[j].plus(p)).map(|j| 1 << j).sum()
    }
}

/// Bounds every octant must meet for an input of `n` points.
pub fn octant_bounds(n: usize) -> (usize, usize) {
    (n.div_ceil(16), 3 * n / 16)
}

fn sample_target(n: usize) -> f64 {
    (n as f64).powf(0.1).max(MIN_SAMPLE as f64)
}

fn random_normal(rng: &mut ChaCha8Rng) -> [i64; 3] {
    loop {
        let n = [(); 3].map(|_| rng.gen_range(-NORMAL_RANGE..=NORMAL_RANGE));
        if n != [0; 3] {
            return n;
        }
    }
}

/// Shrink `v` into the normal range, keeping its direction roughly.
fn fit(v: [i128; 3]) -> [i64; 3] {
    let big = v.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
    let shift = (128 - big.leading_zeros()).saturating_sub(NORMAL_LIMIT.trailing_zeros());
    v.map(|c| (c >> shift) as i64)
}

/// Normal of the plane through three random sample points, so candidates
/// follow the shape of the data; falls back to a random direction.
fn sample_normal(pts: &[Point3], rng: &mut ChaCha8Rng) -> [i64; 3] {
    for _ in 0..4 {
        let [a, b, c] = [(); 3].map(|_| pts[rng.gen_range(0..pts.len())]);
        let u = [(b.x - a.x) as i128, (b.y - a.y) as i128, (b.z - a.z) as i128];
        let v = [(c.x - a.x) as i128, (c.y - a.y) as i128, (c.z - a.z) as i128];
        let n = fit([u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]);
        if n != [0; 3] {
            return n;
        }
    }
    random_normal(rng)
}

fn dot(n: [i64; 3], p: Point3) -> i128 {
    n[0] as i128 * p.x as i128 + n[1] as i128 * p.y as i128 + n[2] as i128 * p.z as i128
}

/// Threshold along `normal` that halves every group as evenly as possible.
/// Returns the worst `|2 * below - size|` over the groups and the threshold.
fn sweep(pts: &[Point3], groups: &[usize], sizes: &[usize], normal: [i64; 3], work: &mut u64) -> Option<(usize, i128)> {
    let mut keyed: Vec<(i128, usize)> = pts.iter().zip(groups).map(|(&p, &g)| (dot(normal, p), g)).collect();
    keyed.sort_unstable();
    *work += keyed.len() as u64 * (1 + keyed.len().ilog2() as u64);
    let mut below = vec![0usize; sizes.len()];
    let mut best: Option<(usize, i128)> = None;
    for k in 0..keyed.len() {
        if k > 0 && keyed[k].0 != keyed[k - 1].0 {
            let dev = below.iter().zip(sizes).map(|(&b, &s)| (2 * b).abs_diff(s)).max().unwrap_or(0);
            if best.is_none_or(|(d, _)| dev < d) {
                best = Some((dev, keyed[k].0));
            }
        }
        below[keyed[k].1] += 1;
    }
    best
}

fn best_plane(
    pts: &[Point3],
    groups: &[usize],
    sizes: &[usize],
    normals: impl IntoIterator<Item = [i64; 3]>,
    work: &mut u64,
) -> Option<SplitPlane> {
    let mut best: Option<(usize, SplitPlane)> = None;
    for normal in normals {
        if normal == [0; 3] {
            continue;
        }
        if let Some((dev, threshold)) = sweep(pts, groups, sizes, normal, work) {
            if best.is_none_or(|(d, _)| dev < d) {
                best = Some((dev, SplitPlane { normal, threshold }));
            }
        }
    }
    best.map(|(_, p)| p)
}

fn cross(u: [i64; 3], v: [i64; 3]) -> [i64; 3] {
    let [u, v] = [u, v].map(|w| w.map(|c| c as i128));
    fit([u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]])
}

/// One pass of the staged search on `pts`: a halving plane, a plane halving
/// both halves, then a plane halving all four quarters. `None` when some
/// octant of `pts` falls outside `[lo, hi]`.
fn search(pts: &[Point3], lo: usize, hi: usize, rng: &mut ChaCha8Rng, work: &mut u64) -> Option<[SplitPlane; 3]> {
    let s = pts.len();
    let a = best_plane(pts, &vec![0; s], &[s], [sample_normal(pts, rng)], work)?;
    let mut groups: Vec<usize> = pts.iter().map(|&p| usize::from(a.plus(p))).collect();
    let mut sizes = vec![0; 2];
    groups.iter().for_each(|&g| sizes[g] += 1);
    let b = best_plane(pts, &groups, &sizes, (0..B_CANDIDATES).map(|_| sample_normal(pts, rng)), work)?;
    for (g, &p) in groups.iter_mut().zip(pts) {
        *g += 2 * usize::from(b.plus(p));
    }
    let mut sizes = vec![0; 4];
    groups.iter().for_each(|&g| sizes[g] += 1);
    let axis = cross(a.normal, b.normal);
    let nudged: Vec<[i64; 3]> = (0..8)
        .map(|_| {
            let r = random_normal(rng);
            let scale = axis.iter().map(|v| v.abs()).max().unwrap_or(1) / (4 * NORMAL_RANGE) + 1;
            [axis[0] + r[0] * scale, axis[1] + r[1] * scale, axis[2] + r[2] * scale]
        })
        .collect();
    let candidates: Vec<[i64; 3]> =
        std::iter::once(axis).chain(nudged).chain((0..C_CANDIDATES).map(|_| sample_normal(pts, rng))).collect();
    let c = best_plane(pts, &groups, &sizes, candidates, work)?;
    let mut counts = [0usize; 8];
    for (&g, &p) in groups.iter().zip(pts) {
        counts[g + 4 * usize::from(c.plus(p))] += 1;
    }
    counts.iter().all(|k| (lo..=hi).contains(k)).then_some([a, b, c])
}

fn classify(points: &[Point3], idx: &[usize], planes: &[SplitPlane; 3], ledger: &mut WorkLedger) -> [Vec<usize>; 8] {
    let mut parts: [Vec<usize>; 8] = Default::default();
    for &i in idx {
        let p = points[i];
        let k = (0..3).filter(|&j| planes[j].plus(p)).map(|j| 1 << j).sum::<usize>();
        parts[k].push(i);
    }
    ledger.orientation_tests += 3 * idx.len() as u64;
    parts
}

/// Split the points `idx` of `points`. Search cost goes to `ledger.auxiliary`.
pub(crate) fn split_indices(
    points: &[Point3],
    idx: &[usize],
    rng: &mut ChaCha8Rng,
    ledger: &mut WorkLedger,
) -> Result<OctantSplit> {
    let n = idx.len();
    if n < MIN_SPLIT {
        return Err(Error::pre(format!("need at least {MIN_SPLIT} points to split, got {n}")));
    }
    let (lo, hi) = octant_bounds(n);
    let direct = n < SAMPLE_THRESHOLD;
    let attempts = if n < 256 { 2000 } else { 64 };
    let mu = sample_target(n);
    let mut draws = 0;
    for retries in 0..attempts {
        let sample: Vec<Point3> = if direct {
            idx.iter().map(|&i| points[i]).collect()
        } else {
            loop {
                draws += 1;
                let s: Vec<Point3> = idx.iter().filter(|_| rng.gen_bool(mu / n as f64)).map(|&i| points[i]).collect();
                if (mu / 2.0..=1.5 * mu).contains(&(s.len() as f64)) {
                    break s;
                }
            }
        };
        let (slo, shi) = octant_bounds(sample.len());
        let mut work = 0;
        let found = search(&sample, slo, shi, rng, &mut work);
        ledger.auxiliary += work;
        let Some(planes) = found else { continue };
        let parts = classify(points, idx, &planes, ledger);
        if parts.iter().all(|p| (lo..=hi).contains(&p.len())) {
            return Ok(OctantSplit { planes, parts, retries, sample_size: sample.len(), sample_draws: draws });
        }
    }
    Err(Error::pre(format!("no balanced eight-way split of {n} points found")))
}

/// Three planes cutting `points` into eight parts of `n/16` to `3n/16` points each.
pub fn eight_partition(points: &[Point3], seed: u64) -> Result<OctantSplit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let idx: Vec<usize> = (0..points.len()).collect();
    split_indices(points, &idx, &mut rng, &mut WorkLedger::new())
}

/// Subsets of the input with the convex cells that contain them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTree {
    pub subsets: Vec<Vec<usize>>,
    pub cells: Vec<PolyCell3>,
    /// Number of parts actually produced, a power of eight.
    pub r: usize,
    pub retries: usize,
    pub ledger: WorkLedger,
}

/// Levels of eight-way splitting needed to reach at least `r` parts.
pub fn levels_for(r: usize) -> u32 {
    let mut levels = 0;
    while 8usize.pow(levels) < r {
        levels += 1;
    }
    levels
}

pub(crate) fn partition_indices(
    points: &[Point3],
    idx: &[usize],
    r: usize,
    rng: &mut ChaCha8Rng,
    ledger: &mut WorkLedger,
) -> Result<PartitionTree> {
    let levels = levels_for(r);
    let mut local = WorkLedger::new();
    let mut retries = 0;
    let mut parts = vec![(idx.to_vec(), PolyCell3::default())];
    for depth in 0..levels as usize {
        let mut next = Vec::with_capacity(parts.len() * 8);
        for (sub, cell) in parts {
            local.enter(depth, sub.len());
            let split = split_indices(points, &sub, rng, &mut local)?;
            retries += split.retries;
            for (k, part) in split.parts.into_iter().enumerate() {
                let mut c = cell.clone();
                for (j, plane) in split.planes.iter().enumerate() {
                    c.halfspaces.push(plane.halfspace(k >> j & 1 == 1));
                }
                next.push((part, c));
            }
        }
        parts = next;
    }
    ledger.absorb(&local);
    let (subsets, cells) = parts.into_iter().unzip();
    Ok(PartitionTree { subsets, cells, r: 8usize.pow(levels), retries, ledger: local })
}

/// Split `points` into at least `r` parts (rounded up to a power of eight)
/// by `log_8 r` levels of [`eight_partition`]. Each cell has `3 log_8 r` faces.
pub fn recursive_partition(points: &[Point3], r: usize, seed: u64) -> Result<PartitionTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let idx: Vec<usize> = (0..points.len()).collect();
    partition_indices(points, &idx, r, &mut rng, &mut WorkLedger::new())
}
