//! Range partitions, their entropy, and checks that a partition is respectful.
//!
//! A partition splits the input into blocks, each tagged with a closed range
//! containing its members. It is *respectful* when every block is either an
//! x-monotone subsequence whose range meets no other range, or sits entirely
//! inside a region that cannot contribute to the output (below some point for
//! maxima, strictly inside the hull for hulls). The entropy of a respectful
//! partition bounds the work of the adaptive algorithms from above.

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{orient2, Point2, Rect, Sign, Triangle2};
use crate::oracles;

/// Direction of a monotone run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    NonDecreasing,
    NonIncreasing,
}

/// Half-open index range `[start, start + len)` of a maximal monotone stretch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Run {
    pub start: usize,
    pub len: usize,
    pub direction: Direction,
}

/// Greedy left-to-right decomposition into maximal monotone runs.
///
/// A run's direction is fixed by its first strict step; equal neighbours
/// never end a run.
pub fn run_decompose<T: Ord>(seq: &[T]) -> Vec<Run> {
    let mut runs = Vec::new();
    let mut start = 0;
    while start < seq.len() {
        let mut dir: Option<Ordering> = None;
        let mut end = start + 1;
        while end < seq.len() {
            let step = seq[end - 1].cmp(&seq[end]);
            match (dir, step) {
                (_, Ordering::Equal) => {}
                (None, s) => dir = Some(s),
                (Some(d), s) if d == s => {}
                _ => break,
            }
            end += 1;
        }
        let direction = match dir {
            Some(Ordering::Greater) => Direction::NonIncreasing,
            _ => Direction::NonDecreasing,
        };
        runs.push(Run { start, len: end - start, direction });
        start = end;
    }
    runs
}

/// `-sum (s/n) log2(s/n)` over block sizes that must sum to `n`.
pub fn partition_entropy(sizes: &[usize], n: usize) -> Result<f64> {
    let sum: usize = sizes.iter().sum();
    if sum != n {
        return Err(Error::malformed(format!("block sizes sum to {sum}, expected {n}")));
    }
    if sizes.contains(&0) {
        return Err(Error::malformed("empty block"));
    }
    let nf = n as f64;
    Ok(sizes
        .iter()
        .map(|&s| {
            let p = s as f64 / nf;
            -p * p.log2()
        })
        .sum::<f64>()
        .max(0.0))
}

/// Entropy of the greedy run decomposition of a sequence.
pub fn run_entropy<T: Ord>(seq: &[T]) -> f64 {
    let sizes: Vec<usize> = run_decompose(seq).iter().map(|r| r.len).collect();
    partition_entropy(&sizes, seq.len()).expect("runs cover the sequence")
}

/// Whether a block claims x-monotonicity or coverage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    Sorted,
    Covered,
}

/// Closed region attached to a block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Range {
    Interval { lo: i64, hi: i64 },
    Rect(Rect),
    Triangle(Triangle2),
    Chain { vertices: Vec<Point2> },
}

impl Range {
    fn bbox(&self) -> Rect {
        match self {
            Range::Interval { lo, hi } => Rect { xmin: *lo, xmax: *hi, ymin: 0, ymax: 0 },
            Range::Rect(r) => *r,
            Range::Triangle(t) => Rect::bounding(t.vertices()).unwrap(),
            Range::Chain { vertices } => Rect::bounding(vertices.iter().copied())
                .unwrap_or(Rect { xmin: 0, xmax: -1, ymin: 0, ymax: -1 }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangedBlock {
    pub kind: BlockKind,
    pub member_indices: Vec<usize>,
    pub range: Range,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangePartition {
    pub n: usize,
    pub blocks: Vec<RangedBlock>,
}

impl RangePartition {
    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.member_indices.len()).collect()
    }

    pub fn entropy(&self) -> Result<f64> {
        partition_entropy(&self.sizes(), self.n)
    }
}

/// Which problem a certificate is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Maxima,
    Hull,
}

/// Reference hull for the covered-block condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HullMode {
    /// Covered triangles lie strictly below the upper hull, inside its x-span.
    Upper,
    /// Covered triangles lie in the interior of the hull.
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    SizeMismatch { points: usize, declared: usize },
    IndexOutOfBounds { index: usize },
    DuplicateMember { index: usize },
    MissingMember { index: usize },
    EmptyBlock,
    RangeKindMismatch,
    OutsideRange { index: usize },
    /// Neither monotone nor covered.
    LocalProperty,
    GlobalOverlap { other: usize },
}

/// First failure found by a verifier. `block` is `None` only for failures
/// that do not belong to a block (sizes, missing members).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub block: Option<usize>,
    pub kind: ViolationKind,
}

impl Violation {
    fn at(block: usize, kind: ViolationKind) -> Self {
        Violation { block: Some(block), kind }
    }

    /// Malformed partition as opposed to a geometric failure.
    pub fn is_structural(&self) -> bool {
        matches!(
            self.kind,
            ViolationKind::SizeMismatch { .. }
                | ViolationKind::IndexOutOfBounds { .. }
                | ViolationKind::DuplicateMember { .. }
                | ViolationKind::MissingMember { .. }
                | ViolationKind::EmptyBlock
                | ViolationKind::RangeKindMismatch
        )
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.block {
            Some(b) => write!(f, "block {b}: {:?}", self.kind),
            None => write!(f, "{:?}", self.kind),
        }
    }
}

fn check_structure(n: usize, part: &RangePartition) -> Result<(), Violation> {
    if part.n != n {
        return Err(Violation { block: None, kind: ViolationKind::SizeMismatch { points: n, declared: part.n } });
    }
    let mut seen = vec![false; n];
    for (b, block) in part.blocks.iter().enumerate() {
        if block.member_indices.is_empty() {
            return Err(Violation::at(b, ViolationKind::EmptyBlock));
        }
        for &i in &block.member_indices {
            if i >= n {
                return Err(Violation::at(b, ViolationKind::IndexOutOfBounds { index: i }));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Violation::at(b, ViolationKind::DuplicateMember { index: i }));
            }
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Violation { block: None, kind: ViolationKind::MissingMember { index: i } });
    }
    Ok(())
}

/// Members, taken in input order, have monotone x.
fn x_monotone(points: &[Point2], members: &[usize]) -> bool {
    let mut idx = members.to_vec();
    idx.sort_unstable();
    let xs: Vec<i64> = idx.iter().map(|&i| points[i].x).collect();
    xs.windows(2).all(|w| w[0] <= w[1]) || xs.windows(2).all(|w| w[0] >= w[1])
}

/// Pairs of boxes whose closed x-projections overlap, by sorting and sweeping.
fn x_overlapping_pairs(boxes: &[Rect], mut f: impl FnMut(usize, usize) -> bool) -> bool {
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by_key(|&i| boxes[i].xmin);
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        active.retain(|&j| boxes[j].xmax >= boxes[i].xmin);
        for &j in &active {
            if boxes[j].ymin <= boxes[i].ymax && boxes[i].ymin <= boxes[j].ymax && !f(j, i) {
                return false;
            }
        }
        active.push(i);
    }
    true
}

fn check_global(part: &RangePartition, intersects: impl Fn(&Range, &Range) -> bool) -> Result<(), Violation> {
    let boxes: Vec<Rect> = part.blocks.iter().map(|b| b.range.bbox()).collect();
    let mut found: Option<(usize, usize)> = None;
    x_overlapping_pairs(&boxes, |a, b| {
        let (ba, bb) = (&part.blocks[a], &part.blocks[b]);
        let sorted = ba.kind == BlockKind::Sorted || bb.kind == BlockKind::Sorted;
        if sorted && intersects(&ba.range, &bb.range) {
            found = Some(if ba.kind == BlockKind::Sorted { (a, b) } else { (b, a) });
            return false;
        }
        true
    });
    match found {
        Some((s, o)) => Err(Violation::at(s, ViolationKind::GlobalOverlap { other: o })),
        None => Ok(()),
    }
}

/// Answers "is some point strictly above and to the right of `c`" in
/// logarithmic time.
struct DominanceIndex {
    xs: Vec<i64>,
    suffix_max_y: Vec<i64>,
}

impl DominanceIndex {
    fn new(points: &[Point2]) -> Self {
        let mut s = points.to_vec();
        s.sort_unstable();
        let mut suffix_max_y = vec![i64::MIN; s.len() + 1];
        for i in (0..s.len()).rev() {
            suffix_max_y[i] = suffix_max_y[i + 1].max(s[i].y);
        }
        DominanceIndex { xs: s.iter().map(|p| p.x).collect(), suffix_max_y }
    }

    fn dominated(&self, c: Point2) -> bool {
        let i = self.xs.partition_point(|&x| x <= c.x);
        self.suffix_max_y[i] > c.y
    }
}

/// Check that `part` is a respectful partition of `points` for maxima.
pub fn verify_respectful_maxima(points: &[Point2], part: &RangePartition) -> Result<(), Violation> {
    check_structure(points.len(), part)?;
    let index = DominanceIndex::new(points);
    for (b, block) in part.blocks.iter().enumerate() {
        let Range::Rect(rect) = block.range else {
            return Err(Violation::at(b, ViolationKind::RangeKindMismatch));
        };
        if let Some(&i) = block.member_indices.iter().find(|&&i| !rect.contains(points[i])) {
            return Err(Violation::at(b, ViolationKind::OutsideRange { index: i }));
        }
        if !x_monotone(points, &block.member_indices) && !index.dominated(rect.upper_right()) {
            return Err(Violation::at(b, ViolationKind::LocalProperty));
        }
    }
    check_global(part, |a, b| match (a, b) {
        (Range::Rect(a), Range::Rect(b)) => a.intersects(b),
        _ => true,
    })
}

/// Upper and lower hull chains, both listed left to right.
pub(crate) struct HullChains {
    upper: Vec<Point2>,
    lower: Vec<Point2>,
}

impl HullChains {
    pub(crate) fn of(points: &[Point2]) -> Self {
        let (lower, upper) = oracles::monotone_chains(points);
        HullChains { upper, lower }
    }

    fn x_inside(&self, v: Point2) -> bool {
        match (self.upper.first(), self.upper.last()) {
            (Some(a), Some(b)) => a.x < v.x && v.x < b.x,
            _ => false,
        }
    }

    /// `v` is strictly on the `want` side of the chain edge spanning `v.x`.
    fn strictly(chain: &[Point2], v: Point2, want: Sign) -> bool {
        let i = chain.partition_point(|p| p.x < v.x);
        if i == 0 || i >= chain.len() {
            return false;
        }
        // a.x < v.x <= b.x, and a.x < b.x by construction
        let (a, b) = (chain[i - 1], chain[i]);
        orient2(a, b, v) == want
    }

    pub(crate) fn strictly_below_upper(&self, v: Point2) -> bool {
        self.x_inside(v) && Self::strictly(&self.upper, v, Sign::Negative)
    }

    pub(crate) fn strictly_inside(&self, v: Point2) -> bool {
        self.strictly_below_upper(v) && Self::strictly(&self.lower, v, Sign::Positive)
    }
}

/// Check that `part` is a respectful partition of `points` for convex hulls.
pub fn verify_respectful_hull(points: &[Point2], part: &RangePartition, mode: HullMode) -> Result<(), Violation> {
    check_structure(points.len(), part)?;
    let chains = HullChains::of(points);
    for (b, block) in part.blocks.iter().enumerate() {
        let Range::Triangle(tri) = block.range else {
            return Err(Violation::at(b, ViolationKind::RangeKindMismatch));
        };
        if let Some(&i) = block.member_indices.iter().find(|&&i| !tri.contains(points[i])) {
            return Err(Violation::at(b, ViolationKind::OutsideRange { index: i }));
        }
        let covered = tri.vertices().iter().all(|&v| match mode {
            HullMode::Upper => chains.strictly_below_upper(v),
            HullMode::Full => chains.strictly_inside(v),
        });
        if !covered && !x_monotone(points, &block.member_indices) {
            return Err(Violation::at(b, ViolationKind::LocalProperty));
        }
    }
    check_global(part, |a, b| match (a, b) {
        (Range::Triangle(a), Range::Triangle(b)) => a.intersects(b),
        _ => true,
    })
}

/// Respectful partition built from the maximal x-monotone runs of the input:
/// runs whose range holds no foreign point and meets no earlier accepted range
/// become blocks, every other point becomes a singleton.
pub fn greedy_partition(points: &[Point2], problem: Problem) -> RangePartition {
    let n = points.len();
    let runs = run_decompose(&points.iter().map(|p| p.x).collect::<Vec<_>>());
    let mut by_x: Vec<usize> = (0..n).collect();
    by_x.sort_by_key(|&i| points[i]);
    let xs: Vec<i64> = by_x.iter().map(|&i| points[i].x).collect();
    let mut order: Vec<&Run> = runs.iter().filter(|r| r.len >= 2).collect();
    order.sort_by_key(|r| std::cmp::Reverse(r.len));

    let range_of = |idx: &[usize]| -> Range {
        let r = Rect::bounding(idx.iter().map(|&i| points[i])).unwrap();
        match problem {
            Problem::Maxima => Range::Rect(r),
            Problem::Hull => {
                let (w, h) = ((r.xmax - r.xmin).max(1), (r.ymax - r.ymin).max(1));
                let o = Point2 { x: r.xmin, y: r.ymin };
                Range::Triangle(Triangle2::new(
                    o,
                    Point2 { x: o.x + 2 * w, y: o.y },
                    Point2 { x: o.x, y: o.y + 2 * h },
                ))
            }
        }
    };
    let contains = |range: &Range, p: Point2| match range {
        Range::Rect(r) => r.contains(p),
        Range::Triangle(t) => t.contains(p),
        _ => false,
    };
    let meets = |a: &Range, b: &Range| match (a, b) {
        (Range::Rect(a), Range::Rect(b)) => a.intersects(b),
        (Range::Triangle(a), Range::Triangle(b)) => a.intersects(b),
        _ => true,
    };

    let mut used = vec![false; n];
    let mut blocks: Vec<RangedBlock> = Vec::new();
    for run in order {
        let members: Vec<usize> = (run.start..run.start + run.len).collect();
        let range = range_of(&members);
        let bb = range.bbox();
        let own: HashSet<usize> = members.iter().copied().collect();
        let lo = xs.partition_point(|&x| x < bb.xmin);
        let hi = xs.partition_point(|&x| x <= bb.xmax);
        let clean = by_x[lo..hi].iter().all(|&i| own.contains(&i) || !contains(&range, points[i]));
        if clean && !blocks.iter().any(|b| meets(&b.range, &range)) {
            for &i in &members {
                used[i] = true;
            }
            blocks.push(RangedBlock { kind: BlockKind::Sorted, member_indices: members, range });
        }
    }
    for i in (0..n).filter(|&i| !used[i]) {
        let p = points[i];
        let range = match problem {
            Problem::Maxima => Range::Rect(Rect { xmin: p.x, xmax: p.x, ymin: p.y, ymax: p.y }),
            Problem::Hull => Range::Triangle(Triangle2::new(p, p, p)),
        };
        blocks.push(RangedBlock { kind: BlockKind::Sorted, member_indices: vec![i], range });
    }
    RangePartition { n, blocks }
}

/// Entropy of the certificate if one is given (after verifying it), else of
/// [`greedy_partition`]. Either way an upper bound on the structural entropy.
pub fn entropy_upper_bound(points: &[Point2], planted: Option<&RangePartition>, problem: Problem) -> Result<f64> {
    if points.is_empty() {
        return Ok(0.0);
    }
    match planted {
        Some(part) => {
            let verdict = match problem {
                Problem::Maxima => verify_respectful_maxima(points, part),
                Problem::Hull => verify_respectful_hull(points, part, HullMode::Full),
            };
            verdict.map_err(|v| {
                if v.is_structural() {
                    Error::malformed(v.to_string())
                } else {
                    Error::pre(format!("certificate is not respectful: {v}"))
                }
            })?;
            part.entropy()
        }
        None => greedy_partition(points, problem).entropy(),
    }
}
