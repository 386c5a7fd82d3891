//! Exact test for lying strictly below the upper hull of a point set.
//!
//! `p` is on or above the upper hull of `Q` (or outside its shadow) exactly
//! when some plane through `p` has all of `Q` on or below it. Writing that
//! plane as `z = p.z + a (x - p.x) + b (y - p.y)` turns the question into
//! feasibility of one halfplane per point in the `(a, b)` plane, which a
//! randomized incremental 2D LP settles in expected linear time.

use std::collections::BTreeSet;

use ethnum::I256;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Box3, HalfSpace3, Point3, PolyCell3};
use crate::{Error, Result};

/// Any nonempty feasible region has a point with both slopes below this.
const FRAME: i128 = 1 << 85;

/// `x a + y b >= w`.
#[derive(Clone, Copy, Debug)]
struct Slope {
    x: i128,
    y: i128,
    w: i128,
}

/// `(a, b) = (an / d, bn / d)` with `d > 0`.
#[derive(Clone, Copy, Debug)]
struct Vertex {
    an: I256,
    bn: I256,
    d: I256,
}

impl Vertex {
    fn new(an: I256, bn: I256, d: I256) -> Vertex {
        if d < 0 {
            Vertex { an: -an, bn: -bn, d: -d }
        } else {
            Vertex { an, bn, d }
        }
    }
}

impl Slope {
    fn holds(&self, v: &Vertex) -> bool {
        I256::from(self.x) * v.an + I256::from(self.y) * v.bn >= I256::from(self.w) * v.d
    }
}

fn sign(v: I256) -> I256 {
    if v < 0 {
        I256::from(-1i32)
    } else {
        I256::ONE
    }
}

/// Lexicographically smallest `(a, b)` on the line of `h` satisfying `others`.
fn on_line<'a>(h: &Slope, others: impl Iterator<Item = &'a Slope>, work: &mut u64) -> Option<Vertex> {
    let (x, y, w) = (I256::from(h.x), I256::from(h.y), I256::from(h.w));
    // parametrize by a unless the line fixes it
    let by_a = h.y != 0;
    let s = if by_a { sign(y) } else { sign(x) };
    let mut lo: Option<(I256, I256)> = None;
    let mut hi: Option<(I256, I256)> = None;
    for g in others {
        *work += 1;
        let (gx, gy, gw) = (I256::from(g.x), I256::from(g.y), I256::from(g.w));
        let (k, r) = if by_a { ((gx * y - gy * x) * s, (gw * y - gy * w) * s) } else { (gy * x * s, (gw * x - gx * w) * s) };
        if k == 0 {
            if r > 0 {
                return None;
            }
        } else if k > 0 {
            if lo.is_none_or(|(r0, k0)| r * k0 > r0 * k) {
                lo = Some((r, k));
            }
        } else if hi.is_none_or(|(r0, k0)| -r * k0 < r0 * -k) {
            hi = Some((-r, -k));
        }
    }
    let (r, k) = lo.expect("the frame bounds every line");
    if let Some((rh, kh)) = hi {
        if r * kh > rh * k {
            return None;
        }
    }
    Some(if by_a { Vertex::new(r * y, w * k - x * r, y * k) } else { Vertex::new(w * k, r * x, x * k) })
}

pub(crate) fn below(p: Point3, q: &[Point3], rng: &mut ChaCha8Rng, work: &mut u64) -> bool {
    let mut cons = Vec::with_capacity(q.len());
    for s in q {
        *work += 1;
        let (x, y, w) = ((s.x - p.x) as i128, (s.y - p.y) as i128, (s.z - p.z) as i128);
        if x == 0 && y == 0 {
            if w > 0 {
                return true;
            }
            continue;
        }
        cons.push(Slope { x, y, w });
    }
    cons.shuffle(rng);
    let frame = [
        Slope { x: 1, y: 0, w: -FRAME },
        Slope { x: -1, y: 0, w: -FRAME },
        Slope { x: 0, y: 1, w: -FRAME },
        Slope { x: 0, y: -1, w: -FRAME },
    ];
    let mut v = Vertex::new(I256::from(-FRAME), I256::from(-FRAME), I256::ONE);
    for i in 0..cons.len() {
        *work += 1;
        if cons[i].holds(&v) {
            continue;
        }
        match on_line(&cons[i], frame.iter().chain(&cons[..i]), work) {
            Some(u) => v = u,
            None => return true,
        }
    }
    false
}

/// True when `p` lies strictly below the upper hull of `q`: every plane
/// through `p` has a point of `q` strictly above it.
pub fn point_below_upper_hull(p: Point3, q: &[Point3], seed: u64) -> bool {
    below(p, q, &mut ChaCha8Rng::seed_from_u64(seed), &mut 0)
}

const COEF_LIMIT: i128 = 1 << 32;
const OFFSET_LIMIT: i128 = 1 << 80;

fn exact_vertex(h: [&HalfSpace3; 3]) -> Option<[I256; 4]> {
    let m: [[I256; 3]; 3] = h.map(|s| [s.plane.a, s.plane.b, s.plane.c].map(I256::from));
    let rhs: [I256; 3] = h.map(|s| I256::from(s.plane.d));
    let det = |m: &[[I256; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&m);
    if d == 0 {
        return None;
    }
    let mut out = [I256::ZERO; 4];
    for col in 0..3 {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = rhs[row];
        }
        out[col] = det(&mc);
    }
    out[3] = d;
    if d < 0 {
        out = out.map(|v| -v);
    }
    Some(out)
}

fn inside(h: &HalfSpace3, v: &[I256; 4]) -> bool {
    let pl = &h.plane;
    let e = I256::from(pl.a) * v[0] + I256::from(pl.b) * v[1] + I256::from(pl.c) * v[2] - I256::from(pl.d) * v[3];
    if h.positive {
        e >= 0
    } else {
        e <= 0
    }
}

fn floor_div(a: I256, d: I256) -> i64 {
    a.div_euclid(d).as_i64()
}

/// Top corners of the integer boxes around the vertices of `cell` clipped to
/// `bbox`. Every vertex lies in the convex hull of its box, below its top face.
pub(crate) fn vertex_corners(cell: &PolyCell3, bbox: &Box3, work: &mut u64) -> Result<Vec<Point3>> {
    let mut hs: Vec<HalfSpace3> = bbox.halfspaces().to_vec();
    hs.extend(cell.halfspaces.iter().copied());
    for h in &cell.halfspaces {
        let pl = &h.plane;
        if [pl.a, pl.b, pl.c].iter().any(|c| c.abs() > COEF_LIMIT) || pl.d.abs() > OFFSET_LIMIT {
            return Err(Error::pre("cell plane coefficients too large for exact vertices"));
        }
    }
    let mut corners = BTreeSet::new();
    for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            for k in j + 1..hs.len() {
                *work += 1;
                let Some(v) = exact_vertex([&hs[i], &hs[j], &hs[k]]) else { continue };
                *work += hs.len() as u64;
                if !hs.iter().all(|h| inside(h, &v)) {
                    continue;
                }
                let lo = [0, 1, 2].map(|c| floor_div(v[c], v[3]));
                let hi = [0, 1, 2].map(|c| -floor_div(-v[c], v[3]));
                for x in [lo[0], hi[0]] {
                    for y in [lo[1], hi[1]] {
                        corners.insert(Point3 { x, y, z: hi[2] });
                    }
                }
            }
        }
    }
    let mut out: Vec<Point3> = corners.into_iter().collect();
    out.sort_by_key(|p| std::cmp::Reverse(p.z));
    Ok(out)
}

/// Cell test against a cheap subset first, then the full set. Both are sound:
/// the upper hull of a subset lies below that of the whole set.
pub(crate) fn cell_below(
    cell: &PolyCell3,
    bbox: &Box3,
    subset: &[Point3],
    q: &[Point3],
    rng: &mut ChaCha8Rng,
    work: &mut u64,
) -> Result<(bool, usize)> {
    let corners = vertex_corners(cell, bbox, work)?;
    for (tested, &c) in corners.iter().enumerate() {
        if !(below(c, subset, rng, work) || below(c, q, rng, work)) {
            return Ok((false, tested + 1));
        }
    }
    Ok((true, corners.len()))
}

/// True when the part of `cell` inside the bounding box of `q` lies strictly
/// below the upper hull of `q`. An empty cell passes.
pub fn cell_below_upper_hull(cell: &PolyCell3, q: &[Point3], seed: u64) -> Result<bool> {
    let Some(bbox) = Box3::of(q) else { return Ok(false) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(cell_below(cell, &bbox, &[], q, &mut rng, &mut 0)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Plane3;

    fn tetra() -> Vec<Point3> {
        vec![Point3::new(0, 0, 0), Point3::new(12, 0, 0), Point3::new(0, 12, 0), Point3::new(4, 4, 12)]
    }

    #[test]
    fn point_cases() {
        let q = tetra();
        assert!(point_below_upper_hull(Point3::new(4, 4, 5), &q, 1));
        assert!(!point_below_upper_hull(Point3::new(4, 4, 12), &q, 1));
        assert!(!point_below_upper_hull(Point3::new(4, 4, 13), &q, 1));
        // on a top face, not strictly below
        assert!(!point_below_upper_hull(Point3::new(2, 2, 6), &q, 1));
        // outside the shadow
        assert!(!point_below_upper_hull(Point3::new(20, 20, -100), &q, 1));
        // below a shadow edge
        assert!(point_below_upper_hull(Point3::new(6, 0, -1), &q, 1));
        assert!(!point_below_upper_hull(Point3::new(6, 0, 0), &q, 1));
    }

    #[test]
    fn cell_cases() {
        let q = tetra();
        let low = HalfSpace3 { plane: Plane3::new(0, 0, 1, 1).unwrap(), positive: false };
        let wedge = |a, b, d| HalfSpace3 { plane: Plane3::new(a, b, 0, d).unwrap(), positive: true };
        let cell = PolyCell3 { halfspaces: vec![low, wedge(1, 0, 2), wedge(0, 1, 2), HalfSpace3 { plane: Plane3::new(1, 1, 0, 6).unwrap(), positive: false }] };
        assert_eq!(cell_below_upper_hull(&cell, &q, 3), Ok(true));
        let top = PolyCell3 { halfspaces: vec![HalfSpace3 { plane: Plane3::new(0, 0, 1, 10).unwrap(), positive: true }] };
        assert_eq!(cell_below_upper_hull(&top, &q, 3), Ok(false));
        let empty = PolyCell3 { halfspaces: vec![HalfSpace3 { plane: Plane3::new(0, 0, 1, -50).unwrap(), positive: false }] };
        assert_eq!(cell_below_upper_hull(&empty, &q, 3), Ok(true));
    }
}
