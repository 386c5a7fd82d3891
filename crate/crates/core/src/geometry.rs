//! Integer points, exact predicates and the range shapes used by certificates.
//!
//! Coordinates are `i64` bounded by `2^40` in magnitude. With that bound every
//! 2D and 3D orientation determinant fits in `i128`; the few predicates that
//! need more (ray distances, homogeneous LP points) go through [`ethnum::I256`].

use std::cmp::Ordering;

use ethnum::I256;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest accepted coordinate magnitude.
pub const COORD_LIMIT: i64 = 1 << 40;

fn check(v: i64) -> Result<i64> {
    if v.unsigned_abs() > COORD_LIMIT as u64 {
        Err(Error::CoordinateRange { value: v })
    } else {
        Ok(v)
    }
}

/// Sign of a determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(v: i128) -> Sign {
        match v.cmp(&0) {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// Planar point. Derived ordering is lexicographic `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point2 {
    pub x: i64,
    pub y: i64,
}

impl Point2 {
    /// Panics when a coordinate exceeds [`COORD_LIMIT`]; see [`Point2::try_new`].
    pub fn new(x: i64, y: i64) -> Point2 {
        Point2::try_new(x, y).expect("coordinate out of range")
    }

    pub fn try_new(x: i64, y: i64) -> Result<Point2> {
        Ok(Point2 { x: check(x)?, y: check(y)? })
    }

    /// Ordering by `(y, x)`.
    pub fn cmp_yx(&self, other: &Point2) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

/// Twice the signed area of `(p, q, r)` as an exact integer.
#[inline]
pub fn cross(p: Point2, q: Point2, r: Point2) -> i128 {
    let (ax, ay) = ((q.x - p.x) as i128, (q.y - p.y) as i128);
    let (bx, by) = ((r.x - p.x) as i128, (r.y - p.y) as i128);
    ax * by - ay * bx
}

/// Positive when `r` lies to the left of the directed line `p -> q`.
#[inline]
pub fn orient2(p: Point2, q: Point2, r: Point2) -> Sign {
    Sign::of(cross(p, q, r))
}

/// Strict dominance: `p` is larger than `q` in both coordinates.
#[inline]
pub fn dominates(p: Point2, q: Point2) -> bool {
    p.x > q.x && p.y > q.y
}

/// Space point, ordered lexicographically `(x, y, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point3 {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl Point3 {
    pub fn new(x: i64, y: i64, z: i64) -> Point3 {
        Point3::try_new(x, y, z).expect("coordinate out of range")
    }

    pub fn try_new(x: i64, y: i64, z: i64) -> Result<Point3> {
        Ok(Point3 { x: check(x)?, y: check(y)?, z: check(z)? })
    }

    pub fn xy(&self) -> Point2 {
        Point2 { x: self.x, y: self.y }
    }

    fn sub(self, o: Point3) -> [i128; 3] {
        [(self.x - o.x) as i128, (self.y - o.y) as i128, (self.z - o.z) as i128]
    }
}

fn cross3(u: [i128; 3], v: [i128; 3]) -> [i128; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

/// Determinant of `(b - a, c - a, d - a)`. Positive when `d` lies on the side
/// of plane `abc` that the normal `(b - a) x (c - a)` points to.
pub fn orient3_det(a: Point3, b: Point3, c: Point3, d: Point3) -> i128 {
    let n = cross3(b.sub(a), c.sub(a));
    let w = d.sub(a);
    n[0] * w[0] + n[1] * w[1] + n[2] * w[2]
}

pub fn orient3(a: Point3, b: Point3, c: Point3, d: Point3) -> Sign {
    Sign::of(orient3_det(a, b, c, d))
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Plane `a x + b y + c z = d` with integer coefficients.
///
/// Coefficients are divided by their gcd and the normal is oriented so that
/// its first nonzero component among `(c, b, a)` is positive, which makes the
/// positive side "above" for every non-vertical plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Plane3 {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub d: i128,
}

impl Plane3 {
    /// `None` for a zero normal.
    pub fn new(a: i128, b: i128, c: i128, d: i128) -> Option<Plane3> {
        if a == 0 && b == 0 && c == 0 {
            return None;
        }
        let g = [a, b, c, d].iter().fold(0u128, |g, v| gcd(g, v.unsigned_abs()));
        let g = g as i128;
        let (mut a, mut b, mut c, mut d) = (a / g, b / g, c / g, d / g);
        let lead = if c != 0 { c } else if b != 0 { b } else { a };
        if lead < 0 {
            (a, b, c, d) = (-a, -b, -c, -d);
        }
        Some(Plane3 { a, b, c, d })
    }

    /// Plane through three points, `None` if they are collinear.
    pub fn through(p: Point3, q: Point3, r: Point3) -> Option<Plane3> {
        let n = cross3(q.sub(p), r.sub(p));
        let d = n[0] * p.x as i128 + n[1] * p.y as i128 + n[2] * p.z as i128;
        Plane3::new(n[0], n[1], n[2], d)
    }

    pub fn eval(&self, p: Point3) -> i128 {
        self.a * p.x as i128 + self.b * p.y as i128 + self.c * p.z as i128 - self.d
    }

    pub fn eval_f64(&self, p: [f64; 3]) -> f64 {
        self.a as f64 * p[0] + self.b as f64 * p[1] + self.c as f64 * p[2] - self.d as f64
    }

    pub fn is_vertical(&self) -> bool {
        self.c == 0
    }
}

/// Side of `p` relative to `plane`.
pub fn side_of_plane(p: Point3, plane: &Plane3) -> Sign {
    Sign::of(plane.eval(p))
}

/// Closed halfspace `{p : sign(plane(p)) in {0, side}}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HalfSpace3 {
    pub plane: Plane3,
    pub positive: bool,
}

impl HalfSpace3 {
    pub fn contains(&self, p: Point3) -> bool {
        let v = self.plane.eval(p);
        if self.positive {
            v >= 0
        } else {
            v <= 0
        }
    }

    /// Signed slack in floating point, nonnegative inside.
    pub fn slack_f64(&self, p: [f64; 3]) -> f64 {
        let v = self.plane.eval_f64(p);
        if self.positive {
            v
        } else {
            -v
        }
    }

    fn scale(&self) -> f64 {
        (self.plane.a as f64).abs() + (self.plane.b as f64).abs() + (self.plane.c as f64).abs()
    }
}

/// Axis-aligned box in space with integer bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Box3 {
    pub lo: Point3,
    pub hi: Point3,
}

impl Box3 {
    pub fn of(points: &[Point3]) -> Option<Box3> {
        let first = *points.first()?;
        let mut b = Box3 { lo: first, hi: first };
        for p in points {
            b.lo = Point3 { x: b.lo.x.min(p.x), y: b.lo.y.min(p.y), z: b.lo.z.min(p.z) };
            b.hi = Point3 { x: b.hi.x.max(p.x), y: b.hi.y.max(p.y), z: b.hi.z.max(p.z) };
        }
        Some(b)
    }

    pub fn contains(&self, p: Point3) -> bool {
        (self.lo.x..=self.hi.x).contains(&p.x)
            && (self.lo.y..=self.hi.y).contains(&p.y)
            && (self.lo.z..=self.hi.z).contains(&p.z)
    }

    pub(crate) fn halfspaces(&self) -> [HalfSpace3; 6] {
        let hs = |a, b, c, d, positive| HalfSpace3 { plane: Plane3 { a, b, c, d }, positive };
        [
            hs(1, 0, 0, self.lo.x as i128, true),
            hs(1, 0, 0, self.hi.x as i128, false),
            hs(0, 1, 0, self.lo.y as i128, true),
            hs(0, 1, 0, self.hi.y as i128, false),
            hs(0, 0, 1, self.lo.z as i128, true),
            hs(0, 0, 1, self.hi.z as i128, false),
        ]
    }
}

/// Convex cell given as an intersection of closed halfspaces.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolyCell3 {
    pub halfspaces: Vec<HalfSpace3>,
}

impl PolyCell3 {
    pub fn contains(&self, p: Point3) -> bool {
        self.halfspaces.iter().all(|h| h.contains(p))
    }

    pub fn face_count(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn with(&self, h: HalfSpace3) -> PolyCell3 {
        let mut c = self.clone();
        c.halfspaces.push(h);
        c
    }

    /// Approximate vertices of the cell clipped to `bbox`, in floating point.
    ///
    /// Every true vertex is within a tiny relative error of some returned
    /// point; a few spurious near-vertices may appear. Empty for empty cells.
    pub fn clipped_vertices(&self, bbox: &Box3) -> Vec<[f64; 3]> {
        let mut hs: Vec<HalfSpace3> = bbox.halfspaces().to_vec();
        hs.extend(self.halfspaces.iter().copied());
        let mut out: Vec<[f64; 3]> = Vec::new();
        let span = [
            (bbox.hi.x - bbox.lo.x) as f64,
            (bbox.hi.y - bbox.lo.y) as f64,
            (bbox.hi.z - bbox.lo.z) as f64,
        ];
        let extent = span.iter().fold(1.0f64, |m, v| m.max(*v));
        let magnitude = [bbox.lo.x, bbox.lo.y, bbox.lo.z, bbox.hi.x, bbox.hi.y, bbox.hi.z]
            .iter()
            .fold(1.0f64, |m, v| m.max((*v as f64).abs()));
        for i in 0..hs.len() {
            for j in i + 1..hs.len() {
                for k in j + 1..hs.len() {
                    let Some(v) = solve3(&hs[i].plane, &hs[j].plane, &hs[k].plane) else {
                        continue;
                    };
                    let ok = hs.iter().all(|h| {
                        h.slack_f64(v) >= -1e-7 * h.scale() * (magnitude + extent)
                    });
                    if ok && !out.iter().any(|w| near(w, &v, extent)) {
                        out.push(v);
                    }
                }
            }
        }
        out
    }
}

fn near(a: &[f64; 3], b: &[f64; 3], extent: f64) -> bool {
    (0..3).all(|i| (a[i] - b[i]).abs() <= 1e-9 * extent)
}

fn solve3(p: &Plane3, q: &Plane3, r: &Plane3) -> Option<[f64; 3]> {
    let m = [
        [p.a as f64, p.b as f64, p.c as f64],
        [q.a as f64, q.b as f64, q.c as f64],
        [r.a as f64, r.b as f64, r.c as f64],
    ];
    let rhs = [p.d as f64, q.d as f64, r.d as f64];
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&m);
    let norms: f64 = m.iter().map(|row| row.iter().map(|v| v * v).sum::<f64>().sqrt()).product();
    if d.abs() <= 1e-12 * norms {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, o) in out.iter_mut().enumerate() {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = rhs[row];
        }
        *o = det(&mc) / d;
    }
    Some(out)
}

/// Exact nonnegative-denominator fraction, compared by cross multiplication.
#[derive(Clone, Copy, Debug)]
pub struct Frac {
    pub num: i128,
    pub den: i128,
}

impl Frac {
    pub fn new(num: i128, den: i128) -> Frac {
        assert!(den != 0, "zero denominator");
        if den < 0 {
            Frac { num: -num, den: -den }
        } else {
            Frac { num, den }
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frac {}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> Ordering {
        (I256::from(self.num) * I256::from(other.den))
            .cmp(&(I256::from(other.num) * I256::from(self.den)))
    }
}

/// Closed segment with endpoints stored in lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment2 {
    pub a: Point2,
    pub b: Point2,
}

impl Segment2 {
    pub fn new(p: Point2, q: Point2) -> Segment2 {
        if p <= q {
            Segment2 { a: p, b: q }
        } else {
            Segment2 { a: q, b: p }
        }
    }

    /// Height of the segment at abscissa `x2 / 2`. The segment must be
    /// non-vertical (or a single point) and span that abscissa.
    pub fn value_at_half(&self, x2: i128) -> Frac {
        let dx = (self.b.x - self.a.x) as i128;
        if dx == 0 {
            return Frac::new(self.a.y as i128, 1);
        }
        let dy = (self.b.y - self.a.y) as i128;
        let num = 2 * self.a.y as i128 * dx + dy * (x2 - 2 * self.a.x as i128);
        Frac::new(num, 2 * dx)
    }

    pub fn value_at(&self, x: i64) -> Frac {
        self.value_at_half(2 * x as i128)
    }

    /// Closed segments share at least one point.
    pub fn intersects(&self, o: &Segment2) -> bool {
        let d1 = orient2(self.a, self.b, o.a);
        let d2 = orient2(self.a, self.b, o.b);
        let d3 = orient2(o.a, o.b, self.a);
        let d4 = orient2(o.a, o.b, self.b);
        let proper = |u: Sign, v: Sign| u != v && u != Sign::Zero && v != Sign::Zero;
        if proper(d1, d2) && proper(d3, d4) {
            return true;
        }
        let on = |s: &Segment2, p: Point2, d: Sign| {
            d == Sign::Zero
                && s.a.x.min(s.b.x) <= p.x
                && p.x <= s.a.x.max(s.b.x)
                && s.a.y.min(s.b.y) <= p.y
                && p.y <= s.a.y.max(s.b.y)
        };
        on(self, o.a, d1) || on(self, o.b, d2) || on(o, self.a, d3) || on(o, self.b, d4)
    }
}

/// Closed axis-aligned rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub xmin: i64,
    pub xmax: i64,
    pub ymin: i64,
    pub ymax: i64,
}

impl Rect {
    pub fn new(xmin: i64, xmax: i64, ymin: i64, ymax: i64) -> Result<Rect> {
        if xmin > xmax || ymin > ymax {
            return Err(Error::malformed(format!("inverted rectangle [{xmin},{xmax}]x[{ymin},{ymax}]")));
        }
        Ok(Rect { xmin, xmax, ymin, ymax })
    }

    pub fn bounding(points: impl IntoIterator<Item = Point2>) -> Option<Rect> {
        let mut it = points.into_iter();
        let p = it.next()?;
        let mut r = Rect { xmin: p.x, xmax: p.x, ymin: p.y, ymax: p.y };
        for p in it {
            r.xmin = r.xmin.min(p.x);
            r.xmax = r.xmax.max(p.x);
            r.ymin = r.ymin.min(p.y);
            r.ymax = r.ymax.max(p.y);
        }
        Some(r)
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.xmin <= p.x && p.x <= self.xmax && self.ymin <= p.y && p.y <= self.ymax
    }

    pub fn intersects(&self, o: &Rect) -> bool {
        self.xmin <= o.xmax && o.xmin <= self.xmax && self.ymin <= o.ymax && o.ymin <= self.ymax
    }

    pub fn upper_right(&self) -> Point2 {
        Point2 { x: self.xmax, y: self.ymax }
    }
}

/// Closed triangle. Degenerate (collinear) triangles are allowed and behave
/// as the segment or point they span.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triangle2 {
    pub p: Point2,
    pub q: Point2,
    pub r: Point2,
}

impl Triangle2 {
    pub fn new(p: Point2, q: Point2, r: Point2) -> Triangle2 {
        Triangle2 { p, q, r }
    }

    pub fn is_degenerate(&self) -> bool {
        orient2(self.p, self.q, self.r) == Sign::Zero
    }

    pub fn vertices(&self) -> [Point2; 3] {
        [self.p, self.q, self.r]
    }

    /// Vertices in counterclockwise order (unchanged when degenerate).
    fn ccw(&self) -> [Point2; 3] {
        if orient2(self.p, self.q, self.r) == Sign::Negative {
            [self.p, self.r, self.q]
        } else {
            [self.p, self.q, self.r]
        }
    }

    pub fn contains(&self, x: Point2) -> bool {
        if self.is_degenerate() {
            return self.edges().iter().any(|e| e.intersects(&Segment2::new(x, x)));
        }
        let [a, b, c] = self.ccw();
        orient2(a, b, x) != Sign::Negative
            && orient2(b, c, x) != Sign::Negative
            && orient2(c, a, x) != Sign::Negative
    }

    pub fn edges(&self) -> [Segment2; 3] {
        [Segment2::new(self.p, self.q), Segment2::new(self.q, self.r), Segment2::new(self.r, self.p)]
    }

    /// Closed triangles share at least one point.
    pub fn intersects(&self, o: &Triangle2) -> bool {
        if self.vertices().iter().any(|v| o.contains(*v)) || o.vertices().iter().any(|v| self.contains(*v)) {
            return true;
        }
        self.edges().iter().any(|e| o.edges().iter().any(|f| e.intersects(f)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn orientation_signs() {
        assert_eq!(orient2(p(0, 0), p(1, 0), p(0, 1)), Sign::Positive);
        assert_eq!(orient2(p(0, 0), p(1, 0), p(0, -1)), Sign::Negative);
        assert_eq!(orient2(p(0, 0), p(1, 1), p(2, 2)), Sign::Zero);
    }

    #[test]
    fn orientation_at_coordinate_limit() {
        let l = COORD_LIMIT;
        assert_eq!(orient2(p(-l, -l), p(l, l), p(l - 1, l)), Sign::Positive);
        let a = Point3::new(-l, -l, -l);
        let b = Point3::new(l, -l, -l);
        let c = Point3::new(-l, l, -l);
        assert_eq!(orient3(a, b, c, Point3::new(l, l, l)), Sign::Positive);
        assert_eq!(orient3(a, b, c, Point3::new(l, l, -l)), Sign::Zero);
    }

    #[test]
    fn coordinate_bound_is_checked() {
        assert!(Point2::try_new(COORD_LIMIT + 1, 0).is_err());
        assert!(Point3::try_new(0, 0, -COORD_LIMIT).is_ok());
    }

    #[test]
    fn dominance_is_strict() {
        assert!(dominates(p(3, 3), p(1, 2)));
        assert!(!dominates(p(3, 2), p(1, 2)));
    }

    #[test]
    fn planes_are_normalized() {
        let z0 = Plane3::through(Point3::new(0, 0, 0), Point3::new(2, 0, 0), Point3::new(0, 4, 0)).unwrap();
        assert_eq!(z0, Plane3 { a: 0, b: 0, c: 1, d: 0 });
        assert_eq!(side_of_plane(Point3::new(0, 0, 1), &z0), Sign::Positive);
        assert!(Plane3::through(Point3::new(0, 0, 0), Point3::new(1, 1, 1), Point3::new(2, 2, 2)).is_none());
    }

    #[test]
    fn triangle_intersection_cases() {
        let t = Triangle2::new(p(0, 0), p(4, 0), p(0, 4));
        assert!(t.contains(p(1, 1)) && t.contains(p(2, 2)) && !t.contains(p(3, 3)));
        assert!(t.intersects(&Triangle2::new(p(2, 2), p(5, 5), p(5, 2))));
        assert!(!t.intersects(&Triangle2::new(p(3, 3), p(6, 3), p(3, 6))));
        let inner = Triangle2::new(p(1, 1), p(2, 1), p(1, 2));
        assert!(t.intersects(&inner) && inner.intersects(&t));
    }

    #[test]
    fn cell_vertices_of_unit_box() {
        let b = Box3 { lo: Point3::new(0, 0, 0), hi: Point3::new(2, 2, 2) };
        let cut = HalfSpace3 { plane: Plane3::new(1, 1, 1, 2).unwrap(), positive: false };
        let cell = PolyCell3::default().with(cut);
        let mut v = cell.clipped_vertices(&b);
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(v.len(), 4);
    }

    #[test]
    fn segment_values_are_exact() {
        let s = Segment2::new(p(0, 0), p(3, 1));
        assert_eq!(s.value_at(2), Frac::new(2, 3));
        assert_eq!(s.value_at_half(3), Frac::new(1, 2));
    }
}

