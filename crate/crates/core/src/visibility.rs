//! Visibility polygon of a point inside a convex polygon with convex holes.
//!
//! Every chain is cut down to the edges facing the query point, turned into a
//! run of angular pieces, and the runs are merged on the same weighted stack
//! as the planar envelope, with the angle around the query point in place of
//! x and the distance along the ray in place of y. Angles are never computed:
//! directions are integer vectors ordered by half-plane and cross product, and
//! distances are exact fractions.

use std::cmp::Ordering;

use serde::Serialize;

use crate::envelope::{stack_merge, EnvelopeSpace, Piece, StackReport};
use crate::geometry::{orient2, Frac, Point2, Sign};
use crate::ledger::WorkLedger;
use crate::{Error, Result};

/// Whether a chain bounds the free space from outside or is an obstacle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Role {
    Boundary,
    Hole,
}

/// A closed convex polygon, stored counterclockwise. The first vertex is kept
/// when the orientation is flipped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexChain {
    vertices: Vec<Point2>,
    role: Role,
}

impl ConvexChain {
    pub fn new(mut vertices: Vec<Point2>, role: Role) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::malformed("empty chain"));
        }
        let n = vertices.len();
        if (0..n).any(|i| vertices[i] == vertices[(i + 1) % n]) && n > 1 {
            return Err(Error::pre("repeated consecutive vertex"));
        }
        let area2: i128 = (0..n)
            .map(|i| {
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                a.x as i128 * b.y as i128 - b.x as i128 * a.y as i128
            })
            .sum();
        if area2 < 0 {
            vertices[1..].reverse();
        }
        if n >= 3 {
            let turns_ok = (0..n).all(|i| orient2(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]) != Sign::Negative);
            // a star polygon also turns left everywhere; it winds more than once
            let flips = (0..n)
                .filter(|&i| {
                    let dx = |k: usize| (vertices[(k + 1) % n].x - vertices[k].x).signum();
                    let (a, b) = (dx(i), dx((i + 1) % n));
                    a != 0 && b != 0 && a != b
                })
                .count();
            if !turns_ok || area2 == 0 || flips > 2 {
                return Err(Error::pre("chain is not a convex polygon"));
            }
        }
        if role == Role::Boundary && (n < 3 || area2 == 0) {
            return Err(Error::pre("outer boundary needs positive area"));
        }
        Ok(ConvexChain { vertices, role })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn role(&self) -> Role {
        self.role
    }

    /// q strictly inside.
    fn strictly_contains(&self, q: Point2) -> bool {
        let n = self.vertices.len();
        n >= 3 && (0..n).all(|i| orient2(self.vertices[i], self.vertices[(i + 1) % n], q) == Sign::Positive)
    }

    /// q inside or on the boundary.
    fn touches(&self, q: Point2) -> bool {
        let n = self.vertices.len();
        match n {
            1 => self.vertices[0] == q,
            2 => crate::geometry::Segment2::new(self.vertices[0], self.vertices[1])
                .intersects(&crate::geometry::Segment2::new(q, q)),
            _ => (0..n).all(|i| orient2(self.vertices[i], self.vertices[(i + 1) % n], q) != Sign::Negative),
        }
    }
}

/// Window of `chain` visible from `q`, counterclockwise around `q`.
///
/// For a hole this is the run of edges facing `q`, from one tangent vertex to
/// the other. For the boundary it is the whole polygon closed back onto its
/// first vertex.
pub fn visible_window(chain: &ConvexChain, q: Point2) -> Result<Vec<Point2>> {
    window_edges(chain, q, &mut WorkLedger::new()).map(|(_, pts)| pts)
}

/// Facing edges as indices into the chain, plus the window vertices.
fn window_edges(chain: &ConvexChain, q: Point2, ledger: &mut WorkLedger) -> Result<(Vec<usize>, Vec<Point2>)> {
    let v = &chain.vertices;
    let n = v.len();
    match chain.role {
        Role::Boundary => {
            if !chain.strictly_contains(q) {
                return Err(Error::pre("query point is not strictly inside the outer boundary"));
            }
            ledger.orientation_tests += n as u64;
            let mut pts = v.clone();
            pts.push(v[0]);
            Ok(((0..n).collect(), pts))
        }
        Role::Hole => {
            if chain.touches(q) {
                return Err(Error::pre("query point lies in or on a hole"));
            }
            if n == 1 {
                return Ok((Vec::new(), v.clone()));
            }
            ledger.orientation_tests += n as u64;
            let facing: Vec<bool> = (0..n).map(|i| orient2(v[i], v[(i + 1) % n], q) == Sign::Negative).collect();
            let Some(first) = (0..n).find(|&i| facing[i] && !facing[(i + n - 1) % n]) else {
                return Ok((Vec::new(), Vec::new()));
            };
            let mut edges = Vec::new();
            let mut i = first;
            while facing[i] && edges.len() < n {
                edges.push(i);
                i = (i + 1) % n;
            }
            // reversed: counterclockwise around q
            edges.reverse();
            let mut pts: Vec<Point2> = edges.iter().map(|&e| v[(e + 1) % n]).collect();
            pts.push(v[*edges.last().unwrap()]);
            Ok((edges, pts))
        }
    }
}

/// Direction from the query point, ordered counterclockwise from the cut.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Angle {
    /// 1 only for the end of the cycle, the cut direction seen a full turn later.
    turn: u8,
    half: u8,
    d: (i64, i64),
}

fn cross_v(a: (i64, i64), b: (i64, i64)) -> i128 {
    a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128
}

impl Angle {
    fn new(cut: (i64, i64), d: (i64, i64)) -> Angle {
        let c = cross_v(cut, d);
        let dot = cut.0 as i128 * d.0 as i128 + cut.1 as i128 * d.1 as i128;
        let half = if c > 0 || (c == 0 && dot > 0) { 0 } else { 1 };
        Angle { turn: 0, half, d }
    }

    fn full_turn(cut: (i64, i64)) -> Angle {
        Angle { turn: 1, half: 0, d: cut }
    }

    fn is_zero_turn(&self) -> bool {
        self.turn == 0 && self.half == 0
    }
}

impl PartialEq for Angle {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Angle {}

impl PartialOrd for Angle {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Angle {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.turn, self.half).cmp(&(o.turn, o.half)).then_with(|| 0.cmp(&cross_v(self.d, o.d)))
    }
}

/// An input edge with its chain and position in that chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Edge {
    a: Point2,
    b: Point2,
    chain: usize,
    edge: usize,
}

struct Rays {
    q: Point2,
}

impl Rays {
    /// Distance along `d`, in units of `|d|`, to the line through the edge.
    fn reach(&self, e: &Edge, d: (i64, i64)) -> Frac {
        let ab = (e.b.x - e.a.x, e.b.y - e.a.y);
        let qa = (e.a.x - self.q.x, e.a.y - self.q.y);
        Frac::new(cross_v(qa, ab), cross_v(d, ab))
    }
}

impl EnvelopeSpace for Rays {
    type Pos = Angle;
    type Item = Edge;

    fn compare_at(&self, a: &Edge, b: &Edge, at: Angle) -> Ordering {
        self.reach(a, at.d).cmp(&self.reach(b, at.d))
    }
}

/// A vertex of the visibility polygon.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum VisVertex {
    /// An input vertex.
    Chain(Point2),
    /// Where a ray grazing an obstacle lands on the edge behind it.
    Shadow([f64; 2]),
}

impl VisVertex {
    pub fn coords(&self) -> [f64; 2] {
        match *self {
            VisVertex::Chain(p) => [p.x as f64, p.y as f64],
            VisVertex::Shadow(c) => c,
        }
    }
}

/// Where a polygon edge comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EdgeSource {
    /// Part of edge `edge` (from vertex `edge` to `edge + 1`) of chain
    /// `chain`; chain 0 is the outer boundary.
    Chain { chain: usize, edge: usize },
    /// Along a ray from the query point.
    Ray,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VisibilityPolygon {
    /// Counterclockwise around the query point.
    pub vertices: Vec<VisVertex>,
    /// `sources[i]` describes the edge from vertex `i` to vertex `i + 1`.
    pub sources: Vec<EdgeSource>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VisibilityOutput {
    pub polygon: VisibilityPolygon,
    pub ledger: WorkLedger,
    pub stack: StackReport,
}

type Run = Vec<Piece<Angle, Edge>>;

fn window_run(chain: &ConvexChain, id: usize, q: Point2, cut: (i64, i64), ledger: &mut WorkLedger) -> Result<Run> {
    let (edges, _) = window_edges(chain, q, ledger)?;
    let v = &chain.vertices;
    let n = v.len();
    let dir = |p: Point2| (p.x - q.x, p.y - q.y);
    let mut before: Run = Vec::new();
    let mut after: Run = Vec::new();
    let mut wrapped = false;
    for e in edges {
        let (a, b) = (v[e], v[(e + 1) % n]);
        // counterclockwise around q
        let (s, t) = if chain.role == Role::Hole { (b, a) } else { (a, b) };
        let item = Edge { a: s, b: t, chain: id, edge: e };
        let (lo, mut hi) = (Angle::new(cut, dir(s)), Angle::new(cut, dir(t)));
        ledger.comparisons += 1;
        if wrapped {
            after.push(Piece { item, lo, hi });
            continue;
        }
        if hi.is_zero_turn() && cross_v(cut, hi.d) == 0 {
            hi = Angle::full_turn(cut);
        }
        if hi <= lo {
            before.push(Piece { item, lo, hi: Angle::full_turn(cut) });
            after.push(Piece { item, lo: Angle::new(cut, cut), hi });
            wrapped = true;
        } else {
            before.push(Piece { item, lo, hi });
            wrapped = hi.turn == 1;
        }
    }
    after.retain(|p| p.lo < p.hi);
    after.extend(before);
    Ok(after)
}

/// Visibility polygon of `q` inside `boundary` with the given obstacles.
pub fn visibility_polygon(boundary: &ConvexChain, holes: &[ConvexChain], q: Point2) -> Result<VisibilityOutput> {
    if boundary.role != Role::Boundary || holes.iter().any(|h| h.role != Role::Hole) {
        return Err(Error::pre("chain roles do not match their position"));
    }
    let mut ledger = WorkLedger::new();
    let v0 = boundary.vertices[0];
    let cut = (v0.x - q.x, v0.y - q.y);
    let mut runs = Vec::with_capacity(holes.len() + 1);
    for (id, c) in std::iter::once(boundary).chain(holes).enumerate() {
        let run = window_run(c, id, q, cut, &mut ledger)?;
        if !run.is_empty() {
            let w = run.len() as u64;
            runs.push((run, w));
        }
    }
    let space = Rays { q };
    let (pieces, stack) = stack_merge(&space, runs, &mut ledger)?;
    ledger.max_depth = stack.max_height;
    let polygon = assemble(&space, &pieces);
    Ok(VisibilityOutput { polygon, ledger, stack })
}

fn assemble(space: &Rays, pieces: &[Piece<Angle, Edge>]) -> VisibilityPolygon {
    let q = space.q;
    let at = |e: &Edge, ang: Angle| -> VisVertex {
        for p in [e.a, e.b] {
            let d = (p.x - q.x, p.y - q.y);
            if cross_v(d, ang.d) == 0 && d.0 as i128 * ang.d.0 as i128 + d.1 as i128 * ang.d.1 as i128 > 0 {
                return VisVertex::Chain(p);
            }
        }
        let t = space.reach(e, ang.d).to_f64();
        VisVertex::Shadow([q.x as f64 + t * ang.d.0 as f64, q.y as f64 + t * ang.d.1 as f64])
    };
    let mut vertices = Vec::new();
    let mut sources = Vec::new();
    for (k, p) in pieces.iter().enumerate() {
        let joins_previous = k > 0 && space.compare_at(&pieces[k - 1].item, &p.item, p.lo) == Ordering::Equal;
        if k > 0 && !joins_previous {
            sources.push(EdgeSource::Ray);
        }
        if !joins_previous {
            vertices.push(at(&p.item, p.lo));
        }
        sources.push(EdgeSource::Chain { chain: p.item.chain, edge: p.item.edge });
        vertices.push(at(&p.item, p.hi));
    }
    // the last vertex sits on the cut ray, as does the first
    if let (Some(first), Some(last)) = (pieces.first(), pieces.last()) {
        if space.compare_at(&first.item, &last.item, first.lo) == Ordering::Equal {
            vertices.pop();
        } else {
            sources.push(EdgeSource::Ray);
        }
    }
    VisibilityPolygon { vertices, sources }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<Point2> {
        v.iter().map(|&(x, y)| Point2::new(x, y)).collect()
    }

    fn square(c: (i64, i64), r: i64, role: Role) -> ConvexChain {
        ConvexChain::new(pts(&[(c.0 - r, c.1 - r), (c.0 + r, c.1 - r), (c.0 + r, c.1 + r), (c.0 - r, c.1 + r)]), role).unwrap()
    }

    #[test]
    fn no_holes_gives_the_boundary() {
        let b = square((0, 0), 10, Role::Boundary);
        let out = visibility_polygon(&b, &[], Point2::new(1, 2)).unwrap();
        let want: Vec<VisVertex> = b.vertices().iter().map(|&p| VisVertex::Chain(p)).collect();
        assert_eq!(out.polygon.vertices, want);
        assert_eq!(out.polygon.sources.len(), 4);
        assert!(out.polygon.sources.iter().all(|s| matches!(s, EdgeSource::Chain { chain: 0, .. })));
    }

    #[test]
    fn square_hole_window_from_below() {
        let h = square((0, 10), 2, Role::Hole);
        let w = visible_window(&h, Point2::new(0, 0)).unwrap();
        assert_eq!(w, pts(&[(2, 8), (-2, 8)]));
        let w = visible_window(&h, Point2::new(5, 0)).unwrap();
        assert_eq!(w, pts(&[(2, 12), (2, 8), (-2, 8)]));
    }

    #[test]
    fn degenerate_windows() {
        let p = ConvexChain::new(pts(&[(3, 3)]), Role::Hole).unwrap();
        assert_eq!(visible_window(&p, Point2::new(0, 0)).unwrap(), pts(&[(3, 3)]));
        let b = square((0, 0), 4, Role::Boundary);
        assert_eq!(visible_window(&b, Point2::new(0, 0)).unwrap().len(), 5);
        assert!(visible_window(&b, Point2::new(9, 0)).is_err());
        assert!(visible_window(&square((0, 0), 1, Role::Hole), Point2::new(0, 0)).is_err());
    }

    #[test]
    fn triangle_hole_casts_a_shadow() {
        let b = square((0, 0), 10, Role::Boundary);
        let h = ConvexChain::new(pts(&[(-1, 4), (1, 4), (0, 6)]), Role::Hole).unwrap();
        let out = visibility_polygon(&b, &[h], Point2::new(0, 0)).unwrap();
        let poly = &out.polygon;
        let shadows = poly.vertices.iter().filter(|v| matches!(v, VisVertex::Shadow(_))).count();
        assert_eq!(shadows, 2);
        assert!(poly.vertices.contains(&VisVertex::Chain(Point2::new(1, 4))));
        assert!(poly.vertices.contains(&VisVertex::Chain(Point2::new(-1, 4))));
        assert!(!poly.vertices.contains(&VisVertex::Chain(Point2::new(0, 6))));
        assert_eq!(poly.vertices.len(), poly.sources.len());
        assert_eq!(poly.sources.iter().filter(|s| **s == EdgeSource::Ray).count(), 2);
        let sh: Vec<[f64; 2]> = poly.vertices.iter().filter_map(|v| if let VisVertex::Shadow(c) = v { Some(*c) } else { None }).collect();
        assert!(sh.iter().all(|c| (c[1] - 10.0).abs() < 1e-9 && (c[0].abs() - 2.5).abs() < 1e-9));
    }

    #[test]
    fn hole_across_the_cut() {
        let b = square((0, 0), 10, Role::Boundary);
        // the cut runs from the origin toward (-10, -10)
        let h = square((-5, -5), 1, Role::Hole);
        let out = visibility_polygon(&b, &[h], Point2::new(0, 0)).unwrap();
        assert!(out.polygon.vertices.contains(&VisVertex::Chain(Point2::new(-4, -6))));
        assert!(out.polygon.vertices.contains(&VisVertex::Chain(Point2::new(-6, -4))));
        assert!(!out.polygon.vertices.contains(&VisVertex::Chain(Point2::new(-10, -10))));
        assert_eq!(out.polygon.vertices.len(), out.polygon.sources.len());
    }

    #[test]
    fn clockwise_input_is_accepted() {
        let cw = ConvexChain::new(pts(&[(0, 0), (0, 4), (4, 4), (4, 0)]), Role::Boundary).unwrap();
        assert_eq!(cw.vertices()[0], Point2::new(0, 0));
        assert_eq!(cw.vertices()[1], Point2::new(4, 0));
        let star = pts(&[(0, 0), (4, 0), (1, 3), (2, -2), (3, 3)]);
        assert!(ConvexChain::new(star, Role::Hole).is_err());
    }

    #[test]
    fn crossing_holes_are_rejected() {
        let b = square((0, 0), 20, Role::Boundary);
        let h1 = ConvexChain::new(pts(&[(0, 5), (8, 5), (4, 9)]), Role::Hole).unwrap();
        let h2 = ConvexChain::new(pts(&[(2, 4), (6, 6), (1, 7)]), Role::Hole).unwrap();
        assert!(visibility_polygon(&b, &[h1, h2], Point2::new(4, 0)).is_err());
    }
}
