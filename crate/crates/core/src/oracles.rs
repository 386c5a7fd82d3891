//! Slow, obviously-correct reference implementations used to check the
//! adaptive algorithms. None of them share code paths with what they check.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::entropy::Run;
use crate::geometry::{cross, dominates, orient2, orient3_det, Frac, Plane3, Point2, Point3, Segment2, Sign};

fn dedup_sorted(points: &[Point2]) -> Vec<Point2> {
    let mut s = points.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}

/// Maximal points by pairwise comparison, sorted by x.
pub fn maxima_brute(points: &[Point2]) -> Vec<Point2> {
    let s = dedup_sorted(points);
    s.iter().copied().filter(|&p| !s.iter().any(|&q| dominates(q, p))).collect()
}

/// Andrew's monotone chain: `(lower, upper)`, both from the lexicographically
/// smallest to the largest point, collinear points dropped.
pub fn monotone_chains(points: &[Point2]) -> (Vec<Point2>, Vec<Point2>) {
    let s = dedup_sorted(points);
    let chain = |it: &mut dyn Iterator<Item = Point2>, keep: Sign| {
        let mut h: Vec<Point2> = Vec::new();
        for p in it {
            while h.len() >= 2 && orient2(h[h.len() - 2], h[h.len() - 1], p) != keep {
                h.pop();
            }
            h.push(p);
        }
        h
    };
    let lower = chain(&mut s.iter().copied(), Sign::Positive);
    let upper = chain(&mut s.iter().copied(), Sign::Negative);
    (lower, upper)
}

/// Hull vertices counterclockwise from the lexicographically smallest point.
pub fn hull2_monotone(points: &[Point2]) -> Vec<Point2> {
    let (lower, upper) = monotone_chains(points);
    if upper.len() <= 1 {
        return upper;
    }
    let mut h = lower;
    h.pop();
    h.extend(upper.iter().rev().take(upper.len() - 1));
    if h.len() == 2 && h[0] == h[1] {
        h.pop();
    }
    h
}

/// Jarvis march, counterclockwise from the lexicographically smallest point.
pub fn gift_wrap(points: &[Point2]) -> Vec<Point2> {
    let s = dedup_sorted(points);
    if s.len() <= 2 {
        return s;
    }
    let start = s[0];
    let mut hull = vec![start];
    let mut cur = start;
    loop {
        let mut next = if s[0] == cur { s[1] } else { s[0] };
        for &p in &s {
            if p == cur {
                continue;
            }
            let o = cross(cur, next, p);
            let farther = |a: Point2, b: Point2| {
                let d = |q: Point2| ((q.x - cur.x) as i128).pow(2) + ((q.y - cur.y) as i128).pow(2);
                d(a) > d(b)
            };
            if o < 0 || (o == 0 && farther(p, next)) {
                next = p;
            }
        }
        if next == start {
            break;
        }
        hull.push(next);
        cur = next;
    }
    if hull.len() == 2 || hull.iter().skip(2).all(|&p| orient2(hull[0], hull[1], p) == Sign::Zero) {
        return vec![s[0], *s.last().unwrap()];
    }
    hull
}

/// Upper bridge over the split `{p <= split}` / `{p > split}` by trying all
/// pairs. Returns the extreme contact points of the supporting line.
pub fn bridge_brute(points: &[Point2], split: Point2) -> Option<(Point2, Point2)> {
    let s = dedup_sorted(points);
    let mut best: Option<(Point2, Point2)> = None;
    for &p in s.iter().filter(|&&p| p <= split) {
        for &q in s.iter().filter(|&&q| q > split) {
            if s.iter().all(|&r| orient2(p, q, r) != Sign::Positive) {
                best = match best {
                    None => Some((p, q)),
                    Some((a, b)) => Some((a.min(p), b.max(q))),
                };
            }
        }
    }
    best
}

/// Greedy maximal runs found by trying every end position from the longest.
pub fn runs_brute<T: Ord>(seq: &[T]) -> Vec<Run> {
    use crate::entropy::Direction;
    let mono = |w: &[T], dir: std::cmp::Ordering| w.windows(2).all(|p| p[0].cmp(&p[1]) != dir.reverse());
    let mut out = Vec::new();
    let mut s = 0;
    while s < seq.len() {
        let mut e = seq.len();
        loop {
            let w = &seq[s..e];
            if mono(w, std::cmp::Ordering::Less) {
                out.push(Run { start: s, len: e - s, direction: Direction::NonDecreasing });
                break;
            }
            if mono(w, std::cmp::Ordering::Greater) {
                out.push(Run { start: s, len: e - s, direction: Direction::NonIncreasing });
                break;
            }
            e -= 1;
        }
        s = e;
    }
    out
}

/// Lowest chain value at abscissa `x2 / 2`, or `None` if no chain spans it.
pub fn envelope_probe(chains: &[Vec<Point2>], x2: i128) -> Option<Frac> {
    let mut best: Option<Frac> = None;
    for c in chains {
        let candidates: Vec<Segment2> = if c.len() == 1 {
            vec![Segment2::new(c[0], c[0])]
        } else {
            c.windows(2).map(|w| Segment2::new(w[0], w[1])).collect()
        };
        for s in candidates {
            if 2 * s.a.x as i128 <= x2 && x2 <= 2 * s.b.x as i128 {
                let v = s.value_at_half(x2);
                best = Some(match best {
                    Some(b) if b <= v => b,
                    _ => v,
                });
            }
        }
    }
    best
}

/// Nearest hit of the ray from `q` along `d` with any closed polygon edge,
/// as a multiple of `|d|`. Chains are closed polygons; a single vertex is
/// hit only when it lies on the ray.
pub fn ray_probe(chains: &[Vec<Point2>], q: Point2, d: (i64, i64)) -> Option<Frac> {
    let c = |u: (i128, i128), v: (i128, i128)| u.0 * v.1 - u.1 * v.0;
    let d = (d.0 as i128, d.1 as i128);
    let mut best: Option<Frac> = None;
    let mut offer = |t: Frac| {
        if best.is_none_or(|b| t < b) {
            best = Some(t);
        }
    };
    for ch in chains {
        let n = ch.len();
        for i in 0..n {
            let (a, b) = (ch[i], ch[(i + 1) % n]);
            let qa = ((a.x - q.x) as i128, (a.y - q.y) as i128);
            let ab = ((b.x - a.x) as i128, (b.y - a.y) as i128);
            let den = c(d, ab);
            if den == 0 {
                // parallel: only an endpoint on the ray can be hit
                for p in [a, b] {
                    let qp = ((p.x - q.x) as i128, (p.y - q.y) as i128);
                    let dot = qp.0 * d.0 + qp.1 * d.1;
                    if c(qp, d) == 0 && dot > 0 {
                        offer(Frac::new(dot, d.0 * d.0 + d.1 * d.1));
                    }
                }
                continue;
            }
            let t = Frac::new(c(qa, ab), den);
            let s = Frac::new(c(qa, d), den);
            if t > Frac::new(0, 1) && s >= Frac::new(0, 1) && s <= Frac::new(1, 1) {
                offer(t);
            }
        }
    }
    best
}

fn canonical(points: &[Point3], f: [usize; 3]) -> Option<Plane3> {
    Plane3::through(points[f[0]], points[f[1]], points[f[2]])
}

/// Upper-hull facet planes by testing every triple. Quartic; tiny inputs only.
pub fn upper_hull_planes_brute(points: &[Point3]) -> BTreeSet<Plane3> {
    let mut out = BTreeSet::new();
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let Some(pl) = canonical(points, [i, j, k]) else { continue };
                if pl.c > 0 && points.iter().all(|&p| pl.eval(p) <= 0) {
                    out.insert(pl);
                }
            }
        }
    }
    out
}

/// Hull of points in space by plain incremental insertion, scanning every
/// facet for visibility. Returns outward-oriented triangles, or `None` when
/// all points are coplanar.
pub fn hull3_incremental(points: &[Point3]) -> Option<Vec<[usize; 3]>> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by_key(|&i| points[i]);
    idx.dedup_by_key(|i| points[*i]);
    let a = *idx.first()?;
    let b = *idx.iter().find(|&&i| points[i] != points[a])?;
    let c = *idx.iter().find(|&&i| {
        let (p, q, r) = (points[a], points[b], points[i]);
        Plane3::through(p, q, r).is_some()
    })?;
    let d = *idx.iter().find(|&&i| orient3_det(points[a], points[b], points[c], points[i]) != 0)?;
    let mut faces: Vec<[usize; 3]> = if orient3_det(points[a], points[b], points[c], points[d]) < 0 {
        vec![[a, b, c], [a, d, b], [b, d, c], [c, d, a]]
    } else {
        vec![[a, c, b], [a, b, d], [b, c, d], [c, a, d]]
    };
    for &p in &idx {
        if [a, b, c, d].contains(&p) {
            continue;
        }
        let visible: Vec<bool> = faces
            .iter()
            .map(|f| orient3_det(points[f[0]], points[f[1]], points[f[2]], points[p]) > 0)
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, v)| **v) {
            for e in 0..3 {
                edges.insert((f[e], f[(e + 1) % 3]));
            }
        }
        let mut next: Vec<[usize; 3]> =
            faces.iter().zip(&visible).filter(|(_, v)| !**v).map(|(f, _)| *f).collect();
        for &(u, v) in &edges {
            if !edges.contains(&(v, u)) {
                next.push([u, v, p]);
            }
        }
        faces = next;
    }
    Some(faces)
}

/// Supporting planes of the upper facets of a triangle list.
pub fn upper_planes(points: &[Point3], faces: &[[usize; 3]]) -> BTreeSet<Plane3> {
    faces
        .iter()
        .filter_map(|f| {
            let n = normal(points, *f);
            if n[2] > 0 {
                canonical(points, *f)
            } else {
                None
            }
        })
        .collect()
}

pub(crate) fn normal(points: &[Point3], f: [usize; 3]) -> [i128; 3] {
    let (a, b, c) = (points[f[0]], points[f[1]], points[f[2]]);
    let u = [(b.x - a.x) as i128, (b.y - a.y) as i128, (b.z - a.z) as i128];
    let v = [(c.x - a.x) as i128, (c.y - a.y) as i128, (c.z - a.z) as i128];
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

/// Vertex set of a triangle list.
pub fn vertex_set(faces: &[[usize; 3]]) -> BTreeSet<usize> {
    faces.iter().flatten().copied().collect()
}

/// Count how often each directed edge appears; a closed oriented surface has
/// every edge exactly once in each direction.
pub fn is_closed_surface(faces: &[[usize; 3]]) -> bool {
    let mut m: HashMap<(usize, usize), i32> = HashMap::new();
    for f in faces {
        for e in 0..3 {
            *m.entry((f[e], f[(e + 1) % 3])).or_default() += 1;
        }
    }
    m.iter().all(|(&(u, v), &c)| c == 1 && m.get(&(v, u)) == Some(&1))
}
