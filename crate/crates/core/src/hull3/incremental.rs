//! Randomized incremental hull in space with conflict lists.
//!
//! A face is removed when the new point is strictly in front of it, or lies
//! in its plane outside the triangle. The second rule keeps every new face
//! non-degenerate when points are coplanar with existing faces.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{orient3_det, Point3};
use crate::ledger::WorkLedger;

pub(crate) enum Solid {
    /// Outward-oriented triangles.
    Faces(Vec<[usize; 3]>),
    /// Fewer than four affinely independent points.
    Flat,
}

struct Face {
    v: [usize; 3],
    /// Neighbor across edge `v[e] -> v[e + 1]`.
    nb: [usize; 3],
    alive: bool,
    conflicts: Vec<usize>,
}

fn in_closed_triangle(points: &[Point3], f: [usize; 3], p: Point3) -> bool {
    let [a, b, c] = f.map(|i| points[i]);
    let u = [(b.x - a.x) as i128, (b.y - a.y) as i128, (b.z - a.z) as i128];
    let v = [(c.x - a.x) as i128, (c.y - a.y) as i128, (c.z - a.z) as i128];
    let n = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
    let axis = (0..3).max_by_key(|&i| n[i].unsigned_abs()).unwrap_or(2);
    let proj = |q: Point3| match axis {
        0 => (q.y as i128, q.z as i128),
        1 => (q.z as i128, q.x as i128),
        _ => (q.x as i128, q.y as i128),
    };
    let o = |p: (i128, i128), q: (i128, i128), r: (i128, i128)| (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0);
    let (a, b, c, p) = (proj(a), proj(b), proj(c), proj(p));
    let s = o(a, b, c).signum();
    [o(a, b, p), o(b, c, p), o(c, a, p)].iter().all(|&t| t.signum() * s >= 0)
}

fn initial(points: &[Point3], order: &[usize]) -> Option<[usize; 4]> {
    let a = *order.first()?;
    let b = *order.iter().find(|&&i| points[i] != points[a])?;
    let c = *order.iter().find(|&&i| crate::geometry::Plane3::through(points[a], points[b], points[i]).is_some())?;
    let d = *order.iter().find(|&&i| orient3_det(points[a], points[b], points[c], points[i]) != 0)?;
    Some([a, b, c, d])
}

/// Hull of `points[idx]`; insertion order is shuffled with `rng`.
pub(crate) fn hull_faces(points: &[Point3], idx: &[usize], rng: &mut ChaCha8Rng, ledger: &mut WorkLedger) -> Solid {
    let mut order: Vec<usize> = idx.to_vec();
    order.sort_by_key(|&i| (points[i], i));
    order.dedup_by_key(|i| points[*i]);
    order.shuffle(rng);
    let Some([a, b, c, d]) = initial(points, &order) else { return Solid::Flat };
    let tris = if orient3_det(points[a], points[b], points[c], points[d]) < 0 {
        [[a, b, c], [a, d, b], [b, d, c], [c, d, a]]
    } else {
        [[a, c, b], [a, b, d], [b, c, d], [c, a, d]]
    };
    let mut faces: Vec<Face> = tris.iter().map(|&v| Face { v, nb: [0; 3], alive: true, conflicts: Vec::new() }).collect();
    for f in 0..4 {
        for e in 0..3 {
            let (u, v) = (faces[f].v[e], faces[f].v[(e + 1) % 3]);
            let g = (0..4).find(|&g| (0..3).any(|k| faces[g].v[k] == v && faces[g].v[(k + 1) % 3] == u)).expect("closed tetrahedron");
            faces[f].nb[e] = g;
        }
    }
    let rest: Vec<usize> = order.into_iter().filter(|i| ![a, b, c, d].contains(i)).collect();
    let mut point_conf: Vec<Vec<usize>> = vec![Vec::new(); points.len()];
    let mut tests = 0u64;
    let front = |f: &Face, p: usize, tests: &mut u64| {
        *tests += 1;
        orient3_det(points[f.v[0]], points[f.v[1]], points[f.v[2]], points[p])
    };
    for &p in &rest {
        for (fi, f) in faces.iter_mut().enumerate() {
            if front(f, p, &mut tests) > 0 {
                f.conflicts.push(p);
                point_conf[p].push(fi);
            }
        }
    }

    let mut seen_face: Vec<u32> = vec![0; faces.len()];
    let mut seen_point: Vec<u32> = vec![0; points.len()];
    let mut stamp = 0u32;
    for &p in &rest {
        let conf = std::mem::take(&mut point_conf[p]);
        let Some(start) = conf.into_iter().find(|&f| faces[f].alive) else {
            continue;
        };
        stamp += 1;
        seen_face.resize(faces.len(), 0);
        // seen_face: stamp = visited and removed, stamp with high bit = visited and kept
        let kept = stamp | 1 << 31;
        let mut visible = vec![start];
        seen_face[start] = stamp;
        let mut horizon: Vec<(usize, usize, usize, usize)> = Vec::new();
        let mut i = 0;
        while i < visible.len() {
            let f = visible[i];
            i += 1;
            for e in 0..3 {
                let g = faces[f].nb[e];
                if seen_face[g] != stamp && seen_face[g] != kept {
                    let o = front(&faces[g], p, &mut tests);
                    let gone = o > 0 || (o == 0 && !in_closed_triangle(points, faces[g].v, points[p]));
                    seen_face[g] = if gone { stamp } else { kept };
                    if gone {
                        visible.push(g);
                    }
                }
                if seen_face[g] == kept {
                    horizon.push((faces[f].v[e], faces[f].v[(e + 1) % 3], f, g));
                }
            }
        }
        let base = faces.len();
        let mut by_start = std::collections::HashMap::with_capacity(horizon.len());
        let mut by_end = std::collections::HashMap::with_capacity(horizon.len());
        for (k, &(u, v, _, _)) in horizon.iter().enumerate() {
            by_start.insert(u, base + k);
            by_end.insert(v, base + k);
        }
        for &(u, v, f, g) in &horizon {
            let id = faces.len();
            let nb = [g, by_start[&v], by_end[&u]];
            let e = (0..3).find(|&e| faces[g].v[e] == v && faces[g].v[(e + 1) % 3] == u).expect("shared edge");
            faces[g].nb[e] = id;
            let mut face = Face { v: [u, v, p], nb, alive: true, conflicts: Vec::new() };
            stamp += 1;
            for &x in faces[f].conflicts.iter().chain(&faces[g].conflicts) {
                if x == p || seen_point[x] == stamp {
                    continue;
                }
                seen_point[x] = stamp;
                if front(&face, x, &mut tests) > 0 {
                    face.conflicts.push(x);
                    point_conf[x].push(id);
                }
            }
            faces.push(face);
        }
        for &f in &visible {
            faces[f].alive = false;
            faces[f].conflicts = Vec::new();
        }
    }
    ledger.orientation_tests += tests;
    Solid::Faces(faces.into_iter().filter(|f| f.alive).map(|f| f.v).collect())
}
