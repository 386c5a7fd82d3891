use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::Point2;
use crate::oracles::hull2_monotone;
use crate::visibility::{ConvexChain, Role};
use crate::{Error, Result};

/// Query point, outer boundary and obstacles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scene {
    pub q: Point2,
    pub boundary: ConvexChain,
    pub holes: Vec<ConvexChain>,
}

impl Scene {
    /// Vertex count of each chain, boundary first.
    pub fn chain_sizes(&self) -> Vec<usize> {
        std::iter::once(&self.boundary).chain(&self.holes).map(|c| c.vertices().len()).collect()
    }
}

fn ring(center: (f64, f64), radius: f64, angles: &[f64]) -> Vec<Point2> {
    let pts: Vec<Point2> = angles
        .iter()
        .map(|a| Point2::new((center.0 + radius * a.cos()).round() as i64, (center.1 + radius * a.sin()).round() as i64))
        .collect();
    hull2_monotone(&pts)
}

/// Random scene: a round outer boundary with `boundary_vertices` corners and
/// `holes` convex obstacles of up to `hole_vertices` corners, one per cell
/// of a grid; the query point sits in a cell of its own.
pub fn gen_scene(holes: usize, hole_vertices: usize, boundary_vertices: usize, seed: u64) -> Result<Scene> {
    if boundary_vertices < 3 || hole_vertices == 0 {
        return Err(Error::pre("boundary needs three vertices and holes at least one"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r_out = 1.0e6;
    let step = std::f64::consts::TAU / boundary_vertices as f64;
    let angles: Vec<f64> = (0..boundary_vertices).map(|k| k as f64 * step + rng.gen_range(0.0..0.5) * step).collect();
    let boundary = ConvexChain::new(ring((0.0, 0.0), r_out, &angles), Role::Boundary)?;

    let g = ((holes + 1) as f64).sqrt().ceil() as usize;
    let cell = 1.2 * r_out / g as f64;
    let origin = -0.6 * r_out;
    let mut cells: Vec<usize> = (0..g * g).collect();
    rand::seq::SliceRandom::shuffle(cells.as_mut_slice(), &mut rng);
    let center = |c: usize| (origin + (c % g) as f64 * cell + cell / 2.0, origin + (c / g) as f64 * cell + cell / 2.0);
    let qc = center(cells[0]);
    let jiggle = cell / 8.0;
    let q = Point2::new(
        (qc.0 + rng.gen_range(-jiggle..jiggle)).round() as i64,
        (qc.1 + rng.gen_range(-jiggle..jiggle)).round() as i64,
    );
    let mut out = Vec::with_capacity(holes);
    for &c in &cells[1..=holes] {
        let mut a: Vec<f64> = (0..hole_vertices).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        a.sort_by(f64::total_cmp);
        let radius = cell * rng.gen_range(0.1..0.4);
        out.push(ConvexChain::new(ring(center(c), radius, &a), Role::Hole)?);
    }
    Ok(Scene { q, boundary, holes: out })
}
