use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::partition_entropy;
use crate::geometry::Point3;
use crate::Result;

/// Points in space with the block sizes of a planted partition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedInstance3 {
    pub points: Vec<Point3>,
    pub sizes: Vec<usize>,
    pub entropy_bound: f64,
    pub seed: u64,
}

/// `n` integer points drawn uniformly from a ball.
pub fn ball(n: usize, radius: i64, seed: u64) -> Vec<Point3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r2 = radius as i128 * radius as i128;
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let c = [(); 3].map(|_| rng.gen_range(-radius..=radius));
        if c.iter().map(|&v| v as i128 * v as i128).sum::<i128>() <= r2 {
            out.push(Point3::new(c[0], c[1], c[2]));
        }
    }
    out
}

/// `n` points on `z = -(x^2 + y^2)` with distinct `(x, y)`: all of them are
/// upper-hull vertices.
pub fn paraboloid(n: usize, radius: i64, seed: u64) -> Vec<Point3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (x, y) = (rng.gen_range(-radius..=radius), rng.gen_range(-radius..=radius));
        if seen.insert((x, y)) {
            out.push(Point3::new(x, y, -(x * x + y * y)));
        }
    }
    out
}

/// A dome of `dome` points on a paraboloid over a disk of radius `R`, plus
/// clusters of the given sizes packed into small boxes deeper than the lowest
/// dome point and inside the disk of radius `R / 2`. Every cluster point is
/// strictly below the upper hull; each dome point is its own block.
pub fn planted_dome(dome: usize, clusters: &[usize], seed: u64) -> Result<PlantedInstance3> {
    const R: i64 = 1 << 15;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rim = dome.min(16);
    let mut points: Vec<Point3> = (0..rim)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / rim as f64;
            let (x, y) = ((R as f64 * a.cos()) as i64, (R as f64 * a.sin()) as i64);
            Point3::new(x, y, -(x * x + y * y))
        })
        .collect();
    let mut seen: std::collections::HashSet<(i64, i64)> = points.iter().map(|p| (p.x, p.y)).collect();
    while points.len() < dome {
        let (x, y) = (rng.gen_range(-R..=R), rng.gen_range(-R..=R));
        if x * x + y * y <= R * R && seen.insert((x, y)) {
            points.push(Point3::new(x, y, -(x * x + y * y)));
        }
    }
    let mut sizes = vec![1; dome];
    let floor = -R * R - 1;
    for &k in clusters {
        let (cx, cy) = loop {
            let c = (rng.gen_range(-R / 2..=R / 2), rng.gen_range(-R / 2..=R / 2));
            if 4 * (c.0 * c.0 + c.1 * c.1) <= R * R {
                break c;
            }
        };
        let w = 64 + (k as f64).cbrt() as i64 * 8;
        let top = floor - rng.gen_range(0..R);
        for _ in 0..k {
            points.push(Point3::new(cx + rng.gen_range(-w..=w), cy + rng.gen_range(-w..=w), top - rng.gen_range(0..=2 * w)));
        }
        sizes.push(k);
    }
    // shuffle dome points among the clusters while keeping each cluster contiguous
    let dome_pts: Vec<Point3> = points.drain(..dome).collect();
    let mut units: Vec<Vec<Point3>> = dome_pts.into_iter().map(|p| vec![p]).collect();
    let mut rest = points.into_iter();
    for &k in clusters {
        units.push(rest.by_ref().take(k).collect());
    }
    units.shuffle(&mut rng);
    let points: Vec<Point3> = units.into_iter().flatten().collect();
    let entropy_bound = partition_entropy(&sizes, points.len())?;
    Ok(PlantedInstance3 { points, sizes, entropy_bound, seed })
}
