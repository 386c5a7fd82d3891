//! Seeded instance generators. Planar generators plant a respectful partition
//! and return it as a certificate, so the entropy of the instance is known
//! from above without running anything.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::{BlockKind, RangePartition};
use crate::geometry::{Point2, Triangle2};

mod chains;
mod worked;
mod hull;
mod maxima;
mod scenes;
mod space;

pub use chains::{gen_chains, SizeProfile};
pub use worked::{staircase_partitions, staircase_points, arcs_partitions, arcs_points};
pub use hull::{circle_sorted, gen_hull_planted};
pub use maxima::gen_maxima_planted;
pub use scenes::{gen_scene, Scene};
pub use space::{ball, paraboloid, planted_dome, PlantedInstance3};

/// One requested block of a planted instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub size: usize,
    pub kind: BlockKind,
}

impl BlockSpec {
    pub fn sorted(size: usize) -> Self {
        BlockSpec { size, kind: BlockKind::Sorted }
    }

    pub fn covered(size: usize) -> Self {
        BlockSpec { size, kind: BlockKind::Covered }
    }
}

/// `k` blocks of (nearly) equal size summing to `n`, all of one kind.
pub fn equal_blocks(n: usize, k: usize, kind: BlockKind) -> Vec<BlockSpec> {
    let k = k.clamp(1, n.max(1));
    (0..k).map(|i| BlockSpec { size: n / k + usize::from(i < n % k), kind }).filter(|b| b.size > 0).collect()
}

/// A point sequence with a certificate for it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedInstance {
    pub points: Vec<Point2>,
    pub certificate: RangePartition,
    pub entropy_bound: f64,
    pub generator: String,
    pub seed: u64,
}

/// Sequence order of blocks: contiguous, or with covered points scattered
/// between whole sorted blocks.
fn arrange(blocks: Vec<(BlockKind, Vec<Point2>)>, shuffle: bool, rng: &mut ChaCha8Rng) -> (Vec<Point2>, Vec<Vec<usize>>) {
    enum Unit {
        Block(usize),
        Single(usize, Point2),
    }
    let mut units: Vec<Unit> = Vec::new();
    for (b, (kind, pts)) in blocks.iter().enumerate() {
        if shuffle && *kind == BlockKind::Covered {
            units.extend(pts.iter().map(|&p| Unit::Single(b, p)));
        } else {
            units.push(Unit::Block(b));
        }
    }
    if shuffle {
        units.shuffle(rng);
    }
    let mut points = Vec::new();
    let mut members = vec![Vec::new(); blocks.len()];
    for u in units {
        match u {
            Unit::Block(b) => {
                for &p in &blocks[b].1 {
                    members[b].push(points.len());
                    points.push(p);
                }
            }
            Unit::Single(b, p) => {
                members[b].push(points.len());
                points.push(p);
            }
        }
    }
    (points, members)
}

/// Integer points drawn inside a triangle by rejection, distinct where the
/// area allows.
fn fill_triangle(t: &Triangle2, k: usize, rng: &mut ChaCha8Rng) -> Vec<Point2> {
    let vs = t.vertices();
    let (x0, x1) = (vs.iter().map(|p| p.x).min().unwrap(), vs.iter().map(|p| p.x).max().unwrap());
    let (y0, y1) = (vs.iter().map(|p| p.y).min().unwrap(), vs.iter().map(|p| p.y).max().unwrap());
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(k);
    let mut misses = 0usize;
    while out.len() < k {
        let p = Point2::new(rng.gen_range(x0..=x1), rng.gen_range(y0..=y1));
        if !t.contains(p) {
            continue;
        }
        if seen.insert(p) || misses > 64 * k {
            out.push(p);
        } else {
            misses += 1;
        }
    }
    out
}
