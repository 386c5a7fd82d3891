use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{arrange, BlockSpec, PlantedInstance};
use crate::entropy::{partition_entropy, verify_respectful_maxima, BlockKind, Range, RangePartition, RangedBlock};
use crate::geometry::{Point2, Rect};
use crate::{Error, Result};

/// Planted maxima instance.
///
/// Each sorted block opens a group: its points form a short descending
/// staircase in the upper-right quarter of the group's square, and the
/// covered blocks that follow it in `blocks` are scattered in the lower-left
/// quarter, under the staircase. Group squares sit on a descending diagonal in
/// random order, so every staircase point is maximal and every covered point
/// is not.
pub fn gen_maxima_planted(blocks: &[BlockSpec], seed: u64, shuffle: bool) -> Result<PlantedInstance> {
    if blocks.iter().any(|b| b.size == 0) {
        return Err(Error::pre("block sizes must be positive"));
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        match b.kind {
            BlockKind::Sorted => groups.push((i, Vec::new())),
            BlockKind::Covered => match groups.last_mut() {
                Some(g) => g.1.push(i),
                None => return Err(Error::pre("a covered block needs a sorted block before it")),
            },
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s_max = groups.iter().map(|g| blocks[g.0].size).max().unwrap_or(0) as i64;
    let c_max = groups.iter().map(|g| g.1.iter().map(|&i| blocks[i].size).sum::<usize>()).max().unwrap_or(0);
    let w = (64i64).max(4 * s_max + 8).max(4 * (c_max as f64).sqrt().ceil() as i64 + 8);
    let w = w + (w & 1);
    let g_count = groups.len() as i64;
    let mut slots: Vec<i64> = (0..g_count).collect();
    slots.shuffle(&mut rng);

    let mut made: Vec<(BlockKind, Vec<Point2>)> = vec![(BlockKind::Sorted, Vec::new()); blocks.len()];
    for ((sorted, covered), &slot) in groups.iter().zip(&slots) {
        let (ox, oy) = (slot * w, (g_count - 1 - slot) * w);
        let s = blocks[*sorted].size as i64;
        let d = ((w / 2 - 2) / s).max(1);
        let stair: Vec<Point2> = (0..s)
            .map(|j| Point2::new(ox + w / 2 + j * d + rng.gen_range(0..=(d - 1) / 2), oy + w - 1 - j * d))
            .collect();
        made[*sorted] = (BlockKind::Sorted, stair);
        for &c in covered {
            let (x0, y0) = (rng.gen_range(0..w / 4), rng.gen_range(0..w / 4));
            let (x1, y1) = (rng.gen_range(x0 + 1..w / 2), rng.gen_range(y0 + 1..w / 2));
            let pts = (0..blocks[c].size)
                .map(|_| Point2::new(ox + rng.gen_range(x0..=x1), oy + rng.gen_range(y0..=y1)))
                .collect();
            made[c] = (BlockKind::Covered, pts);
        }
    }

    let (points, members) = arrange(made, shuffle, &mut rng);
    let certificate = RangePartition {
        n: points.len(),
        blocks: blocks
            .iter()
            .zip(members)
            .map(|(b, m)| RangedBlock {
                kind: b.kind,
                range: Range::Rect(Rect::bounding(m.iter().map(|&i| points[i])).unwrap()),
                member_indices: m,
            })
            .collect(),
    };
    verify_respectful_maxima(&points, &certificate)
        .map_err(|v| Error::pre(format!("planted certificate rejected: {v}")))?;
    let entropy_bound = partition_entropy(&certificate.sizes(), points.len())?;
    Ok(PlantedInstance { points, certificate, entropy_bound, generator: "maxima-planted".into(), seed })
}
