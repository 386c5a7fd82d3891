//! The small worked configurations: an 11-point maxima instance and a
//! 22-point hull instance, each with a fine and a coarse certificate.

use crate::entropy::{BlockKind, Range, RangePartition, RangedBlock};
use crate::geometry::{Point2, Rect, Triangle2};

fn pts(v: &[(i64, i64)]) -> Vec<Point2> {
    v.iter().map(|&(x, y)| Point2::new(x, y)).collect()
}

fn rect_block(points: &[Point2], kind: BlockKind, members: &[usize]) -> RangedBlock {
    let range = Range::Rect(Rect::bounding(members.iter().map(|&i| points[i])).unwrap());
    RangedBlock { kind, member_indices: members.to_vec(), range }
}

fn tri_block(kind: BlockKind, members: impl IntoIterator<Item = usize>, t: [(i64, i64); 3]) -> RangedBlock {
    let [a, b, c] = t.map(|(x, y)| Point2::new(x, y));
    RangedBlock { kind, member_indices: members.into_iter().collect(), range: Range::Triangle(Triangle2::new(a, b, c)) }
}

/// Eleven points: a five-point staircase over two dominated clusters.
pub fn staircase_points() -> Vec<Point2> {
    pts(&[(3, 1), (10, 10), (6, 7), (11, 11), (2, 3), (12, 12), (5, 2), (13, 17), (7, 6), (14, 16), (4, 4)])
}

/// `(fine, coarse)` certificates for [`staircase_points`]. The coarse one keeps the
/// staircase as a single sorted block; the fine one covers its first three
/// points and leaves the last two alone.
pub fn staircase_partitions() -> (RangePartition, RangePartition) {
    let p = staircase_points();
    let clusters = [rect_block(&p, BlockKind::Covered, &[4, 0, 10, 6]), rect_block(&p, BlockKind::Covered, &[2, 8])];
    let mut fine = vec![
        rect_block(&p, BlockKind::Covered, &[1, 3, 5]),
        rect_block(&p, BlockKind::Sorted, &[7]),
        rect_block(&p, BlockKind::Sorted, &[9]),
    ];
    fine.extend(clusters.iter().cloned());
    let mut coarse = vec![rect_block(&p, BlockKind::Sorted, &[1, 3, 5, 7, 9])];
    coarse.extend(clusters);
    (RangePartition { n: p.len(), blocks: fine }, RangePartition { n: p.len(), blocks: coarse })
}

/// Twenty-two points: ten on an upper arc, six on a lower arc, six in between.
pub fn arcs_points() -> Vec<Point2> {
    let mut v: Vec<Point2> = (-5..=4).map(|t| Point2::new(2 * t, 100 - t * t)).collect();
    v.extend((-3..=2).map(|t| Point2::new(2 * t, t * t - 100)));
    v.extend(pts(&[(-4, 0), (-2, 5), (0, -3), (2, 4), (4, 1), (5, -2)]));
    v
}

/// `(fine, coarse)` certificates for [`arcs_points`]. Both use the arcs as
/// sorted blocks; the coarse one also treats the six inner points as one
/// sorted block, the fine one covers them with two triangles.
pub fn arcs_partitions() -> (RangePartition, RangePartition) {
    let arcs = [
        tri_block(BlockKind::Sorted, 0..10, [(-10, 75), (8, 84), (-1, 120)]),
        tri_block(BlockKind::Sorted, 10..16, [(-6, -91), (4, -96), (-1, -106)]),
    ];
    let mut fine = arcs.to_vec();
    fine.push(tri_block(BlockKind::Covered, 16..19, [(-6, -8), (1, -8), (-3, 12)]));
    fine.push(tri_block(BlockKind::Covered, 19..22, [(0, -4), (6, -4), (2, 9)]));
    let mut coarse = arcs.to_vec();
    coarse.push(tri_block(BlockKind::Sorted, 16..22, [(-20, -10), (20, -10), (0, 30)]));
    (RangePartition { n: 22, blocks: fine }, RangePartition { n: 22, blocks: coarse })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{verify_respectful_hull, verify_respectful_maxima, HullMode};

    #[test]
    fn worked_certificates_hold() {
        let (fine, coarse) = staircase_partitions();
        assert_eq!(verify_respectful_maxima(&staircase_points(), &fine), Ok(()));
        assert_eq!(verify_respectful_maxima(&staircase_points(), &coarse), Ok(()));
        let (fine, coarse) = arcs_partitions();
        assert_eq!(verify_respectful_hull(&arcs_points(), &fine, HullMode::Full), Ok(()));
        assert_eq!(verify_respectful_hull(&arcs_points(), &coarse, HullMode::Full), Ok(()));
    }
}
