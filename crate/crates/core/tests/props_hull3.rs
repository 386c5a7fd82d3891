use entgeo::geometry::{Box3, Point3};
use entgeo::hull3::*;
use entgeo::instances::{ball, paraboloid, planted_dome};
use entgeo::oracles::{hull3_incremental, upper_hull_planes_brute, upper_planes};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cube(n: usize, side: i64, seed: u64) -> Vec<Point3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Point3::new(rng.gen_range(0..side), rng.gen_range(0..side), rng.gen_range(0..side))).collect()
}

fn balanced(split: &OctantSplit, n: usize) -> bool {
    let (lo, hi) = octant_bounds(n);
    split.parts.iter().all(|p| (lo..=hi).contains(&p.len())) && split.parts.iter().map(Vec::len).sum::<usize>() == n
}

#[test]
fn cube_split_bounds() {
    let pts = cube(1600, 1 << 20, 1);
    let s = eight_partition(&pts, 1).unwrap();
    assert!(s.parts.iter().all(|p| (100..=300).contains(&p.len())));
    assert_eq!(s, eight_partition(&pts, 1).unwrap());
}

#[test]
fn sixteen_points_split_one_to_three() {
    for seed in 0..20 {
        let pts = cube(16, 1 << 30, seed);
        let s = eight_partition(&pts, seed).unwrap();
        assert!(s.parts.iter().all(|p| (1..=3).contains(&p.len())), "seed {seed}");
    }
    assert!(eight_partition(&cube(15, 100, 0), 0).is_err());
}

#[test]
fn sampled_split_retries_stay_low() {
    let pts = cube(100_000, 1 << 30, 5);
    let mut retries = 0;
    for seed in 0..100 {
        let s = eight_partition(&pts, seed).unwrap();
        assert!(balanced(&s, pts.len()));
        assert!((MIN_SAMPLE / 2..=3 * MIN_SAMPLE / 2).contains(&s.sample_size));
        retries += s.retries;
    }
    assert!((retries as f64 / 100.0) < 2.0, "mean retries {}", retries as f64 / 100.0);
}

#[test]
fn sixty_four_cells() {
    let n = 10_000;
    let pts = ball(n, 1 << 20, 3);
    let t = recursive_partition(&pts, 64, 3).unwrap();
    assert_eq!(t.r, 64);
    assert_eq!(t.subsets.iter().map(Vec::len).sum::<usize>(), n);
    for (s, c) in t.subsets.iter().zip(&t.cells) {
        assert!((n / (4 * 64)..=4 * n / 64).contains(&s.len()));
        assert!(c.face_count() <= 6);
        assert!(s.iter().all(|&i| c.contains(pts[i])));
    }
    let one = recursive_partition(&pts, 8, 4).unwrap();
    assert_eq!(one.subsets.len(), 8);
}

#[test]
fn planes_cross_few_cells() {
    let pts = ball(4000, 1 << 20, 9);
    let t = recursive_partition(&pts, 64, 9).unwrap();
    let bbox = Box3::of(&pts).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut total = 0;
    for _ in 0..100 {
        let (a, b, c) = (pts[rng.gen_range(0..pts.len())], pts[rng.gen_range(0..pts.len())], pts[rng.gen_range(0..pts.len())]);
        let Some(pl) = entgeo::geometry::Plane3::through(a, b, c) else { continue };
        total += t
            .cells
            .iter()
            .filter(|cell| {
                let v = cell.clipped_vertices(&bbox);
                v.iter().any(|p| pl.eval_f64(*p) >= 0.0) && v.iter().any(|p| pl.eval_f64(*p) <= 0.0)
            })
            .count();
    }
    assert!((total as f64 / 100.0) < 64.0f64.powf(7f64.log(8.0)) * 1.2);
}

#[test]
fn point_test_matches_hull_planes() {
    for seed in 0..30 {
        let q = ball(60, 50, seed);
        let planes = upper_planes(&q, &hull3_incremental(&q).unwrap());
        let shadow = entgeo::hull2::convex_hull(&q.iter().map(|p| p.xy()).collect::<Vec<_>>()).vertices;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..80 {
            let p = Point3::new(rng.gen_range(-55..=55), rng.gen_range(-55..=55), rng.gen_range(-55..=55));
            let inside = (0..shadow.len()).all(|i| {
                entgeo::geometry::orient2(shadow[i], shadow[(i + 1) % shadow.len()], p.xy()) == entgeo::geometry::Sign::Positive
            });
            let got = point_below_upper_hull(p, &q, seed);
            if inside {
                assert_eq!(got, planes.iter().all(|pl| pl.eval(p) < 0), "seed {seed} p {p:?}");
            } else if got {
                // on the shadow boundary, strictly below the hull edge there
                assert!(planes.iter().all(|pl| pl.eval(p) < 0));
            }
        }
    }
}

fn family(k: u64, n: usize, seed: u64) -> Vec<Point3> {
    match k % 4 {
        0 => ball(n, 1 << 16, seed),
        1 => paraboloid(n, 40, seed),
        // small lattice: many coplanar and collinear points
        2 => cube(n, 6, seed),
        _ => {
            let p = planted_dome(n / 4, &[n / 2, n - n / 4 - n / 2], seed).unwrap();
            p.points
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn hull_matches_oracle(k in 0u64..4, n in 4usize..400, seed in any::<u64>()) {
        let pts = family(k, n, seed);
        let h = hull3d(&pts, seed);
        let want = match hull3_incremental(&pts) {
            Some(f) => upper_planes(&pts, &f),
            None => Default::default(),
        };
        prop_assert_eq!(h.upper_planes(&pts), want);
        prop_assert_eq!(h.pruning_violations(&pts), 0);
    }
}

#[test]
fn tiny_inputs_match_brute_force() {
    for seed in 0..200 {
        let pts = cube(4 + (seed as usize % 9), 5, seed);
        let h = hull3d(&pts, seed);
        assert_eq!(h.upper_planes(&pts), upper_hull_planes_brute(&pts), "seed {seed}");
    }
}

#[test]
fn ball_of_two_thousand() {
    let pts = ball(2000, 1 << 20, 11);
    let h = hull3d_with(&pts, Hull3Options { seed: 11, full: true, prune: true });
    assert_eq!(h.upper_planes(&pts), upper_planes(&pts, &hull3_incremental(&pts).unwrap()));
    assert!(entgeo::oracles::is_closed_surface(h.full.as_ref().unwrap()));
    assert_eq!(h.pruning_violations(&pts), 0);
    assert!(!h.pruned.is_empty());
}

#[test]
fn dome_work_tracks_entropy() {
    for (seed, clusters) in [(1u64, vec![3000, 3000]), (2, vec![1000; 6]), (3, vec![200; 30])] {
        let inst = planted_dome(400, &clusters, seed).unwrap();
        let n = inst.points.len() as f64;
        let h = hull3d(&inst.points, seed);
        assert_eq!(h.pruning_violations(&inst.points), 0);
        let w = h.ledger.work() as f64;
        assert!(w <= 40.0 * n * (1.0 + inst.entropy_bound), "seed {seed}: work {w} vs n(1+H) {}", n * (1.0 + inst.entropy_bound));
    }
}
