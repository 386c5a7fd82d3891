use entgeo::entropy::partition_entropy;
use entgeo::envelope::{chain_envelope, lower_envelope, merge_envelopes, MonotoneChain};
use entgeo::geometry::Point2;
use entgeo::instances::{gen_chains, gen_scene, SizeProfile};
use entgeo::oracles::{envelope_probe, ray_probe};
use entgeo::runstack::{run_merge_sort, stack_invariant_holds};
use entgeo::visibility::{visibility_polygon, visible_window, VisVertex};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn raw(chains: &[MonotoneChain]) -> Vec<Vec<Point2>> {
    chains.iter().map(|c| c.vertices().to_vec()).collect()
}

/// Every breakpoint and the half-integer abscissas on either side of it.
fn probes(chains: &[MonotoneChain]) -> Vec<i128> {
    let mut xs: Vec<i128> = chains.iter().flat_map(|c| c.vertices().iter().map(|p| 2 * p.x as i128)).collect();
    xs.sort_unstable();
    xs.dedup();
    let mut out: Vec<i128> = xs.iter().flat_map(|&x| [x - 1, x, x + 1]).collect();
    out.dedup();
    out
}

fn profile(k: u8) -> SizeProfile {
    [SizeProfile::Equal, SizeProfile::Geometric, SizeProfile::Random][k as usize % 3]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn envelope_matches_probe_oracle(rho in 1usize..25, extra in 0usize..300, k in 0u8..3, seed in any::<u64>()) {
        let (chains, sizes) = gen_chains(rho, rho + extra, profile(k), seed).unwrap();
        let out = lower_envelope(&chains).unwrap();
        let r = raw(&chains);
        for x in probes(&chains) {
            prop_assert_eq!(out.envelope.value_at_half(x), envelope_probe(&r, x), "x2 = {}", x);
        }
        prop_assert!(out.stack.weights_trace.iter().all(|w| stack_invariant_holds(w)));
        prop_assert_eq!(out.stack.total_weight as usize, rho + extra);
        let n = (rho + extra) as f64;
        prop_assert!(out.stack.max_height as f64 <= 2.0 * n.log2() + 4.0);
        let h = partition_entropy(&sizes, rho + extra).unwrap();
        prop_assert!(out.ledger.work() as f64 <= 12.0 * n * (1.0 + h));
    }

    #[test]
    fn envelope_ignores_chain_order(rho in 2usize..12, seed in any::<u64>()) {
        let (mut chains, _) = gen_chains(rho, rho * 8, SizeProfile::Random, seed).unwrap();
        let a = lower_envelope(&chains).unwrap().envelope;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        chains.shuffle(&mut rng);
        let b = lower_envelope(&chains).unwrap().envelope;
        for x in probes(&chains) {
            prop_assert_eq!(a.value_at_half(x), b.value_at_half(x));
        }
    }

    #[test]
    fn merge_is_idempotent(seed in any::<u64>()) {
        let (chains, _) = gen_chains(4, 40, SizeProfile::Equal, seed).unwrap();
        let e = lower_envelope(&chains).unwrap().envelope;
        let again = merge_envelopes(&e, &e);
        // an envelope touches itself everywhere, which is a crossing
        prop_assert!(again.is_err());
        let part = lower_envelope(&chains[..2]).unwrap().envelope;
        let rest = lower_envelope(&chains[2..]).unwrap().envelope;
        let joined = merge_envelopes(&part, &rest).unwrap();
        for x in probes(&chains) {
            prop_assert_eq!(joined.value_at_half(x), e.value_at_half(x));
        }
    }

    #[test]
    fn run_sort_sorts(v in prop::collection::vec(-50i32..50, 0..300)) {
        let (s, _) = run_merge_sort(&v);
        let mut w = v.clone();
        w.sort();
        prop_assert_eq!(s, w);
    }
}

#[test]
fn two_fifty_segment_chains() {
    for seed in 0..20 {
        let (chains, _) = gen_chains(2, 100, SizeProfile::Equal, seed).unwrap();
        let e = merge_envelopes(&chain_envelope(&chains[0], 0), &chain_envelope(&chains[1], 1)).unwrap();
        let r = raw(&chains);
        for x in probes(&chains) {
            assert_eq!(e.value_at_half(x), envelope_probe(&r, x));
        }
    }
}

#[test]
fn thousand_segments_twenty_chains() {
    for seed in 0..5 {
        let (chains, sizes) = gen_chains(20, 1000, SizeProfile::Random, seed).unwrap();
        let out = lower_envelope(&chains).unwrap();
        let r = raw(&chains);
        for x in probes(&chains) {
            assert_eq!(out.envelope.value_at_half(x), envelope_probe(&r, x));
        }
        let h = partition_entropy(&sizes, 1000).unwrap();
        assert!(out.ledger.work() as f64 <= 12.0 * 1000.0 * (1.0 + h));
    }
}

/// Ray from q along integer direction d against the polygon, in floating
/// point: smallest positive hit parameter.
fn polygon_ray(verts: &[[f64; 2]], q: Point2, d: (i64, i64)) -> f64 {
    let (qx, qy, dx, dy) = (q.x as f64, q.y as f64, d.0 as f64, d.1 as f64);
    let mut best = f64::INFINITY;
    for i in 0..verts.len() {
        let (a, b) = (verts[i], verts[(i + 1) % verts.len()]);
        let (ex, ey) = (b[0] - a[0], b[1] - a[1]);
        let den = dx * ey - dy * ex;
        if den.abs() < 1e-12 * (dx.abs() + dy.abs()) * (ex.abs() + ey.abs()) {
            continue;
        }
        let (ax, ay) = (a[0] - qx, a[1] - qy);
        let t = (ax * ey - ay * ex) / den;
        let s = (ax * dy - ay * dx) / den;
        if t > 0.0 && (-1e-9..=1.0 + 1e-9).contains(&s) {
            best = best.min(t);
        }
    }
    best
}

#[test]
fn visibility_matches_ray_casting() {
    let mut shadows = 0;
    for seed in 0..200u64 {
        let holes = (seed % 11) as usize;
        let scene = gen_scene(holes, 3 + (seed % 6) as usize, 8 + (seed % 9) as usize, seed).unwrap();
        let out = visibility_polygon(&scene.boundary, &scene.holes, scene.q).unwrap();
        let verts: Vec<[f64; 2]> = out.polygon.vertices.iter().map(|v| v.coords()).collect();
        let chains: Vec<Vec<Point2>> =
            std::iter::once(&scene.boundary).chain(&scene.holes).map(|c| c.vertices().to_vec()).collect();
        let q = scene.q;
        let mut dirs: Vec<(i64, i64)> = chains.iter().flatten().map(|p| (p.x - q.x, p.y - q.y)).collect();
        let k = dirs.len();
        for i in 0..k {
            let (a, b) = (dirs[i], dirs[(i + 1) % k]);
            dirs.push((a.0 + b.0, a.1 + b.1));
        }
        for d in dirs {
            if d == (0, 0) {
                continue;
            }
            let want = ray_probe(&chains, q, d).unwrap().to_f64();
            let got = polygon_ray(&verts, q, d);
            assert!((want - got).abs() <= 1e-7 * want.max(1.0), "seed {seed}: dir {d:?}: {want} vs {got}");
        }
        shadows += out.polygon.vertices.iter().filter(|v| matches!(v, VisVertex::Shadow(_))).count();
        for v in &out.polygon.vertices {
            if let VisVertex::Chain(p) = v {
                assert!(chains.iter().flatten().any(|c| c == p));
            }
        }
        let sizes = scene.chain_sizes();
        let n: usize = sizes.iter().sum();
        let h = partition_entropy(&sizes, n).unwrap();
        assert!(out.ledger.work() as f64 <= 20.0 * n as f64 * (1.0 + h));
    }
    assert!(shadows > 500, "only {shadows} shadow vertices");
}

#[test]
fn visibility_ignores_hole_order() {
    for seed in 0..30u64 {
        let mut scene = gen_scene(8, 5, 10, seed).unwrap();
        let a = visibility_polygon(&scene.boundary, &scene.holes, scene.q).unwrap().polygon;
        scene.holes.reverse();
        let b = visibility_polygon(&scene.boundary, &scene.holes, scene.q).unwrap().polygon;
        assert_eq!(a.vertices, b.vertices);
    }
}

#[test]
fn windows_are_angularly_monotone() {
    use entgeo::geometry::{orient2, Sign};
    for seed in 0..50u64 {
        let scene = gen_scene(6, 7, 10, seed).unwrap();
        for h in &scene.holes {
            let w = visible_window(h, scene.q).unwrap();
            assert!(w.windows(2).all(|p| orient2(scene.q, p[0], p[1]) == Sign::Positive));
            // tangent ends: every hole vertex lies on or beyond the window's wedge
            let (first, last) = (w[0], *w.last().unwrap());
            for &v in h.vertices() {
                assert_ne!(orient2(scene.q, first, v), Sign::Negative);
                assert_ne!(orient2(scene.q, last, v), Sign::Positive);
            }
        }
    }
}
