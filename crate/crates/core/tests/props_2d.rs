use entgeo::entropy::{partition_entropy, run_decompose};
use entgeo::geometry::{orient2, Point2, Sign};
use entgeo::hull2::{bridge, convex_hull, convex_hull_with, upper_hull, upper_hull_traced, HullOptions};
use entgeo::maxima::{maxima_set, maxima_set_with_seed, sortedness_check, Axis};
use entgeo::oracles::{bridge_brute, gift_wrap, hull2_monotone, maxima_brute, monotone_chains, runs_brute};
use proptest::prelude::*;

fn points(max_n: usize, span: i64) -> impl Strategy<Value = Vec<Point2>> {
    prop::collection::vec((-span..=span, -span..=span), 1..max_n)
        .prop_map(|v| v.into_iter().map(|(x, y)| Point2::new(x, y)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn maxima_match_oracle(s in points(120, 30), seed in any::<u64>()) {
        let r = maxima_set_with_seed(&s, seed);
        prop_assert_eq!(&r.maxima, &maxima_brute(&s));
        let n = s.len().max(2);
        prop_assert!(r.ledger.max_depth <= (n as f64).log2().ceil() as usize + 1);
    }

    #[test]
    fn maxima_ignore_input_order(mut s in points(80, 1000), seed in any::<u64>()) {
        let a = maxima_set(&s).maxima;
        let k = (seed as usize) % s.len();
        s.rotate_left(k);
        s.reverse();
        prop_assert_eq!(a, maxima_set_with_seed(&s, seed).maxima);
    }

    #[test]
    fn hull_matches_both_oracles(s in points(150, 40), seed in any::<u64>()) {
        let h = convex_hull_with(&s, HullOptions { seed, keep_collinear: false });
        prop_assert_eq!(&h.vertices, &hull2_monotone(&s));
        prop_assert_eq!(&h.vertices, &gift_wrap(&s));
    }

    #[test]
    fn upper_hull_pruning_is_sound(s in points(150, 25), seed in any::<u64>()) {
        let (h, ledger, pruned) = upper_hull_traced(&s, seed);
        prop_assert_eq!(&h, &monotone_chains(&s).1);
        for p in pruned {
            prop_assert!(!h.contains(&p));
            let i = h.partition_point(|v| *v < p);
            prop_assert!(i > 0 && i < h.len());
            prop_assert_ne!(orient2(h[i - 1], h[i], p), Sign::Positive);
        }
        let n = s.len().max(2);
        prop_assert!(ledger.max_depth <= (n as f64).log2().ceil() as usize + 1);
    }

    #[test]
    fn bridge_matches_brute_force(s in points(60, 20), seed in any::<u64>()) {
        let mut xs: Vec<i64> = s.iter().map(|p| p.x).collect();
        xs.sort();
        xs.dedup();
        prop_assume!(xs.len() >= 2);
        let m = xs[(xs.len() - 1) / 2];
        let got = bridge(&s, m, seed).unwrap();
        let want = bridge_brute(&s, Point2 { x: m, y: i64::MAX }).unwrap();
        prop_assert_eq!(got, want);
        prop_assert!(s.iter().all(|&p| orient2(got.0, got.1, p) != Sign::Positive));
    }

    #[test]
    fn keep_collinear_is_a_superset(s in points(60, 6)) {
        let strict = convex_hull(&s).vertices;
        let all = convex_hull_with(&s, HullOptions { keep_collinear: true, ..Default::default() }).vertices;
        prop_assert!(strict.iter().all(|v| all.contains(v)));
        if strict.len() >= 3 {
            for w in 0..all.len() {
                let (a, b, c) = (all[w], all[(w + 1) % all.len()], all[(w + 2) % all.len()]);
                prop_assert_ne!(orient2(a, b, c), Sign::Negative);
            }
        }
    }

    #[test]
    fn runs_match_brute_force(v in prop::collection::vec(0i32..6, 0..40)) {
        prop_assert_eq!(run_decompose(&v), runs_brute(&v));
    }

    #[test]
    fn sortedness_matches_full_scan(s in points(12, 4)) {
        let xs = s.windows(2).all(|w| w[0] < w[1]);
        let xd = s.windows(2).all(|w| w[0] > w[1]);
        let ys = s.windows(2).all(|w| w[0].cmp_yx(&w[1]).is_lt());
        let yd = s.windows(2).all(|w| w[0].cmp_yx(&w[1]).is_gt());
        let got = sortedness_check(&s);
        prop_assert_eq!(got.is_some(), xs || xd || ys || yd);
        if let Some(c) = got {
            prop_assert_eq!(c.axis == Axis::X, xs || xd);
        }
    }
}

fn permutations(v: &[Point2]) -> Vec<Vec<Point2>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

#[test]
fn six_point_sets_in_every_order() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let base: Vec<Point2> = (0..6).map(|_| Point2::new(rng.gen_range(0..8), rng.gen_range(0..8))).collect();
        let (m, h) = (maxima_brute(&base), gift_wrap(&base));
        for p in permutations(&base) {
            assert_eq!(maxima_set(&p).maxima, m);
            assert_eq!(convex_hull(&p).vertices, h);
        }
    }
}

#[test]
fn run_entropy_examples() {
    let h = |v: &[i32]| {
        let r = run_decompose(v);
        partition_entropy(&r.iter().map(|r| r.len).collect::<Vec<_>>(), v.len()).unwrap()
    };
    assert_eq!(h(&[1, 2, 3, 4, 5]), 0.0);
    assert!((h(&[1, 3, 2, 4]) - 1.0).abs() < 1e-12);
}

#[test]
fn sorted_circle_keeps_every_point() {
    let t = 200i64;
    let mut s: Vec<Point2> = (-t..=t).map(|i| Point2::new(2 * i, t * t - i * i)).collect();
    s.extend((-t + 1..t).map(|i| Point2::new(2 * i, i * i - t * t)));
    s.sort();
    let h = convex_hull(&s);
    assert_eq!(h.vertices.len(), s.len());
    assert!(h.ledger.work() <= 40 * s.len() as u64);
    let (u, l) = upper_hull(&s, 0);
    assert_eq!(u.len(), 2 * t as usize + 1);
    assert_eq!(l.max_depth, 0);
}
