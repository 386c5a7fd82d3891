//! Benchmark cases, suites, CSV records and the `work / (n (1 + H))` fit.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::entropy::{entropy_upper_bound, partition_entropy, BlockKind, Problem};
use crate::envelope::{lower_envelope, MonotoneChain};
use crate::geometry::{Point2, Point3};
use crate::hull2::{convex_hull_with, HullOptions};
use crate::hull3::hull3d;
use crate::instances::{
    ball, circle_sorted, equal_blocks, gen_chains, gen_hull_planted, gen_maxima_planted, gen_scene, planted_dome,
    BlockSpec, Scene, SizeProfile,
};
use crate::ledger::WorkLedger;
use crate::maxima::maxima_set_with_seed;
use crate::runstack::run_merge_sort;
use crate::visibility::visibility_polygon;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Maxima2d,
    Hull2d,
    Envelope,
    Visibility,
    Hull3d,
    Sort,
}

impl Algo {
    pub const ALL: [Algo; 6] = [Algo::Maxima2d, Algo::Hull2d, Algo::Envelope, Algo::Visibility, Algo::Hull3d, Algo::Sort];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Maxima2d => "maxima2d",
            Algo::Hull2d => "hull2d",
            Algo::Envelope => "envelope",
            Algo::Visibility => "visibility",
            Algo::Hull3d => "hull3d",
            Algo::Sort => "sort",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = Error;
    fn from_str(s: &str) -> Result<Algo> {
        Algo::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| Error::malformed(format!("unknown algorithm {s:?}")))
    }
}

/// Input of one algorithm call.
#[derive(Clone, Debug, PartialEq)]
pub enum Workload {
    Points2(Vec<Point2>),
    Points3(Vec<Point3>),
    Chains(Vec<MonotoneChain>),
    Scene(Scene),
    Sequence(Vec<i64>),
}

impl Workload {
    /// Points, segments, scene vertices or sequence length.
    pub fn size(&self) -> usize {
        match self {
            Workload::Points2(p) => p.len(),
            Workload::Points3(p) => p.len(),
            Workload::Chains(c) => c.iter().map(MonotoneChain::segment_count).sum(),
            Workload::Scene(s) => s.chain_sizes().iter().sum(),
            Workload::Sequence(s) => s.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Case {
    pub id: String,
    pub algo: Algo,
    pub workload: Workload,
    pub entropy_bound: f64,
    pub seed: u64,
}

/// What a run produced, as JSON, plus its ledger.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub result: Value,
    pub ledger: WorkLedger,
}

fn mismatch(algo: Algo) -> Error {
    Error::pre(format!("{algo} does not accept this kind of input"))
}

pub fn run(algo: Algo, workload: &Workload, seed: u64, keep_collinear: bool) -> Result<Outcome> {
    Ok(match (algo, workload) {
        (Algo::Maxima2d, Workload::Points2(p)) => {
            let r = maxima_set_with_seed(p, seed);
            Outcome { result: json!(r.maxima), ledger: r.ledger }
        }
        (Algo::Hull2d, Workload::Points2(p)) => {
            let r = convex_hull_with(p, HullOptions { seed, keep_collinear });
            Outcome { result: json!({ "vertices": r.vertices, "degenerate": r.degenerate }), ledger: r.ledger }
        }
        (Algo::Envelope, Workload::Chains(c)) => {
            let r = lower_envelope(c)?;
            Outcome { result: json!({ "envelope": r.envelope, "stack": r.stack }), ledger: r.ledger }
        }
        (Algo::Visibility, Workload::Scene(s)) => {
            let r = visibility_polygon(&s.boundary, &s.holes, s.q)?;
            Outcome { result: json!({ "polygon": r.polygon, "stack": r.stack }), ledger: r.ledger }
        }
        (Algo::Hull3d, Workload::Points3(p)) => {
            let r = hull3d(p, seed);
            let result = json!({ "upper": r.upper, "pruned": r.pruned.len(), "rounds": r.rounds, "flat": r.flat });
            Outcome { result, ledger: r.ledger }
        }
        (Algo::Sort, Workload::Sequence(s)) => {
            let (sorted, ledger) = run_merge_sort(s);
            Outcome { result: json!(sorted), ledger }
        }
        _ => return Err(mismatch(algo)),
    })
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub instance: String,
    pub algorithm: Algo,
    pub n: usize,
    pub entropy_bound: f64,
    pub comparisons: u64,
    pub orientation_tests: u64,
    pub work: u64,
    /// Work inside substituted primitives, kept out of the fit.
    pub auxiliary: u64,
    pub max_depth: usize,
    /// Points handled per recursion level, `;`-separated.
    pub levels: String,
    /// Empty unless timing was requested, so output stays byte-stable.
    pub wall_ms: Option<f64>,
    pub seed: u64,
}

impl BenchRecord {
    pub fn ratio(&self) -> f64 {
        self.work as f64 / (self.n.max(1) as f64 * (1.0 + self.entropy_bound))
    }
}

pub fn run_case(case: &Case, keep_collinear: bool, timing: bool) -> Result<BenchRecord> {
    Ok(run_case_with_result(case, keep_collinear, timing)?.0)
}

pub fn run_case_with_result(case: &Case, keep_collinear: bool, timing: bool) -> Result<(BenchRecord, Outcome)> {
    let start = Instant::now();
    let out = run(case.algo, &case.workload, case.seed, keep_collinear)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let l = &out.ledger;
    let record = BenchRecord {
        instance: case.id.clone(),
        algorithm: case.algo,
        n: case.workload.size(),
        entropy_bound: case.entropy_bound,
        comparisons: l.comparisons,
        orientation_tests: l.orientation_tests,
        work: l.work(),
        auxiliary: l.auxiliary,
        max_depth: l.max_depth,
        levels: l.level_sizes.iter().map(u64::to_string).collect::<Vec<_>>().join(";"),
        wall_ms: timing.then_some(ms),
        seed: case.seed,
    };
    Ok((record, out))
}

/// Records sorted by instance id.
pub fn run_cases(cases: &[Case], keep_collinear: bool, timing: bool) -> Result<Vec<BenchRecord>> {
    let mut out = cases.iter().map(|c| run_case(c, keep_collinear, timing)).collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.instance.cmp(&b.instance));
    Ok(out)
}

pub fn to_csv(records: &[BenchRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Spread of `work / (n (1 + H))` for one algorithm.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fit {
    pub algorithm: Algo,
    pub cases: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

impl Fit {
    pub fn spread(&self) -> f64 {
        self.max_ratio / self.min_ratio
    }
}

pub fn fit(records: &[BenchRecord]) -> Vec<Fit> {
    let mut out: Vec<Fit> = Vec::new();
    for r in records {
        let q = r.ratio();
        match out.iter_mut().find(|f| f.algorithm == r.algorithm) {
            Some(f) => {
                f.cases += 1;
                f.min_ratio = f.min_ratio.min(q);
                f.max_ratio = f.max_ratio.max(q);
            }
            None => out.push(Fit { algorithm: r.algorithm, cases: 1, min_ratio: q, max_ratio: q }),
        }
    }
    out.sort_by_key(|f| f.algorithm);
    out
}

/// Named families of benchmark cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Fully sorted maxima and hull inputs, `n = 2^10 .. 2^16`.
    Sorted,
    /// Eight sorted blocks (`H = 3`) with doubling `n`.
    FixedEntropy,
    /// Uniform random inputs for every algorithm.
    Uniform,
    /// Planted grid: `n` in `2^12, 2^14, 2^16` against `H` near `0`, `log n / 2`, `log n - 2`.
    Planted,
    /// Lower envelopes over a range of chain counts.
    Chains,
    /// Visibility with growing numbers of holes.
    Scenes,
    /// Hull in space over a dome with planted clusters.
    Dome,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Sorted, Suite::FixedEntropy, Suite::Uniform, Suite::Planted, Suite::Chains, Suite::Scenes, Suite::Dome];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Sorted => "sorted",
            Suite::FixedEntropy => "fixed-entropy",
            Suite::Uniform => "uniform",
            Suite::Planted => "planted",
            Suite::Chains => "chains",
            Suite::Scenes => "scenes",
            Suite::Dome => "dome",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| Error::malformed(format!("unknown suite {s:?}")))
    }
}

fn points_case(id: String, algo: Algo, points: Vec<Point2>, h: f64, seed: u64) -> Case {
    Case { id, algo, workload: Workload::Points2(points), entropy_bound: h, seed }
}

/// Sorted-block instances for the maxima and hull algorithms.
fn block_cases(tag: &str, n: usize, blocks: &[BlockSpec], seed: u64) -> Result<Vec<Case>> {
    let m = gen_maxima_planted(blocks, seed, true)?;
    let h = gen_hull_planted(blocks, seed, true)?;
    Ok(vec![
        points_case(format!("{tag}/maxima2d/n={n:07}"), Algo::Maxima2d, m.points, m.entropy_bound, seed),
        points_case(format!("{tag}/hull2d/n={n:07}"), Algo::Hull2d, h.points, h.entropy_bound, seed),
    ])
}

/// Cases for the criterion-4 grid at one `n`: one block, `sqrt n` blocks, blocks of four.
pub fn planted_grid(n: usize, seed: u64) -> Result<Vec<Case>> {
    let root = (n as f64).sqrt().round() as usize;
    let mut out = Vec::new();
    for (label, k) in [("h0", 1), ("hhalf", root), ("hfull", n / 4)] {
        out.extend(block_cases(&format!("planted-{label}"), n, &equal_blocks(n, k, BlockKind::Sorted), seed)?);
    }
    Ok(out)
}

pub fn suite_cases(suite: Suite, seed: u64) -> Result<Vec<Case>> {
    let mut out = Vec::new();
    let doubling = (10..=16).map(|k| 1usize << k);
    match suite {
        Suite::Sorted => {
            for n in doubling {
                let m = gen_maxima_planted(&[BlockSpec::sorted(n)], seed, false)?;
                out.push(points_case(format!("sorted/maxima2d/n={n:07}"), Algo::Maxima2d, m.points, 0.0, seed));
                let c = circle_sorted(n, seed)?;
                out.push(points_case(format!("sorted/hull2d/n={n:07}"), Algo::Hull2d, c.points, 0.0, seed));
            }
        }
        Suite::FixedEntropy => {
            for n in doubling {
                out.extend(block_cases("fixed-entropy", n, &equal_blocks(n, 8, BlockKind::Sorted), seed)?);
            }
        }
        Suite::Uniform => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for n in doubling {
                let pts: Vec<Point2> =
                    (0..n).map(|_| Point2::new(rng.gen_range(0..1 << 30), rng.gen_range(0..1 << 30))).collect();
                for (algo, problem) in [(Algo::Maxima2d, Problem::Maxima), (Algo::Hull2d, Problem::Hull)] {
                    let h = entropy_upper_bound(&pts, None, problem)?;
                    out.push(points_case(format!("uniform/{algo}/n={n:07}"), algo, pts.clone(), h, seed));
                }
                let seq: Vec<i64> = (0..n).map(|_| rng.gen_range(0..1 << 30)).collect();
                let h = crate::entropy::run_entropy(&seq);
                out.push(Case { id: format!("uniform/sort/n={n:07}"), algo: Algo::Sort, workload: Workload::Sequence(seq), entropy_bound: h, seed });
            }
            for k in 10..=13 {
                let n = 1usize << k;
                let pts = ball(n, 1 << 20, seed);
                out.push(Case {
                    id: format!("uniform/hull3d/n={n:07}"),
                    algo: Algo::Hull3d,
                    workload: Workload::Points3(pts),
                    entropy_bound: (n as f64).log2(),
                    seed,
                });
            }
        }
        Suite::Planted => {
            for k in [12, 14, 16] {
                out.extend(planted_grid(1 << k, seed)?);
            }
        }
        Suite::Chains => {
            let n = 1 << 14;
            for rho in [2, 4, 16, 64, 256, 1024] {
                for profile in [SizeProfile::Equal, SizeProfile::Geometric] {
                    let (chains, sizes) = gen_chains(rho, n, profile, seed)?;
                    out.push(Case {
                        id: format!("chains/envelope/{profile:?}/rho={rho:05}").to_lowercase(),
                        algo: Algo::Envelope,
                        workload: Workload::Chains(chains),
                        entropy_bound: partition_entropy(&sizes, n)?,
                        seed,
                    });
                }
            }
        }
        Suite::Scenes => {
            for holes in [0, 4, 16, 64, 256] {
                let scene = gen_scene(holes, 8, 64, seed)?;
                let sizes = scene.chain_sizes();
                let h = partition_entropy(&sizes, sizes.iter().sum())?;
                out.push(Case {
                    id: format!("scenes/visibility/holes={holes:04}"),
                    algo: Algo::Visibility,
                    workload: Workload::Scene(scene),
                    entropy_bound: h,
                    seed,
                });
            }
        }
        Suite::Dome => {
            for (label, clusters) in [("two", vec![6000; 2]), ("eight", vec![1500; 8]), ("many", vec![100; 120])] {
                let inst = planted_dome(400, &clusters, seed)?;
                out.push(Case {
                    id: format!("dome/hull3d/{label}"),
                    algo: Algo::Hull3d,
                    workload: Workload::Points3(inst.points),
                    entropy_bound: inst.entropy_bound,
                    seed,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_is_stable_and_sorted() {
        let cases = planted_grid(1 << 8, 3).unwrap();
        let a = to_csv(&run_cases(&cases, false, false).unwrap()).unwrap();
        let b = to_csv(&run_cases(&cases, false, false).unwrap()).unwrap();
        assert_eq!(a, b);
        let ids: Vec<&str> = a.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
        assert!(ids.windows(2).all(|w| w[0] <= w[1]));
        assert!(a.starts_with("instance,algorithm,n,entropy_bound"));
    }

    #[test]
    fn wrong_input_kind_is_a_precondition_error() {
        let w = Workload::Sequence(vec![3, 1, 2]);
        assert!(matches!(run(Algo::Hull2d, &w, 0, false), Err(Error::Precondition(_))));
        assert_eq!(run(Algo::Sort, &w, 0, false).unwrap().result, json!([1, 2, 3]));
    }

    #[test]
    fn names_round_trip() {
        for a in Algo::ALL {
            assert_eq!(a.name().parse::<Algo>().unwrap(), a);
        }
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
    }
}
