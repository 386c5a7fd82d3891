//! `entgeo`: generate instances, run the algorithms, check certificates and
//! benchmark work against entropy bounds.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad input, 3 violated
//! precondition.

mod gen;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use entgeo::bench::{self, Algo, BenchRecord, Case, Suite, Workload};
use entgeo::entropy::{
    greedy_partition, partition_entropy, run_entropy, verify_respectful_hull, verify_respectful_maxima, HullMode,
    Problem, RangePartition,
};
use entgeo::envelope::MonotoneChain;
use entgeo::geometry::Point2;
use entgeo::instances::Scene;
use entgeo::io;
use entgeo::visibility::{ConvexChain, Role};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "entgeo", version, about = "Entropy-sensitive geometric algorithms")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Report collinear points on hull edges as vertices.
    #[arg(long, global = true)]
    keep_collinear: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProblemArg {
    Maxima,
    Hull,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Problem {
        match p {
            ProblemArg::Maxima => Problem::Maxima,
            ProblemArg::Hull => Problem::Hull,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Full,
    Upper,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Write a seeded instance with its metadata (and certificate, if planted).
    Gen(gen::GenArgs),
    /// Run one algorithm on an instance file or instance.meta.
    Run {
        #[arg(long)]
        algo: Algo,
        instance: PathBuf,
        /// Result file; without it the result goes to stdout with the record.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fill in wall time, which makes output differ between runs.
        #[arg(long)]
        timing: bool,
    },
    /// Check a certificate against its points; exits 1 on a violation.
    Verify {
        #[arg(long, value_enum)]
        problem: ProblemArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Full)]
        mode: ModeArg,
        instance: PathBuf,
        /// Defaults to the certificate named in instance.meta.
        certificate: Option<PathBuf>,
    },
    /// Upper bounds on the entropy of a planar point set.
    Entropy {
        #[arg(long, value_enum)]
        problem: ProblemArg,
        instance: PathBuf,
        certificate: Option<PathBuf>,
    },
    /// Run benchmark suites; CSV rows sorted by instance id.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [String::from("sorted")])]
        suite: Vec<String>,
        /// Keep only rows of this algorithm.
        #[arg(long)]
        algo: Option<Algo>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timing: bool,
    },
}

/// Loaded data file plus what instance.meta said about it.
struct Loaded {
    text: String,
    meta: Option<io::InstanceMeta>,
    dir: PathBuf,
    id: String,
}

fn load(path: &Path) -> Result<Loaded> {
    let read = |p: &Path| fs::read_to_string(p).map_err(|e| entgeo::Error::Io(format!("{}: {e}", p.display())));
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    if path.extension().is_some_and(|e| e == "meta") {
        let meta = io::read_meta(&read(path)?)?;
        let text = read(&dir.join(&meta.data))?;
        let id = format!("{}/{}", meta.generator, dir.file_name().map_or_else(String::new, |d| d.to_string_lossy().into()));
        Ok(Loaded { text, meta: Some(meta), dir, id })
    } else {
        let id = path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into());
        Ok(Loaded { text: read(path)?, meta: None, dir, id })
    }
}

fn workload(algo: Algo, text: &str) -> Result<(Workload, f64)> {
    Ok(match algo {
        Algo::Maxima2d | Algo::Hull2d => {
            let pts = io::read_points2(text)?;
            let problem = if algo == Algo::Maxima2d { Problem::Maxima } else { Problem::Hull };
            let h = greedy_partition(&pts, problem).entropy()?;
            (Workload::Points2(pts), h)
        }
        Algo::Hull3d => {
            let pts = io::read_points3(text)?;
            let h = (pts.len().max(1) as f64).log2();
            (Workload::Points3(pts), h)
        }
        Algo::Envelope => {
            let chains = io::read_chains(text)?.into_iter().map(MonotoneChain::new).collect::<entgeo::Result<Vec<_>>>()?;
            let sizes: Vec<usize> = chains.iter().map(MonotoneChain::segment_count).collect();
            let h = partition_entropy(&sizes, sizes.iter().sum())?;
            (Workload::Chains(chains), h)
        }
        Algo::Visibility => {
            let (q, mut chains) = io::read_scene(text)?;
            let holes = chains.split_off(1).into_iter().map(|c| ConvexChain::new(c, Role::Hole)).collect::<entgeo::Result<Vec<_>>>()?;
            let boundary = ConvexChain::new(chains.pop().expect("boundary present"), Role::Boundary)?;
            let scene = Scene { q, boundary, holes };
            let sizes = scene.chain_sizes();
            let h = partition_entropy(&sizes, sizes.iter().sum())?;
            (Workload::Scene(scene), h)
        }
        Algo::Sort => {
            let seq = io::read_sequence(text)?;
            let h = run_entropy(&seq);
            (Workload::Sequence(seq), h)
        }
    })
}

fn csv_rows(records: &[BenchRecord]) -> Result<String> {
    Ok(bench::to_csv(records)?)
}

fn cmd_run(cli: &Cli, algo: Algo, instance: &Path, out: Option<&Path>, timing: bool) -> Result<()> {
    let loaded = load(instance)?;
    let (workload, h) = workload(algo, &loaded.text)?;
    let h = loaded.meta.as_ref().map_or(h, |m| m.entropy_bound);
    let case = Case { id: loaded.id, algo, workload, entropy_bound: h, seed: cli.seed };
    let (record, outcome) = bench::run_case_with_result(&case, cli.keep_collinear, timing)?;
    if let Some(path) = out {
        fs::write(path, serde_json::to_string_pretty(&outcome.result)?).with_context(|| format!("writing {}", path.display()))?;
    }
    match (cli.format, out) {
        (Format::Csv, _) => print!("{}", csv_rows(&[record])?),
        (Format::Json, Some(_)) => println!("{}", serde_json::to_string_pretty(&record)?),
        (Format::Json, None) => {
            println!("{}", serde_json::to_string_pretty(&json!({ "record": record, "result": outcome.result }))?)
        }
    }
    Ok(())
}

fn points_and_certificate(instance: &Path, certificate: Option<&Path>) -> Result<(Vec<Point2>, Option<RangePartition>)> {
    let loaded = load(instance)?;
    let points = io::read_points2(&loaded.text)?;
    let cert_path = match certificate {
        Some(p) => Some(p.to_path_buf()),
        None => loaded.meta.and_then(|m| m.certificate).map(|c| loaded.dir.join(c)),
    };
    let cert = match cert_path {
        Some(p) => Some(io::read_certificate(&fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?)?),
        None => None,
    };
    Ok((points, cert))
}

/// Ok(false) when the certificate is rejected.
fn cmd_verify(cli: &Cli, problem: ProblemArg, mode: ModeArg, instance: &Path, certificate: Option<&Path>) -> Result<bool> {
    let (points, cert) = points_and_certificate(instance, certificate)?;
    let Some(cert) = cert else { bail!(entgeo::Error::Malformed("no certificate given".into())) };
    let verdict = match problem {
        ProblemArg::Maxima => verify_respectful_maxima(&points, &cert),
        ProblemArg::Hull => verify_respectful_hull(
            &points,
            &cert,
            match mode {
                ModeArg::Full => HullMode::Full,
                ModeArg::Upper => HullMode::Upper,
            },
        ),
    };
    let (ok, detail) = match &verdict {
        Ok(()) => (true, String::new()),
        Err(v) => (false, v.to_string()),
    };
    match cli.format {
        Format::Json => println!("{}", json!({ "respectful": ok, "blocks": cert.blocks.len(), "violation": detail })),
        Format::Csv => println!("respectful,blocks,violation\n{ok},{},\"{detail}\"", cert.blocks.len()),
    }
    Ok(ok)
}

fn cmd_entropy(cli: &Cli, problem: ProblemArg, instance: &Path, certificate: Option<&Path>) -> Result<()> {
    let (points, cert) = points_and_certificate(instance, certificate)?;
    let n = points.len();
    let greedy = greedy_partition(&points, problem.into());
    let greedy_h = greedy.entropy()?;
    let cert_h = cert.as_ref().map(|c| entgeo::entropy::entropy_upper_bound(&points, Some(c), problem.into())).transpose()?;
    let bound = cert_h.map_or(greedy_h, |c| c.min(greedy_h));
    match cli.format {
        Format::Json => println!(
            "{}",
            json!({ "n": n, "greedy_blocks": greedy.blocks.len(), "greedy_entropy": greedy_h, "certificate_entropy": cert_h, "entropy_bound": bound })
        ),
        Format::Csv => println!(
            "n,greedy_blocks,greedy_entropy,certificate_entropy,entropy_bound\n{n},{},{greedy_h},{},{bound}",
            greedy.blocks.len(),
            cert_h.map_or(String::new(), |h| h.to_string())
        ),
    }
    Ok(())
}

fn cmd_bench(cli: &Cli, suites: &[String], algo: Option<Algo>, out: Option<&Path>, timing: bool) -> Result<()> {
    let mut cases = Vec::new();
    for s in suites {
        let suite: Suite = s.parse()?;
        cases.extend(bench::suite_cases(suite, cli.seed)?.into_iter().filter(|c| algo.is_none_or(|a| a == c.algo)));
    }
    let records = bench::run_cases(&cases, cli.keep_collinear, timing)?;
    let fit = bench::fit(&records);
    let text = match cli.format {
        Format::Csv => csv_rows(&records)?,
        Format::Json => serde_json::to_string_pretty(&json!({ "records": records, "fit": fit }))? + "\n",
    };
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    if cli.format == Format::Csv {
        for f in &fit {
            eprintln!(
                "{}: {} cases, work/(n(1+H)) in [{:.3}, {:.3}], spread {:.2}",
                f.algorithm,
                f.cases,
                f.min_ratio,
                f.max_ratio,
                f.spread()
            );
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    err.downcast_ref::<entgeo::Error>().map_or(2, |e| e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Gen(args) => gen::run(args, cli.seed).map(|_| true),
        Cmd::Run { algo, instance, out, timing } => cmd_run(&cli, *algo, instance, out.as_deref(), *timing).map(|_| true),
        Cmd::Verify { problem, mode, instance, certificate } => {
            cmd_verify(&cli, *problem, *mode, instance, certificate.as_deref())
        }
        Cmd::Entropy { problem, instance, certificate } => {
            cmd_entropy(&cli, *problem, instance, certificate.as_deref()).map(|_| true)
        }
        Cmd::Bench { suite, algo, out, timing } => cmd_bench(&cli, suite, *algo, out.as_deref(), *timing).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
