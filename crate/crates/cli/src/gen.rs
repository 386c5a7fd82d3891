//! Instance generation for `entgeo gen`.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use entgeo::entropy::{partition_entropy, run_entropy, BlockKind};
use entgeo::instances::{
    ball, circle_sorted, equal_blocks, gen_chains, gen_hull_planted, gen_maxima_planted, gen_scene, paraboloid,
    planted_dome, PlantedInstance, SizeProfile,
};
use entgeo::io;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Kind {
    /// Planted blocks for the maxima problem.
    Maxima,
    /// Planted blocks for the planar hull.
    Hull,
    /// Points on a circle in x order.
    Circle,
    /// Disjoint x-monotone chains.
    Chains,
    /// Convex boundary with convex holes and a query point.
    Scene,
    /// Integers split into sorted runs.
    Sequence,
    Ball,
    Paraboloid,
    /// Paraboloid cap over buried clusters.
    Dome,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Profile {
    Equal,
    Geometric,
    Random,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    /// Directory receiving the data file, certificate and instance.meta.
    #[arg(long)]
    pub out: std::path::PathBuf,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    /// Planted blocks, or sorted runs for `sequence`.
    #[arg(long, default_value_t = 1)]
    pub blocks: usize,
    /// Make every planted block a covered one.
    #[arg(long)]
    pub covered: bool,
    /// Keep blocks contiguous instead of scattering covered points.
    #[arg(long)]
    pub no_shuffle: bool,
    #[arg(long, default_value_t = 8)]
    pub rho: usize,
    #[arg(long, value_enum, default_value_t = Profile::Equal)]
    pub profile: Profile,
    #[arg(long, default_value_t = 8)]
    pub holes: usize,
    #[arg(long, default_value_t = 8)]
    pub hole_vertices: usize,
    #[arg(long, default_value_t = 64)]
    pub boundary_vertices: usize,
    #[arg(long, default_value_t = 1 << 20)]
    pub radius: i64,
    /// Cluster sizes for `dome`, comma-separated; `n` is the cap size.
    #[arg(long, value_delimiter = ',', default_value = "1000,1000")]
    pub clusters: Vec<usize>,
}

struct Written {
    data: String,
    text: String,
    certificate: Option<String>,
    n: usize,
    h: f64,
}

fn planted(inst: PlantedInstance) -> Written {
    Written {
        data: "points.txt".into(),
        text: io::write_points2(&inst.points),
        certificate: Some(io::write_certificate(&inst.certificate)),
        n: inst.points.len(),
        h: inst.entropy_bound,
    }
}

pub fn run(args: &GenArgs, seed: u64) -> Result<()> {
    let kind = if args.covered { BlockKind::Covered } else { BlockKind::Sorted };
    let shuffle = !args.no_shuffle;
    let w = match args.kind {
        Kind::Maxima => planted(gen_maxima_planted(&equal_blocks(args.n, args.blocks, kind), seed, shuffle)?),
        Kind::Hull => planted(gen_hull_planted(&equal_blocks(args.n, args.blocks, kind), seed, shuffle)?),
        Kind::Circle => planted(circle_sorted(args.n, seed)?),
        Kind::Chains => {
            let profile = match args.profile {
                Profile::Equal => SizeProfile::Equal,
                Profile::Geometric => SizeProfile::Geometric,
                Profile::Random => SizeProfile::Random,
            };
            let (chains, sizes) = gen_chains(args.rho, args.n, profile, seed)?;
            let verts: Vec<_> = chains.iter().map(|c| c.vertices().to_vec()).collect();
            Written {
                data: "chains.txt".into(),
                text: io::write_chains(&verts),
                certificate: None,
                n: args.n,
                h: partition_entropy(&sizes, args.n)?,
            }
        }
        Kind::Scene => {
            let s = gen_scene(args.holes, args.hole_vertices, args.boundary_vertices, seed)?;
            let chains: Vec<_> = std::iter::once(&s.boundary).chain(&s.holes).map(|c| c.vertices().to_vec()).collect();
            let sizes = s.chain_sizes();
            let n = sizes.iter().sum();
            Written { data: "scene.txt".into(), text: io::write_scene(s.q, &chains), certificate: None, n, h: partition_entropy(&sizes, n)? }
        }
        Kind::Sequence => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut seq: Vec<i64> = (0..args.n).map(|_| rng.gen_range(0..1 << 30)).collect();
            let k = args.blocks.clamp(1, args.n.max(1));
            for c in seq.chunks_mut(args.n.div_ceil(k).max(1)) {
                c.sort_unstable();
            }
            Written { data: "sequence.txt".into(), text: io::write_sequence(&seq), certificate: None, n: seq.len(), h: run_entropy(&seq) }
        }
        Kind::Ball | Kind::Paraboloid => {
            let pts = match args.kind {
                Kind::Ball => ball(args.n, args.radius, seed),
                _ => paraboloid(args.n, args.radius, seed),
            };
            let h = (pts.len().max(1) as f64).log2();
            Written { data: "points3.txt".into(), text: io::write_points3(&pts), certificate: None, n: pts.len(), h }
        }
        Kind::Dome => {
            let inst = planted_dome(args.n, &args.clusters, seed)?;
            Written {
                data: "points3.txt".into(),
                text: io::write_points3(&inst.points),
                certificate: None,
                n: inst.points.len(),
                h: inst.entropy_bound,
            }
        }
    };
    write(&args.out, args.kind, seed, w)
}

fn write(dir: &Path, kind: Kind, seed: u64, w: Written) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(dir.join(&w.data), &w.text)?;
    let certificate = w.certificate.map(|c| -> Result<String> {
        fs::write(dir.join("certificate.json"), c)?;
        Ok("certificate.json".into())
    });
    let meta = io::InstanceMeta {
        generator: format!("{kind:?}").to_lowercase(),
        seed,
        n: w.n,
        entropy_bound: w.h,
        data: w.data,
        certificate: certificate.transpose()?,
    };
    fs::write(dir.join("instance.meta"), io::write_meta(&meta))?;
    Ok(())
}
