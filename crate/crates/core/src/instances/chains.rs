use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::envelope::MonotoneChain;
use crate::geometry::Point2;
use crate::{Error, Result};

/// How segment counts are spread over the chains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SizeProfile {
    Equal,
    /// Each chain about half the size of the previous one.
    Geometric,
    Random,
}

fn sizes(rho: usize, n: usize, profile: SizeProfile, rng: &mut ChaCha8Rng) -> Vec<usize> {
    match profile {
        SizeProfile::Equal => (0..rho).map(|i| n / rho + usize::from(i < n % rho)).collect(),
        SizeProfile::Geometric => {
            let mut left = n;
            let mut v: Vec<usize> = (0..rho)
                .map(|i| {
                    let rest = rho - i - 1;
                    let s = if rest == 0 { left } else { (left / 2).max(1).min(left - rest) };
                    left -= s;
                    s
                })
                .collect();
            v.shuffle(rng);
            v
        }
        SizeProfile::Random => {
            let mut cuts: Vec<usize> = (1..n).collect();
            cuts.shuffle(rng);
            let mut cuts: Vec<usize> = cuts.into_iter().take(rho - 1).collect();
            cuts.sort_unstable();
            cuts.insert(0, 0);
            cuts.push(n);
            cuts.windows(2).map(|w| w[1] - w[0]).collect()
        }
    }
}

/// `rho` pairwise disjoint x-monotone chains with `n` segments in total,
/// returned with their segment counts.
///
/// All chains follow one random walk, each shifted into its own layer and
/// jittered by less than half the layer gap, so no two can meet. Layers are
/// assigned in random order and the chains cover random, overlapping
/// stretches of the x-axis.
pub fn gen_chains(rho: usize, n: usize, profile: SizeProfile, seed: u64) -> Result<(Vec<MonotoneChain>, Vec<usize>)> {
    if rho == 0 || n < rho {
        return Err(Error::pre("need at least one segment per chain"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes = sizes(rho, n, profile, &mut rng);
    const STEP: i64 = 40;
    const STRIDE: i64 = 4;
    // a chain vertex deviates from the walk by at most STRIDE * STEP plus jitter
    let gap = 8 * STRIDE * STEP + 8;
    let span = 2 * (sizes.iter().max().copied().unwrap_or(1) as i64) * STRIDE + 16;
    let walk: Vec<i64> = std::iter::once(0)
        .chain((0..span).scan(0i64, |y, _| {
            *y += rng.gen_range(-STEP..=STEP);
            Some(*y)
        }))
        .collect();
    let mut layers: Vec<i64> = (0..rho as i64).collect();
    layers.shuffle(&mut rng);

    let mut chains = Vec::with_capacity(rho);
    for (&s, &layer) in sizes.iter().zip(&layers) {
        let mut xs = Vec::with_capacity(s + 1);
        let mut x = rng.gen_range(0..=(span - 1 - s as i64 * STRIDE).max(0));
        xs.push(x);
        for _ in 0..s {
            x += rng.gen_range(1..=STRIDE);
            xs.push(x);
        }
        let vertices = xs
            .iter()
            .map(|&x| Point2::new(x, walk[x as usize] + layer * gap + rng.gen_range(0..gap / 4)))
            .collect();
        chains.push(MonotoneChain::new(vertices)?);
    }
    Ok((chains, sizes))
}
