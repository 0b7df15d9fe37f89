use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::engine::Tables;
use super::Strategy;
use crate::error::{Error, Result};
use crate::group::Modulus;
use crate::setops::PointSet;

/// Samples per independent random stream. Chunk c always draws from stream
/// c of the seed, so results do not depend on the thread count.
const CHUNK: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleReport {
    pub samples: u64,
    pub seed: u64,
    pub min_value: u32,
    /// First sampled set attaining `min_value`, in sample order.
    pub min_witness: PointSet,
    /// Samples with |2^A| below the threshold.
    pub below_threshold: u64,
    pub threshold: u32,
}

/// |2^A| over `samples` uniformly random m-subsets of Z_p^r.
pub fn sample_restricted_sizes(
    modulus: Modulus,
    m: usize,
    samples: u64,
    seed: u64,
    threshold: u32,
) -> Result<SampleReport> {
    let n = modulus.order();
    if n > 128 {
        return Err(Error::unsupported(
            "sampling handles groups of order at most 128",
        ));
    }
    if m > n || samples == 0 {
        return Err(Error::usage("need 1 <= samples and m <= |G|"));
    }
    let t = Tables::new(modulus, m, Strategy::Exhaustive)?;
    let chunks = samples.div_ceil(CHUNK);
    let per_chunk: Vec<(u32, u128, u64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = CHUNK.min(samples - c * CHUNK);
            let (mut best, mut witness, mut below) = (u32::MAX, 0u128, 0u64);
            for _ in 0..count {
                let mask = rand::seq::index::sample(&mut rng, n, m)
                    .into_iter()
                    .fold(0u128, |acc, i| acc | 1u128 << i);
                let v = t.restricted_sums(mask).count_ones();
                if v < best {
                    best = v;
                    witness = mask;
                }
                below += (v < threshold) as u64;
            }
            (best, witness, below)
        })
        .collect();
    let (mut best, mut witness, mut below) = (u32::MAX, 0u128, 0u64);
    for (b, w, c) in per_chunk {
        if b < best {
            best = b;
            witness = w;
        }
        below += c;
    }
    Ok(SampleReport {
        samples,
        seed,
        min_value: best,
        min_witness: PointSet::from_mask(modulus, witness),
        below_threshold: below,
        threshold,
    })
}
