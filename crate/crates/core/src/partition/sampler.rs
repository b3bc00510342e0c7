use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{FrequencyCounts, Params};
use crate::error::{domain, Result};

/// Random stream for repetition `rep` of a run seeded with `seed`.
///
/// Each repetition gets its own ChaCha stream, so results do not depend on
/// how repetitions are scheduled across threads.
pub fn rng_for(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

/// Sequential sampler driven by the predictive rule: after `i` draws with
/// `k` blocks, a new block opens with probability `(θ + kα)/(θ + i)` and
/// block `b` grows with probability `(n_b - α)/(θ + i)`.
#[derive(Clone, Debug)]
pub struct PredictiveUrn {
    params: Params,
    sizes: Vec<u64>,
    n: u64,
}

impl PredictiveUrn {
    pub fn new(params: Params) -> Self {
        PredictiveUrn {
            params,
            sizes: Vec::new(),
            n: 0,
        }
    }

    /// Continues from existing block sizes (insertion order is kept).
    pub fn with_blocks(params: Params, sizes: &[u64]) -> Result<Self> {
        if sizes.contains(&0) {
            return Err(domain("block sizes must be positive"));
        }
        Ok(PredictiveUrn {
            params,
            sizes: sizes.to_vec(),
            n: sizes.iter().sum(),
        })
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Adds one observation and returns the index of the block it joined.
    /// The first observation always opens a block and consumes no randomness.
    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        let k = self.sizes.len();
        if self.n == 0 {
            self.sizes.push(1);
            self.n = 1;
            return 0;
        }
        let (alpha, theta) = (self.params.alpha(), self.params.theta());
        let total = theta + self.n as f64;
        let mut u = rng.random::<f64>() * total;
        let new_weight = theta + k as f64 * alpha;
        self.n += 1;
        if u < new_weight {
            self.sizes.push(1);
            return k;
        }
        u -= new_weight;
        for (b, size) in self.sizes.iter_mut().enumerate() {
            let w = *size as f64 - alpha;
            if u < w {
                *size += 1;
                return b;
            }
            u -= w;
        }
        // rounding left u past the last block
        self.sizes[k - 1] += 1;
        k - 1
    }

    pub fn counts(&self) -> FrequencyCounts {
        FrequencyCounts::from_block_sizes(&self.sizes).expect("sizes are positive")
    }
}

/// Result of continuing an initial partition with `m` further draws.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionalState {
    /// Initial block sizes `n_1, …, n_j`.
    pub initial: Vec<u64>,
    pub m: u64,
    /// Sizes `S_i` of the blocks opened by the additional draws, in order of creation.
    pub new_block_sizes: Vec<u64>,
    /// Increments `R_i` of the initial blocks.
    pub old_increments: Vec<u64>,
}

impl ConditionalState {
    /// Builds the bookkeeping from the block sizes after the extra draws,
    /// where the first `initial.len()` entries are the initial blocks.
    pub fn from_final_sizes(initial: &[u64], final_sizes: &[u64]) -> Self {
        let j = initial.len();
        let old_increments: Vec<u64> = initial
            .iter()
            .zip(final_sizes)
            .map(|(a, b)| b - a)
            .collect();
        let new_block_sizes = final_sizes[j..].to_vec();
        let m = old_increments.iter().sum::<u64>() + new_block_sizes.iter().sum::<u64>();
        ConditionalState {
            initial: initial.to_vec(),
            m,
            new_block_sizes,
            old_increments,
        }
    }

    /// `L`: observations falling in new blocks.
    pub fn l_new(&self) -> u64 {
        self.new_block_sizes.iter().sum()
    }

    /// `K_m^(n)`: number of new blocks.
    pub fn k_new(&self) -> u64 {
        self.new_block_sizes.len() as u64
    }

    /// `N_l`: new blocks of size `l`.
    pub fn n_l(&self, l: u64) -> u64 {
        self.new_block_sizes.iter().filter(|&&s| s == l).count() as u64
    }

    /// `O_l`: initial blocks whose final size is `l`.
    pub fn o_l(&self, l: u64) -> u64 {
        self.initial
            .iter()
            .zip(&self.old_increments)
            .filter(|(a, r)| *a + *r == l)
            .count() as u64
    }

    /// `M_l = N_l + O_l`.
    pub fn m_l(&self, l: u64) -> u64 {
        self.n_l(l) + self.o_l(l)
    }

    /// Frequency counts of the new blocks only.
    pub fn new_counts(&self) -> FrequencyCounts {
        FrequencyCounts::from_block_sizes(&self.new_block_sizes).expect("sizes are positive")
    }

    /// Frequency counts of the initial blocks after growth.
    pub fn old_counts(&self) -> FrequencyCounts {
        let sizes: Vec<u64> = self
            .initial
            .iter()
            .zip(&self.old_increments)
            .map(|(a, r)| a + r)
            .collect();
        FrequencyCounts::from_block_sizes(&sizes).expect("sizes are positive")
    }

    /// Frequency counts of the whole sample of size `n + m`.
    pub fn final_counts(&self) -> FrequencyCounts {
        let pairs = self
            .old_counts()
            .iter()
            .chain(self.new_counts().iter())
            .collect::<Vec<_>>();
        FrequencyCounts::from_pairs(pairs).expect("frequencies are positive")
    }
}

/// Draws `m` further observations given initial block sizes.
pub fn sample_conditional<R: Rng + ?Sized>(
    params: &Params,
    initial: &[u64],
    m: u64,
    rng: &mut R,
) -> Result<ConditionalState> {
    let mut urn = PredictiveUrn::with_blocks(*params, initial)?;
    for _ in 0..m {
        urn.draw(rng);
    }
    Ok(ConditionalState::from_final_sizes(initial, urn.sizes()))
}

/// Draws a partition of `n ≥ 1` observations.
pub fn sample_partition<R: Rng + ?Sized>(
    params: &Params,
    n: u64,
    rng: &mut R,
) -> Result<FrequencyCounts> {
    if n == 0 {
        return Err(domain("sample size must be at least 1"));
    }
    Ok(sample_conditional(params, &[], n, rng)?.final_counts())
}
