//! Seeded Monte Carlo simulation of pair emission, two-port analysis and
//! coincidence counting.
//!
//! # Random stream
//!
//! The generator is pinned so that counts are reproducible across platforms
//! and releases:
//!
//! * key: four successive SplitMix64 outputs of the run seed, each written
//!   little-endian, form the 256-bit ChaCha key;
//! * cipher: ChaCha with 8 rounds (`rand_chacha::ChaCha8Rng`);
//! * substreams: trials are grouped into fixed blocks of [`BLOCK_TRIALS`];
//!   block `b` draws from ChaCha stream `b` starting at word 0;
//! * uniforms: each draw takes one `u64`, keeps its top 52 bits `m` and maps
//!   them to the open interval `(m + ½)·2⁻⁵²`, so probability-0 cells are
//!   never hit and probability-1 cells always are.
//!
//! Because a block's stream depends only on the seed and the block index,
//! the merged counts do not depend on how blocks are split across worker
//! chunks.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::{born_table, ModelKind, TwoQubitState};
use crate::scalar::Scalar;
use crate::types::{table_from_counts, Angle, CoincidenceTable, CountRecord, SourceConfig, SourceMode};

/// Trials per random substream.
pub const BLOCK_TRIALS: u64 = 1 << 14;

/// One simulated run at a fixed pair of analyzer settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialPlan<T> {
    pub trials: u64,
    pub theta1: Angle<T>,
    pub theta2: Angle<T>,
    pub model: ModelKind,
    pub src: SourceConfig<T>,
    pub seed: u64,
}

impl<T: Scalar> TrialPlan<T> {
    pub fn new(
        trials: u64,
        theta1: Angle<T>,
        theta2: Angle<T>,
        model: ModelKind,
        src: SourceConfig<T>,
        seed: u64,
    ) -> Result<Self> {
        let plan = TrialPlan {
            trials,
            theta1,
            theta2,
            model,
            src,
            seed,
        };
        plan.validate()?;
        Ok(plan)
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::domain("trials must be at least 1"));
        }
        Ok(())
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn chacha_key(seed: u64) -> [u8; 32] {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    key
}

/// Uniform draws for one block of trials.
struct BlockStream {
    rng: ChaCha8Rng,
}

impl BlockStream {
    fn new(key: [u8; 32], block: u64) -> Self {
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(block);
        BlockStream { rng }
    }

    /// Uniform on the open interval (0, 1).
    fn uniform(&mut self) -> f64 {
        let m = self.rng.next_u64() >> 12;
        (m as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
    }
}

/// Per-trial sampler with the model's probabilities precomputed in `f64`.
enum Sampler {
    /// Mode-`HV` probability and, per mode, the port-V probabilities of both channels.
    Classical {
        weight_hv: f64,
        p_v: [(f64, f64); 2],
    },
    /// Cumulative VV, VH, HV thresholds.
    Categorical { cumulative: [f64; 3] },
}

impl Sampler {
    fn new<T: Scalar>(plan: &TrialPlan<T>) -> Result<Self> {
        let a = plan.theta1.relative_to(plan.src.axis()).radians();
        let b = plan.theta2.relative_to(plan.src.axis()).radians();
        match plan.model {
            ModelKind::ClassicalMalus => {
                let malus = |axis: T, pol: T| {
                    let c = (axis - pol).cos();
                    (c * c).to_f64_lossy()
                };
                let p_v = SourceMode::ALL.map(|mode| {
                    let (pol1, pol2) = mode.polarizations::<T>();
                    (malus(a, pol1), malus(b, pol2))
                });
                Ok(Sampler::Classical {
                    weight_hv: plan.src.weight_of(SourceMode::HV).to_f64_lossy(),
                    p_v,
                })
            }
            ModelKind::QuantumSuperposition(sign) => {
                let state = TwoQubitState::<T>::anticorrelated(sign);
                let t = born_table(&state, Angle::new(a)?, Angle::new(b)?)?;
                let [vv, vh, hv, _] = t.cells().map(Scalar::to_f64_lossy);
                Ok(Sampler::Categorical {
                    cumulative: [vv, vv + vh, vv + vh + hv],
                })
            }
        }
    }

    /// Cell index (VV, VH, HV, HH) of one simulated pair.
    fn draw(&self, stream: &mut BlockStream) -> usize {
        match *self {
            Sampler::Classical { weight_hv, p_v } => {
                let mode = if stream.uniform() < weight_hv { 0 } else { 1 };
                let (p1, p2) = p_v[mode];
                let port1 = usize::from(stream.uniform() >= p1);
                let port2 = usize::from(stream.uniform() >= p2);
                2 * port1 + port2
            }
            Sampler::Categorical { cumulative } => {
                let u = stream.uniform();
                cumulative.iter().position(|&c| u < c).unwrap_or(3)
            }
        }
    }
}

fn run_blocks(sampler: &Sampler, key: [u8; 32], trials: u64, blocks: std::ops::Range<u64>) -> [u64; 4] {
    let mut counts = [0u64; 4];
    for block in blocks {
        let start = block * BLOCK_TRIALS;
        let len = BLOCK_TRIALS.min(trials - start);
        let mut stream = BlockStream::new(key, block);
        for _ in 0..len {
            counts[sampler.draw(&mut stream)] += 1;
        }
    }
    counts
}

/// Simulates `plan.trials` pairs using one chunk per rayon worker.
pub fn run_trials<T: Scalar>(plan: &TrialPlan<T>) -> Result<CountRecord> {
    run_trials_chunked(plan, rayon::current_num_threads())
}

/// Simulates `plan.trials` pairs, splitting the trial blocks into `chunks`
/// contiguous groups evaluated in parallel. The result does not depend on
/// `chunks`.
pub fn run_trials_chunked<T: Scalar>(plan: &TrialPlan<T>, chunks: usize) -> Result<CountRecord> {
    plan.validate()?;
    if chunks == 0 {
        return Err(Error::domain("chunk count must be at least 1"));
    }
    let sampler = Sampler::new(plan)?;
    let key = chacha_key(plan.seed);
    let n_blocks = plan.trials.div_ceil(BLOCK_TRIALS);
    let chunks = (chunks as u64).min(n_blocks);
    let per_chunk = n_blocks.div_ceil(chunks);

    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * per_chunk;
            let hi = ((c + 1) * per_chunk).min(n_blocks);
            run_blocks(&sampler, key, plan.trials, lo..hi)
        })
        .reduce(
            || [0u64; 4],
            |mut acc, part| {
                for (a, p) in acc.iter_mut().zip(part) {
                    *a += p;
                }
                acc
            },
        );
    CountRecord::new(counts, plan.trials, plan.seed)
}

/// Empirical coincidence table of a simulated run.
pub fn estimate_table<T: Scalar>(plan: &TrialPlan<T>) -> Result<CoincidenceTable<T>> {
    table_from_counts(&run_trials(plan)?)
}
