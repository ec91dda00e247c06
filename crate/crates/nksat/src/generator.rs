//! Seeded random instance generation under two models.
//!
//! The uniform model zeroes each table entry independently with probability
//! `p`. The fixed ratio model gives every table an exact number of zero
//! rows: writing `z = floor(z) + alpha`, exactly `floor((1 - alpha) * n)`
//! functions (chosen uniformly without replacement) receive `floor(z)` zero
//! rows and the rest receive `floor(z) + 1`, so the mean zero count per
//! table tracks `z`.
//!
//! # Determinism contract
//!
//! One root seed reproduces an instance bit for bit. Function `i` draws
//! from its own ChaCha8 stream: the cipher is keyed with `seed` (through
//! `seed_from_u64`) and positioned on stream `i + 1`; stream 0 carries
//! instance-level draws (the fixed ratio model's choice of which functions
//! get the lower zero count). Within a function stream the draw order is
//! fixed: neighborhood first, then table content. Sampling without
//! replacement is a partial Fisher-Yates shuffle over an explicit index
//! range, never draw-and-retry, so each selection consumes a fixed number
//! of range draws.

use crate::instance::{LocalFitness, NKInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// Largest supported neighborhood; tables hold `2^(k+1)` rows, so this caps
/// a single table at 2^24 entries.
pub const MAX_K: usize = 23;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Model {
    Uniform { p: f64 },
    FixedRatio { z: f64 },
}

impl Model {
    /// The model's single numeric parameter (`p` or `z`).
    pub fn parameter(&self) -> f64 {
        match *self {
            Model::Uniform { p } => p,
            Model::FixedRatio { z } => z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub n: usize,
    pub k: usize,
    pub model: Model,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("n = {n} too small for k = {k}: need n >= k + 1")]
    NTooSmall { n: usize, k: usize },
    #[error("k = {k} exceeds the table cap (max {MAX_K})")]
    KTooLarge { k: usize },
    #[error("p must lie in [0, 1], got {p}")]
    POutOfRange { p: f64 },
    #[error("z must lie in [0, {max}], got {z}")]
    ZOutOfRange { z: f64, max: usize },
}

pub fn check_params(params: &GenParams) -> Result<(), GenError> {
    let GenParams { n, k, model, .. } = *params;
    if k > MAX_K {
        return Err(GenError::KTooLarge { k });
    }
    if n < k + 1 {
        return Err(GenError::NTooSmall { n, k });
    }
    match model {
        Model::Uniform { p } => {
            if !(0.0..=1.0).contains(&p) || p.is_nan() {
                return Err(GenError::POutOfRange { p });
            }
        }
        Model::FixedRatio { z } => {
            let max = 1usize << (k + 1);
            if !(0.0..=max as f64).contains(&z) || z.is_nan() {
                return Err(GenError::ZOutOfRange { z, max });
            }
        }
    }
    Ok(())
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws `k` distinct variables from `[0, n)` excluding `exclude`, each
/// k-subset equiprobable next. The returned order is the draw order.
///
/// Implementation: partial Fisher-Yates over the candidate range with a
/// sparse overlay, so only `k` range draws are consumed regardless of `n`.
pub fn sample_neighborhood(
    n: usize,
    k: usize,
    exclude: usize,
    rng: &mut impl Rng,
) -> Result<Vec<usize>, GenError> {
    if n < k + 1 {
        return Err(GenError::NTooSmall { n, k });
    }
    let m = n - 1;
    let candidate = |idx: usize| if idx < exclude { idx } else { idx + 1 };
    let mut overlay: HashMap<usize, usize> = HashMap::new();
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let r = rng.random_range(j..m);
        let picked = *overlay.get(&r).unwrap_or(&r);
        let displaced = *overlay.get(&j).unwrap_or(&j);
        overlay.insert(r, displaced);
        out.push(candidate(picked));
    }
    Ok(out)
}

/// Chooses `count` distinct values from `[0, m)` by a dense partial shuffle.
fn sample_subset(m: usize, count: usize, rng: &mut impl Rng) -> Vec<usize> {
    debug_assert!(count <= m);
    let mut pool: Vec<usize> = (0..m).collect();
    for j in 0..count {
        let r = rng.random_range(j..m);
        pool.swap(j, r);
    }
    pool.truncate(count);
    pool
}

/// Generates an instance under either model. Deterministic per seed.
pub fn generate(params: &GenParams) -> Result<NKInstance, GenError> {
    check_params(params)?;
    let GenParams { n, k, model, seed } = *params;
    let rows = 1usize << (k + 1);

    // Fixed ratio: which functions get the lower zero count. Drawn from
    // stream 0 so function streams stay aligned across models.
    let mut low_count = vec![true; n];
    let mut z_low = 0usize;
    if let Model::FixedRatio { z } = model {
        z_low = z.floor() as usize;
        let alpha = z - z.floor();
        let n_low = ((1.0 - alpha) * n as f64).floor() as usize;
        if n_low < n {
            low_count = vec![false; n];
            for i in sample_subset(n, n_low, &mut stream_rng(seed, 0)) {
                low_count[i] = true;
            }
        }
    }

    let functions = (0..n)
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64 + 1);
            let neighborhood = sample_neighborhood(n, k, i, &mut rng)
                .expect("params already validated");
            let table = match model {
                Model::Uniform { p } => (0..rows)
                    .map(|_| if rng.random::<f64>() < p { 0u8 } else { 1u8 })
                    .collect(),
                Model::FixedRatio { .. } => {
                    let zeros = if low_count[i] { z_low } else { z_low + 1 };
                    let mut table = vec![1u8; rows];
                    for r in sample_subset(rows, zeros, &mut rng) {
                        table[r] = 0;
                    }
                    table
                }
            };
            LocalFitness { main_var: i, neighborhood, table }
        })
        .collect();

    Ok(NKInstance { n, k, functions })
}
