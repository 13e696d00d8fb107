//! Uniform directions on the unit sphere and the parallel Monte Carlo driver.
//!
//! Work is split into a fixed number of workers. Worker `i` draws from a
//! ChaCha8 stream keyed by `(seed, i)` and returns an integer tally, so the
//! merged result depends only on `(seed, samples, workers)` and never on
//! thread scheduling.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Vector, MIN_DIM};

pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_WORKERS: usize = 8;

/// Sample budget and seeding of one Monte Carlo estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { samples: DEFAULT_SAMPLES, seed: 0, workers: DEFAULT_WORKERS }
    }
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        McConfig { samples, seed, ..Default::default() }
    }

    pub fn with_workers(self, workers: usize) -> Self {
        McConfig { workers, ..self }
    }

    /// Same budget, with the seed replaced by an independent child seed.
    pub fn derive(self, index: u64) -> Self {
        McConfig { seed: derive_seed(self.seed, index), ..self }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidArgument("sample count must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidArgument("worker count must be at least 1".into()));
        }
        Ok(())
    }
}

/// SplitMix64 finaliser over `(root, index)`.
pub fn derive_seed(root: u64, index: u64) -> u64 {
    let mut z = root ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn worker_rng(seed: u64, worker: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker as u64);
    rng
}

/// Uniform random unit vector in `R^n`: a normalised vector of independent
/// standard normal deviates.
pub fn sample_unit_sphere<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Vector> {
    if n < MIN_DIM {
        return Err(Error::InvalidArgument(format!("sphere sampling needs n >= 2, got {n}")));
    }
    let mut buf = vec![0.0; n];
    fill_unit_sphere(rng, &mut buf);
    Ok(Vector::new(buf))
}

/// Allocation-free form of [`sample_unit_sphere`] for inner loops.
pub fn fill_unit_sphere<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        let mut sq = 0.0;
        for x in out.iter_mut() {
            *x = rng.sample(StandardNormal);
            sq += *x * *x;
        }
        if sq > 1e-300 {
            let inv = 1.0 / sq.sqrt();
            out.iter_mut().for_each(|x| *x *= inv);
            return;
        }
    }
}

/// Splits `samples` as evenly as possible over `workers`.
pub fn split_samples(samples: u64, workers: usize) -> Vec<u64> {
    let w = workers as u64;
    (0..w).map(|i| samples / w + u64::from(i < samples % w)).collect()
}

/// Runs `task(rng, count)` once per worker in parallel and returns the
/// per-worker results in worker order.
pub fn run_workers<A, F>(cfg: &McConfig, task: F) -> Vec<A>
where
    A: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> A + Sync,
{
    let counts = split_samples(cfg.samples, cfg.workers);
    counts
        .into_par_iter()
        .enumerate()
        .map(|(i, count)| {
            let mut rng = worker_rng(cfg.seed, i);
            task(&mut rng, count)
        })
        .collect()
}

/// Counts directions `u` with `hit(u)` over `cfg.samples` uniform draws in `R^n`.
pub fn count_hits<F>(cfg: &McConfig, n: usize, hit: F) -> u64
where
    F: Fn(&[f64]) -> bool + Sync,
{
    run_workers(cfg, |rng, count| {
        let mut u = vec![0.0; n];
        let mut hits = 0_u64;
        for _ in 0..count {
            fill_unit_sphere(rng, &mut u);
            if hit(&u) {
                hits += 1;
            }
        }
        hits
    })
    .into_iter()
    .sum()
}
