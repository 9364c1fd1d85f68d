//! Seeded Monte-Carlo helpers.
//!
//! Samples are grouped into fixed-size chunks; chunk `k` draws from its own
//! ChaCha stream `k` under the run seed. Chunk statistics are merged in chunk
//! order, so results depend only on `(seed, n)` and not on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vec3;

pub const DEFAULT_SEED: u64 = 42;
const CHUNK: usize = 2048;

/// Mean and standard error of a Monte-Carlo average.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// |mean − target| ≤ k·std_error, with a tiny absolute floor so zero-variance
    /// estimators still compare equal to their exact value.
    pub fn within_sigma(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error + 1e-12
    }
}

/// Running mean / sum of squared deviations (Welford), mergeable (Chan et al.).
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        Moments { n, mean, m2 }
    }
}

/// RNG for substream `stream` of a run seeded with `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Averages `sample(rng)` over `n` draws.
pub fn mc_mean<F>(n: usize, seed: u64, sample: F) -> Result<McEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    if n == 0 {
        return Err(Error::NoSamples);
    }
    let chunks = n.div_ceil(CHUNK);
    let partials: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(seed, k as u64);
            let len = CHUNK.min(n - k * CHUNK);
            let mut m = Moments::default();
            for _ in 0..len {
                m.push(sample(&mut rng));
            }
            m
        })
        .collect();
    let total = partials.into_iter().fold(Moments::default(), Moments::merge);
    let std_error = if total.n > 1 {
        (total.m2 / (total.n as f64 - 1.0)).sqrt() / (total.n as f64).sqrt()
    } else {
        0.0
    };
    Ok(McEstimate {
        mean: total.mean,
        std_error,
        n_samples: n,
        seed,
    })
}

/// Uniform point on the unit sphere: a normalized 3-d standard normal draw.
pub fn uniform_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    loop {
        let v: Vec3 = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = crate::linalg::norm3(&v);
        if n > 1e-300 {
            return v.map(|x| x / n);
        }
    }
}
