use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Number of independent RNG streams a run is split into unless configured otherwise.
pub const DEFAULT_SHARDS: usize = 8;

/// Monte Carlo result for one complex quantity. `stderr` is the modulus of the
/// component-wise standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: Complex64,
    pub stderr: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `|value - mean| / stderr`, infinite when the estimate has no spread but misses.
    pub fn z_score(&self, value: Complex64) -> f64 {
        let d = (value - self.mean).norm();
        if self.stderr > 0.0 {
            d / self.stderr
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub shards: usize,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> McConfig {
        McConfig { samples, seed, shards: DEFAULT_SHARDS }
    }

    pub fn with_shards(self, shards: usize) -> McConfig {
        McConfig { shards: shards.max(1), ..self }
    }

    fn shard_sizes(&self) -> Vec<u64> {
        let k = self.shards.max(1) as u64;
        (0..k).map(|s| self.samples / k + u64::from(s < self.samples % k)).collect()
    }
}

/// The generator for one shard: ChaCha8 seeded from `seed`, on stream `shard`.
pub fn shard_rng(seed: u64, shard: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard as u64);
    rng
}

/// Runs `work(rng, count)` once per shard, possibly in parallel, and merges the partial
/// results in shard order so the outcome does not depend on scheduling.
pub fn run_sharded<A, W, M>(cfg: &McConfig, work: W, merge: M) -> A
where
    A: Send,
    W: Fn(&mut ChaCha8Rng, u64) -> A + Sync,
    M: Fn(A, A) -> A,
{
    let parts: Vec<A> = cfg
        .shard_sizes()
        .into_par_iter()
        .enumerate()
        .map(|(s, count)| work(&mut shard_rng(cfg.seed, s), count))
        .collect();
    parts.into_iter().reduce(merge).expect("at least one shard")
}

/// Streaming mean and co-moments of a `D`-dimensional sample, mergeable in any grouping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments<const D: usize> {
    n: u64,
    mean: [f64; D],
    co: [[f64; D]; D],
}

impl<const D: usize> Default for Moments<D> {
    fn default() -> Self {
        Moments { n: 0, mean: [0.0; D], co: [[0.0; D]; D] }
    }
}

impl<const D: usize> Moments<D> {
    pub fn push(&mut self, x: [f64; D]) {
        self.n += 1;
        let n = self.n as f64;
        let delta: [f64; D] = std::array::from_fn(|k| x[k] - self.mean[k]);
        for (m, d) in self.mean.iter_mut().zip(&delta) {
            *m += d / n;
        }
        for (row, da) in self.co.iter_mut().zip(&delta) {
            for ((c, xb), mb) in row.iter_mut().zip(&x).zip(&self.mean) {
                *c += da * (xb - mb);
            }
        }
    }

    /// Pairwise combination of two partial results.
    pub fn merge(mut self, other: Moments<D>) -> Moments<D> {
        if other.n == 0 {
            return self;
        }
        if self.n == 0 {
            return other;
        }
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        let delta: [f64; D] = std::array::from_fn(|k| other.mean[k] - self.mean[k]);
        for ((row, orow), da) in self.co.iter_mut().zip(&other.co).zip(&delta) {
            for ((c, oc), db) in row.iter_mut().zip(orow).zip(&delta) {
                *c += oc + da * db * na * nb / n;
            }
        }
        for (m, d) in self.mean.iter_mut().zip(&delta) {
            *m += d * nb / n;
        }
        self.n += other.n;
        self
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> [f64; D] {
        self.mean
    }

    /// Unbiased sample covariance.
    pub fn covariance(&self, a: usize, b: usize) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.co[a][b] / (self.n - 1) as f64
    }
}

/// Mean of a complex sample as `(re, im)` moments.
pub type ComplexMoments = Moments<2>;

/// Ratio `E[w f] / E[w]` from moments of `(w, w Re f, w Im f)`.
pub type RatioMoments = Moments<3>;

pub fn complex_estimate(m: &ComplexMoments, seed: u64) -> McEstimate {
    let n = m.count().max(1) as f64;
    let se_re = (m.covariance(0, 0) / n).sqrt();
    let se_im = (m.covariance(1, 1) / n).sqrt();
    McEstimate {
        mean: Complex64::new(m.mean()[0], m.mean()[1]),
        stderr: se_re.hypot(se_im),
        stderr_re: se_re,
        stderr_im: se_im,
        samples: m.count(),
        seed,
    }
}

/// Delta method: with `r = E[wf]/E[w]`, `Var(r̂) ≈ Var(wf - r w) / (n E[w]²)`, evaluated
/// separately for the real and imaginary parts of `f`.
pub fn ratio_estimate(m: &RatioMoments, seed: u64) -> McEstimate {
    let n = m.count().max(1) as f64;
    let mu = m.mean();
    let r = [mu[1] / mu[0], mu[2] / mu[0]];
    let se = |k: usize| {
        let rc = r[k - 1];
        let var = m.covariance(k, k) + rc * rc * m.covariance(0, 0) - 2.0 * rc * m.covariance(0, k);
        (var.max(0.0) / n).sqrt() / mu[0].abs()
    };
    let (se_re, se_im) = (se(1), se(2));
    McEstimate {
        mean: Complex64::new(r[0], r[1]),
        stderr: se_re.hypot(se_im),
        stderr_re: se_re,
        stderr_im: se_im,
        samples: m.count(),
        seed,
    }
}
