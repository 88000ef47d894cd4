//! Exact simulation of stationary Gaussian paths.
//!
//! Paths come from circulant embedding of the autocovariance sequence. When
//! the embedding spectrum has a clearly negative eigenvalue the generator
//! falls back to the sequential Durbin-Levinson construction, which is exact
//! for any positive definite Toeplitz covariance but costs O(n^2).

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lmcore::{ProcessSpec, Series, SeriesMeta};
use crate::scalar::Real;

/// Eigenvalues below `-EMBEDDING_TOLERANCE * max` reject the embedding.
pub const EMBEDDING_TOLERANCE: f64 = 1e-9;

/// Seed of one Monte Carlo replicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master: u64,
    pub replicate: u64,
}

impl SeedSpec {
    pub fn new(master: u64, replicate: u64) -> Self {
        SeedSpec { master, replicate }
    }

    /// Stream seed, a splitmix64 mix of both fields.
    pub fn stream_seed(&self) -> u64 {
        splitmix64(splitmix64(self.master) ^ self.replicate.wrapping_mul(0xD1B5_4A32_D192_ED03))
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.stream_seed())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

enum Method {
    Circulant {
        fft: Arc<dyn Fft<f64>>,
        /// `sqrt(lambda_k / M)`
        scale: Vec<f64>,
    },
    Levinson,
}

/// Reusable generator for paths of one length and one covariance.
pub struct GaussianSimulator {
    n: usize,
    acv: Vec<f64>,
    spec: Option<ProcessSpec>,
    method: Method,
}

impl GaussianSimulator {
    pub fn new(spec: &ProcessSpec, n: usize) -> Result<Self> {
        check_length(n)?;
        let mut sim = Self::from_acv(spec.autocovariances(n - 1))?;
        sim.spec = Some(*spec);
        Ok(sim)
    }

    /// Generator for an arbitrary autocovariance sequence `gamma(0..n)`.
    pub fn from_acv(acv: Vec<f64>) -> Result<Self> {
        let n = acv.len();
        check_length(n)?;
        if !(acv[0] > 0.0) || acv.iter().any(|g| !g.is_finite()) {
            return Err(Error::invalid(
                "acv",
                "variance must be positive and all lags finite",
            ));
        }
        let (mut lambda, fft) = embedding_eigenvalues(&acv);
        let max = lambda.iter().cloned().fold(f64::MIN, f64::max);
        let min = lambda.iter().cloned().fold(f64::MAX, f64::min);
        let method = if min < -EMBEDDING_TOLERANCE * max {
            log::warn!(
                "circulant embedding has eigenvalue {min:e} (max {max:e}); using the sequential generator"
            );
            levinson_check(&acv)?;
            Method::Levinson
        } else {
            if min < 0.0 {
                log::warn!("clamping embedding eigenvalue {min:e} to zero");
            }
            let m = lambda.len() as f64;
            for l in lambda.iter_mut() {
                *l = (l.max(0.0) / m).sqrt();
            }
            Method::Circulant { fft, scale: lambda }
        };
        Ok(GaussianSimulator {
            n,
            acv,
            spec: None,
            method,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn uses_circulant(&self) -> bool {
        matches!(self.method, Method::Circulant { .. })
    }

    /// Raw draw in `f64`.
    pub fn sample(&self, seed: SeedSpec) -> Vec<f64> {
        let mut rng = seed.rng();
        match &self.method {
            Method::Circulant { fft, scale } => {
                let mut buf: Vec<Complex<f64>> = scale
                    .iter()
                    .map(|&s| {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        Complex::new(s * re, s * im)
                    })
                    .collect();
                fft.process(&mut buf);
                buf.truncate(self.n);
                buf.into_iter().map(|c| c.re).collect()
            }
            Method::Levinson => levinson_sample(&self.acv, &mut rng),
        }
    }

    pub fn series(&self, seed: SeedSpec) -> Series<f64> {
        self.series_as(seed)
    }

    pub fn series_as<T: Real>(&self, seed: SeedSpec) -> Series<T> {
        let values = self
            .sample(seed)
            .into_iter()
            .map(T::from_f64_lossy)
            .collect();
        let meta = SeriesMeta {
            spec: self.spec,
            seed: Some(seed),
            transform: None,
        };
        Series::with_meta(values, meta).expect("gaussian draws are finite")
    }
}

fn check_length(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(
            "n",
            format!("{n} is below the minimum length 2"),
        ));
    }
    Ok(())
}

/// One exact path of length `n`.
pub fn simulate_gaussian(spec: &ProcessSpec, n: usize, seed: SeedSpec) -> Result<Series<f64>> {
    Ok(GaussianSimulator::new(spec, n)?.series(seed))
}

/// Eigenvalues of the `2(n-1)` circulant embedding of `spec`'s covariance.
pub fn embedding_spectrum(spec: &ProcessSpec, n: usize) -> Result<Vec<f64>> {
    check_length(n)?;
    embedding_spectrum_from_acv(&spec.autocovariances(n - 1))
}

pub fn embedding_spectrum_from_acv(acv: &[f64]) -> Result<Vec<f64>> {
    check_length(acv.len())?;
    Ok(embedding_eigenvalues(acv).0)
}

fn embedding_eigenvalues(acv: &[f64]) -> (Vec<f64>, Arc<dyn Fft<f64>>) {
    let n = acv.len();
    let m = 2 * (n - 1);
    let mut c: Vec<Complex<f64>> = Vec::with_capacity(m);
    c.extend(acv.iter().map(|&g| Complex::new(g, 0.0)));
    c.extend(acv[1..n - 1].iter().rev().map(|&g| Complex::new(g, 0.0)));
    let fft = FftPlanner::new().plan_fft_forward(m);
    fft.process(&mut c);
    (c.into_iter().map(|z| z.re).collect(), fft)
}

fn levinson_check(acv: &[f64]) -> Result<()> {
    let mut phi = vec![0.0; acv.len()];
    let mut prev = vec![0.0; acv.len()];
    let mut v = acv[0];
    for t in 1..acv.len() {
        let k = levinson_step(acv, t, &mut phi, &mut prev, v);
        v *= 1.0 - k * k;
        if !(v > 0.0) {
            return Err(Error::Embedding { min_eigenvalue: v });
        }
    }
    Ok(())
}

/// Updates `phi[1..=t]` in place and returns the reflection coefficient.
fn levinson_step(acv: &[f64], t: usize, phi: &mut [f64], prev: &mut [f64], v: f64) -> f64 {
    let mut num = acv[t];
    for j in 1..t {
        num -= phi[j] * acv[t - j];
    }
    let k = num / v;
    prev[1..t].copy_from_slice(&phi[1..t]);
    for j in 1..t {
        phi[j] = prev[j] - k * prev[t - j];
    }
    phi[t] = k;
    k
}

fn levinson_sample(acv: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = acv.len();
    let mut x = Vec::with_capacity(n);
    let mut phi = vec![0.0; n];
    let mut prev = vec![0.0; n];
    let mut v = acv[0];
    let z: f64 = rng.sample(StandardNormal);
    x.push(v.sqrt() * z);
    for t in 1..n {
        let k = levinson_step(acv, t, &mut phi, &mut prev, v);
        v *= 1.0 - k * k;
        let mean: f64 = (1..=t).map(|j| phi[j] * x[t - j]).sum();
        let z: f64 = rng.sample(StandardNormal);
        x.push(mean + v.max(0.0).sqrt() * z);
    }
    x
}
