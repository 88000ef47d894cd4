use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::lmcore::Series;
use crate::scalar::Real;

/// Periodogram at the Fourier frequencies `omega_j = 2 pi j / n`, `j = 1..n/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Periodogram<T: Real = f64> {
    pub frequencies: Vec<T>,
    pub ordinates: Vec<T>,
    /// Length of the series it was computed from.
    pub n: usize,
}

impl<T: Real> Periodogram<T> {
    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }
}

/// Planned transform for series of one length; cheap to share across threads.
#[derive(Clone)]
pub struct PeriodogramPlan<T: Real> {
    n: usize,
    fft: Arc<dyn Fft<T>>,
}

impl<T: Real> PeriodogramPlan<T> {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::InsufficientData(format!(
                "periodogram needs at least 4 observations, got {n}"
            )));
        }
        Ok(PeriodogramPlan {
            n,
            fft: FftPlanner::new().plan_fft_forward(n),
        })
    }

    pub fn compute(&self, xs: &[T]) -> Result<Periodogram<T>> {
        if xs.len() != self.n {
            return Err(Error::invalid(
                "series",
                format!("plan is for length {}, got {}", self.n, xs.len()),
            ));
        }
        let n = self.n;
        let mut buf: Vec<Complex<T>> = xs.iter().map(|&x| Complex::new(x, T::zero())).collect();
        self.fft.process(&mut buf);
        let half = n / 2;
        let norm = T::from_f64_lossy(1.0 / (2.0 * PI * n as f64));
        let step = 2.0 * PI / n as f64;
        let frequencies = (1..=half)
            .map(|j| T::from_f64_lossy(step * j as f64))
            .collect();
        let ordinates = buf[1..=half].iter().map(|c| c.norm_sqr() * norm).collect();
        Ok(Periodogram {
            frequencies,
            ordinates,
            n,
        })
    }
}

/// `I(omega_j) = |sum_t X_t e^{i t omega_j}|^2 / (2 pi n)`.
pub fn periodogram<T: Real>(series: &Series<T>) -> Result<Periodogram<T>> {
    PeriodogramPlan::new(series.len())?.compute(series.values())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn brute(xs: &[f64], j: usize) -> f64 {
        let n = xs.len();
        let w = 2.0 * PI * j as f64 / n as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for (t, x) in xs.iter().enumerate() {
            let a = (t + 1) as f64 * w;
            re += x * a.cos();
            im += x * a.sin();
        }
        (re * re + im * im) / (2.0 * PI * n as f64)
    }

    #[test]
    fn constant_series_is_zero() {
        let p = periodogram(&Series::new(vec![3.0; 64]).unwrap()).unwrap();
        assert_eq!(p.len(), 32);
        assert!(p.ordinates.iter().all(|&v| v < 1e-25));
    }

    #[test]
    fn cosine_spike() {
        let n = 128;
        let k = 5;
        let w = 2.0 * PI * k as f64 / n as f64;
        let xs: Vec<f64> = (1..=n).map(|t| (w * t as f64).cos()).collect();
        let p = periodogram(&Series::new(xs).unwrap()).unwrap();
        for (j, v) in p.ordinates.iter().enumerate() {
            if j + 1 == k {
                assert_relative_eq!(*v, n as f64 / (8.0 * PI), max_relative = 1e-12);
            } else {
                assert!(*v < 1e-20);
            }
        }
    }

    #[test]
    fn matches_brute_force_and_parseval() {
        let xs: Vec<f64> = (0..64)
            .map(|t| ((t * 37 % 11) as f64 - 5.0) * 0.3)
            .collect();
        let p = periodogram(&Series::new(xs.clone()).unwrap()).unwrap();
        for j in 1..=32 {
            assert_relative_eq!(
                p.ordinates[j - 1],
                brute(&xs, j),
                max_relative = 1e-10,
                epsilon = 1e-14
            );
        }
        // all n frequencies: j = 0 plus the two mirrored halves
        let n = xs.len();
        let i0 = brute(&xs, 0);
        let mut total = i0 + p.ordinates[n / 2 - 1];
        for j in 1..n / 2 {
            total += 2.0 * p.ordinates[j - 1];
        }
        let m2 = xs.iter().map(|x| x * x).sum::<f64>() / n as f64;
        assert_relative_eq!(2.0 * PI / n as f64 * total, m2, max_relative = 1e-12);
    }

    #[test]
    fn too_short() {
        assert!(periodogram(&Series::new(vec![1.0, 2.0, 3.0]).unwrap()).is_err());
    }

    #[test]
    fn f32_agrees_with_f64() {
        let xs: Vec<f64> = (0..256).map(|t| ((t * 13 % 7) as f64).sin()).collect();
        let a = periodogram(&Series::new(xs.clone()).unwrap()).unwrap();
        let b = periodogram(&Series::new(xs.iter().map(|&x| x as f32).collect()).unwrap()).unwrap();
        for (x, y) in a.ordinates.iter().zip(&b.ordinates) {
            assert!((x - *y as f64).abs() < 1e-4 * (1.0 + x));
        }
    }

    proptest! {
        #[test]
        fn shift_invariant(xs in prop::collection::vec(-10.0f64..10.0, 8..64), c in -100.0f64..100.0) {
            let a = periodogram(&Series::new(xs.clone()).unwrap()).unwrap();
            let b = periodogram(&Series::new(xs.iter().map(|x| x + c).collect()).unwrap()).unwrap();
            for (x, y) in a.ordinates.iter().zip(&b.ordinates) {
                prop_assert!((x - y).abs() < 1e-9 * (1.0 + c * c));
            }
        }
    }
}
