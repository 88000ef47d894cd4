use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::lmcore::Series;
use crate::scalar::Real;

/// Lags above which the FFT route is used.
const DIRECT_MAX_LAG: usize = 64;

/// `gamma_hat(k) = (1/n) sum_{t=1}^{n-k} (X_t - mean)(X_{t+k} - mean)` for
/// `k = 0..=max_lag`.
pub fn sample_acv<T: Real>(series: &Series<T>, max_lag: usize) -> Result<Vec<f64>> {
    let n = series.len();
    if max_lag >= n {
        return Err(Error::invalid(
            "max_lag",
            format!("{max_lag} must be below the series length {n}"),
        ));
    }
    let mean = series.mean();
    let xs: Vec<f64> = series.values().iter().map(|x| x.as_f64() - mean).collect();
    let nf = n as f64;
    if max_lag <= DIRECT_MAX_LAG {
        return Ok((0..=max_lag)
            .map(|k| {
                xs[..n - k]
                    .iter()
                    .zip(&xs[k..])
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    / nf
            })
            .collect());
    }
    let size = (2 * n).next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let mut buf: Vec<Complex<f64>> = xs
        .iter()
        .map(|&x| Complex::new(x, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(size)
        .collect();
    fwd.process(&mut buf);
    for c in buf.iter_mut() {
        *c = Complex::new(c.norm_sqr(), 0.0);
    }
    inv.process(&mut buf);
    let scale = 1.0 / (size as f64 * nf);
    Ok(buf[..=max_lag].iter().map(|c| c.re * scale).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn alternating_series() {
        let xs: Vec<f64> = (0..1000)
            .map(|t| if t % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let g = sample_acv(&Series::new(xs).unwrap(), 2).unwrap();
        assert_relative_eq!(g[0], 1.0, max_relative = 1e-12);
        assert!((g[1] + 1.0).abs() < 2e-3);
    }

    #[test]
    fn fft_route_matches_direct() {
        let xs: Vec<f64> = (0..500).map(|t| ((t * 31 % 17) as f64).cos()).collect();
        let s = Series::new(xs).unwrap();
        let fast = sample_acv(&s, 200).unwrap();
        let slow = sample_acv(&s, 64).unwrap();
        for k in 0..=64 {
            assert!((fast[k] - slow[k]).abs() < 1e-12);
        }
        let mean = s.mean();
        let var = s.values().iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 500.0;
        assert_relative_eq!(slow[0], var, max_relative = 1e-12);
        assert!(sample_acv(&s, 500).is_err());
    }
}
