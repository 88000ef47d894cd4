use crate::error::{Error, Result};
use crate::lmcore::erfc;

/// Relative size of the last bin kept in the moment sums.
pub const MOMENT_TOLERANCE: f64 = 1e-16;

/// `(sum_{n>=1} n^2 Delta_n, sum_{n>=1} n^4 Delta_n)` with
/// `Delta_n = P(|Z| in ((2n-1) a, (2n+1) a))`, `a = 1 / (2 sqrt(2 chi))`.
fn bin_moments(chi: f64) -> Result<(f64, f64)> {
    if !(chi > 0.0 && chi.is_finite()) {
        return Err(Error::invalid(
            "chi",
            format!("{chi} must be positive and finite"),
        ));
    }
    let a = 1.0 / (2.0 * (2.0 * chi).sqrt());
    let mut s2 = 0.0;
    let mut s4 = 0.0;
    let mut n = 1.0_f64;
    let mut upper_prev = erfc(a);
    loop {
        let upper = erfc((2.0 * n + 1.0) * a);
        let delta = upper_prev - upper;
        let n2 = n * n;
        s2 += n2 * delta;
        s4 += n2 * n2 * delta;
        // everything beyond is bounded by erfc((2n+1)a) times a slowly growing power
        let rest = upper * (n + 1.0).powi(4);
        if rest == 0.0 || ((2.0 * n + 1.0) * a > 1.0 && rest < MOMENT_TOLERANCE * s4) {
            break;
        }
        upper_prev = upper;
        n += 1.0;
    }
    Ok((s2, s4))
}

/// Variance `D_d` of the rounded Gaussian.
pub fn discretized_variance(chi: f64, variance: f64) -> Result<f64> {
    if !(variance > 0.0 && variance.is_finite()) {
        return Err(Error::invalid(
            "variance",
            format!("{variance} must be positive and finite"),
        ));
    }
    let (s2, _) = bin_moments(chi)?;
    Ok(variance / chi * s2)
}

/// Kurtosis `E[X_d^4] / E[X_d^2]^2`; independent of `D`.
pub fn discretized_kurtosis(chi: f64) -> Result<f64> {
    let (s2, s4) = bin_moments(chi)?;
    if s2 == 0.0 {
        return Err(Error::Degenerate(format!(
            "rounded variable is almost surely zero at chi = {chi}"
        )));
    }
    Ok(s4 / (s2 * s2))
}

/// Golden-section search for the minimum of the kurtosis on `[lo, hi]`.
pub fn kurtosis_minimum(lo: f64, hi: f64) -> Result<(f64, f64)> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = discretized_kurtosis(c)?;
    let mut fd = discretized_kurtosis(d)?;
    while b - a > 1e-9 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = discretized_kurtosis(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = discretized_kurtosis(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, discretized_kurtosis(x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn large_chi_sheppard() {
        let dd = discretized_variance(100.0, 1.0).unwrap();
        assert!((dd - (1.0 + 1.0 / 1200.0)).abs() < 1e-5);
        let k = discretized_kurtosis(100.0).unwrap();
        assert!((k - (3.0 - 1.0 / 1.2e6)).abs() < 1e-6);
        // mpmath: kappa_d(100) = 2.99999916805
        assert!((k - 2.99999916805).abs() < 1e-10);
    }

    #[test]
    fn reference_values() {
        // mpmath evaluations
        assert_relative_eq!(
            discretized_variance(0.1, 1.0).unwrap(),
            1.138526,
            epsilon = 2e-6
        );
        assert_relative_eq!(
            discretized_variance(0.25, 1.0).unwrap(),
            1.301651,
            epsilon = 2e-6
        );
        assert_relative_eq!(
            discretized_variance(0.5, 1.0).unwrap(),
            1.166449,
            epsilon = 2e-6
        );
        assert_relative_eq!(
            discretized_variance(0.02, 1.0).unwrap(),
            0.0203476008722479,
            max_relative = 1e-10
        );
    }

    #[test]
    fn small_chi_laws() {
        // leading-order laws; the relative correction is O(chi)
        let chi: f64 = 0.01;
        let dd = discretized_variance(chi, 1.0).unwrap();
        let law = 2.0 * (2.0 / PI).sqrt() * (-1.0 / (8.0 * chi)).exp() / chi.sqrt();
        assert_relative_eq!(dd, law, max_relative = 0.05);
        let k = discretized_kurtosis(chi).unwrap();
        let law = (PI / (8.0 * chi)).sqrt() * (1.0 / (8.0 * chi)).exp();
        assert_relative_eq!(k, law, max_relative = 0.05);
    }

    #[test]
    fn kurtosis_dip() {
        let (x, k) = kurtosis_minimum(0.2, 1.5).unwrap();
        assert!((2.980..=2.984).contains(&k), "{k}");
        assert!((0.50..=0.56).contains(&x), "{x}");
    }

    #[test]
    fn scales_with_variance() {
        let a = discretized_variance(0.3, 1.0).unwrap();
        let b = discretized_variance(0.3, 5.0).unwrap();
        assert_relative_eq!(b, 5.0 * a, max_relative = 1e-15);
        assert!(discretized_variance(0.0, 1.0).is_err());
    }
}
