use crate::error::{Error, Result};
use crate::lmcore::HurstExponent;

/// `f(H) = (1 - H) / ((1 + H)(2 + H)(1 + 2H))`.
pub fn dfa_shape(h: f64) -> f64 {
    (1.0 - h) / ((1.0 + h) * (2.0 + h) * (1.0 + 2.0 * h))
}

/// Leading term `A' f(H) m^{2H}` of `E[F_1^2(m)]` for `gamma(k) ~ A k^{2H-2}`,
/// with `A' = A / (H (2H - 1))`.
pub fn dfa_asymptote(h: HurstExponent, amplitude: f64, m: usize) -> Result<f64> {
    if m < 1 {
        return Err(Error::invalid("m", "box size must be at least 1"));
    }
    let h = h.value();
    let a_prime = amplitude / (h * (2.0 * h - 1.0));
    Ok(a_prime * dfa_shape(h) * (m as f64).powf(2.0 * h))
}

/// Exact `E[F_1^2(m)]`: mean squared residual of a least-squares line fitted
/// to the integrated path over one box of size `m`, for a stationary input
/// with autocovariance `acv` and variance `variance` (`acv(0)` is not used).
///
/// `E[F_1^2] = (tr S - tr(P S)) / m` where `S` is the covariance of the
/// partial sums and `P` the projection onto `{1, t}`. `S` is generated from
/// the partial-sum variances on the fly, so memory is `O(m)`.
pub fn expected_dfa_exact<F>(acv: F, variance: f64, m: usize) -> Result<f64>
where
    F: Fn(u64) -> f64,
{
    if m < 4 {
        return Err(Error::invalid(
            "m",
            format!("{m} is below the minimum box size 4"),
        ));
    }
    if !(variance > 0.0) {
        return Err(Error::invalid(
            "variance",
            format!("{variance} must be positive"),
        ));
    }
    // v[i] = Var(Y_i), Y_i = X_1 + ... + X_i
    let mut v = vec![0.0; m + 1];
    let mut cum = 0.0;
    for i in 1..=m {
        v[i] = v[i - 1] + variance + 2.0 * cum;
        if i < m {
            cum += acv(i as u64);
        }
    }
    let mf = m as f64;
    let c = 2.0 / (mf * (mf - 1.0));
    let a = 2.0 * mf + 1.0;
    let b = 6.0 / (mf + 1.0);
    let mut trace = 0.0;
    let mut proj = 0.0;
    for i in 1..=m {
        let fi = i as f64;
        trace += v[i];
        proj += c * (a - 6.0 * fi + b * fi * fi) * v[i];
        let mut row = 0.0;
        for j in i + 1..=m {
            let fj = j as f64;
            let s = 0.5 * (v[i] + v[j] - v[j - i]);
            row += (a - 3.0 * (fi + fj) + b * fi * fj) * s;
        }
        proj += 2.0 * c * row;
    }
    Ok((trace - proj) / mf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmcore::ProcessSpec;
    use approx::assert_relative_eq;

    /// Dense reference: build S and P explicitly.
    fn dense(acv: &dyn Fn(u64) -> f64, m: usize) -> f64 {
        let g = |k: usize| acv(k as u64);
        let mut s = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..m {
                let mut t = 0.0;
                for a in 0..=i {
                    for b in 0..=j {
                        t += g(a.abs_diff(b));
                    }
                }
                s[i][j] = t;
            }
        }
        // projection onto span{1, t} by Gram-Schmidt
        let one: Vec<f64> = vec![1.0 / (m as f64).sqrt(); m];
        let mean_t = (m as f64 + 1.0) / 2.0;
        let mut t: Vec<f64> = (1..=m).map(|i| i as f64 - mean_t).collect();
        let nt = t.iter().map(|x| x * x).sum::<f64>().sqrt();
        t.iter_mut().for_each(|x| *x /= nt);
        let mut tr = 0.0;
        let mut trp = 0.0;
        for i in 0..m {
            tr += s[i][i];
            for j in 0..m {
                let p = one[i] * one[j] + t[i] * t[j];
                trp += p * s[j][i];
            }
        }
        (tr - trp) / m as f64
    }

    #[test]
    fn projection_formula_matches_dense() {
        let spec = ProcessSpec::fgn(0.7, 1.3).unwrap();
        let acv = |k: u64| 1.3 * spec.autocorrelation(k);
        for m in [4, 7, 16] {
            let exact = expected_dfa_exact(acv, 1.3, m).unwrap();
            assert_relative_eq!(exact, dense(&acv, m), max_relative = 1e-11);
        }
    }

    #[test]
    fn white_noise_closed_form() {
        // iid input, against the dense construction
        let acv = |k: u64| if k == 0 { 1.0 } else { 0.0 };
        for m in [4, 9] {
            assert_relative_eq!(
                expected_dfa_exact(acv, 1.0, m).unwrap(),
                dense(&acv, m),
                max_relative = 1e-12
            );
        }
        assert!(expected_dfa_exact(acv, 1.0, 3).is_err());
    }

    #[test]
    fn asymptote_values() {
        assert_relative_eq!(
            dfa_shape(0.7),
            0.3 / (1.7 * 2.7 * 2.4),
            max_relative = 1e-15
        );
        assert!((dfa_shape(0.7) - 0.027233).abs() < 1e-6);
        let h = HurstExponent::new(0.7).unwrap();
        let v = dfa_asymptote(h, 0.7 * 0.4, 1000).unwrap();
        assert_relative_eq!(v, dfa_shape(0.7) * 1000f64.powf(1.4), max_relative = 1e-14);
        assert!(dfa_shape(1.0).abs() < 1e-300);
    }

    #[test]
    fn fgn_close_to_asymptote() {
        let spec = ProcessSpec::fgn(0.7, 1.0).unwrap();
        let exact = expected_dfa_exact(|k| spec.autocorrelation(k), 1.0, 256).unwrap();
        let lead = dfa_asymptote(spec.hurst, 0.7 * 0.4, 256).unwrap();
        assert!((exact / lead - 1.0).abs() < 0.02);
    }
}
