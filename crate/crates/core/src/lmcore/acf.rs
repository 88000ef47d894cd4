use super::types::HurstExponent;

/// Above this lag the fGn autocorrelation is summed as a series in `1/k`.
const FGN_SERIES_CROSSOVER: u64 = 10_000;

/// Autocorrelation of fractional Gaussian noise at lag `k`.
pub fn fgn_autocorrelation(h: HurstExponent, k: u64) -> f64 {
    fgn_autocorrelation_raw(h.value(), k)
}

/// Same as [`fgn_autocorrelation`] for any `h` in `[0, 1]`, so the limits
/// `H = 1/2` (white noise) and `H = 1` can be checked.
pub(crate) fn fgn_autocorrelation_raw(h: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let a = 2.0 * h;
    let kf = k as f64;
    if k <= FGN_SERIES_CROSSOVER {
        // (k+1)^a + (k-1)^a - 2k^a = k^a [((1+x)^a - 1) + ((1-x)^a - 1)], x = 1/k
        let x = 1.0 / kf;
        let up = (a * x.ln_1p()).exp_m1();
        let down = if k == 1 {
            -1.0
        } else {
            (a * (-x).ln_1p()).exp_m1()
        };
        0.5 * kf.powf(a) * (up + down)
    } else {
        // k^a * sum_{i>=1} binom(a, 2i) k^{-2i}
        let inv2 = 1.0 / (kf * kf);
        let mut binom = 1.0;
        let mut n = 0.0;
        let mut pow = 1.0;
        let mut sum = 0.0;
        loop {
            binom *= (a - n) / (n + 1.0);
            binom *= (a - n - 1.0) / (n + 2.0);
            n += 2.0;
            pow *= inv2;
            let term = binom * pow;
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() || n > 40.0 {
                break;
            }
        }
        kf.powf(a) * sum
    }
}

/// `rho(0..=max_lag)` for fGn.
pub fn fgn_autocorrelations(h: HurstExponent, max_lag: usize) -> Vec<f64> {
    (0..=max_lag as u64)
        .map(|k| fgn_autocorrelation(h, k))
        .collect()
}

/// Autocorrelation of fARIMA(0, d, 0), `d = H - 1/2`, at lag `k`.
pub fn farima_autocorrelation(h: HurstExponent, k: u64) -> f64 {
    farima_autocorrelation_raw(h.value(), k)
}

pub(crate) fn farima_autocorrelation_raw(h: f64, k: u64) -> f64 {
    let mut rho = 1.0;
    for i in 0..k {
        rho *= farima_ratio(h, i as f64);
    }
    rho
}

#[inline]
fn farima_ratio(h: f64, k: f64) -> f64 {
    (h - 0.5 + k) / (k + 1.5 - h)
}

/// `rho(0..=max_lag)` for fARIMA(0, d, 0), built with one pass of the recursion.
pub fn farima_autocorrelations(h: HurstExponent, max_lag: usize) -> Vec<f64> {
    let h = h.value();
    let mut out = Vec::with_capacity(max_lag + 1);
    let mut rho = 1.0;
    out.push(rho);
    for k in 0..max_lag {
        rho *= farima_ratio(h, k as f64);
        out.push(rho);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmcore::special::{gamma, log_gamma};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn hurst(h: f64) -> HurstExponent {
        HurstExponent::new(h).unwrap()
    }

    #[test]
    fn fgn_boundaries() {
        for k in [1, 3, 50, 20_000] {
            assert!(fgn_autocorrelation_raw(0.5, k).abs() < 1e-14);
            assert_relative_eq!(fgn_autocorrelation_raw(1.0, k), 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn fgn_lag_one() {
        let expected = (2f64.powf(1.4) - 2.0) / 2.0;
        assert_relative_eq!(
            fgn_autocorrelation(hurst(0.7), 1),
            expected,
            max_relative = 1e-15
        );
        assert!((expected - 0.31951).abs() < 5e-6);
    }

    #[test]
    fn fgn_matches_direct_formula_at_moderate_lags() {
        let h = 0.8;
        for k in [2u64, 5, 17, 100] {
            let kf = k as f64;
            let direct = 0.5
                * ((kf + 1.0).powf(2.0 * h) + (kf - 1.0).powf(2.0 * h) - 2.0 * kf.powf(2.0 * h));
            assert_relative_eq!(
                fgn_autocorrelation(hurst(h), k),
                direct,
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn fgn_series_and_direct_branches_agree_at_crossover() {
        // Both branches evaluated on either side of the switch.
        for h in [0.55, 0.7, 0.95] {
            let k = FGN_SERIES_CROSSOVER;
            let kf = k as f64;
            let a = 2.0 * h;
            let x = 1.0 / kf;
            let direct =
                0.5 * kf.powf(a) * ((a * x.ln_1p()).exp_m1() + (a * (-x).ln_1p()).exp_m1());
            let series = fgn_autocorrelation_raw(h, k + 1) * ((kf + 1.0) / kf).powf(2.0 - a);
            assert_relative_eq!(direct, series, max_relative = 1e-8);
        }
    }

    #[test]
    fn farima_values() {
        for h in [0.6, 0.7, 0.9] {
            assert_relative_eq!(
                farima_autocorrelation(hurst(h), 1),
                (h - 0.5) / (1.5 - h),
                max_relative = 1e-15
            );
        }
        assert_relative_eq!(
            farima_autocorrelation(hurst(0.7), 1),
            0.25,
            max_relative = 1e-15
        );
        let h = 0.7;
        let k = 100.0;
        let oracle = (log_gamma(1.5 - h).unwrap() + log_gamma(h + k - 0.5).unwrap()
            - log_gamma(h - 0.5).unwrap()
            - log_gamma(k + 1.5 - h).unwrap())
        .exp();
        assert_relative_eq!(
            farima_autocorrelation(hurst(h), 100),
            oracle,
            max_relative = 1e-12
        );
        let v = farima_autocorrelations(hurst(h), 100);
        assert_relative_eq!(v[100], oracle, max_relative = 1e-12);
    }

    #[test]
    fn asymptotic_amplitudes_at_large_lag() {
        let k = 1_000_000u64;
        for h in [0.6, 0.7, 0.85, 0.95] {
            let scale = (k as f64).powf(2.0 - 2.0 * h);
            let fgn = fgn_autocorrelation(hurst(h), k) * scale;
            assert_relative_eq!(fgn, h * (2.0 * h - 1.0), max_relative = 1e-3);
            let far = farima_autocorrelations(hurst(h), k as usize)[k as usize] * scale;
            assert_relative_eq!(far, gamma(1.5 - h) / gamma(h - 0.5), max_relative = 1e-3);
        }
    }

    #[test]
    fn monotone_and_positive() {
        for h in [0.6, 0.7, 0.85, 0.95] {
            let fgn = fgn_autocorrelations(hurst(h), 10_000);
            let far = farima_autocorrelations(hurst(h), 10_000);
            for rho in [&fgn, &far] {
                for k in 1..10_000 {
                    assert!(rho[k] > 0.0);
                    assert!(rho[k + 1] <= rho[k], "h={h} k={k}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn fgn_continuous_across_crossover(h in 0.51f64..0.99) {
            let k = FGN_SERIES_CROSSOVER;
            let a = fgn_autocorrelation(hurst(h), k);
            let b = fgn_autocorrelation(hurst(h), k + 1);
            let c = fgn_autocorrelation(hurst(h), k + 2);
            prop_assert!(b < a && c < b);
            // second difference of a smooth power law is tiny relative to the value
            prop_assert!(((a - 2.0 * b + c) / b).abs() < 1e-6);
        }

        #[test]
        fn fgn_bounded(h in 0.51f64..0.99, k in 1u64..10_000_000) {
            let r = fgn_autocorrelation(hurst(h), k);
            prop_assert!(r > 0.0 && r < 1.0);
        }
    }
}
