//! Summary statistics of replicate estimates.

/// Arithmetic mean.
pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation with the `n - 1` divisor; `None` below two values.
pub fn std_dev(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    Some((ss / (xs.len() - 1) as f64).sqrt())
}

/// Standard error of the mean.
pub fn std_error(xs: &[f64]) -> Option<f64> {
    std_dev(xs).map(|s| s / (xs.len() as f64).sqrt())
}

/// Linear-interpolation quantile (Hyndman-Fan type 7) of sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Mean, standard error and the 2.5/50/97.5% quantiles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub se: Option<f64>,
    pub q025: f64,
    pub q50: f64,
    pub q975: f64,
    pub count: usize,
}

pub fn summarize(xs: &[f64]) -> Summary {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    Summary {
        mean: mean(xs),
        se: std_error(xs),
        q025: quantile_sorted(&sorted, 0.025),
        q50: quantile_sorted(&sorted, 0.5),
        q975: quantile_sorted(&sorted, 0.975),
        count: xs.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn type7_matches_reference() {
        // R: quantile(c(1, 2, 4, 8, 16), c(.025, .5, .975), type = 7)
        let s = summarize(&[16.0, 2.0, 8.0, 1.0, 4.0]);
        assert!((s.q025 - 1.1).abs() < 1e-12);
        assert_eq!(s.q50, 4.0);
        assert!((s.q975 - 15.2).abs() < 1e-12);
        assert_eq!(s.mean, 6.2);
    }

    #[test]
    fn single_value() {
        let s = summarize(&[0.7]);
        assert_eq!(s.se, None);
        assert_eq!((s.q025, s.q50, s.q975), (0.7, 0.7, 0.7));
    }

    proptest! {
        #[test]
        fn ordered_quantiles(xs in prop::collection::vec(-1e3f64..1e3, 1..200)) {
            let s = summarize(&xs);
            prop_assert!(s.q025 <= s.q50 && s.q50 <= s.q975);
            if xs.len() >= 2 && xs.iter().any(|x| *x != xs[0]) {
                prop_assert!(s.se.unwrap() > 0.0);
            }
        }
    }
}
