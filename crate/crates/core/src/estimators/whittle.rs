use super::periodogram::{periodogram, Periodogram};
use crate::error::{Error, Result};
use crate::lmcore::Series;
use crate::scalar::Real;

/// Points of the coarse grid on `[0, 1]`.
pub const WHITTLE_GRID_POINTS: usize = 101;
/// Width of the final golden-section bracket.
pub const WHITTLE_TOLERANCE: f64 = 1e-6;

/// Bandwidth `floor(n^gamma)`; the small offset keeps exact powers such as
/// `1024^0.5` from rounding down.
pub fn bandwidth(n: usize, gamma: f64) -> usize {
    ((n as f64).powf(gamma) + 1e-9).floor() as usize
}

/// Log-periodogram terms over the first `m` frequencies with the zeros dropped.
struct Objective {
    log_omega: Vec<f64>,
    log_i: Vec<f64>,
    mean_log_omega: f64,
    m: f64,
}

impl Objective {
    fn new<T: Real>(pg: &Periodogram<T>, m: usize) -> Result<Self> {
        let half = pg.len();
        if m < 2 || m > half {
            return Err(Error::invalid(
                "m",
                format!("{m} is outside [2, {half}] for a series of length {}", pg.n),
            ));
        }
        let mut log_omega = Vec::with_capacity(m);
        let mut log_i = Vec::with_capacity(m);
        let mut sum_log_omega = 0.0;
        for j in 0..m {
            let lw = pg.frequencies[j].as_f64().ln();
            sum_log_omega += lw;
            let v = pg.ordinates[j].as_f64();
            if v > 0.0 {
                log_omega.push(lw);
                log_i.push(v.ln());
            }
        }
        if log_i.is_empty() {
            return Err(Error::Degenerate(format!(
                "the first {m} periodogram ordinates are all zero"
            )));
        }
        Ok(Objective {
            log_omega,
            log_i,
            mean_log_omega: sum_log_omega / m as f64,
            m: m as f64,
        })
    }

    fn eval(&self, h: f64) -> f64 {
        let e = 2.0 * h - 1.0;
        let mut max = f64::NEG_INFINITY;
        for (lw, li) in self.log_omega.iter().zip(&self.log_i) {
            max = max.max(e * lw + li);
        }
        let s: f64 = self
            .log_omega
            .iter()
            .zip(&self.log_i)
            .map(|(lw, li)| (e * lw + li - max).exp())
            .sum();
        max + s.ln() - self.m.ln() - 2.0 * h * self.mean_log_omega
    }
}

/// `U(h) = ln(mean_j omega_j^{2h-1} I_j) - 2h mean_j ln omega_j` over `j <= m`.
pub fn whittle_objective<T: Real>(pg: &Periodogram<T>, m: usize, h: f64) -> Result<f64> {
    Ok(Objective::new(pg, m)?.eval(h))
}

/// Local Whittle estimate from a precomputed periodogram.
pub fn local_whittle_from_periodogram<T: Real>(pg: &Periodogram<T>, m: usize) -> Result<f64> {
    let obj = Objective::new(pg, m)?;
    let steps = (WHITTLE_GRID_POINTS - 1) as f64;
    let mut best = 0;
    let mut best_val = f64::INFINITY;
    for i in 0..WHITTLE_GRID_POINTS {
        let v = obj.eval(i as f64 / steps);
        if v < best_val {
            best_val = v;
            best = i;
        }
    }
    let mut a = (best.saturating_sub(1)) as f64 / steps;
    let mut b = ((best + 1).min(WHITTLE_GRID_POINTS - 1)) as f64 / steps;
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = obj.eval(c);
    let mut fd = obj.eval(d);
    while b - a > WHITTLE_TOLERANCE {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = obj.eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = obj.eval(d);
        }
    }
    // the minimiser may sit on the boundary of [0, 1]
    let mid = 0.5 * (a + b);
    let mut h = mid;
    let mut hv = obj.eval(mid);
    for edge in [0.0, 1.0] {
        if (edge - mid).abs() <= 1.0 / steps {
            let v = obj.eval(edge);
            if v < hv {
                hv = v;
                h = edge;
            }
        }
    }
    Ok(h)
}

/// Local Whittle estimate of `H` using the first `m` Fourier frequencies.
pub fn local_whittle<T: Real>(series: &Series<T>, m: usize) -> Result<f64> {
    let pg = periodogram(series)?;
    local_whittle_from_periodogram(&pg, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmcore::ProcessSpec;
    use crate::synth::{simulate_gaussian, SeedSpec};
    use proptest::prelude::*;

    #[test]
    fn bandwidths() {
        let n10 = 1 << 10;
        let n14 = 1 << 14;
        let got: Vec<usize> = [0.5, 0.6, 0.7, 0.8]
            .iter()
            .map(|&g| bandwidth(n10, g))
            .collect();
        assert_eq!(got, vec![32, 64, 128, 256]);
        let got: Vec<usize> = [0.5, 0.6, 0.7, 0.8]
            .iter()
            .map(|&g| bandwidth(n14, g))
            .collect();
        assert_eq!(got, vec![128, 337, 891, 2352]);
    }

    #[test]
    fn objective_minimum_is_interior_for_fgn() {
        let spec = ProcessSpec::fgn(0.7, 1.0).unwrap();
        let s = simulate_gaussian(&spec, 4096, SeedSpec::new(5, 0)).unwrap();
        let h = local_whittle(&s, 256).unwrap();
        assert!((h - 0.7).abs() < 0.15, "{h}");
        let pg = periodogram(&s).unwrap();
        let u = whittle_objective(&pg, 256, h).unwrap();
        assert!(u <= whittle_objective(&pg, 256, h + 1e-3).unwrap());
        assert!(u <= whittle_objective(&pg, 256, h - 1e-3).unwrap());
    }

    #[test]
    fn errors() {
        let s = Series::new(vec![2.0; 64]).unwrap();
        assert!(matches!(local_whittle(&s, 8), Err(Error::Degenerate(_))));
        let s = Series::new((0..64).map(|t| (t as f64).sin()).collect()).unwrap();
        assert!(local_whittle(&s, 1).is_err());
        assert!(local_whittle(&s, 33).is_err());
        assert!(local_whittle(&s, 32).is_ok());
    }

    #[test]
    fn boundary_minimiser() {
        // strongly trending periodogram pushes the estimate to h = 1
        let n = 256;
        let xs: Vec<f64> = (0..n)
            .map(|t| (t as f64 / n as f64) * 10.0 + ((t * 7) % 3) as f64 * 1e-3)
            .collect();
        let h = local_whittle(&Series::new(xs).unwrap(), 16).unwrap();
        assert!((0.0..=1.0).contains(&h));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn scale_invariant(seed in 0u64..1000, c in 0.01f64..100.0) {
            let spec = ProcessSpec::fgn(0.7, 1.0).unwrap();
            let s = simulate_gaussian(&spec, 512, SeedSpec::new(seed, 0)).unwrap();
            let scaled = Series::new(s.values().iter().map(|x| c * x).collect()).unwrap();
            let a = local_whittle(&s, 32).unwrap();
            let b = local_whittle(&scaled, 32).unwrap();
            prop_assert!((a - b).abs() < 1e-5);
        }
    }
}
