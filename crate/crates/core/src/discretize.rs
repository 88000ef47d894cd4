//! Round-off to a uniform grid and the sign transform.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lmcore::{erf, Series};
use crate::scalar::Real;

/// How a continuous path is observed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DiscretizationSpec {
    /// Nearest multiple of `delta`, ties away from zero.
    Round { delta: f64 },
    /// `+1` for `x >= 0`, `-1` otherwise.
    Sign,
}

impl DiscretizationSpec {
    pub fn round(delta: f64) -> Result<Self> {
        if delta > 0.0 && delta.is_finite() {
            Ok(DiscretizationSpec::Round { delta })
        } else {
            Err(Error::invalid(
                "delta",
                format!("{delta} must be positive and finite"),
            ))
        }
    }

    /// Grid step giving `chi = variance / delta^2`.
    pub fn from_chi(chi: f64, variance: f64) -> Result<Self> {
        check_positive("chi", chi)?;
        check_positive("variance", variance)?;
        Self::round((variance / chi).sqrt())
    }

    pub fn sign() -> Self {
        DiscretizationSpec::Sign
    }

    pub fn delta(&self) -> Option<f64> {
        match *self {
            DiscretizationSpec::Round { delta } => Some(delta),
            DiscretizationSpec::Sign => None,
        }
    }

    /// `chi` for a process of the given variance; `None` for the sign transform.
    pub fn chi(&self, variance: f64) -> Option<f64> {
        self.delta().map(|d| variance / (d * d))
    }

    #[inline]
    pub fn apply_scalar<T: Real>(&self, x: T) -> T {
        match *self {
            DiscretizationSpec::Round { delta } => {
                let d = T::from_f64_lossy(delta);
                (x / d).round() * d
            }
            DiscretizationSpec::Sign => {
                if x >= T::zero() {
                    T::one()
                } else {
                    -T::one()
                }
            }
        }
    }

    pub fn apply_slice<T: Real>(&self, xs: &mut [T]) {
        for x in xs {
            *x = self.apply_scalar(*x);
        }
    }
}

impl fmt::Display for DiscretizationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiscretizationSpec::Round { delta } => write!(f, "round(delta={delta})"),
            DiscretizationSpec::Sign => write!(f, "sign"),
        }
    }
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("{v} must be positive and finite"),
        ))
    }
}

/// Transformed copy of `series`; the transform is recorded in its metadata.
pub fn apply<T: Real>(series: &Series<T>, spec: &DiscretizationSpec) -> Series<T> {
    let mut out = series.map_values(|x| spec.apply_scalar(x));
    out.meta.transform = Some(*spec);
    out
}

/// `chi = D / delta^2`.
pub fn chi(variance: f64, delta: f64) -> Result<f64> {
    check_positive("variance", variance)?;
    check_positive("delta", delta)?;
    Ok(variance / (delta * delta))
}

/// Probability that a rounded centred Gaussian lands on zero,
/// `q0 = erf(1 / (2 sqrt(2 chi)))`.
pub fn zero_fraction(chi: f64) -> Result<f64> {
    check_positive("chi", chi)?;
    Ok(erf(1.0 / (2.0 * (2.0 * chi).sqrt())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(v: Vec<f64>) -> Series<f64> {
        Series::new(v).unwrap()
    }

    #[test]
    fn rounding_examples() {
        let r = DiscretizationSpec::round(1.0).unwrap();
        let out = apply(&series(vec![0.4, 0.6, -0.6]), &r);
        assert_eq!(out.values(), &[0.0, 1.0, -1.0]);
        assert_eq!(out.meta.transform, Some(r));
        let ties = apply(&series(vec![0.5, -0.5, 1.5, -2.5]), &r);
        assert_eq!(ties.values(), &[1.0, -1.0, 2.0, -3.0]);
    }

    #[test]
    fn sign_examples() {
        let out = apply(&series(vec![2.5, -0.1, 0.0]), &DiscretizationSpec::Sign);
        assert_eq!(out.values(), &[1.0, -1.0, 1.0]);
    }

    #[test]
    fn chi_examples() {
        assert!((chi(1.0, 10f64.sqrt()).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(chi(4.0, 2.0).unwrap(), 1.0);
        assert_eq!(chi(1.0, 2.0).unwrap(), 0.25);
        assert!(chi(0.0, 1.0).is_err());
        let spec = DiscretizationSpec::from_chi(0.25, 1.0).unwrap();
        assert_eq!(spec.delta(), Some(2.0));
        assert_eq!(spec.chi(1.0), Some(0.25));
        assert!(DiscretizationSpec::round(0.0).is_err());
    }

    #[test]
    fn zero_fraction_values() {
        // mpmath, 30 digits
        for (chi, want) in [
            (0.1, 0.886153701993341939689290094328),
            (0.25, 0.682689492137085897170465091264),
            (0.5, 0.520499877813046537682746653892),
        ] {
            assert!((zero_fraction(chi).unwrap() - want).abs() < 1e-15);
        }
        assert!(zero_fraction(1e12).unwrap() < 1e-6);
        assert!(zero_fraction(-1.0).is_err());
    }

    #[test]
    fn empirical_zero_fraction() {
        use crate::synth::SeedSpec;
        use rand::Rng;
        use rand_distr::StandardNormal;
        let mut rng = SeedSpec::new(11, 0).rng();
        let n = 1_000_000;
        for chi in [0.1, 0.25, 0.5, 2.0] {
            let spec = DiscretizationSpec::from_chi(chi, 1.0).unwrap();
            let zeros = (0..n)
                .filter(|_| spec.apply_scalar(rng.sample::<f64, _>(StandardNormal)) == 0.0)
                .count();
            let q0 = zero_fraction(chi).unwrap();
            let se = (q0 * (1.0 - q0) / n as f64).sqrt();
            assert!((zeros as f64 / n as f64 - q0).abs() < 4.0 * se);
        }
    }

    proptest! {
        #[test]
        fn round_properties(xs in prop::collection::vec(-50.0f64..50.0, 2..40), delta in 0.01f64..5.0) {
            let spec = DiscretizationSpec::round(delta).unwrap();
            let s = series(xs.clone());
            let once = apply(&s, &spec);
            let twice = apply(&once, &spec);
            prop_assert_eq!(once.values(), twice.values());
            let neg = apply(&series(xs.iter().map(|x| -x).collect()), &spec);
            for ((x, y), z) in xs.iter().zip(once.values()).zip(neg.values()) {
                prop_assert!((x - y).abs() <= delta / 2.0 * (1.0 + 1e-12));
                prop_assert_eq!(*z, -*y);
            }
        }

        #[test]
        fn sign_is_odd(xs in prop::collection::vec(-50.0f64..50.0, 2..40)) {
            prop_assume!(xs.iter().all(|x| *x != 0.0));
            let a = apply(&series(xs.clone()), &DiscretizationSpec::Sign);
            let b = apply(&series(xs.iter().map(|x| -x).collect()), &DiscretizationSpec::Sign);
            for (y, z) in a.values().iter().zip(b.values()) {
                prop_assert_eq!(*z, -*y);
            }
        }
    }
}
