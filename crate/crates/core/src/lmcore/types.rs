use std::fmt;

use serde::{Deserialize, Serialize};

use super::acf::{farima_autocorrelations, fgn_autocorrelations};
use super::special::gamma;
use crate::discretize::DiscretizationSpec;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::synth::SeedSpec;

/// Hurst exponent restricted to the positively correlated long-memory range (1/2, 1).
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct HurstExponent(f64);

impl HurstExponent {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.5 && value < 1.0 {
            Ok(HurstExponent(value))
        } else {
            Err(Error::invalid(
                "hurst",
                format!("{value} is outside the open interval (0.5, 1)"),
            ))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Fractional differencing order `d = H - 1/2`.
    #[inline]
    pub fn d(self) -> f64 {
        self.0 - 0.5
    }

    /// Decay exponent `2 - 2H` of the autocorrelation.
    #[inline]
    pub fn alpha(self) -> f64 {
        2.0 - 2.0 * self.0
    }
}

impl TryFrom<f64> for HurstExponent {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        HurstExponent::new(value)
    }
}

impl From<HurstExponent> for f64 {
    fn from(h: HurstExponent) -> f64 {
        h.0
    }
}

impl fmt::Display for HurstExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessKind {
    /// Fractional Gaussian noise.
    Fgn,
    /// fARIMA(0, d, 0) with `d = H - 1/2`.
    Farima,
}

impl ProcessKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProcessKind::Fgn => "fgn",
            ProcessKind::Farima => "farima",
        }
    }
}

impl std::str::FromStr for ProcessKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fgn" => Ok(ProcessKind::Fgn),
            "farima" | "farima0d0" | "arfima" => Ok(ProcessKind::Farima),
            other => Err(Error::invalid(
                "process",
                format!("unknown process `{other}` (expected fgn or farima)"),
            )),
        }
    }
}

/// A zero-mean stationary Gaussian long-memory process.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProcessSpec {
    pub kind: ProcessKind,
    pub hurst: HurstExponent,
    /// Marginal variance `D`.
    pub variance: f64,
}

impl ProcessSpec {
    pub fn new(kind: ProcessKind, hurst: f64, variance: f64) -> Result<Self> {
        let hurst = HurstExponent::new(hurst)?;
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(Error::invalid(
                "variance",
                format!("{variance} must be positive and finite"),
            ));
        }
        Ok(ProcessSpec {
            kind,
            hurst,
            variance,
        })
    }

    pub fn fgn(hurst: f64, variance: f64) -> Result<Self> {
        Self::new(ProcessKind::Fgn, hurst, variance)
    }

    pub fn farima(hurst: f64, variance: f64) -> Result<Self> {
        Self::new(ProcessKind::Farima, hurst, variance)
    }

    pub fn autocorrelation(&self, k: u64) -> f64 {
        match self.kind {
            ProcessKind::Fgn => super::fgn_autocorrelation(self.hurst, k),
            ProcessKind::Farima => super::farima_autocorrelation(self.hurst, k),
        }
    }

    /// `rho(0..=max_lag)`.
    pub fn autocorrelations(&self, max_lag: usize) -> Vec<f64> {
        match self.kind {
            ProcessKind::Fgn => fgn_autocorrelations(self.hurst, max_lag),
            ProcessKind::Farima => farima_autocorrelations(self.hurst, max_lag),
        }
    }

    /// `gamma(0..=max_lag) = D rho(k)`.
    pub fn autocovariances(&self, max_lag: usize) -> Vec<f64> {
        let d = self.variance;
        self.autocorrelations(max_lag)
            .into_iter()
            .map(|r| d * r)
            .collect()
    }

    /// Leading power law `gamma(k) ~ A k^{2H-2}` with its first correction order.
    pub fn asymptotic_acv(&self) -> AsymptoticAcv {
        let h = self.hurst.value();
        let amplitude = match self.kind {
            ProcessKind::Fgn => h * (2.0 * h - 1.0) * self.variance,
            ProcessKind::Farima => gamma(1.5 - h) / gamma(h - 0.5) * self.variance,
        };
        AsymptoticAcv {
            amplitude,
            exponent: 2.0 * h - 2.0,
            correction_order: 2.0,
        }
    }
}

impl fmt::Display for ProcessSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}(H={}, D={})",
            self.kind.as_str(),
            self.hurst,
            self.variance
        )
    }
}

/// `gamma(k) = amplitude * k^exponent * (1 + O(k^-correction_order))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticAcv {
    pub amplitude: f64,
    pub exponent: f64,
    pub correction_order: f64,
}

impl AsymptoticAcv {
    pub fn new(amplitude: f64, exponent: f64, correction_order: f64) -> Result<Self> {
        if !(exponent > -1.0 && exponent < 0.0) {
            return Err(Error::invalid(
                "exponent",
                format!("{exponent} is outside (-1, 0)"),
            ));
        }
        Ok(AsymptoticAcv {
            amplitude,
            exponent,
            correction_order,
        })
    }

    /// Hurst exponent implied by the decay, `H = 1 + exponent / 2`.
    pub fn hurst(&self) -> f64 {
        1.0 + 0.5 * self.exponent
    }

    pub fn eval(&self, k: f64) -> f64 {
        self.amplitude * k.powf(self.exponent)
    }
}

/// Where a sample path came from.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SeriesMeta {
    pub spec: Option<ProcessSpec>,
    pub seed: Option<SeedSpec>,
    pub transform: Option<DiscretizationSpec>,
}

/// A finite, real-valued sample path.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<T: Real = f64> {
    values: Vec<T>,
    pub meta: SeriesMeta,
}

impl<T: Real> Series<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        Self::with_meta(values, SeriesMeta::default())
    }

    pub fn with_meta(values: Vec<T>, meta: SeriesMeta) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "a series needs at least 2 values, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(
                "series",
                format!("value at index {i} is not finite"),
            ));
        }
        Ok(Series { values, meta })
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Replace the values, keeping the metadata. Callers guarantee finiteness.
    pub(crate) fn map_values(&self, f: impl Fn(T) -> T) -> Series<T> {
        Series {
            values: self.values.iter().map(|&v| f(v)).collect(),
            meta: self.meta,
        }
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().map(|v| v.as_f64()).sum::<f64>() / self.values.len() as f64
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.as_f64()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hurst_bounds_are_open() {
        assert!(HurstExponent::new(0.5).is_err());
        assert!(HurstExponent::new(1.0).is_err());
        assert!(HurstExponent::new(f64::NAN).is_err());
        assert_eq!(HurstExponent::new(0.7).unwrap().d(), 0.7 - 0.5);
    }

    #[test]
    fn process_spec_validates_variance() {
        assert!(ProcessSpec::fgn(0.7, 0.0).is_err());
        assert!(ProcessSpec::fgn(0.7, -1.0).is_err());
        assert!(ProcessSpec::farima(0.7, f64::INFINITY).is_err());
        assert!(ProcessSpec::farima(0.7, 2.0).is_ok());
    }

    #[test]
    fn series_rejects_short_and_non_finite() {
        assert!(Series::new(vec![1.0_f64]).is_err());
        assert!(Series::new(vec![1.0_f64, f64::NAN]).is_err());
        assert!(Series::new(vec![1.0_f32, 2.0]).is_ok());
    }

    #[test]
    fn asymptotic_amplitudes() {
        let fgn = ProcessSpec::fgn(0.7, 2.0).unwrap().asymptotic_acv();
        assert!((fgn.amplitude - 0.7 * 0.4 * 2.0).abs() < 1e-15);
        assert!((fgn.hurst() - 0.7).abs() < 1e-15);
        assert!(AsymptoticAcv::new(1.0, 0.1, 2.0).is_err());
    }
}
