use std::f64::consts::PI;

use serde::Serialize;

use super::hermite::{g1, hermite_coefficients, HermiteCoefficients};
use super::moments::discretized_variance;
use crate::discretize::DiscretizationSpec;
use crate::error::{Error, Result};
use crate::lmcore::{HurstExponent, ProcessSpec};

/// Hermite order used when a full transformed autocovariance is needed.
pub const ACV_HERMITE_ORDER: usize = 81;

/// A truncated series together with a bound on what was left out.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TruncatedSum {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

fn check_rho(rho: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::invalid("rho", format!("{rho} is outside [-1, 1]")))
    }
}

/// `Cov[g(X), g(Y)] = sum_j g_j^2 rho^j` for a standard bivariate pair with
/// correlation `rho`, summed over the stored coefficients.
pub fn transformed_acv(rho: f64, coeffs: &HermiteCoefficients) -> Result<TruncatedSum> {
    check_rho(rho)?;
    let mut value = 0.0;
    for &(j, g) in &coeffs.coeffs {
        value += g * g * rho.powi(j as i32);
    }
    let next = coeffs.max_index() as i32 + 2;
    let tail_bound = if coeffs.transform.is_none() {
        0.0
    } else {
        coeffs.missing_variance() * rho.abs().powi(next)
    };
    Ok(TruncatedSum {
        value,
        tail_bound,
        terms: coeffs.coeffs.len(),
    })
}

/// Autocovariance of the sign process, `(2 / pi) arcsin rho`.
pub fn sign_acv(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(2.0 / PI * rho.asin())
}

/// Ratios of the transformed to the original autocovariance at large lags.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AcvScaling {
    /// `gamma_d(k) / gamma(k) -> g_1^2 / D`.
    pub covariance: f64,
    /// `rho_d(k) / rho(k) -> g_1^2 / D_d`.
    pub correlation: f64,
}

/// Large-lag scaling of the rounded process; scale free in `D`.
pub fn acv_scaling_factor(chi: f64) -> Result<AcvScaling> {
    let g = g1(chi, 1.0)?;
    let dd = discretized_variance(chi, 1.0)?;
    Ok(AcvScaling {
        covariance: g * g,
        correlation: g * g / dd,
    })
}

/// Large-lag scaling of the sign process of a variance-`D` input.
pub fn sign_acv_scaling(variance: f64) -> Result<AcvScaling> {
    if !(variance > 0.0) {
        return Err(Error::invalid(
            "variance",
            format!("{variance} must be positive"),
        ));
    }
    Ok(AcvScaling {
        covariance: 2.0 / (PI * variance),
        correlation: 2.0 / PI,
    })
}

/// Scaling for any transform (`None` is the identity).
pub fn scaling_for(transform: Option<&DiscretizationSpec>, variance: f64) -> Result<AcvScaling> {
    match transform {
        None => Ok(AcvScaling {
            covariance: 1.0,
            correlation: 1.0,
        }),
        Some(DiscretizationSpec::Sign) => sign_acv_scaling(variance),
        Some(t) => acv_scaling_factor(t.chi(variance).expect("round has a grid")),
    }
}

/// Leading finite-sample bias of the divide-by-`n` sample autocovariance,
/// `-lambda n^{2H-2} / (H (2H - 1))`, where `lambda` is the amplitude of
/// `gamma(k) ~ lambda k^{2H-2}`.
pub fn hosking_bias(lambda: f64, h: HurstExponent, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid("n", format!("{n} is below 2")));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid(
            "lambda",
            format!("{lambda} must be positive"),
        ));
    }
    let h = h.value();
    Ok(-lambda * (n as f64).powf(2.0 * h - 2.0) / (h * (2.0 * h - 1.0)))
}

/// Exact autocovariance of a process observed through an optional transform.
#[derive(Clone, Debug)]
pub struct TransformedProcess {
    pub process: ProcessSpec,
    pub transform: Option<DiscretizationSpec>,
    coeffs: HermiteCoefficients,
}

impl TransformedProcess {
    pub fn new(process: ProcessSpec, transform: Option<DiscretizationSpec>) -> Result<Self> {
        let coeffs = match &transform {
            None => HermiteCoefficients::identity(process.variance)?,
            Some(t) => hermite_coefficients(t, process.variance, ACV_HERMITE_ORDER)?,
        };
        Ok(TransformedProcess {
            process,
            transform,
            coeffs,
        })
    }

    pub fn coefficients(&self) -> &HermiteCoefficients {
        &self.coeffs
    }

    pub fn variance(&self) -> f64 {
        self.coeffs.total_variance
    }

    /// Transformed autocovariance at correlation `rho`.
    pub fn acv_at_correlation(&self, rho: f64) -> f64 {
        match self.transform {
            Some(DiscretizationSpec::Sign) => 2.0 / PI * rho.clamp(-1.0, 1.0).asin(),
            _ if rho == 1.0 => self.coeffs.total_variance,
            _ => {
                transformed_acv(rho, &self.coeffs)
                    .expect("correlations lie in [-1, 1]")
                    .value
            }
        }
    }

    pub fn acv(&self, k: u64) -> f64 {
        if k == 0 {
            self.variance()
        } else {
            self.acv_at_correlation(self.process.autocorrelation(k))
        }
    }

    /// `gamma_d(0..=max_lag)`.
    pub fn acvs(&self, max_lag: usize) -> Vec<f64> {
        let rho = self.process.autocorrelations(max_lag);
        let mut out: Vec<f64> = rho.iter().map(|&r| self.acv_at_correlation(r)).collect();
        out[0] = self.variance();
        out
    }

    /// Amplitude `lambda_d` of `gamma_d(k) ~ lambda_d k^{2H-2}`.
    pub fn asymptotic_amplitude(&self) -> Result<f64> {
        let s = scaling_for(self.transform.as_ref(), self.process.variance)?;
        Ok(s.covariance * self.process.asymptotic_acv().amplitude)
    }

    /// Expected sample autocovariance at lag `k` from a path of length `n`,
    /// using the leading bias.
    pub fn expected_sample_acv(&self, k: u64, n: usize) -> Result<f64> {
        Ok(self.acv(k) + hosking_bias(self.asymptotic_amplitude()?, self.process.hurst, n)?)
    }
}
