use std::f64::consts::PI;

use serde::Serialize;

use super::moments::discretized_variance;
use crate::discretize::DiscretizationSpec;
use crate::error::{Error, Result};
use crate::lmcore::{elliptic_theta2, log_gamma, THETA_RELATIVE_TOLERANCE};

/// Bin sums stop once the remaining terms are below this fraction of the
/// absolute sum of the retained ones.
pub const BIN_SUM_TOLERANCE: f64 = 1e-15;

/// `sup_x |h_n(x)| exp(-x^2/4)` over all `n` for orthonormal Hermite
/// polynomials (Cramer's inequality).
const CRAMER_BOUND: f64 = 1.086435;

/// Odd Hermite coefficients `g_1, g_3, ...` of a transform applied to a
/// centred Gaussian of variance `D`, with respect to the orthonormal
/// polynomials `He_j / sqrt(j!)` of the standardised variable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HermiteCoefficients {
    pub variance: f64,
    /// `None` for the identity (no transform).
    pub transform: Option<DiscretizationSpec>,
    /// `(j, g_j)` for odd `j` in increasing order.
    pub coeffs: Vec<(usize, f64)>,
    /// Variance of the transformed variable, the limit of `sum g_j^2`.
    pub total_variance: f64,
}

impl HermiteCoefficients {
    /// The identity map: `g_1 = sqrt(D)`, nothing else.
    pub fn identity(variance: f64) -> Result<Self> {
        check_positive("variance", variance)?;
        Ok(HermiteCoefficients {
            variance,
            transform: None,
            coeffs: vec![(1, variance.sqrt())],
            total_variance: variance,
        })
    }

    /// `g_j`; zero for even `j` and for indices beyond the stored range of the identity.
    pub fn get(&self, j: usize) -> Option<f64> {
        if j % 2 == 0 {
            return Some(0.0);
        }
        match self.coeffs.binary_search_by_key(&j, |c| c.0) {
            Ok(i) => Some(self.coeffs[i].1),
            Err(_) if self.transform.is_none() => Some(0.0),
            Err(_) => None,
        }
    }

    pub fn g1(&self) -> f64 {
        self.coeffs[0].1
    }

    pub fn max_index(&self) -> usize {
        self.coeffs.last().map(|c| c.0).unwrap_or(0)
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.coeffs.iter().map(|c| c.1 * c.1).sum()
    }

    /// `total_variance - sum_{j <= J} g_j^2`, clamped at zero.
    pub fn missing_variance(&self) -> f64 {
        (self.total_variance - self.sum_of_squares()).max(0.0)
    }

    /// Running sums of `g_j^2`.
    pub fn partial_sums(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .scan(0.0, |acc, c| {
                *acc += c.1 * c.1;
                Some(*acc)
            })
            .collect()
    }

    /// Same transform with coefficients up to `max_j`.
    pub fn extended(&self, max_j: usize) -> Result<Self> {
        match self.transform {
            None => Self::identity(self.variance),
            Some(t) => hermite_coefficients(&t, self.variance, max_j),
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

/// `g_1 = sqrt(D) theta_2(0, e^{-1/(2 chi)}) / sqrt(2 pi chi)`.
pub fn g1(chi: f64, variance: f64) -> Result<f64> {
    check_positive("chi", chi)?;
    check_positive("variance", variance)?;
    let theta = elliptic_theta2((-0.5 / chi).exp())?;
    Ok(variance.sqrt() * theta / (2.0 * PI * chi).sqrt())
}

/// Third coefficient from the two theta-type sums over odd integers.
pub fn g3(chi: f64, variance: f64) -> Result<f64> {
    check_positive("chi", chi)?;
    check_positive("variance", variance)?;
    let mut s0 = 0.0;
    let mut s2 = 0.0;
    let mut k = 0.0_f64;
    loop {
        let o = 2.0 * k + 1.0;
        let e = (-o * o / (8.0 * chi)).exp();
        s0 += e;
        s2 += o * o * e;
        if e == 0.0
            || (e < THETA_RELATIVE_TOLERANCE * s0 && o * o * e < THETA_RELATIVE_TOLERANCE * s2)
        {
            break;
        }
        k += 1.0;
    }
    let a = -s0 / (3.0 * PI * chi).sqrt();
    let b = s2 / (48.0 * PI * chi.powi(3)).sqrt();
    Ok(variance.sqrt() * (a + b))
}

/// Coefficient `g_j` (odd `j`) of the sign transform.
pub fn sign_coefficient(j: usize) -> f64 {
    if j % 2 == 0 {
        return 0.0;
    }
    let i = (j - 1) / 2;
    let log_mag = (i as f64 + 0.5) * std::f64::consts::LN_2
        + log_gamma(i as f64 + 0.5).expect("positive argument")
        - PI.ln()
        - 0.5 * log_gamma(j as f64 + 1.0).expect("positive argument");
    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
    sign * log_mag.exp()
}

/// Odd coefficients `g_1 .. g_{max_j}` of a discretization.
///
/// For the round-off each coefficient telescopes to a sum over the bin edges
/// `z_k = (k + 1/2) / sqrt(chi)`:
/// `g_j = (2 delta / sqrt(j)) sum_k h_{j-1}(z_k) phi(z_k)`.
pub fn hermite_coefficients(
    spec: &DiscretizationSpec,
    variance: f64,
    max_j: usize,
) -> Result<HermiteCoefficients> {
    check_positive("variance", variance)?;
    if max_j % 2 == 0 {
        return Err(Error::invalid(
            "max_j",
            format!("{max_j} must be odd and >= 1"),
        ));
    }
    match *spec {
        DiscretizationSpec::Sign => Ok(HermiteCoefficients {
            variance,
            transform: Some(*spec),
            coeffs: (1..=max_j)
                .step_by(2)
                .map(|j| (j, sign_coefficient(j)))
                .collect(),
            total_variance: 1.0,
        }),
        DiscretizationSpec::Round { delta } => {
            let chi = variance / (delta * delta);
            let sums = bin_edge_sums(chi, max_j);
            let coeffs = (1..=max_j)
                .step_by(2)
                .map(|j| (j, 2.0 * delta / (j as f64).sqrt() * sums[j - 1]))
                .collect();
            Ok(HermiteCoefficients {
                variance,
                transform: Some(*spec),
                coeffs,
                total_variance: discretized_variance(chi, variance)?,
            })
        }
    }
}

/// `sum_k h_n(z_k) phi(z_k)` for `n = 0..max_j`, with even `n` the only ones used.
fn bin_edge_sums(chi: f64, max_j: usize) -> Vec<f64> {
    let step = 1.0 / chi.sqrt();
    let mut sums = vec![0.0; max_j];
    let mut abs_sums = vec![0.0; max_j];
    let mut h = vec![0.0; max_j];
    let norm = 1.0 / (2.0 * PI).sqrt();
    let mut k = 0.0_f64;
    loop {
        let z = (k + 0.5) * step;
        let phi = norm * (-0.5 * z * z).exp();
        h[0] = 1.0;
        if max_j > 1 {
            h[1] = z;
        }
        for n in 1..max_j.saturating_sub(1) {
            h[n + 1] = (z * h[n] - (n as f64).sqrt() * h[n - 1]) / ((n + 1) as f64).sqrt();
        }
        for n in (0..max_j).step_by(2) {
            let t = h[n] * phi;
            sums[n] += t;
            abs_sums[n] += t.abs();
        }
        // Remaining edges: sum_{k' > k} e^{-z'^2/4} <= e^{-z^2/4} (1 + 2 sqrt(chi) / z)
        let zn = z + step;
        let tail = CRAMER_BOUND * norm * (-0.25 * zn * zn).exp() * (1.0 + 2.0 / (zn * step));
        let scale = abs_sums.iter().step_by(2).cloned().fold(f64::MAX, f64::min);
        if tail == 0.0 || tail < BIN_SUM_TOLERANCE * scale {
            break;
        }
        k += 1.0;
    }
    sums
}
