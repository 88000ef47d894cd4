use std::f64::consts::PI;

use serde::Serialize;

use super::hermite::HermiteCoefficients;
use crate::error::{Error, Result};
use crate::lmcore::{gamma, riemann_zeta, HurstExponent, ProcessKind, ProcessSpec};

/// Relative size of the last `j` term kept in the `c0` double series.
pub const C0_TOLERANCE: f64 = 1e-12;
/// Highest `i` in the Cauchy-product coefficients of `(L / D)^{2j+1}`.
pub const C0_MAX_I: usize = 60;
/// Highest `j` (Hermite index `2j + 1`) in the `c0` series.
pub const C0_MAX_J: usize = 60;

const REGION_EPS: f64 = 1e-12;

/// Expansion `L(k) = b0 + b1 k^{-beta1} + ...` of the slowly varying part of
/// `gamma(k) = k^{2H-2} L(k)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AcvExpansion {
    pub variance: f64,
    pub hurst: HurstExponent,
    pub b0: f64,
    pub b1: f64,
    pub beta1: f64,
    /// `L(k) / D = sum_i a_i k^{-2i}` when the coefficients are known.
    pub series: Option<Vec<f64>>,
    /// Whether `series` converges to `L(k)/D` for every `k >= 1` (otherwise
    /// it is only asymptotic and truncated).
    pub series_exact: bool,
    /// `rho(1) = L(1) / D`.
    pub rho1: f64,
}

impl AcvExpansion {
    pub fn for_process(spec: &ProcessSpec) -> Self {
        match spec.kind {
            ProcessKind::Fgn => Self::fgn(spec.hurst, spec.variance),
            ProcessKind::Farima => Self::farima(spec.hurst, spec.variance),
        }
    }

    /// `L(k) / D = sum_{i>=0} binom(2H, 2i + 2) k^{-2i}`.
    pub fn fgn(hurst: HurstExponent, variance: f64) -> Self {
        let a = 2.0 * hurst.value();
        let mut series = Vec::with_capacity(C0_MAX_I + 1);
        // binom(a, n) built incrementally
        let mut c = 1.0;
        for n in 0..(2 * C0_MAX_I + 3) {
            if n >= 2 && n % 2 == 0 {
                series.push(c);
            }
            c *= (a - n as f64) / (n as f64 + 1.0);
        }
        series.truncate(C0_MAX_I + 1);
        AcvExpansion {
            variance,
            hurst,
            b0: variance * series[0],
            b1: variance * series[1],
            beta1: 2.0,
            series: Some(series),
            series_exact: true,
            rho1: 2f64.powf(a - 1.0) - 1.0,
        }
    }

    /// First two terms of the gamma-ratio expansion.
    pub fn farima(hurst: HurstExponent, variance: f64) -> Self {
        let h = hurst.value();
        let a0 = gamma(1.5 - h) / gamma(h - 0.5);
        let a1 = -a0 * (4.0 * h.powi(3) - 12.0 * h * h + 11.0 * h - 3.0) / 12.0;
        AcvExpansion {
            variance,
            hurst,
            b0: variance * a0,
            b1: variance * a1,
            beta1: 2.0,
            series: Some(vec![a0, a1]),
            series_exact: false,
            rho1: (h - 0.5) / (1.5 - h),
        }
    }

    /// Only the first two terms, no series.
    pub fn general(
        hurst: HurstExponent,
        variance: f64,
        b0: f64,
        b1: f64,
        beta1: f64,
    ) -> Result<Self> {
        if !(b0 > 0.0) {
            return Err(Error::invalid("b0", format!("{b0} must be positive")));
        }
        if !(beta1 > 0.0) {
            return Err(Error::invalid("beta1", format!("{beta1} must be positive")));
        }
        Ok(AcvExpansion {
            variance,
            hurst,
            b0,
            b1,
            beta1,
            series: None,
            series_exact: false,
            rho1: f64::NAN,
        })
    }
}

/// Coefficient of `|omega|^{1-2H}` in the spectral density of `k^{2H-2}`.
pub fn c_phi(h: f64) -> f64 {
    gamma(2.0 * h - 1.0) * (PI * h).sin() / PI
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SecondOrder {
    /// A constant; its value is known only when `L` has a convergent expansion.
    Constant { c0: Option<f64> },
    /// `coefficient * |omega|^exponent`.
    Power { coefficient: f64, exponent: f64 },
    /// `coefficient * ln(1 / |omega|)`.
    Log { coefficient: f64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ExpansionDiagnostics {
    pub hermite_terms: usize,
    pub zeta_terms: usize,
    pub last_term: f64,
}

/// `phi(omega) = A |omega|^{1-2H} + g(omega) + o(g(omega))` as `omega -> 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralExpansion {
    pub leading_amplitude: f64,
    pub leading_exponent: f64,
    pub second_order: SecondOrder,
    pub diagnostics: ExpansionDiagnostics,
}

impl SpectralExpansion {
    pub fn leading(&self, omega: f64) -> f64 {
        self.leading_amplitude * omega.abs().powf(self.leading_exponent)
    }

    /// Second-order term at `omega`; `None` for an unknown constant.
    pub fn second(&self, omega: f64) -> Option<f64> {
        match self.second_order {
            SecondOrder::Constant { c0 } => c0,
            SecondOrder::Power {
                coefficient,
                exponent,
            } => Some(coefficient * omega.abs().powf(exponent)),
            SecondOrder::Log { coefficient } => Some(-coefficient * omega.abs().ln()),
        }
    }

    pub fn eval(&self, omega: f64) -> Option<f64> {
        self.second(omega).map(|s| self.leading(omega) + s)
    }
}

/// Low-frequency expansion of the spectral density of the transformed process
/// with Hermite coefficients `coeffs` (use [`HermiteCoefficients::identity`]
/// for the untransformed process).
pub fn spectral_expansion(
    coeffs: &HermiteCoefficients,
    acv: &AcvExpansion,
) -> Result<SpectralExpansion> {
    let h = acv.hurst.value();
    let d = acv.variance;
    let g1 = coeffs.g1();
    let g3 = coeffs.get(3).unwrap_or(0.0);
    let s1 = g1 * g1 / d;
    let leading_amplitude = s1 * c_phi(h) * acv.b0;
    let leading_exponent = 1.0 - 2.0 * h;

    let beta1 = acv.beta1;
    let five_sixths: f64 = 5.0 / 6.0;
    let t2 = 0.5 * (1.0 + beta1);
    let t3 = 1.0 - 0.25 * beta1;
    let cube = g3 * g3 * (acv.b0 / d).powi(3);
    let near = |a: f64, b: f64| (a - b).abs() < REGION_EPS;

    let mut diagnostics = ExpansionDiagnostics::default();
    let second_order = if h < five_sixths.min(t2) - REGION_EPS {
        let c0 = match &acv.series {
            Some(series) if acv.series_exact => {
                let (c0, diag) = constant_term(coeffs, acv, series)?;
                diagnostics = diag;
                Some(c0)
            }
            _ => None,
        };
        SecondOrder::Constant { c0 }
    } else if h > five_sixths.max(t3) + REGION_EPS {
        SecondOrder::Power {
            coefficient: cube * gamma(6.0 * h - 5.0) * (3.0 * h * PI).sin() / PI,
            exponent: 5.0 - 6.0 * h,
        }
    } else if h > t2 + REGION_EPS && h < t3 - REGION_EPS {
        SecondOrder::Power {
            coefficient: s1
                * acv.b1
                * gamma(2.0 * h - 1.0 - beta1)
                * (0.5 * (2.0 * h - beta1) * PI).sin()
                / PI,
            exponent: 1.0 - 2.0 * h + beta1,
        }
    } else if near(h, t2) && near(h, five_sixths) {
        SecondOrder::Log {
            coefficient: (s1 * acv.b1 + cube) / PI,
        }
    } else if near(h, t2) && t2 < five_sixths {
        SecondOrder::Log {
            coefficient: s1 * acv.b1 / PI,
        }
    } else if near(h, five_sixths) && five_sixths < t2 {
        SecondOrder::Log {
            coefficient: cube / PI,
        }
    } else {
        return Err(Error::UnsupportedRegion(format!(
            "H = {h}, beta1 = {beta1} is not covered by the expansion"
        )));
    };
    Ok(SpectralExpansion {
        leading_amplitude,
        leading_exponent,
        second_order,
        diagnostics,
    })
}

/// Convenience wrapper for the rounded fGn of variance `D` at grid fineness `chi`.
pub fn spectral_expansion_fgn(
    h: HurstExponent,
    chi: f64,
    variance: f64,
) -> Result<SpectralExpansion> {
    let spec = crate::discretize::DiscretizationSpec::from_chi(chi, variance)?;
    let coeffs = super::hermite::hermite_coefficients(&spec, variance, 2 * C0_MAX_J + 1)?;
    spectral_expansion(&coeffs, &AcvExpansion::fgn(h, variance))
}

/// `c0 = D_d / (2 pi) + (1/pi) sum_j g_{2j+1}^2 S_j` with
/// `S_j = sum_i btilde_{j,i} zeta((2j+1)(2-2H) + 2i)` rearranged as
/// `rho(1)^{2j+1} + sum_i btilde_{j,i} (zeta(.) - 1)`, which converges like `4^{-i}`.
fn constant_term(
    coeffs: &HermiteCoefficients,
    acv: &AcvExpansion,
    series: &[f64],
) -> Result<(f64, ExpansionDiagnostics)> {
    let h = acv.hurst.value();
    let coeffs = if coeffs.transform.is_some() && coeffs.max_index() < 2 * C0_MAX_J + 1 {
        coeffs.extended(2 * C0_MAX_J + 1)?
    } else {
        coeffs.clone()
    };
    let mut a = vec![0.0; C0_MAX_I + 1];
    let len = series.len().min(C0_MAX_I + 1);
    a[..len].copy_from_slice(&series[..len]);
    let a2 = cauchy(&a, &a);
    let mut power = a.clone();
    let mut c0 = coeffs.total_variance / (2.0 * PI);
    let mut diag = ExpansionDiagnostics::default();
    let mut small_in_a_row = 0;
    for j in 0..=C0_MAX_J {
        let idx = 2 * j + 1;
        let g = match coeffs.get(idx) {
            Some(g) => g,
            None => break,
        };
        if j > 0 {
            power = cauchy(&power, &a2);
        }
        let alpha = idx as f64 * (2.0 - 2.0 * h);
        let mut s = acv.rho1.powi(idx as i32);
        let mut used = 0;
        for (i, &p) in power.iter().enumerate() {
            let z = riemann_zeta(alpha + 2.0 * i as f64)? - 1.0;
            let t = p * z;
            s += t;
            used = i + 1;
            if t.abs() < 1e-17 * s.abs() && i > 2 {
                break;
            }
        }
        let term = g * g * s / PI;
        c0 += term;
        diag.hermite_terms = j + 1;
        diag.zeta_terms = diag.zeta_terms.max(used);
        diag.last_term = term;
        if g == 0.0 && coeffs.transform.is_none() {
            break;
        }
        if term.abs() < C0_TOLERANCE * c0.abs() {
            small_in_a_row += 1;
            if small_in_a_row >= 2 {
                break;
            }
        } else {
            small_in_a_row = 0;
        }
    }
    Ok((c0, diag))
}

fn cauchy(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        if x[i] == 0.0 {
            continue;
        }
        for j in 0..n - i {
            out[i + j] += x[i] * y[j];
        }
    }
    out
}

/// `amplitude * k^{-decay}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerTerm {
    pub amplitude: f64,
    pub decay: f64,
}

/// Power-law terms of `gamma_d(k) = sum_j g_j^2 rho(k)^j` with decay at most
/// `max_decay`, from the expansion of `rho(k)`.
pub fn asymptotic_power_terms(
    coeffs: &HermiteCoefficients,
    acv: &AcvExpansion,
    max_decay: f64,
) -> Vec<PowerTerm> {
    let h = acv.hurst.value();
    let series = match &acv.series {
        Some(s) => s.clone(),
        None => vec![acv.b0 / acv.variance],
    };
    let known = if acv.series_exact {
        C0_MAX_I + 1
    } else {
        series.len()
    };
    let mut a = vec![0.0; C0_MAX_I + 1];
    let len = series.len().min(C0_MAX_I + 1);
    a[..len].copy_from_slice(&series[..len]);
    let a2 = cauchy(&a, &a);
    let mut power = a.clone();
    let mut out = Vec::new();
    let mut j = 0usize;
    loop {
        let idx = 2 * j + 1;
        let alpha = idx as f64 * (2.0 - 2.0 * h);
        if alpha > max_decay {
            break;
        }
        if j > 0 {
            power = cauchy(&power, &a2);
        }
        let g = match coeffs.get(idx) {
            Some(g) => g,
            None => break,
        };
        if g != 0.0 {
            for (i, &p) in power.iter().enumerate().take(known) {
                let decay = alpha + 2.0 * i as f64;
                if decay > max_decay {
                    break;
                }
                out.push(PowerTerm {
                    amplitude: g * g * p,
                    decay,
                });
            }
        }
        j += 1;
    }
    out
}

/// Exponents this close to a positive integer use the integer form.
const INTEGER_SNAP: f64 = 1e-9;

/// `sum_{k>=1} k^{-s} cos(k omega)` for `0 < omega < 2 pi`, the real part of
/// the polylogarithm `Li_s(e^{i omega})`.
pub fn cosine_power_sum(s: f64, omega: f64) -> Result<f64> {
    if !(omega > 0.0 && omega < 2.0 * PI) {
        return Err(Error::invalid(
            "omega",
            format!("{omega} is outside (0, 2 pi)"),
        ));
    }
    if !s.is_finite() {
        return Err(Error::invalid("s", format!("{s} is not finite")));
    }
    let nearest = s.round();
    let integer = nearest >= 1.0 && (s - nearest).abs() < INTEGER_SNAP;
    if integer && nearest == 1.0 {
        return Ok(-(2.0 * (0.5 * omega).sin()).ln());
    }
    if integer && nearest == 2.0 {
        return Ok(PI * PI / 6.0 - PI * omega / 2.0 + omega * omega / 4.0);
    }
    let (s, mut total, skip) = if integer {
        // Li_n(e^mu) = mu^{n-1} / (n-1)! (H_{n-1} - ln(-mu)) + sum_{k != n-1} zeta(n-k) mu^k / k!
        let n = nearest as usize;
        let harmonic: f64 = (1..n).map(|k| 1.0 / k as f64).sum();
        let fact: f64 = (1..n).map(|k| k as f64).product();
        let scale = omega.powi(n as i32 - 1) / fact;
        // i^{n-1}
        let (re, im) = match (n - 1) % 4 {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
        let head = scale * (re * (harmonic - omega.ln()) - im * 0.5 * PI);
        (
            nearest,
            head,
            if (n - 1) % 2 == 0 {
                Some((n - 1) / 2)
            } else {
                None
            },
        )
    } else {
        // Gamma(1-s) sin(pi s / 2) omega^{s-1} + sum_m (-1)^m zeta(s-2m) omega^{2m} / (2m)!
        (
            s,
            gamma(1.0 - s) * (0.5 * PI * s).sin() * omega.powf(s - 1.0),
            None,
        )
    };
    let mut sum = 0.0;
    let mut fact = 1.0;
    let w2 = omega * omega;
    let mut wpow = 1.0;
    for m in 0..200 {
        if m > 0 {
            let k = 2.0 * m as f64;
            fact *= (k - 1.0) * k;
            wpow *= w2;
        }
        if skip == Some(m) {
            continue;
        }
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let z = riemann_zeta(s - 2.0 * m as f64)?;
        let t = sign * z * wpow / fact;
        sum += t;
        if m > 2 && t.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    total += sum;
    Ok(total)
}

/// Result of [`spectral_density_numeric`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NumericDensity {
    pub value: f64,
    pub tail_estimate: f64,
    pub lags: u64,
}

/// Largest number of residual lags summed before giving up.
pub const NUMERIC_MAX_LAGS: u64 = 1 << 22;

/// `phi(omega) = gamma(0) / (2 pi) + (1/pi) sum_{k>=1} gamma(k) cos(k omega)`.
///
/// The terms in `asymptote` are removed from `gamma` and summed in closed
/// form; the remainder is summed directly, doubling the number of lags until
/// the estimated tail is below `tolerance * |phi|`.
pub fn spectral_density_numeric<F>(
    acv: F,
    asymptote: &[PowerTerm],
    omega: f64,
    tolerance: f64,
) -> Result<NumericDensity>
where
    F: Fn(u64) -> f64,
{
    if !(omega > 0.0 && omega <= PI) {
        return Err(Error::invalid(
            "omega",
            format!("{omega} is outside (0, pi]"),
        ));
    }
    if !(tolerance > 0.0) {
        return Err(Error::invalid(
            "tolerance",
            format!("{tolerance} must be positive"),
        ));
    }
    let mut closed = 0.0;
    for t in asymptote {
        closed += t.amplitude * cosine_power_sum(t.decay, omega)?;
    }
    let residual = |k: u64| {
        let kf = k as f64;
        acv(k)
            - asymptote
                .iter()
                .map(|t| t.amplitude * kf.powf(-t.decay))
                .sum::<f64>()
    };
    let sin_half = (0.5 * omega).sin();
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut done = 0u64;
    let mut target = 1024u64;
    let mut r_half = 0.0;
    loop {
        let mut r_last = 0.0;
        for k in done + 1..=target {
            let r = residual(k);
            // Kahan summation keeps the many small contributions honest
            let y = r * (k as f64 * omega).cos() - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            if k == target / 2 {
                r_half = r;
            }
            r_last = r;
        }
        done = target;
        let value = acv(0) / (2.0 * PI) + (closed + sum) / PI;
        let dirichlet = r_last.abs() / sin_half;
        let absolute = if r_half != 0.0 && r_last != 0.0 {
            let p = (r_half.abs() / r_last.abs()).ln() / std::f64::consts::LN_2;
            if p > 1.0 {
                r_last.abs() * target as f64 / (p - 1.0)
            } else {
                f64::INFINITY
            }
        } else {
            r_last.abs()
        };
        let tail = dirichlet.min(absolute) / PI;
        if tail <= tolerance * value.abs() {
            return Ok(NumericDensity {
                value,
                tail_estimate: tail,
                lags: done,
            });
        }
        if target >= NUMERIC_MAX_LAGS {
            return Err(Error::NonConvergence {
                tail,
                tolerance: tolerance * value.abs(),
                terms: done,
            });
        }
        target *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::DiscretizationSpec;
    use crate::theory::acv::TransformedProcess;
    use crate::theory::hermite::hermite_coefficients;
    use approx::assert_relative_eq;

    fn hurst(h: f64) -> HurstExponent {
        HurstExponent::new(h).unwrap()
    }

    /// Hurwitz zeta by Euler-Maclaurin, test oracle only.
    fn hurwitz(s: f64, a: f64) -> f64 {
        let n = 20usize;
        let mut sum: f64 = (0..n).map(|k| (k as f64 + a).powf(-s)).sum();
        let x = n as f64 + a;
        sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
        // Bernoulli corrections B_2k / (2k)! * s(s+1)...(s+2k-2) x^{-s-2k+1}
        let b = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0];
        let mut fact = 1.0;
        let mut rising = s;
        for (k, bk) in b.iter().enumerate() {
            let k2 = 2 * (k + 1);
            fact *= ((k2 - 1) * k2) as f64;
            sum += bk / fact * rising * x.powf(-s - k2 as f64 + 1.0);
            rising *= (s + k2 as f64 - 1.0) * (s + k2 as f64);
        }
        sum
    }

    fn sinai(h: f64, d: f64, omega: f64) -> f64 {
        let s = 2.0 * h + 1.0;
        let cstar = d * (PI * h).sin() * gamma(2.0 * h + 1.0) / (2.0 * PI);
        let x = omega / (2.0 * PI);
        let lattice =
            omega.powf(-s) + (2.0 * PI).powf(-s) * (hurwitz(s, 1.0 + x) + hurwitz(s, 1.0 - x));
        2.0 * cstar * (1.0 - omega.cos()) * lattice
    }

    #[test]
    fn cosine_sums_against_direct() {
        // s > 1: direct summation with a tail correction is accurate enough
        for s in [1.5, 2.7, 3.0, 4.0, 4.2, 5.0, 7.0] {
            for omega in [0.3, 1.0, 2.5, 5.0] {
                let n = 200_000;
                let direct: f64 = (1..=n)
                    .map(|k| (k as f64).powf(-s) * (k as f64 * omega).cos())
                    .sum();
                let v = cosine_power_sum(s, omega).unwrap();
                let bound = 2.0 * (n as f64).powf(-s) / (0.5 * omega).sin() + 1e-13;
                assert!(
                    (v - direct).abs() < bound,
                    "s={s} omega={omega}: {v} vs {direct}"
                );
            }
        }
        assert_relative_eq!(
            cosine_power_sum(1.0, 1.0).unwrap(),
            cosine_power_sum(1.0 + 1e-5, 1.0).unwrap(),
            max_relative = 1e-4
        );
        for n in [3.0, 4.0] {
            let exact = cosine_power_sum(n, 1.0).unwrap();
            assert_relative_eq!(
                cosine_power_sum(n + 3e-10, 1.0).unwrap(),
                exact,
                max_relative = 1e-12
            );
            assert_relative_eq!(
                cosine_power_sum(n + 1e-5, 1.0).unwrap(),
                exact,
                max_relative = 1e-4
            );
        }
        assert!(cosine_power_sum(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn white_noise_is_flat() {
        for omega in [1e-3, 0.5, PI] {
            let v = spectral_density_numeric(|k| if k == 0 { 2.0 } else { 0.0 }, &[], omega, 1e-10)
                .unwrap();
            assert_relative_eq!(v.value, 2.0 / (2.0 * PI), max_relative = 1e-15);
        }
    }

    #[test]
    fn fgn_matches_sinai() {
        for h in [0.6, 0.7, 0.9] {
            let spec = ProcessSpec::fgn(h, 1.0).unwrap();
            let coeffs = HermiteCoefficients::identity(1.0).unwrap();
            let exp = AcvExpansion::fgn(hurst(h), 1.0);
            let terms = asymptotic_power_terms(&coeffs, &exp, 12.0);
            for omega in [1e-2, 0.3, 2.0] {
                let v = spectral_density_numeric(|k| spec.autocorrelation(k), &terms, omega, 1e-12)
                    .unwrap();
                assert_relative_eq!(v.value, sinai(h, 1.0, omega), max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn binomial_zeta_identity() {
        for h in [0.55, 0.7, 0.8, 0.95] {
            let e = AcvExpansion::fgn(hurst(h), 1.0);
            let series = e.series.as_ref().unwrap();
            let mut s0 = e.rho1;
            for (i, a) in series.iter().enumerate() {
                s0 += a * (riemann_zeta(2.0 - 2.0 * h + 2.0 * i as f64).unwrap() - 1.0);
            }
            assert!((s0 + 0.5).abs() < 1e-12, "h={h}: {s0}");
        }
    }

    #[test]
    fn continuous_constant_vanishes() {
        let coeffs = HermiteCoefficients::identity(1.0).unwrap();
        let e = spectral_expansion(&coeffs, &AcvExpansion::fgn(hurst(0.7), 1.0)).unwrap();
        match e.second_order {
            SecondOrder::Constant { c0: Some(c0) } => assert!(c0.abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn branches() {
        let e = spectral_expansion_fgn(hurst(0.9), 0.1, 1.0).unwrap();
        match e.second_order {
            SecondOrder::Power {
                coefficient,
                exponent,
            } => {
                assert!(coefficient > 0.0);
                assert_relative_eq!(exponent, -0.4, max_relative = 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let e = spectral_expansion_fgn(hurst(5.0 / 6.0), 0.1, 1.0).unwrap();
        assert!(matches!(e.second_order, SecondOrder::Log { coefficient } if coefficient > 0.0));
        for h in [0.55, 0.65, 0.7, 0.75, 0.8] {
            let e = spectral_expansion_fgn(hurst(h), 0.1, 1.0).unwrap();
            match e.second_order {
                SecondOrder::Constant { c0: Some(c0) } => assert!(c0 > 0.0, "h={h}"),
                other => panic!("{other:?}"),
            }
        }
        let far = AcvExpansion::farima(hurst(0.7), 1.0);
        let coeffs =
            hermite_coefficients(&DiscretizationSpec::from_chi(0.1, 1.0).unwrap(), 1.0, 41)
                .unwrap();
        let e = spectral_expansion(&coeffs, &far).unwrap();
        assert_eq!(e.second_order, SecondOrder::Constant { c0: None });
    }

    #[test]
    fn unsupported_region() {
        // beta1 = 1/2: (3/4, 7/8) is the third branch, H = 7/8 itself is not covered
        let coeffs = HermiteCoefficients::identity(1.0).unwrap();
        let e = AcvExpansion::general(hurst(0.875), 1.0, 0.5, 0.1, 0.5).unwrap();
        assert!(matches!(
            spectral_expansion(&coeffs, &e),
            Err(Error::UnsupportedRegion(_))
        ));
        let e = AcvExpansion::general(hurst(0.85), 1.0, 0.5, 0.1, 0.5).unwrap();
        match spectral_expansion(&coeffs, &e).unwrap().second_order {
            SecondOrder::Power { exponent, .. } => {
                assert_relative_eq!(exponent, -0.2, epsilon = 1e-12)
            }
            other => panic!("{other:?}"),
        }
        let e = AcvExpansion::general(hurst(0.75), 1.0, 0.5, 0.1, 0.5).unwrap();
        assert!(matches!(
            spectral_expansion(&coeffs, &e).unwrap().second_order,
            SecondOrder::Log { .. }
        ));
    }

    #[test]
    fn density_integrates_to_variance() {
        // 2 int_0^pi phi = gamma(0); omega = pi t^5 tames the pole at zero
        let spec = ProcessSpec::fgn(0.7, 1.0).unwrap();
        let t =
            TransformedProcess::new(spec, Some(DiscretizationSpec::from_chi(0.1, 1.0).unwrap()))
                .unwrap();
        let exp = AcvExpansion::fgn(spec.hurst, 1.0);
        let terms = asymptotic_power_terms(t.coefficients(), &exp, 12.0);
        let f = |u: f64| {
            if u == 0.0 {
                return 0.0;
            }
            let omega = PI * u.powi(5);
            let phi = spectral_density_numeric(|k| t.acv(k), &terms, omega, 1e-12).unwrap();
            phi.value * 5.0 * PI * u.powi(4)
        };
        let steps = 400;
        let h = 1.0 / steps as f64;
        let mut sum = f(0.0) + f(1.0);
        for i in 1..steps {
            sum += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        let integral = sum * h / 3.0;
        assert_relative_eq!(2.0 * integral, t.variance(), max_relative = 1e-6);
    }

    #[test]
    fn discretized_ratio_to_leading_term_tends_to_one() {
        let spec = ProcessSpec::fgn(0.7, 1.0).unwrap();
        let t =
            TransformedProcess::new(spec, Some(DiscretizationSpec::from_chi(0.1, 1.0).unwrap()))
                .unwrap();
        let exp = AcvExpansion::fgn(spec.hurst, 1.0);
        let terms = asymptotic_power_terms(t.coefficients(), &exp, 12.0);
        let e = spectral_expansion(t.coefficients(), &exp).unwrap();
        let mut prev = f64::INFINITY;
        for omega in [1e-1, 1e-2, 1e-3, 1e-4, 1e-5] {
            let v = spectral_density_numeric(|k| t.acv(k), &terms, omega, 1e-10).unwrap();
            let ratio = v.value / e.leading(omega);
            assert!((ratio - 1.0).abs() < prev);
            prev = (ratio - 1.0).abs();
            if omega <= 1e-3 {
                assert_relative_eq!(v.value, e.eval(omega).unwrap(), max_relative = 1e-5);
            }
        }
        // the constant correction still weighs about 1% at omega = 1e-5
        assert!(prev < 2e-2);
    }
}
