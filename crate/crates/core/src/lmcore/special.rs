//! Real special functions on the ranges the rest of the crate needs.
//!
//! `erf`, `erfc` and the Gamma functions delegate to `libm` (a port of the
//! FreeBSD msun routines, accurate to a few ulp). The zeta and theta
//! functions are implemented here.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Terms of the Borwein acceleration used for the Dirichlet eta series.
/// The truncation error is about `(3 + sqrt 8)^-n`, below `1e-30` here.
pub const ZETA_BORWEIN_TERMS: usize = 40;

/// Relative size of the last retained term in theta-type sums.
pub const THETA_RELATIVE_TOLERANCE: f64 = 1e-16;

#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Alias of [`erf`].
#[inline]
pub fn gaussian_error_fn(x: f64) -> f64 {
    libm::erf(x)
}

/// `ln Gamma(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_infinite() {
        return Err(Error::Domain {
            function: "log_gamma",
            arg: x,
            reason: "argument must be positive and finite",
        });
    }
    Ok(libm::lgamma(x))
}

/// `Gamma(x)`; infinite at the poles, `NaN` for `NaN`.
#[inline]
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `theta_2(0, q) = 2 sum_{k>=0} q^{(k+1/2)^2}` for `0 <= q < 1`.
pub fn elliptic_theta2(q: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::Domain {
            function: "elliptic_theta2",
            arg: q,
            reason: "nome must lie in [0, 1)",
        });
    }
    if q == 0.0 {
        return Ok(0.0);
    }
    let ln_q = q.ln();
    let mut sum = 0.0;
    let mut k = 0.0_f64;
    loop {
        let e = k + 0.5;
        let term = (e * e * ln_q).exp();
        sum += term;
        if term < THETA_RELATIVE_TOLERANCE * sum || term == 0.0 {
            break;
        }
        k += 1.0;
    }
    Ok(2.0 * sum)
}

/// Riemann zeta function on the real line, `s != 1`.
///
/// For `s >= 1/2` the Borwein-accelerated alternating series for eta is
/// used, `zeta = eta / (1 - 2^{1-s})`; smaller arguments go through the
/// functional equation.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if s.is_nan() {
        return Err(Error::Domain {
            function: "riemann_zeta",
            arg: s,
            reason: "argument is NaN",
        });
    }
    if s == 1.0 {
        return Err(Error::Domain {
            function: "riemann_zeta",
            arg: s,
            reason: "pole at s = 1",
        });
    }
    if s >= 0.5 {
        if s > 60.0 {
            return Ok(1.0 + 2f64.powf(-s) + 3f64.powf(-s));
        }
        return Ok(dirichlet_eta(s) / -((1.0 - s) * std::f64::consts::LN_2).exp_m1());
    }
    if s == 0.0 {
        return Ok(-0.5);
    }
    if s < 0.0 && s.fract() == 0.0 && (s / 2.0).fract() == 0.0 {
        return Ok(0.0);
    }
    // zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1-s) zeta(1-s)
    let t = 1.0 - s;
    let zt = riemann_zeta(t)?;
    let sin = (0.5 * PI * s).sin();
    let log_mag =
        s * std::f64::consts::LN_2 + (s - 1.0) * PI.ln() + libm::lgamma(t) + zt.abs().ln();
    Ok(sin.signum() * zt.signum() * sin.abs() * log_mag.exp())
}

fn dirichlet_eta(s: f64) -> f64 {
    let n = ZETA_BORWEIN_TERMS;
    let nf = n as f64;
    // d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0;
    let mut acc = 1.0;
    d.push(acc);
    for i in 0..n {
        let fi = i as f64;
        term *= 4.0 * (nf + fi) * (nf - fi) / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
        acc += term;
        d.push(acc);
    }
    let dn = d[n];
    let mut sum = 0.0;
    for k in 0..n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (d[k] - dn) * ((k + 1) as f64).powf(-s);
    }
    -sum / dn
}
