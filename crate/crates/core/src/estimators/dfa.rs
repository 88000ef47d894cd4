use crate::error::{Error, Result};
use crate::lmcore::Series;
use crate::scalar::Real;

/// Root-mean-square fluctuation per box size.
#[derive(Clone, Debug, PartialEq)]
pub struct DfaCurve {
    pub box_sizes: Vec<usize>,
    pub fluctuations: Vec<f64>,
}

/// How the fit window of [`dfa_estimate`] is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DfaSelection {
    /// Box sizes whose `log10 m` lies in the top fraction `q` of the log range.
    #[default]
    Range,
    /// The largest `ceil(q N)` of the `N` box sizes.
    Count,
}

/// `round(4 * 2^{k/8})` for `k = 0, 1, ...`, deduplicated, up to `n / 4`.
pub fn dfa_box_sizes(n: usize) -> Vec<usize> {
    let max = n / 4;
    let mut out: Vec<usize> = Vec::new();
    let mut k = 0;
    loop {
        let m = (4.0 * 2f64.powf(k as f64 / 8.0)).round() as usize;
        if m > max {
            break;
        }
        if out.last() != Some(&m) {
            out.push(m);
        }
        k += 1;
    }
    out
}

fn profile<T: Real>(xs: &[T]) -> Vec<f64> {
    let mean = xs.iter().map(|x| x.as_f64()).sum::<f64>() / xs.len() as f64;
    let mut acc = 0.0;
    xs.iter()
        .map(|x| {
            acc += x.as_f64() - mean;
            acc
        })
        .collect()
}

/// Mean squared residual of box-wise least-squares lines fitted to the
/// profile, over the first `m * floor(n / m)` points.
fn fluctuation_squared(y: &[f64], m: usize) -> f64 {
    let boxes = y.len() / m;
    let mf = m as f64;
    let tbar = (mf - 1.0) / 2.0;
    let stt = mf * (mf * mf - 1.0) / 12.0;
    let mut total = 0.0;
    for b in 0..boxes {
        let seg = &y[b * m..(b + 1) * m];
        let ybar = seg.iter().sum::<f64>() / mf;
        let mut syy = 0.0;
        let mut sty = 0.0;
        for (t, &v) in seg.iter().enumerate() {
            let dy = v - ybar;
            syy += dy * dy;
            sty += (t as f64 - tbar) * dy;
        }
        total += (syy - sty * sty / stt).max(0.0);
    }
    total / (mf * boxes as f64)
}

/// `F^2(m)` of a series at one box size.
pub fn dfa_fluctuation_squared<T: Real>(series: &Series<T>, m: usize) -> Result<f64> {
    if m < 3 || m > series.len() {
        return Err(Error::invalid(
            "m",
            format!("{m} is outside [3, {}]", series.len()),
        ));
    }
    Ok(fluctuation_squared(&profile(series.values()), m))
}

/// DFA curve on the default geometric grid from 4 to `n / 4`.
pub fn dfa_curve<T: Real>(series: &Series<T>) -> Result<DfaCurve> {
    if series.len() < 16 {
        return Err(Error::InsufficientData(format!(
            "DFA needs at least 16 observations, got {}",
            series.len()
        )));
    }
    dfa_curve_with_sizes(series, &dfa_box_sizes(series.len()))
}

pub fn dfa_curve_with_sizes<T: Real>(series: &Series<T>, sizes: &[usize]) -> Result<DfaCurve> {
    if sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("box_sizes", "must be strictly increasing"));
    }
    if let Some(&m) = sizes.iter().find(|&&m| m < 3 || m > series.len()) {
        return Err(Error::invalid(
            "box_sizes",
            format!("{m} is outside [3, n]"),
        ));
    }
    let y = profile(series.values());
    let fluctuations = sizes
        .iter()
        .map(|&m| fluctuation_squared(&y, m).sqrt())
        .collect();
    Ok(DfaCurve {
        box_sizes: sizes.to_vec(),
        fluctuations,
    })
}

/// Slope of `log10 F` on `log10 m` over the largest box sizes.
pub fn dfa_estimate(curve: &DfaCurve, q: f64) -> Result<f64> {
    dfa_estimate_with(curve, q, DfaSelection::Range)
}

pub fn dfa_estimate_with(curve: &DfaCurve, q: f64, selection: DfaSelection) -> Result<f64> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::invalid("q", format!("{q} is outside (0, 1]")));
    }
    let n = curve.box_sizes.len();
    if n == 0 {
        return Err(Error::InsufficientData("empty DFA curve".into()));
    }
    let logs: Vec<f64> = curve
        .box_sizes
        .iter()
        .map(|&m| (m as f64).log10())
        .collect();
    let start = match selection {
        DfaSelection::Range => {
            let (lo, hi) = (logs[0], logs[n - 1]);
            let cut = hi - q * (hi - lo) - 1e-12;
            logs.iter().position(|&l| l >= cut).unwrap_or(n)
        }
        DfaSelection::Count => n - ((q * n as f64).ceil() as usize).min(n),
    };
    let picked = n - start;
    if picked < 3 {
        return Err(Error::InsufficientData(format!(
            "only {picked} box sizes selected for the fit, need 3"
        )));
    }
    let mut xs = Vec::with_capacity(picked);
    let mut ys = Vec::with_capacity(picked);
    for i in start..n {
        let f = curve.fluctuations[i];
        if !(f > 0.0) {
            return Err(Error::Degenerate(format!(
                "fluctuation at box size {} is {f}",
                curve.box_sizes[i]
            )));
        }
        xs.push(logs[i]);
        ys.push(f.log10());
    }
    let k = picked as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    Ok(sxy / sxx)
}
