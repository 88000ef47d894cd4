use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::discretize::{apply, DiscretizationSpec};
use crate::error::{Error, Result};
use crate::estimators::{dfa_box_sizes, dfa_curve_with_sizes, periodogram, sample_acv};
use crate::lmcore::ProcessSpec;
use crate::synth::{simulate_gaussian, SeedSpec};
use crate::theory::{c_phi, dfa_asymptote, expected_dfa_exact, hosking_bias, TransformedProcess};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureKind {
    Acv,
    Periodogram,
    Dfa,
}

impl FromStr for FigureKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "acv" => Ok(FigureKind::Acv),
            "periodogram" => Ok(FigureKind::Periodogram),
            "dfa" => Ok(FigureKind::Dfa),
            _ => Err(Error::invalid(
                "figure",
                format!("`{s}` (expected acv, periodogram or dfa)"),
            )),
        }
    }
}

/// Inputs of one figure: a single simulated path plus its theory overlays.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FigureSpec {
    pub process: ProcessSpec,
    pub transform: Option<DiscretizationSpec>,
    pub n: usize,
    pub seed: SeedSpec,
    /// Largest lag of the ACV figure.
    pub max_lag: usize,
}

/// Named columns of equal length.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnData {
    pub names: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl ColumnData {
    pub fn new() -> Self {
        ColumnData {
            names: Vec::new(),
            columns: Vec::new(),
        }
    }

    pub fn push(&mut self, name: &str, column: Vec<f64>) {
        debug_assert!(self.columns.first().is_none_or(|c| c.len() == column.len()));
        self.names.push(name.to_string());
        self.columns.push(column);
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let err = |e: csv::Error| Error::Parse {
            path: "<csv>".into(),
            reason: e.to_string(),
        };
        w.write_record(&self.names).map_err(err)?;
        for i in 0..self.rows() {
            w.write_record(self.columns.iter().map(|c| c[i].to_string()))
                .map_err(err)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

impl Default for ColumnData {
    fn default() -> Self {
        Self::new()
    }
}

/// Empirical curve from one path plus theory overlays.
///
/// * ACV: `k, sample, exact, asymptotic, corrected` where `corrected` adds the
///   finite-sample bias to the exact autocovariance.
/// * Periodogram: `omega, periodogram, leading`.
/// * DFA: `m, f2, leading, exact`.
pub fn figure_data(kind: FigureKind, spec: &FigureSpec) -> Result<ColumnData> {
    let mut series = simulate_gaussian(&spec.process, spec.n, spec.seed)?;
    if let Some(t) = &spec.transform {
        series = apply(&series, t);
    }
    let proc_ = TransformedProcess::new(spec.process, spec.transform)?;
    let lambda = proc_.asymptotic_amplitude()?;
    let h = spec.process.hurst;
    let mut out = ColumnData::new();
    match kind {
        FigureKind::Acv => {
            let max_lag = spec.max_lag.min(spec.n - 1);
            let sample = sample_acv(&series, max_lag)?;
            let bias = hosking_bias(lambda, h, spec.n)?;
            let ks: Vec<u64> = (1..=max_lag as u64).collect();
            let exact: Vec<f64> = ks.iter().map(|&k| proc_.acv(k)).collect();
            out.push("k", ks.iter().map(|&k| k as f64).collect());
            out.push("sample", sample[1..].to_vec());
            out.push(
                "asymptotic",
                ks.iter()
                    .map(|&k| lambda * (k as f64).powf(2.0 * h.value() - 2.0))
                    .collect(),
            );
            out.push("corrected", exact.iter().map(|g| g + bias).collect());
            out.push("exact", exact);
        }
        FigureKind::Periodogram => {
            let pg = periodogram(&series)?;
            let amp = c_phi(h.value()) * lambda;
            let leading = pg
                .frequencies
                .iter()
                .map(|w| amp * w.powf(1.0 - 2.0 * h.value()))
                .collect();
            out.push("omega", pg.frequencies);
            out.push("periodogram", pg.ordinates);
            out.push("leading", leading);
        }
        FigureKind::Dfa => {
            let sizes = dfa_box_sizes(spec.n);
            if sizes.is_empty() {
                return Err(Error::InsufficientData(format!(
                    "no DFA box sizes for n = {}",
                    spec.n
                )));
            }
            let curve = dfa_curve_with_sizes(&series, &sizes)?;
            let leading = sizes
                .iter()
                .map(|&m| dfa_asymptote(h, lambda, m))
                .collect::<Result<Vec<_>>>()?;
            let exact = sizes
                .iter()
                .map(|&m| expected_dfa_exact(|k| proc_.acv(k), proc_.variance(), m))
                .collect::<Result<Vec<_>>>()?;
            out.push("m", sizes.iter().map(|&m| m as f64).collect());
            out.push("f2", curve.fluctuations.iter().map(|f| f * f).collect());
            out.push("leading", leading);
            out.push("exact", exact);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmcore::HurstExponent;
    use crate::theory::dfa_shape;

    fn spec(transform: Option<DiscretizationSpec>) -> FigureSpec {
        FigureSpec {
            process: ProcessSpec::fgn(0.7, 1.0).unwrap(),
            transform,
            n: 1 << 14,
            seed: SeedSpec::new(1, 0),
            max_lag: 50,
        }
    }

    #[test]
    fn acv_overlay_is_bias_corrected() {
        let d = figure_data(FigureKind::Acv, &spec(None)).unwrap();
        let k = d.column("k").unwrap();
        assert_eq!(k[9], 10.0);
        let rho10 = ProcessSpec::fgn(0.7, 1.0).unwrap().autocorrelation(10);
        let want = rho10 - (16384f64).powf(2.0 * 0.7 - 2.0);
        assert!((d.column("corrected").unwrap()[9] - want).abs() < 1e-12);
        assert_eq!(d.rows(), 50);
    }

    #[test]
    fn periodogram_overlay() {
        let t = DiscretizationSpec::from_chi(0.1, 1.0).unwrap();
        let d = figure_data(FigureKind::Periodogram, &spec(Some(t))).unwrap();
        let theta = crate::theory::acv_scaling_factor(0.1).unwrap().covariance;
        let b0 = 0.7 * 0.4;
        let w = d.column("omega").unwrap()[3];
        let want = theta * c_phi(0.7) * b0 * w.powf(1.0 - 1.4);
        assert!((d.column("leading").unwrap()[3] / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dfa_overlay() {
        let mut s = spec(None);
        s.n = 1024;
        let d = figure_data(FigureKind::Dfa, &s).unwrap();
        let m = d.column("m").unwrap();
        assert_eq!(m[0], 4.0);
        assert_eq!(*m.last().unwrap(), 256.0);
        let h = HurstExponent::new(0.7).unwrap();
        let lead = d.column("leading").unwrap();
        let want = dfa_shape(0.7) * 256f64.powf(1.4);
        assert!((lead.last().unwrap() / want - 1.0).abs() < 1e-12);
        assert!((dfa_asymptote(h, 0.28, 256).unwrap() / lead.last().unwrap() - 1.0).abs() < 1e-14);
        // exact approaches the leading term
        let exact = d.column("exact").unwrap();
        assert!((exact.last().unwrap() / lead.last().unwrap() - 1.0).abs() < 0.05);
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .starts_with("m,f2,leading,exact\n"));
    }
}
