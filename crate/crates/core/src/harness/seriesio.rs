//! Text series files: `#`-prefixed `key: value` metadata lines followed by
//! one value per line. Values are written in shortest round-trip form, so
//! reading a written file reproduces the path bit for bit.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::discretize::DiscretizationSpec;
use crate::error::{Error, Result};
use crate::lmcore::{ProcessKind, ProcessSpec, Series, SeriesMeta};
use crate::synth::SeedSpec;

pub fn write_series_to<W: Write>(series: &Series<f64>, mut out: W) -> std::io::Result<()> {
    let meta = &series.meta;
    if let Some(spec) = &meta.spec {
        writeln!(out, "# process: {}", spec.kind.as_str())?;
        writeln!(out, "# hurst: {}", spec.hurst.value())?;
        writeln!(out, "# variance: {}", spec.variance)?;
    }
    if let Some(seed) = &meta.seed {
        writeln!(out, "# seed_master: {}", seed.master)?;
        writeln!(out, "# seed_replicate: {}", seed.replicate)?;
    }
    if let Some(t) = &meta.transform {
        let label = match t {
            DiscretizationSpec::Sign => "sign".to_string(),
            DiscretizationSpec::Round { delta } => format!("delta={delta}"),
        };
        writeln!(out, "# transform: {label}")?;
    }
    writeln!(out, "# n: {}", series.len())?;
    for v in series.values() {
        writeln!(out, "{v}")?;
    }
    out.flush()
}

pub fn write_series(series: &Series<f64>, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_series_to(series, std::io::BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

pub fn read_series(path: &Path) -> Result<Series<f64>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_series_from(BufReader::new(file), path)
}

pub fn read_series_from<R: BufRead>(input: R, path: &Path) -> Result<Series<f64>> {
    let perr = |line: usize, reason: String| Error::Parse {
        path: path.to_path_buf(),
        reason: format!("line {line}: {reason}"),
    };
    let mut values = Vec::new();
    let mut kind = None;
    let mut hurst = None;
    let mut variance = None;
    let mut master = None;
    let mut replicate = None;
    let mut transform = None;
    let mut declared_n = None;

    for (i, line) in input.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let Some((key, value)) = rest.split_once(':') else {
                continue;
            };
            let value = value.trim();
            let num = |v: &str| {
                v.parse::<f64>()
                    .map_err(|e| perr(lineno, format!("{key}: {e}")))
            };
            let int = |v: &str| {
                v.parse::<u64>()
                    .map_err(|e| perr(lineno, format!("{key}: {e}")))
            };
            match key.trim() {
                "process" => {
                    kind = Some(
                        value
                            .parse::<ProcessKind>()
                            .map_err(|e| perr(lineno, e.to_string()))?,
                    )
                }
                "hurst" => hurst = Some(num(value)?),
                "variance" => variance = Some(num(value)?),
                "seed_master" => master = Some(int(value)?),
                "seed_replicate" => replicate = Some(int(value)?),
                "transform" => {
                    transform = Some(if value == "sign" {
                        DiscretizationSpec::Sign
                    } else if let Some(d) = value.strip_prefix("delta=") {
                        DiscretizationSpec::round(num(d)?)
                            .map_err(|e| perr(lineno, e.to_string()))?
                    } else {
                        return Err(perr(lineno, format!("unknown transform `{value}`")));
                    })
                }
                "n" => declared_n = Some(int(value)? as usize),
                _ => {}
            }
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|e| perr(lineno, format!("`{line}`: {e}")))?;
        values.push(v);
    }

    if let Some(n) = declared_n {
        if n != values.len() {
            return Err(perr(
                0,
                format!("header declares {n} values, found {}", values.len()),
            ));
        }
    }
    let spec = match (kind, hurst) {
        (Some(k), Some(h)) => Some(
            ProcessSpec::new(k, h, variance.unwrap_or(1.0)).map_err(|e| perr(0, e.to_string()))?,
        ),
        _ => None,
    };
    let seed = match (master, replicate) {
        (Some(m), r) => Some(SeedSpec::new(m, r.unwrap_or(0))),
        _ => None,
    };
    Series::with_meta(
        values,
        SeriesMeta {
            spec,
            seed,
            transform,
        },
    )
}
