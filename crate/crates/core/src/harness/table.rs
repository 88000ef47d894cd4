use std::io::{Read, Write};
use std::path::Path;

use super::experiment::ResultRow;
use crate::error::{Error, Result};

pub const TABLE_HEADER: [&str; 10] = [
    "transform",
    "n",
    "estimator",
    "setting",
    "mean",
    "se",
    "q025",
    "q50",
    "q975",
    "L",
];

/// Writes the result rows as CSV.
pub fn write_table<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Parse {
        path: "<csv>".into(),
        reason: e.to_string(),
    };
    w.write_record(TABLE_HEADER).map_err(csv_err)?;
    for r in rows {
        let se = r.se.map(|s| s.to_string()).unwrap_or_else(|| "NA".into());
        w.write_record([
            r.transform.clone(),
            r.n.to_string(),
            r.estimator.clone(),
            r.setting.clone(),
            r.mean.to_string(),
            se,
            r.q025.to_string(),
            r.q50.to_string(),
            r.q975.to_string(),
            r.replicates.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// Writes the result rows to `path`.
pub fn emit_table(rows: &[ResultRow], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_table(rows, std::io::BufWriter::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        Error::Parse { reason, .. } => Error::Parse {
            path: path.to_path_buf(),
            reason,
        },
        other => other,
    })
}

/// Parses a table written by [`write_table`].
pub fn read_table_from<R: Read>(input: R, path: &Path) -> Result<Vec<ResultRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let perr = |reason: String| Error::Parse {
        path: path.to_path_buf(),
        reason,
    };
    let header = rd.headers().map_err(|e| perr(e.to_string()))?.clone();
    if header.iter().ne(TABLE_HEADER.iter().copied()) {
        return Err(perr(format!("unexpected header {:?}", header)));
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| perr(e.to_string()))?;
        let num = |i: usize| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .map_err(|e| perr(format!("column {}: {e}", TABLE_HEADER[i])))
        };
        let int = |i: usize| -> Result<usize> {
            rec[i]
                .parse::<usize>()
                .map_err(|e| perr(format!("column {}: {e}", TABLE_HEADER[i])))
        };
        rows.push(ResultRow {
            transform: rec[0].to_string(),
            n: int(1)?,
            estimator: rec[2].to_string(),
            setting: rec[3].to_string(),
            mean: num(4)?,
            se: if &rec[5] == "NA" { None } else { Some(num(5)?) },
            q025: num(6)?,
            q50: num(7)?,
            q975: num(8)?,
            replicates: int(9)?,
        });
    }
    Ok(rows)
}

pub fn read_table(path: &Path) -> Result<Vec<ResultRow>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_table_from(file, path)
}
