//! CSV output of records and fits.
//!
//! ```text
//! experiment,law,param,m,basis,t,error,seed
//! experiment,law,param,fit_model,slope,r2,m_lo,m_hi
//! model,method,m,estimate,stderr
//! ```
//!
//! Floats are written in shortest round-trip form; `t` is empty for
//! experiments without a time.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::{ConvergenceRecord, FitRow, IntegralRecord};

pub const RECORD_HEADER: [&str; 8] = [
    "experiment",
    "law",
    "param",
    "m",
    "basis",
    "t",
    "error",
    "seed",
];
pub const FIT_HEADER: [&str; 8] = [
    "experiment",
    "law",
    "param",
    "fit_model",
    "slope",
    "r2",
    "m_lo",
    "m_hi",
];
pub const INTEGRAL_HEADER: [&str; 5] = ["model", "method", "m", "estimate", "stderr"];

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Maps writer failures to an I/O error on `path`.
fn at_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse(msg) => Error::Io {
            path: path.to_path_buf(),
            source: io::Error::other(msg),
        },
        other => other,
    }
}

fn write_rows<W: Write>(
    out: W,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))
}

pub fn write_records<W: Write>(out: W, records: &[ConvergenceRecord]) -> Result<()> {
    write_rows(
        out,
        &RECORD_HEADER,
        records.iter().map(|r| {
            vec![
                r.experiment.to_string(),
                r.law.clone(),
                r.param.to_string(),
                r.m.to_string(),
                r.basis.to_string(),
                r.t.map(|t| t.to_string()).unwrap_or_default(),
                r.error.to_string(),
                r.seed.to_string(),
            ]
        }),
    )
}

pub fn write_fits<W: Write>(out: W, fits: &[FitRow]) -> Result<()> {
    write_rows(
        out,
        &FIT_HEADER,
        fits.iter().map(|f| {
            vec![
                f.experiment.to_string(),
                f.law.clone(),
                f.param.to_string(),
                f.fit.model.to_string(),
                f.fit.slope.to_string(),
                f.fit.r2.to_string(),
                f.fit.m_lo.to_string(),
                f.fit.m_hi.to_string(),
            ]
        }),
    )
}

pub fn write_integral_records<W: Write>(out: W, rows: &[IntegralRecord]) -> Result<()> {
    write_rows(
        out,
        &INTEGRAL_HEADER,
        rows.iter().map(|r| {
            vec![
                r.model.clone(),
                r.method.clone(),
                r.m.to_string(),
                r.estimate.to_string(),
                r.stderr.to_string(),
            ]
        }),
    )
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(io_err(path))
}

/// Writes a header row and one row per record.
pub fn emit_csv(records: &[ConvergenceRecord], path: &Path) -> Result<()> {
    write_records(create(path)?, records).map_err(|e| at_path(path, e))
}

pub fn emit_fits_csv(fits: &[FitRow], path: &Path) -> Result<()> {
    write_fits(create(path)?, fits).map_err(|e| at_path(path, e))
}

pub fn emit_integral_csv(rows: &[IntegralRecord], path: &Path) -> Result<()> {
    write_integral_records(create(path)?, rows).map_err(|e| at_path(path, e))
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, name: &str) -> Result<T> {
    let raw = rec
        .get(i)
        .ok_or_else(|| Error::Parse(format!("missing column `{name}`")))?;
    raw.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad `{name}` value `{raw}`")))
}

/// Parses a records CSV produced by [`write_records`].
pub fn parse_records<R: io::Read>(input: R) -> Result<Vec<ConvergenceRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers().map_err(csv_err)?.clone();
    if header.iter().collect::<Vec<_>>() != RECORD_HEADER {
        return Err(Error::Parse(format!(
            "unexpected records header `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(csv_err)?;
        let t_raw = row.get(5).unwrap_or("").trim();
        out.push(ConvergenceRecord {
            experiment: field(&row, 0, "experiment")?,
            law: field(&row, 1, "law")?,
            param: field(&row, 2, "param")?,
            m: field(&row, 3, "m")?,
            basis: field(&row, 4, "basis")?,
            t: if t_raw.is_empty() {
                None
            } else {
                Some(field(&row, 5, "t")?)
            },
            error: field(&row, 6, "error")?,
            seed: field(&row, 7, "seed")?,
        });
    }
    Ok(out)
}

pub fn read_records_csv(path: &Path) -> Result<Vec<ConvergenceRecord>> {
    let file = File::open(path).map_err(io_err(path))?;
    parse_records(file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisKind;
    use crate::harness::ExperimentKind;

    fn sample() -> Vec<ConvergenceRecord> {
        vec![
            ConvergenceRecord {
                experiment: ExperimentKind::Fde,
                law: "algebraic".into(),
                param: 2.5,
                m: 8,
                basis: BasisKind::TrigCardinal,
                t: Some(std::f64::consts::PI),
                error: 1.234_567_890_123_456_7e-5,
                seed: 42,
            },
            ConvergenceRecord {
                experiment: ExperimentKind::Frechet,
                law: "exponential".into(),
                param: 1.5,
                m: 16,
                basis: BasisKind::RealFourier,
                t: None,
                error: 0.1 + 0.2,
                seed: u64::MAX,
            },
        ]
    }

    #[test]
    fn empty_list_gives_header_only() {
        let mut buf = Vec::new();
        write_records(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "experiment,law,param,m,basis,t,error,seed\n"
        );
    }

    #[test]
    fn round_trip_is_exact() {
        let mut buf = Vec::new();
        write_records(&mut buf, &sample()).unwrap();
        assert_eq!(parse_records(buf.as_slice()).unwrap(), sample());
    }

    #[test]
    fn file_round_trip_and_io_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        emit_csv(&sample(), &path).unwrap();
        assert_eq!(read_records_csv(&path).unwrap(), sample());
        let bad = dir.path().join("missing").join("r.csv");
        assert!(matches!(emit_csv(&sample(), &bad), Err(Error::Io { .. })));
        assert!(matches!(read_records_csv(&bad), Err(Error::Io { .. })));
    }

    #[test]
    fn wrong_header_rejected() {
        assert!(parse_records("a,b\n1,2\n".as_bytes()).is_err());
    }
}
