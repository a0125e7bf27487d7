//! CSV and JSON export of spectra, reports and lattices.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::clusters::ClusterReport;
use crate::error::{Error, Result};

/// One line of the spectrum CSV: `index,re,im,cluster_k1,subcluster_value`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub index: usize,
    pub re: f64,
    pub im: f64,
    /// −1 when unassigned.
    pub cluster_k1: i64,
    pub subcluster_value: Option<f64>,
}

pub fn spectrum_rows(eigs: &[Complex64], report: Option<&ClusterReport>) -> Vec<SpectrumRow> {
    eigs.iter()
        .enumerate()
        .map(|(index, z)| {
            let tag = report.and_then(|r| r.cluster_of(*z));
            SpectrumRow {
                index,
                re: z.re,
                im: z.im,
                cluster_k1: tag.map_or(-1, |t| t.0),
                subcluster_value: tag.map(|t| t.1),
            }
        })
        .collect()
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e.to_string()),
        other => Error::Parse(format!("{other:?}")),
    }
}

pub fn write_spectrum_csv<W: Write>(w: W, rows: &[SpectrumRow]) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(["index", "re", "im", "cluster_k1", "subcluster_value"]).map_err(csv_err)?;
    for r in rows {
        out.serialize(r).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_spectrum_csv<R: Read>(r: R) -> Result<Vec<SpectrumRow>> {
    let mut rd = csv::Reader::from_reader(r);
    let rows = rd.deserialize().collect::<std::result::Result<Vec<SpectrumRow>, _>>().map_err(csv_err)?;
    Ok(rows)
}

pub fn save_spectrum_csv(path: &Path, rows: &[SpectrumRow]) -> Result<()> {
    write_spectrum_csv(BufWriter::new(File::create(path)?), rows)
}

pub fn load_spectrum_csv(path: &Path) -> Result<Vec<SpectrumRow>> {
    read_spectrum_csv(BufReader::new(File::open(path)?))
}

pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.flush()?;
    Ok(())
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_spectrum_is_header_only() {
        let mut buf = Vec::new();
        write_spectrum_csv(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "index,re,im,cluster_k1,subcluster_value\n");
    }

    #[test]
    fn csv_round_trip() {
        let eigs = [Complex64::new(0.1, -1e-7), Complex64::new(1.0 / 3.0, 2.5e-300)];
        let rows = spectrum_rows(&eigs, None);
        let mut buf = Vec::new();
        write_spectrum_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), eigs.len() + 1);
        assert_eq!(read_spectrum_csv(&buf[..]).unwrap(), rows);
    }
}
