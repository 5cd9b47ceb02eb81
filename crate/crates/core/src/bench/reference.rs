//! Persisted reference tables: one CSV per dataset with lossless hex floats.

use super::datasets::{BenchCase, Dataset};
use crate::error::{Error, Result};
use crate::ulp::{parse_f64, to_hex};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Environment variable that overrides [`default_data_dir`].
pub const DATA_DIR_ENV: &str = "THIOPHENE_DATA_DIR";

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    dataset: String,
    case_id: usize,
    c_hex: String,
    ex_hex: String,
    #[serde(rename = "T_hex")]
    t_hex: String,
    sigma_hex: String,
    v_ref_hex: String,
}

/// Directory holding the shipped reference tables.
pub fn default_data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data")))
}

pub fn table_path(dir: &Path, dataset: Dataset) -> PathBuf {
    dir.join(format!("{}.csv", dataset.file_stem()))
}

pub fn write_table(path: &Path, cases: &[BenchCase]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
    for case in cases {
        w.serialize(Row {
            dataset: case.dataset.name().to_string(),
            case_id: case.case_id,
            c_hex: to_hex(case.c),
            ex_hex: to_hex(case.ex),
            t_hex: to_hex(case.expiry),
            sigma_hex: to_hex(case.sigma_ref),
            v_ref_hex: to_hex(case.v_ref),
        })
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn field(s: &str, what: &str, line: usize) -> Result<f64> {
    parse_f64(s).ok_or_else(|| Error::Table(format!("row {line}: bad {what} `{s}`")))
}

pub fn read_table(path: &Path, dataset: Dataset) -> Result<Vec<BenchCase>> {
    if !path.exists() {
        return Err(Error::MissingReferenceTable {
            dataset: dataset.name().to_string(),
            path: path.display().to_string(),
        });
    }
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
    let mut out = Vec::new();
    for (line, row) in r.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| Error::Table(e.to_string()))?;
        let ds: Dataset = row.dataset.parse()?;
        if ds != dataset {
            return Err(Error::Table(format!("row {line}: dataset {} in table for {dataset}", row.dataset)));
        }
        out.push(BenchCase {
            dataset,
            case_id: row.case_id,
            c: field(&row.c_hex, "c_hex", line)?,
            ex: field(&row.ex_hex, "ex_hex", line)?,
            expiry: field(&row.t_hex, "T_hex", line)?,
            sigma_ref: field(&row.sigma_hex, "sigma_hex", line)?,
            v_ref: field(&row.v_ref_hex, "v_ref_hex", line)?,
        });
    }
    Ok(out)
}

/// Loads the persisted table of `dataset` from [`default_data_dir`].
pub fn load(dataset: Dataset) -> Result<Vec<BenchCase>> {
    load_from(&default_data_dir(), dataset)
}

pub fn load_from(dir: &Path, dataset: Dataset) -> Result<Vec<BenchCase>> {
    read_table(&table_path(dir, dataset), dataset)
}
