//! Cone files.
//!
//! Polyhedral cones are plain CSV, one generator per row; blank lines and
//! lines starting with `#` are skipped. Revolution cones and subspaces use a
//! JSON descriptor:
//!
//! ```json
//! {"type": "revolution", "axis": [0, 0, 1], "phi": 0.5}
//! {"type": "subspace", "basis": [[1, 0, 0], [0, 1, 0]]}
//! ```
//!
//! where `basis` lists the spanning vectors. `{"type": "polyhedral",
//! "generators": [[...], ...]}` is accepted as well.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cones::{Cone, LinearSubspace, PolyhedralCone, RevolutionCone};
use crate::error::{ConeError, Result};
use crate::linalg::Matrix;

fn io_err(path: &Path, e: impl std::fmt::Display) -> ConeError {
    ConeError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> ConeError {
    ConeError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Numeric rows of a CSV text with their 1-based line numbers.
pub fn parse_csv_rows(text: &str, path: &Path) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for (col, field) in line.split(',').enumerate() {
            let field = field.trim();
            let v: f64 = field.parse().map_err(|_| {
                parse_err(
                    path,
                    line_no,
                    format!("column {}: cannot parse {field:?} as a number", col + 1),
                )
            })?;
            if !v.is_finite() {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("column {}: non-finite value", col + 1),
                ));
            }
            row.push(v);
        }
        if let Some((_, first)) = rows.first() {
            if first.len() != row.len() {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("expected {} columns, found {}", first.len(), row.len()),
                ));
            }
        }
        rows.push((line_no, row));
    }
    Ok(rows)
}

/// Reads the rows of a numeric CSV file.
pub fn read_csv_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    Ok(parse_csv_rows(&text, path)?
        .into_iter()
        .map(|(_, r)| r)
        .collect())
}

/// Polyhedral cone from CSV text, one generator per row.
pub fn parse_cone_csv(text: &str, path: &Path) -> Result<PolyhedralCone> {
    let rows = parse_csv_rows(text, path)?;
    if rows.is_empty() {
        return Err(parse_err(path, 0, "no generators"));
    }
    if let Some((line, _)) = rows.iter().find(|(_, r)| r.iter().all(|&v| v == 0.0)) {
        return Err(parse_err(path, *line, "zero generator"));
    }
    PolyhedralCone::new(rows.into_iter().map(|(_, r)| r).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ConeDescriptor {
    Revolution { axis: Vec<f64>, phi: f64 },
    Subspace { basis: Vec<Vec<f64>> },
    Polyhedral { generators: Vec<Vec<f64>> },
}

impl ConeDescriptor {
    pub fn build(self) -> Result<Cone> {
        Ok(match self {
            ConeDescriptor::Revolution { axis, phi } => {
                Cone::Revolution(RevolutionCone::new(axis, phi)?)
            }
            ConeDescriptor::Subspace { basis } => Cone::Subspace(LinearSubspace::from_spanning(
                &Matrix::from_columns(&basis)?,
            )?),
            ConeDescriptor::Polyhedral { generators } => {
                Cone::Polyhedral(PolyhedralCone::new(generators)?)
            }
        })
    }
}

pub fn parse_cone_json(text: &str, path: &Path) -> Result<Cone> {
    let desc: ConeDescriptor =
        serde_json::from_str(text).map_err(|e| parse_err(path, e.line(), e.to_string()))?;
    desc.build()
}

/// Reads a cone file: JSON descriptor for `.json`, generator CSV otherwise.
pub fn read_cone(path: &Path) -> Result<Cone> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
    {
        parse_cone_json(&text, path)
    } else {
        Ok(Cone::Polyhedral(parse_cone_csv(&text, path)?))
    }
}

/// CSV text with one row per vector, using shortest round-trip formatting.
pub fn format_rows(rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for r in rows {
        for (i, v) in r.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}

pub fn write_rows(path: &Path, rows: &[Vec<f64>]) -> Result<()> {
    fs::write(path, format_rows(rows)).map_err(|e| io_err(path, e))
}
