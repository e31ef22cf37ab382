use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::closeness::NodeCloseness;
use crate::error::{Error, Result};
use crate::hermitian::{validate_hermitian, HermitianMatrix};
use crate::partitioning::{Dendrogram, Partition};

pub const DEFAULT_HERMITICITY_TOL: f64 = 1e-9;

/// On-disk Hamiltonian: row-major real and (optional) imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hermiticity_tol: Option<f64>,
    pub real: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imag: Option<Vec<Vec<f64>>>,
}

impl HamiltonianFile {
    pub fn from_matrix(h: &HermitianMatrix) -> Self {
        let n = h.n();
        let rows = |f: fn(&Complex64) -> f64| (0..n).map(|i| (0..n).map(|j| f(&h.get(i, j))).collect()).collect();
        HamiltonianFile {
            n,
            hermiticity_tol: Some(DEFAULT_HERMITICITY_TOL),
            real: rows(|z| z.re),
            imag: if h.is_real() { None } else { Some(rows(|z| z.im)) },
        }
    }

    pub fn to_matrix(&self, location: &str) -> Result<HermitianMatrix> {
        let n = self.n;
        if n == 0 {
            return Err(Error::parse(location, "n must be at least 1"));
        }
        check_block(&self.real, n, "real", location)?;
        if let Some(imag) = &self.imag {
            check_block(imag, n, "imag", location)?;
        }
        let m = DMatrix::from_fn(n, n, |i, j| {
            let im = self.imag.as_ref().map_or(0.0, |b| b[i][j]);
            Complex64::new(self.real[i][j], im)
        });
        validate_hermitian(m, self.hermiticity_tol.unwrap_or(DEFAULT_HERMITICITY_TOL))
    }
}

fn check_block(rows: &[Vec<f64>], n: usize, name: &str, location: &str) -> Result<()> {
    if rows.len() != n {
        return Err(Error::parse(
            location,
            format!("`{name}` has {} rows, expected n = {n}", rows.len()),
        ));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::parse(
                format!("{location}: `{name}` row {i}"),
                format!("row has {} entries, expected {n}", row.len()),
            ));
        }
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn json_error(location: &str, e: serde_json::Error) -> Error {
    Error::parse(format!("{location}:{}:{}", e.line(), e.column()), e.to_string())
}

/// Parses the JSON Hamiltonian format; `location` names the source in errors.
pub fn parse_hamiltonian(text: &str, location: &str) -> Result<HermitianMatrix> {
    let file: HamiltonianFile = serde_json::from_str(text).map_err(|e| json_error(location, e))?;
    file.to_matrix(location)
}

pub fn load_hamiltonian(path: impl AsRef<Path>) -> Result<HermitianMatrix> {
    let path = path.as_ref();
    parse_hamiltonian(&read(path)?, &path.display().to_string())
}

/// Writes shortest round-trip decimal representations, so loading the file
/// restores `h` bit for bit.
pub fn save_hamiltonian(h: &HermitianMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_json(&HamiltonianFile::from_matrix(h), path)
}

pub fn write_json<T: Serialize>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text =
        serde_json::to_string_pretty(value).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    write(path, &(text + "\n"))
}

/// Partition file contents. Only `labels` is required when reading.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionRecord {
    pub labels: Vec<usize>,
    #[serde(default)]
    pub modularity: Option<f64>,
    #[serde(default)]
    pub measure: Option<String>,
    #[serde(default)]
    pub regime: Option<String>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub config: serde_json::Value,
}

impl PartitionRecord {
    pub fn new(partition: &Partition) -> Self {
        PartitionRecord {
            labels: partition.labels().to_vec(),
            modularity: None,
            measure: None,
            regime: None,
            seed: None,
            config: serde_json::Value::Null,
        }
    }
}

pub fn write_partition(record: &PartitionRecord, path: impl AsRef<Path>) -> Result<()> {
    write_json(record, path)
}

pub fn load_partition(path: impl AsRef<Path>) -> Result<Partition> {
    let path = path.as_ref();
    let location = path.display().to_string();
    let record: PartitionRecord = serde_json::from_str(&read(path)?).map_err(|e| json_error(&location, e))?;
    Partition::from_labels(&record.labels).map_err(|e| Error::parse(location, e.to_string()))
}

/// One merged group of a dendrogram step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DendrogramEntry {
    pub step: usize,
    pub closeness: f64,
    pub merged: Vec<Vec<usize>>,
}

impl DendrogramEntry {
    pub fn from_dendrogram(d: &Dendrogram) -> Vec<Self> {
        d.merges()
            .iter()
            .enumerate()
            .flat_map(|(step, m)| {
                m.groups.iter().map(move |g| DendrogramEntry {
                    step,
                    closeness: m.closeness,
                    merged: g.clone(),
                })
            })
            .collect()
    }
}

pub fn write_dendrogram(d: &Dendrogram, path: impl AsRef<Path>) -> Result<()> {
    write_json(&DendrogramEntry::from_dendrogram(d), path)
}

/// Writes `c` as CSV: `# key=value` comment lines, a header row `node,0,1,..`
/// and one row per node.
pub fn write_closeness_csv(c: &NodeCloseness, metadata: &[(String, String)], path: impl AsRef<Path>) -> Result<()> {
    let n = c.n();
    let mut out = String::new();
    for (k, v) in metadata {
        let _ = writeln!(out, "# {k}={v}");
    }
    out.push_str("node");
    for j in 0..n {
        let _ = write!(out, ",{j}");
    }
    out.push('\n');
    for i in 0..n {
        let _ = write!(out, "{i}");
        for j in 0..n {
            let _ = write!(out, ",{:?}", c.get(i, j));
        }
        out.push('\n');
    }
    write(path.as_ref(), &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::random_hermitian;

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.json");
        let h = random_hermitian(14, 42);
        save_hamiltonian(&h, &path).unwrap();
        assert_eq!(load_hamiltonian(&path).unwrap(), h);
    }

    #[test]
    fn real_only_file() {
        let h = parse_hamiltonian(r#"{"n": 2, "real": [[0, 1], [1, 0.5]]}"#, "inline").unwrap();
        assert_eq!(h.get(0, 1), Complex64::new(1.0, 0.0));
        assert_eq!(h.get(1, 1), Complex64::new(0.5, 0.0));
        assert!(h.is_real());
    }

    #[test]
    fn malformed_row_names_the_row() {
        let err = parse_hamiltonian(r#"{"n": 2, "real": [[0, 1], [1]]}"#, "inline").unwrap_err();
        match err {
            Error::Parse { location, .. } => assert!(location.contains("row 1"), "{location}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_hamiltonian("{\"n\": 2,\n \"real\": [[0, 1], [1 0]]}", "h.json").unwrap_err();
        match err {
            Error::Parse { location, .. } => assert!(location.starts_with("h.json:2:"), "{location}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hermiticity_uses_file_tolerance() {
        let text = r#"{"n": 2, "hermiticity_tol": 0.1, "real": [[0, 1], [1.05, 0]]}"#;
        assert!(parse_hamiltonian(text, "x").is_ok());
        let strict = r#"{"n": 2, "real": [[0, 1], [1.05, 0]]}"#;
        assert!(matches!(
            parse_hamiltonian(strict, "x"),
            Err(Error::AsymmetryExceedsTolerance { .. })
        ));
    }

    #[test]
    fn partition_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.json");
        let p = Partition::from_labels(&[0, 0, 1, 2, 1]).unwrap();
        let mut record = PartitionRecord::new(&p);
        record.modularity = Some(0.25);
        record.seed = Some(7);
        write_partition(&record, &path).unwrap();
        assert_eq!(load_partition(&path).unwrap(), p);
        let text = fs::read_to_string(&path).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["modularity"], 0.25);
        assert!(v["measure"].is_null());
    }
}
