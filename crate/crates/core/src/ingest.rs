//! Edge lists to degree sequences, and CSV persistence of experiment tables.
//!
//! Edge lists are UTF-8 text with one whitespace-separated `u v` pair of
//! non-negative integer node ids per line; lines starting with `#` and blank
//! lines are skipped. Tables are RFC 4180 CSV with a mandatory header row.
//! Reals are written with 17 significant digits, which round-trips every
//! `f64` exactly. Table metadata lives in a JSON sidecar next to the CSV, so
//! the CSV itself stays plot-ready.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected, de-duplicated node degrees in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    pub degrees: Vec<u64>,
    /// Original node id of each entry of `degrees`.
    pub node_ids: Vec<u64>,
    pub source_label: String,
}

impl DegreeSequence {
    pub fn node_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.degrees.iter().map(|&d| d as f64).collect()
    }

    /// Two-column table `node_id, degree` in sequence order.
    pub fn to_table(&self) -> ExperimentTable {
        let mut t = ExperimentTable::new();
        t.push_int_column("node_id", self.node_ids.iter().map(|&x| x as i64).collect())
            .and_then(|t| t.push_int_column("degree", self.degrees.iter().map(|&x| x as i64).collect()))
            .expect("columns have equal length and distinct names");
        t.metadata.insert("source".into(), self.source_label.clone());
        t.metadata.insert("degree".into(), "undirected distinct-neighbour count; self-loops dropped".into());
        t.metadata.insert("order".into(), "first appearance in the edge list".into());
        t
    }
}

/// Parse an edge list into a degree sequence. Directed edges are symmetrized.
pub fn parse_edge_list<R: Read>(reader: R, source_label: &str) -> Result<DegreeSequence> {
    let mut index: HashMap<u64, u32> = HashMap::new();
    let mut node_ids = Vec::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut intern = |id: u64| -> u32 {
        *index.entry(id).or_insert_with(|| {
            node_ids.push(id);
            (node_ids.len() - 1) as u32
        })
    };
    let reader = BufReader::new(reader);
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            source_name: source_label.to_string(),
            line: lineno + 1,
            message: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let bad = |message: String| Error::Parse {
            source_name: source_label.to_string(),
            line: lineno + 1,
            message,
        };
        let mut fields = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(bad(format!("expected two node ids, got {trimmed:?}")));
        };
        let parse = |s: &str| s.parse::<u64>().map_err(|_| bad(format!("invalid node id {s:?}")));
        let (a, b) = (parse(a)?, parse(b)?);
        let (ia, ib) = (intern(a), intern(b));
        if ia != ib {
            edges.push((ia.min(ib), ia.max(ib)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let mut degrees = vec![0u64; node_ids.len()];
    for (a, b) in edges {
        degrees[a as usize] += 1;
        degrees[b as usize] += 1;
    }
    Ok(DegreeSequence {
        degrees,
        node_ids,
        source_label: source_label.to_string(),
    })
}

pub fn read_edge_list(path: &Path) -> Result<DegreeSequence> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_edge_list(file, &path.display().to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Real(Vec<f64>),
    Int(Vec<i64>),
}

impl ColumnData {
    pub fn len(&self) -> usize {
        match self {
            ColumnData::Real(v) => v.len(),
            ColumnData::Int(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Values as reals, whatever the storage type.
    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            ColumnData::Real(v) => v.clone(),
            ColumnData::Int(v) => v.iter().map(|&x| x as f64).collect(),
        }
    }

    fn cell(&self, row: usize) -> String {
        match self {
            ColumnData::Real(v) => format_real(v[row]),
            ColumnData::Int(v) => v[row].to_string(),
        }
    }
}

/// 17 significant digits in scientific notation.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub data: ColumnData,
}

/// Named, typed columns of equal length, plus free-form metadata.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentTable {
    columns: Vec<Column>,
    pub metadata: BTreeMap<String, String>,
}

impl ExperimentTable {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, name: &str, data: ColumnData) -> Result<&mut Self> {
        if self.columns.iter().any(|c| c.name == name) {
            return Err(Error::domain(format!("duplicate column name {name:?}")));
        }
        if let Some(first) = self.columns.first() {
            if first.data.len() != data.len() {
                return Err(Error::domain(format!(
                    "column {name:?} has {} rows, table has {}",
                    data.len(),
                    first.data.len()
                )));
            }
        }
        self.columns.push(Column {
            name: name.to_string(),
            data,
        });
        Ok(self)
    }

    pub fn push_real_column(&mut self, name: &str, values: Vec<f64>) -> Result<&mut Self> {
        self.push(name, ColumnData::Real(values))
    }

    pub fn push_int_column(&mut self, name: &str, values: Vec<i64>) -> Result<&mut Self> {
        self.push(name, ColumnData::Int(values))
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&ColumnData> {
        self.columns.iter().find(|c| c.name == name).map(|c| &c.data)
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn row_count(&self) -> usize {
        self.columns.first().map_or(0, |c| c.data.len())
    }

    fn check_finite(&self) -> Result<()> {
        for c in &self.columns {
            if let ColumnData::Real(v) = &c.data {
                if let Some(row) = v.iter().position(|x| !x.is_finite()) {
                    return Err(Error::domain(format!(
                        "column {:?} row {} is {}; tables must be finite",
                        c.name,
                        row + 1,
                        v[row]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Serialize as CSV. Fails before writing anything if a value is not finite.
    pub fn write_csv<W: Write>(&self, writer: W) -> std::result::Result<(), TableWriteError> {
        self.check_finite().map_err(TableWriteError::Invalid)?;
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        let mut record = Vec::with_capacity(self.columns.len());
        for row in 0..self.row_count() {
            record.clear();
            record.extend(self.columns.iter().map(|c| c.data.cell(row)));
            w.write_record(&record)?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> std::result::Result<Self, csv::Error> {
        let mut r = csv::Reader::from_reader(reader);
        let headers: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut cells: Vec<Vec<String>> = vec![Vec::new(); headers.len()];
        for record in r.records() {
            let record = record?;
            for (col, field) in cells.iter_mut().zip(record.iter()) {
                col.push(field.to_string());
            }
        }
        let mut table = ExperimentTable::new();
        for (name, raw) in headers.iter().zip(cells) {
            let data = if let Ok(ints) = raw.iter().map(|s| s.parse::<i64>()).collect::<std::result::Result<Vec<_>, _>>() {
                ColumnData::Int(ints)
            } else {
                let mut reals = Vec::with_capacity(raw.len());
                for (row, s) in raw.iter().enumerate() {
                    reals.push(s.parse::<f64>().map_err(|_| {
                        csv_parse_error(format!("column {name:?} row {}: {s:?} is not a number", row + 1))
                    })?);
                }
                ColumnData::Real(reals)
            };
            table
                .push(name, data)
                .map_err(|e| csv_parse_error(e.to_string()))?;
        }
        Ok(table)
    }
}

fn csv_parse_error(msg: String) -> csv::Error {
    csv::Error::from(std::io::Error::new(std::io::ErrorKind::InvalidData, msg))
}

#[derive(Debug)]
pub enum TableWriteError {
    Invalid(Error),
    Csv(csv::Error),
}

impl From<csv::Error> for TableWriteError {
    fn from(e: csv::Error) -> Self {
        TableWriteError::Csv(e)
    }
}

/// Sidecar path holding table metadata, `<path>.meta.json`.
pub fn metadata_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    metadata: BTreeMap<String, String>,
}

/// Write `table` to `path` as CSV, with metadata (if any) in the sidecar.
pub fn write_table(path: &Path, table: &ExperimentTable) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    table.check_finite()?;
    let file = File::create(path).map_err(io_err)?;
    table.write_csv(BufWriter::new(file)).map_err(|e| match e {
        TableWriteError::Invalid(e) => e,
        TableWriteError::Csv(source) => Error::Csv {
            path: path.to_path_buf(),
            source,
        },
    })?;
    if !table.metadata.is_empty() {
        let meta_path = metadata_path(path);
        let mut f = File::create(&meta_path).map_err(|source| Error::Io {
            path: meta_path.clone(),
            source,
        })?;
        let sidecar = Sidecar {
            metadata: table.metadata.clone(),
        };
        let text = serde_json::to_string_pretty(&sidecar).map_err(|source| Error::Metadata {
            path: meta_path.clone(),
            source,
        })?;
        writeln!(f, "{text}").map_err(|source| Error::Io { path: meta_path, source })?;
    }
    Ok(())
}

/// Read a table written by [`write_table`] (or any CSV with a header row).
pub fn read_table(path: &Path) -> Result<ExperimentTable> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut table = ExperimentTable::read_csv(BufReader::new(file)).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    let meta_path = metadata_path(path);
    if meta_path.exists() {
        let f = File::open(&meta_path).map_err(|source| Error::Io {
            path: meta_path.clone(),
            source,
        })?;
        let sidecar: Sidecar =
            serde_json::from_reader(BufReader::new(f)).map_err(|source| Error::Metadata { path: meta_path, source })?;
        table.metadata = sidecar.metadata;
    }
    Ok(table)
}
