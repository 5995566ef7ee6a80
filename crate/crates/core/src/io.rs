//! Readers for delimited numeric tables, feature files and distance inputs.
//!
//! Files may be comma- or tab-separated (sniffed from the first data line),
//! may start with a header row, and may contain `#` comment lines. Parse
//! errors carry the file path and 1-based line number.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::complex::{compute_distances, invalid_cell, DistanceMatrix, Metric};
use crate::error::{Error, Result};
use crate::features::{FeatureSet, TupleTable};

/// How a distance input file should be interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    /// Rows are points; distances are computed with the given metric.
    Points(Metric),
    /// The file already holds a square symmetric distance matrix.
    Precomputed,
}

impl std::str::FromStr for InputKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "precomputed" => Ok(InputKind::Precomputed),
            other => other.parse().map(InputKind::Points),
        }
    }
}

struct Record {
    line: u64,
    fields: Vec<String>,
}

fn read_records(path: &Path) -> Result<Vec<Record>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let first = text
        .lines()
        .find(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    let delimiter = if first.contains('\t') { b'\t' } else { b',' };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .delimiter(delimiter)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        out.push(Record {
            line: rec.position().map_or(0, |p| p.line()),
            fields: rec.iter().map(str::to_string).collect(),
        });
    }
    Ok(out)
}

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn is_number(s: &str) -> bool {
    s.parse::<f64>().is_ok()
}

fn parse_f64(path: &Path, line: u64, s: &str) -> Result<f64> {
    let x: f64 = s
        .parse()
        .map_err(|_| parse_error(path, line, format!("{s:?} is not a number")))?;
    if x.is_nan() {
        return Err(parse_error(path, line, "NaN values are not allowed"));
    }
    Ok(x)
}

fn parse_index(path: &Path, line: u64, s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| parse_error(path, line, format!("{s:?} is not a vertex index")))
}

/// A numeric matrix with the source line of each row.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericTable {
    pub path: PathBuf,
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<f64>>,
    pub lines: Vec<u64>,
}

/// Reads an all-numeric table. A first row containing any non-numeric field
/// is taken as a header.
pub fn read_matrix(path: &Path) -> Result<NumericTable> {
    let mut records = read_records(path)?;
    let header = match records.first() {
        Some(r) if !r.fields.iter().all(|f| is_number(f)) => Some(records.remove(0).fields),
        _ => None,
    };
    let width = header.as_ref().map(Vec::len).or_else(|| records.first().map(|r| r.fields.len()));
    let mut rows = Vec::with_capacity(records.len());
    let mut lines = Vec::with_capacity(records.len());
    for r in &records {
        if Some(r.fields.len()) != width {
            return Err(parse_error(
                path,
                r.line,
                format!("expected {} columns, found {}", width.unwrap_or(0), r.fields.len()),
            ));
        }
        rows.push(
            r.fields
                .iter()
                .map(|f| parse_f64(path, r.line, f))
                .collect::<Result<Vec<_>>>()?,
        );
        lines.push(r.line);
    }
    if rows.is_empty() {
        return Err(parse_error(path, 1, "no data rows"));
    }
    Ok(NumericTable {
        path: path.to_path_buf(),
        header,
        rows,
        lines,
    })
}

/// Loads a distance matrix, either directly or from point coordinates.
pub fn read_distances(path: &Path, kind: InputKind) -> Result<DistanceMatrix> {
    let table = read_matrix(path)?;
    match kind {
        InputKind::Points(metric) => compute_distances(&table.rows, metric),
        InputKind::Precomputed => {
            let n = table.rows.len();
            if let Some((i, r)) = table.rows.iter().enumerate().find(|(_, r)| r.len() != n) {
                return Err(parse_error(
                    path,
                    table.lines[i],
                    format!("distance matrix must be square: {n} rows but {} columns", r.len()),
                ));
            }
            let data = table.rows.concat();
            if let Some((row, _, message)) = invalid_cell(n, &data) {
                return Err(parse_error(path, table.lines[row], message));
            }
            DistanceMatrix::new(n, data)
        }
    }
}

/// Reads 1-point features: one feature per row, its name in the first column
/// and one value per sample after it. A header row is recognised when its
/// value columns are not all numeric.
pub fn read_point_features(path: &Path) -> Result<FeatureSet> {
    let mut records = read_records(path)?;
    if let Some(r) = records.first() {
        if !r.fields[1..].iter().all(|f| is_number(f)) {
            records.remove(0);
        }
    }
    if records.is_empty() {
        return Err(parse_error(path, 1, "no feature rows"));
    }
    let width = records[0].fields.len();
    let mut names = Vec::with_capacity(records.len());
    let mut rows = Vec::with_capacity(records.len());
    for r in &records {
        if r.fields.len() != width || width < 2 {
            return Err(parse_error(
                path,
                r.line,
                format!("expected a name and {} values, found {} columns", width.saturating_sub(1), r.fields.len()),
            ));
        }
        names.push(r.fields[0].clone());
        rows.push(
            r.fields[1..]
                .iter()
                .map(|f| parse_f64(path, r.line, f))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    FeatureSet::from_points(names, rows)
}

/// Reads 2-point features as triplets `i, j, value` with `i < j`. With three
/// columns the file holds one feature named after the file stem; with four
/// the first column names the feature. Tuples absent from the file take
/// `fill` when given and are an error at induction time otherwise.
pub fn read_pair_features(path: &Path, fill: Option<f64>) -> Result<FeatureSet> {
    let mut records = read_records(path)?;
    if let Some(r) = records.first() {
        if !r.fields.last().is_some_and(|f| is_number(f)) {
            records.remove(0);
        }
    }
    if records.is_empty() {
        return Err(parse_error(path, 1, "no triplet rows"));
    }
    let width = records[0].fields.len();
    if width != 3 && width != 4 {
        return Err(parse_error(
            path,
            records[0].line,
            format!("expected 3 columns (i, j, value) or 4 (feature, i, j, value), found {width}"),
        ));
    }
    let default_name = path
        .file_stem()
        .map_or_else(|| "feature".to_string(), |s| s.to_string_lossy().into_owned());

    let mut names: Vec<String> = Vec::new();
    let mut tables: Vec<TupleTable> = Vec::new();
    let mut slot: HashMap<String, usize> = HashMap::new();
    for r in &records {
        if r.fields.len() != width {
            return Err(parse_error(
                path,
                r.line,
                format!("expected {width} columns, found {}", r.fields.len()),
            ));
        }
        let (name, rest) = if width == 4 {
            (r.fields[0].clone(), &r.fields[1..])
        } else {
            (default_name.clone(), &r.fields[..])
        };
        let i = parse_index(path, r.line, &rest[0])?;
        let j = parse_index(path, r.line, &rest[1])?;
        if i >= j {
            return Err(parse_error(path, r.line, format!("pair ({i}, {j}) must satisfy i < j")));
        }
        let value = parse_f64(path, r.line, &rest[2])?;
        let idx = *slot.entry(name.clone()).or_insert_with(|| {
            names.push(name.clone());
            tables.push(TupleTable::new(2, fill));
            tables.len() - 1
        });
        tables[idx]
            .insert(vec![i, j], value)
            .map_err(|e| parse_error(path, r.line, e.to_string()))?;
    }
    FeatureSet::from_tuples(names, 2, tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(contents: &str, suffix: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(suffix).tempfile().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn matrix_with_and_without_header() {
        let a = read_matrix(file("x,y\n0,0\n1,0\n", ".csv").path()).unwrap();
        assert_eq!(a.header, Some(vec!["x".into(), "y".into()]));
        assert_eq!(a.rows, vec![vec![0.0, 0.0], vec![1.0, 0.0]]);
        assert_eq!(a.lines, vec![2, 3]);
        let b = read_matrix(file("0\t0\n1\t0\n", ".tsv").path()).unwrap();
        assert_eq!(b.header, None);
        assert_eq!(b.rows, a.rows);
    }

    #[test]
    fn ragged_row_names_its_line() {
        let err = read_matrix(file("0,0\n1,0,3\n", ".csv").path()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("unexpected {e:?}"),
        }
        let err = read_matrix(file("0,0\n1,oops\n", ".csv").path()).unwrap_err();
        assert!(err.to_string().contains(":2:"), "{err}");
    }

    #[test]
    fn asymmetric_precomputed_names_the_cell() {
        let f = file("0,1,2\n1,0,1\n2,1.5,0\n", ".csv");
        let err = read_distances(f.path(), InputKind::Precomputed).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{msg}");
        assert!(msg.contains("(1, 2)"), "{msg}");
    }

    #[test]
    fn precomputed_must_be_square() {
        let f = file("0,1\n1,0\n2,2\n", ".csv");
        assert!(read_distances(f.path(), InputKind::Precomputed).is_err());
    }

    #[test]
    fn point_features_optional_header() {
        let with = read_point_features(file("gene\ts0\ts1\ts2\ng1\t1\t0\t0\ng2\t0\t1\t2\n", ".tsv").path()).unwrap();
        let without = read_point_features(file("g1\t1\t0\t0\ng2\t0\t1\t2\n", ".tsv").path()).unwrap();
        assert_eq!(with, without);
        assert_eq!(with.names(), &["g1".to_string(), "g2".to_string()]);
        assert_eq!(with.len(), 2);
    }

    #[test]
    fn pair_features_three_and_four_columns() {
        let f = file("i\tj\tvalue\n0\t1\t0.3\n1\t2\t0.5\n", ".tsv");
        let fs = read_pair_features(f.path(), None).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs.arity(), 2);

        let g = file("a,0,1,1\nb,0,1,2\na,1,2,3\n", ".csv");
        let fs = read_pair_features(g.path(), Some(0.0)).unwrap();
        assert_eq!(fs.names(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn pair_features_reject_unordered_pairs() {
        let f = file("1\t0\t0.3\n", ".tsv");
        let err = read_pair_features(f.path(), None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let err = read_matrix(Path::new("/nonexistent/x.csv")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
