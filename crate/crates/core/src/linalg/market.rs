//! Matrix Market text files.
//!
//! Matrices are written as `coordinate real symmetric` with 1-based indices
//! and only the lower triangle stored. Vectors use the dense `array real
//! general` layout with a single column. Values are printed in shortest
//! round-trip form, so reading back a written file reproduces it bit for bit.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::SparseMatrix;
use crate::error::{Error, Result};

const MATRIX_HEADER: &str = "%%MatrixMarket matrix coordinate real symmetric";
const VECTOR_HEADER: &str = "%%MatrixMarket matrix array real general";

pub fn mm_write(a: &SparseMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    write_matrix(a, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| io_err(path, e))
}

pub fn mm_read(path: impl AsRef<Path>) -> Result<SparseMatrix> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    read_matrix(BufReader::new(file))
}

pub fn write_vector(v: &[f64], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    write_vector_to(v, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| io_err(path, e))
}

pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    read_vector_from(BufReader::new(file))
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_matrix<W: Write>(a: &SparseMatrix, w: &mut W) -> std::io::Result<()> {
    let lower: Vec<_> = a.triplets().filter(|&(i, j, _)| j <= i).collect();
    writeln!(w, "{MATRIX_HEADER}")?;
    writeln!(w, "{} {} {}", a.dim(), a.dim(), lower.len())?;
    for (i, j, v) in lower {
        writeln!(w, "{} {} {:e}", i + 1, j + 1, v)?;
    }
    Ok(())
}

pub fn write_vector_to<W: Write>(v: &[f64], w: &mut W) -> std::io::Result<()> {
    writeln!(w, "{VECTOR_HEADER}")?;
    writeln!(w, "{} 1", v.len())?;
    for x in v {
        writeln!(w, "{x:e}")?;
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    Symmetric,
    General,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Numbered, non-comment, non-blank lines after the banner.
struct Body<R> {
    lines: std::iter::Enumerate<std::io::Lines<R>>,
}

impl<R: BufRead> Body<R> {
    fn next_line(&mut self) -> Result<Option<(usize, String)>> {
        for (idx, line) in self.lines.by_ref() {
            let line = line.map_err(|e| parse_err(idx + 1, e.to_string()))?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('%') {
                continue;
            }
            return Ok(Some((idx + 1, t.to_string())));
        }
        Ok(None)
    }
}

fn banner<R: BufRead>(reader: R) -> Result<(Vec<String>, Body<R>)> {
    let mut lines = reader.lines().enumerate();
    let (_, first) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let first = first.map_err(|e| parse_err(1, e.to_string()))?;
    let tokens: Vec<String> = first.split_whitespace().map(|s| s.to_ascii_lowercase()).collect();
    if tokens.first().map(String::as_str) != Some("%%matrixmarket") || tokens.len() != 5 {
        return Err(parse_err(1, format!("bad banner: {first:?}")));
    }
    if tokens[1] != "matrix" {
        return Err(parse_err(1, format!("unsupported object {:?}", tokens[1])));
    }
    if tokens[3] != "real" && tokens[3] != "integer" {
        return Err(parse_err(1, format!("unsupported field {:?}", tokens[3])));
    }
    Ok((tokens, Body { lines }))
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| parse_err(line, format!("invalid {what}")))
}

pub fn read_matrix<R: BufRead>(reader: R) -> Result<SparseMatrix> {
    let (tokens, mut body) = banner(reader)?;
    if tokens[2] != "coordinate" {
        return Err(parse_err(1, "expected coordinate format"));
    }
    let symmetry = match tokens[4].as_str() {
        "symmetric" => Symmetry::Symmetric,
        "general" => Symmetry::General,
        other => return Err(parse_err(1, format!("unsupported symmetry {other:?}"))),
    };

    let (size_line, size) = body
        .next_line()?
        .ok_or_else(|| parse_err(2, "missing size line"))?;
    let mut it = size.split_whitespace();
    let rows: usize = parse_num(it.next(), size_line, "row count")?;
    let cols: usize = parse_num(it.next(), size_line, "column count")?;
    let nnz: usize = parse_num(it.next(), size_line, "entry count")?;
    if it.next().is_some() {
        return Err(parse_err(size_line, "trailing tokens on size line"));
    }
    if rows != cols {
        return Err(parse_err(size_line, format!("matrix is {rows}x{cols}, not square")));
    }

    let mut triplets = Vec::with_capacity(2 * nnz);
    for _ in 0..nnz {
        let (ln, entry) = body
            .next_line()?
            .ok_or_else(|| parse_err(size_line, format!("expected {nnz} entries")))?;
        let mut it = entry.split_whitespace();
        let i: usize = parse_num(it.next(), ln, "row index")?;
        let j: usize = parse_num(it.next(), ln, "column index")?;
        let v: f64 = parse_num(it.next(), ln, "value")?;
        if it.next().is_some() {
            return Err(parse_err(ln, "trailing tokens"));
        }
        if i == 0 || j == 0 || i > rows || j > rows {
            return Err(parse_err(ln, format!("index ({i}, {j}) out of range")));
        }
        let (i, j) = (i - 1, j - 1);
        match symmetry {
            Symmetry::Symmetric => {
                if j > i {
                    return Err(parse_err(ln, "upper-triangle entry in symmetric file"));
                }
                triplets.push((i, j, v));
                if i != j {
                    triplets.push((j, i, v));
                }
            }
            Symmetry::General => triplets.push((i, j, v)),
        }
    }
    if let Some((ln, _)) = body.next_line()? {
        return Err(parse_err(ln, format!("more than {nnz} entries")));
    }
    SparseMatrix::from_triplets(rows, &triplets)
}

pub fn read_vector_from<R: BufRead>(reader: R) -> Result<Vec<f64>> {
    let (tokens, mut body) = banner(reader)?;
    if tokens[2] != "array" || tokens[4] != "general" {
        return Err(parse_err(1, "expected array real general"));
    }
    let (size_line, size) = body
        .next_line()?
        .ok_or_else(|| parse_err(2, "missing size line"))?;
    let mut it = size.split_whitespace();
    let rows: usize = parse_num(it.next(), size_line, "row count")?;
    let cols: usize = parse_num(it.next(), size_line, "column count")?;
    if cols != 1 {
        return Err(parse_err(size_line, "vector files must have one column"));
    }
    let mut out = Vec::with_capacity(rows);
    for _ in 0..rows {
        let (ln, entry) = body
            .next_line()?
            .ok_or_else(|| parse_err(size_line, format!("expected {rows} values")))?;
        out.push(parse_num(Some(entry.as_str()), ln, "value")?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::tridiag;

    fn round_trip(a: &SparseMatrix) -> SparseMatrix {
        let mut buf = Vec::new();
        write_matrix(a, &mut buf).unwrap();
        read_matrix(buf.as_slice()).unwrap()
    }

    #[test]
    fn tridiag_round_trip() {
        let a = tridiag(3, 1.0).unwrap();
        assert_eq!(round_trip(&a), a);
        let b = tridiag(5, 1.0 / 3.0).unwrap().shift(std::f64::consts::PI);
        assert_eq!(round_trip(&b), b);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.mtx");
        let a = tridiag(4, 0.1).unwrap();
        mm_write(&a, &path).unwrap();
        assert_eq!(mm_read(&path).unwrap(), a);

        let vpath = dir.path().join("v.mtx");
        let v = vec![0.1, -2.5e-300, 7.0];
        write_vector(&v, &vpath).unwrap();
        assert_eq!(read_vector(&vpath).unwrap(), v);
    }

    #[test]
    fn empty_file_is_parse_error() {
        let err = read_matrix(&b""[..]).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn general_header_requires_symmetry() {
        let sym = "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 2\n1 2 -1\n2 1 -1\n";
        let a = read_matrix(sym.as_bytes()).unwrap();
        assert_eq!(a.to_dense(), vec![2.0, -1.0, -1.0, 0.0]);

        let asym = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 2\n1 2 -1\n";
        assert!(matches!(read_matrix(asym.as_bytes()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn malformed_entries_report_line() {
        let bad = "%%MatrixMarket matrix coordinate real symmetric\n% note\n2 2 2\n1 1 2\n2 x 1\n";
        match read_matrix(bad.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
        let short = "%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n1 1 2\n";
        assert!(matches!(read_matrix(short.as_bytes()), Err(Error::Parse { .. })));
        let upper = "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 2\n";
        assert!(matches!(read_matrix(upper.as_bytes()), Err(Error::Parse { line: 3, .. })));
        let banner = "%%MatrixMarket matrix coordinate complex symmetric\n1 1 1\n1 1 1\n";
        assert!(matches!(read_matrix(banner.as_bytes()), Err(Error::Parse { line: 1, .. })));
    }
}
