use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use bgb_core::linalg::{factor_pd, SymMatrix};

use crate::{Failure, EXIT_IO, EXIT_PARSE};

/// Reads a JSON array-of-rows file as a symmetric matrix. Every failure,
/// including a missing file, is a parse error.
pub fn read_matrix(path: &Path) -> Result<SymMatrix, Failure> {
    let fail = |msg: String| Failure::new(EXIT_PARSE, format!("{}: {msg}", path.display()));
    let text = fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
    let rows: Vec<Vec<f64>> = serde_json::from_str(&text).map_err(|e| fail(e.to_string()))?;
    SymMatrix::from_rows(&rows).map_err(|e| fail(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    // serde_json prints floats with the shortest round-trip representation.
    serde_json::to_string(value).expect("report types serialise")
}

pub fn write_stdout(body: &str) -> io::Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(body.as_bytes())?;
    if !body.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn print(body: &str) -> Result<(), Failure> {
    write_stdout(body).map_err(|e| Failure::new(EXIT_IO, format!("writing output: {e}")))
}

/// Writes `lines` to `path`, or to standard output when `path` is `None`.
pub fn write_lines<'a>(path: Option<&Path>, lines: impl IntoIterator<Item = &'a str>) -> Result<(), Failure> {
    let io_fail = |e: io::Error| {
        let target = path.map_or("standard output".to_string(), |p| p.display().to_string());
        Failure::new(EXIT_IO, format!("{target}: {e}"))
    };
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(fs::File::create(p).map_err(io_fail)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    for line in lines {
        w.write_all(line.as_bytes()).map_err(io_fail)?;
        w.write_all(b"\n").map_err(io_fail)?;
    }
    w.flush().map_err(io_fail)
}

/// One draw as written by `sample`.
#[derive(Serialize)]
pub struct SampleRecord {
    pub index: usize,
    pub first: Vec<Vec<f64>>,
    pub second: Vec<Vec<f64>>,
    pub logdet_first: f64,
    pub logdet_second: f64,
}

impl SampleRecord {
    pub fn new(index: usize, first: &SymMatrix, second: &SymMatrix) -> bgb_core::Result<Self> {
        Ok(SampleRecord {
            index,
            first: first.rows(),
            second: second.rows(),
            logdet_first: factor_pd(first.clone())?.logdet(),
            logdet_second: factor_pd(second.clone())?.logdet(),
        })
    }

    pub fn csv_header(m: usize) -> String {
        let mut cols = vec!["index".to_string()];
        for name in ["first", "second"] {
            for i in 0..m {
                for j in 0..m {
                    cols.push(format!("{name}_{i}_{j}"));
                }
            }
        }
        cols.push("logdet_first".into());
        cols.push("logdet_second".into());
        cols.join(",")
    }

    pub fn csv_row(&self) -> String {
        let mut cols = vec![self.index.to_string()];
        for mat in [&self.first, &self.second] {
            cols.extend(mat.iter().flatten().map(|v| v.to_string()));
        }
        cols.push(self.logdet_first.to_string());
        cols.push(self.logdet_second.to_string());
        cols.join(",")
    }
}

/// Formats an optional number for CSV; `Display` on `f64` round-trips.
pub fn csv_num(v: Option<f64>) -> String {
    v.map_or(String::new(), |v| v.to_string())
}
