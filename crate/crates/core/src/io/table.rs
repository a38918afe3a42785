//! Delimiter-separated genotype tables with missing cells.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Which column holds the binary response.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResponseColumn {
    Name(String),
    /// 1-based position in the header.
    Index(usize),
}

impl ResponseColumn {
    /// A header name wins over a numeric reading of the same text.
    fn resolve(&self, header: &[String]) -> Option<usize> {
        match self {
            ResponseColumn::Name(name) => header
                .iter()
                .position(|h| h == name)
                .or_else(|| name.parse::<usize>().ok().filter(|&k| k >= 1 && k <= header.len()).map(|k| k - 1)),
            ResponseColumn::Index(k) => (*k >= 1 && *k <= header.len()).then(|| k - 1),
        }
    }
}

impl From<&str> for ResponseColumn {
    fn from(s: &str) -> Self {
        ResponseColumn::Name(s.to_string())
    }
}

/// Parsed table. Cells are variable-major: `cells[j * n + i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTable {
    names: Vec<String>,
    n: usize,
    cells: Vec<Option<u8>>,
    response: Vec<u8>,
    response_name: String,
}

fn detect_delimiter(header: &str) -> char {
    if header.contains('\t') {
        '\t'
    } else {
        ','
    }
}

fn parse_cell(s: &str) -> std::result::Result<Option<u8>, String> {
    match s.trim() {
        "" | "NA" => Ok(None),
        "0" => Ok(Some(0)),
        "1" => Ok(Some(1)),
        "2" => Ok(Some(2)),
        other => Err(format!("cell {other:?} is not one of 0, 1, 2, NA")),
    }
}

pub fn load_table(path: impl AsRef<Path>, response: &ResponseColumn) -> Result<RawTable> {
    let text = std::fs::read_to_string(path)?;
    parse_table(&text, response)
}

/// Parses a header line plus data rows. Lines starting with `#` and blank
/// lines are skipped. Reported row and column numbers are 1-based file
/// lines and fields.
pub fn parse_table(text: &str, response: &ResponseColumn) -> Result<RawTable> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::Parse {
            row: 1,
            column: 1,
            message: "missing header line".into(),
        })?;
    let delim = detect_delimiter(header);
    let header: Vec<String> = header.split(delim).map(|h| h.trim().to_string()).collect();
    let resp = response.resolve(&header).ok_or_else(|| Error::Parse {
        row: header_line + 1,
        column: 1,
        message: format!("response column {response:?} not found in header"),
    })?;
    let width = header.len();
    let p = width - 1;
    let mut by_var: Vec<Vec<Option<u8>>> = vec![Vec::new(); p];
    let mut y = Vec::new();
    for (lineno, line) in lines {
        let fields: Vec<&str> = line.split(delim).collect();
        if fields.len() != width {
            return Err(Error::Parse {
                row: lineno + 1,
                column: fields.len().min(width) + 1,
                message: format!("expected {width} fields, found {}", fields.len()),
            });
        }
        let mut j = 0;
        for (c, f) in fields.iter().enumerate() {
            let err = |message: String| Error::Parse {
                row: lineno + 1,
                column: c + 1,
                message,
            };
            if c == resp {
                match f.trim() {
                    "0" => y.push(0),
                    "1" => y.push(1),
                    other => return Err(err(format!("response {other:?} is not 0 or 1"))),
                }
            } else {
                by_var[j].push(parse_cell(f).map_err(err)?);
                j += 1;
            }
        }
    }
    let n = y.len();
    let response_name = header[resp].clone();
    let names = header
        .into_iter()
        .enumerate()
        .filter(|&(c, _)| c != resp)
        .map(|(_, h)| h)
        .collect();
    Ok(RawTable {
        names,
        n,
        cells: by_var.into_iter().flatten().collect(),
        response: y,
        response_name,
    })
}

/// Per-column imputation counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImputeReport {
    pub imputed: Vec<usize>,
    pub seed: u64,
}

impl RawTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn response(&self) -> &[u8] {
        &self.response
    }

    pub fn response_name(&self) -> &str {
        &self.response_name
    }

    pub fn column(&self, j: usize) -> &[Option<u8>] {
        &self.cells[j * self.n..(j + 1) * self.n]
    }

    pub fn missing(&self) -> usize {
        self.cells.iter().filter(|c| c.is_none()).count()
    }

    /// Replaces each missing cell by a uniform draw among the observed
    /// cells of its column. Columns are visited left to right, rows top to
    /// bottom, all from one stream seeded with `seed`.
    pub fn impute(&self, seed: u64) -> Result<(RawTable, ImputeReport)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = self.clone();
        let mut imputed = vec![0; self.p()];
        for (j, count) in imputed.iter_mut().enumerate() {
            let col = &mut out.cells[j * self.n..(j + 1) * self.n];
            let observed: Vec<u8> = col.iter().flatten().copied().collect();
            let missing = col.len() - observed.len();
            if missing == 0 {
                continue;
            }
            if observed.is_empty() {
                return Err(Error::invalid_dataset(format!(
                    "column {:?} has no observed cells to impute from",
                    self.names[j]
                )));
            }
            for c in col.iter_mut().filter(|c| c.is_none()) {
                *c = Some(observed[rng.gen_range(0..observed.len())]);
            }
            *count = missing;
        }
        Ok((out, ImputeReport { imputed, seed }))
    }

    /// Drops all-zero columns, or with `zero_variance` every constant
    /// column. Missing cells are ignored when judging a column. Returns the
    /// filtered table and the dropped column indices.
    pub fn drop_uninformative(&self, zero_variance: bool) -> (RawTable, Vec<usize>) {
        let mut keep = Vec::new();
        let mut dropped = Vec::new();
        for j in 0..self.p() {
            let mut observed = self.column(j).iter().flatten();
            let first = observed.next().copied();
            let constant = observed.all(|&v| Some(v) == first);
            let uninformative = match first {
                None => zero_variance,
                Some(v) => constant && (v == 0 || zero_variance),
            };
            if uninformative {
                dropped.push(j);
            } else {
                keep.push(j);
            }
        }
        (self.select_columns(&keep), dropped)
    }

    pub fn select_columns(&self, keep: &[usize]) -> RawTable {
        RawTable {
            names: keep.iter().map(|&j| self.names[j].clone()).collect(),
            n: self.n,
            cells: keep.iter().flat_map(|&j| self.column(j).iter().copied()).collect(),
            response: self.response.clone(),
            response_name: self.response_name.clone(),
        }
    }

    /// Requires every cell to be observed.
    pub fn into_dataset(self) -> Result<Dataset> {
        if let Some(pos) = self.cells.iter().position(Option::is_none) {
            return Err(Error::invalid_dataset(format!(
                "missing cell in column {:?}, row {}; impute first",
                self.names[pos / self.n.max(1)],
                pos % self.n.max(1) + 1
            )));
        }
        let x = self.cells.into_iter().flatten().collect();
        Dataset::from_columns(self.n, self.names.len(), x, self.response)?.with_names(self.names)
    }
}

/// Tab-separated preprocessing summary.
pub fn preprocess_report(original: &RawTable, dropped: &[usize], imputation: &ImputeReport) -> String {
    let mut out = String::from("kind\tcolumn\tvalue\n");
    out.push_str(&format!("seed\t\t{}\n", imputation.seed));
    out.push_str(&format!("columns_in\t\t{}\n", original.p()));
    out.push_str(&format!("columns_out\t\t{}\n", original.p() - dropped.len()));
    for (name, &c) in original.names().iter().zip(&imputation.imputed) {
        if c > 0 {
            out.push_str(&format!("imputed\t{name}\t{c}\n"));
        }
    }
    for &j in dropped {
        out.push_str(&format!("dropped\t{}\t\n", original.names()[j]));
    }
    out
}
