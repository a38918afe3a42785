//! Dataset model: an `n × p` matrix of small genotype/indicator codes plus a
//! binary response, and the transposed augmented matrix `[X, y]ᵀ`.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Value domain of the explanatory variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coding {
    /// Entries in {0, 1}.
    Binary,
    /// Entries in {0, 1, 2} (additive SNP coding).
    Ternary,
}

/// Design matrix and binary response.
///
/// Storage is variable-major: the `n` observations of variable `j` are
/// contiguous, so `column(j)` is a slice. Variable indices are 0-based in
/// the API; text formats written by this crate use 1-based indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n: usize,
    p: usize,
    x: Vec<u8>,
    y: Vec<u8>,
    names: Option<Vec<String>>,
    coding: Coding,
}

impl Dataset {
    /// Builds a dataset from variable-major storage (`x[j * n + i]` is
    /// observation `i` of variable `j`).
    pub fn from_columns(n: usize, p: usize, x: Vec<u8>, y: Vec<u8>) -> Result<Self> {
        if n == 0 || p == 0 {
            return Err(Error::invalid_dataset(format!(
                "dimensions must be positive (n = {n}, p = {p})"
            )));
        }
        if x.len() != n * p {
            return Err(Error::invalid_dataset(format!(
                "x has {} entries, expected n * p = {}",
                x.len(),
                n * p
            )));
        }
        if y.len() != n {
            return Err(Error::invalid_dataset(format!(
                "y has length {}, expected n = {n}",
                y.len()
            )));
        }
        if let Some(v) = x.iter().find(|&&v| v > 2) {
            return Err(Error::invalid_dataset(format!(
                "entry {v} outside the {{0, 1, 2}} domain"
            )));
        }
        if let Some(v) = y.iter().find(|&&v| v > 1) {
            return Err(Error::invalid_dataset(format!("response value {v} is not binary")));
        }
        let coding = if x.contains(&2) {
            Coding::Ternary
        } else {
            Coding::Binary
        };
        Ok(Dataset {
            n,
            p,
            x,
            y,
            names: None,
            coding,
        })
    }

    /// Builds a dataset from observation rows.
    pub fn from_rows(rows: &[Vec<u8>], y: Vec<u8>) -> Result<Self> {
        let n = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != p) {
            return Err(Error::invalid_dataset(format!(
                "row {i} has {} entries, expected {p}",
                r.len()
            )));
        }
        let mut x = vec![0u8; n * p];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                x[j * n + i] = v;
            }
        }
        Self::from_columns(n, p, x, y)
    }

    /// Attaches variable names; they must be `p` distinct strings.
    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.p {
            return Err(Error::invalid_dataset(format!(
                "{} names supplied for {} variables",
                names.len(),
                self.p
            )));
        }
        let mut seen = HashSet::with_capacity(names.len());
        if let Some(dup) = names.iter().find(|s| !seen.insert(s.as_str())) {
            return Err(Error::invalid_dataset(format!("duplicate variable name {dup:?}")));
        }
        self.names = Some(names);
        Ok(self)
    }

    /// Restricts the coding; fails if the data use values outside it.
    pub fn require_coding(&self, coding: Coding) -> Result<()> {
        if coding == Coding::Binary && self.coding == Coding::Ternary {
            return Err(Error::invalid_dataset("binary coding required but value 2 present"));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn coding(&self) -> Coding {
        self.coding
    }

    pub fn y(&self) -> &[u8] {
        &self.y
    }

    pub fn column(&self, j: usize) -> &[u8] {
        &self.x[j * self.n..(j + 1) * self.n]
    }

    pub fn value(&self, i: usize, j: usize) -> u8 {
        self.x[j * self.n + i]
    }

    pub fn row(&self, i: usize) -> Vec<u8> {
        (0..self.p).map(|j| self.value(i, j)).collect()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display name of variable `j`: its given name or `X{j+1}`.
    pub fn name(&self, j: usize) -> String {
        match &self.names {
            Some(names) => names[j].clone(),
            None => format!("X{}", j + 1),
        }
    }

    /// Number of observations with response 1.
    pub fn cases(&self) -> usize {
        self.y.iter().filter(|&&v| v == 1).count()
    }

    /// Fails unless the response contains both classes.
    pub fn check_response(&self) -> Result<()> {
        let ones = self.cases();
        if ones == 0 || ones == self.n {
            return Err(Error::invalid_dataset(
                "response must contain at least one 0 and one 1",
            ));
        }
        Ok(())
    }

    /// New dataset keeping only the given variables, in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> Result<Dataset> {
        if let Some(&j) = indices.iter().find(|&&j| j >= self.p) {
            return Err(Error::invalid_argument(format!(
                "variable index {j} out of range for p = {}",
                self.p
            )));
        }
        let mut x = Vec::with_capacity(indices.len() * self.n);
        for &j in indices {
            x.extend_from_slice(self.column(j));
        }
        let mut out = Dataset::from_columns(self.n, indices.len(), x, self.y.clone())?;
        if let Some(names) = &self.names {
            out.names = Some(indices.iter().map(|&j| names[j].clone()).collect());
        }
        Ok(out)
    }

    /// New dataset made of the given observations (repeats allowed).
    pub fn select_rows(&self, rows: &[usize]) -> Result<Dataset> {
        if let Some(&i) = rows.iter().find(|&&i| i >= self.n) {
            return Err(Error::invalid_argument(format!(
                "observation index {i} out of range for n = {}",
                self.n
            )));
        }
        let m = rows.len();
        let mut x = Vec::with_capacity(m * self.p);
        for j in 0..self.p {
            let col = self.column(j);
            x.extend(rows.iter().map(|&i| col[i]));
        }
        let y = rows.iter().map(|&i| self.y[i]).collect();
        let mut out = Dataset::from_columns(m, self.p, x, y)?;
        out.names = self.names.clone();
        Ok(out)
    }
}

/// The `(p+1) × n` matrix `[X, y]ᵀ`: row `j < p` is variable `j` across
/// observations, row `p` is the response.
///
/// Stored column-major (each observation is a contiguous column of length
/// `p + 1`), which is the layout the orthonormal factorization works on.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl AugmentedMatrix {
    /// Wraps arbitrary column-major data. The last row plays the role of
    /// the response.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows < 2 || cols == 0 {
            return Err(Error::invalid_argument(format!(
                "augmented matrix needs at least 2 rows and 1 column, got {rows} x {cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                left: data.len(),
                right: rows * cols,
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid_argument("augmented matrix has non-finite entries"));
        }
        Ok(AugmentedMatrix { rows, cols, data })
    }

    /// Builds from a closure `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for c in 0..cols {
            for r in 0..rows {
                data.push(f(r, c));
            }
        }
        Self::from_col_major(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[c * self.rows + r]
    }

    pub fn as_col_major(&self) -> &[f64] {
        &self.data
    }

    /// Row `r` as an owned vector of length `cols`.
    pub fn row(&self, r: usize) -> Vec<f64> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }
}

/// Forms `[X, y]ᵀ` from a dataset.
pub fn augment(dataset: &Dataset) -> AugmentedMatrix {
    let (n, p) = (dataset.n(), dataset.p());
    let rows = p + 1;
    let mut data = vec![0.0; rows * n];
    for j in 0..p {
        for (i, &v) in dataset.column(j).iter().enumerate() {
            data[i * rows + j] = f64::from(v);
        }
    }
    for (i, &v) in dataset.y().iter().enumerate() {
        data[i * rows + p] = f64::from(v);
    }
    AugmentedMatrix {
        rows,
        cols: n,
        data,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn augment_two_by_one() {
        let d = Dataset::from_rows(&[vec![1], vec![1]], vec![1, 0]).unwrap();
        let a = augment(&d);
        assert_eq!((a.rows(), a.cols()), (2, 2));
        assert_eq!(a.row(0), vec![1.0, 1.0]);
        assert_eq!(a.row(1), vec![1.0, 0.0]);
    }

    #[test]
    fn augment_single_observation() {
        let d = Dataset::from_rows(&[vec![1, 1]], vec![1]).unwrap();
        let a = augment(&d);
        assert_eq!((a.rows(), a.cols()), (3, 1));
        for r in 0..3 {
            assert_eq!(a.row(r), vec![1.0]);
        }
    }

    #[test]
    fn augment_shape_and_last_row() {
        let rows = vec![vec![0, 1, 2, 0], vec![1, 1, 0, 0], vec![2, 0, 1, 1]];
        let d = Dataset::from_rows(&rows, vec![0, 1, 1]).unwrap();
        let a = augment(&d);
        assert_eq!((a.rows(), a.cols()), (5, 3));
        assert_eq!(a.row(4), vec![0.0, 1.0, 1.0]);
        assert_eq!(a.row(2), vec![2.0, 0.0, 1.0]);
        assert_eq!(d.coding(), Coding::Ternary);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Dataset::from_rows(&[vec![3]], vec![1]).is_err());
        assert!(Dataset::from_rows(&[vec![1]], vec![2]).is_err());
        assert!(Dataset::from_rows(&[vec![1], vec![1, 0]], vec![1, 0]).is_err());
        assert!(Dataset::from_columns(2, 2, vec![0; 4], vec![0]).is_err());
        let d = Dataset::from_rows(&[vec![0, 1]], vec![1]).unwrap();
        assert!(d.clone().with_names(vec!["a".into()]).is_err());
        assert!(d.clone().with_names(vec!["a".into(), "a".into()]).is_err());
        assert!(d.with_names(vec!["a".into(), "b".into()]).is_ok());
    }

    #[test]
    fn response_must_have_both_classes() {
        let d = Dataset::from_rows(&[vec![0], vec![1]], vec![1, 1]).unwrap();
        assert!(d.check_response().is_err());
        let d = Dataset::from_rows(&[vec![0], vec![1]], vec![0, 1]).unwrap();
        assert!(d.check_response().is_ok());
    }

    #[test]
    fn binary_coding_check() {
        let d = Dataset::from_rows(&[vec![0, 2]], vec![1]).unwrap();
        assert!(d.require_coding(Coding::Binary).is_err());
        assert!(d.require_coding(Coding::Ternary).is_ok());
    }

    #[test]
    fn column_and_row_subsets() {
        let rows = vec![vec![0, 1, 2], vec![1, 0, 1]];
        let d = Dataset::from_rows(&rows, vec![0, 1])
            .unwrap()
            .with_names(vec!["a".into(), "b".into(), "c".into()])
            .unwrap();
        let s = d.select_columns(&[2, 0]).unwrap();
        assert_eq!(s.column(0), &[2, 1]);
        assert_eq!(s.name(1), "a");
        let r = d.select_rows(&[1, 1, 0]).unwrap();
        assert_eq!(r.y(), &[1, 1, 0]);
        assert_eq!(r.column(2), &[1, 1, 2]);
    }
}
