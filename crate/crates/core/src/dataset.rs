//! Sample matrices with named columns and CSV I/O.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::valid_label;
use crate::Scalar;

/// `n_samples × n_vars` matrix stored row-major, one named column per variable.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset<T> {
    columns: Vec<String>,
    values: Vec<T>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(columns: Vec<String>, values: Vec<T>) -> Result<Self> {
        if let Some(c) = columns.iter().find(|c| !valid_label(c)) {
            return Err(Error::InvalidFormat(format!("invalid column name `{c}`")));
        }
        let mut sorted = columns.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidFormat("duplicate column name".into()));
        }
        if columns.is_empty() && !values.is_empty()
            || !columns.is_empty() && !values.len().is_multiple_of(columns.len())
        {
            return Err(Error::InvalidFormat(
                "value count is not a multiple of the column count".into(),
            ));
        }
        Ok(Self { columns, values })
    }

    pub fn n_samples(&self) -> usize {
        if self.columns.is_empty() {
            0
        } else {
            self.values.len() / self.columns.len()
        }
    }

    pub fn n_vars(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn row(&self, r: usize) -> &[T] {
        let p = self.n_vars();
        &self.values[r * p..(r + 1) * p]
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.values[r * self.n_vars() + c]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.n_samples()).map(|r| self.get(r, c)).collect()
    }

    /// Pearson correlation matrix, accumulated in `f64`. Constant columns get
    /// zero correlation with everything else.
    pub fn correlation(&self) -> Vec<T> {
        let p = self.n_vars();
        let n = self.n_samples();
        let mut mean = vec![0.0f64; p];
        for r in 0..n {
            for (m, v) in mean.iter_mut().zip(self.row(r)) {
                *m += v.as_f64();
            }
        }
        for m in &mut mean {
            *m /= n.max(1) as f64;
        }
        let mut cov = vec![0.0f64; p * p];
        let mut centered = vec![0.0f64; p];
        for r in 0..n {
            for (c, v) in self.row(r).iter().enumerate() {
                centered[c] = v.as_f64() - mean[c];
            }
            for i in 0..p {
                for j in i..p {
                    cov[i * p + j] += centered[i] * centered[j];
                }
            }
        }
        let mut out = vec![T::zero(); p * p];
        for i in 0..p {
            out[i * p + i] = T::one();
            for j in i + 1..p {
                let denom = (cov[i * p + i] * cov[j * p + j]).sqrt();
                let r = if denom > 0.0 {
                    cov[i * p + j] / denom
                } else {
                    0.0
                };
                out[i * p + j] = T::of(r);
                out[j * p + i] = T::of(r);
            }
        }
        out
    }

    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let columns: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if columns.is_empty() || columns.iter().all(String::is_empty) {
            return Err(Error::InvalidFormat("missing CSV header".into()));
        }
        let mut values = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            for cell in rec.iter() {
                let v: f64 = cell.parse().map_err(|_| Error::Parse {
                    line: i + 2,
                    message: format!("non-numeric cell `{cell}`"),
                })?;
                values.push(T::of(v));
            }
        }
        Dataset::new(columns, values)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        Self::from_csv_reader(std::fs::File::open(path)?)
    }

    pub fn to_csv_writer<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(&self.columns)?;
        for r in 0..self.n_samples() {
            w.write_record(self.row(r).iter().map(|v| v.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        self.to_csv_writer(std::fs::File::create(path)?)
    }
}
