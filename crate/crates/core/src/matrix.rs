//! Small dense row-major matrix kernel.
//!
//! Sized for rosters of a few thousand people and a few dozen categories;
//! nothing here tries to be clever about cache blocking or sparsity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// How `elementwise_div` treats a zero denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "kind", content = "epsilon")]
pub enum ZeroDivisionPolicy {
    /// Any zero denominator is an error.
    #[default]
    Strict,
    /// `0 / 0` is taken as `0`; `x / 0` with `x > 0` is still an error.
    ZeroForZero,
    /// Zero denominators are replaced by the given epsilon.
    Epsilon(f64),
}

/// Output of [`Matrix::row_normalize`].
#[derive(Debug, Clone, PartialEq)]
pub struct RowNormalized {
    pub matrix: Matrix,
    /// Indices of rows that summed to zero and were left all-zero.
    pub degenerate_rows: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape {
                op: "from_vec",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must share one length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Shape {
                    op: "from_rows",
                    left: (i, r.len()),
                    right: (0, cols),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn row_vector(values: &[f64]) -> Self {
        Self {
            rows: 1,
            cols: values.len(),
            data: values.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[f64]> {
        // chunks_exact(0) panics, and a 0-column matrix still has rows
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.row_iter().map(|r| r.iter().sum()).collect()
    }

    pub fn column_means(&self) -> Vec<f64> {
        let mut means = vec![0.0; self.cols];
        for r in self.row_iter() {
            for (m, v) in means.iter_mut().zip(r) {
                *m += v;
            }
        }
        if self.rows > 0 {
            let n = self.rows as f64;
            means.iter_mut().for_each(|m| *m /= n);
        }
        means
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    /// Rows picked (in the given order) by index.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    /// Square sub-matrix on the given rows and the same columns.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * idx.len());
        for &i in idx {
            data.extend(idx.iter().map(|&j| self[(i, j)]));
        }
        Self {
            rows: idx.len(),
            cols: idx.len(),
            data,
        }
    }

    /// `C(i,j) = Σ_k A(i,k)·B(k,j)`.
    pub fn mat_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape {
                op: "mat_mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Divides every row by its sum. All-zero rows stay zero and are reported.
    pub fn row_normalize(&self) -> Result<RowNormalized> {
        self.check_non_negative()?;
        let mut matrix = self.clone();
        let mut degenerate_rows = Vec::new();
        for i in 0..self.rows {
            let sum: f64 = self.row(i).iter().sum();
            if sum > 0.0 {
                for v in &mut matrix.data[i * self.cols..(i + 1) * self.cols] {
                    *v /= sum;
                }
            } else {
                degenerate_rows.push(i);
            }
        }
        Ok(RowNormalized {
            matrix,
            degenerate_rows,
        })
    }

    pub fn elementwise_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape("elementwise_mul", other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// `C(i,j) = A(i,j) / B(i,j)`, with zero denominators handled per `policy`.
    ///
    /// On failure the error lists every offending cell, not just the first.
    pub fn elementwise_div(&self, other: &Matrix, policy: ZeroDivisionPolicy) -> Result<Matrix> {
        self.same_shape("elementwise_div", other)?;
        self.check_non_negative()?;
        other.check_non_negative()?;
        if let ZeroDivisionPolicy::Epsilon(eps) = policy {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::Invalid(format!(
                    "epsilon policy requires a positive finite epsilon, got {eps}"
                )));
            }
        }
        let mut bad = Vec::new();
        let mut data = Vec::with_capacity(self.data.len());
        for (idx, (&a, &b)) in self.data.iter().zip(&other.data).enumerate() {
            let v = if b > 0.0 {
                a / b
            } else {
                match policy {
                    ZeroDivisionPolicy::Strict => {
                        bad.push((idx / self.cols, idx % self.cols));
                        0.0
                    }
                    ZeroDivisionPolicy::ZeroForZero => {
                        if a != 0.0 {
                            bad.push((idx / self.cols, idx % self.cols));
                        }
                        0.0
                    }
                    ZeroDivisionPolicy::Epsilon(eps) => a / eps,
                }
            };
            data.push(v);
        }
        if !bad.is_empty() {
            return Err(Error::ZeroDivision { cells: bad });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn check_non_negative(&self) -> Result<()> {
        for (idx, &v) in self.data.iter().enumerate() {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::NegativeEntry {
                    row: idx / self.cols.max(1),
                    col: idx % self.cols.max(1),
                    value: v,
                });
            }
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f64> {
        self.same_shape("max_abs_diff", other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    fn same_shape(&self, op: &'static str, other: &Matrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::Shape {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}
