//! Dense matrices over a finite field.
//!
//! Entries are stored row-major as packed [`Symbol`]s, so every entry belongs
//! to the matrix's field by construction.

use std::fmt;

use itertools::Itertools;
use rand::Rng;

use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FieldSpec, Symbol};

/// Default cap on the number of square submatrices examined by
/// [`Matrix::all_square_submatrices_invertible`].
pub const DEFAULT_SUBMATRIX_LIMIT: u64 = 1_000_000;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Symbol>,
    field: FieldSpec,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for row in self.data.chunks(self.cols.max(1)).take(self.rows) {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
            field: field.clone(),
        }
    }

    pub fn identity(field: &FieldSpec, size: usize) -> Self {
        let mut m = Self::zeros(field, size, size);
        for i in 0..size {
            m.data[i * size + i] = 1;
        }
        m
    }

    /// Builds a matrix from packed symbols given row by row.
    pub fn from_rows<R: AsRef<[u64]>>(field: &FieldSpec, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "ragged rows: expected {cols} entries, got {}",
                    row.len()
                )));
            }
            for &v in row {
                data.push(field.element(v)?.value());
            }
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
            field: field.clone(),
        })
    }

    pub fn from_symbols(field: &FieldSpec, rows: usize, cols: usize, data: Vec<Symbol>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&v| v >= field.order()) {
            return Err(Error::InvalidElement {
                value: bad as u64,
                order: field.order(),
            });
        }
        Ok(Matrix {
            rows,
            cols,
            data,
            field: field.clone(),
        })
    }

    /// Builds a matrix from field elements; all must share `field`.
    pub fn from_elements(field: &FieldSpec, rows: usize, cols: usize, entries: &[FieldElement]) -> Result<Self> {
        if entries.iter().any(|e| e.field() != field) {
            return Err(Error::MixedFields);
        }
        Self::from_symbols(field, rows, cols, entries.iter().map(FieldElement::value).collect())
    }

    /// Matrix with i.i.d. uniform entries.
    pub fn random<R: Rng + ?Sized>(field: &FieldSpec, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random_symbol(rng)).collect();
        Matrix {
            rows,
            cols,
            data,
            field: field.clone(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.data
    }

    #[inline]
    pub fn symbol(&self, i: usize, j: usize) -> Symbol {
        self.data[i * self.cols + j]
    }

    pub fn get(&self, i: usize, j: usize) -> Result<FieldElement> {
        self.check_index(i, j)?;
        self.field.element(self.symbol(i, j) as u64)
    }

    pub fn set(&mut self, i: usize, j: usize, value: &FieldElement) -> Result<()> {
        self.check_index(i, j)?;
        if value.field() != &self.field {
            return Err(Error::MixedFields);
        }
        self.data[i * self.cols + j] = value.value();
        Ok(())
    }

    fn check_index(&self, i: usize, j: usize) -> Result<()> {
        if i >= self.rows {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.rows,
            });
        }
        if j >= self.cols {
            return Err(Error::IndexOutOfRange {
                index: j,
                bound: self.cols,
            });
        }
        Ok(())
    }

    pub fn row(&self, i: usize) -> &[Symbol] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Symbol> {
        (0..self.rows).map(|i| self.symbol(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Symbol>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero_column(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self.symbol(i, j) == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.symbol(i, j));
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
            field: self.field.clone(),
        }
    }

    /// Horizontal concatenation `(self | other)`.
    pub fn hconcat(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot join {} rows with {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(Matrix {
            rows: self.rows,
            cols,
            data,
            field: self.field.clone(),
        })
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.symbol(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.symbol(l, j)));
                }
            }
        }
        Ok(out)
    }

    /// Entries at the given rows and columns, in the order given.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Matrix> {
        check_indices(rows, self.rows)?;
        check_indices(cols, self.cols)?;
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.symbol(i, j));
            }
        }
        Ok(Matrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
            field: self.field.clone(),
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Result<Matrix> {
        let all_rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&all_rows, cols)
    }

    /// Reduced row-echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut out = self.clone();
        let pivots = rref_in_place(&self.field, &mut out.data, self.rows, self.cols);
        (out, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// True iff every square submatrix of every size has full rank. Checks
    /// at most [`DEFAULT_SUBMATRIX_LIMIT`] submatrices.
    pub fn all_square_submatrices_invertible(&self) -> Result<bool> {
        self.all_square_submatrices_invertible_with_limit(DEFAULT_SUBMATRIX_LIMIT)
    }

    pub fn all_square_submatrices_invertible_with_limit(&self, limit: u64) -> Result<bool> {
        let max_size = self.rows.min(self.cols);
        let needed: u128 = (1..=max_size)
            .map(|s| binomial(self.rows, s) * binomial(self.cols, s))
            .sum();
        if needed > limit as u128 {
            return Err(Error::BudgetExceeded {
                what: "square submatrices",
                needed,
                budget: limit,
            });
        }
        // 1x1 first: cheapest rejection
        if self.data.contains(&0) {
            return Ok(false);
        }
        for size in 2..=max_size {
            for rows in (0..self.rows).combinations(size) {
                for cols in (0..self.cols).combinations(size) {
                    if self.submatrix(&rows, &cols)?.rank() < size {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

fn check_indices(indices: &[usize], bound: usize) -> Result<()> {
    let mut seen = vec![false; bound];
    for &i in indices {
        if i >= bound {
            return Err(Error::IndexOutOfRange { index: i, bound });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::DuplicateIndex(i));
        }
    }
    Ok(())
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Gauss-Jordan elimination on a row-major buffer; returns pivot columns.
pub(crate) fn rref_in_place(f: &FieldSpec, data: &mut [Symbol], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(data[r * cols + c]).expect("pivot is nonzero");
        for j in c..cols {
            data[r * cols + j] = f.mul(data[r * cols + j], inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = data[i * cols + c];
            if factor == 0 {
                continue;
            }
            let neg = f.neg(factor);
            for j in c..cols {
                let v = f.mul(neg, data[r * cols + j]);
                data[i * cols + j] = f.add(data[i * cols + j], v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a set of vectors of equal length.
pub(crate) fn rank_of_vectors<V: AsRef<[Symbol]>>(f: &FieldSpec, vectors: &[V]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let len = first.as_ref().len();
    let mut data: Vec<Symbol> = vectors.iter().flat_map(|v| v.as_ref().iter().copied()).collect();
    rref_in_place(f, &mut data, vectors.len(), len).len()
}

/// Cauchy matrix with entries `1/(x_i + y_j)`. The `x_i` are the first `t`
/// field elements in enumeration order; the `y_j` are the next elements, in
/// order, for which no `x_i + y_j` vanishes.
pub fn cauchy_matrix(field: &FieldSpec, t: usize, c: usize) -> Result<Matrix> {
    let q = field.order() as usize;
    if t + c > q {
        return Err(Error::FieldTooSmall {
            order: field.order(),
            reason: format!("a {t}x{c} Cauchy matrix needs {} distinct points", t + c),
        });
    }
    let xs: Vec<Symbol> = (0..t as Symbol).collect();
    let ys: Vec<Symbol> = (t as Symbol..field.order())
        .filter(|&y| xs.iter().all(|&x| field.add(x, y) != 0))
        .take(c)
        .collect();
    if ys.len() < c {
        return Err(Error::FieldTooSmall {
            order: field.order(),
            reason: format!("only {} usable column points for a {t}x{c} Cauchy matrix", ys.len()),
        });
    }
    let mut data = Vec::with_capacity(t * c);
    for &x in &xs {
        for &y in &ys {
            data.push(field.inv(field.add(x, y))?);
        }
    }
    Matrix::from_symbols(field, t, c, data)
}
