use super::{abs_pow, assert_dims, check_power, LinearOperator, Shape};
use crate::error::{Error, Result};

/// Compressed sparse row matrix.
///
/// Column indices are strictly increasing within each row. Explicit zeros may be
/// stored; they are ignored by the absolute-power sums.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    shape: Shape,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds from raw CSR arrays, validating every structural invariant.
    pub fn from_csr(
        shape: Shape,
        indptr: Vec<usize>,
        indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if indptr.len() != shape.rows + 1 {
            return Err(Error::invalid(format!(
                "indptr has length {}, expected {}",
                indptr.len(),
                shape.rows + 1
            )));
        }
        if indptr[0] != 0 || *indptr.last().unwrap() != indices.len() {
            return Err(Error::invalid("indptr must start at 0 and end at nnz"));
        }
        if indices.len() != values.len() {
            return Err(Error::invalid(format!(
                "{} column indices but {} values",
                indices.len(),
                values.len()
            )));
        }
        for r in 0..shape.rows {
            let (start, end) = (indptr[r], indptr[r + 1]);
            if start > end {
                return Err(Error::invalid(format!("indptr decreases at row {r}")));
            }
            let row = &indices[start..end];
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(format!(
                    "column indices in row {r} are not strictly increasing"
                )));
            }
            if let Some(&c) = row.last() {
                if c >= shape.cols {
                    return Err(Error::invalid(format!(
                        "column index {c} out of range in row {r} ({} columns)",
                        shape.cols
                    )));
                }
            }
        }
        Ok(SparseMatrix {
            shape,
            indptr,
            indices,
            values,
        })
    }

    /// Builds from (row, col, value) triplets. Duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut t: Vec<_> = triplets.into_iter().collect();
        if let Some(&(r, c, _)) = t.iter().find(|(r, c, _)| *r >= rows || *c >= cols) {
            return Err(Error::invalid(format!(
                "triplet ({r}, {c}) outside a {rows}x{cols} matrix"
            )));
        }
        t.sort_by_key(|&(r, c, _)| (r, c));

        let mut indptr = vec![0; rows + 1];
        let mut indices = Vec::with_capacity(t.len());
        let mut values: Vec<f64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                indptr[r + 1] += 1;
                indices.push(c);
                values.push(v);
                last = Some((r, c));
            }
        }
        for r in 0..rows {
            indptr[r + 1] += indptr[r];
        }
        Self::from_csr(Shape::new(rows, cols), indptr, indices, values)
    }

    /// Builds from per-row entry lists. Each row is sorted and duplicate columns summed.
    pub fn from_rows(cols: usize, rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let nrows = rows.len();
        let mut indptr = Vec::with_capacity(nrows + 1);
        indptr.push(0);
        let nnz = rows.iter().map(Vec::len).sum();
        let mut indices = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let start = indices.len();
            for (c, v) in row {
                if indices.len() > start && *indices.last().unwrap() == c {
                    *values.last_mut().unwrap() += v;
                } else {
                    indices.push(c);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Self::from_csr(Shape::new(nrows, cols), indptr, indices, values)
    }

    /// Builds from dense rows, dropping exact zeros.
    pub fn from_dense<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some(r) = rows.iter().position(|r| r.as_ref().len() != cols) {
            return Err(Error::invalid(format!(
                "dense row {r} has inconsistent length"
            )));
        }
        let entries = rows
            .iter()
            .map(|r| {
                r.as_ref()
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0.0)
                    .map(|(c, v)| (c, *v))
                    .collect()
            })
            .collect();
        Self::from_rows(cols, entries)
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn indptr(&self) -> &[usize] {
        &self.indptr
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `r`.
    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let (s, e) = (self.indptr[r], self.indptr[r + 1]);
        (&self.indices[s..e], &self.values[s..e])
    }

    /// Iterates `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.shape.rows).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(move |(&c, &v)| (r, c, v))
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.shape.cols]; self.shape.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v;
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let (rows, cols) = (self.shape.rows, self.shape.cols);
        let mut counts = vec![0usize; cols + 1];
        for &c in &self.indices {
            counts[c + 1] += 1;
        }
        for c in 0..cols {
            counts[c + 1] += counts[c];
        }
        let indptr = counts.clone();
        let mut next = counts;
        let mut indices = vec![0; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for r in 0..rows {
            let (cs, vs) = self.row(r);
            for (&c, &v) in cs.iter().zip(vs) {
                let slot = next[c];
                indices[slot] = r;
                values[slot] = v;
                next[c] += 1;
            }
        }
        SparseMatrix {
            shape: Shape::new(cols, rows),
            indptr,
            indices,
            values,
        }
    }
}

impl LinearOperator for SparseMatrix {
    fn shape(&self) -> Shape {
        self.shape
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        assert_dims(self, x.len(), out.len(), false);
        for (r, o) in out.iter_mut().enumerate() {
            let (cs, vs) = self.row(r);
            *o = cs.iter().zip(vs).map(|(&c, &v)| v * x[c]).sum();
        }
    }

    fn apply_adjoint_into(&self, y: &[f64], out: &mut [f64]) {
        assert_dims(self, y.len(), out.len(), true);
        out.fill(0.0);
        for (r, &yr) in y.iter().enumerate() {
            if yr == 0.0 {
                continue;
            }
            let (cs, vs) = self.row(r);
            for (&c, &v) in cs.iter().zip(vs) {
                out[c] += v * yr;
            }
        }
    }

    fn name(&self) -> &'static str {
        "SparseMatrix"
    }

    fn abs_pow_col_sums(&self, p: f64) -> Result<Vec<f64>> {
        check_power(p)?;
        let mut sums = vec![0.0; self.shape.cols];
        for (&c, &v) in self.indices.iter().zip(&self.values) {
            sums[c] += abs_pow(v, p);
        }
        Ok(sums)
    }

    fn abs_pow_row_sums(&self, p: f64) -> Result<Vec<f64>> {
        check_power(p)?;
        Ok((0..self.shape.rows)
            .map(|r| self.row(r).1.iter().map(|&v| abs_pow(v, p)).sum())
            .collect())
    }
}
