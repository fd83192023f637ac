use super::{assert_dims, check_power, LinearOperator, Shape, SparseMatrix};
use crate::error::{Error, Result};

/// Matrix-free forward-difference gradient of an `n x n` image.
///
/// Acts as `D = [I (x) B; B (x) I]` on a row-major image `x[r * n + c]`, where `B`
/// is the `n x n` forward-difference matrix with a zero last row. The first `n^2`
/// outputs are horizontal differences `x[r, c+1] - x[r, c]`, the last `n^2` are
/// vertical differences `x[r+1, c] - x[r, c]`; differences across the last column
/// or row are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grad2D {
    n: usize,
}

impl Grad2D {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("image side length must be at least 1"));
        }
        Ok(Grad2D { n })
    }

    pub fn side(&self) -> usize {
        self.n
    }

    pub fn pixels(&self) -> usize {
        self.n * self.n
    }

    /// Structural nonzeros in the column of pixel `(r, c)`.
    fn col_count(&self, r: usize, c: usize) -> f64 {
        let n = self.n;
        [c + 1 < n, c >= 1, r + 1 < n, r >= 1]
            .iter()
            .filter(|&&b| b)
            .count() as f64
    }
}

impl LinearOperator for Grad2D {
    fn shape(&self) -> Shape {
        Shape::new(2 * self.pixels(), self.pixels())
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        assert_dims(self, x.len(), out.len(), false);
        let n = self.n;
        let (horiz, vert) = out.split_at_mut(n * n);
        for r in 0..n {
            let row = &x[r * n..(r + 1) * n];
            let h = &mut horiz[r * n..(r + 1) * n];
            for c in 0..n - 1 {
                h[c] = row[c + 1] - row[c];
            }
            h[n - 1] = 0.0;

            let v = &mut vert[r * n..(r + 1) * n];
            if r + 1 < n {
                let below = &x[(r + 1) * n..(r + 2) * n];
                for c in 0..n {
                    v[c] = below[c] - row[c];
                }
            } else {
                v.fill(0.0);
            }
        }
    }

    fn apply_adjoint_into(&self, y: &[f64], out: &mut [f64]) {
        assert_dims(self, y.len(), out.len(), true);
        let n = self.n;
        let (horiz, vert) = y.split_at(n * n);
        out.fill(0.0);
        for r in 0..n {
            let o = &mut out[r * n..(r + 1) * n];
            let h = &horiz[r * n..(r + 1) * n];
            for c in 0..n - 1 {
                o[c] -= h[c];
                o[c + 1] += h[c];
            }
        }
        for r in 0..n - 1 {
            let v = &vert[r * n..(r + 1) * n];
            for c in 0..n {
                out[r * n + c] -= v[c];
                out[(r + 1) * n + c] += v[c];
            }
        }
    }

    fn name(&self) -> &'static str {
        "Grad2D"
    }

    fn abs_pow_col_sums(&self, p: f64) -> Result<Vec<f64>> {
        check_power(p)?;
        let n = self.n;
        Ok((0..n * n).map(|j| self.col_count(j / n, j % n)).collect())
    }

    fn abs_pow_row_sums(&self, p: f64) -> Result<Vec<f64>> {
        check_power(p)?;
        let n = self.n;
        let mut sums = vec![0.0; 2 * n * n];
        for r in 0..n {
            for c in 0..n {
                if c + 1 < n {
                    sums[r * n + c] = 2.0;
                }
                if r + 1 < n {
                    sums[n * n + r * n + c] = 2.0;
                }
            }
        }
        Ok(sums)
    }
}

/// The `n x n` forward-difference matrix `B` (rows `-1, +1`, zero last row).
pub fn difference_matrix(n: usize) -> Result<SparseMatrix> {
    if n == 0 {
        return Err(Error::invalid("difference matrix needs n >= 1"));
    }
    let rows = (0..n)
        .map(|i| {
            if i + 1 < n {
                vec![(i, -1.0), (i + 1, 1.0)]
            } else {
                Vec::new()
            }
        })
        .collect();
    SparseMatrix::from_rows(n, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_forward() {
        let d = Grad2D::new(2).unwrap();
        assert_eq!(
            d.apply(&[1.0, 2.0, 3.0, 4.0]).unwrap(),
            vec![1.0, 0.0, 1.0, 0.0, 2.0, 2.0, 0.0, 0.0]
        );
    }

    #[test]
    fn two_by_two_adjoint() {
        let d = Grad2D::new(2).unwrap();
        let mut y = vec![0.0; 8];
        y[0] = 1.0;
        assert_eq!(d.apply_adjoint(&y).unwrap(), vec![-1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn shapes() {
        assert_eq!(Grad2D::new(4).unwrap().shape(), Shape::new(32, 16));
        assert_eq!(Grad2D::new(256).unwrap().shape(), Shape::new(131072, 65536));
        assert!(Grad2D::new(0).is_err());
    }

    #[test]
    fn degenerate_single_pixel() {
        let d = Grad2D::new(1).unwrap();
        assert_eq!(d.shape(), Shape::new(2, 1));
        assert_eq!(d.apply(&[7.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(d.apply_adjoint(&[3.0, -1.0]).unwrap(), vec![0.0]);
        assert_eq!(d.abs_pow_col_sums(1.0).unwrap(), vec![0.0]);
    }

    #[test]
    fn row_sums_two_by_two() {
        let d = Grad2D::new(2).unwrap();
        assert_eq!(
            d.abs_pow_row_sums(1.0).unwrap(),
            vec![2.0, 0.0, 2.0, 0.0, 2.0, 2.0, 0.0, 0.0]
        );
    }

    #[test]
    fn col_sums_three_by_three() {
        let d = Grad2D::new(3).unwrap();
        // corner pixels touch 2 differences, edges 3, the centre 4
        assert_eq!(
            d.abs_pow_col_sums(0.7).unwrap(),
            vec![2.0, 3.0, 2.0, 3.0, 4.0, 3.0, 2.0, 3.0, 2.0]
        );
    }

    #[test]
    fn difference_matrix_rows() {
        let b = difference_matrix(3).unwrap();
        assert_eq!(
            b.to_dense(),
            vec![
                vec![-1.0, 1.0, 0.0],
                vec![0.0, -1.0, 1.0],
                vec![0.0, 0.0, 0.0]
            ]
        );
    }
}
