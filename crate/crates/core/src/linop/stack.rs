use super::{check_power, LinearOperator, Shape, SharedOperator};
use crate::error::{Error, Result};

/// Vertical concatenation `[K_1; K_2; ...; K_l]` of operators sharing a domain.
#[derive(Debug, Clone)]
pub struct StackedOperator {
    blocks: Vec<SharedOperator>,
    offsets: Vec<usize>,
    cols: usize,
}

impl StackedOperator {
    pub fn new(blocks: Vec<SharedOperator>) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::invalid("cannot stack an empty operator list"))?
            .shape();
        let mut offsets = Vec::with_capacity(blocks.len() + 1);
        offsets.push(0);
        for b in &blocks {
            let s = b.shape();
            if s.cols != first.cols {
                return Err(Error::ShapeMismatch {
                    context: "stack",
                    left: first,
                    right: s,
                });
            }
            offsets.push(offsets.last().unwrap() + s.rows);
        }
        Ok(StackedOperator {
            blocks,
            offsets,
            cols: first.cols,
        })
    }

    pub fn blocks(&self) -> &[SharedOperator] {
        &self.blocks
    }

    /// Row range of block `k` inside the stacked output.
    pub fn block_range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }
}

impl LinearOperator for StackedOperator {
    fn shape(&self) -> Shape {
        Shape::new(*self.offsets.last().unwrap(), self.cols)
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        super::assert_dims(self, x.len(), out.len(), false);
        for (k, b) in self.blocks.iter().enumerate() {
            b.apply_into(x, &mut out[self.block_range(k)]);
        }
    }

    fn apply_adjoint_into(&self, y: &[f64], out: &mut [f64]) {
        super::assert_dims(self, y.len(), out.len(), true);
        out.fill(0.0);
        let mut scratch = vec![0.0; self.cols];
        for (k, b) in self.blocks.iter().enumerate() {
            b.apply_adjoint_into(&y[self.block_range(k)], &mut scratch);
            for (o, s) in out.iter_mut().zip(&scratch) {
                *o += s;
            }
        }
    }

    fn name(&self) -> &'static str {
        "StackedOperator"
    }

    fn abs_pow_col_sums(&self, p: f64) -> Result<Vec<f64>> {
        check_power(p)?;
        let mut sums = vec![0.0; self.cols];
        for b in &self.blocks {
            for (s, v) in sums.iter_mut().zip(b.abs_pow_col_sums(p)?) {
                *s += v;
            }
        }
        Ok(sums)
    }

    fn abs_pow_row_sums(&self, p: f64) -> Result<Vec<f64>> {
        check_power(p)?;
        let mut sums = Vec::with_capacity(self.shape().rows);
        for b in &self.blocks {
            sums.extend(b.abs_pow_row_sums(p)?);
        }
        Ok(sums)
    }
}
