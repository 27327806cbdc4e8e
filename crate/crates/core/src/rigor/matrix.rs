use std::ops::{Index, IndexMut};

use super::interval::{iv_abs, iv_add, iv_mul, Interval};
use crate::error::{invalid, Result};
use crate::linalg::RealMatrix;

/// Row-major matrix of intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl IntervalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntervalMatrix { rows, cols, data: vec![Interval::ZERO; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Interval) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntervalMatrix { rows, cols, data }
    }

    /// Degenerate lift of a point matrix.
    pub fn from_point(a: &RealMatrix) -> Self {
        Self::from_fn(a.rows(), a.cols(), |i, j| Interval::point(a[(i, j)]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Interval] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn midpoint(&self) -> RealMatrix {
        RealMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].mid())
    }

    pub fn max_width(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.width()))
    }

    /// Entrywise `self − I`.
    pub fn minus_identity(&self) -> IntervalMatrix {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] = out[(i, i)] - Interval::ONE;
        }
        out
    }
}

impl Index<(usize, usize)> for IntervalMatrix {
    type Output = Interval;
    fn index(&self, (i, j): (usize, usize)) -> &Interval {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntervalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Interval {
        &mut self.data[i * self.cols + j]
    }
}

/// Enclosure of the ∞→∞ norm; `hi` is a certified upper bound.
pub fn iv_norm_inf(a: &IntervalMatrix) -> Interval {
    let mut best = Interval::ZERO;
    for i in 0..a.rows() {
        let s = a.row(i).iter().fold(Interval::ZERO, |acc, &x| iv_add(acc, iv_abs(x)));
        best = best.max(s);
    }
    best
}

/// Entrywise enclosure of `A·B` for an interval A and a point B.
pub fn iv_matmul(a: &IntervalMatrix, b: &RealMatrix) -> Result<IntervalMatrix> {
    if a.cols() != b.rows() {
        return invalid(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        ));
    }
    let mut out = IntervalMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        let arow = a.row(i);
        for j in 0..b.cols() {
            let mut s = Interval::ZERO;
            for (k, &x) in arow.iter().enumerate() {
                let y = b[(k, j)];
                if y != 0.0 {
                    s = iv_add(s, iv_mul(x, Interval::point(y)));
                }
            }
            out[(i, j)] = s;
        }
    }
    Ok(out)
}
