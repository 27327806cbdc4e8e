//! Interval arithmetic and interval matrices.

mod interval;
mod matrix;

pub use interval::{iv_abs, iv_add, iv_div, iv_mul, iv_sqr, iv_sub, Interval};
pub use matrix::{iv_matmul, iv_norm_inf, IntervalMatrix};
