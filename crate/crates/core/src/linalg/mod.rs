//! Dense complex/real matrices, DFT matrices, Hermitian eigendecomposition,
//! pseudoinverse and the ∞→∞ operator norm.

mod eigen;
mod matrix;
mod pinv;

use std::f64::consts::PI;

pub use eigen::{hermitian_eigen, HermitianEigen};
pub use matrix::{circulant, op_norm_inf, ComplexMatrix, RealMatrix, Role, C64};
pub use pinv::{pseudoinverse, RANK_TOL};

use crate::error::{invalid, Result};

/// `e^{2πi·k/m}` with the exponent reduced mod m first.
pub fn root_of_unity(k: i64, m: usize) -> C64 {
    let r = k.rem_euclid(m as i64) as f64;
    C64::from_polar(1.0, 2.0 * PI * r / m as f64)
}

/// Unitary DFT matrix of the cyclic group of order m:
/// `F[α,g] = e^{−2πi·αg/m}/√m`.
pub fn dft_matrix(m: usize) -> Result<ComplexMatrix> {
    if m == 0 {
        return invalid("dft_matrix needs m >= 1");
    }
    let s = 1.0 / (m as f64).sqrt();
    Ok(ComplexMatrix::from_fn(m, m, |a, g| root_of_unity(-((a * g % m) as i64), m) * s))
}

/// Euclidean inner product, conjugate-linear in the first argument.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
