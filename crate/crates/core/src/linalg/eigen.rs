use super::matrix::{ComplexMatrix, C64};
use crate::error::{invalid, Error, Result};

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

/// Cyclic Jacobi on the complex Hermitian matrix `(A + A*)/2`.
///
/// Each rotation first phases the (p,q) entry real and then applies the
/// classical real rotation, so the combined unitary on the (p,q) plane is
/// `[[c, s], [−s·e^{−iφ}, c·e^{−iφ}]]` with `a_pq = |a_pq|·e^{iφ}`.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return invalid(format!("hermitian_eigen needs a square matrix, got {}x{}", a.rows(), a.cols()));
    }
    let n = a.rows();
    let mut m = ComplexMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    for i in 0..n {
        m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
    }
    let mut v = ComplexMatrix::identity(n);

    let frob: f64 = m.data().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = (f64::EPSILON * frob).powi(2) * 0.25;
    let mut converged = n <= 1 || frob == 0.0;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NumericFailure(format!(
                "Jacobi did not converge in {MAX_SWEEPS} sweeps (n = {n})"
            )));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += m[(i, j)].norm_sqr();
                }
            }
        }
        converged = off <= target;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let eigenvectors = v.select_columns(&order);
    Ok(HermitianEigen { eigenvalues, eigenvectors })
}

fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Skip rotations that cannot change the diagonal at working precision.
    if r < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        m[(p, q)] = C64::new(0.0, 0.0);
        m[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let e = phase.conj();
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = e * (-s);
    let jqq = e * c;
    let n = m.rows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * jpp + mkq * jqp;
        m[(k, q)] = mkp * jpq + mkq * jqq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = jpp.conj() * mpk + jqp.conj() * mqk;
        m[(q, k)] = jpq.conj() * mpk + jqq.conj() * mqk;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}
