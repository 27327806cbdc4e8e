use super::matrix::RealMatrix;
use crate::error::{Error, Result};

/// Relative threshold on the pivoted diagonal of R below which the matrix is
/// treated as rank deficient.
pub const RANK_TOL: f64 = 1e-8;

/// Minimum-norm right inverse of a wide matrix with full row rank.
///
/// Computes a column-pivoted Householder QR of Aᵀ, `Aᵀ·P = Q·R`, and returns
/// `T = Q·R⁻ᵀ·Pᵀ`, which equals `Aᵀ(AAᵀ)⁻¹`.
pub fn pseudoinverse(a: &RealMatrix) -> Result<RealMatrix> {
    let m = a.rows();
    let n = a.cols();
    if m == 0 {
        return Ok(RealMatrix::zeros(n, 0));
    }
    if m > n {
        return Err(Error::RankDeficient { smallest: 0.0 });
    }
    // Work on Aᵀ (n×m), column-major for convenient column operations.
    let mut cols: Vec<Vec<f64>> = (0..m).map(|i| a.row(i).to_vec()).collect();
    let mut perm: Vec<usize> = (0..m).collect();
    let mut norms: Vec<f64> = cols.iter().map(|c| c.iter().map(|x| x * x).sum()).collect();
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut r = RealMatrix::zeros(m, m);

    for k in 0..m {
        let (piv, _) = norms
            .iter()
            .enumerate()
            .skip(k)
            .fold((k, -1.0), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
        cols.swap(k, piv);
        norms.swap(k, piv);
        perm.swap(k, piv);
        for i in 0..k {
            let tmp = r[(i, k)];
            r[(i, k)] = r[(i, piv)];
            r[(i, piv)] = tmp;
        }

        let x = &cols[k][k..];
        let alpha = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut u = x.to_vec();
        let diag = if alpha == 0.0 {
            0.0
        } else {
            let s = if u[0] >= 0.0 { -alpha } else { alpha };
            u[0] -= s;
            s
        };
        let un = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        if un > 0.0 {
            for v in &mut u {
                *v /= un;
            }
        }
        r[(k, k)] = diag;
        for j in (k + 1)..m {
            let c = &mut cols[j][k..];
            let dot: f64 = u.iter().zip(c.iter()).map(|(p, q)| p * q).sum();
            for (ci, ui) in c.iter_mut().zip(&u) {
                *ci -= 2.0 * dot * ui;
            }
            r[(k, j)] = cols[j][k];
            norms[j] = cols[j][k + 1..].iter().map(|v| v * v).sum();
        }
        reflectors.push(u);
    }

    let rmax = r[(0, 0)].abs();
    let rmin = (0..m).map(|k| r[(k, k)].abs()).fold(f64::INFINITY, f64::min);
    if rmax == 0.0 || rmin <= RANK_TOL * rmax {
        return Err(Error::RankDeficient { smallest: rmin });
    }

    // X = R⁻ᵀ Pᵀ solves Rᵀ X = Pᵀ; Pᵀ has a one at (j, perm[j]).
    let mut x = RealMatrix::zeros(m, m);
    for col in 0..m {
        let mut b = vec![0.0; m];
        for (j, &p) in perm.iter().enumerate() {
            if p == col {
                b[j] = 1.0;
            }
        }
        for i in 0..m {
            let mut s = b[i];
            for k in 0..i {
                s -= r[(k, i)] * x[(k, col)];
            }
            x[(i, col)] = s / r[(i, i)];
        }
    }

    // T = Q X with Q = H_0 H_1 ... H_{m-1} applied to [X; 0].
    let mut t = RealMatrix::zeros(n, m);
    for i in 0..m {
        for j in 0..m {
            t[(i, j)] = x[(i, j)];
        }
    }
    for k in (0..m).rev() {
        let u = &reflectors[k];
        for j in 0..m {
            let dot: f64 = u.iter().enumerate().map(|(i, ui)| ui * t[(k + i, j)]).sum();
            for (i, ui) in u.iter().enumerate() {
                t[(k + i, j)] -= 2.0 * dot * ui;
            }
        }
    }
    Ok(t)
}
