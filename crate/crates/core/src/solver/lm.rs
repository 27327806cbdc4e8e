use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::system::{analytic_jacobian_vec, residual_inf, residual_vec, variable_count};
use crate::error::{invalid, Result};
use crate::frames::CirculantPair;
use crate::linalg::C64;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 1000;

const LAMBDA0: f64 = 1e-3;
const LAMBDA_MIN: f64 = 1e-18;
const LAMBDA_MAX: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub pair: CirculantPair,
    pub residual_inf: f64,
    pub iterations: usize,
    pub seed: u64,
    pub converged: bool,
}

/// Seeded complex Gaussian x, y, each normalized to unit length.
pub fn random_start(d: usize, seed: u64) -> CirculantPair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || -> Vec<C64> {
        let v: Vec<C64> = (0..d)
            .map(|_| C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / n).collect()
    };
    let x = draw();
    let y = draw();
    CirculantPair { x, y }
}

/// Solves `A z = b` for symmetric positive definite A (row-major n×n).
fn cholesky_solve(a: &mut [f64], b: &mut [f64], n: usize) -> bool {
    for j in 0..n {
        let mut s = a[j * n + j];
        for k in 0..j {
            s -= a[j * n + k] * a[j * n + k];
        }
        if s <= 0.0 || !s.is_finite() {
            return false;
        }
        let l = s.sqrt();
        a[j * n + j] = l;
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / l;
        }
    }
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= a[i * n + k] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s -= a[k * n + i] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    true
}

fn sum_sq(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum()
}

/// Levenberg–Marquardt from an explicit start with w fixed at 1/2. Steps are
/// the damped minimum-norm updates `−Jᵀ(JJᵀ + λI)⁻¹r` since the system has
/// fewer equations than unknowns.
pub fn solve_from(start: &CirculantPair, seed: u64, tol: f64, max_iter: usize) -> SolveResult {
    let d = start.d();
    let nv = variable_count(d) - 1;
    let mut v = start.to_real();
    v.push(0.5);
    let mut r = residual_vec(&v, d);
    let m = r.len();
    let mut cost = sum_sq(&r);
    let mut lambda = LAMBDA0;
    let mut iterations = 0;
    while iterations < max_iter && residual_inf(&r) > tol {
        iterations += 1;
        let jac = analytic_jacobian_vec(&v, d);
        let j = jac.data();
        let stride = nv + 1;
        let mut jjt = vec![0.0; m * m];
        for a in 0..m {
            let ra = &j[a * stride..a * stride + nv];
            for b in 0..=a {
                let rb = &j[b * stride..b * stride + nv];
                let s: f64 = ra.iter().zip(rb).map(|(p, q)| p * q).sum();
                jjt[a * m + b] = s;
                jjt[b * m + a] = s;
            }
        }
        loop {
            let mut mat = jjt.clone();
            for k in 0..m {
                mat[k * m + k] += lambda;
            }
            let mut z = r.clone();
            let ok = cholesky_solve(&mut mat, &mut z, m);
            if ok {
                let mut trial = v.clone();
                for (a, za) in z.iter().enumerate() {
                    let row = &j[a * stride..a * stride + nv];
                    for (t, jv) in trial.iter_mut().zip(row) {
                        *t -= jv * za;
                    }
                }
                let rt = residual_vec(&trial, d);
                let ct = sum_sq(&rt);
                if ct < cost {
                    v = trial;
                    r = rt;
                    cost = ct;
                    lambda = (lambda * 0.5).max(LAMBDA_MIN);
                    break;
                }
            }
            lambda *= 2.0;
            if lambda > LAMBDA_MAX {
                break;
            }
        }
        if lambda > LAMBDA_MAX {
            break;
        }
    }
    let res = residual_inf(&r);
    SolveResult { pair: CirculantPair::from_real(&v, d), residual_inf: res, iterations, seed, converged: res <= tol }
}

/// Levenberg–Marquardt from the seeded random start.
pub fn solve(d: usize, seed: u64, tol: f64, max_iter: usize) -> Result<SolveResult> {
    if d < 2 {
        return invalid(format!("solve needs d >= 2, got {d}"));
    }
    Ok(solve_from(&random_start(d, seed), seed, tol, max_iter))
}

/// Tries seeds `seed, seed+1, …` until one converges; returns the last
/// attempt when none does.
pub fn solve_with_retries(d: usize, seed: u64, attempts: usize, tol: f64, max_iter: usize) -> Result<SolveResult> {
    let mut last = None;
    for k in 0..attempts.max(1) as u64 {
        let r = solve(d, seed + k, tol, max_iter)?;
        if r.converged {
            return Ok(r);
        }
        last = Some(r);
    }
    Ok(last.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{assemble_2circulant, check_etf};
    use crate::harmonic::{check_regular_representation, detect_harmonic_gram, BlockGram};
    use crate::solver::system::{correlations, split_vars};

    #[test]
    fn cholesky_small() {
        let mut a = vec![4.0, 2.0, 2.0, 3.0];
        let mut b = vec![2.0, 1.0];
        assert!(cholesky_solve(&mut a, &mut b, 2));
        assert!((b[0] - 0.5).abs() < 1e-15 && b[1].abs() < 1e-15);
    }

    #[test]
    fn d3_beta_is_one_fifth() {
        let r = solve(3, 1, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(r.converged, "residual {}", r.residual_inf);
        let mut v = r.pair.to_real();
        v.push(0.5);
        let (x, y) = split_vars(&v, 3);
        let (_, _, c) = correlations(&x, &y);
        assert!((c[0].norm_sqr() - 0.2).abs() < 1e-10);
    }

    #[test]
    fn d5_pipeline() {
        let r = solve(5, 3, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(r.converged);
        let phi = assemble_2circulant(&r.pair);
        assert!(check_etf(&phi, 1e-10).pass);
        let g = BlockGram::new(phi.gram(), 2, 5).unwrap();
        let rep = detect_harmonic_gram(&g).unwrap();
        assert!(rep.stable && rep.psd_ok);
        assert!(check_regular_representation(&g).unwrap());
    }

    #[test]
    fn deterministic() {
        let a = solve(6, 11, DEFAULT_TOL, 50).unwrap();
        let b = solve(6, 11, DEFAULT_TOL, 50).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn frequency_tightness() {
        let r = solve(7, 2, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(r.converged);
        let d = 7;
        for k in 0..d {
            let hat = |v: &[C64]| -> C64 {
                (0..d).map(|j| v[j] * crate::linalg::root_of_unity(-((j * k) as i64), d)).sum()
            };
            let s = hat(&r.pair.x).norm_sqr() + hat(&r.pair.y).norm_sqr();
            assert!((s - 2.0).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_d1() {
        assert!(solve(1, 0, DEFAULT_TOL, 10).is_err());
    }
}
