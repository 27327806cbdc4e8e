//! The polynomial constraint system for 2-circulant d×2d ETFs.
//!
//! Variables are `(Re x, Im x, Re y, Im y, w)`. With `A_k = ⟨x, Tᵏx⟩`,
//! `B_k = ⟨y, Tᵏy⟩`, `C_k = ⟨x, Tᵏy⟩` and `(Tᵏv)_i = v_{i−k}`, the rows are
//!
//! ```text
//! ‖x‖² − 1, ‖y‖² − 1,
//! Re(A_0 + B_0) − 4w,
//! Re, Im of A_j + B_j for 0 < j < d/2, Re(A_{d/2} + B_{d/2}) when d is even,
//! |A_j|² − |C_0|² for 1 ≤ j ≤ ⌊d/2⌋,
//! |C_j|² − |C_0|² for 1 ≤ j < d.
//! ```

use std::ops::{Add, Mul, Neg, Sub};

use crate::frames::CirculantPair;
use crate::linalg::RealMatrix;
use crate::rigor::Interval;

/// Number of constraint rows, `2d + ⌊d/2⌋ + 1`.
pub fn constraint_count(d: usize) -> usize {
    2 * d + d / 2 + 1
}

/// Number of variables, `4d + 1`.
pub fn variable_count(d: usize) -> usize {
    4 * d + 1
}

/// Real scalars the system can be evaluated over.
pub trait Scalar: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    fn from_f64(x: f64) -> Self;
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
}

impl Scalar for Interval {
    fn from_f64(x: f64) -> Self {
        Interval::point(x)
    }
}

/// Minimal complex number over a [`Scalar`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cx<T> {
    pub re: T,
    pub im: T,
}

impl<T: Scalar> Cx<T> {
    pub fn new(re: T, im: T) -> Self {
        Cx { re, im }
    }

    pub fn zero() -> Self {
        Cx { re: T::zero(), im: T::zero() }
    }

    pub fn conj(self) -> Self {
        Cx { re: self.re, im: -self.im }
    }

    pub fn norm_sqr(self) -> T {
        self.re * self.re + self.im * self.im
    }

    /// `conj(self)·other`.
    pub fn conj_mul(self, o: Self) -> Self {
        Cx { re: self.re * o.re + self.im * o.im, im: self.re * o.im - self.im * o.re }
    }

    pub fn scale(self, s: T) -> Self {
        Cx { re: self.re * s, im: self.im * s }
    }
}

impl<T: Scalar> Add for Cx<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Cx { re: self.re + o.re, im: self.im + o.im }
    }
}

impl<T: Scalar> Sub for Cx<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Cx { re: self.re - o.re, im: self.im - o.im }
    }
}

impl<T: Scalar> Mul for Cx<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Cx { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

/// Splits a length-(4d or 4d+1) real vector into complex x and y.
pub fn split_vars<T: Scalar>(v: &[T], d: usize) -> (Vec<Cx<T>>, Vec<Cx<T>>) {
    let x = (0..d).map(|i| Cx::new(v[i], v[d + i])).collect();
    let y = (0..d).map(|i| Cx::new(v[2 * d + i], v[3 * d + i])).collect();
    (x, y)
}

/// `⟨u, Tᵏv⟩ = Σ_i conj(u_i)·v_{i−k}`.
pub fn shifted_inner<T: Scalar>(u: &[Cx<T>], v: &[Cx<T>], k: usize) -> Cx<T> {
    let d = u.len();
    let mut acc = Cx::zero();
    for i in 0..d {
        acc = acc + u[i].conj_mul(v[(i + d - k % d) % d]);
    }
    acc
}

/// Correlations `(A_k, B_k, C_k)` for k = 0..d−1.
pub fn correlations<T: Scalar>(x: &[Cx<T>], y: &[Cx<T>]) -> (Vec<Cx<T>>, Vec<Cx<T>>, Vec<Cx<T>>) {
    let d = x.len();
    let a = (0..d).map(|k| shifted_inner(x, x, k)).collect();
    let b = (0..d).map(|k| shifted_inner(y, y, k)).collect();
    let c = (0..d).map(|k| shifted_inner(x, y, k)).collect();
    (a, b, c)
}

/// Assembles the rows from correlations and w.
pub fn rows_from_correlations<T: Scalar>(a: &[Cx<T>], b: &[Cx<T>], c: &[Cx<T>], w: T) -> Vec<T> {
    let d = a.len();
    let one = T::from_f64(1.0);
    let mut out = Vec::with_capacity(constraint_count(d));
    out.push(a[0].re - one);
    out.push(b[0].re - one);
    out.push(a[0].re + b[0].re - T::from_f64(4.0) * w);
    for j in 1..d.div_ceil(2) {
        let s = a[j] + b[j];
        out.push(s.re);
        out.push(s.im);
    }
    if d % 2 == 0 && d > 0 {
        out.push((a[d / 2] + b[d / 2]).re);
    }
    let c0 = c[0].norm_sqr();
    for aj in a.iter().take(d / 2 + 1).skip(1) {
        out.push(aj.norm_sqr() - c0);
    }
    for cj in c.iter().skip(1) {
        out.push(cj.norm_sqr() - c0);
    }
    out
}

/// The system evaluated at a (4d+1)-vector.
pub fn residual_vec<T: Scalar>(v: &[T], d: usize) -> Vec<T> {
    assert_eq!(v.len(), variable_count(d), "expected 4d+1 variables");
    let (x, y) = split_vars(v, d);
    let (a, b, c) = correlations(&x, &y);
    rows_from_correlations(&a, &b, &c, v[4 * d])
}

pub fn residual(p: &CirculantPair, w: f64) -> Vec<f64> {
    let mut v = p.to_real();
    v.push(w);
    residual_vec(&v, p.d())
}

pub fn residual_inf(r: &[f64]) -> f64 {
    r.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Derivatives of a correlation `⟨u, Tᵏv⟩` with respect to the real and
/// imaginary parts of u_i and v_i.
struct CorrGrad {
    du_re: Vec<Cx<f64>>,
    du_im: Vec<Cx<f64>>,
    dv_re: Vec<Cx<f64>>,
    dv_im: Vec<Cx<f64>>,
}

fn corr_grad(u: &[Cx<f64>], v: &[Cx<f64>], k: usize) -> CorrGrad {
    let d = u.len();
    let i_unit = Cx::new(0.0, 1.0);
    let mut g = CorrGrad {
        du_re: vec![Cx::zero(); d],
        du_im: vec![Cx::zero(); d],
        dv_re: vec![Cx::zero(); d],
        dv_im: vec![Cx::zero(); d],
    };
    for i in 0..d {
        // Σ_l conj(u_l) v_{l−k}: u_i appears at l = i, v_i at l = i + k.
        let vm = v[(i + d - k) % d];
        let up = u[(i + k) % d].conj();
        g.du_re[i] = vm;
        g.du_im[i] = Cx::new(0.0, -1.0) * vm;
        g.dv_re[i] = up;
        g.dv_im[i] = i_unit * up;
    }
    g
}

/// Analytic Jacobian with respect to all 4d+1 variables.
pub fn analytic_jacobian_vec(v: &[f64], d: usize) -> RealMatrix {
    let (x, y) = split_vars(v, d);
    let (a, _, c) = correlations(&x, &y);
    let rows = constraint_count(d);
    let cols = variable_count(d);
    let mut jac = vec![0.0; rows * cols];
    let (xr, xi, yr, yi) = (0, d, 2 * d, 3 * d);
    let mut r = 0;
    let set = |row: usize, col: usize, val: f64, jac: &mut Vec<f64>| jac[row * cols + col] += val;
    for i in 0..d {
        set(0, xr + i, 2.0 * x[i].re, &mut jac);
        set(0, xi + i, 2.0 * x[i].im, &mut jac);
        set(1, yr + i, 2.0 * y[i].re, &mut jac);
        set(1, yi + i, 2.0 * y[i].im, &mut jac);
        set(2, xr + i, 2.0 * x[i].re, &mut jac);
        set(2, xi + i, 2.0 * x[i].im, &mut jac);
        set(2, yr + i, 2.0 * y[i].re, &mut jac);
        set(2, yi + i, 2.0 * y[i].im, &mut jac);
    }
    set(2, 4 * d, -4.0, &mut jac);
    r += 3;
    let auto_grads: Vec<(CorrGrad, CorrGrad)> = (0..=d / 2).map(|k| (corr_grad(&x, &x, k), corr_grad(&y, &y, k))).collect();
    let tight_row = |k: usize, part: fn(Cx<f64>) -> f64, row: usize, jac: &mut Vec<f64>| {
        let (gx, gy) = &auto_grads[k];
        for i in 0..d {
            // u and v are the same vector, so both slots contribute.
            jac[row * cols + xr + i] += part(gx.du_re[i] + gx.dv_re[i]);
            jac[row * cols + xi + i] += part(gx.du_im[i] + gx.dv_im[i]);
            jac[row * cols + yr + i] += part(gy.du_re[i] + gy.dv_re[i]);
            jac[row * cols + yi + i] += part(gy.du_im[i] + gy.dv_im[i]);
        }
    };
    for j in 1..d.div_ceil(2) {
        tight_row(j, |z| z.re, r, &mut jac);
        tight_row(j, |z| z.im, r + 1, &mut jac);
        r += 2;
    }
    if d % 2 == 0 {
        tight_row(d / 2, |z| z.re, r, &mut jac);
        r += 1;
    }
    // ∂|z|² = 2 Re(conj(z)·∂z).
    let abs2 = |z: Cx<f64>, dz: Cx<f64>| 2.0 * (z.re * dz.re + z.im * dz.im);
    let c_grads: Vec<CorrGrad> = (0..d).map(|k| corr_grad(&x, &y, k)).collect();
    let minus_c0 = |row: usize, jac: &mut Vec<f64>| {
        let g = &c_grads[0];
        for i in 0..d {
            jac[row * cols + xr + i] -= abs2(c[0], g.du_re[i]);
            jac[row * cols + xi + i] -= abs2(c[0], g.du_im[i]);
            jac[row * cols + yr + i] -= abs2(c[0], g.dv_re[i]);
            jac[row * cols + yi + i] -= abs2(c[0], g.dv_im[i]);
        }
    };
    for j in 1..=d / 2 {
        let (gx, _) = &auto_grads[j];
        for i in 0..d {
            jac[r * cols + xr + i] += abs2(a[j], gx.du_re[i] + gx.dv_re[i]);
            jac[r * cols + xi + i] += abs2(a[j], gx.du_im[i] + gx.dv_im[i]);
        }
        minus_c0(r, &mut jac);
        r += 1;
    }
    for j in 1..d {
        let g = &c_grads[j];
        for i in 0..d {
            jac[r * cols + xr + i] += abs2(c[j], g.du_re[i]);
            jac[r * cols + xi + i] += abs2(c[j], g.du_im[i]);
            jac[r * cols + yr + i] += abs2(c[j], g.dv_re[i]);
            jac[r * cols + yi + i] += abs2(c[j], g.dv_im[i]);
        }
        minus_c0(r, &mut jac);
        r += 1;
    }
    debug_assert_eq!(r, rows);
    RealMatrix::from_fn(rows, cols, |i, j| jac[i * cols + j])
}

pub fn analytic_jacobian(p: &CirculantPair, w: f64) -> RealMatrix {
    let mut v = p.to_real();
    v.push(w);
    analytic_jacobian_vec(&v, p.d())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn counts() {
        for d in 2..=200 {
            let v = vec![0.1; variable_count(d)];
            assert_eq!(residual_vec(&v, d).len(), constraint_count(d));
        }
    }

    #[test]
    fn hand_evaluation_d2() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = CirculantPair::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)], vec![C64::new(s, 0.0), C64::new(0.0, s)])
            .unwrap();
        let r = residual(&p, 0.5);
        assert!(r[0].abs() < 1e-15 && r[1].abs() < 1e-15 && r[2].abs() < 1e-15);
    }

    #[test]
    fn orthogonal_shift_is_not_equiangular() {
        let e0 = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let p = CirculantPair::new(e0.clone(), e0).unwrap();
        let r = residual(&p, 0.5);
        // Rows: 2 norms, tight_0, tight_1 (real), |A_1|² − |C_0|², |C_1|² − |C_0|².
        assert_eq!(r.len(), 6);
        assert!((r[4] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn jacobian_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 2..=7 {
            let v: Vec<f64> = (0..variable_count(d)).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let j = analytic_jacobian_vec(&v, d);
            let h = 1e-6;
            for col in 0..variable_count(d) {
                let mut vp = v.clone();
                let mut vm = v.clone();
                vp[col] += h;
                vm[col] -= h;
                let (rp, rm) = (residual_vec(&vp, d), residual_vec(&vm, d));
                for row in 0..constraint_count(d) {
                    let fd = (rp[row] - rm[row]) / (2.0 * h);
                    assert!((fd - j[(row, col)]).abs() <= 1e-5 * (1.0 + fd.abs()), "d={d} ({row},{col})");
                }
            }
            assert_eq!(j[(2, 4 * d)], -4.0);
            assert_eq!(j[(0, 0)], 2.0 * v[0]);
        }
    }
}
