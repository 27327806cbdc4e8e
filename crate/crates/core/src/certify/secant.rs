use crate::rigor::{Interval, IntervalMatrix};
use crate::solver::system::{constraint_count, correlations, residual_vec, split_vars, variable_count, Cx};

/// Enclosure of the constraint system over an interval box, with every
/// correlation summed directly in O(d²).
pub fn f_eval_interval(z: &[Interval], d: usize) -> Vec<Interval> {
    residual_vec(z, d)
}

fn points(x0: &[f64]) -> Vec<Interval> {
    x0.iter().map(|&v| Interval::point(v)).collect()
}

/// Secant matrix by evaluating f at `x0 + δe_j` and at `x0`, subtracting and
/// dividing, all in interval arithmetic. Widths are limited by cancellation,
/// roughly `ulp(f)/δ`.
pub fn secant_jacobian_naive(x0: &[f64], delta: f64, d: usize) -> IntervalMatrix {
    let m = variable_count(d);
    let n = constraint_count(d);
    let base = points(x0);
    let f0 = f_eval_interval(&base, d);
    let dl = Interval::point(delta);
    let mut s = IntervalMatrix::zeros(n, m);
    for j in 0..m {
        let mut z = base.clone();
        z[j] = z[j] + dl;
        let fj = f_eval_interval(&z, d);
        for i in 0..n {
            s[(i, j)] = (fj[i] - f0[i]) / dl;
        }
    }
    s
}

/// `(|z + δD|² − |z|²)/δ = 2 Re(conj(z)·D) + δ|D|²`.
fn abs2_secant(z: Cx<Interval>, dz: Cx<Interval>, delta: Interval) -> Interval {
    let two = Interval::point(2.0);
    two * (z.re * dz.re + z.im * dz.im) + delta * dz.norm_sqr()
}

/// Secant matrix from the exact difference quotients of each correlation.
///
/// Perturbing `x_i` by `δu` (u = 1 or i) changes `A_k` by
/// `δ(conj(u)x_{i−k} + u·conj(x_{i+k})) + δ²[k = 0]` and `C_k` by
/// `δ·conj(u)y_{i−k}`; perturbing `y_i` changes `C_k` by `δ·u·conj(x_{i+k})`.
/// Dividing by δ symbolically avoids the cancellation of the naive route, so
/// the enclosure is only a few ulps wide.
pub fn secant_jacobian(x0: &[f64], delta: f64, d: usize) -> IntervalMatrix {
    let m = variable_count(d);
    let n = constraint_count(d);
    let v = points(x0);
    let (x, y) = split_vars(&v, d);
    let (a, _, c) = correlations(&x, &y);
    let dl = Interval::point(delta);
    let one = Interval::ONE;
    let units = [Cx::new(one, Interval::ZERO), Cx::new(Interval::ZERO, one)];
    let mut s = IntervalMatrix::zeros(n, m);
    for col in 0..4 * d {
        let block = col / d;
        let i = col % d;
        let u = units[block % 2];
        let on_x = block < 2;
        // Difference quotients of A (or B) and C.
        let auto = |k: usize| -> Cx<Interval> {
            let v = if on_x { &x } else { &y };
            let mut q = u.conj_mul(v[(i + d - k) % d]) + u * v[(i + k) % d].conj();
            if k == 0 {
                q.re = q.re + dl;
            }
            q
        };
        let cross = |k: usize| -> Cx<Interval> {
            if on_x {
                u.conj_mul(y[(i + d - k) % d])
            } else {
                u * x[(i + k) % d].conj()
            }
        };
        let da: Vec<Cx<Interval>> = (0..=d / 2).map(&auto).collect();
        let dc: Vec<Cx<Interval>> = (0..d).map(cross).collect();
        let mut r = 0;
        let (norm_x, norm_y) = if on_x { (da[0].re, Interval::ZERO) } else { (Interval::ZERO, da[0].re) };
        s[(0, col)] = norm_x;
        s[(1, col)] = norm_y;
        s[(2, col)] = da[0].re;
        r += 3;
        for dk in da.iter().take(d.div_ceil(2)).skip(1) {
            s[(r, col)] = dk.re;
            s[(r + 1, col)] = dk.im;
            r += 2;
        }
        if d % 2 == 0 {
            s[(r, col)] = da[d / 2].re;
            r += 1;
        }
        let dc0 = abs2_secant(c[0], dc[0], dl);
        for j in 1..=d / 2 {
            let dj = if on_x { abs2_secant(a[j], da[j], dl) } else { Interval::ZERO };
            s[(r, col)] = dj - dc0;
            r += 1;
        }
        for j in 1..d {
            s[(r, col)] = abs2_secant(c[j], dc[j], dl) - dc0;
            r += 1;
        }
        debug_assert_eq!(r, n);
    }
    s[(2, 4 * d)] = Interval::point(-4.0);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{analytic_jacobian, solve, DEFAULT_MAX_ITER, DEFAULT_TOL};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_point_norm_rows() {
        let d = 3;
        let z = vec![Interval::ZERO; variable_count(d)];
        let f = f_eval_interval(&z, d);
        assert!(f[0].contains(-1.0) && f[0].width() < 1e-15);
        assert!(f[1].contains(-1.0) && f[1].width() < 1e-15);
    }

    #[test]
    fn identity_route_inside_naive_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 2..=8 {
            let x0: Vec<f64> = (0..variable_count(d)).map(|_| rng.random::<f64>() - 0.5).collect();
            let fine = secant_jacobian(&x0, 1e-3, d);
            let coarse = secant_jacobian_naive(&x0, 1e-3, d);
            for i in 0..fine.rows() {
                for j in 0..fine.cols() {
                    assert!(fine[(i, j)].intersects(coarse[(i, j)]), "d={d} ({i},{j})");
                }
            }
            assert!(fine.max_width() < 1e-12);
        }
    }

    #[test]
    fn secant_near_analytic_at_solution() {
        for d in [3usize, 6, 11] {
            let r = solve(d, 1, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
            let mut x0 = r.pair.to_real();
            x0.push(0.5);
            let enc = secant_jacobian(&x0, 1e-10, d);
            assert!(enc.max_width() < 1e-4);
            let s = enc.midpoint();
            let j = analytic_jacobian(&r.pair, 0.5);
            assert!(s.max_abs_diff(&j) < 1e-5, "d={d} {}", s.max_abs_diff(&j));
            let naive = secant_jacobian_naive(&x0, 1e-10, d);
            for i in 0..naive.rows() {
                for k in 0..naive.cols() {
                    assert!(naive[(i, k)].intersects(enc[(i, k)]));
                }
            }
        }
    }
}
