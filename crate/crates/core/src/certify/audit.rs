//! Exact integer-coefficient expansion of the constraint system, used to
//! audit the coefficient 1-norm bound `|f| ≤ 16d²`.

use std::collections::HashMap;

use crate::solver::system::{constraint_count, variable_count};

/// Sparse polynomial; a monomial is its sorted list of variable indices
/// (with repetition).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Poly {
    terms: HashMap<Vec<u32>, i64>,
}

impl Poly {
    pub fn constant(c: i64) -> Self {
        let mut p = Poly::default();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(i: u32) -> Self {
        let mut p = Poly::default();
        p.add_term(vec![i], 1);
        p
    }

    fn add_term(&mut self, mono: Vec<u32>, c: i64) {
        let e = self.terms.entry(mono).or_insert(0);
        *e += c;
        self.terms.retain(|_, v| *v != 0);
    }

    pub fn add(&self, o: &Poly) -> Poly {
        self.combine(o, 1)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.combine(o, -1)
    }

    fn combine(&self, o: &Poly, sign: i64) -> Poly {
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            *terms.entry(m.clone()).or_insert(0) += sign * c;
        }
        terms.retain(|_, v| *v != 0);
        Poly { terms }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut terms: HashMap<Vec<u32>, i64> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let mut m = ma.clone();
                m.extend_from_slice(mb);
                m.sort_unstable();
                *terms.entry(m).or_insert(0) += ca * cb;
            }
        }
        terms.retain(|_, v| *v != 0);
        Poly { terms }
    }

    /// Sum of absolute values of the coefficients.
    pub fn coefficient_norm(&self) -> u64 {
        self.terms.values().map(|c| c.unsigned_abs()).sum()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluates at a real point.
    pub fn eval(&self, v: &[f64]) -> f64 {
        self.terms.iter().map(|(m, &c)| c as f64 * m.iter().map(|&i| v[i as usize]).product::<f64>()).sum()
    }
}

/// `(Re, Im)` of `⟨u, Tᵏv⟩` as polynomials, where u and v are given by the
/// variable indices of their real and imaginary parts.
fn corr(ur: u32, ui: u32, vr: u32, vi: u32, d: usize, k: usize) -> (Poly, Poly) {
    let mut re = Poly::default();
    let mut im = Poly::default();
    for i in 0..d {
        let j = (i + d - k) % d;
        let (a, b) = (Poly::var(ur + i as u32), Poly::var(ui + i as u32));
        let (p, q) = (Poly::var(vr + j as u32), Poly::var(vi + j as u32));
        re = re.add(&a.mul(&p)).add(&b.mul(&q));
        im = im.add(&a.mul(&q)).sub(&b.mul(&p));
    }
    (re, im)
}

/// Every row of the constraint system, expanded.
pub fn system_polynomials(d: usize) -> Vec<Poly> {
    let (xr, xi, yr, yi) = (0u32, d as u32, 2 * d as u32, 3 * d as u32);
    let w = Poly::var(4 * d as u32);
    let a: Vec<(Poly, Poly)> = (0..=d / 2).map(|k| corr(xr, xi, xr, xi, d, k)).collect();
    let b: Vec<(Poly, Poly)> = (0..=d / 2).map(|k| corr(yr, yi, yr, yi, d, k)).collect();
    let c: Vec<(Poly, Poly)> = (0..d).map(|k| corr(xr, xi, yr, yi, d, k)).collect();
    let one = Poly::constant(1);
    let abs2 = |z: &(Poly, Poly)| z.0.mul(&z.0).add(&z.1.mul(&z.1));
    let mut out = vec![a[0].0.sub(&one), b[0].0.sub(&one), a[0].0.add(&b[0].0).sub(&Poly::constant(4).mul(&w))];
    for j in 1..d.div_ceil(2) {
        out.push(a[j].0.add(&b[j].0));
        out.push(a[j].1.add(&b[j].1));
    }
    if d % 2 == 0 {
        out.push(a[d / 2].0.add(&b[d / 2].0));
    }
    let c0 = abs2(&c[0]);
    for aj in a.iter().take(d / 2 + 1).skip(1) {
        out.push(abs2(aj).sub(&c0));
    }
    for cj in c.iter().skip(1) {
        out.push(abs2(cj).sub(&c0));
    }
    debug_assert_eq!(out.len(), constraint_count(d));
    debug_assert!(out.iter().all(|p| p.terms.keys().flatten().all(|&i| (i as usize) < variable_count(d))));
    out
}

/// `|f| = max_i |f_i|` computed from the exact expansion.
pub fn coefficient_norm_bound(d: usize) -> u64 {
    system_polynomials(d).iter().map(Poly::coefficient_norm).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::system::residual_vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn expansion_matches_evaluator() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in 2..=6 {
            let polys = system_polynomials(d);
            let v: Vec<f64> = (0..variable_count(d)).map(|_| rng.random::<f64>() - 0.5).collect();
            let r = residual_vec(&v, d);
            for (p, want) in polys.iter().zip(&r) {
                assert!((p.eval(&v) - want).abs() < 1e-12);
                assert!(p.degree() <= 4);
            }
        }
    }

    #[test]
    fn small_norms() {
        // d = 2: |C_1|² − |C_0|² has 4·4 + 4·4 products before cancellation.
        assert!(coefficient_norm_bound(2) <= 64);
        assert!(coefficient_norm_bound(3) <= 144);
    }

    #[test]
    fn poly_arithmetic() {
        let x = Poly::var(0);
        let sq = x.add(&Poly::constant(1)).mul(&x.sub(&Poly::constant(1)));
        assert_eq!(sq.coefficient_norm(), 2);
        assert_eq!(sq.len(), 2);
        assert!(x.sub(&x).is_empty());
    }
}
