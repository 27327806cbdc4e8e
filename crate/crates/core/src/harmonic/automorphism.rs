use super::block::BlockGram;
use crate::error::{invalid, Error, Result};
use crate::frames::rephase;
use crate::linalg::{ComplexMatrix, C64};

/// A permutation σ with unimodular scalars c such that
/// `G_ij = c̄_i c_j G_σ(i)σ(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutomorphismWitness {
    pub sigma: Vec<usize>,
    pub c: Vec<C64>,
}

impl AutomorphismWitness {
    pub fn new(sigma: Vec<usize>, c: Vec<C64>) -> Result<Self> {
        let n = sigma.len();
        if c.len() != n {
            return invalid(format!("σ has {n} entries but c has {}", c.len()));
        }
        let mut seen = vec![false; n];
        for &s in &sigma {
            if s >= n || seen[s] {
                return invalid("σ is not a permutation");
            }
            seen[s] = true;
        }
        if let Some(i) = c.iter().position(|z| (z.norm() - 1.0).abs() > 1e-10) {
            return invalid(format!("c[{i}] is not unimodular"));
        }
        Ok(AutomorphismWitness { sigma, c })
    }

    pub fn identity(n: usize) -> Self {
        AutomorphismWitness { sigma: (0..n).collect(), c: vec![C64::new(1.0, 0.0); n] }
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    /// Cycles of σ, each starting at its least index, ordered by that index.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut i = self.sigma[start];
            while i != start {
                seen[i] = true;
                cyc.push(i);
                i = self.sigma[i];
            }
            out.push(cyc);
        }
        out
    }

    /// Cycle lengths in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// `(m, t)` when σ has t cycles all of length m.
    pub fn uniform_cycle_type(&self) -> Option<(usize, usize)> {
        let ct = self.cycle_type();
        let m = *ct.first()?;
        ct.iter().all(|&l| l == m).then_some((m, ct.len()))
    }

    pub fn apply_power(&self, mut i: usize, k: usize) -> usize {
        for _ in 0..k {
            i = self.sigma[i];
        }
        i
    }
}

/// `max |G_ij − c̄_i c_j G_σ(i)σ(j)|`.
pub fn automorphism_residual(g: &ComplexMatrix, w: &AutomorphismWitness) -> Result<f64> {
    let n = g.rows();
    if !g.is_square() || w.n() != n {
        return invalid(format!("witness has {} indices but the Gram is {}x{}", w.n(), g.rows(), g.cols()));
    }
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let rhs = w.c[i].conj() * w.c[j] * g[(w.sigma[i], w.sigma[j])];
            worst = worst.max((g[(i, j)] - rhs).norm());
        }
    }
    Ok(worst)
}

pub fn verify_automorphism(g: &ComplexMatrix, w: &AutomorphismWitness, tol: f64) -> bool {
    automorphism_residual(g, w).is_ok_and(|r| r <= tol)
}

/// Output of [`circulantize`].
#[derive(Debug, Clone)]
pub struct Circulantized {
    /// Rescaled Gram reordered so that index `j·m + ℓ` is `σ^ℓ(i_j)`.
    pub gram: BlockGram,
    /// Scalars `a_i` in the original indexing.
    pub a: Vec<C64>,
    pub beta: C64,
    /// `order[j·m + ℓ] = σ^ℓ(i_j)`.
    pub order: Vec<usize>,
    /// Spread of `f(i) = ∏_{k<m} c_{σ^k(i)}` over all indices.
    pub f_spread: f64,
}

/// Rescales the frame by `a_{σ^ℓ(i_j)} = β^{−ℓ} ∏_{k<ℓ} c_{σ^k(i_j)}` and
/// reorders it cycle by cycle, producing a Gram with Γ-stable blocks.
pub fn circulantize(g: &ComplexMatrix, w: &AutomorphismWitness) -> Result<Circulantized> {
    let n = g.rows();
    let res = automorphism_residual(g, w)?;
    if res > 1e-8 {
        return Err(Error::InconsistentWitness(format!("automorphism residual {res:.3e}")));
    }
    let (m, t) = w
        .uniform_cycle_type()
        .ok_or_else(|| Error::InvalidArgument(format!("cycle type {:?} is not uniform", w.cycle_type())))?;
    if let Some(k) = g.data().iter().position(|z| z.norm() < 1e-12) {
        return Err(Error::UnsupportedInput(format!("Gram entry ({}, {}) vanishes", k / n, k % n)));
    }
    let f: Vec<C64> = (0..n).map(|i| (0..m).map(|k| w.c[w.apply_power(i, k)]).product()).collect();
    let f_spread = f.iter().map(|z| (z - f[0]).norm()).fold(0.0, f64::max);
    if f_spread > 1e-8 {
        return Err(Error::InconsistentWitness(format!("cycle products differ by {f_spread:.3e}")));
    }
    let beta = C64::from_polar(1.0, f[0].arg() / m as f64);
    let mut a = vec![C64::new(1.0, 0.0); n];
    let mut order = Vec::with_capacity(n);
    for cyc in w.cycles() {
        let mut acc = C64::new(1.0, 0.0);
        let mut bpow = C64::new(1.0, 0.0);
        for &idx in &cyc {
            a[idx] = acc / bpow;
            acc *= w.c[idx];
            bpow *= beta;
            order.push(idx);
        }
    }
    let scaled = rephase(g, &a);
    let reordered = scaled.permute_sym(&order);
    Ok(Circulantized { gram: BlockGram::new(reordered, t, m)?, a, beta, order, f_spread })
}

/// Phases c for a candidate σ from the relations
/// `c_j = c_i·G_ij / G_σ(i)σ(j)`, propagated from index 0 over nonzero
/// entries; None when the moduli already disagree.
fn chain_phases(g: &ComplexMatrix, sigma: &[usize], tol: f64) -> Option<Vec<C64>> {
    let n = g.rows();
    let mut c: Vec<Option<C64>> = vec![None; n];
    for root in 0..n {
        if c[root].is_some() {
            continue;
        }
        c[root] = Some(C64::new(1.0, 0.0));
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            let ci = c[i].expect("visited");
            for j in 0..n {
                if c[j].is_some() {
                    continue;
                }
                let (lhs, rhs) = (g[(i, j)], g[(sigma[i], sigma[j])]);
                if (lhs.norm() - rhs.norm()).abs() > tol {
                    return None;
                }
                if lhs.norm() > tol {
                    let z = ci * lhs / rhs;
                    c[j] = Some(z / z.norm());
                    stack.push(j);
                }
            }
        }
    }
    Some(c.into_iter().map(|z| z.expect("every index visited")).collect())
}

/// Searches σ in lexicographic order for an automorphism with t cycles of
/// length m. Exhaustive for n ≤ 12; otherwise stops after `budget`
/// search nodes.
pub fn brute_force_automorphism_search(g: &ComplexMatrix, m: usize, t: usize, budget: usize) -> Option<AutomorphismWitness> {
    let n = g.rows();
    if !g.is_square() || m == 0 || m * t != n {
        return None;
    }
    let tol = 1e-8;
    let limit = if n <= 12 { usize::MAX } else { budget };
    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut c = vec![C64::new(1.0, 0.0); n];
    let mut nodes = 0usize;
    let mut result = None;
    search(g, m, t, tol, 0, &mut sigma, &mut used, &mut c, &mut nodes, limit, &mut result);
    result
}

#[allow(clippy::too_many_arguments)]
fn search(
    g: &ComplexMatrix,
    m: usize,
    t: usize,
    tol: f64,
    k: usize,
    sigma: &mut Vec<usize>,
    used: &mut Vec<bool>,
    c: &mut Vec<C64>,
    nodes: &mut usize,
    limit: usize,
    result: &mut Option<AutomorphismWitness>,
) -> bool {
    let n = g.rows();
    if k == n {
        let w = AutomorphismWitness { sigma: sigma.clone(), c: c.clone() };
        if w.uniform_cycle_type() != Some((m, t)) {
            return false;
        }
        // Recompute the phases along the full chain; the incremental ones
        // only used row 0 and may be unset for zero entries.
        let Some(phases) = chain_phases(g, sigma, tol) else { return false };
        let w = AutomorphismWitness { sigma: sigma.clone(), c: phases };
        if verify_automorphism(g, &w, 1e-8) {
            *result = Some(w);
            return true;
        }
        return false;
    }
    for cand in 0..n {
        if used[cand] {
            continue;
        }
        *nodes += 1;
        if *nodes > limit {
            return true;
        }
        if !cycle_prefix_ok(sigma, k, cand, m) {
            continue;
        }
        if (g[(k, k)] - g[(cand, cand)]).norm() > tol {
            continue;
        }
        let phase = if k == 0 {
            C64::new(1.0, 0.0)
        } else {
            let (lhs, rhs) = (g[(0, k)], g[(sigma[0], cand)]);
            if (lhs.norm() - rhs.norm()).abs() > tol {
                continue;
            }
            if rhs.norm() > tol {
                let z = c[0] * lhs / rhs;
                z / z.norm()
            } else {
                C64::new(1.0, 0.0)
            }
        };
        let consistent = (1..k).all(|i| {
            let lhs = g[(i, k)];
            let rhs = g[(sigma[i], cand)];
            if lhs.norm() > tol && g[(0, i)].norm() > tol && g[(0, k)].norm() > tol {
                (lhs - c[i].conj() * phase * rhs).norm() <= tol
            } else {
                (lhs.norm() - rhs.norm()).abs() <= tol
            }
        });
        if !consistent {
            continue;
        }
        sigma[k] = cand;
        used[cand] = true;
        c[k] = phase;
        if search(g, m, t, tol, k + 1, sigma, used, c, nodes, limit, result) {
            return true;
        }
        used[cand] = false;
        sigma[k] = usize::MAX;
    }
    false
}

/// Rejects σ(k) = cand when it closes a cycle of length other than m.
fn cycle_prefix_ok(sigma: &[usize], k: usize, cand: usize, m: usize) -> bool {
    // Follow cand forward through assigned entries.
    let mut len = 1;
    let mut i = cand;
    while i != k {
        if i >= sigma.len() || sigma[i] == usize::MAX {
            return len < m;
        }
        i = sigma[i];
        len += 1;
        if len > m {
            return false;
        }
    }
    len == m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{family_3x6, paley_graph, synthesize_doubled_frame, zauner_2x4_signature};
    use crate::frames::gram_of_signature;
    use crate::harmonic::{check_regular_representation, detect_harmonic_gram};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_gram(n: usize, d: usize, seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = ComplexMatrix::from_fn(d, n, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        phi.gram()
    }

    #[test]
    fn identity_witness_always_verifies() {
        let g = random_gram(6, 3, 1);
        assert!(verify_automorphism(&g, &AutomorphismWitness::identity(6), 0.0));
    }

    #[test]
    fn random_permutation_rejected() {
        let g = random_gram(6, 3, 2);
        let w = AutomorphismWitness::new(vec![1, 2, 0, 4, 5, 3], vec![C64::new(1.0, 0.0); 6]).unwrap();
        assert!(automorphism_residual(&g, &w).unwrap() > 1e-2);
    }

    #[test]
    fn trivial_circulantize_is_identity() {
        let g = gram_of_signature(&zauner_2x4_signature(), 2).unwrap();
        let out = circulantize(&g, &AutomorphismWitness::identity(4)).unwrap();
        assert_eq!((out.gram.t(), out.gram.m()), (4, 1));
        assert!(out.gram.full().max_abs_diff(&g) < 1e-15);
    }

    #[test]
    fn search_finds_zauner_witness() {
        let g = gram_of_signature(&zauner_2x4_signature(), 2).unwrap();
        let w = brute_force_automorphism_search(&g, 2, 2, 0).unwrap();
        assert_eq!(w.cycle_type(), vec![2, 2]);
        let out = circulantize(&g, &w).unwrap();
        assert!(detect_harmonic_gram(&out.gram).unwrap().stable);
    }

    #[test]
    fn search_finds_family_3x6_witness() {
        let alpha = C64::from_polar(1.0, 0.7);
        let g = gram_of_signature(&family_3x6(alpha).unwrap(), 3).unwrap();
        let w = brute_force_automorphism_search(&g, 3, 2, 0).unwrap();
        assert_eq!(w.cycle_type(), vec![3, 3]);
        assert!(verify_automorphism(&g, &w, 1e-10));
        let out = circulantize(&g, &w).unwrap();
        assert!(out.f_spread < 1e-9);
        assert!(check_regular_representation(&out.gram).unwrap());
    }

    #[test]
    fn search_rejects_generic_gram() {
        let g = random_gram(8, 4, 3);
        assert!(brute_force_automorphism_search(&g, 2, 4, 0).is_none());
        assert!(brute_force_automorphism_search(&g, 4, 2, 0).is_none());
    }

    #[test]
    fn circulantize_preserves_moduli() {
        let g = synthesize_doubled_frame(&paley_graph(5).unwrap(), 1).unwrap().frame().gram();
        let w = brute_force_automorphism_search(&g, 5, 2, 0).unwrap();
        let out = circulantize(&g, &w).unwrap();
        for (p, &i) in out.order.iter().enumerate() {
            for (q, &j) in out.order.iter().enumerate() {
                assert!((out.gram.full()[(p, q)].norm() - g[(i, j)].norm()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn inconsistent_witness_rejected() {
        let g = gram_of_signature(&zauner_2x4_signature(), 2).unwrap();
        let w = AutomorphismWitness::new(vec![2, 3, 0, 1], vec![C64::new(1.0, 0.0); 4]).unwrap();
        assert!(circulantize(&g, &w).is_err());
    }
}
