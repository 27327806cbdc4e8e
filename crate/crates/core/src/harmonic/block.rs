use crate::error::{invalid, Result};
use crate::linalg::{hermitian_eigen, root_of_unity, ComplexMatrix, Role, C64};

const STABLE_TOL: f64 = 1e-8;

/// A (tm)×(tm) Gram matrix viewed as a t×t array of m×m blocks indexed
/// by the cyclic group C_m; entry `(i·m + g, j·m + h)` is `(G_ij)_{g,h}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockGram {
    t: usize,
    m: usize,
    full: ComplexMatrix,
}

impl BlockGram {
    pub fn new(full: ComplexMatrix, t: usize, m: usize) -> Result<Self> {
        if t == 0 || m == 0 || !full.is_square() || full.rows() != t * m {
            return invalid(format!("a {}x{} matrix is not a {t}x{t} array of {m}x{m} blocks", full.rows(), full.cols()));
        }
        let defect = full.hermitian_defect();
        if defect > STABLE_TOL {
            return invalid(format!("block Gram is not Hermitian (defect {defect:.3e})"));
        }
        Ok(BlockGram { t, m, full: full.with_role(Role::Gram) })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn full(&self) -> &ComplexMatrix {
        &self.full
    }

    pub fn entry(&self, i: usize, j: usize, g: usize, h: usize) -> C64 {
        self.full[(i * self.m + g, j * self.m + h)]
    }

    pub fn block(&self, i: usize, j: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.m, self.m, |g, h| self.entry(i, j, g, h))
    }

    /// Largest `|(G_ij)_{g+k,h+k} − (G_ij)_{g,h}|`.
    pub fn stability_defect(&self) -> f64 {
        let m = self.m;
        let mut worst: f64 = 0.0;
        for i in 0..self.t {
            for j in 0..self.t {
                for g in 0..m {
                    for h in 0..m {
                        let base = self.entry(i, j, (g + m - h) % m, 0);
                        worst = worst.max((self.entry(i, j, g, h) - base).norm());
                    }
                }
            }
        }
        worst
    }

    /// `(F G_ij F⁻¹)_{αα} = (1/m) Σ_{g,h} e^{−2πiα(g−h)/m} (G_ij)_{g,h}`.
    fn fourier_diagonal(&self, i: usize, j: usize, alpha: usize, stable: bool) -> C64 {
        let m = self.m;
        if stable {
            // Γ-stable blocks depend on g − h only.
            (0..m).map(|delta| self.entry(i, j, delta, 0) * root_of_unity(-((alpha * delta) as i64), m)).sum()
        } else {
            let mut acc = C64::new(0.0, 0.0);
            for g in 0..m {
                for h in 0..m {
                    let k = (alpha * ((g + m - h) % m)) as i64;
                    acc += self.entry(i, j, g, h) * root_of_unity(-k, m);
                }
            }
            acc / m as f64
        }
    }

    /// The t×t matrices `H_α` for α = 0..m−1.
    pub fn fourier_blocks(&self, stable: bool) -> Vec<ComplexMatrix> {
        (0..self.m)
            .map(|alpha| ComplexMatrix::from_fn(self.t, self.t, |i, j| self.fourier_diagonal(i, j, alpha, stable)))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct HarmonicReport {
    pub stable: bool,
    pub stability_defect: f64,
    pub h: Vec<ComplexMatrix>,
    pub min_eigenvalue: f64,
    pub psd_ok: bool,
}

/// Checks Γ-stability of every block and positivity of the Fourier
/// blocks `H_α`.
pub fn detect_harmonic_gram(g: &BlockGram) -> Result<HarmonicReport> {
    let stability_defect = g.stability_defect();
    let stable = stability_defect <= STABLE_TOL;
    let h = g.fourier_blocks(stable);
    let mut min_eigenvalue = f64::INFINITY;
    for ha in &h {
        let e = hermitian_eigen(ha)?;
        min_eigenvalue = min_eigenvalue.min(e.eigenvalues[0]);
    }
    Ok(HarmonicReport { stable, stability_defect, psd_ok: min_eigenvalue >= -STABLE_TOL, h, min_eigenvalue })
}

/// `G² = tG` and `Σ_i G_ii = tI`; when both hold, also requires each `H_α`
/// to have eigenvalue t with multiplicity one.
pub fn check_regular_representation(g: &BlockGram) -> Result<bool> {
    let (t, m) = (g.t, g.m);
    let sq = &g.full * &g.full;
    if sq.max_abs_diff(&g.full.scale_re(t as f64)) > STABLE_TOL {
        return Ok(false);
    }
    let mut diag_sum = ComplexMatrix::zeros(m, m);
    for i in 0..t {
        diag_sum = &diag_sum + &g.block(i, i);
    }
    if diag_sum.max_abs_diff(&ComplexMatrix::identity(m).scale_re(t as f64)) > STABLE_TOL {
        return Ok(false);
    }
    let report = detect_harmonic_gram(g)?;
    for ha in &report.h {
        let e = hermitian_eigen(ha)?;
        let hits = e.eigenvalues.iter().filter(|&&l| (l - t as f64).abs() <= 1e-6).count();
        if hits != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Generators ψ_1..ψ_t ∈ C^m whose translates have Gram matrix G, for a
/// Gram satisfying the regular-representation identities. Each
/// `H_α = m·u u*` with `u_i` the conjugate of the α-th Fourier coefficient
/// of ψ_i.
pub fn harmonic_generators(g: &BlockGram) -> Result<Vec<Vec<C64>>> {
    if !check_regular_representation(g)? {
        return invalid("Gram does not satisfy the regular-representation identities");
    }
    let (t, m) = (g.t, g.m);
    let h = g.fourier_blocks(true);
    let scale = (t as f64 / m as f64).sqrt();
    let mut hat = vec![vec![C64::new(0.0, 0.0); m]; t];
    for (alpha, ha) in h.iter().enumerate() {
        let e = hermitian_eigen(ha)?;
        for (i, row) in hat.iter_mut().enumerate() {
            row[alpha] = e.eigenvectors[(i, t - 1)].conj() * scale;
        }
    }
    let norm = 1.0 / (m as f64).sqrt();
    Ok(hat
        .iter()
        .map(|coeffs| {
            (0..m)
                .map(|k| (0..m).map(|alpha| coeffs[alpha] * root_of_unity((alpha * k) as i64, m)).sum::<C64>() * norm)
                .collect()
        })
        .collect())
}

/// The m×(tm) frame whose column `i·m + g` is ψ_i cyclically shifted by g.
pub fn assemble_harmonic_frame(gens: &[Vec<C64>]) -> Result<ComplexMatrix> {
    let m = match gens.first() {
        Some(g) if !g.is_empty() => g.len(),
        _ => return invalid("need at least one nonempty generator"),
    };
    if gens.iter().any(|g| g.len() != m) {
        return invalid("generators must have equal length");
    }
    let t = gens.len();
    Ok(ComplexMatrix::from_fn(m, t * m, |k, col| {
        let (i, g) = (col / m, col % m);
        gens[i][(k + m - g) % m]
    })
    .with_role(Role::Frame))
}
