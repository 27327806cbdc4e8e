//! ETF verification, Welch constant, signature/Gram conversions, Naimark
//! complements, switching and 2-circulant assembly.

use crate::error::{invalid, Error, Result};
use crate::linalg::{circulant, hermitian_eigen, inner, ComplexMatrix, Role, C64};

/// Tolerance for objects built from closed forms.
pub const CONSTRUCTED_TOL: f64 = 1e-10;
/// Tolerance for solver output.
pub const SOLVER_TOL: f64 = 1e-8;

/// `√((n−d)/(d(n−1)))`, the off-diagonal Gram modulus of a d×n ETF.
pub fn welch_gamma(d: usize, n: usize) -> Result<f64> {
    if d == 0 || n <= d {
        return invalid(format!("welch_gamma needs n > d >= 1, got d={d}, n={n}"));
    }
    let (d, n) = (d as f64, n as f64);
    Ok(((n - d) / (d * (n - 1.0))).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtfReport {
    pub d: usize,
    pub n: usize,
    /// Worst `|‖φ_i‖² − 1|`.
    pub max_norm_dev: f64,
    /// `‖ΦΦ* − (n/d)I‖_max`.
    pub max_tight_dev: f64,
    /// Worst `| |⟨φ_i,φ_j⟩| − γ |` over i ≠ j.
    pub max_equi_dev: f64,
    pub gamma: f64,
    pub tol: f64,
    pub pass: bool,
}

impl EtfReport {
    pub fn worst(&self) -> f64 {
        self.max_norm_dev.max(self.max_tight_dev).max(self.max_equi_dev)
    }
}

impl std::fmt::Display for EtfReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}x{} gamma={:.12} norm_dev={:.3e} tight_dev={:.3e} equi_dev={:.3e} tol={:.1e} -> {}",
            self.d,
            self.n,
            self.gamma,
            self.max_norm_dev,
            self.max_tight_dev,
            self.max_equi_dev,
            self.tol,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Checks unit norms, tightness and equiangularity of the columns of Φ.
pub fn check_etf(phi: &ComplexMatrix, tol: f64) -> EtfReport {
    let d = phi.rows();
    let n = phi.cols();
    let gamma = if n > d && d > 0 { welch_gamma(d, n).unwrap_or(0.0) } else { 0.0 };
    let g = phi.gram();
    let mut norm_dev: f64 = 0.0;
    let mut equi_dev: f64 = 0.0;
    for i in 0..n {
        norm_dev = norm_dev.max((g[(i, i)].re - 1.0).abs());
        for j in (i + 1)..n {
            equi_dev = equi_dev.max((g[(i, j)].norm() - gamma).abs());
        }
    }
    let frame_op = phi * &phi.adjoint();
    let a = if d == 0 { 0.0 } else { n as f64 / d as f64 };
    let mut tight_dev: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { a } else { 0.0 };
            tight_dev = tight_dev.max((frame_op[(i, j)] - target).norm());
        }
    }
    let pass = norm_dev <= tol && tight_dev <= tol && equi_dev <= tol && n >= d && d >= 1;
    EtfReport {
        d,
        n,
        max_norm_dev: norm_dev,
        max_tight_dev: tight_dev,
        max_equi_dev: equi_dev,
        gamma,
        tol,
        pass,
    }
}

/// Splits an equiangular Gram matrix as `G = I + γS`.
pub fn signature_of_gram(g: &ComplexMatrix) -> Result<(f64, ComplexMatrix)> {
    if !g.is_square() {
        return invalid("Gram matrix must be square");
    }
    let n = g.rows();
    if n < 2 {
        return invalid("signature needs at least two vectors");
    }
    for i in 0..n {
        if (g[(i, i)] - C64::new(1.0, 0.0)).norm() > 1e-8 {
            return Err(Error::NotEquiangular(format!("diagonal entry {i} is {}", g[(i, i)])));
        }
    }
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += g[(i, j)].norm();
            }
        }
    }
    let gamma = sum / (n * (n - 1)) as f64;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                worst = worst.max((g[(i, j)].norm() - gamma).abs());
            }
        }
    }
    if worst > 1e-6 || gamma == 0.0 {
        return Err(Error::NotEquiangular(format!(
            "off-diagonal moduli deviate by {worst:.3e} from their mean {gamma:.6}"
        )));
    }
    let s = ComplexMatrix::from_fn(n, n, |i, j| if i == j { C64::new(0.0, 0.0) } else { g[(i, j)] / gamma });
    Ok((gamma, s.with_role(Role::Signature)))
}

fn check_signature_shape(s: &ComplexMatrix) -> Result<()> {
    if !s.is_square() {
        return Err(Error::NotAValidSignature("not square".into()));
    }
    if s.hermitian_defect() > 1e-8 {
        return Err(Error::NotAValidSignature(format!("not self-adjoint ({:.3e})", s.hermitian_defect())));
    }
    for i in 0..s.rows() {
        if s[(i, i)].norm() > 1e-8 {
            return Err(Error::NotAValidSignature(format!("nonzero diagonal at {i}")));
        }
    }
    Ok(())
}

/// `G = I + γS` with γ the Welch constant, after checking that the
/// result is a rank-d Gram matrix with nonzero eigenvalue n/d.
pub fn gram_of_signature(s: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    check_signature_shape(s)?;
    let n = s.rows();
    let gamma = welch_gamma(d, n)?;
    if 2 * d == n {
        // S² = (n−1)I with trace 0 forces the eigenvalues ±√(n−1), each
        // with multiplicity n/2.
        let sq = s * s;
        let resid = sq.max_abs_diff(&ComplexMatrix::identity(n).scale_re((n - 1) as f64));
        if resid > 1e-6 {
            return Err(Error::NotAValidSignature(format!("‖S² − (n−1)I‖_max = {resid:.3e}")));
        }
    } else {
        let g = gram_unchecked(s, gamma);
        let e = hermitian_eigen(&g)?;
        let top = n as f64 / d as f64;
        let mut resid: f64 = 0.0;
        for (i, &l) in e.eigenvalues.iter().enumerate() {
            let want = if i >= n - d { top } else { 0.0 };
            resid = resid.max((l - want).abs());
        }
        if resid > 1e-6 {
            return Err(Error::NotAValidSignature(format!("eigenvalue residual {resid:.3e}")));
        }
    }
    Ok(gram_unchecked(s, gamma))
}

fn gram_unchecked(s: &ComplexMatrix, gamma: f64) -> ComplexMatrix {
    let n = s.rows();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { C64::new(1.0, 0.0) } else { s[(i, j)] * gamma }).with_role(Role::Gram)
}

/// Factors a rank-d PSD matrix as Φ*Φ with rows `√λ_i·v_i*` over the top-d
/// eigenpairs.
pub fn frame_from_gram(g: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    let n = g.rows();
    if !g.is_square() || d == 0 || d > n {
        return invalid(format!("cannot factor a {}x{} matrix at rank {d}", g.rows(), g.cols()));
    }
    let e = hermitian_eigen(g)?;
    let scale = e.eigenvalues[n - 1].abs().max(1.0);
    let lowest_kept = e.eigenvalues[n - d];
    let highest_dropped = if d < n { e.eigenvalues[n - d - 1] } else { 0.0 };
    if lowest_kept <= 1e-6 * scale || highest_dropped.abs() > 1e-6 * scale || e.eigenvalues[0] < -1e-6 * scale {
        return invalid(format!(
            "matrix is not PSD of rank {d} (kept {lowest_kept:.3e}, dropped {highest_dropped:.3e})"
        ));
    }
    let phi = ComplexMatrix::from_fn(d, n, |r, c| {
        let col = n - 1 - r;
        e.eigenvectors[(c, col)].conj() * e.eigenvalues[col].sqrt()
    });
    Ok(phi.with_role(Role::Frame))
}

pub fn naimark_complement_signature(s: &ComplexMatrix) -> ComplexMatrix {
    s.neg().with_role(Role::Signature)
}

/// Generators of a 2-circulant d×2d frame `[C_x | C_y]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantPair {
    pub x: Vec<C64>,
    pub y: Vec<C64>,
}

impl CirculantPair {
    pub fn new(x: Vec<C64>, y: Vec<C64>) -> Result<Self> {
        if x.len() != y.len() || x.is_empty() {
            return invalid("generators must be nonempty and of equal length");
        }
        Ok(CirculantPair { x, y })
    }

    pub fn d(&self) -> usize {
        self.x.len()
    }

    /// `(Re x, Im x, Re y, Im y)` flattened.
    pub fn to_real(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(4 * self.d());
        v.extend(self.x.iter().map(|z| z.re));
        v.extend(self.x.iter().map(|z| z.im));
        v.extend(self.y.iter().map(|z| z.re));
        v.extend(self.y.iter().map(|z| z.im));
        v
    }

    pub fn from_real(v: &[f64], d: usize) -> Self {
        assert!(v.len() >= 4 * d);
        let x = (0..d).map(|i| C64::new(v[i], v[d + i])).collect();
        let y = (0..d).map(|i| C64::new(v[2 * d + i], v[3 * d + i])).collect();
        CirculantPair { x, y }
    }
}

/// `[C_x | C_y]`, where column g of `C_x` is x shifted cyclically by g.
pub fn assemble_2circulant(p: &CirculantPair) -> ComplexMatrix {
    let d = p.d();
    let cx = circulant(&p.x);
    let cy = circulant(&p.y);
    ComplexMatrix::from_fn(d, 2 * d, |i, j| if j < d { cx[(i, j)] } else { cy[(i, j - d)] }).with_role(Role::Frame)
}

/// `G_ij·G_jk·G_ki`, invariant under column phasing.
pub fn triple_product(g: &ComplexMatrix, i: usize, j: usize, k: usize) -> C64 {
    g[(i, j)] * g[(j, k)] * g[(k, i)]
}

/// `D*·G·D` for the diagonal matrix D = diag(c).
pub fn rephase(g: &ComplexMatrix, c: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(g.rows(), g.cols(), |i, j| c[i].conj() * g[(i, j)] * c[j]).with_role(g.role())
}

/// Looks for a permutation π and unimodular phases c with
/// `A[i][j] = c̄_i·c_j·B[π(i)][π(j)]` (or the same against conj(B)) up to
/// `tol`. Returns `(π, c, conjugated)`.
pub fn find_switching(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Option<(Vec<usize>, Vec<C64>, bool)> {
    if a.rows() != b.rows() || !a.is_square() || !b.is_square() {
        return None;
    }
    for conjugate in [false, true] {
        let bb = if conjugate { b.conj() } else { b.clone() };
        if let Some((perm, c)) = switching_search(a, &bb, tol) {
            return Some((perm, c, conjugate));
        }
    }
    None
}

fn switching_search(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Option<(Vec<usize>, Vec<C64>)> {
    let n = a.rows();
    if n == 0 {
        return Some((Vec::new(), Vec::new()));
    }
    // Fix π(0) by trying every choice; phases are then pinned by row 0
    // whenever the entries are nonzero: c_j = c_0·A[0][j]/B[π0][πj].
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut c = vec![C64::new(1.0, 0.0); n];
    fn extend(
        a: &ComplexMatrix,
        b: &ComplexMatrix,
        tol: f64,
        k: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        c: &mut Vec<C64>,
    ) -> bool {
        let n = a.rows();
        if k == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] {
                continue;
            }
            // Phase of index k relative to index 0.
            let phase = if k == 0 {
                C64::new(1.0, 0.0)
            } else {
                let bv = b[(perm[0], cand)];
                let av = a[(0, k)];
                if (bv.norm() - av.norm()).abs() > tol {
                    continue;
                }
                if bv.norm() < tol {
                    C64::new(1.0, 0.0)
                } else {
                    c[0] * av / bv
                }
            };
            let phase = phase / phase.norm();
            let ok = (0..k).all(|i| {
                let lhs = a[(i, k)];
                let rhs = c[i].conj() * phase * b[(perm[i], cand)];
                (lhs - rhs).norm() <= tol
            }) && (a[(k, k)] - b[(cand, cand)]).norm() <= tol;
            if !ok {
                continue;
            }
            perm[k] = cand;
            used[cand] = true;
            c[k] = phase;
            if extend(a, b, tol, k + 1, perm, used, c) {
                return true;
            }
            used[cand] = false;
        }
        false
    }
    if extend(a, b, tol, 0, &mut perm, &mut used, &mut c) {
        Some((perm, c))
    } else {
        None
    }
}

/// `⟨u, v⟩` on columns i and j of Φ.
pub fn column_inner(phi: &ComplexMatrix, i: usize, j: usize) -> C64 {
    inner(&phi.column(i), &phi.column(j))
}
