use super::conference::{paley_conference, ConferenceGraph, Symmetry};
use crate::error::{invalid, Error, Result};
use crate::frames::{assemble_2circulant, signature_of_gram, CirculantPair};
use crate::linalg::{ComplexMatrix, Role, C64};

fn check_eps(eps: i8) -> Result<f64> {
    match eps {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        _ => invalid(format!("epsilon must be ±1, got {eps}")),
    }
}

fn check_square_identity(s: &ComplexMatrix, tol: f64) -> Result<()> {
    let n = s.rows();
    let resid = (s * s).max_abs_diff(&ComplexMatrix::identity(n).scale_re((n - 1) as f64));
    if resid > tol {
        return Err(Error::NotAValidSignature(format!("‖S² − (n−1)I‖_max = {resid:.3e}")));
    }
    Ok(())
}

fn blocks(tl: &ComplexMatrix, tr: &ComplexMatrix, bl: &ComplexMatrix, br: &ComplexMatrix) -> ComplexMatrix {
    let n = tl.rows();
    ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => tl[(i, j)],
        (true, false) => tr[(i, j - n)],
        (false, true) => bl[(i - n, j)],
        (false, false) => br[(i - n, j - n)],
    })
}

/// Doubles the signature of a d×n ETF with `n − 2d ∈ {−1, 0, 1}` into the
/// signature of an n×2n ETF:
/// `[[S, S+βI], [S+β̄I, −S]]` with `β = −c + ε·i·√(1−c²)` and
/// `c = (n−2d)·√((n−1)/(d(n−d)))`.
pub fn double_signature(s: &ComplexMatrix, d: usize, n: usize, eps: i8) -> Result<ComplexMatrix> {
    let e = check_eps(eps)?;
    if !s.is_square() || s.rows() != n {
        return invalid(format!("signature is {}x{}, expected {n}x{n}", s.rows(), s.cols()));
    }
    if d == 0 || n <= d {
        return invalid(format!("need n > d >= 1, got d={d}, n={n}"));
    }
    let k = n as i64 - 2 * d as i64;
    if !(-1..=1).contains(&k) {
        return invalid(format!("n − 2d = {k} is not in {{−1, 0, 1}}"));
    }
    let (df, nf) = (d as f64, n as f64);
    let c = k as f64 * ((nf - 1.0) / (df * (nf - df))).sqrt();
    let beta = C64::new(-c, e * (1.0 - c * c).max(0.0).sqrt());
    let id = ComplexMatrix::identity(n);
    let out = blocks(s, &(s + &id.scale(beta)), &(s + &id.scale(beta.conj())), &s.neg()).with_role(Role::Signature);
    check_square_identity(&out, 1e-9 * (2 * n) as f64)?;
    Ok(out)
}

/// `β = εx + iy` with `x = (−1+√(2v−1))/(v−1)` and `y = √(1−x²)`.
pub fn conference_doubling_beta(v: usize, eps: i8) -> Result<C64> {
    let e = check_eps(eps)?;
    let vf = v as f64;
    let x = (-1.0 + (2.0 * vf - 1.0).sqrt()) / (vf - 1.0);
    Ok(C64::new(e * x, (1.0 - x * x).sqrt()))
}

fn adjacency_matrices(g: &ConferenceGraph) -> (ComplexMatrix, ComplexMatrix) {
    let v = g.v();
    let comp = g.complement();
    let a = ComplexMatrix::from_fn(v, v, |i, j| C64::new(f64::from(g.adjacency()[i][j]), 0.0));
    let b = ComplexMatrix::from_fn(v, v, |i, j| C64::new(f64::from(comp[i][j]), 0.0));
    (a, b)
}

/// Signature of a v×2v ETF built from a conference graph:
/// `[[A−B, εI+βA+β̄B], [εI+β̄A+βB, B−A]]`.
pub fn double_conference_graph(g: &ConferenceGraph, eps: i8) -> Result<ComplexMatrix> {
    g.verify()?;
    let beta = conference_doubling_beta(g.v(), eps)?;
    let e = C64::new(f64::from(eps), 0.0);
    let (a, b) = adjacency_matrices(g);
    let id = ComplexMatrix::identity(g.v());
    let tr = &(&id.scale(e) + &a.scale(beta)) + &b.scale(beta.conj());
    let bl = &(&id.scale(e) + &a.scale(beta.conj())) + &b.scale(beta);
    let out = blocks(&(&a - &b), &tr, &bl, &(&b - &a)).with_role(Role::Signature);
    check_square_identity(&out, 1e-9 * (2 * g.v()) as f64)?;
    Ok(out)
}

/// Coefficients `(a, b, c, d, e, f)` of the v×2v frame
/// `[aI+bA+cB | dI+eA+fB]` synthesized from a conference graph.
pub fn doubling_coefficients(v: usize, eps: i8) -> Result<[C64; 6]> {
    let ef = check_eps(eps)?;
    if v < 5 || v % 4 != 1 {
        return invalid(format!("conference graphs have v ≡ 1 mod 4 and v ≥ 5, got {v}"));
    }
    let vf = v as f64;
    let gamma = 1.0 / (2.0 * vf - 1.0).sqrt();
    let k = (vf - 1.0) / 2.0;
    let r = (-1.0 + vf.sqrt()) / 2.0;
    let s = (-1.0 - vf.sqrt()) / 2.0;
    let plus = (1.0 + gamma * (r - s)).sqrt();
    let minus = (1.0 - gamma * (r - s)).sqrt();
    let beta = conference_doubling_beta(v, eps)?;
    let e = C64::new(ef, 0.0);
    let gram_part = |p: f64, m: f64| C64::new((1.0 + p * plus + m * minus) / vf, 0.0);
    let cross_part = |p: f64, m: f64| {
        let t1 = e + beta * r + beta.conj() * s;
        let t2 = e + beta * s + beta.conj() * r;
        (e + beta.re * 2.0 * k + t1 * (p / plus) + t2 * (m / minus)) * (gamma / vf)
    };
    Ok([
        gram_part(k, k),
        gram_part(r, s),
        gram_part(s, r),
        cross_part(k, k),
        cross_part(r, s),
        cross_part(s, r),
    ])
}

#[derive(Debug, Clone, PartialEq)]
pub enum DoubledFrame {
    Circulant(CirculantPair),
    Full(ComplexMatrix),
}

impl DoubledFrame {
    pub fn frame(&self) -> ComplexMatrix {
        match self {
            DoubledFrame::Circulant(p) => assemble_2circulant(p),
            DoubledFrame::Full(m) => m.clone(),
        }
    }
}

/// The v×2v ETF `[aI+bA+cB | dI+eA+fB]`; returned as a generator pair when
/// the graph is circulant in its vertex order.
pub fn synthesize_doubled_frame(g: &ConferenceGraph, eps: i8) -> Result<DoubledFrame> {
    g.verify()?;
    let v = g.v();
    let [ca, cb, cc, cd, ce, cf] = doubling_coefficients(v, eps)?;
    let (a, b) = adjacency_matrices(g);
    let id = ComplexMatrix::identity(v);
    let left = &(&id.scale(ca) + &a.scale(cb)) + &b.scale(cc);
    let right = &(&id.scale(cd) + &a.scale(ce)) + &b.scale(cf);
    if g.is_circulant() {
        return Ok(DoubledFrame::Circulant(CirculantPair::new(left.column(0), right.column(0))?));
    }
    Ok(DoubledFrame::Full(
        ComplexMatrix::from_fn(v, 2 * v, |i, j| if j < v { left[(i, j)] } else { right[(i, j - v)] }).with_role(Role::Frame),
    ))
}

/// Unit-diagonal Gram of the d×(2d−1) ETF `(iT + J/√q + √q·I)·√q/(q+1)`,
/// q = 2d−1, together with its Naimark complement of rank d−1.
#[derive(Debug, Clone)]
pub struct RenesStrohmer {
    pub q: u64,
    pub d: usize,
    pub gram: ComplexMatrix,
    pub complement_gram: ComplexMatrix,
}

impl RenesStrohmer {
    pub fn complement_d(&self) -> usize {
        self.d - 1
    }

    /// Signature of the complement (d−1)×q ETF.
    pub fn complement_signature(&self) -> Result<ComplexMatrix> {
        Ok(signature_of_gram(&self.complement_gram)?.1)
    }
}

pub fn renes_strohmer_gram(q: u64) -> Result<RenesStrohmer> {
    if q % 4 != 3 {
        return invalid(format!("the Renes–Strohmer seed needs q ≡ 3 mod 4, got {q}"));
    }
    let conf = paley_conference(q)?;
    debug_assert_eq!(conf.symmetry(), Symmetry::Skew);
    let t = conf.core();
    let n = q as usize;
    let d = n.div_ceil(2);
    let sq = (q as f64).sqrt();
    let norm = sq / (q as f64 + 1.0);
    let gram = ComplexMatrix::from_fn(n, n, |i, j| {
        let m = C64::new(0.0, f64::from(t[i][j])) + C64::new(1.0 / sq + if i == j { sq } else { 0.0 }, 0.0);
        m * norm
    })
    .with_role(Role::Gram);
    let (nf, df) = (n as f64, d as f64);
    let complement_gram = ComplexMatrix::from_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        (C64::new(id, 0.0) - gram[(i, j)] * (df / nf)) * (nf / (nf - df))
    })
    .with_role(Role::Gram);
    Ok(RenesStrohmer { q, d, gram, complement_gram })
}

/// Signature of the q×2q ETF obtained by doubling the complement of the
/// Renes–Strohmer seed, q ≡ 3 mod 4.
pub fn double_renes_strohmer(q: u64, eps: i8) -> Result<ComplexMatrix> {
    let rs = renes_strohmer_gram(q)?;
    let s = rs.complement_signature()?;
    double_signature(&s, rs.complement_d(), q as usize, eps)
}

/// Signature `ωC` of the Paley ETF with q+1 vectors in dimension (q+1)/2,
/// ω = 1 for symmetric C and i for skew C.
pub fn paley_plus_signature(q: u64) -> Result<ComplexMatrix> {
    let c = paley_conference(q)?;
    let w = match c.symmetry() {
        Symmetry::Symmetric => C64::new(1.0, 0.0),
        Symmetry::Skew => C64::new(0.0, 1.0),
    };
    let n = c.n();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| w * f64::from(c.entries()[i][j])).with_role(Role::Signature))
}
