//! Newton–Kantorovich existence certificates for 2-circulant d×2d ETFs.
//!
//! For the polynomial system f of total degree 4, a secant matrix S at x0
//! and any linear T, a zero of f lies within ε of x0 whenever
//!
//! ```text
//! ‖S∘T − I‖ + (½δ̃ + ε̃)·|f|·D(D−1)·‖T‖ < 1 − ‖T‖·‖f(x0)‖/ε,
//! α̃ = α·max{1, ‖x0‖ + α}^{D−2},
//! ```
//!
//! with all norms ∞→∞. Every quantity on the left is bounded above and the
//! right below with interval arithmetic.

mod audit;
mod secant;

use rayon::prelude::*;

pub use audit::{coefficient_norm_bound, system_polynomials, Poly};
pub use secant::{f_eval_interval, secant_jacobian, secant_jacobian_naive};

use crate::error::{invalid, CertFailure, Error, Result};
use crate::frames::CirculantPair;
use crate::linalg::{pseudoinverse, RealMatrix};
use crate::rigor::{iv_matmul, iv_norm_inf, Interval, IntervalMatrix};
use crate::solver::system::{constraint_count, variable_count};
use crate::solver::{solve, solve_from, DEFAULT_MAX_ITER, DEFAULT_TOL};

pub const DEFAULT_DELTA: f64 = 1e-10;
/// Total degree of the constraint system.
pub const DEGREE: u32 = 4;
const GRID_POINTS: usize = 32;

/// Analytic coefficient-norm bound `16d²`.
pub fn f_abs_bound(d: usize) -> f64 {
    16.0 * (d * d) as f64
}

/// `(4d + 1) − (2d + ⌊d/2⌋ + 1) = ⌈3d/2⌉`.
pub fn kernel_dim(d: usize) -> usize {
    variable_count(d) - constraint_count(d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub d: usize,
    pub x0: Vec<f64>,
    pub delta: f64,
    pub epsilon: f64,
    pub bound_st_minus_i: f64,
    pub bound_t_norm: f64,
    pub bound_f_x0: f64,
    pub f_abs_bound: f64,
    pub lhs_upper: f64,
    pub rhs_lower: f64,
    pub verified: bool,
    pub kernel_dim: usize,
}

/// Certified scalars entering the inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityBounds {
    /// Upper bound on ‖S∘T − I‖.
    pub st_minus_i: f64,
    /// Upper bound on ‖T‖.
    pub t_norm: f64,
    /// Upper bound on ‖f(x0)‖.
    pub f_x0: f64,
    /// ‖x0‖, exact.
    pub x0_norm: f64,
    pub delta: f64,
    pub f_abs: f64,
}

fn tilde(alpha: Interval, x0_norm: f64) -> Interval {
    let r = Interval::point(x0_norm) + alpha;
    let m = Interval::ONE.max(r);
    alpha * m.sqr()
}

impl InequalityBounds {
    /// `(lhs upper, rhs lower)` at ε, with every input bound pushed `ulps`
    /// further in its unfavourable direction.
    pub fn evaluate(&self, eps: f64, ulps: u32) -> (f64, f64) {
        let widen = |x: f64| (0..ulps).fold(x, |v, _| v.next_up());
        let a = Interval::point(widen(self.st_minus_i));
        let bt = Interval::point(widen(self.t_norm));
        let c0 = Interval::point(widen(self.f_x0));
        let e = Interval::point(eps);
        let dd = Interval::point(f64::from(DEGREE * (DEGREE - 1)));
        let half_delta = tilde(Interval::point(self.delta), self.x0_norm) * Interval::point(0.5);
        let lhs = a + (half_delta + tilde(e, self.x0_norm)) * Interval::point(widen(self.f_abs)) * dd * bt;
        let rhs = Interval::ONE - bt * c0 / e;
        let shrink = |x: f64| (0..ulps).fold(x, |v, _| v.next_down());
        (widen(lhs.hi), shrink(rhs.lo))
    }

    /// Whether the inequality holds at ε, also after a one-ulp widening of
    /// every bound.
    pub fn holds(&self, eps: f64) -> bool {
        if !(eps > 0.0) || !eps.is_finite() {
            return false;
        }
        let (l, r) = self.evaluate(eps, 0);
        let (l1, r1) = self.evaluate(eps, 1);
        l < r && l1 < r1
    }

    /// Coefficients of `Q(ε) = Bε² + (A + ½δ̃B − 1)ε + ‖T‖C₀` for the case
    /// `‖x0‖ + ε ≤ 1`, with `B = |f|·D(D−1)·‖T‖`.
    pub fn quadratic(&self) -> [f64; 3] {
        let b = self.f_abs * f64::from(DEGREE * (DEGREE - 1)) * self.t_norm;
        let dt = tilde(Interval::point(self.delta), self.x0_norm).mid();
        [b, self.st_minus_i + 0.5 * dt * b - 1.0, self.t_norm * self.f_x0]
    }

    /// Candidate radii: the midpoint of the roots of Q, then a geometric grid
    /// between the roots (or over `(0, 1 − ‖x0‖]` when Q has none).
    pub fn candidates(&self) -> Vec<f64> {
        let [qa, qb, qc] = self.quadratic();
        let cap = (1.0 - self.x0_norm).max(f64::MIN_POSITIVE);
        let disc = qb * qb - 4.0 * qa * qc;
        let (lo, hi, mut out) = if disc > 0.0 && qa > 0.0 {
            let s = disc.sqrt();
            // Stable root pair.
            let q = -0.5 * (qb - s);
            let r1 = qc / q;
            let r2 = q / qa;
            let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
            (lo.max(f64::MIN_POSITIVE), hi.min(cap), vec![0.5 * (lo + hi)])
        } else {
            (cap * 1e-18, cap, Vec::new())
        };
        if lo < hi {
            let ratio = (hi / lo).powf(1.0 / (GRID_POINTS + 1) as f64);
            let mut e = lo;
            for _ in 0..GRID_POINTS {
                e *= ratio;
                out.push(e);
            }
        }
        out.retain(|e| e.is_finite() && *e > 0.0);
        out
    }

    /// First candidate satisfying the inequality, or the smallest observed
    /// `lhs − rhs`.
    pub fn search(&self) -> std::result::Result<(f64, f64, f64), f64> {
        let mut best = f64::INFINITY;
        for eps in self.candidates() {
            let (l, r) = self.evaluate(eps, 0);
            if self.holds(eps) {
                return Ok((eps, l, r));
            }
            best = best.min(l - r);
        }
        Err(best)
    }
}

/// Lifts a pair to the (4d+1)-point with w = 1/2.
pub fn lift(p: &CirculantPair) -> Vec<f64> {
    let mut v = p.to_real();
    v.push(0.5);
    v
}

/// Certified bounds at x0 for a given secant enclosure and right inverse.
pub fn inequality_bounds(x0: &[f64], s: &IntervalMatrix, t: &RealMatrix, delta: f64) -> Result<InequalityBounds> {
    let d = (x0.len() - 1) / 4;
    let st = iv_matmul(s, t)?.minus_identity();
    let a = iv_norm_inf(&st).hi;
    let bt = iv_norm_inf(&IntervalMatrix::from_point(t)).hi;
    let z: Vec<Interval> = x0.iter().map(|&v| Interval::point(v)).collect();
    let c0 = f_eval_interval(&z, d).iter().fold(0.0f64, |m, v| m.max(v.mag()));
    let x0_norm = x0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(InequalityBounds { st_minus_i: a, t_norm: bt, f_x0: c0, x0_norm, delta, f_abs: f_abs_bound(d) })
}

/// Builds a certificate for the pair. Fails with `Rank` when the secant
/// midpoint has no numerical right inverse and with `Infeasible` when no
/// tested ε satisfies the inequality.
pub fn certify(p: &CirculantPair, delta: f64) -> Result<Certificate> {
    if !(delta > 0.0) || !delta.is_finite() {
        return invalid(format!("delta must be positive, got {delta}"));
    }
    let d = p.d();
    let x0 = lift(p);
    let x0_norm = x0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(x0_norm < 1.0) {
        return Err(Error::CertificationFailed { reason: CertFailure::OutOfBox, gap: f64::INFINITY });
    }
    let s = secant_jacobian(&x0, delta, d);
    let t = match pseudoinverse(&s.midpoint()) {
        Ok(t) => t,
        Err(Error::RankDeficient { .. }) => {
            return Err(Error::CertificationFailed { reason: CertFailure::Rank, gap: f64::INFINITY })
        }
        Err(e) => return Err(e),
    };
    let b = inequality_bounds(&x0, &s, &t, delta)?;
    let (epsilon, lhs_upper, rhs_lower) = b
        .search()
        .map_err(|gap| Error::CertificationFailed { reason: CertFailure::Infeasible, gap })?;
    Ok(Certificate {
        d,
        x0,
        delta,
        epsilon,
        bound_st_minus_i: b.st_minus_i,
        bound_t_norm: b.t_norm,
        bound_f_x0: b.f_x0,
        f_abs_bound: b.f_abs,
        lhs_upper,
        rhs_lower,
        verified: lhs_upper < rhs_lower,
        kernel_dim: kernel_dim(d),
    })
}

/// How `certify_range` picks solver starts for each d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedPolicy {
    pub first_seed: u64,
    pub attempts: usize,
}

impl Default for SeedPolicy {
    fn default() -> Self {
        SeedPolicy { first_seed: 1, attempts: 5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeOutcome {
    pub d: usize,
    pub seed: u64,
    pub solver_residual: f64,
    pub result: std::result::Result<Certificate, String>,
}

impl RangeOutcome {
    pub fn verified(&self) -> bool {
        matches!(&self.result, Ok(c) if c.verified)
    }
}

/// Solves, polishes and certifies a single d, trying successive seeds.
pub fn solve_and_certify(d: usize, policy: SeedPolicy, delta: f64) -> RangeOutcome {
    let mut last = None;
    for k in 0..policy.attempts.max(1) as u64 {
        let seed = policy.first_seed + k;
        let outcome = match solve(d, seed, DEFAULT_TOL, DEFAULT_MAX_ITER) {
            Err(e) => RangeOutcome { d, seed, solver_residual: f64::NAN, result: Err(e.to_string()) },
            Ok(r) if !r.converged => RangeOutcome {
                d,
                seed,
                solver_residual: r.residual_inf,
                result: Err(format!("solver stalled at residual {:e}", r.residual_inf)),
            },
            Ok(r) => {
                // A few more steps past the tolerance shrink ‖f(x0)‖.
                let polished = solve_from(&r.pair, seed, 0.0, 20);
                let best = if polished.residual_inf <= r.residual_inf { polished } else { r };
                RangeOutcome {
                    d,
                    seed,
                    solver_residual: best.residual_inf,
                    result: certify(&best.pair, delta).map_err(|e| e.to_string()),
                }
            }
        };
        if outcome.verified() {
            return outcome;
        }
        last = Some(outcome);
    }
    last.expect("at least one attempt")
}

/// Certifies every d in `d_lo..=d_hi` on a pool of `parallelism` workers;
/// results come back in d order and per-d failures are recorded.
pub fn certify_range(
    d_lo: usize,
    d_hi: usize,
    policy: SeedPolicy,
    parallelism: usize,
    delta: f64,
) -> Result<Vec<RangeOutcome>> {
    if d_lo < 2 {
        return invalid(format!("certify_range needs d_lo >= 2, got {d_lo}"));
    }
    if d_lo > d_hi {
        return Ok(Vec::new());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| Error::NumericFailure(format!("thread pool: {e}")))?;
    Ok(pool.install(|| (d_lo..=d_hi).into_par_iter().map(|d| solve_and_certify(d, policy, delta)).collect()))
}
