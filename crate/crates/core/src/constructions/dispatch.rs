use std::fmt;

use super::conference::paley_graph;
use super::doubling::{double_conference_graph, double_renes_strohmer, double_signature, paley_plus_signature, synthesize_doubled_frame};
use crate::error::{invalid, Result};
use crate::frames::{frame_from_gram, gram_of_signature};
use crate::galois::{is_odd_prime_power, is_prime};
use crate::linalg::ComplexMatrix;

/// A d×2d ETF family reachable by the builders in this module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    /// Paley ETF with q+1 vectors in dimension (q+1)/2.
    PaleyPlus { q: u64 },
    /// Doubled Paley graph (q ≡ 1 mod 4) or doubled Renes–Strohmer
    /// complement (q ≡ 3 mod 4), a q×2q ETF.
    DoublePaley { q: u64 },
    /// Doubled Paley ETF, a (q+1)×2(q+1) ETF.
    DoublePaleyPlus { q: u64 },
}

impl Label {
    pub fn q(self) -> u64 {
        match self {
            Label::PaleyPlus { q } | Label::DoublePaley { q } | Label::DoublePaleyPlus { q } => q,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Label::PaleyPlus { q } => q.div_ceil(2) as usize,
            Label::DoublePaley { q } => q as usize,
            Label::DoublePaleyPlus { q } => q as usize + 1,
        }
    }

    /// ASCII form: `G{q}+1`, `2G{q}`, `2(G{q}+1)`.
    pub fn short(self) -> String {
        match self {
            Label::PaleyPlus { q } => format!("G{q}+1"),
            Label::DoublePaley { q } => format!("2G{q}"),
            Label::DoublePaleyPlus { q } => format!("2(G{q}+1)"),
        }
    }

    pub fn parse_short(s: &str) -> Option<Label> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("2(G").and_then(|r| r.strip_suffix("+1)")) {
            return rest.parse().ok().map(|q| Label::DoublePaleyPlus { q });
        }
        if let Some(rest) = s.strip_prefix("2G") {
            return rest.parse().ok().map(|q| Label::DoublePaley { q });
        }
        if let Some(rest) = s.strip_prefix('G').and_then(|r| r.strip_suffix("+1")) {
            return rest.parse().ok().map(|q| Label::PaleyPlus { q });
        }
        None
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::PaleyPlus { q } => write!(f, "G_{q}+1"),
            Label::DoublePaley { q } => write!(f, "2·G_{q}"),
            Label::DoublePaleyPlus { q } => write!(f, "2·(G_{q}+1)"),
        }
    }
}

/// Implemented d×2d constructions for dimension d; empty when none applies.
pub fn table_dispatch(d: usize) -> Vec<Label> {
    let d = d as u64;
    let mut out = Vec::new();
    if d >= 2 && is_odd_prime_power(2 * d - 1) {
        out.push(Label::PaleyPlus { q: 2 * d - 1 });
    }
    if d >= 3 && is_odd_prime_power(d) {
        out.push(Label::DoublePaley { q: d });
    }
    if d >= 4 && is_odd_prime_power(d - 1) {
        out.push(Label::DoublePaleyPlus { q: d - 1 });
    }
    out
}

/// Builds the d×2d frame for a label. For 2·G_q with q a prime ≡ 1 mod 4
/// the closed-form circulant synthesis is used; for other q ≡ 1 mod 4 the
/// doubled graph signature is factored.
pub fn build_label(label: Label, eps: i8) -> Result<ComplexMatrix> {
    let q = label.q();
    if !is_odd_prime_power(q) {
        return invalid(format!("{label}: {q} is not an odd prime power"));
    }
    let d = label.dim();
    let sig = match label {
        Label::PaleyPlus { q } => paley_plus_signature(q)?,
        Label::DoublePaley { q } if q % 4 == 1 => {
            let g = paley_graph(q)?;
            if is_prime(q) {
                return Ok(synthesize_doubled_frame(&g, eps)?.frame());
            }
            double_conference_graph(&g, eps)?
        }
        Label::DoublePaley { q } => double_renes_strohmer(q, eps)?,
        Label::DoublePaleyPlus { q } => double_signature(&paley_plus_signature(q)?, q.div_ceil(2) as usize, q as usize + 1, eps)?,
    };
    frame_from_gram(&gram_of_signature(&sig, d)?, d)
}
