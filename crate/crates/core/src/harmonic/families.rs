use super::automorphism::{circulantize, verify_automorphism, AutomorphismWitness, Circulantized};
use crate::error::{Error, Result};
use crate::frames::{gram_of_signature, rephase};
use crate::galois::{build_line_system, LineVariant};
use crate::linalg::{ComplexMatrix, Role, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// G_q+1 with halfturn line representatives.
    PaleyPlus,
    /// 2·(G_q+1) with fullturn line representatives.
    DoublePaleyPlus,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "paley-plus" | "paley_plus" => Some(Family::PaleyPlus),
            "double-paley-plus" | "double_paley_plus" => Some(Family::DoublePaleyPlus),
            _ => None,
        }
    }
}

/// A signature in line-system order together with the automorphism that
/// makes it 2-circulant.
#[derive(Debug, Clone)]
pub struct FamilyAutomorphism {
    pub family: Family,
    pub q: u64,
    pub d: usize,
    pub signature: ComplexMatrix,
    pub witness: AutomorphismWitness,
}

impl FamilyAutomorphism {
    pub fn gram(&self) -> Result<ComplexMatrix> {
        gram_of_signature(&self.signature, self.d)
    }

    pub fn circulantize(&self) -> Result<Circulantized> {
        circulantize(&self.gram()?, &self.witness)
    }
}

fn omega(q: u64) -> C64 {
    if q % 4 == 1 {
        C64::new(1.0, 0.0)
    } else {
        C64::new(0.0, 1.0)
    }
}

/// The explicit σ and c making the Paley-type signatures 2-circulant.
///
/// PaleyPlus: index `ε·m + k` (m = (q+1)/2) holds `t_{k,ε}`,
/// `σ(k,ε) = (k+1, ε)` and `c_{k,ε} = χ(α_k)`.
/// DoublePaleyPlus: index `ε·(q+1) + i`, `σ(i,ε) = (i+1, 1−ε)` and
/// `c_{i,ε} = (−1)^ε χ(α_i)`.
pub fn family_automorphism(family: Family, q: u64) -> Result<FamilyAutomorphism> {
    let w = omega(q);
    let out = match family {
        Family::PaleyPlus => {
            let sys = build_line_system(q, LineVariant::Halfturn)?;
            let conf = sys.conference();
            let n = conf.len();
            let m = sys.cycle_len();
            let signature =
                ComplexMatrix::from_fn(n, n, |i, j| w * f64::from(conf[i][j])).with_role(Role::Signature);
            let alpha_chi: Vec<f64> =
                sys.alphas().iter().map(|&a| sys.chi_base(a).map(f64::from)).collect::<Result<_>>()?;
            let sigma = (0..n).map(|idx| (idx / m) * m + (idx % m + 1) % m).collect();
            let c = (0..n).map(|idx| C64::new(alpha_chi[idx % m], 0.0)).collect();
            FamilyAutomorphism {
                family,
                q,
                d: m,
                signature,
                witness: AutomorphismWitness::new(sigma, c)?,
            }
        }
        Family::DoublePaleyPlus => {
            let sys = build_line_system(q, LineVariant::Fullturn)?;
            let conf = sys.conference();
            let l = conf.len();
            let n = 2 * l;
            let i_unit = C64::new(0.0, 1.0);
            let signature = ComplexMatrix::from_fn(n, n, |a, b| {
                let (ea, ia) = (a / l, a % l);
                let (eb, ib) = (b / l, b % l);
                let sign = if ea * eb == 1 { -1.0 } else { 1.0 };
                let mut s = w * (sign * f64::from(conf[ia][ib]));
                if ia == ib && ea != eb {
                    s += if eb > ea { i_unit } else { -i_unit };
                }
                s
            })
            .with_role(Role::Signature);
            let alpha_chi: Vec<f64> =
                sys.alphas().iter().map(|&a| sys.chi_base(a).map(f64::from)).collect::<Result<_>>()?;
            let sigma = (0..n).map(|a| (1 - a / l) * l + (a % l + 1) % l).collect();
            let c = (0..n)
                .map(|a| {
                    let sign = if a / l == 1 { -1.0 } else { 1.0 };
                    C64::new(sign * alpha_chi[a % l], 0.0)
                })
                .collect();
            FamilyAutomorphism {
                family,
                q,
                d: l,
                signature,
                witness: AutomorphismWitness::new(sigma, c)?,
            }
        }
    };
    if !verify_automorphism(&out.signature, &out.witness, 1e-10) {
        return Err(Error::InconsistentWitness(format!("{family:?} automorphism fails for q = {q}")));
    }
    if family == Family::DoublePaleyPlus {
        check_double_regular_identity(&out)?;
    }
    Ok(out)
}

/// `(D*SD)_{(0,1),σ^k(0,1)} = −(D*SD)_{(0,0),σ^k(0,0)}` for every k, with D
/// the circulantizing scalars.
fn check_double_regular_identity(f: &FamilyAutomorphism) -> Result<()> {
    let c = f.circulantize()?;
    let r = rephase(&f.signature, &c.a);
    let l = f.d;
    let (p0, p1) = (0, l);
    for k in 0..l {
        let lhs = r[(p1, f.witness.apply_power(p1, k))];
        let rhs = r[(p0, f.witness.apply_power(p0, k))];
        if (lhs + rhs).norm() > 1e-9 {
            return Err(Error::InconsistentWitness(format!("regular-representation identity fails at k = {k}")));
        }
    }
    Ok(())
}

/// Largest `|(D*SD)_{1,1} + (D*SD)_{0,0}|` between the two diagonal blocks of
/// a circulantized signature.
pub fn diagonal_block_antisymmetry(c: &Circulantized) -> f64 {
    let g = &c.gram;
    let m = g.m();
    let mut worst: f64 = 0.0;
    for a in 0..m {
        for b in 0..m {
            // Signature blocks: G − I on the diagonal blocks.
            let id = if a == b { 1.0 } else { 0.0 };
            let s00 = g.entry(0, 0, a, b) - id;
            let s11 = g.entry(1, 1, a, b) - id;
            worst = worst.max((s00 + s11).norm());
        }
    }
    worst
}
