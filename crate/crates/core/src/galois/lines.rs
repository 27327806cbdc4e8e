use super::field::{is_odd_prime_power, make_field, prime_power, FieldElement, GaloisField};
use crate::error::{invalid, Result};

/// Which choice of line representatives in GF(q²) to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineVariant {
    /// `t_{k,0} = L^k·1`, `t_{k,1} = L^k·ζ` with `L(x) = ζ^{1−q}x`, for
    /// `0 ≤ k < (q+1)/2`. Stored at index `ε·(q+1)/2 + k`.
    Halfturn,
    /// `t_j = ζ^j` for `0 ≤ j ≤ q`.
    Fullturn,
}

/// q+1 pairwise independent vectors of GF(q²) viewed as a symplectic plane
/// over GF(q), with the form `[x,y] = ζ^{(q+1)/2}(x·y^q − y·x^q)`.
#[derive(Debug, Clone)]
pub struct SymplecticLineSystem {
    q: u64,
    ext: GaloisField,
    zeta: FieldElement,
    variant: LineVariant,
    reps: Vec<FieldElement>,
    alphas: Vec<FieldElement>,
}

/// Builds the line system over GF(q²) for an odd prime power q.
pub fn build_line_system(q: u64, variant: LineVariant) -> Result<SymplecticLineSystem> {
    if !is_odd_prime_power(q) {
        return invalid(format!("line systems need an odd prime power, got {q}"));
    }
    if q.saturating_mul(q) > 1_000_000 {
        return invalid(format!("q^2 = {} exceeds the supported 10^6", q * q));
    }
    let (p, k) = prime_power(q).expect("checked above");
    let ext = make_field(p, 2 * k)?;
    let zeta = ext.generator();
    let n = q * q - 1;
    let z = |e: u64| ext.pow(zeta, e % n);
    let m = (q + 1) / 2;
    let minus_one = ext.neg(ext.one());
    let (reps, alphas) = match variant {
        LineVariant::Halfturn => {
            // ζ^{1−q} = ζ^{n+1−q}
            let step = (n + 1 - q) % n;
            let mut reps = Vec::with_capacity((q + 1) as usize);
            for eps in 0..2u64 {
                for kk in 0..m {
                    reps.push(z(kk * step + eps));
                }
            }
            let alphas = (0..m).map(|kk| if kk + 1 == m { minus_one } else { ext.one() }).collect();
            (reps, alphas)
        }
        LineVariant::Fullturn => {
            let reps = (0..=q).map(z).collect();
            let alphas = (0..=q).map(|j| if j == q { z(q + 1) } else { ext.one() }).collect();
            (reps, alphas)
        }
    };
    Ok(SymplecticLineSystem { q, ext, zeta, variant, reps, alphas })
}

impl SymplecticLineSystem {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn extension(&self) -> &GaloisField {
        &self.ext
    }

    pub fn zeta(&self) -> FieldElement {
        self.zeta
    }

    pub fn variant(&self) -> LineVariant {
        self.variant
    }

    pub fn representatives(&self) -> &[FieldElement] {
        &self.reps
    }

    /// The scalars α with `L·t_k = α_k·t_{k+1}`; indexed by k only.
    pub fn alphas(&self) -> &[FieldElement] {
        &self.alphas
    }

    /// `x^q`, the Frobenius of GF(q²) over GF(q).
    pub fn frob(&self, x: FieldElement) -> FieldElement {
        self.ext.pow(x, self.q)
    }

    pub fn form(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let f = &self.ext;
        let inner = f.sub(f.mul(x, self.frob(y)), f.mul(y, self.frob(x)));
        f.mul(f.pow(self.zeta, (self.q + 1) / 2), inner)
    }

    /// True when z lies in the base field GF(q) ⊂ GF(q²).
    pub fn in_base(&self, z: FieldElement) -> bool {
        self.frob(z) == z
    }

    /// Quadratic character of GF(q) evaluated on a base-field element of
    /// GF(q²). The base field's multiplicative group is generated by
    /// `ζ^{q+1}`, so `ζ^e` is a square in GF(q) iff `e/(q+1)` is even.
    pub fn chi_base(&self, z: FieldElement) -> Result<i8> {
        if z.is_zero() {
            return Ok(0);
        }
        let e = self.ext.log(z).expect("nonzero");
        if e % (self.q + 1) != 0 {
            return invalid("element is not in the base field");
        }
        Ok(if (e / (self.q + 1)) % 2 == 0 { 1 } else { -1 })
    }

    /// `(q+1)/2` for the halfturn system, `q+1` for fullturn.
    pub fn cycle_len(&self) -> usize {
        match self.variant {
            LineVariant::Halfturn => ((self.q + 1) / 2) as usize,
            LineVariant::Fullturn => (self.q + 1) as usize,
        }
    }

    /// `χ([t_i, t_j])` for all representative pairs.
    pub fn conference(&self) -> Vec<Vec<i8>> {
        let n = self.reps.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.chi_base(self.form(self.reps[i], self.reps[j])).expect("form is base-valued"))
                    .collect()
            })
            .collect()
    }
}
