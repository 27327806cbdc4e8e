use super::poly;
use crate::error::{invalid, Result};

/// Fields up to this order get discrete log/exp tables.
const TABLE_LIMIT: u64 = 1 << 22;

/// An element of GF(p^k), stored as `Σ c_i·p^i` where `c_i` is the
/// coefficient of `x^i` in the polynomial representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub u64);

impl FieldElement {
    pub fn index(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// GF(p^k) with a fixed monic irreducible modulus.
#[derive(Debug, Clone)]
pub struct GaloisField {
    p: u64,
    k: u32,
    q: u64,
    /// Coefficients of the modulus, constant term first, length k+1, monic.
    modulus: Vec<u64>,
    generator: FieldElement,
    tables: Option<Tables>,
}

#[derive(Debug, Clone)]
struct Tables {
    exp: Vec<u64>,
    log: Vec<u64>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `Some((p, k))` when `n = p^k` with p prime and k ≥ 1.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let f = prime_factors(n);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut k = 0;
    let mut m = n;
    while m > 1 {
        m /= p;
        k += 1;
    }
    Some((p, k))
}

pub fn is_odd_prime_power(n: u64) -> bool {
    n % 2 == 1 && prime_power(n).is_some()
}

/// Builds GF(p^k) with the lexicographically least monic irreducible
/// modulus, least meaning smallest `Σ c_i p^i` over the non-leading
/// coefficients.
pub fn make_field(p: u64, k: u32) -> Result<GaloisField> {
    if p >= 1 << 31 || !is_prime(p) {
        return invalid(format!("{p} is not a prime below 2^31"));
    }
    if k == 0 {
        return invalid("field degree must be at least 1");
    }
    let q = match p.checked_pow(k) {
        Some(q) if q < 1 << 63 => q,
        _ => return invalid(format!("{p}^{k} exceeds 2^63")),
    };
    let modulus = if k == 1 {
        vec![0, 1]
    } else {
        let mut found = None;
        for low in 0..q {
            let mut f = poly::from_index(low, p, k as usize);
            f.push(1);
            if poly::is_irreducible(&f, p) {
                found = Some(f);
                break;
            }
        }
        found.expect("an irreducible polynomial of every degree exists")
    };
    let mut field = GaloisField { p, k, q, modulus, generator: FieldElement(1), tables: None };
    field.generator = field.search_generator();
    if q <= TABLE_LIMIT {
        field.build_tables();
    }
    Ok(field)
}

impl GaloisField {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients, constant term first, monic.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The generator of the multiplicative group found at construction: the
    /// least element (in index order) of order q−1.
    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    /// Image of an integer under ℤ → GF(p).
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u64)
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        poly::from_index(a.0, self.p, self.k as usize)
    }

    pub fn from_coeffs(&self, c: &[u64]) -> Result<FieldElement> {
        if c.len() > self.k as usize || c.iter().any(|&x| x >= self.p) {
            return invalid("coefficient vector does not describe an element of this field");
        }
        Ok(FieldElement(poly::to_index(c, self.p)))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.k == 1 {
            return FieldElement((a.0 + b.0) % self.p);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0, 1);
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.k == 1 {
            return FieldElement((self.p - a.0) % self.p);
        }
        let (mut x, mut out, mut place) = (a.0, 0, 1);
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        if let Some(t) = &self.tables {
            let n = self.q - 1;
            let e = (t.log[a.0 as usize] + t.log[b.0 as usize]) % n;
            return FieldElement(t.exp[e as usize]);
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.k == 1 {
            return FieldElement(((a.0 as u128 * b.0 as u128) % self.p as u128) as u64);
        }
        let pa = self.coeffs(a);
        let pb = self.coeffs(b);
        let prod = poly::mul(&pa, &pb, self.p);
        let r = poly::rem(&prod, &self.modulus, self.p);
        FieldElement(poly::to_index(&r, self.p))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement(1);
        }
        if a.0 == 0 {
            return FieldElement(0);
        }
        if let Some(t) = &self.tables {
            let n = self.q - 1;
            let l = ((t.log[a.0 as usize] as u128 * e as u128) % n as u128) as u64;
            return FieldElement(t.exp[l as usize]);
        }
        let (mut base, mut e, mut acc) = (a, e, FieldElement(1));
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return invalid("zero has no inverse");
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// Discrete logarithm to the base `generator()`; None for zero.
    pub fn log(&self, a: FieldElement) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        if let Some(t) = &self.tables {
            return Some(t.log[a.0 as usize]);
        }
        let mut x = FieldElement(1);
        for e in 0..self.q - 1 {
            if x == a {
                return Some(e);
            }
            x = self.mul_slow(x, self.generator);
        }
        None
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: FieldElement) -> u64 {
        assert!(!a.is_zero(), "zero has no multiplicative order");
        let n = self.q - 1;
        let mut ord = n;
        for r in prime_factors(n) {
            while ord % r == 0 && self.pow(a, ord / r) == FieldElement(1) {
                ord /= r;
            }
        }
        ord
    }

    /// Quadratic character: 0 at zero, +1 on nonzero squares, −1 otherwise.
    pub fn chi(&self, a: FieldElement) -> Result<i8> {
        if self.p == 2 {
            return invalid("quadratic character is degenerate in characteristic 2");
        }
        if a.0 == 0 {
            return Ok(0);
        }
        if let Some(t) = &self.tables {
            return Ok(if t.log[a.0 as usize] % 2 == 0 { 1 } else { -1 });
        }
        Ok(if self.pow(a, (self.q - 1) / 2) == FieldElement(1) { 1 } else { -1 })
    }

    fn search_generator(&self) -> FieldElement {
        if self.q == 2 {
            return FieldElement(1);
        }
        let n = self.q - 1;
        let factors = prime_factors(n);
        for i in 1..self.q {
            let a = FieldElement(i);
            if factors.iter().all(|&r| self.pow(a, n / r) != FieldElement(1)) {
                return a;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&mut self) {
        let n = (self.q - 1) as usize;
        let mut exp = vec![0u64; n.max(1)];
        let mut log = vec![0u64; self.q as usize];
        let mut x = FieldElement(1);
        for (e, slot) in exp.iter_mut().enumerate().take(n) {
            *slot = x.0;
            log[x.0 as usize] = e as u64;
            x = self.mul_slow(x, self.generator);
        }
        self.tables = Some(Tables { exp, log });
    }
}
