//! Dense polynomials over GF(p), coefficients constant term first.

pub fn from_index(mut idx: u64, p: u64, len: usize) -> Vec<u64> {
    let mut c = Vec::with_capacity(len);
    for _ in 0..len {
        c.push(idx % p);
        idx /= p;
    }
    c
}

pub fn to_index(c: &[u64], p: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&x| x != 0)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p−2) is the inverse.
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    trim(out)
}

/// Remainder of a modulo a nonzero m.
pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let dm = degree(m).expect("division by the zero polynomial");
    let lead_inv = inv_mod(m[dm], p);
    let mut r = trim(a.to_vec());
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let f = (r[dr] as u128 * lead_inv as u128 % p as u128) as u64;
        let shift = dr - dm;
        for (i, &c) in m.iter().enumerate().take(dm + 1) {
            let sub = (f as u128 * c as u128 % p as u128) as u64;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    // Normalize to monic.
    if let Some(d) = degree(&x) {
        let li = inv_mod(x[d], p);
        for c in &mut x {
            *c = (*c as u128 * li as u128 % p as u128) as u64;
        }
    }
    x
}

/// `base^e mod m`.
pub fn pow_mod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

/// Ben-Or: f of degree k is irreducible iff gcd(f, x^{p^i} − x) = 1 for
/// every 1 ≤ i ≤ k/2.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = match degree(f) {
        Some(k) if k >= 1 => k,
        _ => return false,
    };
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 0..k / 2 {
        xp = pow_mod(&xp, p as u128, f, p);
        let g = gcd(f, &sub(&xp, &x, p), p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Exhaustive check: no root and no monic factor of degree 2..=k/2.
pub fn is_irreducible_by_trial(f: &[u64], p: u64) -> bool {
    let k = match degree(f) {
        Some(k) if k >= 1 => k,
        _ => return false,
    };
    for deg in 1..=k / 2 {
        let count = p.pow(deg as u32);
        for low in 0..count {
            let mut g = from_index(low, p, deg);
            g.push(1);
            if rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}
