use crate::error::{invalid, Result};
use crate::linalg::{dft_matrix, ComplexMatrix, Role, C64};

/// Checks that every nonzero residue mod v is a difference of exactly one
/// ordered pair of D.
pub fn check_planar_difference_set(dset: &[usize], v: usize) -> Result<()> {
    let mut count = vec![0usize; v];
    for &a in dset {
        if a >= v {
            return invalid(format!("element {a} is not a residue mod {v}"));
        }
        for &b in dset {
            if a != b {
                count[(a + v - b) % v] += 1;
            }
        }
    }
    if let Some(r) = (1..v).find(|&r| count[r] != 1) {
        return invalid(format!("residue {r} has {} difference representations", count[r]));
    }
    Ok(())
}

/// The v×(k+1)v frame whose generator φ_i takes the value `H[g,i]/√k` at
/// the g-th element of D and zero elsewhere, followed by all cyclic
/// translations. Column `i·v + t` holds φ_i shifted by t.
pub fn steiner_circulant(m: usize, h: &ComplexMatrix, dset: &[usize]) -> Result<ComplexMatrix> {
    if m == 0 {
        return invalid("m must be positive");
    }
    let v = m * m + m + 1;
    let k = m + 1;
    if dset.len() != k {
        return invalid(format!("difference set must have {k} elements, got {}", dset.len()));
    }
    check_planar_difference_set(dset, v)?;
    if h.rows() != k + 1 || h.cols() != k + 1 {
        return invalid(format!("H must be {0}x{0}", k + 1));
    }
    if h.data().iter().any(|z| (z.norm() - 1.0).abs() > 1e-10) {
        return invalid("H must have unimodular entries");
    }
    let resid = h.gram().max_abs_diff(&ComplexMatrix::identity(k + 1).scale_re((k + 1) as f64));
    if resid > 1e-10 {
        return invalid(format!("H*H deviates from (k+1)I by {resid:.3e}"));
    }
    let scale = 1.0 / (k as f64).sqrt();
    let cols = (k + 1) * v;
    let mut data = vec![C64::new(0.0, 0.0); v * cols];
    for i in 0..=k {
        for t in 0..v {
            for (g, &pos) in dset.iter().enumerate() {
                data[((pos + t) % v) * cols + i * v + t] = h[(g, i)] * scale;
            }
        }
    }
    Ok(ComplexMatrix::from_vec(v, cols, data)?.with_role(Role::Frame))
}

/// The 3×9 (m = 1, D = {0,1}, H = √3·DFT) and 7×28 (m = 2, D = {1,2,4},
/// Sylvester H) examples.
pub fn steiner_default(m: usize) -> Result<ComplexMatrix> {
    match m {
        1 => {
            let h = dft_matrix(3)?.scale_re(3f64.sqrt());
            steiner_circulant(1, &h, &[0, 1])
        }
        2 => {
            let rows: Vec<Vec<f64>> = vec![
                vec![1.0, 1.0, 1.0, 1.0],
                vec![1.0, -1.0, 1.0, -1.0],
                vec![1.0, 1.0, -1.0, -1.0],
                vec![1.0, -1.0, -1.0, 1.0],
            ];
            steiner_circulant(2, &ComplexMatrix::from_real_rows(&rows), &[1, 2, 4])
        }
        _ => invalid(format!("no default difference set and H for m = {m}")),
    }
}

/// One-parameter family of 2-circulant 3×6 signatures.
pub fn family_3x6(alpha: C64) -> Result<ComplexMatrix> {
    if (alpha.norm() - 1.0).abs() > 1e-12 {
        return invalid(format!("alpha must be unimodular, |alpha| = {}", alpha.norm()));
    }
    let a = alpha;
    let b = alpha.conj();
    let o = C64::new(1.0, 0.0);
    let z = C64::new(0.0, 0.0);
    let rows = [
        [z, a, b, o, a, -b],
        [b, z, a, -b, o, a],
        [a, b, z, a, -b, o],
        [o, -a, b, z, -a, -b],
        [b, o, -a, -b, z, -a],
        [-a, b, o, -a, -b, z],
    ];
    Ok(ComplexMatrix::from_fn(6, 6, |i, j| rows[i][j]).with_role(Role::Signature))
}

/// Gaussian-integer entries of the 2-circulant 2×4 signature, as
/// `(re, im)` pairs.
pub fn zauner_2x4_entries() -> [[(i64, i64); 4]; 4] {
    [
        [(0, 0), (1, 0), (1, 0), (0, -1)],
        [(1, 0), (0, 0), (0, -1), (1, 0)],
        [(1, 0), (0, 1), (0, 0), (-1, 0)],
        [(0, 1), (1, 0), (-1, 0), (0, 0)],
    ]
}

pub fn zauner_2x4_signature() -> ComplexMatrix {
    let e = zauner_2x4_entries();
    ComplexMatrix::from_fn(4, 4, |i, j| C64::new(e[i][j].0 as f64, e[i][j].1 as f64)).with_role(Role::Signature)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{check_etf, frame_from_gram, gram_of_signature, triple_product, welch_gamma};

    #[test]
    fn steiner_examples() {
        let phi = steiner_default(1).unwrap();
        assert_eq!((phi.rows(), phi.cols()), (3, 9));
        let rep = check_etf(&phi, 1e-10);
        assert!(rep.pass, "{rep}");
        assert!((rep.gamma - 0.5).abs() < 1e-15);
        let phi = steiner_default(2).unwrap();
        assert_eq!((phi.rows(), phi.cols()), (7, 28));
        assert!(check_etf(&phi, 1e-10).pass);
        assert!(phi.data().iter().all(|z| z.im.abs() < 1e-15));
    }

    #[test]
    fn steiner_supports() {
        let phi = steiner_default(2).unwrap();
        let (v, n) = (7, 28);
        let support = |j: usize| -> Vec<usize> { (0..v).filter(|&r| phi[(r, j)].norm() > 1e-12).collect() };
        // All generators share the support D, so distinct translations
        // meet in at most one point.
        for j in 0..n {
            assert_eq!(support(j).len(), 3);
            for l in 0..n {
                if j % v != l % v {
                    let (a, b) = (support(j), support(l));
                    assert!(a.iter().filter(|x| b.contains(x)).count() <= 1);
                }
            }
        }
    }

    #[test]
    fn non_planar_rejected() {
        let err = check_planar_difference_set(&[0, 1, 2], 7).unwrap_err().to_string();
        assert!(err.contains("residue"), "{err}");
    }

    #[test]
    fn family_3x6_members() {
        let i = C64::new(0.0, 1.0);
        let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 7.0);
        for a in [C64::new(1.0, 0.0), w, i] {
            let s = family_3x6(a).unwrap();
            assert!((&s * &s).max_abs_diff(&ComplexMatrix::identity(6).scale_re(5.0)) < 1e-10);
            let phi = frame_from_gram(&gram_of_signature(&s, 3).unwrap(), 3).unwrap();
            assert!(check_etf(&phi, 1e-10).pass);
        }
        let g1 = gram_of_signature(&family_3x6(C64::new(1.0, 0.0)).unwrap(), 3).unwrap();
        let g2 = gram_of_signature(&family_3x6(w).unwrap(), 3).unwrap();
        // (1,2,4) gives −γ³ for every alpha; (0,1,2) gives γ³α³.
        assert!((triple_product(&g1, 1, 2, 4) - triple_product(&g2, 1, 2, 4)).norm() < 1e-12);
        assert!((triple_product(&g1, 0, 1, 2) - triple_product(&g2, 0, 1, 2)).norm() > 1e-3);
        let spectrum = |g: &ComplexMatrix| {
            let mut t = Vec::new();
            for i in 0..6 {
                for j in 0..6 {
                    for k in 0..6 {
                        if i != j && j != k && k != i {
                            let z = triple_product(g, i, j, k);
                            t.push((z.re * 1e9).round() as i64);
                        }
                    }
                }
            }
            t.sort();
            t
        };
        assert_ne!(spectrum(&g1), spectrum(&g2));
        assert!(family_3x6(C64::new(1.1, 0.0)).is_err());
    }

    #[test]
    fn zauner_square_exact() {
        let e = zauner_2x4_entries();
        assert_eq!(e[0][3], (0, -1));
        for i in 0..4 {
            for j in 0..4 {
                let (mut re, mut im) = (0i64, 0i64);
                for l in 0..4 {
                    let (a, b) = e[i][l];
                    let (c, d) = e[l][j];
                    re += a * c - b * d;
                    im += a * d + b * c;
                }
                assert_eq!((re, im), if i == j { (3, 0) } else { (0, 0) });
            }
        }
        let phi = frame_from_gram(&gram_of_signature(&zauner_2x4_signature(), 2).unwrap(), 2).unwrap();
        let rep = check_etf(&phi, 1e-12);
        assert!(rep.pass, "{rep}");
        assert!((rep.gamma - welch_gamma(2, 4).unwrap()).abs() < 1e-15);
    }
}
