use crate::error::{invalid, Result};
use crate::galois::{make_field, prime_power, FieldElement, GaloisField};

/// A strongly regular graph with parameters (v, (v−1)/2, (v−5)/4, (v−1)/4).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConferenceGraph {
    v: usize,
    adj: Vec<Vec<u8>>,
}

impl ConferenceGraph {
    /// Validates the strongly regular parameters with exact integer
    /// arithmetic (O(v³)).
    pub fn new(adj: Vec<Vec<u8>>) -> Result<Self> {
        let g = ConferenceGraph::new_unchecked(adj)?;
        g.verify()?;
        Ok(g)
    }

    fn new_unchecked(adj: Vec<Vec<u8>>) -> Result<Self> {
        let v = adj.len();
        if adj.iter().any(|r| r.len() != v) {
            return invalid("adjacency matrix must be square");
        }
        Ok(ConferenceGraph { v, adj })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn adjacency(&self) -> &[Vec<u8>] {
        &self.adj
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j] == 1
    }

    /// Complement adjacency `B = J − I − A`.
    pub fn complement(&self) -> Vec<Vec<u8>> {
        (0..self.v)
            .map(|i| (0..self.v).map(|j| u8::from(i != j && self.adj[i][j] == 0)).collect())
            .collect()
    }

    fn check_basic(&self) -> Result<()> {
        let v = self.v;
        if v % 4 != 1 {
            return invalid(format!("conference graphs have v ≡ 1 mod 4, got {v}"));
        }
        for i in 0..v {
            if self.adj[i][i] != 0 {
                return invalid(format!("loop at vertex {i}"));
            }
            for j in 0..v {
                if self.adj[i][j] > 1 || self.adj[i][j] != self.adj[j][i] {
                    return invalid(format!("adjacency is not a symmetric 0/1 matrix at ({i},{j})"));
                }
            }
        }
        Ok(())
    }

    /// Checks `A² = kI + λA + μ(J − I − A)` exactly.
    pub fn verify(&self) -> Result<()> {
        self.check_basic()?;
        let v = self.v;
        for i in 0..v {
            self.verify_row(i)?;
        }
        let _ = v;
        Ok(())
    }

    fn verify_row(&self, i: usize) -> Result<()> {
        let v = self.v as i64;
        let (k, lambda, mu) = ((v - 1) / 2, (v - 5) / 4, (v - 1) / 4);
        for j in 0..self.v {
            let common: i64 = (0..self.v).map(|l| i64::from(self.adj[i][l] & self.adj[l][j])).sum();
            let want = if i == j {
                k
            } else if self.adj[i][j] == 1 {
                lambda
            } else {
                mu
            };
            if common != want {
                return invalid(format!(
                    "not strongly regular: (A²)[{i}][{j}] = {common}, expected {want}"
                ));
            }
        }
        Ok(())
    }

    /// True when `A[i][j]` depends only on `(j − i) mod v`.
    pub fn is_circulant(&self) -> bool {
        let v = self.v;
        (0..v).all(|i| (0..v).all(|j| self.adj[i][j] == self.adj[0][(j + v - i) % v]))
    }

    /// Checks the three adjacency-algebra identities
    /// `4A² = (2v−2)I + (v−5)A + (v−1)B`, `4AB = (v−1)(A+B)`,
    /// `4B² = (2v−2)I + (v−1)A + (v−5)B` entrywise in integers.
    pub fn verify_structure_constants(&self) -> Result<()> {
        let v = self.v;
        let a: Vec<Vec<i64>> = self.adj.iter().map(|r| r.iter().map(|&x| i64::from(x)).collect()).collect();
        let b: Vec<Vec<i64>> = self.complement().iter().map(|r| r.iter().map(|&x| i64::from(x)).collect()).collect();
        let vi = v as i64;
        let prod = |x: &Vec<Vec<i64>>, y: &Vec<Vec<i64>>, i: usize, j: usize| -> i64 {
            (0..v).map(|l| x[i][l] * y[l][j]).sum()
        };
        for i in 0..v {
            for j in 0..v {
                let id = i64::from(i == j);
                let (aij, bij) = (a[i][j], b[i][j]);
                let checks = [
                    (4 * prod(&a, &a, i, j), (2 * vi - 2) * id + (vi - 5) * aij + (vi - 1) * bij, "A²"),
                    (4 * prod(&a, &b, i, j), (vi - 1) * (aij + bij), "AB"),
                    (4 * prod(&b, &a, i, j), (vi - 1) * (aij + bij), "BA"),
                    (4 * prod(&b, &b, i, j), (2 * vi - 2) * id + (vi - 1) * aij + (vi - 5) * bij, "B²"),
                ];
                for (got, want, name) in checks {
                    if got != want {
                        return invalid(format!("4{name}[{i}][{j}] = {got}, expected {want}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Seidel matrix `A − B` as integers.
    pub fn seidel(&self) -> Vec<Vec<i8>> {
        (0..self.v)
            .map(|i| {
                (0..self.v)
                    .map(|j| if i == j { 0 } else if self.adj[i][j] == 1 { 1 } else { -1 })
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric,
    Skew,
}

/// An n×n matrix with zero diagonal, ±1 off the diagonal and
/// `CᵀC = (n−1)I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConferenceMatrix {
    n: usize,
    c: Vec<Vec<i8>>,
    symmetry: Symmetry,
}

impl ConferenceMatrix {
    pub fn new(c: Vec<Vec<i8>>) -> Result<Self> {
        let n = c.len();
        if c.iter().any(|r| r.len() != n) {
            return invalid("conference matrix must be square");
        }
        for i in 0..n {
            for j in 0..n {
                let ok = if i == j { c[i][j] == 0 } else { c[i][j] == 1 || c[i][j] == -1 };
                if !ok {
                    return invalid(format!("entry ({i},{j}) = {} is not allowed", c[i][j]));
                }
            }
        }
        let symmetric = (0..n).all(|i| (0..n).all(|j| c[i][j] == c[j][i]));
        let skew = (0..n).all(|i| (0..n).all(|j| c[i][j] == -c[j][i]));
        let symmetry = match (symmetric, skew) {
            (true, _) => Symmetry::Symmetric,
            (false, true) => Symmetry::Skew,
            _ => return invalid("conference matrix is neither symmetric nor skew"),
        };
        let m = ConferenceMatrix { n, c, symmetry };
        m.verify_orthogonality()?;
        Ok(m)
    }

    /// `CᵀC = (n−1)I` in integer arithmetic.
    pub fn verify_orthogonality(&self) -> Result<()> {
        let n = self.n;
        let cols: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| i64::from(self.c[i][j])).collect()).collect();
        for i in 0..n {
            for j in i..n {
                let s: i64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum();
                let want = if i == j { n as i64 - 1 } else { 0 };
                if s != want {
                    return invalid(format!("(CᵀC)[{i}][{j}] = {s}, expected {want}"));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Vec<i8>] {
        &self.c
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    /// `out[i][j] = C[perm[i]][perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> Vec<Vec<i8>> {
        perm.iter().map(|&i| perm.iter().map(|&j| self.c[i][j]).collect()).collect()
    }

    /// Core obtained by deleting row and column 0.
    pub fn core(&self) -> Vec<Vec<i8>> {
        self.c[1..].iter().map(|r| r[1..].to_vec()).collect()
    }
}

fn paley_field(q: u64) -> Result<GaloisField> {
    let (p, k) = match prime_power(q) {
        Some(pk) if q % 2 == 1 => pk,
        _ => return invalid(format!("{q} is not an odd prime power")),
    };
    make_field(p, k)
}

/// Paley graph on GF(q), vertices in field index order, `α ~ β` iff
/// `χ(α−β) = 1`.
pub fn paley_graph(q: u64) -> Result<ConferenceGraph> {
    if q % 4 != 1 {
        return invalid(format!("the Paley graph needs q ≡ 1 mod 4, got {q}"));
    }
    if q > 10_000 {
        return invalid(format!("q = {q} exceeds the supported 10^4"));
    }
    let f = paley_field(q)?;
    let elems: Vec<FieldElement> = f.elements().collect();
    let mut adj = vec![vec![0u8; q as usize]; q as usize];
    for (i, &a) in elems.iter().enumerate() {
        for (j, &b) in elems.iter().enumerate() {
            adj[i][j] = u8::from(f.chi(f.sub(a, b))? == 1);
        }
    }
    let g = ConferenceGraph::new_unchecked(adj)?;
    g.check_basic()?;
    // The graph is a Cayley graph of the additive group, so one row of A²
    // determines all of them.
    g.verify_row(0)?;
    Ok(g)
}

/// Bordered Paley conference matrix of order q+1. Index 0 is the border
/// vertex, index `1 + i` is the i-th field element. Core entry
/// `C[α][β] = χ(β − α)`; the border column is `+1` (q ≡ 1 mod 4) or `−1`
/// (q ≡ 3 mod 4).
pub fn paley_conference(q: u64) -> Result<ConferenceMatrix> {
    if q > 10_000 {
        return invalid(format!("q = {q} exceeds the supported 10^4"));
    }
    let f = paley_field(q)?;
    let n = q as usize + 1;
    let elems: Vec<FieldElement> = f.elements().collect();
    let border = if q % 4 == 1 { 1 } else { -1 };
    let mut c = vec![vec![0i8; n]; n];
    for j in 1..n {
        c[0][j] = 1;
        c[j][0] = border;
    }
    for (i, &a) in elems.iter().enumerate() {
        for (j, &b) in elems.iter().enumerate() {
            c[i + 1][j + 1] = f.chi(f.sub(b, a))?;
        }
    }
    ConferenceMatrix::new(c)
}

/// `C[i][j] = χ(det[t_i t_j])` for vectors of GF(q)².
pub fn symplectic_conference(f: &GaloisField, reps: &[(FieldElement, FieldElement)]) -> Result<ConferenceMatrix> {
    let q = f.order();
    if q % 2 == 0 {
        return invalid("symplectic conference matrices need odd q");
    }
    if reps.len() as u64 != q + 1 {
        return invalid(format!("need {} representatives, got {}", q + 1, reps.len()));
    }
    let det = |u: (FieldElement, FieldElement), v: (FieldElement, FieldElement)| f.sub(f.mul(u.0, v.1), f.mul(u.1, v.0));
    let n = reps.len();
    let mut c = vec![vec![0i8; n]; n];
    for i in 0..n {
        if reps[i].0.is_zero() && reps[i].1.is_zero() {
            return invalid(format!("representative {i} is zero"));
        }
        for j in 0..n {
            let x = det(reps[i], reps[j]);
            if i != j && x.is_zero() {
                return invalid(format!("representatives {i} and {j} span the same line"));
            }
            c[i][j] = f.chi(x)?;
        }
    }
    ConferenceMatrix::new(c)
}

/// `t_∞ = (1,0)` followed by `t_α = (α,1)` in field index order.
pub fn standard_line_reps(f: &GaloisField) -> Vec<(FieldElement, FieldElement)> {
    let mut reps = vec![(f.one(), f.zero())];
    reps.extend(f.elements().map(|a| (a, f.one())));
    reps
}

/// Permutation π with `paley[π(i)][π(j)] = symplectic[i][j]` for the
/// standard representatives: ∞ stays first and α moves to −α.
pub fn standard_reindex(f: &GaloisField) -> Vec<usize> {
    let mut perm = vec![0usize];
    perm.extend(f.elements().map(|a| 1 + f.neg(a).index() as usize));
    perm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paley_five_cycle() {
        let g = paley_graph(5).unwrap();
        let nbrs: Vec<usize> = (0..5).filter(|&j| g.is_adjacent(0, j)).collect();
        assert_eq!(nbrs, vec![1, 4]);
        assert!(g.is_circulant());
        g.verify().unwrap();
        g.verify_structure_constants().unwrap();
    }

    #[test]
    fn paley_srg_parameters() {
        for q in [9u64, 13, 25] {
            let g = paley_graph(q).unwrap();
            g.verify().unwrap();
            g.verify_structure_constants().unwrap();
        }
        assert!(paley_graph(7).is_err());
    }

    #[test]
    fn conference_matrices_small() {
        for (q, sym) in [(5u64, Symmetry::Symmetric), (7, Symmetry::Skew), (9, Symmetry::Symmetric), (3, Symmetry::Skew)] {
            let c = paley_conference(q).unwrap();
            assert_eq!(c.symmetry(), sym);
            assert_eq!(c.n(), q as usize + 1);
        }
        assert!(paley_conference(8).is_err());
    }

    #[test]
    fn symplectic_matches_paley() {
        for q in [3u64, 5, 7, 9, 13] {
            let (p, k) = prime_power(q).unwrap();
            let f = make_field(p, k).unwrap();
            let s = symplectic_conference(&f, &standard_line_reps(&f)).unwrap();
            let pal = paley_conference(q).unwrap();
            let perm = standard_reindex(&f);
            assert_eq!(pal.permuted(&perm), s.entries(), "q = {q}");
        }
    }

    #[test]
    fn scaled_reps_are_switching_equivalent() {
        let f = make_field(5, 1).unwrap();
        let reps = standard_line_reps(&f);
        let c = symplectic_conference(&f, &reps).unwrap();
        let scalars: Vec<FieldElement> = (0..reps.len()).map(|i| f.from_int(1 + (i as i64 % 4))).collect();
        let scaled: Vec<_> = reps.iter().zip(&scalars).map(|(&(a, b), &s)| (f.mul(s, a), f.mul(s, b))).collect();
        let c2 = symplectic_conference(&f, &scaled).unwrap();
        for i in 0..reps.len() {
            for j in 0..reps.len() {
                let di = f.chi(scalars[i]).unwrap();
                let dj = f.chi(scalars[j]).unwrap();
                assert_eq!(c2.entries()[i][j], di * c.entries()[i][j] * dj);
            }
        }
    }

    #[test]
    fn repeated_line_rejected() {
        let f = make_field(3, 1).unwrap();
        let mut reps = standard_line_reps(&f);
        reps[2] = (f.mul(f.from_int(2), reps[1].0), f.mul(f.from_int(2), reps[1].1));
        assert!(symplectic_conference(&f, &reps).is_err());
    }
}
