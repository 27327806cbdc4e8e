use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{invalid, Result};

pub type C64 = Complex64;

/// What a complex matrix represents. Only used for bookkeeping and for the
/// `kind` field of the JSON form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Frame,
    Gram,
    Signature,
    Generic,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Frame => "frame",
            Role::Gram => "gram",
            Role::Signature => "signature",
            Role::Generic => "generic",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        match s {
            "frame" => Some(Role::Frame),
            "gram" => Some(Role::Gram),
            "signature" => Some(Role::Signature),
            "generic" => Some(Role::Generic),
            _ => None,
        }
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
    role: Role,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols], role: Role::Generic }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data, role: Role::Generic }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return invalid(format!("{} entries for a {}x{} matrix", data.len(), rows, cols));
        }
        Ok(ComplexMatrix { rows, cols, data, role: Role::Generic })
    }

    /// Lifts a real matrix given as rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj()).with_role(self.role)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj()).with_role(self.role)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn neg(&self) -> Self {
        self.scale_re(-1.0).with_role(self.role)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `‖self − other‖_max`; infinite when the shapes differ.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// `‖A − A*‖_max`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut m: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                m = m.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        m
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `A*·A`, the Gram matrix of the columns.
    pub fn gram(&self) -> ComplexMatrix {
        let n = self.cols;
        let mut g = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut s = C64::new(0.0, 0.0);
                for r in 0..self.rows {
                    s += self[(r, i)].conj() * self[(r, j)];
                }
                g[(i, j)] = s;
                g[(j, i)] = s.conj();
            }
        }
        g.with_role(Role::Gram)
    }

    /// Reorders rows and columns: `out[i][j] = self[perm[i]][perm[j]]`.
    pub fn permute_sym(&self, perm: &[usize]) -> ComplexMatrix {
        Self::from_fn(perm.len(), perm.len(), |i, j| self[(perm[i], perm[j])]).with_role(self.role)
    }

    pub fn select_columns(&self, cols: &[usize]) -> ComplexMatrix {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])]).with_role(self.role)
    }

    /// Real parts as a real matrix.
    pub fn re(&self) -> RealMatrix {
        RealMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].re)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + rhs[(i, j)])
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("shape mismatch in mul")
    }
}

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RealMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RealMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &RealMatrix) -> Result<RealMatrix> {
        if self.cols != other.rows {
            return invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let mut out = RealMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &RealMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// ∞→∞ operator norm: the largest absolute row sum.
pub fn op_norm_inf(a: &RealMatrix) -> f64 {
    (0..a.rows()).map(|i| a.row(i).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Circulant matrix whose column g is the cyclic shift of `v` by g.
pub fn circulant(v: &[C64]) -> ComplexMatrix {
    let n = v.len();
    ComplexMatrix::from_fn(n, n, |i, j| v[(i + n - j) % n])
}
