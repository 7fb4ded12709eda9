//! Dense real matrices, symmetric/PSD wrappers, LU factorization and a
//! cyclic Jacobi eigensolver.
//!
//! Everything here is sized for the small systems the pricer needs (2x2
//! state matrices, 4x4 linearization blocks); there is no attempt at
//! sparsity or blocking.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Eigenvalue floor below which a symmetric matrix is rejected as not PSD.
/// ODE integration leaves noise of this order on exact-boundary states.
pub const TOL_PSD: f64 = 1e-12;

/// Dense row-major real matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:>14.6e} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        assert!(r > 0, "empty matrix");
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        Matrix { rows: r, cols: c, data }
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

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matmul");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scaled(&self, a: f64) -> Matrix {
        let mut out = self.clone();
        for x in &mut out.data {
            *x *= a;
        }
        out
    }

    pub fn trace(&self) -> f64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Maximum absolute column sum (the induced 1-norm).
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Frobenius inner product `Tr[self^T other]`.
    pub fn frobenius_dot(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    /// Solves `self * X = rhs` by LU factorization with partial pivoting.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix> {
        let lu = LuFactors::new(self)?;
        Ok(lu.solve(rhs))
    }

    pub fn det(&self) -> Result<f64> {
        Ok(LuFactors::new(self)?.det())
    }

    /// In-place `self += a * other`.
    pub fn axpy_inplace(&mut self, a: f64, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += a * y;
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// LU decomposition with partial pivoting of a square matrix.
pub struct LuFactors {
    lu: Matrix,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl LuFactors {
    pub fn new(m: &Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::invalid("LU factorization needs a square matrix"));
        }
        if !m.all_finite() {
            return Err(Error::invalid("LU factorization of a non-finite matrix"));
        }
        let n = m.rows();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let (mut pivot_row, mut pivot_val) = (k, lu[(k, k)].abs());
            for i in k + 1..n {
                let v = lu[(i, k)].abs();
                if v > pivot_val {
                    pivot_row = i;
                    pivot_val = v;
                }
            }
            if pivot_val == 0.0 {
                singular = true;
                continue;
            }
            if pivot_row != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
                perm.swap(k, pivot_row);
                sign = -sign;
            }
            for i in k + 1..n {
                let f = lu[(i, k)] / lu[(k, k)];
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let s = f * lu[(k, j)];
                    lu[(i, j)] -= s;
                }
            }
        }
        Ok(LuFactors { lu, perm, sign, singular })
    }

    pub fn det(&self) -> f64 {
        if self.singular {
            return 0.0;
        }
        let n = self.lu.rows();
        (0..n).map(|i| self.lu[(i, i)]).product::<f64>() * self.sign
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// Back-substitution for each column of `rhs`. Panics if singular;
    /// callers check `is_singular` or go through `Matrix::solve`.
    pub fn solve(&self, rhs: &Matrix) -> Matrix {
        assert!(!self.singular, "solve on a singular LU factorization");
        let n = self.lu.rows();
        assert_eq!(rhs.rows(), n);
        let mut out = Matrix::zeros(n, rhs.cols());
        for c in 0..rhs.cols() {
            let mut y = vec![0.0; n];
            for i in 0..n {
                let mut s = rhs[(self.perm[i], c)];
                for j in 0..i {
                    s -= self.lu[(i, j)] * y[j];
                }
                y[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = y[i];
                for j in i + 1..n {
                    s -= self.lu[(i, j)] * out[(j, c)];
                }
                out[(i, c)] = s / self.lu[(i, i)];
            }
        }
        out
    }
}

/// Real symmetric matrix. Construction enforces exact index symmetry;
/// use [`SymMatrix::symmetrized`] to average away floating-point skew.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::invalid("symmetric matrix must be square"));
        }
        if !m.all_finite() {
            return Err(Error::invalid("symmetric matrix must be finite"));
        }
        for i in 0..m.rows() {
            for j in 0..i {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::invalid(format!(
                        "matrix not symmetric at ({i},{j}): {} vs {}",
                        m[(i, j)],
                        m[(j, i)]
                    )));
                }
            }
        }
        Ok(SymMatrix(m))
    }

    /// Builds from `(m + m^T) / 2`.
    pub fn symmetrized(m: &Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::invalid("symmetric matrix must be square"));
        }
        let mut s = m.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                s[(i, j)] = 0.5 * (m[(i, j)] + m[(j, i)]);
            }
        }
        SymMatrix::new(s)
    }

    pub fn zeros(dim: usize) -> Self {
        SymMatrix(Matrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        SymMatrix(Matrix::identity(dim))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        SymMatrix::new(Matrix::from_rows(rows))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn scaled(&self, a: f64) -> SymMatrix {
        SymMatrix(self.0.scaled(a))
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        SymMatrix(self.0.add(&other.0))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let (vals, _) = jacobi_eigen(self);
        vals
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;
    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

/// Symmetric positive semidefinite matrix (eigenvalues >= -[`TOL_PSD`]).
#[derive(Clone, Debug, PartialEq)]
pub struct PsdMatrix(SymMatrix);

impl PsdMatrix {
    pub fn new(s: SymMatrix) -> Result<Self> {
        let min = s.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -TOL_PSD {
            return Err(Error::invalid(format!(
                "matrix is not positive semidefinite: min eigenvalue {min:e}"
            )));
        }
        Ok(PsdMatrix(s))
    }

    pub fn zeros(dim: usize) -> Self {
        PsdMatrix(SymMatrix::zeros(dim))
    }

    pub fn identity(dim: usize) -> Self {
        PsdMatrix(SymMatrix::identity(dim))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        PsdMatrix::new(SymMatrix::from_rows(rows)?)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_sym(&self) -> &SymMatrix {
        &self.0
    }

    pub fn as_matrix(&self) -> &Matrix {
        self.0.as_matrix()
    }

    /// Symmetric square root through the eigendecomposition, with negative
    /// noise eigenvalues floored at zero.
    pub fn sqrt(&self) -> Matrix {
        let (vals, vecs) = jacobi_eigen(&self.0);
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for k in 0..n {
            let lam = vals[k].max(0.0).sqrt();
            if lam == 0.0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += lam * vecs[(i, k)] * vecs[(j, k)];
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for PsdMatrix {
    type Output = f64;
    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Returns eigenvalues in ascending order and the matching orthonormal
/// eigenvectors as columns.
pub fn jacobi_eigen(s: &SymMatrix) -> (Vec<f64>, Matrix) {
    let n = s.dim();
    let mut a = s.as_matrix().clone();
    let mut v = Matrix::identity(n);
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        if off.sqrt() <= 1e-15 * (1.0 + a.max_abs()) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vecs = Matrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            vecs[(i, new_col)] = v[(i, old_col)];
        }
    }
    (vals, vecs)
}
