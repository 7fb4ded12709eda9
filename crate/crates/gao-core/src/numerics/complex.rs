//! Dense complex matrices for characteristic-function evaluation.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::matrix::Matrix;

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        ComplexMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Lifts a real matrix scaled by a complex factor.
    pub fn from_real_scaled(m: &Matrix, z: Complex64) -> Self {
        let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out[(i, j)] = z * m[(i, j)];
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// LU determinant with partial pivoting on the modulus.
    pub fn det(&self) -> Result<Complex64> {
        let (lu, sign, singular) = self.lu()?;
        if singular {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let mut d = Complex64::new(sign, 0.0);
        for i in 0..self.rows {
            d *= lu[(i, i)];
        }
        Ok(d)
    }

    /// Solves `self * X = rhs`.
    pub fn solve(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.rows;
        let (lu, _, singular) = self.lu()?;
        if singular {
            return Err(Error::invalid("singular complex matrix in solve"));
        }
        assert_eq!(rhs.rows, n);
        let mut out = ComplexMatrix::zeros(n, rhs.cols);
        for c in 0..rhs.cols {
            let mut y = vec![Complex64::new(0.0, 0.0); n];
            for i in 0..n {
                let mut s = rhs[(lu_perm(&lu)[i], c)];
                for j in 0..i {
                    s -= lu.mat[(i, j)] * y[j];
                }
                y[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = y[i];
                for j in i + 1..n {
                    s -= lu.mat[(i, j)] * out[(j, c)];
                }
                out[(i, c)] = s / lu.mat[(i, i)];
            }
        }
        Ok(out)
    }

    fn lu(&self) -> Result<(CluRaw, f64, bool)> {
        if self.rows != self.cols {
            return Err(Error::invalid("complex LU needs a square matrix"));
        }
        if !self.all_finite() {
            return Err(Error::invalid("complex LU on a non-finite matrix"));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let (mut pr, mut pv) = (k, m[(k, k)].norm());
            for i in k + 1..n {
                let v = m[(i, k)].norm();
                if v > pv {
                    pr = i;
                    pv = v;
                }
            }
            if pv == 0.0 {
                singular = true;
                continue;
            }
            if pr != k {
                for j in 0..n {
                    let tmp = m[(k, j)];
                    m[(k, j)] = m[(pr, j)];
                    m[(pr, j)] = tmp;
                }
                perm.swap(k, pr);
                sign = -sign;
            }
            for i in k + 1..n {
                let f = m[(i, k)] / m[(k, k)];
                m[(i, k)] = f;
                for j in k + 1..n {
                    let s = f * m[(k, j)];
                    m[(i, j)] -= s;
                }
            }
        }
        Ok((CluRaw { mat: m, perm }, sign, singular))
    }
}

struct CluRaw {
    mat: ComplexMatrix,
    perm: Vec<usize>,
}

fn lu_perm(lu: &CluRaw) -> &[usize] {
    &lu.perm
}

impl Index<(usize, usize)> for CluRaw {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.mat[idx]
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn det_matches_hand_computation() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::new(1.0, 1.0);
        m[(0, 1)] = Complex64::new(2.0, 0.0);
        m[(1, 0)] = Complex64::new(0.0, -1.0);
        m[(1, 1)] = Complex64::new(3.0, 0.0);
        // det = (1+i)*3 - 2*(-i) = 3 + 5i
        let d = m.det().unwrap();
        assert_abs_diff_eq!(d.re, 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.im, 5.0, epsilon = 1e-14);
    }

    #[test]
    fn solve_roundtrips() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = Complex64::new(0.5, -0.25);
        let mut rhs = ComplexMatrix::zeros(2, 1);
        rhs[(0, 0)] = Complex64::new(1.0, 2.0);
        rhs[(1, 0)] = Complex64::new(-1.0, 0.0);
        let x = m.solve(&rhs).unwrap();
        let back = m.matmul(&x);
        assert_abs_diff_eq!(back[(0, 0)].re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(back[(0, 0)].im, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(back[(1, 0)].re, -1.0, epsilon = 1e-14);
    }
}
