//! Small dense complex matrices and Hermitian eigendecomposition.
//!
//! Problem sizes in this toolkit stay below a few hundred, so a cyclic Jacobi
//! sweep is accurate and fast enough; it also keeps the numerical surface of
//! the crate self-contained.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Inner product `sum conj(a_i) b_i`.
pub fn vdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vnorm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

pub fn vnorm(a: &[C64]) -> f64 {
    vnorm_sqr(a).sqrt()
}

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Rank-one Hermitian matrix `v v^H`.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        CMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// `A^H v`, without forming the adjoint.
    pub fn adjoint_mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.rows, v.len());
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].conj() * v[i]).sum())
            .collect()
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&mut self, c: f64) {
        for x in &mut self.data {
            *x *= c;
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: f64, other: &CMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += c * y;
        }
    }

    pub fn trace_re(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].re).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Re tr(A B); real-valued for a Hermitian pair.
    pub fn trace_product_re(a: &CMatrix, b: &CMatrix) -> f64 {
        assert_eq!(a.cols, b.rows);
        assert_eq!(b.cols, a.rows);
        let mut acc = 0.0;
        for i in 0..a.rows {
            for j in 0..a.cols {
                acc += (a[(i, j)] * b[(j, i)]).re;
            }
        }
        acc
    }

    /// Quadratic form `v^H A v` (real part).
    pub fn quadratic_form_re(&self, v: &[C64]) -> f64 {
        vdot(v, &self.mul_vec(v)).re
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are the eigenvectors, in the order of `values`.
    pub vectors: CMatrix,
}

/// Cyclic Jacobi eigendecomposition for Hermitian `a`.
pub fn hermitian_eigen(a: &CMatrix) -> Result<HermitianEigen> {
    if a.rows != a.cols {
        return Err(Error::Dimension(format!(
            "hermitian_eigen: {}x{} not square",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut v = CMatrix::identity(n);
    let scale = m.frobenius().max(1e-300);
    let tol = 1e-14 * scale;

    for _sweep in 0..80 {
        if m.off_diagonal_norm() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = m[(p, q)];
                let gabs = g.norm();
                if gabs <= tol / n as f64 {
                    continue;
                }
                // Phase rotation making m[(p,q)] real positive: scale column q
                // by exp(-j phi), row q by exp(+j phi).
                let phase = g / gabs;
                let ph_conj = phase.conj();
                for i in 0..n {
                    m[(i, q)] *= ph_conj;
                }
                for j in 0..n {
                    m[(q, j)] *= phase;
                }
                for i in 0..n {
                    v[(i, q)] *= ph_conj;
                }
                // Real Jacobi rotation zeroing the (p, q) entry.
                let apq = m[(p, q)].re;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = c * mip - s * miq;
                    m[(i, q)] = s * mip + c * miq;
                }
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = c * mpj - s * mqj;
                    m[(q, j)] = s * mpj + c * mqj;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = c * vip - s * viq;
                    v[(i, q)] = s * vip + c * viq;
                }
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
            }
        }
    }

    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (m[(i, i)].re, i)).collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let values: Vec<f64> = pairs.iter().map(|&(l, _)| l).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, pairs[j].1)]);
    Ok(HermitianEigen { values, vectors })
}

/// Largest eigenpair of a Hermitian PSD matrix.
pub fn principal_eigenpair(a: &CMatrix) -> Result<(f64, Vec<C64>)> {
    let eig = hermitian_eigen(a)?;
    Ok((eig.values[0], eig.vectors.column(0)))
}
