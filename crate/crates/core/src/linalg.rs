//! Small dense Hermitian linear algebra.
//!
//! Complex Hermitian matrices H = A + iB are handled through the real
//! embedding `[[A, −B], [B, A]]`, which is symmetric, has each eigenvalue of
//! H twice, and is positive definite exactly when H is. That keeps the
//! eigen/Cholesky work on nalgebra's real symmetric routines; the matrices
//! here are Gram/mass matrices over at most a few dozen kernel centers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major dense complex Hermitian matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermitianMatrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::ZERO; dim * dim] }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    /// Hermitian quadratic form c* H c (real for Hermitian H).
    pub fn quadratic_form(&self, c: &[Complex64]) -> f64 {
        let mut acc = Complex64::ZERO;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += c[i].conj() * self.get(i, j) * c[j];
            }
        }
        acc.re
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, c: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * c[j]).sum())
            .collect()
    }

    /// Principal submatrix keeping the listed indices.
    pub fn submatrix(&self, keep: &[usize]) -> HermitianMatrix {
        let mut out = HermitianMatrix::zeros(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    fn real_embedding(&self) -> DMatrix<f64> {
        let n = self.dim;
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let v = self.get(i, j);
                m[(i, j)] = v.re;
                m[(i + n, j + n)] = v.re;
                m[(i, j + n)] = -v.im;
                m[(i + n, j)] = v.im;
            }
        }
        m
    }
}

/// Eigenvalue range (min, max) of a Hermitian matrix.
pub fn eig_range(h: &HermitianMatrix) -> (f64, f64) {
    let eig = h.real_embedding().symmetric_eigen();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &l in eig.eigenvalues.iter() {
        lo = lo.min(l);
        hi = hi.max(l);
    }
    (lo, hi)
}

/// Largest generalized eigenvalue λ of `M c = λ G c` for Hermitian M and
/// Hermitian positive definite G, by Cholesky reduction of G followed by a
/// symmetric eigensolve. Also returns the condition estimate of G.
///
/// Errors when G's condition estimate exceeds `cond_limit` or the Cholesky
/// factorization fails.
pub fn generalized_max_eigenvalue(
    m: &HermitianMatrix,
    g: &HermitianMatrix,
    cond_limit: f64,
) -> Result<(f64, f64)> {
    assert_eq!(m.dim, g.dim);
    let (lo, hi) = eig_range(g);
    let cond = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if !(cond < cond_limit) {
        return Err(Error::IllConditionedGram { cond });
    }
    let gr = g.real_embedding();
    let chol = nalgebra::linalg::Cholesky::new(gr)
        .ok_or(Error::IllConditionedGram { cond })?;
    let l = chol.l();
    let mr = m.real_embedding();
    // W = L^{-1} M L^{-T}
    let y = l
        .solve_lower_triangular(&mr)
        .ok_or(Error::IllConditionedGram { cond })?;
    let w = l
        .solve_lower_triangular(&y.transpose())
        .ok_or(Error::IllConditionedGram { cond })?;
    let sym = (w.transpose() + &w) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut best = f64::NEG_INFINITY;
    for &lam in eig.eigenvalues.iter() {
        best = best.max(lam);
    }
    Ok((best, cond))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eig_of_diagonal() {
        let mut h = HermitianMatrix::zeros(2);
        h.set(0, 0, c(3.0, 0.0));
        h.set(1, 1, c(1.0, 0.0));
        let (lo, hi) = eig_range(&h);
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 3.0).abs() < 1e-12);
    }

    #[test]
    fn generalized_identity_cases() {
        // M = 0 -> 0; M = G -> 1
        let mut g = HermitianMatrix::zeros(3);
        for i in 0..3 {
            g.set(i, i, c(2.0, 0.0));
        }
        g.set(0, 1, c(0.3, 0.4));
        g.set(1, 0, c(0.3, -0.4));
        let zero = HermitianMatrix::zeros(3);
        let (l0, _) = generalized_max_eigenvalue(&zero, &g, 1e12).unwrap();
        assert!(l0.abs() < 1e-12);
        let (l1, _) = generalized_max_eigenvalue(&g.clone(), &g, 1e12).unwrap();
        assert!((l1 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn generalized_known_pair() {
        // G = I, M Hermitian with known top eigenvalue 2 (pair (1,1)/sqrt2)
        let mut g = HermitianMatrix::zeros(2);
        g.set(0, 0, c(1.0, 0.0));
        g.set(1, 1, c(1.0, 0.0));
        let mut m = HermitianMatrix::zeros(2);
        m.set(0, 0, c(1.0, 0.0));
        m.set(1, 1, c(1.0, 0.0));
        m.set(0, 1, c(0.0, 1.0));
        m.set(1, 0, c(0.0, -1.0));
        let (l, _) = generalized_max_eigenvalue(&m, &g, 1e12).unwrap();
        assert!((l - 2.0).abs() < 1e-10);
    }

    #[test]
    fn condition_guard_trips() {
        let mut g = HermitianMatrix::zeros(2);
        g.set(0, 0, c(1.0, 0.0));
        g.set(1, 1, c(1e-15, 0.0));
        let m = HermitianMatrix::zeros(2);
        assert!(matches!(
            generalized_max_eigenvalue(&m, &g, 1e12),
            Err(Error::IllConditionedGram { .. })
        ));
    }
}
