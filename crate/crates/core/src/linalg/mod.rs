/*
Copyright 2026 The sacopt Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

//! Dense kernels: Schur forms, SVD, Lyapunov and Riccati solvers.

mod care;
mod jacobi;
mod lyapunov;
mod schur;

pub(crate) use care::{pbh_full_rank as care_pbh, residual_scale as riccati_residual_scale};
pub use care::{solve_care_control, solve_care_filter};
pub use lyapunov::{solve_lyapunov, solve_lyapunov_transposed};
pub use schur::{ordered_schur, real_schur, QuasiTriangular};

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::Matrix;

/// Closed-loop matrices count as Hurwitz only when their spectral abscissa is
/// below `-HURWITZ_MARGIN`.
pub const HURWITZ_MARGIN: f64 = 1e-8;

/// Thin singular value decomposition `a = u * diag(sigma) * vt`.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: Matrix,
    /// Nonincreasing, nonnegative.
    pub sigma: Vec<f64>,
    pub vt: Matrix,
}

impl SvdResult {
    /// Number of singular values strictly above `rel_tol * sigma_max`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let smax = self.sigma.first().copied().unwrap_or(0.0);
        if smax == 0.0 {
            return 0;
        }
        self.sigma.iter().filter(|&&s| s > rel_tol * smax).count()
    }

    pub fn reconstruct(&self) -> Matrix {
        let mut us = self.u.clone();
        for (j, s) in self.sigma.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * &self.vt
    }
}

/// Singular value decomposition with singular values sorted nonincreasing.
pub fn svd(a: &Matrix) -> Result<SvdResult> {
    ensure_finite(a, "svd input")?;
    let k = a.nrows().min(a.ncols());
    if k == 0 {
        return Ok(SvdResult { u: Matrix::zeros(a.nrows(), 0), sigma: Vec::new(), vt: Matrix::zeros(0, a.ncols()) });
    }
    let (u, sigma, vt) = jacobi::jacobi_svd(a).ok_or(Error::ConvergenceFailure("svd"))?;
    Ok(SvdResult { u, sigma, vt })
}

/// Eigenvalues of a real square matrix.
pub fn eigenvalues(a: &Matrix) -> Result<Vec<Complex<f64>>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("eigenvalues of a {}x{} matrix", a.nrows(), a.ncols())));
    }
    Ok(real_schur(a)?.eigenvalues())
}

/// Largest real part over the eigenvalues of `a`.
pub fn spectral_abscissa(a: &Matrix) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

pub fn is_hurwitz(a: &Matrix) -> Result<bool> {
    Ok(spectral_abscissa(a)? < -HURWITZ_MARGIN)
}

/// Smallest eigenvalue of the symmetric part of `a`.
pub fn min_symmetric_eigenvalue(a: &Matrix) -> f64 {
    let sym = symmetrize(a);
    SymmetricEigen::new(sym).eigenvalues.min()
}

/// Checks symmetry (relative 1e-10) and strict positive definiteness.
pub fn ensure_spd(a: &Matrix, name: &'static str) -> Result<()> {
    ensure_finite(a, name)?;
    if !a.is_square() {
        return Err(Error::Dimension(format!("`{name}` must be square")));
    }
    let asym = relative_asymmetry(a);
    if asym > 1e-10 {
        return Err(Error::NotPositiveDefinite { name, min_eig: f64::NAN });
    }
    let min_eig = min_symmetric_eigenvalue(a);
    if min_eig <= 0.0 {
        return Err(Error::NotPositiveDefinite { name, min_eig });
    }
    Ok(())
}

pub fn ensure_finite(a: &Matrix, name: &'static str) -> Result<()> {
    if a.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(name))
    }
}

/// `(a + a^T) / 2`.
pub fn symmetrize(a: &Matrix) -> Matrix {
    (a + a.transpose()) * 0.5
}

/// `||a - a^T||_F / ||a||_F`, zero for the zero matrix.
pub fn relative_asymmetry(a: &Matrix) -> f64 {
    let scale = a.norm();
    if scale == 0.0 {
        0.0
    } else {
        (a - a.transpose()).norm() / scale
    }
}

/// Entrywise (Hadamard) product.
pub fn hadamard(a: &Matrix, b: &Matrix) -> Matrix {
    a.component_mul(b)
}

/// Sum of absolute entries.
pub fn l1_norm(a: &Matrix) -> f64 {
    a.iter().map(|x| x.abs()).sum()
}

/// Number of entries with magnitude strictly above `floor`.
pub fn count_nonzero(a: &Matrix, floor: f64) -> usize {
    a.iter().filter(|x| x.abs() > floor).count()
}

pub fn nuclear_norm(a: &Matrix) -> Result<f64> {
    Ok(svd(a)?.sigma.iter().sum())
}

/// Largest singular value.
pub fn spectral_norm(a: &Matrix) -> Result<f64> {
    Ok(svd(a)?.sigma.first().copied().unwrap_or(0.0))
}

/// Frobenius inner product `tr(a^T b)`.
pub fn inner(a: &Matrix, b: &Matrix) -> f64 {
    a.dot(b)
}

pub(crate) fn inverse_spd(a: &Matrix, name: &'static str) -> Result<Matrix> {
    a.clone()
        .cholesky()
        .map(|c| symmetrize(&c.inverse()))
        .ok_or(Error::NotPositiveDefinite { name, min_eig: min_symmetric_eigenvalue(a) })
}

/// Complex singular values of a complex matrix, nonincreasing.
pub(crate) fn complex_singular_values(a: DMatrix<Complex<f64>>) -> Result<Vec<f64>> {
    // [[Re, -Im], [Im, Re]] has the singular values of `a`, each twice.
    let (m, n) = a.shape();
    let mut real = Matrix::zeros(2 * m, 2 * n);
    for i in 0..m {
        for j in 0..n {
            let z = a[(i, j)];
            real[(i, j)] = z.re;
            real[(i + m, j + n)] = z.re;
            real[(i, j + n)] = -z.im;
            real[(i + m, j)] = z.im;
        }
    }
    let (_, s, _) = jacobi::jacobi_svd(&real).ok_or(Error::ConvergenceFailure("complex svd"))?;
    Ok(s.into_iter().step_by(2).collect())
}
