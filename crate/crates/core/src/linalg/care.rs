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

//! Stabilizing solutions of continuous-time algebraic Riccati equations.
//!
//! The control equation `A^T P + P A - P B R^-1 B^T P + Q = 0` is solved by
//! the Hamiltonian Schur method: the stable invariant subspace `[U1; U2]` of
//!
//! ```text
//! H = [  A   -B R^-1 B^T ]
//!     [ -Q   -A^T        ]
//! ```
//!
//! gives `P = U2 U1^-1`. A few Newton steps polish the result when the
//! residual is above round-off level. The filter equation is its dual.

use nalgebra::Complex;

use super::lyapunov::solve_lyapunov_transposed;
use super::schur::ordered_schur;
use super::{
    complex_singular_values, eigenvalues, ensure_finite, ensure_spd, inverse_spd, min_symmetric_eigenvalue,
    spectral_abscissa, symmetrize, HURWITZ_MARGIN,
};
use crate::error::{Error, Result};
use crate::Matrix;

/// Eigenvalues with real part at or above this count as needing control.
pub(crate) const PBH_UNSTABLE_THRESHOLD: f64 = -1e-10;
/// Relative singular-value floor for the PBH rank decision.
pub(crate) const PBH_RANK_TOL: f64 = 1e-8;

const REFINE_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-8;
const MAX_REFINEMENTS: usize = 3;

/// PBH test: `rank([A - lambda I, B]) = n` for every eigenvalue of `A` with
/// `Re(lambda) >= PBH_UNSTABLE_THRESHOLD`.
pub(crate) fn pbh_full_rank(a: &Matrix, b: &Matrix) -> Result<bool> {
    let n = a.nrows();
    if !a.is_square() || b.nrows() != n {
        return Err(Error::Dimension(format!(
            "PBH test on a {}x{} state matrix and a {}x{} input matrix",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let m = b.ncols();
    for lambda in eigenvalues(a)? {
        if lambda.re < PBH_UNSTABLE_THRESHOLD || lambda.im < 0.0 {
            // Conjugates share the rank of their partner.
            continue;
        }
        let mut pencil = nalgebra::DMatrix::<Complex<f64>>::zeros(n, n + m);
        for i in 0..n {
            for j in 0..n {
                pencil[(i, j)] = Complex::new(a[(i, j)], 0.0);
            }
            pencil[(i, i)] -= lambda;
            for j in 0..m {
                pencil[(i, n + j)] = Complex::new(b[(i, j)], 0.0);
            }
        }
        let s = complex_singular_values(pencil)?;
        let smax = s.first().copied().unwrap_or(0.0);
        let smin = s.get(n - 1).copied().unwrap_or(0.0);
        if smax == 0.0 || smin < PBH_RANK_TOL * smax {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Stabilizing solution of `A^T P + P A - P B R^-1 B^T P + Q = 0`.
pub fn solve_care_control(a: &Matrix, b: &Matrix, q: &Matrix, r: &Matrix) -> Result<Matrix> {
    solve_care(a, b, q, r, Error::NotStabilizable)
}

/// Stabilizing solution of `A X + X A^T - X C^T Pv^-1 C X + Pw = 0`.
pub fn solve_care_filter(a: &Matrix, c: &Matrix, pi_w: &Matrix, pi_v: &Matrix) -> Result<Matrix> {
    if c.ncols() != a.nrows() {
        return Err(Error::Dimension(format!("sensor matrix has {} columns for {} states", c.ncols(), a.nrows())));
    }
    solve_care(&a.transpose(), &c.transpose(), pi_w, pi_v, Error::NotDetectable)
}

fn solve_care(a: &Matrix, b: &Matrix, q: &Matrix, r: &Matrix, uncontrollable: Error) -> Result<Matrix> {
    let n = a.nrows();
    let m = b.ncols();
    if !a.is_square() || b.nrows() != n || q.shape() != (n, n) || r.shape() != (m, m) {
        return Err(Error::Dimension(format!(
            "Riccati equation with A {}x{}, B {}x{}, Q {}x{}, R {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols(),
            q.nrows(),
            q.ncols(),
            r.nrows(),
            r.ncols()
        )));
    }
    ensure_finite(a, "riccati state matrix")?;
    ensure_finite(b, "riccati input matrix")?;
    ensure_spd(q, "riccati state weight")?;
    ensure_spd(r, "riccati input weight")?;
    if !pbh_full_rank(a, b)? {
        return Err(uncontrollable);
    }

    let r_inv = inverse_spd(r, "riccati input weight")?;
    let s = symmetrize(&(b * &r_inv * b.transpose()));

    let mut h = Matrix::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(a);
    h.view_mut((0, n), (n, n)).copy_from(&(-&s));
    h.view_mut((n, 0), (n, n)).copy_from(&(-q));
    h.view_mut((n, n), (n, n)).copy_from(&(-a.transpose()));

    let (form, dim) = ordered_schur(&h, |z| z.re < 0.0)?;
    if dim != n {
        return Err(Error::SolverFailure(format!("Hamiltonian has {dim} stable eigenvalues, expected {n}")));
    }
    let u1 = form.q.view((0, 0), (n, n)).clone_owned();
    let u2 = form.q.view((n, 0), (n, n)).clone_owned();
    // P U1 = U2  <=>  U1^T P^T = U2^T
    let p_t = u1
        .transpose()
        .lu()
        .solve(&u2.transpose())
        .ok_or_else(|| Error::SolverFailure("stable invariant subspace is not a graph".into()))?;
    let mut p = symmetrize(&p_t.transpose());
    ensure_finite(&p, "riccati solution").map_err(|_| Error::SolverFailure("non-finite solution".into()))?;

    let residual = |p: &Matrix| (a.transpose() * p + p * a - p * &s * p + q).norm();
    let mut res = residual(&p);
    for _ in 0..MAX_REFINEMENTS {
        if res <= REFINE_TOL * residual_scale(a, &s, q, &p) {
            break;
        }
        let a_cl = a - &s * &p;
        let rmat = symmetrize(&(a.transpose() * &p + &p * a - &p * &s * &p + q));
        let Ok(delta) = solve_lyapunov_transposed(&a_cl, &rmat) else {
            break;
        };
        let candidate = symmetrize(&(&p + delta));
        let cres = residual(&candidate);
        if cres.is_nan() || cres >= res {
            break;
        }
        p = candidate;
        res = cres;
    }
    if res > RESIDUAL_TOL * residual_scale(a, &s, q, &p) {
        return Err(Error::SolverFailure(format!("Riccati residual {res:e} above tolerance")));
    }

    let abscissa = spectral_abscissa(&(a - &s * &p))?;
    if abscissa >= -HURWITZ_MARGIN {
        return Err(Error::SolverFailure(format!("closed loop is not Hurwitz (spectral abscissa {abscissa:e})")));
    }
    let min_eig = min_symmetric_eigenvalue(&p);
    if min_eig <= 0.0 {
        return Err(Error::SolverFailure(format!(
            "solution is not positive definite (smallest eigenvalue {min_eig:e})"
        )));
    }
    Ok(p)
}

/// Magnitude of the terms of `A^T P + P A - P S P + Q`, used to make residual
/// tests relative: `1 + ||Q|| + 2 ||A|| ||P|| + ||S|| ||P||^2`.
pub(crate) fn residual_scale(a: &Matrix, s: &Matrix, q: &Matrix, p: &Matrix) -> f64 {
    let pn = p.norm();
    1.0 + q.norm() + 2.0 * a.norm() * pn + s.norm() * pn * pn
}
