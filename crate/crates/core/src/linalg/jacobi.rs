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

//! One-sided Jacobi SVD.
//!
//! Small dense matrices only. Chosen over the bidiagonal QR path because it
//! is accurate for rank-deficient inputs, which sparse and low-rank designs
//! produce routinely.

use crate::Matrix;

const MAX_SWEEPS: usize = 80;
const ORTHOGONALITY_TOL: f64 = 1e-15;

/// Thin SVD `a = u diag(sigma) vt` with `sigma` nonincreasing. `None` if the
/// sweeps fail to converge or the input is not finite.
pub(super) fn jacobi_svd(a: &Matrix) -> Option<(Matrix, Vec<f64>, Matrix)> {
    if a.iter().any(|v| !v.is_finite()) {
        return None;
    }
    if a.nrows() < a.ncols() {
        let (u, s, vt) = jacobi_svd(&a.transpose())?;
        return Some((vt.transpose(), s, u.transpose()));
    }
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = Matrix::identity(n, n);
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha = w.column(i).norm_squared();
                let beta = w.column(j).norm_squared();
                let gamma = w.column(i).dot(&w.column(j));
                if gamma == 0.0 || gamma.abs() <= ORTHOGONALITY_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, i, j, c, s);
                rotate(&mut v, i, j, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let floor = norms.iter().copied().fold(0.0, f64::max) * f64::EPSILON * m.max(n) as f64;

    let mut u = Matrix::zeros(m, n);
    let mut vt = Matrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    let mut filled = 0;
    for (dst, &src) in order.iter().enumerate() {
        vt.set_row(dst, &v.column(src).transpose());
        let s = norms[src];
        if s > floor && s > 0.0 {
            u.set_column(dst, &(w.column(src) / s));
            sigma.push(s);
            filled += 1;
        } else {
            sigma.push(0.0);
        }
    }
    complete_orthonormal(&mut u, filled);
    Some((u, sigma, vt))
}

/// Columns `i`, `j` of `x` become `c x_i - s x_j` and `s x_i + c x_j`.
fn rotate(x: &mut Matrix, i: usize, j: usize, c: f64, s: f64) {
    for r in 0..x.nrows() {
        let (xi, xj) = (x[(r, i)], x[(r, j)]);
        x[(r, i)] = c * xi - s * xj;
        x[(r, j)] = s * xi + c * xj;
    }
}

/// Fills columns `filled..` of `u` with unit vectors orthogonal to the
/// preceding ones (Gram-Schmidt over the standard basis).
fn complete_orthonormal(u: &mut Matrix, filled: usize) {
    let m = u.nrows();
    let mut col = filled;
    let mut candidate = 0;
    while col < u.ncols() && candidate < m {
        let mut e = nalgebra::DVector::zeros(m);
        e[candidate] = 1.0;
        candidate += 1;
        for _ in 0..2 {
            for k in 0..col {
                let proj = u.column(k).dot(&e);
                e -= u.column(k) * proj;
            }
        }
        let norm = e.norm();
        if norm > 1e-8 {
            u.set_column(col, &(e / norm));
            col += 1;
        }
    }
}
