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

//! Bartels-Stewart solver for continuous Lyapunov equations.

use nalgebra::DVector;

use super::schur::{real_schur, QuasiTriangular};
use super::{ensure_finite, relative_asymmetry, symmetrize, HURWITZ_MARGIN};
use crate::error::{Error, Result};
use crate::Matrix;

/// Solves `G * a_cl^T + a_cl * G + w = 0` for symmetric `G`.
///
/// `a_cl` must be Hurwitz (spectral abscissa below `-HURWITZ_MARGIN`) and
/// `w` symmetric to a relative tolerance of `1e-10`.
pub fn solve_lyapunov(a_cl: &Matrix, w: &Matrix) -> Result<Matrix> {
    let n = a_cl.nrows();
    if !a_cl.is_square() || w.shape() != (n, n) {
        return Err(Error::Dimension(format!(
            "Lyapunov equation with a {}x{} state matrix and a {}x{} right-hand side",
            a_cl.nrows(),
            a_cl.ncols(),
            w.nrows(),
            w.ncols()
        )));
    }
    ensure_finite(a_cl, "lyapunov state matrix")?;
    ensure_finite(w, "lyapunov right-hand side")?;
    let asymmetry = relative_asymmetry(w);
    if asymmetry > 1e-10 {
        return Err(Error::NonSymmetric { asymmetry });
    }

    let form = real_schur(a_cl)?;
    let abscissa = form.eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    if abscissa >= -HURWITZ_MARGIN {
        return Err(Error::NotHurwitz { abscissa });
    }

    let w_hat = form.q.transpose() * w * &form.q;
    let y = solve_quasi_triangular(&form, &(-w_hat));
    Ok(symmetrize(&(&form.q * y * form.q.transpose())))
}

/// Solves `H * a_cl + a_cl^T * H + w = 0` for symmetric `H`.
pub fn solve_lyapunov_transposed(a_cl: &Matrix, w: &Matrix) -> Result<Matrix> {
    solve_lyapunov(&a_cl.transpose(), w)
}

/// Solves `T Y + Y T^T = c` by block back substitution on the quasi
/// triangular Schur factor.
fn solve_quasi_triangular(form: &QuasiTriangular, c: &Matrix) -> Matrix {
    let t = &form.t;
    let n = t.nrows();
    let mut y = Matrix::zeros(n, n);

    for &(si, pi) in form.blocks.iter().rev() {
        for &(sj, pj) in form.blocks.iter().rev() {
            let ei = si + pi;
            let ej = sj + pj;
            let mut rhs = c.view((si, sj), (pi, pj)).clone_owned();
            if ei < n {
                rhs -= t.view((si, ei), (pi, n - ei)) * y.view((ei, sj), (n - ei, pj));
            }
            if ej < n {
                rhs -= y.view((si, ej), (pi, n - ej)) * t.view((sj, ej), (pj, n - ej)).transpose();
            }

            let tii = t.view((si, si), (pi, pi));
            let tjj = t.view((sj, sj), (pj, pj));
            let dim = pi * pj;
            let mut kron = Matrix::zeros(dim, dim);
            for col in 0..pj {
                for row in 0..pi {
                    let idx = col * pi + row;
                    for rr in 0..pi {
                        kron[(idx, col * pi + rr)] += tii[(row, rr)];
                    }
                    for cc in 0..pj {
                        kron[(idx, cc * pi + row)] += tjj[(col, cc)];
                    }
                }
            }
            let b = DVector::from_iterator(dim, rhs.iter().copied());
            // Eigenvalue sums are bounded away from zero for Hurwitz T, so
            // the small system is nonsingular.
            let z = kron.lu().solve(&b).unwrap_or_else(|| DVector::zeros(dim));
            y.view_mut((si, sj), (pi, pj)).copy_from_slice(z.as_slice());
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::dmatrix;
    use proptest::prelude::*;

    fn residual(a: &Matrix, g: &Matrix, w: &Matrix) -> f64 {
        (g * a.transpose() + a * g + w).norm()
    }

    /// Dense Kronecker solve of `(I (x) A + A (x) I) vec(G) = -vec(W)`.
    fn kronecker_oracle(a: &Matrix, w: &Matrix) -> Matrix {
        let n = a.nrows();
        let i = Matrix::identity(n, n);
        let k = i.kronecker(a) + a.kronecker(&i);
        let rhs = -DVector::from_column_slice(w.as_slice());
        let v = k.lu().solve(&rhs).unwrap();
        Matrix::from_column_slice(n, n, v.as_slice())
    }

    #[test]
    fn negative_identity() {
        let g = solve_lyapunov(&(-Matrix::identity(3, 3)), &Matrix::identity(3, 3)).unwrap();
        assert_relative_eq!(g, Matrix::identity(3, 3) * 0.5, epsilon = 1e-15);
    }

    #[test]
    fn decoupled_diagonal() {
        let g = solve_lyapunov(&dmatrix![-1.0, 0.0; 0.0, -2.0], &dmatrix![4.0, 0.0; 0.0, 4.0]).unwrap();
        assert_relative_eq!(g, dmatrix![2.0, 0.0; 0.0, 1.0], epsilon = 1e-14);
    }

    #[test]
    fn matches_kronecker_on_complex_spectrum() {
        let a = dmatrix![
            -0.5, 3.0, 0.2, 0.0;
            -3.0, -0.5, 0.1, 0.4;
            0.3, 0.0, -1.0, 2.0;
            0.0, -0.2, -2.0, -1.5
        ];
        let w = dmatrix![
            2.0, 0.3, -0.1, 0.0;
            0.3, 1.0, 0.2, 0.5;
            -0.1, 0.2, 3.0, -0.4;
            0.0, 0.5, -0.4, 1.5
        ];
        let g = solve_lyapunov(&a, &w).unwrap();
        assert_relative_eq!(g, kronecker_oracle(&a, &w), epsilon = 1e-12);
        assert!(residual(&a, &g, &w) <= 1e-9 * (1.0 + w.norm()));
    }

    #[test]
    fn transposed_variant() {
        let a = dmatrix![-1.0, 5.0; 0.0, -3.0];
        let w = dmatrix![1.0, 0.2; 0.2, 2.0];
        let h = solve_lyapunov_transposed(&a, &w).unwrap();
        assert!((&h * &a + a.transpose() * &h + &w).norm() < 1e-13);
    }

    #[test]
    fn rejects_unstable_and_marginal() {
        let w = Matrix::identity(2, 2);
        assert!(matches!(solve_lyapunov(&dmatrix![0.5, 0.0; 0.0, -1.0], &w), Err(Error::NotHurwitz { .. })));
        assert!(matches!(solve_lyapunov(&dmatrix![0.0, 1.0; -1.0, 0.0], &w), Err(Error::NotHurwitz { .. })));
        assert!(matches!(solve_lyapunov(&dmatrix![-1e-9, 0.0; 0.0, -1.0], &w), Err(Error::NotHurwitz { .. })));
    }

    #[test]
    fn rejects_nonsymmetric_rhs() {
        let err = solve_lyapunov(&(-Matrix::identity(2, 2)), &dmatrix![1.0, 1.0; 0.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::NonSymmetric { .. }));
    }

    fn stable_matrix(n: usize, entries: &[f64]) -> Matrix {
        let m = Matrix::from_row_slice(n, n, &entries[..n * n]);
        // Shift the spectral abscissa to -0.5.
        let abscissa = super::super::spectral_abscissa(&m).unwrap();
        m - Matrix::identity(n, n) * (abscissa + 0.5)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn agrees_with_kronecker_oracle(
            n in 1usize..=6,
            a_entries in proptest::collection::vec(-2.0f64..2.0, 36),
            w_entries in proptest::collection::vec(-1.0f64..1.0, 36),
        ) {
            let a = stable_matrix(n, &a_entries);
            let wr = Matrix::from_row_slice(n, n, &w_entries[..n * n]);
            let w = &wr + wr.transpose();
            let g = solve_lyapunov(&a, &w).unwrap();
            let oracle = kronecker_oracle(&a, &w);
            prop_assert!((&g - &oracle).norm() <= 1e-8 * oracle.norm().max(1e-300));
            prop_assert!(residual(&a, &g, &w) <= 1e-9 * (1.0 + w.norm()));
            prop_assert_eq!(&g, &g.transpose());
        }
    }
}
