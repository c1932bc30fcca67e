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

//! Real Schur decomposition with eigenvalue reordering.

use nalgebra::{Complex, Schur};

use crate::error::{Error, Result};
use crate::Matrix;

const SCHUR_MAX_ITERS: usize = 100_000;

/// Orthogonal `q` and upper quasi-triangular `t` with `a = q * t * q^T`.
///
/// `blocks` lists the diagonal blocks as `(start, size)` with `size` 1 for a
/// real eigenvalue and 2 for a complex conjugate pair.
#[derive(Debug, Clone)]
pub struct QuasiTriangular {
    pub q: Matrix,
    pub t: Matrix,
    pub blocks: Vec<(usize, usize)>,
}

impl QuasiTriangular {
    pub fn eigenvalues(&self) -> Vec<Complex<f64>> {
        let mut out = Vec::with_capacity(self.t.nrows());
        for &(s, size) in &self.blocks {
            if size == 1 {
                out.push(Complex::new(self.t[(s, s)], 0.0));
            } else {
                let (a, b, c, d) = (self.t[(s, s)], self.t[(s, s + 1)], self.t[(s + 1, s)], self.t[(s + 1, s + 1)]);
                let (l1, l2) = eig2x2(a, b, c, d);
                out.push(l1);
                out.push(l2);
            }
        }
        out
    }

    fn block_eigenvalues(&self, idx: usize) -> Vec<Complex<f64>> {
        let (s, size) = self.blocks[idx];
        if size == 1 {
            vec![Complex::new(self.t[(s, s)], 0.0)]
        } else {
            let (l1, l2) = eig2x2(self.t[(s, s)], self.t[(s, s + 1)], self.t[(s + 1, s)], self.t[(s + 1, s + 1)]);
            vec![l1, l2]
        }
    }
}

fn eig2x2(a: f64, b: f64, c: f64, d: f64) -> (Complex<f64>, Complex<f64>) {
    let half_tr = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let disc = half_diff * half_diff + b * c;
    if disc >= 0.0 {
        let r = disc.sqrt();
        (Complex::new(half_tr + r, 0.0), Complex::new(half_tr - r, 0.0))
    } else {
        let r = (-disc).sqrt();
        (Complex::new(half_tr, r), Complex::new(half_tr, -r))
    }
}

fn detect_blocks(t: &Matrix) -> Vec<(usize, usize)> {
    let n = t.nrows();
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            blocks.push((i, 2));
            i += 2;
        } else {
            blocks.push((i, 1));
            i += 1;
        }
    }
    blocks
}

/// Real Schur form of a square matrix.
pub fn real_schur(a: &Matrix) -> Result<QuasiTriangular> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("Schur form of a {}x{} matrix", a.nrows(), a.ncols())));
    }
    super::ensure_finite(a, "schur input")?;
    let n = a.nrows();
    if n == 0 {
        return Ok(QuasiTriangular { q: Matrix::zeros(0, 0), t: Matrix::zeros(0, 0), blocks: Vec::new() });
    }
    let (q, t) = Schur::try_new(a.clone(), f64::EPSILON, SCHUR_MAX_ITERS)
        .ok_or(Error::ConvergenceFailure("real Schur decomposition"))?
        .unpack();
    let blocks = detect_blocks(&t);
    Ok(QuasiTriangular { q, t, blocks })
}

/// Real Schur form with every block whose eigenvalues satisfy `select`
/// moved to the leading positions. Returns the form and the dimension of the
/// selected invariant subspace (its basis is the first columns of `q`).
///
/// A block is selected when `select` holds for all of its eigenvalues.
pub fn ordered_schur<F>(a: &Matrix, select: F) -> Result<(QuasiTriangular, usize)>
where
    F: Fn(Complex<f64>) -> bool,
{
    let mut form = real_schur(a)?;
    let mut selected: Vec<bool> =
        (0..form.blocks.len()).map(|i| form.block_eigenvalues(i).into_iter().all(&select)).collect();

    // Bubble selected blocks upward one adjacent swap at a time.
    while let Some(i) = (0..selected.len().saturating_sub(1)).find(|&i| !selected[i] && selected[i + 1]) {
        let (j1, n1) = form.blocks[i];
        let (_, n2) = form.blocks[i + 1];
        swap_adjacent_blocks(&mut form.t, &mut form.q, j1, n1, n2)?;
        form.blocks[i] = (j1, n2);
        form.blocks[i + 1] = (j1 + n2, n1);
        selected.swap(i, i + 1);
    }

    let dim = form.blocks.iter().zip(&selected).filter(|(_, &s)| s).map(|(&(_, size), _)| size).sum();
    Ok((form, dim))
}

/// Swaps the adjacent diagonal blocks of sizes `n1` (at `j1`) and `n2` (at
/// `j1 + n1`) by an orthogonal similarity, updating `q` accordingly.
fn swap_adjacent_blocks(t: &mut Matrix, q: &mut Matrix, j1: usize, n1: usize, n2: usize) -> Result<()> {
    let n = t.nrows();
    let k = n1 + n2;
    let t11 = t.view((j1, j1), (n1, n1)).clone_owned();
    let t22 = t.view((j1 + n1, j1 + n1), (n2, n2)).clone_owned();
    let t12 = t.view((j1, j1 + n1), (n1, n2)).clone_owned();

    // T11 X - X T22 = T12, column-major vectorization.
    let dim = n1 * n2;
    let mut kron = Matrix::zeros(dim, dim);
    for c in 0..n2 {
        for r in 0..n1 {
            let row = c * n1 + r;
            for rr in 0..n1 {
                kron[(row, c * n1 + rr)] += t11[(r, rr)];
            }
            for cc in 0..n2 {
                kron[(row, cc * n1 + r)] -= t22[(cc, c)];
            }
        }
    }
    let rhs = nalgebra::DVector::from_iterator(dim, t12.iter().copied());
    let sol =
        kron.lu().solve(&rhs).ok_or_else(|| Error::SolverFailure("block swap with coincident eigenvalues".into()))?;
    let x = Matrix::from_column_slice(n1, n2, sol.as_slice());

    // Columns of [-X; I] span the invariant subspace of T22; complete to a
    // square nonsingular matrix and orthogonalize.
    let mut w = Matrix::zeros(k, k);
    w.view_mut((0, 0), (n1, n2)).copy_from(&(-&x));
    for i in 0..n2 {
        w[(n1 + i, i)] = 1.0;
    }
    for i in 0..n1 {
        w[(i, n2 + i)] = 1.0;
    }
    let qs = w.qr().q();

    let rows = t.view((j1, 0), (k, n)).clone_owned();
    t.view_mut((j1, 0), (k, n)).copy_from(&(qs.transpose() * rows));
    let cols = t.view((0, j1), (n, k)).clone_owned();
    t.view_mut((0, j1), (n, k)).copy_from(&(cols * &qs));
    let qcols = q.view((0, j1), (n, k)).clone_owned();
    q.view_mut((0, j1), (n, k)).copy_from(&(qcols * &qs));

    let scale = t.view((j1, j1), (k, k)).norm().max(f64::MIN_POSITIVE);
    let mut spill: f64 = 0.0;
    for r in (j1 + n2)..(j1 + k) {
        for c in j1..(j1 + n2) {
            spill = spill.max(t[(r, c)].abs());
            t[(r, c)] = 0.0;
        }
    }
    if spill > 1e-8 * scale {
        return Err(Error::SolverFailure(format!("ill-conditioned Schur block swap (residual {:e})", spill / scale)));
    }
    Ok(())
}
