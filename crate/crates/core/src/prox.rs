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

//! Closed-form proximal maps for the three configuration penalties.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{count_nonzero, l1_norm, svd};
use crate::{Matrix, Side};

/// Magnitude floor below which entries (and relative singular values) are
/// reported as zero.
pub const REPORT_FLOOR: f64 = 1e-4;

/// Default relative singular-value tolerance of [`rank_factorize`].
pub const DEFAULT_RANK_TOL: f64 = 1e-6;

/// Configuration penalty family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    /// Sparsity promoting: `||B||_1 + ||C||_1`.
    Spc,
    /// Low-rank promoting: `||B||_* + ||C||_*`.
    Lpc,
    /// Structure constrained: `||B||_F^2 + ||C||_F^2` with zero masks.
    Scc,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Spc => "spc",
            ScenarioKind::Lpc => "lpc",
            ScenarioKind::Scc => "scc",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "spc" => Ok(ScenarioKind::Spc),
            "lpc" => Ok(ScenarioKind::Lpc),
            "scc" => Ok(ScenarioKind::Scc),
            other => Err(Error::InvalidParameter(format!("unknown scenario `{other}`"))),
        }
    }
}

/// Penalty family, weight and (for [`ScenarioKind::Scc`]) the masks whose
/// unit entries mark forbidden actuation or sensing channels.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    kind: ScenarioKind,
    gamma: f64,
    s_b: Option<Matrix>,
    s_c: Option<Matrix>,
}

impl ScenarioSpec {
    pub fn sparse(gamma: f64) -> Result<Self> {
        Self::new(ScenarioKind::Spc, gamma, None, None)
    }

    pub fn low_rank(gamma: f64) -> Result<Self> {
        Self::new(ScenarioKind::Lpc, gamma, None, None)
    }

    pub fn structured(gamma: f64, s_b: Matrix, s_c: Matrix) -> Result<Self> {
        Self::new(ScenarioKind::Scc, gamma, Some(s_b), Some(s_c))
    }

    /// Masks must be given exactly when `kind` is [`ScenarioKind::Scc`] and
    /// contain only zeros and ones. `gamma = 0` is accepted and turns every
    /// proximal step into the identity (or the plain mask projection).
    pub fn new(kind: ScenarioKind, gamma: f64, s_b: Option<Matrix>, s_c: Option<Matrix>) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma must be finite and nonnegative, got {gamma}")));
        }
        match (kind, &s_b, &s_c) {
            (ScenarioKind::Scc, Some(sb), Some(sc)) => {
                for (name, mask) in [("s_b", sb), ("s_c", sc)] {
                    if mask.iter().any(|&v| v != 0.0 && v != 1.0) {
                        return Err(Error::InvalidParameter(format!("mask `{name}` must be binary")));
                    }
                }
            }
            (ScenarioKind::Scc, _, _) => {
                return Err(Error::InvalidParameter("structured scenario requires masks s_b and s_c".into()))
            }
            (_, None, None) => {}
            _ => return Err(Error::InvalidParameter(format!("masks are only valid for the scc scenario, not {kind}"))),
        }
        Ok(Self { kind, gamma, s_b, s_c })
    }

    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Same scenario with a different weight.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.kind, gamma, self.s_b.clone(), self.s_c.clone())
    }

    /// Forbidden-entry mask for `side` (SCC only).
    pub fn mask(&self, side: Side) -> Option<&Matrix> {
        match side {
            Side::Actuator => self.s_b.as_ref(),
            Side::Sensor => self.s_c.as_ref(),
        }
    }

    pub fn check_dimensions(&self, b_shape: (usize, usize), c_shape: (usize, usize)) -> Result<()> {
        for (side, shape) in [(Side::Actuator, b_shape), (Side::Sensor, c_shape)] {
            if let Some(mask) = self.mask(side) {
                if mask.shape() != shape {
                    return Err(Error::Dimension(format!(
                        "{side} mask is {}x{}, matrix is {}x{}",
                        mask.nrows(),
                        mask.ncols(),
                        shape.0,
                        shape.1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Convex penalty of one matrix (`l1`, nuclear or squared Frobenius norm).
    pub fn relaxed_cost(&self, z: &Matrix) -> Result<f64> {
        Ok(match self.kind {
            ScenarioKind::Spc => l1_norm(z),
            ScenarioKind::Lpc => svd(z)?.sigma.iter().sum(),
            ScenarioKind::Scc => z.norm_squared(),
        })
    }

    /// Unrelaxed cost of one matrix: nonzero count, rank, or squared
    /// Frobenius norm.
    pub fn raw_cost(&self, z: &Matrix) -> Result<f64> {
        Ok(match self.kind {
            ScenarioKind::Spc => count_nonzero(z, REPORT_FLOOR) as f64,
            ScenarioKind::Lpc => svd(z)?.rank(REPORT_FLOOR) as f64,
            ScenarioKind::Scc => z.norm_squared(),
        })
    }

    /// Zeroes the forbidden entries of `z` (identity outside SCC).
    pub fn project(&self, side: Side, z: &Matrix) -> Matrix {
        match self.mask(side) {
            Some(mask) => z.zip_map(mask, |v, s| if s == 1.0 { 0.0 } else { v }),
            None => z.clone(),
        }
    }

    /// Auxiliary update
    /// `argmin_M gamma * Phi(M) - <dual, M> + rho/2 ||primal - M||_F^2`
    /// over the scenario's constraint set.
    pub fn prox(&self, side: Side, primal: &Matrix, dual: &Matrix, rho: f64) -> Result<Matrix> {
        let shifted = || primal + dual / rho;
        match self.kind {
            ScenarioKind::Spc => Ok(soft_threshold(&shifted(), self.gamma / rho)),
            ScenarioKind::Lpc => svt(&shifted(), self.gamma / rho),
            ScenarioKind::Scc => {
                let mask = self.mask(side).expect("scc scenario carries both masks");
                Ok(masked_ridge_prox(dual, primal, rho, self.gamma, mask))
            }
        }
    }
}

/// Entrywise soft thresholding `sign(x) * max(|x| - tau, 0)`.
pub fn soft_threshold(x: &Matrix, tau: f64) -> Matrix {
    x.map(|v| {
        if v > tau {
            v - tau
        } else if v < -tau {
            v + tau
        } else {
            0.0
        }
    })
}

/// Singular value thresholding `U (S - tau I)_+ V^T`. Singular values equal
/// to `tau` map to zero.
pub fn svt(x: &Matrix, tau: f64) -> Result<Matrix> {
    let dec = svd(x)?;
    let mut out = Matrix::zeros(x.nrows(), x.ncols());
    for (i, &s) in dec.sigma.iter().enumerate() {
        let shrunk = s - tau;
        if shrunk > 0.0 {
            out += dec.u.column(i) * dec.vt.row(i) * shrunk;
        }
    }
    Ok(out)
}

/// Masked ridge update `(dual + rho * primal) / (rho + 2 gamma)` with the
/// entries where `forbidden` is one set exactly to zero.
pub fn masked_ridge_prox(dual: &Matrix, primal: &Matrix, rho: f64, gamma: f64, forbidden: &Matrix) -> Matrix {
    let denom = rho + 2.0 * gamma;
    let mut out = (dual + primal * rho) / denom;
    out.zip_apply(forbidden, |v, s| {
        if s == 1.0 {
            *v = 0.0;
        }
    });
    out
}

/// Rank factorization `b ~ b1 * b2` with inner dimension equal to the number
/// of singular values above `tol * sigma_max`; `b1 = U_r S_r`, `b2 = V_r^T`.
pub fn rank_factorize(b: &Matrix, tol: f64) -> Result<(Matrix, Matrix)> {
    let dec = svd(b)?;
    let r = dec.rank(tol);
    let mut b1 = dec.u.columns(0, r).clone_owned();
    for (j, s) in dec.sigma.iter().take(r).enumerate() {
        b1.column_mut(j).scale_mut(*s);
    }
    let b2 = dec.vt.rows(0, r).clone_owned();
    Ok((b1, b2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::dmatrix;
    use proptest::prelude::*;

    #[test]
    fn soft_threshold_cases() {
        let out = soft_threshold(&dmatrix![1.2, -0.3, -1.0], 0.5);
        assert_relative_eq!(out, dmatrix![0.7, 0.0, -0.5], epsilon = 1e-15);
        assert_eq!(soft_threshold(&Matrix::zeros(2, 3), 0.3), Matrix::zeros(2, 3));
    }

    #[test]
    fn svt_cases() {
        let x = Matrix::from_diagonal(&nalgebra::dvector![3.0, 1.0, 0.2]);
        let out = svt(&x, 0.5).unwrap();
        assert_relative_eq!(out, Matrix::from_diagonal(&nalgebra::dvector![2.5, 0.5, 0.0]), epsilon = 1e-14);
        assert_eq!(svt(&x, 3.0).unwrap().norm(), 0.0);
        assert_eq!(svt(&x, 10.0).unwrap().norm(), 0.0);
    }

    #[test]
    fn masked_ridge_cases() {
        let ones = Matrix::from_element(2, 2, 1.0);
        let forbidden = dmatrix![0.0, 1.0; 1.0, 0.0];
        let out = masked_ridge_prox(&Matrix::zeros(2, 2), &ones, 1.0, 0.5, &forbidden);
        assert_eq!(out, dmatrix![0.5, 0.0; 0.0, 0.5]);
        let proj = masked_ridge_prox(&Matrix::zeros(2, 2), &ones, 1.0, 0.0, &forbidden);
        assert_eq!(proj, dmatrix![1.0, 0.0; 0.0, 1.0]);
    }

    #[test]
    fn rank_factorize_cases() {
        let u = dmatrix![1.0; -2.0; 0.5];
        let v = dmatrix![0.3, 1.0, -1.5, 2.0];
        let outer = &u * &v;
        let (b1, b2) = rank_factorize(&outer, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(b1.ncols(), 1);
        assert_relative_eq!(&b1 * &b2, outer, epsilon = 1e-13);

        let (i1, i2) = rank_factorize(&Matrix::identity(4, 4), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(i1.ncols(), 4);
        assert_relative_eq!(&i1 * &i2, Matrix::identity(4, 4), epsilon = 1e-14);

        let (z1, z2) = rank_factorize(&Matrix::zeros(3, 2), DEFAULT_RANK_TOL).unwrap();
        assert_eq!((z1.shape(), z2.shape()), ((3, 0), (0, 2)));
        assert_eq!(&z1 * &z2, Matrix::zeros(3, 2));
    }

    #[test]
    fn scenario_validation() {
        assert!(ScenarioSpec::sparse(-1.0).is_err());
        assert!(ScenarioSpec::new(ScenarioKind::Scc, 0.1, None, None).is_err());
        assert!(ScenarioSpec::new(ScenarioKind::Spc, 0.1, Some(Matrix::zeros(1, 1)), None).is_err());
        assert!(ScenarioSpec::structured(0.1, dmatrix![0.5], dmatrix![1.0]).is_err());
        assert_eq!("LPC".parse::<ScenarioKind>().unwrap(), ScenarioKind::Lpc);
        assert!("foo".parse::<ScenarioKind>().is_err());
    }

    #[test]
    fn costs() {
        let z = dmatrix![1.0, -2.0; 0.0, 5e-5];
        assert_relative_eq!(ScenarioSpec::sparse(1.0).unwrap().relaxed_cost(&z).unwrap(), 3.00005);
        assert_eq!(ScenarioSpec::sparse(1.0).unwrap().raw_cost(&z).unwrap(), 2.0);
        let lpc = ScenarioSpec::low_rank(1.0).unwrap();
        assert_eq!(lpc.raw_cost(&dmatrix![1.0, 2.0; 2.0, 4.0]).unwrap(), 1.0);
        assert_relative_eq!(lpc.relaxed_cost(&dmatrix![3.0, 0.0; 0.0, -1.0]).unwrap(), 4.0, epsilon = 1e-14);
    }

    fn mat(rows: usize, cols: usize, v: &[f64]) -> Matrix {
        Matrix::from_row_slice(rows, cols, &v[..rows * cols])
    }

    proptest! {
        #[test]
        fn soft_threshold_nonexpansive(
            a in proptest::collection::vec(-3.0f64..3.0, 12),
            b in proptest::collection::vec(-3.0f64..3.0, 12),
            tau in 0.0f64..2.0,
        ) {
            let (x, y) = (mat(3, 4, &a), mat(3, 4, &b));
            let d = (soft_threshold(&x, tau) - soft_threshold(&y, tau)).norm();
            prop_assert!(d <= (&x - &y).norm() + 1e-14);
        }

        #[test]
        fn svt_nonexpansive(
            a in proptest::collection::vec(-3.0f64..3.0, 12),
            b in proptest::collection::vec(-3.0f64..3.0, 12),
            tau in 0.0f64..2.0,
        ) {
            let (x, y) = (mat(4, 3, &a), mat(4, 3, &b));
            let d = (svt(&x, tau).unwrap() - svt(&y, tau).unwrap()).norm();
            prop_assert!(d <= (&x - &y).norm() + 1e-12);
        }

        #[test]
        fn masked_ridge_respects_mask(
            a in proptest::collection::vec(-3.0f64..3.0, 16),
            l in proptest::collection::vec(-3.0f64..3.0, 16),
            bits in proptest::collection::vec(proptest::bool::ANY, 16),
            rho in 0.1f64..10.0,
            gamma in 0.0f64..5.0,
        ) {
            let mask = Matrix::from_iterator(4, 4, bits.iter().map(|&b| if b { 1.0 } else { 0.0 }));
            let out = masked_ridge_prox(&mat(4, 4, &l), &mat(4, 4, &a), rho, gamma, &mask);
            for (v, s) in out.iter().zip(mask.iter()) {
                if *s == 1.0 {
                    prop_assert_eq!(v.to_bits(), 0.0f64.to_bits());
                }
            }
        }

        #[test]
        fn rank_of_factor_product_is_inner_dimension(
            a in proptest::collection::vec(-2.0f64..2.0, 8),
            b in proptest::collection::vec(-2.0f64..2.0, 8),
            r in 0usize..=4,
        ) {
            // Rank-r matrix as a product of random 4xr and rx2 factors.
            let left = mat(4, 2, &a).columns(0, r.min(2)).clone_owned();
            let right = mat(2, 4, &b).rows(0, r.min(2)).clone_owned();
            let z = &left * &right;
            let (b1, b2) = rank_factorize(&z, DEFAULT_RANK_TOL).unwrap();
            let prod = &b1 * &b2;
            prop_assert!((&prod - &z).norm() <= DEFAULT_RANK_TOL * (1.0 + z.norm()));
            prop_assert_eq!(svd(&prod).unwrap().rank(DEFAULT_RANK_TOL), b1.ncols());
        }
    }
}
