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

//! Analytic gradients of the LQG cost with respect to `B` and `C`.
//!
//! With `A_K = A + B K` and `A_L = A + L C` for the optimal gains,
//!
//! ```text
//! dJ/dB = -2 P (G1 + G2) P B R^-1,   G_i A_K^T + A_K G_i + W_i = 0,
//!                                    W_1 = Pw,  W_2 = X A^T + A X
//! dJ/dC = -2 Pv^-1 C X (H1 + H2) X,  H_i A_L + A_L^T H_i + V_i = 0,
//!                                    V_1 = Q,   V_2 = P A + A^T P
//! ```
//!
//! `fd_gradient` is an independent central-difference oracle.

use crate::error::{Error, Result};
use crate::linalg::{solve_lyapunov, solve_lyapunov_transposed, symmetrize};
use crate::lqg::{evaluate_lqg, Configuration, PlantModel, RiccatiPair};
use crate::{Matrix, Side};

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct GradientPair {
    pub grad_b: Matrix,
    pub grad_c: Matrix,
}

/// Auxiliary Lyapunov solutions for one side and the matrix appearing in the
/// optimality conditions (`P (G1 + G2) P B R^-1` or `Pv^-1 C X (H1 + H2) X`).
/// The gradient is `-2 * stationarity`.
#[derive(Debug, Clone)]
pub struct SideTerms {
    pub first: Matrix,
    pub second: Matrix,
    pub stationarity: Matrix,
}

impl SideTerms {
    pub fn gradient(&self) -> Matrix {
        &self.stationarity * -2.0
    }
}

/// `G1`, `G2` and `P (G1 + G2) P B R^-1` for actuator matrix `b`.
pub fn actuator_terms(plant: &PlantModel, b: &Matrix, x: &Matrix, p: &Matrix) -> Result<SideTerms> {
    let a = plant.a();
    let pb_rinv = p * b * plant.r_inv();
    let a_cl = a - b * plant.r_inv() * b.transpose() * p;
    let g1 = solve_lyapunov(&a_cl, plant.pi_w())?;
    let g2 = solve_lyapunov(&a_cl, &symmetrize(&(x * a.transpose() + a * x)))?;
    let stationarity = p * (&g1 + &g2) * pb_rinv;
    Ok(SideTerms { first: g1, second: g2, stationarity })
}

/// `H1`, `H2` and `Pv^-1 C X (H1 + H2) X` for sensor matrix `c`.
pub fn sensor_terms(plant: &PlantModel, c: &Matrix, x: &Matrix, p: &Matrix) -> Result<SideTerms> {
    let a = plant.a();
    let a_cl = a - x * c.transpose() * plant.pi_v_inv() * c;
    let h1 = solve_lyapunov_transposed(&a_cl, plant.q_weight())?;
    let h2 = solve_lyapunov_transposed(&a_cl, &symmetrize(&(p * a + a.transpose() * p)))?;
    let stationarity = plant.pi_v_inv() * c * x * (&h1 + &h2) * x;
    Ok(SideTerms { first: h1, second: h2, stationarity })
}

/// `dJ/dB` at `cfg`.
pub fn grad_b(plant: &PlantModel, cfg: &Configuration, ric: &RiccatiPair) -> Result<Matrix> {
    plant.check_configuration(cfg)?;
    Ok(actuator_terms(plant, &cfg.b, &ric.x, &ric.p)?.gradient())
}

/// `dJ/dC` at `cfg`.
pub fn grad_c(plant: &PlantModel, cfg: &Configuration, ric: &RiccatiPair) -> Result<Matrix> {
    plant.check_configuration(cfg)?;
    Ok(sensor_terms(plant, &cfg.c, &ric.x, &ric.p)?.gradient())
}

pub fn gradients(plant: &PlantModel, cfg: &Configuration, ric: &RiccatiPair) -> Result<GradientPair> {
    Ok(GradientPair { grad_b: grad_b(plant, cfg, ric)?, grad_c: grad_c(plant, cfg, ric)? })
}

/// Central differences of the LQG cost with respect to one side:
/// `[J(Z + h E_ij) - J(Z - h E_ij)] / 2h`.
pub fn fd_gradient(plant: &PlantModel, cfg: &Configuration, side: Side, step: f64) -> Result<Matrix> {
    fd_gradient_of(plant, cfg, side, step, evaluate_lqg)
}

/// Central differences of an arbitrary configuration functional.
pub fn fd_gradient_of<F>(plant: &PlantModel, cfg: &Configuration, side: Side, step: f64, f: F) -> Result<Matrix>
where
    F: Fn(&PlantModel, &Configuration) -> Result<f64>,
{
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParameter(format!("finite-difference step {step}")));
    }
    plant.check_configuration(cfg)?;
    let target = match side {
        Side::Actuator => &cfg.b,
        Side::Sensor => &cfg.c,
    };
    let (rows, cols) = target.shape();
    let mut out = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let eval = |delta: f64| {
                let mut pert = cfg.clone();
                match side {
                    Side::Actuator => pert.b[(i, j)] += delta,
                    Side::Sensor => pert.c[(i, j)] += delta,
                }
                f(plant, &pert).map_err(|_| Error::PerturbationInfeasible { row: i, col: j })
            };
            out[(i, j)] = (eval(step)? - eval(-step)?) / (2.0 * step);
        }
    }
    Ok(out)
}
