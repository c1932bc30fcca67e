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

//! Plant data, feasibility tests, optimal gains and the LQG cost.

use crate::error::{Error, Result};
use crate::linalg::{
    self, ensure_finite, ensure_spd, inverse_spd, solve_care_control, solve_care_filter, HURWITZ_MARGIN,
};
use crate::Matrix;

/// Fixed data of the design problem: dynamics, noise covariances and the
/// quadratic weights. Only `B` and `C` are free.
#[derive(Debug, Clone)]
pub struct PlantModel {
    a: Matrix,
    pi_w: Matrix,
    pi_v: Matrix,
    q_weight: Matrix,
    r_weight: Matrix,
    r_inv: Matrix,
    pi_v_inv: Matrix,
}

impl PlantModel {
    /// Validates dimensions and strict positive definiteness of the
    /// covariances and weights.
    pub fn new(a: Matrix, pi_w: Matrix, pi_v: Matrix, q_weight: Matrix, r_weight: Matrix) -> Result<Self> {
        ensure_finite(&a, "a")?;
        let n = a.nrows();
        if !a.is_square() || n == 0 {
            return Err(Error::Dimension(format!("`a` must be square and nonempty, got {}x{}", a.nrows(), a.ncols())));
        }
        for (name, mat) in [("pi_w", &pi_w), ("q_weight", &q_weight)] {
            if mat.shape() != (n, n) {
                return Err(Error::Dimension(format!("`{name}` must be {n}x{n}, got {}x{}", mat.nrows(), mat.ncols())));
            }
        }
        if pi_v.nrows() == 0 || r_weight.nrows() == 0 {
            return Err(Error::Dimension("`pi_v` and `r_weight` must be nonempty".into()));
        }
        ensure_spd(&pi_w, "pi_w")?;
        ensure_spd(&pi_v, "pi_v")?;
        ensure_spd(&q_weight, "q_weight")?;
        ensure_spd(&r_weight, "r_weight")?;
        let r_inv = inverse_spd(&r_weight, "r_weight")?;
        let pi_v_inv = inverse_spd(&pi_v, "pi_v")?;
        Ok(Self { a, pi_w, pi_v, q_weight, r_weight, r_inv, pi_v_inv })
    }

    /// State dimension.
    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    /// Input dimension.
    pub fn m(&self) -> usize {
        self.r_weight.nrows()
    }

    /// Output dimension.
    pub fn q(&self) -> usize {
        self.pi_v.nrows()
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn pi_w(&self) -> &Matrix {
        &self.pi_w
    }

    pub fn pi_v(&self) -> &Matrix {
        &self.pi_v
    }

    pub fn q_weight(&self) -> &Matrix {
        &self.q_weight
    }

    pub fn r_weight(&self) -> &Matrix {
        &self.r_weight
    }

    pub fn r_inv(&self) -> &Matrix {
        &self.r_inv
    }

    pub fn pi_v_inv(&self) -> &Matrix {
        &self.pi_v_inv
    }

    pub fn check_actuator(&self, b: &Matrix) -> Result<()> {
        if b.shape() != (self.n(), self.m()) {
            return Err(Error::Dimension(format!(
                "actuator matrix must be {}x{}, got {}x{}",
                self.n(),
                self.m(),
                b.nrows(),
                b.ncols()
            )));
        }
        ensure_finite(b, "b")
    }

    pub fn check_sensor(&self, c: &Matrix) -> Result<()> {
        if c.shape() != (self.q(), self.n()) {
            return Err(Error::Dimension(format!(
                "sensor matrix must be {}x{}, got {}x{}",
                self.q(),
                self.n(),
                c.nrows(),
                c.ncols()
            )));
        }
        ensure_finite(c, "c")
    }

    pub fn check_configuration(&self, cfg: &Configuration) -> Result<()> {
        self.check_actuator(&cfg.b)?;
        self.check_sensor(&cfg.c)
    }

    /// Stabilizing solution `P` of the control Riccati equation for `b`.
    pub fn control_riccati(&self, b: &Matrix) -> Result<Matrix> {
        self.check_actuator(b)?;
        solve_care_control(&self.a, b, &self.q_weight, &self.r_weight)
    }

    /// Stabilizing solution `X` of the filter Riccati equation for `c`.
    pub fn filter_riccati(&self, c: &Matrix) -> Result<Matrix> {
        self.check_sensor(c)?;
        solve_care_filter(&self.a, c, &self.pi_w, &self.pi_v)
    }
}

/// Candidate actuator/sensor pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    /// Actuator matrix, n x m.
    pub b: Matrix,
    /// Sensor matrix, q x n.
    pub c: Matrix,
}

impl Configuration {
    pub fn new(b: Matrix, c: Matrix) -> Self {
        Self { b, c }
    }
}

/// Riccati solutions for a configuration together with the optimal gains
/// `K = -R^-1 B^T P` and `L = -X C^T Pv^-1`.
#[derive(Debug, Clone)]
pub struct RiccatiPair {
    pub x: Matrix,
    pub p: Matrix,
    pub k_opt: Matrix,
    pub l_opt: Matrix,
}

/// PBH stabilizability test of `(a, b)`.
pub fn check_stabilizable(a: &Matrix, b: &Matrix) -> bool {
    linalg_pbh(a, b)
}

/// PBH detectability test of `(a, c)`, i.e. stabilizability of `(a^T, c^T)`.
pub fn check_detectable(a: &Matrix, c: &Matrix) -> bool {
    linalg_pbh(&a.transpose(), &c.transpose())
}

fn linalg_pbh(a: &Matrix, b: &Matrix) -> bool {
    linalg::care_pbh(a, b).unwrap_or(false)
}

/// Solves both Riccati equations and forms the optimal gains.
pub fn solve_gains(plant: &PlantModel, cfg: &Configuration) -> Result<RiccatiPair> {
    plant.check_configuration(cfg)?;
    let p = plant.control_riccati(&cfg.b)?;
    let x = plant.filter_riccati(&cfg.c)?;
    Ok(gains_from(plant, cfg, x, p))
}

pub(crate) fn gains_from(plant: &PlantModel, cfg: &Configuration, x: Matrix, p: Matrix) -> RiccatiPair {
    let k_opt = -(plant.r_inv() * cfg.b.transpose() * &p);
    let l_opt = -(&x * cfg.c.transpose() * plant.pi_v_inv());
    RiccatiPair { x, p, k_opt, l_opt }
}

/// `tr(X Q) + tr(P X C^T Pv^-1 C X)`.
pub(crate) fn controller_form(plant: &PlantModel, c: &Matrix, x: &Matrix, p: &Matrix) -> f64 {
    let xq = (x * plant.q_weight()).trace();
    let xc = x * c.transpose();
    let second = (p * &xc * plant.pi_v_inv() * xc.transpose()).trace();
    xq + second
}

/// `tr(P Pw) + tr(X P B R^-1 B^T P)`.
pub(crate) fn observer_form(plant: &PlantModel, b: &Matrix, x: &Matrix, p: &Matrix) -> f64 {
    let ppw = (p * plant.pi_w()).trace();
    let pb = p * b;
    let second = (x * &pb * plant.r_inv() * pb.transpose()).trace();
    ppw + second
}

/// Both closed forms of the LQG cost, `(controller form, observer form)`.
pub fn lqg_performance_forms(plant: &PlantModel, cfg: &Configuration, ric: &RiccatiPair) -> Result<(f64, f64)> {
    plant.check_configuration(cfg)?;
    verify_riccati(plant, cfg, ric)?;
    Ok((controller_form(plant, &cfg.c, &ric.x, &ric.p), observer_form(plant, &cfg.b, &ric.x, &ric.p)))
}

/// Steady-state LQG cost `tr(X Q) + tr(P X C^T Pv^-1 C X)`.
pub fn lqg_performance(plant: &PlantModel, cfg: &Configuration, ric: &RiccatiPair) -> Result<f64> {
    let (j8, j9) = lqg_performance_forms(plant, cfg, ric)?;
    debug_assert!((j8 - j9).abs() <= 1e-8 * (1.0 + j8.abs()), "LQG cost forms disagree: {j8} vs {j9}");
    Ok(j8)
}

/// Solves the Riccati pair and returns the LQG cost.
pub fn evaluate_lqg(plant: &PlantModel, cfg: &Configuration) -> Result<f64> {
    let ric = solve_gains(plant, cfg)?;
    lqg_performance(plant, cfg, &ric)
}

/// Relative residual accepted by [`lqg_performance_forms`].
const RICCATI_CHECK_TOL: f64 = 1e-8;

fn verify_riccati(plant: &PlantModel, cfg: &Configuration, ric: &RiccatiPair) -> Result<()> {
    let n = plant.n();
    if ric.x.shape() != (n, n) || ric.p.shape() != (n, n) {
        return Err(Error::InconsistentInput("Riccati solutions have wrong dimensions".into()));
    }
    let a = plant.a();
    let s = &cfg.b * plant.r_inv() * cfg.b.transpose();
    let t = cfg.c.transpose() * plant.pi_v_inv() * &cfg.c;
    let res_p = (a.transpose() * &ric.p + &ric.p * a - &ric.p * &s * &ric.p + plant.q_weight()).norm();
    let res_x = (a * &ric.x + &ric.x * a.transpose() - &ric.x * &t * &ric.x + plant.pi_w()).norm();
    if res_p > RICCATI_CHECK_TOL * linalg::riccati_residual_scale(a, &s, plant.q_weight(), &ric.p) {
        return Err(Error::InconsistentInput(format!("control Riccati residual {res_p:e}")));
    }
    if res_x > RICCATI_CHECK_TOL * linalg::riccati_residual_scale(a, &t, plant.pi_w(), &ric.x) {
        return Err(Error::InconsistentInput(format!("filter Riccati residual {res_x:e}")));
    }
    Ok(())
}

/// Closed-loop matrices `(A + B K, A + L C)`.
pub fn closed_loops(plant: &PlantModel, cfg: &Configuration, ric: &RiccatiPair) -> (Matrix, Matrix) {
    (plant.a() + &cfg.b * &ric.k_opt, plant.a() + &ric.l_opt * &cfg.c)
}

/// True when both closed loops are Hurwitz with the standard margin.
pub fn closed_loops_hurwitz(plant: &PlantModel, cfg: &Configuration, ric: &RiccatiPair) -> bool {
    let (ctrl, obs) = closed_loops(plant, cfg, ric);
    [ctrl, obs].iter().all(|m| linalg::spectral_abscissa(m).map(|s| s < -HURWITZ_MARGIN).unwrap_or(false))
}
