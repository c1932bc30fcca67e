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

//! ADMM solver for the configuration subproblems and the outer alternation
//! over the actuator and sensor matrices.
//!
//! For the actuator side the subproblem is
//! `min_B J(B, C_h) + gamma Phi(M)` subject to `B = M`, solved with the scaled
//! iterations
//!
//! ```text
//! B+ = argmin_B J(B, C_h) + <L, B> + rho/2 ||B - M||^2     (gradient descent)
//! M+ = prox_{gamma Phi / rho}(B+ + L / rho)                 (closed form)
//! L+ = L + rho (B+ - M+)
//! ```
//!
//! and symmetrically for the sensor side.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::gradients::{actuator_terms, sensor_terms};
use crate::linalg::inner;
use crate::lqg::{controller_form, observer_form, solve_gains, Configuration, PlantModel};
use crate::prox::ScenarioSpec;
use crate::stationarity::{check_general, StationarityReport, CERTIFICATION_TOL};
use crate::{Matrix, Side};

/// Solver parameters. The defaults reproduce the standard benchmark setup.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmParams {
    pub rho: f64,
    /// Armijo sufficient-decrease constant.
    pub alpha: f64,
    /// Backtracking shrink factor.
    pub beta: f64,
    pub eps_pri: f64,
    pub eps_dual: f64,
    pub eps_main: f64,
    pub max_inner_iters: usize,
    pub max_admm_iters: usize,
    pub max_outer_iters: usize,
    /// Relative gradient-norm exit test of the smooth step.
    pub grad_tol: f64,
    /// Line-search step below which the descent gives up.
    pub min_step: f64,
    /// Tolerance of the final stationarity certificate.
    pub certification_tol: f64,
}

impl Default for AdmmParams {
    fn default() -> Self {
        Self {
            rho: 1.0,
            alpha: 0.5,
            beta: 0.5,
            eps_pri: 1e-5,
            eps_dual: 1e-5,
            eps_main: 1e-5,
            max_inner_iters: 500,
            max_admm_iters: 200,
            max_outer_iters: 50,
            grad_tol: 1e-6,
            min_step: 1e-14,
            certification_tol: CERTIFICATION_TOL,
        }
    }
}

impl AdmmParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rho", self.rho),
            ("eps_pri", self.eps_pri),
            ("eps_dual", self.eps_dual),
            ("eps_main", self.eps_main),
            ("grad_tol", self.grad_tol),
            ("min_step", self.min_step),
            ("certification_tol", self.certification_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("`{name}` must be positive, got {v}")));
            }
        }
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidParameter(format!("`{name}` must lie in (0, 1), got {v}")));
            }
        }
        for (name, v) in [
            ("max_inner_iters", self.max_inner_iters),
            ("max_admm_iters", self.max_admm_iters),
            ("max_outer_iters", self.max_outer_iters),
        ] {
            if v == 0 {
                return Err(Error::InvalidParameter(format!("`{name}` must be at least 1")));
            }
        }
        Ok(())
    }
}

/// ADMM iterate for one side: primal `B` (or `C`), auxiliary `M` (or `N`)
/// and scaled-free dual `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState {
    pub primal: Matrix,
    pub auxiliary: Matrix,
    pub dual: Matrix,
    pub iter: usize,
}

impl AdmmState {
    pub fn new(primal: Matrix, auxiliary: Matrix, dual: Matrix) -> Result<Self> {
        if primal.shape() != auxiliary.shape() || primal.shape() != dual.shape() {
            return Err(Error::Dimension("ADMM state matrices must share dimensions".into()));
        }
        Ok(Self { primal, auxiliary, dual, iter: 0 })
    }
}

/// The smooth part `J(., fixed)` of one subproblem. The Riccati solution of
/// the fixed side does not depend on the optimized matrix, so it is solved
/// once.
struct SmoothBlock<'a> {
    plant: &'a PlantModel,
    side: Side,
    fixed: &'a Matrix,
    /// `X` when optimizing `B`, `P` when optimizing `C`.
    fixed_riccati: Matrix,
}

impl<'a> SmoothBlock<'a> {
    fn new(plant: &'a PlantModel, side: Side, fixed: &'a Matrix) -> Result<Self> {
        let fixed_riccati = match side {
            Side::Actuator => {
                plant.check_sensor(fixed)?;
                plant.filter_riccati(fixed)?
            }
            Side::Sensor => {
                plant.check_actuator(fixed)?;
                plant.control_riccati(fixed)?
            }
        };
        Ok(Self { plant, side, fixed, fixed_riccati })
    }

    fn check_shape(&self, z: &Matrix) -> Result<()> {
        match self.side {
            Side::Actuator => self.plant.check_actuator(z),
            Side::Sensor => self.plant.check_sensor(z),
        }
    }

    /// Cost and varying Riccati solution, or `None` outside the feasible set.
    fn cost(&self, z: &Matrix) -> Option<(f64, Matrix)> {
        if z.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let (value, varying) = match self.side {
            Side::Actuator => {
                let p = self.plant.control_riccati(z).ok()?;
                (controller_form(self.plant, self.fixed, &self.fixed_riccati, &p), p)
            }
            Side::Sensor => {
                let x = self.plant.filter_riccati(z).ok()?;
                (observer_form(self.plant, self.fixed, &x, &self.fixed_riccati), x)
            }
        };
        value.is_finite().then_some((value, varying))
    }

    fn gradient(&self, z: &Matrix, varying: &Matrix) -> Result<Matrix> {
        Ok(match self.side {
            Side::Actuator => actuator_terms(self.plant, z, &self.fixed_riccati, varying)?.gradient(),
            Side::Sensor => sensor_terms(self.plant, z, varying, &self.fixed_riccati)?.gradient(),
        })
    }
}

/// Augmented objective `J(Z) + <L, Z> + rho/2 ||Z - M||^2` around a block.
struct Augmented<'a, 'b> {
    block: &'b SmoothBlock<'a>,
    auxiliary: &'b Matrix,
    dual: &'b Matrix,
    rho: f64,
}

impl Augmented<'_, '_> {
    fn value(&self, z: &Matrix) -> Option<(f64, Matrix)> {
        let (j, varying) = self.block.cost(z)?;
        let f = j + inner(self.dual, z) + 0.5 * self.rho * (z - self.auxiliary).norm_squared();
        f.is_finite().then_some((f, varying))
    }

    fn gradient(&self, z: &Matrix, varying: &Matrix) -> Result<Matrix> {
        Ok(self.block.gradient(z, varying)? + self.dual + (z - self.auxiliary) * self.rho)
    }
}

/// An accepted line-search step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: f64,
    pub f_before: f64,
    pub f_after: f64,
    pub grad_norm_sq: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescentOutcome {
    pub iterate: Matrix,
    pub value: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    /// True when the gradient test was met before the iteration cap.
    pub converged: bool,
    pub steps: Vec<StepRecord>,
}

/// Backtracking gradient descent on `J(., fixed) + <L, .> + rho/2 ||. - M||^2`
/// starting from `state.primal`, with auxiliary `state.auxiliary` and dual
/// `state.dual`. Trial points outside the feasible set count as `+inf`.
pub fn smooth_block_descent(
    plant: &PlantModel,
    fixed: &Matrix,
    state: &AdmmState,
    params: &AdmmParams,
    side: Side,
) -> Result<DescentOutcome> {
    params.validate()?;
    let block = SmoothBlock::new(plant, side, fixed)?;
    descend(&block, state, params)
}

fn descend(block: &SmoothBlock<'_>, state: &AdmmState, params: &AdmmParams) -> Result<DescentOutcome> {
    block.check_shape(&state.primal)?;
    let objective = Augmented { block, auxiliary: &state.auxiliary, dual: &state.dual, rho: params.rho };
    let mut z = state.primal.clone();
    let (mut f, mut varying) = objective.value(&z).ok_or(Error::InfeasibleStart(block.side))?;
    let mut steps = Vec::new();
    for iteration in 0..params.max_inner_iters {
        let g = objective.gradient(&z, &varying)?;
        let g_sq = g.norm_squared();
        if g_sq.sqrt() <= params.grad_tol * (1.0 + f.abs()) {
            return Ok(DescentOutcome {
                iterate: z,
                value: f,
                grad_norm: g_sq.sqrt(),
                iterations: iteration,
                converged: true,
                steps,
            });
        }
        let mut t = 1.0;
        loop {
            let trial = &z - &g * t;
            if let Some((f_trial, v_trial)) = objective.value(&trial) {
                if f_trial <= f - params.alpha * t * g_sq {
                    steps.push(StepRecord { step: t, f_before: f, f_after: f_trial, grad_norm_sq: g_sq });
                    z = trial;
                    f = f_trial;
                    varying = v_trial;
                    break;
                }
            }
            t *= params.beta;
            if t < params.min_step {
                return Err(Error::LineSearchStall { iteration, step: t });
            }
        }
    }
    let grad_norm = objective.gradient(&z, &varying)?.norm();
    let converged = grad_norm <= params.grad_tol * (1.0 + f.abs());
    Ok(DescentOutcome { iterate: z, value: f, grad_norm, iterations: params.max_inner_iters, converged, steps })
}

/// Residual history of one subproblem solve.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmTrace {
    pub side: Side,
    /// `||Z^{k+1} - M^{k+1}||_F` per iteration.
    pub primal_residuals: Vec<f64>,
    /// `rho ||M^{k+1} - M^k||_F` per iteration.
    pub dual_residuals: Vec<f64>,
    /// Gradient-descent iterations spent in each smooth step.
    pub inner_iterations: Vec<usize>,
    /// False when the iteration cap was hit.
    pub converged: bool,
}

impl AdmmTrace {
    pub fn iterations(&self) -> usize {
        self.primal_residuals.len()
    }
}

/// Solves one side's subproblem from `init` with the other side held at
/// `fixed`, returning the final auxiliary iterate.
pub fn admm_subproblem(
    plant: &PlantModel,
    fixed: &Matrix,
    init: &Matrix,
    scenario: &ScenarioSpec,
    params: &AdmmParams,
    side: Side,
) -> Result<(Matrix, AdmmTrace)> {
    params.validate()?;
    let block = SmoothBlock::new(plant, side, fixed)?;
    block.check_shape(init)?;
    if let Some(mask) = scenario.mask(side) {
        if mask.shape() != init.shape() {
            return Err(Error::Dimension(format!("{side} mask does not match the matrix shape")));
        }
    }
    let mut state =
        AdmmState::new(init.clone(), scenario.project(side, init), Matrix::zeros(init.nrows(), init.ncols()))?;
    let mut trace = AdmmTrace {
        side,
        primal_residuals: Vec::new(),
        dual_residuals: Vec::new(),
        inner_iterations: Vec::new(),
        converged: false,
    };
    while state.iter < params.max_admm_iters {
        let step = descend(&block, &state, params)?;
        let primal = step.iterate;
        let auxiliary = scenario.prox(side, &primal, &state.dual, params.rho)?;
        let dual = &state.dual + (&primal - &auxiliary) * params.rho;
        state.iter += 1;
        if [&primal, &auxiliary, &dual].iter().any(|m| m.iter().any(|v| !v.is_finite())) {
            return Err(Error::NonFiniteIterate { side, iteration: state.iter });
        }
        let r_pri = (&primal - &auxiliary).norm();
        let r_dual = params.rho * (&auxiliary - &state.auxiliary).norm();
        trace.primal_residuals.push(r_pri);
        trace.dual_residuals.push(r_dual);
        trace.inner_iterations.push(step.iterations);
        state.primal = primal;
        state.auxiliary = auxiliary;
        state.dual = dual;
        if r_pri <= params.eps_pri && r_dual <= params.eps_dual {
            trace.converged = true;
            break;
        }
    }
    if block.cost(&state.auxiliary).is_none() {
        let reason = match side {
            Side::Actuator => plant.control_riccati(&state.auxiliary).err(),
            Side::Sensor => plant.filter_riccati(&state.auxiliary).err(),
        }
        .unwrap_or(Error::NonFinite("auxiliary iterate"));
        return Err(Error::InfeasibleIterate { side, reason: Box::new(reason) });
    }
    Ok((state.auxiliary, trace))
}

/// One row of the outer convergence trace.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterRecord {
    pub iteration: usize,
    pub j_total: f64,
    pub j_lqg: f64,
    /// Convex penalty `Phi(B) + Phi(C)` without the weight.
    pub j_sac_relaxed: f64,
    /// Nonzero count, rank sum, or Frobenius cost of the iterate.
    pub j_sac_raw: f64,
}

/// Outcome of [`alternate`].
#[derive(Debug, Clone)]
pub struct RunReport {
    /// Row 0 is the initial configuration, row `h` the pair after outer
    /// iteration `h`.
    pub outer_trace: Vec<OuterRecord>,
    /// `J_total(B_{h+1}, C_h)` after each actuator update.
    pub half_step_costs: Vec<f64>,
    pub admm_traces: Vec<AdmmTrace>,
    pub final_cfg: Configuration,
    pub stationarity: StationarityReport,
    pub wall_time: f64,
    pub outer_iterations: usize,
    /// False when the outer iteration cap was reached.
    pub converged: bool,
}

impl RunReport {
    pub fn final_record(&self) -> &OuterRecord {
        self.outer_trace.last().expect("trace holds the initial row")
    }

    /// Checks `J(B_{h+1}, C_h) <= J(B_h, C_h)` and
    /// `J(B_{h+1}, C_{h+1}) <= J(B_{h+1}, C_h)` up to `slack`.
    pub fn descent_chain_holds(&self, slack: f64) -> bool {
        self.half_step_costs.iter().enumerate().all(|(h, &half)| {
            let before = self.outer_trace[h].j_total;
            let after = self.outer_trace[h + 1].j_total;
            half <= before + slack && after <= half + slack
        })
    }
}

/// Evaluates the trace quantities at `cfg`.
pub fn evaluate_record(
    plant: &PlantModel,
    cfg: &Configuration,
    scenario: &ScenarioSpec,
    iteration: usize,
) -> Result<OuterRecord> {
    let ric = solve_gains(plant, cfg)?;
    let j_lqg = controller_form(plant, &cfg.c, &ric.x, &ric.p);
    let j_sac_relaxed = scenario.relaxed_cost(&cfg.b)? + scenario.relaxed_cost(&cfg.c)?;
    let j_sac_raw = scenario.raw_cost(&cfg.b)? + scenario.raw_cost(&cfg.c)?;
    Ok(OuterRecord { iteration, j_total: j_lqg + scenario.gamma() * j_sac_relaxed, j_lqg, j_sac_relaxed, j_sac_raw })
}

/// Alternates actuator and sensor subproblems from `cfg0` until
/// `||B_{h+1} - B_h||_F + ||C_{h+1} - C_h||_F <= eps_main`.
///
/// Hitting `max_outer_iters` is not an error; the report is returned with
/// `converged == false`.
pub fn alternate(
    plant: &PlantModel,
    cfg0: &Configuration,
    scenario: &ScenarioSpec,
    params: &AdmmParams,
) -> Result<RunReport> {
    let started = Instant::now();
    params.validate()?;
    plant.check_configuration(cfg0)?;
    scenario.check_dimensions(cfg0.b.shape(), cfg0.c.shape())?;
    let initial = evaluate_record(plant, cfg0, scenario, 0).map_err(|e| Error::InfeasibleInit(Box::new(e)))?;

    let mut cfg = cfg0.clone();
    let mut outer_trace = vec![initial];
    let mut half_step_costs = Vec::new();
    let mut admm_traces = Vec::new();
    let mut converged = false;
    let mut outer_iterations = 0;
    for h in 1..=params.max_outer_iters {
        let (b_next, trace_b) = admm_subproblem(plant, &cfg.c, &cfg.b, scenario, params, Side::Actuator)?;
        admm_traces.push(trace_b);
        let half = Configuration::new(b_next, cfg.c.clone());
        half_step_costs.push(evaluate_record(plant, &half, scenario, h)?.j_total);

        let (c_next, trace_c) = admm_subproblem(plant, &half.b, &cfg.c, scenario, params, Side::Sensor)?;
        admm_traces.push(trace_c);
        let next = Configuration::new(half.b, c_next);
        outer_trace.push(evaluate_record(plant, &next, scenario, h)?);

        let change = (&next.b - &cfg.b).norm() + (&next.c - &cfg.c).norm();
        cfg = next;
        outer_iterations = h;
        if change <= params.eps_main {
            converged = true;
            break;
        }
    }

    let ric = solve_gains(plant, &cfg)?;
    let stationarity = check_general(plant, &cfg, &ric, scenario, params.certification_tol)?;
    Ok(RunReport {
        outer_trace,
        half_step_costs,
        admm_traces,
        final_cfg: cfg,
        stationarity,
        wall_time: started.elapsed().as_secs_f64(),
        outer_iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    fn scalar_plant() -> PlantModel {
        let one = || dmatrix![1.0];
        PlantModel::new(dmatrix![0.0], one(), one(), one(), one()).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(AdmmParams::default().validate().is_ok());
        let bad = [
            AdmmParams { rho: 0.0, ..Default::default() },
            AdmmParams { alpha: 1.0, ..Default::default() },
            AdmmParams { beta: 0.0, ..Default::default() },
            AdmmParams { eps_main: -1.0, ..Default::default() },
            AdmmParams { max_admm_iters: 0, ..Default::default() },
        ];
        for p in bad {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }

    // With a = 0 and unit weights J(b, c=1) = 1 + 1/b, so the smooth step
    // minimizes 1/b + rho/2 (b - m)^2 over b > 0.
    #[test]
    fn scalar_smooth_step_matches_calculus() {
        let plant = scalar_plant();
        let params = AdmmParams { rho: 2.0, ..Default::default() };
        let state = AdmmState::new(dmatrix![1.5], dmatrix![0.0], dmatrix![0.0]).unwrap();
        let out = smooth_block_descent(&plant, &dmatrix![1.0], &state, &params, Side::Actuator).unwrap();
        assert!(out.converged);
        // Stationary point: -1/b^2 + 2 b = 0, so b = 2^(-1/3).
        assert!((out.iterate[(0, 0)] - 2f64.powf(-1.0 / 3.0)).abs() < 1e-6);
        for s in &out.steps {
            assert!(s.f_after <= s.f_before - params.alpha * s.step * s.grad_norm_sq);
        }
    }

    #[test]
    fn infeasible_start_is_reported() {
        let plant = scalar_plant();
        let state = AdmmState::new(dmatrix![0.0], dmatrix![0.0], dmatrix![0.0]).unwrap();
        let err = smooth_block_descent(&plant, &dmatrix![1.0], &state, &AdmmParams::default(), Side::Actuator);
        assert_eq!(err.unwrap_err(), Error::InfeasibleStart(Side::Actuator));
    }

    #[test]
    fn zero_weight_subproblem_collapses() {
        let plant = scalar_plant();
        let scenario = ScenarioSpec::sparse(0.0).unwrap();
        let params = AdmmParams { max_admm_iters: 3, ..Default::default() };
        let (m, trace) =
            admm_subproblem(&plant, &dmatrix![1.0], &dmatrix![1.0], &scenario, &params, Side::Sensor).unwrap();
        // The prox is the identity, so B = M after every update and the dual
        // stays at zero; J(1, c) = 1 + 1/c keeps decreasing in c.
        assert_eq!(trace.iterations(), 3);
        assert!(trace.primal_residuals.iter().all(|&r| r == 0.0));
        assert!(m[(0, 0)] > 1.0);
    }

    #[test]
    fn scalar_sparse_alternation_is_stationary() {
        // Minimizes 1/b + 1/c + gamma (|b| + |c|): optimum b = c = 1/sqrt(gamma).
        let plant = scalar_plant();
        let scenario = ScenarioSpec::sparse(0.25).unwrap();
        let cfg0 = Configuration::new(dmatrix![1.0], dmatrix![3.0]);
        let report = alternate(&plant, &cfg0, &scenario, &AdmmParams::default()).unwrap();
        assert!(report.converged);
        assert!(report.stationarity.passed, "{:?}", report.stationarity);
        assert!((report.final_cfg.b[(0, 0)] - 2.0).abs() < 1e-3);
        assert!((report.final_cfg.c[(0, 0)] - 2.0).abs() < 1e-3);
        assert!(report.descent_chain_holds(1e-8));
        assert!((report.final_record().j_total - 2.0).abs() < 1e-6);
    }

    #[test]
    fn alternate_rejects_infeasible_init() {
        let plant = PlantModel::new(dmatrix![1.0], dmatrix![1.0], dmatrix![1.0], dmatrix![1.0], dmatrix![1.0]).unwrap();
        let cfg0 = Configuration::new(dmatrix![0.0], dmatrix![1.0]);
        let err = alternate(&plant, &cfg0, &ScenarioSpec::sparse(0.1).unwrap(), &AdmmParams::default()).unwrap_err();
        assert_eq!(err, Error::InfeasibleInit(Box::new(Error::NotStabilizable)));
    }
}
