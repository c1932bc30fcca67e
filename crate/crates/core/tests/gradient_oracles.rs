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

//! Analytic gradients against finite differences and structural identities.

mod common;

use sacopt::gradients::{actuator_terms, fd_gradient, fd_gradient_of, gradients, sensor_terms, DEFAULT_FD_STEP};
use sacopt::lqg::{lqg_performance_forms, solve_gains};
use sacopt::{rea1, Configuration, PlantModel, Side};

fn relative(a: &sacopt::Matrix, b: &sacopt::Matrix) -> f64 {
    (a - b).norm() / b.norm().max(1e-12)
}

#[test]
fn analytic_gradient_matches_central_differences() {
    let plant = rea1::plant();
    let mut rng = common::rng(7);
    for _ in 0..20 {
        let cfg = common::random_feasible(&plant, &mut rng);
        let ric = solve_gains(&plant, &cfg).unwrap();
        let g = gradients(&plant, &cfg, &ric).unwrap();
        let fb = fd_gradient(&plant, &cfg, Side::Actuator, DEFAULT_FD_STEP).unwrap();
        let fc = fd_gradient(&plant, &cfg, Side::Sensor, DEFAULT_FD_STEP).unwrap();
        assert!(relative(&g.grad_b, &fb) <= 1e-5, "B: {:e}", relative(&g.grad_b, &fb));
        assert!(relative(&g.grad_c, &fc) <= 1e-5, "C: {:e}", relative(&g.grad_c, &fc));
    }
}

#[test]
fn gradient_agreement_is_insensitive_to_step() {
    let plant = rea1::plant();
    let cfg = rea1::initial_configuration();
    let ric = solve_gains(&plant, &cfg).unwrap();
    let g = gradients(&plant, &cfg, &ric).unwrap();
    for h in [1e-4, 1e-5, 1e-6] {
        let fb = fd_gradient(&plant, &cfg, Side::Actuator, h).unwrap();
        assert!(relative(&g.grad_b, &fb) < 1e-5, "h = {h}");
    }
}

#[test]
fn cost_forms_agree_near_benchmark() {
    let plant = rea1::plant();
    let mut rng = common::rng(11);
    for _ in 0..50 {
        let cfg = common::near_benchmark(&mut rng, 0.5);
        let ric = solve_gains(&plant, &cfg).unwrap();
        let (j8, j9) = lqg_performance_forms(&plant, &cfg, &ric).unwrap();
        assert!((j8 - j9).abs() <= 1e-8 * (1.0 + j8), "{j8} {j9}");
    }
}

// tr(P Pw) depends on B only through P; its derivative is the G1 part of the
// full gradient, -2 P G1 P B R^-1.
#[test]
fn control_share_gradient() {
    let plant = rea1::plant();
    let cfg = rea1::initial_configuration();
    let ric = solve_gains(&plant, &cfg).unwrap();
    let terms = actuator_terms(&plant, &cfg.b, &ric.x, &ric.p).unwrap();
    let analytic = &ric.p * &terms.first * &ric.p * &cfg.b * plant.r_inv() * -2.0;
    let share = |plant: &PlantModel, cfg: &Configuration| -> sacopt::Result<f64> {
        Ok((plant.control_riccati(&cfg.b)? * plant.pi_w()).trace())
    };
    let fd = fd_gradient_of(&plant, &cfg, Side::Actuator, DEFAULT_FD_STEP, share).unwrap();
    assert!(relative(&analytic, &fd) < 1e-6);
}

#[test]
fn auxiliary_solutions_are_symmetric() {
    let plant = rea1::plant();
    let mut rng = common::rng(3);
    for _ in 0..10 {
        let cfg = common::random_feasible(&plant, &mut rng);
        let ric = solve_gains(&plant, &cfg).unwrap();
        let act = actuator_terms(&plant, &cfg.b, &ric.x, &ric.p).unwrap();
        let sen = sensor_terms(&plant, &cfg.c, &ric.x, &ric.p).unwrap();
        for m in [&act.first, &act.second, &sen.first, &sen.second] {
            assert_eq!(m, &m.transpose());
        }
        // G1 and H1 solve Lyapunov equations with positive definite data.
        assert!(sacopt::linalg::min_symmetric_eigenvalue(&act.first) > 0.0);
        assert!(sacopt::linalg::min_symmetric_eigenvalue(&sen.first) > 0.0);
    }
}

// Swapping the roles (A, B, C, Q, R, Pw, Pv) -> (A^T, C^T, B^T, Pw, Pv, Q, R)
// maps the problem to itself, so dJ/dC is the transpose of dJ/dB of the dual.
#[test]
fn dual_plant_swaps_gradients() {
    let plant = rea1::plant();
    let dual = PlantModel::new(
        plant.a().transpose(),
        plant.q_weight().clone(),
        plant.r_weight().clone(),
        plant.pi_w().clone(),
        plant.pi_v().clone(),
    )
    .unwrap();
    let cfg = rea1::initial_configuration();
    let dual_cfg = Configuration::new(cfg.c.transpose(), cfg.b.transpose());
    let g = gradients(&plant, &cfg, &solve_gains(&plant, &cfg).unwrap()).unwrap();
    let gd = gradients(&dual, &dual_cfg, &solve_gains(&dual, &dual_cfg).unwrap()).unwrap();
    assert!(relative(&g.grad_c.transpose(), &gd.grad_b) < 1e-9);
    assert!(relative(&g.grad_b.transpose(), &gd.grad_c) < 1e-9);
}
