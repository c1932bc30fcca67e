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

//! First-order optimality certificates for the three scenarios.
//!
//! Each checker works with the matrices `Z_B = P (G1 + G2) P B R^-1` and
//! `Z_C = Pv^-1 C X (H1 + H2) X`, so that the LQG gradients are `-2 Z_B` and
//! `-2 Z_C`.

use crate::error::{Error, Result};
use crate::gradients::{actuator_terms, sensor_terms};
use crate::linalg::{spectral_norm, svd};
use crate::lqg::{Configuration, PlantModel, RiccatiPair};
use crate::prox::{ScenarioKind, ScenarioSpec, REPORT_FLOOR};
use crate::{Matrix, Side};

/// Default absolute tolerance applied to every condition.
pub const CERTIFICATION_TOL: f64 = 1e-3;

/// One evaluated condition. `value` is the raw quantity (a norm or an
/// entry), `violation` its distance to the admissible set.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionResidual {
    pub side: Side,
    pub condition: &'static str,
    pub value: f64,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationarityReport {
    pub scenario: ScenarioKind,
    pub tol: f64,
    pub max_violation_b: f64,
    pub max_violation_c: f64,
    pub passed: bool,
    pub details: Vec<ConditionResidual>,
}

impl StationarityReport {
    fn from_details(scenario: ScenarioKind, tol: f64, details: Vec<ConditionResidual>) -> Self {
        let worst = |side| details.iter().filter(|d| d.side == side).map(|d| d.violation).fold(0.0f64, f64::max);
        let max_violation_b = worst(Side::Actuator);
        let max_violation_c = worst(Side::Sensor);
        let nan = details.iter().any(|d| !d.violation.is_finite());
        Self {
            scenario,
            tol,
            max_violation_b,
            max_violation_c,
            passed: !nan && max_violation_b.max(max_violation_c) <= tol,
            details,
        }
    }

    pub fn max_violation(&self) -> f64 {
        self.max_violation_b.max(self.max_violation_c)
    }

    /// Raw value of the first condition with this name on `side`.
    pub fn value(&self, side: Side, condition: &str) -> Option<f64> {
        self.details.iter().find(|d| d.side == side && d.condition == condition).map(|d| d.value)
    }
}

/// `(Z_B, Z_C)` at `cfg`.
pub fn stationarity_matrices(plant: &PlantModel, cfg: &Configuration, ric: &RiccatiPair) -> Result<(Matrix, Matrix)> {
    plant.check_configuration(cfg)?;
    let zb = actuator_terms(plant, &cfg.b, &ric.x, &ric.p)?.stationarity;
    let zc = sensor_terms(plant, &cfg.c, &ric.x, &ric.p)?.stationarity;
    Ok((zb, zc))
}

fn check_tol(tol: f64) -> Result<()> {
    if tol >= 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("certification tolerance {tol}")))
    }
}

/// Sparse scenario: `Z_ij = (gamma/2) sign(B_ij)` on the support and
/// `|Z_ij| <= gamma/2` elsewhere, for both sides.
pub fn check_spc(
    plant: &PlantModel,
    cfg: &Configuration,
    ric: &RiccatiPair,
    gamma: f64,
    tol: f64,
) -> Result<StationarityReport> {
    check_tol(tol)?;
    let (zb, zc) = stationarity_matrices(plant, cfg, ric)?;
    let half = gamma / 2.0;
    let mut details = Vec::new();
    for (side, z, w) in [(Side::Actuator, &zb, &cfg.b), (Side::Sensor, &zc, &cfg.c)] {
        let (mut support, mut off) = (0.0f64, 0.0f64);
        let (mut support_val, mut off_val) = (0.0f64, 0.0f64);
        for (zij, wij) in z.iter().zip(w.iter()) {
            if wij.abs() > REPORT_FLOOR {
                let d = (zij - half * wij.signum()).abs();
                if d > support {
                    support = d;
                    support_val = *zij;
                }
            } else {
                let d = (zij.abs() - half).max(0.0);
                off_val = off_val.max(zij.abs());
                off = off.max(d);
            }
        }
        details.push(ConditionResidual { side, condition: "support_equality", value: support_val, violation: support });
        details.push(ConditionResidual { side, condition: "zero_interval", value: off_val, violation: off });
    }
    Ok(StationarityReport::from_details(ScenarioKind::Spc, tol, details))
}

/// Low-rank scenario, per side with thin SVD `W = U S V^T` restricted to
/// singular values above the reporting floor:
/// `||2Z - gamma U V^T||_2 <= gamma`, `2 U^T Z = gamma V^T`, `2 Z V = gamma U`.
pub fn check_lpc(
    plant: &PlantModel,
    cfg: &Configuration,
    ric: &RiccatiPair,
    gamma: f64,
    tol: f64,
) -> Result<StationarityReport> {
    check_tol(tol)?;
    let (zb, zc) = stationarity_matrices(plant, cfg, ric)?;
    let mut details = Vec::new();
    for (side, z, w) in [(Side::Actuator, &zb, &cfg.b), (Side::Sensor, &zc, &cfg.c)] {
        let dec = svd(w)?;
        let r = dec.rank(REPORT_FLOOR);
        let u = dec.u.columns(0, r).clone_owned();
        let vt = dec.vt.rows(0, r).clone_owned();
        let two_z = z * 2.0;
        let spectral = spectral_norm(&(&two_z - &u * &vt * gamma))?;
        let left = (u.transpose() * &two_z - &vt * gamma).norm();
        let right = (&two_z * vt.transpose() - &u * gamma).norm();
        details.push(ConditionResidual {
            side,
            condition: "spectral_bound",
            value: spectral,
            violation: (spectral - gamma).max(0.0),
        });
        details.push(ConditionResidual { side, condition: "left_alignment", value: left, violation: left });
        details.push(ConditionResidual { side, condition: "right_alignment", value: right, violation: right });
    }
    Ok(StationarityReport::from_details(ScenarioKind::Lpc, tol, details))
}

/// Structured scenario: `||(Z - gamma W) o S_bar||_F = 0` for both sides,
/// where `S` marks forbidden entries. The configuration must already be zero
/// on the masks.
pub fn check_scc(
    plant: &PlantModel,
    cfg: &Configuration,
    ric: &RiccatiPair,
    gamma: f64,
    s_b: &Matrix,
    s_c: &Matrix,
    tol: f64,
) -> Result<StationarityReport> {
    check_tol(tol)?;
    if s_b.shape() != cfg.b.shape() || s_c.shape() != cfg.c.shape() {
        return Err(Error::Dimension("mask shapes do not match the configuration".into()));
    }
    for (side, w, s) in [(Side::Actuator, &cfg.b, s_b), (Side::Sensor, &cfg.c, s_c)] {
        let norm = w.component_mul(s).norm();
        if norm > 0.0 {
            return Err(Error::MaskViolation { side, norm });
        }
    }
    let (zb, zc) = stationarity_matrices(plant, cfg, ric)?;
    let mut details = Vec::new();
    for (side, z, w, s) in [(Side::Actuator, &zb, &cfg.b, s_b), (Side::Sensor, &zc, &cfg.c, s_c)] {
        let residual = (z - w * gamma).zip_map(s, |v, m| if m == 1.0 { 0.0 } else { v }).norm();
        details.push(ConditionResidual { side, condition: "masked_residual", value: residual, violation: residual });
    }
    Ok(StationarityReport::from_details(ScenarioKind::Scc, tol, details))
}

/// Dispatches on the scenario kind.
pub fn check_general(
    plant: &PlantModel,
    cfg: &Configuration,
    ric: &RiccatiPair,
    scenario: &ScenarioSpec,
    tol: f64,
) -> Result<StationarityReport> {
    let gamma = scenario.gamma();
    match scenario.kind() {
        ScenarioKind::Spc => check_spc(plant, cfg, ric, gamma, tol),
        ScenarioKind::Lpc => check_lpc(plant, cfg, ric, gamma, tol),
        ScenarioKind::Scc => {
            let s_b = scenario.mask(Side::Actuator).expect("scc scenario carries both masks");
            let s_c = scenario.mask(Side::Sensor).expect("scc scenario carries both masks");
            check_scc(plant, cfg, ric, gamma, s_b, s_c, tol)
        }
    }
}
