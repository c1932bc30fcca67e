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

//! Problem-file schema and conversion into solver inputs.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sacopt::lqg::{check_detectable, check_stabilizable};
use sacopt::{AdmmParams, Configuration, Matrix, PlantModel, ScenarioKind, ScenarioSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Upper bound on rejection-sampling draws for random initializations.
const MAX_RANDOM_DRAWS: usize = 10_000;

/// Row-major nested arrays.
pub type Rows = Vec<Vec<f64>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantFile {
    pub a: Rows,
    pub pi_w: Rows,
    pub pi_v: Rows,
    pub q_weight: Rows,
    pub r_weight: Rows,
}

/// Initial matrix: explicit rows, `"random(<seed>)"`, or `{"path": ...}`
/// pointing at a file holding nested rows (relative to the problem file).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitSpec {
    Rows(Rows),
    Random(String),
    File { path: PathBuf },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub kind: String,
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_b: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_c: Option<Rows>,
}

/// Solver parameters; omitted fields take the library defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub rho: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub eps_pri: Option<f64>,
    pub eps_dual: Option<f64>,
    pub eps_main: Option<f64>,
    pub max_inner_iters: Option<usize>,
    pub max_admm_iters: Option<usize>,
    pub max_outer_iters: Option<usize>,
    pub grad_tol: Option<f64>,
    pub min_step: Option<f64>,
    pub certification_tol: Option<f64>,
}

impl ParamsFile {
    pub fn resolve(&self) -> AdmmParams {
        let d = AdmmParams::default();
        AdmmParams {
            rho: self.rho.unwrap_or(d.rho),
            alpha: self.alpha.unwrap_or(d.alpha),
            beta: self.beta.unwrap_or(d.beta),
            eps_pri: self.eps_pri.unwrap_or(d.eps_pri),
            eps_dual: self.eps_dual.unwrap_or(d.eps_dual),
            eps_main: self.eps_main.unwrap_or(d.eps_main),
            max_inner_iters: self.max_inner_iters.unwrap_or(d.max_inner_iters),
            max_admm_iters: self.max_admm_iters.unwrap_or(d.max_admm_iters),
            max_outer_iters: self.max_outer_iters.unwrap_or(d.max_outer_iters),
            grad_tol: self.grad_tol.unwrap_or(d.grad_tol),
            min_step: self.min_step.unwrap_or(d.min_step),
            certification_tol: self.certification_tol.unwrap_or(d.certification_tol),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub plant: PlantFile,
    pub init_b: InitSpec,
    pub init_c: InitSpec,
    pub scenario: ScenarioFile,
    #[serde(default)]
    pub params: ParamsFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<f64>>,
}

/// A validated problem ready for the solver.
#[derive(Debug, Clone)]
pub struct Problem {
    pub plant: PlantModel,
    pub cfg0: Configuration,
    pub scenario: ScenarioSpec,
    pub params: AdmmParams,
    pub sweep: Option<Vec<f64>>,
}

/// Command-line overrides applied while resolving a problem file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub gamma: Option<f64>,
    /// Replaces both initial matrices with seeded random draws.
    pub seed: Option<u64>,
    pub max_outer: Option<usize>,
}

fn parse_error(field: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Parse { field: field.into(), message: message.into() }
}

pub fn rows_to_matrix(field: &str, rows: &Rows) -> Result<Matrix, CliError> {
    let ncols = rows.first().map_or(0, Vec::len);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(parse_error(field, format!("row {i} has {} entries, expected {ncols}", row.len())));
        }
        if let Some(j) = row.iter().position(|v| !v.is_finite()) {
            return Err(parse_error(field, format!("entry ({i}, {j}) is not finite")));
        }
    }
    Ok(Matrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

pub fn matrix_to_rows(m: &Matrix) -> Rows {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Parses `random(<seed>)`.
fn parse_random(field: &str, spec: &str) -> Result<u64, CliError> {
    spec.trim()
        .strip_prefix("random(")
        .and_then(|s| s.strip_suffix(')'))
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| {
            parse_error(field, format!("expected nested rows, \"random(<seed>)\" or {{\"path\": ...}}, got \"{spec}\""))
        })
}

/// Uniform `[-1, 1]` draws until `accept` holds. Stream 0 is used for the
/// actuator matrix and stream 1 for the sensor matrix so that one seed gives
/// independent draws for both.
pub fn random_matrix(
    field: &str,
    seed: u64,
    stream: u64,
    shape: (usize, usize),
    accept: impl Fn(&Matrix) -> bool,
) -> Result<Matrix, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    for _ in 0..MAX_RANDOM_DRAWS {
        let m = Matrix::from_fn(shape.0, shape.1, |_, _| rng.gen_range(-1.0..=1.0));
        if accept(&m) {
            return Ok(m);
        }
    }
    Err(parse_error(field, format!("no feasible random draw in {MAX_RANDOM_DRAWS} attempts")))
}

fn resolve_init(
    field: &str,
    spec: &InitSpec,
    base: &Path,
    shape: (usize, usize),
    stream: u64,
    accept: impl Fn(&Matrix) -> bool,
) -> Result<Matrix, CliError> {
    let m = match spec {
        InitSpec::Rows(rows) => rows_to_matrix(field, rows)?,
        InitSpec::Random(s) => return random_matrix(field, parse_random(field, s)?, stream, shape, accept),
        InitSpec::File { path } => {
            let full = base.join(path);
            let text = fs::read_to_string(&full)
                .map_err(|e| parse_error(field, format!("cannot read {}: {e}", full.display())))?;
            let rows: Rows =
                serde_json::from_str(&text).map_err(|e| parse_error(field, format!("{}: {e}", full.display())))?;
            rows_to_matrix(field, &rows)?
        }
    };
    if m.shape() != shape {
        return Err(parse_error(
            field,
            format!("expected a {}x{} matrix, got {}x{}", shape.0, shape.1, m.nrows(), m.ncols()),
        ));
    }
    Ok(m)
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            let message = e.to_string();
            // serde names missing and unknown fields in backticks.
            let field = message.split('`').nth(1).map(str::to_owned).unwrap_or_else(|| "<document>".to_owned());
            parse_error(field, message)
        })
    }

    /// Validates the document and builds solver inputs. `base` is the
    /// directory that relative `path` entries are resolved against.
    pub fn resolve(&self, base: &Path, overrides: Overrides) -> Result<Problem, CliError> {
        let p = &self.plant;
        let a = rows_to_matrix("plant.a", &p.a)?;
        let plant = PlantModel::new(
            a,
            rows_to_matrix("plant.pi_w", &p.pi_w)?,
            rows_to_matrix("plant.pi_v", &p.pi_v)?,
            rows_to_matrix("plant.q_weight", &p.q_weight)?,
            rows_to_matrix("plant.r_weight", &p.r_weight)?,
        )
        .map_err(|e| parse_error("plant", e.to_string()))?;

        let shape_b = (plant.n(), plant.m());
        let shape_c = (plant.q(), plant.n());
        let stabilizable = |b: &Matrix| check_stabilizable(plant.a(), b);
        let detectable = |c: &Matrix| check_detectable(plant.a(), c);
        let (b0, c0) = match overrides.seed {
            Some(seed) => (
                random_matrix("init_b", seed, 0, shape_b, stabilizable)?,
                random_matrix("init_c", seed, 1, shape_c, detectable)?,
            ),
            None => (
                resolve_init("init_b", &self.init_b, base, shape_b, 0, stabilizable)?,
                resolve_init("init_c", &self.init_c, base, shape_c, 1, detectable)?,
            ),
        };

        let s = &self.scenario;
        let kind: ScenarioKind =
            s.kind.parse().map_err(|e: sacopt::Error| parse_error("scenario.kind", e.to_string()))?;
        let mask = |field: &str, rows: &Option<Rows>| rows.as_ref().map(|r| rows_to_matrix(field, r)).transpose();
        let gamma = overrides.gamma.unwrap_or(s.gamma);
        let scenario = ScenarioSpec::new(kind, gamma, mask("scenario.s_b", &s.s_b)?, mask("scenario.s_c", &s.s_c)?)
            .map_err(|e| parse_error("scenario", e.to_string()))?;
        scenario.check_dimensions(shape_b, shape_c).map_err(|e| parse_error("scenario", e.to_string()))?;

        let mut params = self.params.resolve();
        if let Some(n) = overrides.max_outer {
            params.max_outer_iters = n;
        }
        params.validate().map_err(|e| parse_error("params", e.to_string()))?;

        if let Some(sweep) = &self.sweep {
            validate_gammas(sweep).map_err(|m| parse_error("sweep", m))?;
        }
        Ok(Problem { plant, cfg0: Configuration::new(b0, c0), scenario, params, sweep: self.sweep.clone() })
    }
}

/// Sweep weights must be nonempty, positive and strictly ascending.
pub fn validate_gammas(gammas: &[f64]) -> Result<(), String> {
    if gammas.is_empty() {
        return Err("empty gamma list".into());
    }
    if let Some(g) = gammas.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
        return Err(format!("gamma values must be positive, got {g}"));
    }
    if gammas.windows(2).any(|w| w[1] <= w[0]) {
        return Err("gamma values must be strictly ascending".into());
    }
    Ok(())
}
