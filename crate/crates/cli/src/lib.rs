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

//! Batch front end: problem ingestion, runs, weight sweeps and the built-in
//! REA1 benchmark. Every command writes plain JSON and CSV artifacts.

pub mod output;
pub mod problem;

use std::path::Path;

use rayon::prelude::*;
use sacopt::lqg::solve_gains;
use sacopt::{alternate, rea1, Error, RunReport, ScenarioKind};
use thiserror::Error as ThisError;

pub use problem::{Overrides, Problem, ProblemFile};

/// Default weight grid for sweeps, logarithmic over two decades.
pub const DEFAULT_GAMMAS: [f64; 5] = [1e-3, 3e-3, 1e-2, 3e-2, 1e-1];

/// Process exit codes.
pub mod exit {
    /// Converged and stationarity certified.
    pub const PASS: i32 = 0;
    /// Unexpected failure (I/O, solver breakdown).
    pub const OTHER: i32 = 1;
    /// Outer iteration cap reached.
    pub const MAX_ITERATIONS: i32 = 2;
    pub const INFEASIBLE_INIT: i32 = 3;
    pub const PARSE: i32 = 4;
    /// Converged but the stationarity checker failed.
    pub const NOT_STATIONARY: i32 = 5;
}

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("field `{field}`: {message}")]
    Parse { field: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error(transparent)]
    Solver(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse { .. } => exit::PARSE,
            Self::Solver(Error::InfeasibleInit(_) | Error::InfeasibleStart(_)) => exit::INFEASIBLE_INIT,
            Self::Io(_) | Self::Solver(_) => exit::OTHER,
        }
    }
}

/// Exit code for a completed run.
pub fn outcome_code(report: &RunReport) -> i32 {
    if !report.converged {
        exit::MAX_ITERATIONS
    } else if !report.stationarity.passed {
        exit::NOT_STATIONARY
    } else {
        exit::PASS
    }
}

/// Loads a problem file, resolving relative paths against its directory.
pub fn load_problem(path: &Path, overrides: Overrides) -> Result<Problem, CliError> {
    let file = ProblemFile::load(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    file.resolve(base, overrides)
}

pub fn solve(problem: &Problem) -> Result<RunReport, CliError> {
    Ok(alternate(&problem.plant, &problem.cfg0, &problem.scenario, &problem.params)?)
}

/// `run`: one alternation, all artifacts written to `out`.
pub fn run(problem_path: &Path, out: &Path, overrides: Overrides) -> Result<i32, CliError> {
    let problem = load_problem(problem_path, overrides)?;
    let report = solve(&problem)?;
    output::write_run(out, &problem, &report)?;
    Ok(outcome_code(&report))
}

/// One row of the sweep table. `error` is set when the run failed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub gamma: f64,
    pub j_total: f64,
    pub j_lqg: f64,
    pub j_sac_relaxed: f64,
    pub j_sac_raw: f64,
    pub outer_iters: usize,
    pub converged: bool,
    pub stationarity_passed: bool,
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(gamma: f64, error: &CliError) -> Self {
        Self {
            gamma,
            j_total: f64::NAN,
            j_lqg: f64::NAN,
            j_sac_relaxed: f64::NAN,
            j_sac_raw: f64::NAN,
            outer_iters: 0,
            converged: false,
            stationarity_passed: false,
            error: Some(error.to_string()),
        }
    }

    fn from_report(gamma: f64, report: &RunReport) -> Self {
        let last = report.final_record();
        Self {
            gamma,
            j_total: last.j_total,
            j_lqg: last.j_lqg,
            j_sac_relaxed: last.j_sac_relaxed,
            j_sac_raw: last.j_sac_raw,
            outer_iters: report.outer_iterations,
            converged: report.converged,
            stationarity_passed: report.stationarity.passed,
            error: None,
        }
    }
}

/// Runs `problem` once per weight, all from the same initialization. Rows
/// are independent and may execute concurrently; per-row artifacts land in
/// `out/gamma_<index>` when `out` is given.
pub fn sweep_rows(problem: &Problem, gammas: &[f64], out: Option<&Path>) -> Result<Vec<SweepRow>, CliError> {
    problem::validate_gammas(gammas).map_err(|message| CliError::Parse { field: "gammas".into(), message })?;
    solve_gains(&problem.plant, &problem.cfg0).map_err(|e| CliError::Solver(Error::InfeasibleInit(Box::new(e))))?;
    let rows = gammas
        .par_iter()
        .enumerate()
        .map(|(i, &gamma)| {
            let result = problem.scenario.with_gamma(gamma).map_err(CliError::from).and_then(|scenario| {
                let row_problem = Problem { scenario, ..problem.clone() };
                let report = solve(&row_problem)?;
                if let Some(dir) = out {
                    output::write_run(&dir.join(format!("gamma_{i:02}")), &row_problem, &report)?;
                }
                Ok(report)
            });
            match result {
                Ok(report) => SweepRow::from_report(gamma, &report),
                Err(e) => SweepRow::failed(gamma, &e),
            }
        })
        .collect();
    Ok(rows)
}

/// `sweep`: exit 0 when every row completed, 1 when any row failed.
pub fn sweep(problem_path: &Path, gammas: Option<&[f64]>, out: &Path) -> Result<i32, CliError> {
    let problem = load_problem(problem_path, Overrides::default())?;
    let gammas =
        gammas.map(<[f64]>::to_vec).or_else(|| problem.sweep.clone()).unwrap_or_else(|| DEFAULT_GAMMAS.to_vec());
    let rows = sweep_rows(&problem, &gammas, Some(out))?;
    output::write_sweep(out, &rows)?;
    Ok(if rows.iter().any(|r| r.error.is_some()) { exit::OTHER } else { exit::PASS })
}

/// The embedded REA1 fixture for one scenario at the default weight.
pub fn rea1_problem(kind: ScenarioKind) -> Problem {
    Problem {
        plant: rea1::plant(),
        cfg0: rea1::initial_configuration(),
        scenario: rea1::scenario(kind, rea1::GAMMA).expect("benchmark scenario is valid"),
        params: sacopt::AdmmParams::default(),
        sweep: None,
    }
}

/// `bench rea1`: runs the fixture and writes the run artifacts plus a
/// comparison against the reference optimum.
pub fn bench_rea1(kind: ScenarioKind, out: &Path) -> Result<(RunReport, i32), CliError> {
    let problem = rea1_problem(kind);
    let report = solve(&problem)?;
    output::write_run(out, &problem, &report)?;
    output::write_bench(out, kind, &report)?;
    let code = outcome_code(&report);
    Ok((report, code))
}
