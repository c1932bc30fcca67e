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

//! Artifact writers. Tables are comma-delimited with a header row and
//! floats printed to nine significant digits; matrices are JSON row-major
//! nested arrays at full precision so they round-trip exactly.

use std::fs;
use std::path::Path;

use sacopt::admm::OuterRecord;
use sacopt::{rea1, AdmmParams, Matrix, RunReport, ScenarioKind, StationarityReport};
use serde::Serialize;
use serde_json::{json, Value};

use crate::problem::{matrix_to_rows, Problem};
use crate::{outcome_code, CliError, SweepRow};

/// Slack on the descent-chain check reported in `run_report.json`.
const CHAIN_SLACK: f64 = 1e-9;

fn io(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io(path, e))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| io(path, e))?;
    write_text(path, &(text + "\n"))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, CliError> {
    csv::Writer::from_path(path).map_err(|e| io(path, e))
}

/// Nine significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.8e}")
}

pub fn write_matrix(path: &Path, m: &Matrix) -> Result<(), CliError> {
    write_json(path, &matrix_to_rows(m))
}

fn record_json(r: &OuterRecord) -> Value {
    json!({
        "iteration": r.iteration,
        "j_total": r.j_total,
        "j_lqg": r.j_lqg,
        "j_sac_relaxed": r.j_sac_relaxed,
        "j_sac_raw": r.j_sac_raw,
    })
}

fn params_json(p: &AdmmParams) -> Value {
    json!({
        "rho": p.rho,
        "alpha": p.alpha,
        "beta": p.beta,
        "eps_pri": p.eps_pri,
        "eps_dual": p.eps_dual,
        "eps_main": p.eps_main,
        "max_inner_iters": p.max_inner_iters,
        "max_admm_iters": p.max_admm_iters,
        "max_outer_iters": p.max_outer_iters,
        "grad_tol": p.grad_tol,
        "min_step": p.min_step,
        "certification_tol": p.certification_tol,
    })
}

pub fn stationarity_json(s: &StationarityReport) -> Value {
    let details: Vec<Value> = s
        .details
        .iter()
        .map(|d| {
            json!({
                "side": d.side.to_string(),
                "condition": d.condition,
                "value": d.value,
                "violation": d.violation,
            })
        })
        .collect();
    json!({
        "scenario": s.scenario.as_str(),
        "tol": s.tol,
        "passed": s.passed,
        "max_violation_b": s.max_violation_b,
        "max_violation_c": s.max_violation_c,
        "details": details,
    })
}

pub fn run_report_json(problem: &Problem, report: &RunReport) -> Value {
    let admm: Vec<Value> = report
        .admm_traces
        .iter()
        .map(|t| {
            json!({
                "side": t.side.to_string(),
                "iterations": t.iterations(),
                "converged": t.converged,
                "final_primal_residual": t.primal_residuals.last(),
                "final_dual_residual": t.dual_residuals.last(),
                "inner_iterations": t.inner_iterations.iter().sum::<usize>(),
            })
        })
        .collect();
    json!({
        "scenario": problem.scenario.kind().as_str(),
        "gamma": problem.scenario.gamma(),
        "params": params_json(&problem.params),
        "converged": report.converged,
        "outer_iterations": report.outer_iterations,
        "exit_code": outcome_code(report),
        "wall_time_s": report.wall_time,
        "initial": record_json(&report.outer_trace[0]),
        "final": record_json(report.final_record()),
        "half_step_costs": report.half_step_costs,
        "descent_chain_holds": report.descent_chain_holds(CHAIN_SLACK),
        "stationarity_passed": report.stationarity.passed,
        "stationarity_max_violation": report.stationarity.max_violation(),
        "admm_subproblems": admm,
    })
}

pub fn write_trace(path: &Path, trace: &[OuterRecord]) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    let header = ["iteration", "j_total", "j_lqg", "j_sac_relaxed", "j_sac_raw"];
    w.write_record(header).map_err(|e| io(path, e))?;
    for r in trace {
        let row = [
            r.iteration.to_string(),
            fmt_float(r.j_total),
            fmt_float(r.j_lqg),
            fmt_float(r.j_sac_relaxed),
            fmt_float(r.j_sac_raw),
        ];
        w.write_record(&row).map_err(|e| io(path, e))?;
    }
    w.flush().map_err(|e| io(path, e))
}

/// Writes `run_report.json`, `convergence_trace.csv`, `final_b.json`,
/// `final_c.json` and `stationarity.json` into `dir`.
pub fn write_run(dir: &Path, problem: &Problem, report: &RunReport) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    write_json(&dir.join("run_report.json"), &run_report_json(problem, report))?;
    write_trace(&dir.join("convergence_trace.csv"), &report.outer_trace)?;
    write_matrix(&dir.join("final_b.json"), &report.final_cfg.b)?;
    write_matrix(&dir.join("final_c.json"), &report.final_cfg.c)?;
    write_json(&dir.join("stationarity.json"), &stationarity_json(&report.stationarity))
}

pub fn write_sweep(dir: &Path, rows: &[SweepRow]) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let path = dir.join("sweep.csv");
    let mut w = csv_writer(&path)?;
    let header = [
        "gamma",
        "j_total",
        "j_lqg",
        "j_sac_relaxed",
        "j_sac_raw",
        "outer_iters",
        "converged",
        "stationarity_passed",
        "error",
    ];
    w.write_record(header).map_err(|e| io(&path, e))?;
    for r in rows {
        let row = [
            fmt_float(r.gamma),
            fmt_float(r.j_total),
            fmt_float(r.j_lqg),
            fmt_float(r.j_sac_relaxed),
            fmt_float(r.j_sac_raw),
            r.outer_iters.to_string(),
            r.converged.to_string(),
            r.stationarity_passed.to_string(),
            r.error.clone().unwrap_or_default(),
        ];
        w.write_record(&row).map_err(|e| io(&path, e))?;
    }
    w.flush().map_err(|e| io(&path, e))
}

/// Writes `bench_report.json`: achieved values, reference values and the
/// relative deviation of each.
pub fn write_bench(dir: &Path, kind: ScenarioKind, report: &RunReport) -> Result<(), CliError> {
    let reference = rea1::reference(kind);
    let last = report.final_record();
    let compare = |achieved: f64, expected: f64| {
        json!({
            "achieved": achieved,
            "reference": expected,
            "relative_deviation": (achieved - expected).abs() / expected.abs(),
        })
    };
    let value = json!({
        "scenario": kind.as_str(),
        "j_total": compare(last.j_total, reference.j_total),
        "j_lqg": compare(last.j_lqg, reference.j_lqg),
        "j_sac_relaxed": compare(last.j_sac_relaxed, reference.j_sac_relaxed),
        "j_initial": compare(report.outer_trace[0].j_total, reference.j_initial),
        "j_sac_raw": last.j_sac_raw,
        "outer_iterations": {
            "achieved": report.outer_iterations,
            "reference": reference.outer_iterations,
        },
        "converged": report.converged,
        "stationarity_passed": report.stationarity.passed,
    });
    write_json(&dir.join("bench_report.json"), &value)
}
