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

use thiserror::Error;

use crate::Side;

/// Errors produced by the solver stack.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix `{0}` contains non-finite entries")]
    NonFinite(&'static str),

    #[error("matrix `{name}` is not symmetric positive definite (smallest eigenvalue {min_eig:e})")]
    NotPositiveDefinite { name: &'static str, min_eig: f64 },

    #[error("matrix is not Hurwitz (spectral abscissa {abscissa:e})")]
    NotHurwitz { abscissa: f64 },

    #[error("right-hand side is not symmetric (relative asymmetry {asymmetry:e})")]
    NonSymmetric { asymmetry: f64 },

    #[error("(A, B) is not stabilizable")]
    NotStabilizable,

    #[error("(A, C) is not detectable")]
    NotDetectable,

    #[error("Riccati solver failure: {0}")]
    SolverFailure(String),

    #[error("decomposition did not converge: {0}")]
    ConvergenceFailure(&'static str),

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("finite-difference perturbation of entry ({row}, {col}) left the feasible domain")]
    PerturbationInfeasible { row: usize, col: usize },

    #[error("line search stalled at inner iteration {iteration} (step {step:e})")]
    LineSearchStall { iteration: usize, step: f64 },

    #[error("initial {0} matrix is outside the feasible domain")]
    InfeasibleStart(Side),

    #[error("infeasible initial configuration: {0}")]
    InfeasibleInit(Box<Error>),

    #[error("{side} ADMM subproblem returned a matrix outside the feasible domain: {reason}")]
    InfeasibleIterate { side: Side, reason: Box<Error> },

    #[error("{side} ADMM update produced a non-finite iterate at iteration {iteration}")]
    NonFiniteIterate { side: Side, iteration: usize },

    #[error("{side} matrix violates its structure mask (masked norm {norm:e})")]
    MaskViolation { side: Side, norm: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
