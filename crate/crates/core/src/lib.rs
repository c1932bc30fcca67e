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

//! Joint actuator and sensor matrix design for linear-Gaussian plants.
//!
//! The crate evaluates the steady-state LQG cost of a configuration `(B, C)`
//! through the two dual Riccati equations, differentiates it analytically via
//! auxiliary Lyapunov equations, and minimizes the cost plus a configuration
//! penalty by alternating ADMM solves over `B` and `C`. Three penalties are
//! provided: entrywise `l1` (sparse designs), nuclear norm (low-rank designs)
//! and squared Frobenius norm under a zero-pattern mask (structured designs).

use std::fmt;

pub mod admm;
pub mod error;
pub mod gradients;
pub mod linalg;
pub mod lqg;
pub mod prox;
pub mod rea1;
pub mod stationarity;

pub use nalgebra::DMatrix;

pub use admm::{alternate, AdmmParams, RunReport};
pub use error::{Error, Result};
pub use lqg::{Configuration, PlantModel, RiccatiPair};
pub use prox::{ScenarioKind, ScenarioSpec};
pub use stationarity::StationarityReport;

/// Dense real matrix used throughout the crate.
pub type Matrix = DMatrix<f64>;

/// Which half of the configuration an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// The actuator matrix `B` (n x m).
    Actuator,
    /// The sensor matrix `C` (q x n).
    Sensor,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Actuator => f.write_str("actuator"),
            Side::Sensor => f.write_str("sensor"),
        }
    }
}
