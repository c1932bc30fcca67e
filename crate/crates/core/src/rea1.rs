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

//! The REA1 benchmark plant (a four-state chemical reactor model) with the
//! standard starting configuration, structure masks and reference optima.

use nalgebra::dmatrix;

use crate::error::Result;
use crate::lqg::{Configuration, PlantModel};
use crate::prox::{ScenarioKind, ScenarioSpec};
use crate::Matrix;

/// Default configuration-cost weight.
pub const GAMMA: f64 = 0.01;

pub fn a() -> Matrix {
    dmatrix![
        1.38, -0.2077, 6.715, -5.676;
        -0.5814, -4.29, 0.0, 0.675;
        1.067, 4.273, -6.654, 5.893;
        0.048, 4.273, 1.343, -2.104
    ]
}

/// `Q = I`, `R = 0.1 I`, `Pw = 0.01 I`, `Pv = 0.1 I`.
pub fn plant() -> PlantModel {
    let eye = Matrix::identity(4, 4);
    PlantModel::new(a(), &eye * 0.01, &eye * 0.1, eye.clone(), &eye * 0.1).expect("REA1 data is valid")
}

pub fn b0() -> Matrix {
    dmatrix![
        0.6281, 0.4653, 1.3792, 0.7538;
        0.7641, -1.0122, -0.4788, -0.7347;
        -0.6719, -1.1430, 0.2558, 0.0179;
        0.5391, -0.0049, -0.8286, 0.5972
    ]
}

pub fn c0() -> Matrix {
    dmatrix![
        1.1727, -1.0521, 0.9429, -0.9102;
        1.3779, -0.7275, -0.7694, -0.7467;
        0.1416, 1.0222, 1.2878, 0.3481;
        -1.0841, -0.7372, -0.4500, -0.0801
    ]
}

pub fn initial_configuration() -> Configuration {
    Configuration::new(b0(), c0())
}

/// Forbidden actuator entries (ones).
pub fn s_b() -> Matrix {
    dmatrix![
        1.0, 0.0, 0.0, 1.0;
        0.0, 1.0, 0.0, 0.0;
        0.0, 0.0, 1.0, 0.0;
        1.0, 0.0, 0.0, 0.0
    ]
}

/// Forbidden sensor entries (ones).
pub fn s_c() -> Matrix {
    dmatrix![
        0.0, 1.0, 0.0, 0.0;
        0.0, 0.0, 0.0, 1.0;
        1.0, 0.0, 0.0, 0.0;
        0.0, 0.0, 1.0, 0.0
    ]
}

/// Scenario of the given kind with weight `gamma`; SCC uses the
/// benchmark masks.
pub fn scenario(kind: ScenarioKind, gamma: f64) -> Result<ScenarioSpec> {
    match kind {
        ScenarioKind::Spc => ScenarioSpec::sparse(gamma),
        ScenarioKind::Lpc => ScenarioSpec::low_rank(gamma),
        ScenarioKind::Scc => ScenarioSpec::structured(gamma, s_b(), s_c()),
    }
}

/// Reference optimum of one scenario at `gamma = 0.01`, rounded to four
/// decimals.
#[derive(Debug, Clone)]
pub struct ReferenceOptimum {
    pub b: Matrix,
    pub c: Matrix,
    pub j_initial: f64,
    pub j_total: f64,
    pub j_lqg: f64,
    /// Convex penalty `Phi(B) + Phi(C)`.
    pub j_sac_relaxed: f64,
    pub outer_iterations: usize,
}

pub fn reference(kind: ScenarioKind) -> ReferenceOptimum {
    match kind {
        ScenarioKind::Spc => ReferenceOptimum {
            b: dmatrix![
                0.0, 0.0, 2.3997, 0.0;
                0.0, -0.0744, 0.0, 0.0;
                0.0, 0.0, 0.0, 0.0;
                0.0, -0.6850, 0.0, 0.0
            ],
            c: dmatrix![
                5.4692, 0.0, 0.0, 0.0;
                0.0, 0.0, 0.0, 0.0;
                0.0, 0.0, 0.0, 2.3136;
                0.0, 0.0, 0.0, 0.0
            ],
            j_initial: 0.4689,
            j_total: 0.1823,
            j_lqg: 0.0729,
            j_sac_relaxed: 10.9419,
            outer_iterations: 4,
        },
        ScenarioKind::Lpc => ReferenceOptimum {
            b: dmatrix![
                0.4133, -0.6914, 1.6144, 0.5315;
                0.2048, -0.3033, -0.1795, 0.0359;
                0.2888, -0.4633, 0.6323, 0.2563;
                0.1973, -0.2807, -0.4621, -0.0325
            ],
            c: dmatrix![
                3.2953, -0.2480, 0.4490, -0.0916;
                2.9990, -0.4752, -0.3988, -0.9395;
                0.8471, 0.2633, 1.1735, 1.0983;
                -2.7723, 0.0556, -0.8727, -0.4477
            ],
            j_initial: 0.3532,
            j_total: 0.1683,
            j_lqg: 0.0657,
            j_sac_relaxed: 10.2619,
            outer_iterations: 5,
        },
        ScenarioKind::Scc => ReferenceOptimum {
            b: dmatrix![
                0.0, -1.5731, 0.1713, 0.0;
                0.0, 0.0, -0.1819, -0.3388;
                0.0, -0.7150, 0.0, -0.1682;
                0.0, 0.2883, -0.2529, -0.4041
            ],
            c: dmatrix![
                1.2307, 0.0, 0.4348, 0.2890;
                1.8847, -0.1439, 0.2450, 0.0;
                0.0, 0.2174, 0.8294, 0.8628;
                -1.9356, 0.2124, 0.0, 0.2512
            ],
            j_initial: 0.4493,
            j_total: 0.2887,
            j_lqg: 0.1461,
            j_sac_relaxed: 14.2558,
            outer_iterations: 3,
        },
    }
}

/// Reference optimal gains `(K, L)` at the reference optimum.
pub fn reference_gains(kind: ScenarioKind) -> (Matrix, Matrix) {
    match kind {
        ScenarioKind::Spc => (
            dmatrix![
                0.0, 0.0, 0.0, 0.0;
                -0.3158, 2.8312, 0.6573, 3.2382;
                -4.0133, -0.0820, -1.8834, 1.1153;
                0.0, 0.0, 0.0, 0.0
            ],
            dmatrix![
                -0.9575, 0.0, -0.0310, 0.0;
                0.0550, 0.0, -0.0619, 0.0;
                -0.1964, 0.0, -0.2908, 0.0;
                -0.0732, 0.0, -0.3109, 0.0
            ],
        ),
        ScenarioKind::Lpc => (
            dmatrix![
                -0.8053, -1.4105, -0.8841, -1.1842;
                1.3631, 2.0820, 1.3975, 1.6890;
                -3.5413, 1.4138, -1.4179, 2.6598;
                -1.1274, -0.2061, -0.6642, 0.1689
            ],
            dmatrix![
                -0.5779, -0.5178, -0.1592, 0.4912;
                0.0381, 0.0767, -0.0454, -0.0062;
                -0.0926, 0.0935, -0.2567, 0.1868;
                -0.0164, 0.1691, -0.2452, 0.1265
            ],
        ),
        ScenarioKind::Scc => (
            dmatrix![
                0.0, 0.0, 0.0, 0.0;
                4.1789, 0.1273, 2.3008, -1.4346;
                -0.4672, 1.4021, 0.1883, 1.5796;
                0.0040, 2.6360, 0.8440, 2.6343
            ],
            dmatrix![
                -0.6160, -0.9367, -0.0159, 0.9570;
                0.0261, 0.0726, -0.0627, -0.0932;
                -0.1757, -0.1178, -0.2945, 0.0335;
                -0.1096, -0.0128, -0.3012, -0.0763
            ],
        ),
    }
}
