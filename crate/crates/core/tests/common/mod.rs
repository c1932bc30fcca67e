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

//! Shared fixtures; not every test binary uses every helper.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sacopt::lqg::solve_gains;
use sacopt::{rea1, Configuration, Matrix, PlantModel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, rows: usize, cols: usize, half_width: f64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.gen_range(-half_width..half_width))
}

/// Uniform `[-1, 1]` entries, redrawn until stabilizable and detectable.
pub fn random_feasible(plant: &PlantModel, rng: &mut ChaCha8Rng) -> Configuration {
    loop {
        let cfg = Configuration::new(uniform(rng, plant.n(), plant.m(), 1.0), uniform(rng, plant.q(), plant.n(), 1.0));
        if solve_gains(plant, &cfg).is_ok() {
            return cfg;
        }
    }
}

/// The standard starting configuration plus a uniform perturbation.
pub fn near_benchmark(rng: &mut ChaCha8Rng, half_width: f64) -> Configuration {
    loop {
        let cfg = Configuration::new(
            rea1::b0() + uniform(rng, 4, 4, half_width),
            rea1::c0() + uniform(rng, 4, 4, half_width),
        );
        if solve_gains(&rea1::plant(), &cfg).is_ok() {
            return cfg;
        }
    }
}
