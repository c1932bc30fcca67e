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

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use sacopt::ScenarioKind;
use sacopt_cli::{exit, Overrides};

#[derive(Parser)]
#[command(name = "sacopt", version, about = "Joint actuator/sensor configuration design for LQG plants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem file.
    Run {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the configuration-cost weight.
        #[arg(long)]
        gamma: Option<f64>,
        /// Replaces both initial matrices with random draws from this seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the outer iteration cap.
        #[arg(long)]
        max_outer: Option<usize>,
    },
    /// Solve one problem file for each weight in an ascending list.
    Sweep {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        gammas: Option<Vec<f64>>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Built-in benchmarks.
    Bench {
        #[command(subcommand)]
        target: Bench,
    },
}

#[derive(Subcommand)]
enum Bench {
    /// Chemical reactor benchmark from its standard starting configuration.
    Rea1 {
        #[arg(long, value_enum)]
        scenario: ScenarioArg,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Spc,
    Lpc,
    Scc,
}

impl From<ScenarioArg> for ScenarioKind {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Spc => Self::Spc,
            ScenarioArg::Lpc => Self::Lpc,
            ScenarioArg::Scc => Self::Scc,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => exit::PASS,
                _ => exit::PARSE,
            };
            return ExitCode::from(code as u8);
        }
    };
    let result = match cli.command {
        Command::Run { file, out, gamma, seed, max_outer } => {
            sacopt_cli::run(&file, &out, Overrides { gamma, seed, max_outer })
        }
        Command::Sweep { file, gammas, out } => sacopt_cli::sweep(&file, gammas.as_deref(), &out),
        Command::Bench { target: Bench::Rea1 { scenario, out } } => {
            sacopt_cli::bench_rea1(scenario.into(), &out).map(|(report, code)| {
                let last = report.final_record();
                eprintln!(
                    "J_total {:.6} J_LQG {:.6} J_SAC {:.6} raw {} outer {} converged {} stationary {}",
                    last.j_total,
                    last.j_lqg,
                    last.j_sac_relaxed,
                    last.j_sac_raw,
                    report.outer_iterations,
                    report.converged,
                    report.stationarity.passed
                );
                code
            })
        }
    };
    let code = match result {
        Ok(code) => {
            if code == exit::MAX_ITERATIONS {
                eprintln!("warning: outer iteration cap reached before convergence");
            } else if code == exit::NOT_STATIONARY {
                eprintln!("warning: converged but the stationarity check failed");
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
