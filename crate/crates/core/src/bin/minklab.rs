//! Command-line front end: scenario runs, the verification suite, distance
//! field dumps, and gauge body inspection.
//!
//! Exit codes: `run` exits 0 whenever the scenario executes to completion,
//! regardless of existence or bound flags in the report (the report is the
//! product, not a judgement); `verify` exits nonzero iff any check fails;
//! every command exits nonzero on parse, validation, or resource errors.

use clap::{Parser, Subcommand};
use minklab::convex::ConvexBody;
use minklab::scenario::{dump_field, parse_scenario, resolve, run_to_dir, ScenarioFile};
use minklab::suite::{run_suite, SuiteConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "minklab", version = minklab::VERSION, about = "Numerical laboratory for anisotropic Minkowski content")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario file and write its ladder/summary/report artifacts.
    Run {
        /// Scenario JSON path.
        file: PathBuf,
        /// Override the grid resolution (cells along the longest window
        /// extent).
        #[arg(long)]
        grid: Option<usize>,
        /// Override the largest ladder ε, in cells.
        #[arg(long)]
        eps_max: Option<f64>,
        /// Override the number of ladder points.
        #[arg(long)]
        eps_points: Option<usize>,
        /// Override the relative tolerance echoed into the report.
        #[arg(long)]
        rel_tol: Option<f64>,
        /// Output directory (overrides the scenario's own).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in verification suite.
    Verify {
        /// Substring filter on check names.
        #[arg(long)]
        filter: Option<String>,
        /// Override the relative tolerance of scenario value checks.
        #[arg(long)]
        rel_tol: Option<f64>,
    },
    /// Compute a gauge distance field for a scenario's shape and write it.
    Field {
        /// Scenario JSON path.
        file: PathBuf,
        /// Name of the gauge body to use.
        #[arg(long)]
        body: String,
        /// Output path.
        #[arg(long)]
        out: PathBuf,
        /// Write CSV instead of the binary format.
        #[arg(long)]
        csv: bool,
    },
    /// Print support samples, polar data and constants for a scenario's
    /// bodies.
    Bodies {
        /// Scenario JSON path.
        file: PathBuf,
    },
}

fn load(path: &PathBuf) -> Result<ScenarioFile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_scenario(&text).map_err(|e| e.to_string())
}

fn support_directions(dim: usize) -> Vec<[f64; 3]> {
    match dim {
        1 => vec![[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]],
        2 => (0..8)
            .map(|k| {
                let t = std::f64::consts::PI * k as f64 / 4.0;
                [t.cos(), t.sin(), 0.0]
            })
            .collect(),
        _ => vec![
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ],
    }
}

fn print_body(name: &str, body: &ConvexBody) {
    println!("body {name} (dim {})", body.dim());
    println!("  diameter: {}", body.diameter());
    let (a, b) = body.containment_constants();
    println!("  containment: {a}·h(ν) ≤ |ν| ≤ {b}·h(ν)");
    for u in support_directions(body.dim()) {
        let coords: Vec<String> = u[..body.dim()].iter().map(|c| format!("{c:.4}")).collect();
        println!("  h([{}]) = {}", coords.join(", "), body.support(u));
    }
    match body.polar() {
        Ok(polar) => match polar.vertices() {
            Some(vs) => {
                let rows: Vec<String> = vs
                    .iter()
                    .map(|v| {
                        let coords: Vec<String> =
                            v[..body.dim()].iter().map(|c| format!("{c}")).collect();
                        format!("[{}]", coords.join(", "))
                    })
                    .collect();
                println!("  polar vertices: {}", rows.join(" "));
            }
            None => println!("  polar: ball of radius {}", polar.circumradius()),
        },
        Err(e) => println!("  polar: unavailable ({e})"),
    }
}

fn real_main() -> Result<ExitCode, String> {
    match Cli::parse().cmd {
        Cmd::Run { file, grid, eps_max, eps_points, rel_tol, out } => {
            let mut scenario = load(&file)?;
            if let Some(n) = grid {
                scenario.grid.n = n;
            }
            if let Some(x) = eps_max {
                scenario.ladder.eps_max_cells = x;
            }
            if let Some(k) = eps_points {
                scenario.ladder.points = k;
            }
            if let Some(t) = rel_tol {
                scenario.tolerances.rel_tol = t;
            }
            let output = run_to_dir(&scenario, out.as_deref()).map_err(|e| e.to_string())?;
            print!("{}", output.summary_csv);
            for p in &output.paths {
                eprintln!("wrote {}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { filter, rel_tol } => {
            let report = run_suite(&SuiteConfig { filter, rel_tol });
            print!("{}", report.table());
            Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Cmd::Field { file, body, out, csv } => {
            let scenario = load(&file)?;
            dump_field(&scenario, &body, &out, csv).map_err(|e| e.to_string())?;
            eprintln!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bodies { file } => {
            let scenario = load(&file)?;
            let rs = resolve(&scenario).map_err(|e| e.to_string())?;
            for (name, body) in &rs.bodies {
                print_body(name, body);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
