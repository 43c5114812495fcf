use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use symform_cli::{load_scenario_with, run_all, sweep, verify, CliError, Overrides, Scenario};

#[derive(Parser)]
#[command(
    name = "symform",
    version,
    about = "Symmetry-constrained formation control simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate scenarios and write traces, plots and metrics.
    Run {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Check the invariants of a scenario's Laplacian.
    Verify {
        scenario: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Verify the path formation for a range of cycle orders.
    Sweep {
        #[arg(long, default_value_t = 3)]
        n_from: usize,
        #[arg(long, default_value_t = 12)]
        n_to: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the table as sweep.json here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Opts {
    /// Output directory; with several scenarios each gets a subdirectory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    horizon: Option<f64>,
}

impl Opts {
    fn overrides(&self, subdir: Option<&str>) -> Overrides {
        Overrides {
            seed: self.seed,
            dt: self.dt,
            horizon: self.horizon,
            output: self.out.as_ref().map(|o| match subdir {
                Some(name) => o.join(name),
                None => o.clone(),
            }),
        }
    }
}

fn load(path: &Path, opts: &Opts, many: bool) -> Result<Scenario, CliError> {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
    let s = load_scenario_with(path, &opts.overrides(many.then_some(stem)))?;
    eprintln!(
        "{}: n = {}, d = {}, dt = {:.6e}, horizon = {:.6e}, output = {}",
        s.name,
        s.n,
        s.dim,
        s.dt,
        s.horizon,
        s.output.display()
    );
    Ok(s)
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { scenarios, opts } => {
            let many = scenarios.len() > 1;
            let loaded = scenarios
                .iter()
                .map(|p| load(p, &opts, many))
                .collect::<Result<Vec<_>, _>>()?;
            let mut first_error = None;
            for (s, result) in loaded.iter().zip(run_all(&loaded)) {
                match result {
                    Ok(out) => {
                        let m = &out.metrics;
                        println!(
                            "{}: rank {} null {} λ₊min {:.6} max final error {:.3e} projection residual {:.3e} rate {} ({:.2}s)",
                            m.name,
                            m.rank,
                            m.null_dim,
                            m.lambda_plus_min,
                            m.max_final_edge_error,
                            m.projection_residual,
                            m.fitted_rate.map_or("n/a".into(), |r| format!("{r:.6}")),
                            m.runtime_seconds
                        );
                        if let Some(r) = m.max_frame_residual {
                            println!("{}: max moving-frame residual {r:.3e}", m.name);
                        }
                        println!("{}: wrote {}", s.name, s.output.display());
                    }
                    Err(e) => match first_error {
                        None => first_error = Some(e),
                        Some(_) => eprintln!("error: {e}"),
                    },
                }
            }
            first_error.map_or(Ok(()), Err)
        }
        Command::Verify { scenario, opts } => {
            let s = load(&scenario, &opts, false)?;
            let checks = verify(&s)?;
            for c in &checks {
                println!(
                    "{} {:<26} value {:.3e} (limit {:.3e})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.tolerance
                );
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::Verification {
                    scenario: s.name,
                    failed,
                });
            }
            Ok(())
        }
        Command::Sweep {
            n_from,
            n_to,
            seed,
            out,
        } => {
            let rows = sweep(n_from, n_to, seed)?;
            for r in &rows {
                println!(
                    "{} n = {:>3}  rank {:>3}/{:<3}  λ₊min {:.6}",
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.n,
                    r.rank,
                    r.expected_rank,
                    r.lambda_plus_min
                );
            }
            let passed = rows.iter().filter(|r| r.passed()).count();
            println!("{passed}/{} orders pass", rows.len());
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
                let path = dir.join("sweep.json");
                let json = serde_json::to_string_pretty(&rows).expect("sweep serializes");
                std::fs::write(&path, json + "\n").map_err(|e| CliError::io(&path, e))?;
            }
            if passed < rows.len() {
                return Err(CliError::Verification {
                    scenario: "sweep".into(),
                    failed: rows.len() - passed,
                });
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
