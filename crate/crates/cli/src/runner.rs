//! The `run`, `verify` and `sweep` commands.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use nalgebra::DVector;
use serde::Serialize;
use symform::dynamics::potential;
use symform::laplacian::DEFAULT_RANK_TOL;
use symform::{
    fit_rate, integrate, random_configuration, simulate_maneuver, spectrum, steady_state, Configuration,
    IntegrationMethod, ManeuverTrace, NullBasis, RotationChain, SimulationTrace, Spectrum, SymmetryLaplacian,
};

use crate::error::{numeric, CliError};
use crate::output::{errors_svg, paths_svg, write_reference_csv, write_text, write_trace_csv};
use crate::scenario::{resolve, Kind, Scenario, ScenarioFile};

/// A finished simulation held in memory.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub trace: SimulationTrace,
    /// Present when the scenario has a reference.
    pub maneuver: Option<ManeuverTrace>,
}

/// Per-run summary written as `metrics.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub name: String,
    pub n: usize,
    pub dimension: usize,
    pub rank: usize,
    pub null_dim: usize,
    pub lambda_plus_min: f64,
    pub lambda_max: f64,
    pub dt: f64,
    pub horizon: f64,
    pub steps: usize,
    pub seed: Option<u64>,
    pub final_edge_errors: Vec<f64>,
    pub max_final_edge_error: f64,
    /// `‖p(T) - steady state‖`, measured in the moving frame when maneuvering.
    pub projection_residual: f64,
    /// Least-squares decay rate of the symmetry error; `None` when the
    /// error starts at zero.
    pub fitted_rate: Option<f64>,
    /// Largest moving-frame residual over the run, for maneuvers.
    pub max_frame_residual: Option<f64>,
    pub runtime_seconds: f64,
}

fn basis_of(q: &SymmetryLaplacian) -> symform::Result<NullBasis> {
    Ok(NullBasis::from_chain(&RotationChain::from_weighted(
        q.node_count(),
        q.dim(),
        q.edges(),
    )?))
}

pub fn simulate(s: &Scenario) -> Result<Simulation, CliError> {
    let ctx = |e| numeric(&s.name, e);
    match &s.reference {
        None => {
            let trace = integrate(&s.laplacian, &s.p0, s.dt, s.horizon, IntegrationMethod::Rk4).map_err(ctx)?;
            Ok(Simulation { trace, maneuver: None })
        }
        Some(r) => {
            let m = simulate_maneuver(&s.laplacian, &s.p0, &r.inputs, &r.initial, s.dt, s.horizon).map_err(ctx)?;
            Ok(Simulation {
                trace: m.trace.clone(),
                maneuver: Some(m),
            })
        }
    }
}

pub fn metrics(s: &Scenario, sim: &Simulation, spec: &Spectrum, runtime: f64) -> Result<MetricsReport, CliError> {
    let ctx = |e| numeric(&s.name, e);
    let basis = basis_of(&s.laplacian).map_err(ctx)?;
    let (start, end, rate) = match &sim.maneuver {
        None => (&s.p0, sim.trace.final_state(), fit_rate(&sim.trace).ok()),
        Some(m) => (
            &m.zeta[0],
            m.zeta.last().expect("trace is never empty"),
            m.fit_frame_rate().ok(),
        ),
    };
    let limit = steady_state(start, &basis).map_err(ctx)?;
    let final_edge_errors = sim.trace.final_edge_errors().to_vec();
    let report = MetricsReport {
        name: s.name.clone(),
        n: s.n,
        dimension: s.dim,
        rank: spec.rank(),
        null_dim: spec.null_dim(),
        lambda_plus_min: spec.lambda_plus_min().unwrap_or(0.0),
        lambda_max: spec.lambda_max(),
        dt: s.dt,
        horizon: s.horizon,
        steps: sim.trace.len() - 1,
        seed: s.seed(),
        max_final_edge_error: final_edge_errors.iter().cloned().fold(0.0, f64::max),
        final_edge_errors,
        projection_residual: (end.as_vector() - limit.as_vector()).norm(),
        fitted_rate: rate,
        max_frame_residual: sim
            .maneuver
            .as_ref()
            .map(|m| m.frame_residuals.iter().cloned().fold(0.0, f64::max)),
        runtime_seconds: runtime,
    };
    let finite = report.final_edge_errors.iter().all(|x| x.is_finite())
        && report.projection_residual.is_finite()
        && report.fitted_rate.is_none_or(f64::is_finite)
        && report.max_frame_residual.is_none_or(f64::is_finite);
    if !finite {
        return Err(CliError::Numeric {
            scenario: s.name.clone(),
            source: symform::Error::NumericFailure("run produced non-finite metrics".into()),
        });
    }
    Ok(report)
}

/// Result of [`run`]: the metrics and the files written.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub metrics: MetricsReport,
    pub files: Vec<PathBuf>,
}

/// Simulates a scenario and writes its artefacts into `s.output`.
pub fn run(s: &Scenario) -> Result<RunOutput, CliError> {
    let started = Instant::now();
    let spec = spectrum(&s.laplacian, DEFAULT_RANK_TOL).map_err(|e| numeric(&s.name, e))?;
    let sim = simulate(s)?;
    let report = metrics(s, &sim, &spec, started.elapsed().as_secs_f64())?;

    fs::create_dir_all(&s.output).map_err(|e| CliError::io(&s.output, e))?;
    let mut files = Vec::new();
    let mut put = |name: &str| {
        let p = s.output.join(name);
        files.push(p.clone());
        p
    };
    write_trace_csv(&put("trace.csv"), &sim.trace, &s.laplacian)?;
    if let Some(m) = &sim.maneuver {
        write_reference_csv(&put("reference.csv"), &m.reference)?;
    }
    write_text(&put("scenario.json"), &(s.resolved_json() + "\n"))?;
    let json = serde_json::to_string_pretty(&report).expect("metrics serialize");
    write_text(&put("metrics.json"), &(json + "\n"))?;
    write_text(
        &put("paths.svg"),
        &paths_svg(&sim.trace, &format!("{}: agent paths", s.name)),
    )?;
    let labels: Vec<String> = s
        .laplacian
        .edges()
        .iter()
        .map(|e| format!("edge ({},{})", e.u, e.v))
        .collect();
    write_text(
        &put("errors.svg"),
        &errors_svg(&sim.trace, &labels, &format!("{}: symmetry errors", s.name)),
    )?;
    Ok(RunOutput { metrics: report, files })
}

/// One verification check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            passed: value <= tolerance,
            value,
            tolerance,
        }
    }

    fn equals(name: &str, value: usize, expected: usize) -> Self {
        Self {
            name: name.into(),
            passed: value == expected,
            value: value as f64,
            tolerance: expected as f64,
        }
    }
}

pub const PSD_TOL: f64 = 1e-9;
pub const PRODUCT_TOL: f64 = 1e-12;
pub const NULL_TOL: f64 = 1e-10;
pub const GRADIENT_TOL: f64 = 1e-6;
pub const GRADIENT_STEP: f64 = 1e-5;
pub const SOLVER_TOL: f64 = 1e-6;
const GRADIENT_SAMPLES: u64 = 10;

/// Largest relative gap between a central-difference gradient of the
/// potential and `Q p`, over seeded random configurations.
pub fn gradient_gap(q: &SymmetryLaplacian, seed: u64, samples: u64) -> symform::Result<f64> {
    let (n, d) = (q.node_count(), q.dim());
    let mut worst: f64 = 0.0;
    for k in 0..samples {
        let p = random_configuration(n, d, 5.0, seed.wrapping_add(k))?;
        let mut grad = DVector::zeros(n * d);
        for j in 0..n * d {
            let mut plus = p.as_vector().clone();
            let mut minus = plus.clone();
            plus[j] += GRADIENT_STEP;
            minus[j] -= GRADIENT_STEP;
            let fp = potential(&Configuration::new(d, plus)?, q)?;
            let fm = potential(&Configuration::new(d, minus)?, q)?;
            grad[j] = (fp - fm) / (2.0 * GRADIENT_STEP);
        }
        let qp = q.apply(&p)?;
        worst = worst.max((grad - &qp).norm() / qp.norm().max(1.0));
    }
    Ok(worst)
}

/// Runs the invariant suite on the scenario's Laplacian.
pub fn verify(s: &Scenario) -> Result<Vec<Check>, CliError> {
    let ctx = |e| numeric(&s.name, e);
    let q = &s.laplacian;
    let (n, d) = (q.node_count(), q.dim());
    let mut checks = vec![Check::at_most("symmetric", q.asymmetry(), PRODUCT_TOL)];
    let spec = spectrum(q, DEFAULT_RANK_TOL).map_err(ctx)?;
    checks.push(Check::at_most("positive semidefinite", -spec.lambda_min(), PSD_TOL));
    checks.push(Check::equals("rank", spec.rank(), d * n - d));
    checks.push(Check::equals("null dimension", spec.null_dim(), d));
    let product = q.product_form().map_err(ctx)?;
    checks.push(Check::at_most("Q = E Eᵀ", (product - q.matrix()).amax(), PRODUCT_TOL));
    let basis = basis_of(q).map_err(ctx)?;
    checks.push(Check::at_most(
        "Q V₀ = 0",
        (q.matrix() * basis.matrix()).amax(),
        NULL_TOL,
    ));
    if let Some(cube) = &s.cube {
        checks.push(Check::at_most(
            "edge sum = composed form",
            (cube.composed_form() - q.matrix()).amax(),
            PRODUCT_TOL,
        ));
    }
    let seed = s.seed().unwrap_or(0);
    checks.push(Check::at_most(
        "gradient = Q p",
        gradient_gap(q, seed, GRADIENT_SAMPLES).map_err(ctx)?,
        GRADIENT_TOL,
    ));
    let rk4 = integrate(q, &s.p0, s.dt, s.horizon, IntegrationMethod::Rk4).map_err(ctx)?;
    let exact = integrate(q, &s.p0, s.dt, s.horizon, IntegrationMethod::ClosedForm).map_err(ctx)?;
    let scale = s.p0.as_vector().amax().max(1.0);
    let gap = rk4
        .states
        .iter()
        .zip(&exact.states)
        .map(|(a, b)| (a.as_vector() - b.as_vector()).amax())
        .fold(0.0, f64::max);
    checks.push(Check::at_most("RK4 = closed form", gap / scale, SOLVER_TOL));
    Ok(checks)
}

/// Like [`verify`], but failed checks become [`CliError::Verification`].
pub fn verify_strict(s: &Scenario) -> Result<Vec<Check>, CliError> {
    let checks = verify(s)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(CliError::Verification {
            scenario: s.name.clone(),
            failed,
        });
    }
    Ok(checks)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub rank: usize,
    pub expected_rank: usize,
    pub lambda_plus_min: f64,
    pub checks: Vec<Check>,
}

impl SweepRow {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Verifies the path scenario for every `n` in the range, one thread each.
pub fn sweep(n_from: usize, n_to: usize, seed: u64) -> Result<Vec<SweepRow>, CliError> {
    if n_from < 3 || n_to < n_from {
        return Err(CliError::config(
            "sweep",
            format!("need 3 <= n-from <= n-to, got {n_from}..{n_to}"),
        ));
    }
    let results: Vec<Result<SweepRow, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (n_from..=n_to)
            .map(|n| {
                scope.spawn(move || {
                    let file = ScenarioFile {
                        kind: Kind::Planar,
                        n,
                        seed: Some(seed),
                        ..ScenarioFile::default()
                    };
                    let s = resolve(file, &format!("sweep_c{n}"))?;
                    let checks = verify(&s)?;
                    let spec = spectrum(&s.laplacian, DEFAULT_RANK_TOL).map_err(|e| numeric(&s.name, e))?;
                    Ok(SweepRow {
                        n,
                        rank: spec.rank(),
                        expected_rank: 2 * n - 2,
                        lambda_plus_min: spec.lambda_plus_min().unwrap_or(0.0),
                        checks,
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    results.into_iter().collect()
}

/// Runs several scenarios concurrently; each writes to its own directory.
pub fn run_all(scenarios: &[Scenario]) -> Vec<Result<RunOutput, CliError>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = scenarios.iter().map(|s| scope.spawn(move || run(s))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("run worker panicked"))
            .collect()
    })
}
