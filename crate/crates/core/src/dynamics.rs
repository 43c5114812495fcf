//! The stationary flow `p' = -Q p`: symmetry-forcing potential, gradient
//! control law, fixed-step integration and exponential-rate fitting.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::laplacian::{spectrum, Spectrum, SymmetryLaplacian, DEFAULT_RANK_TOL};
use crate::ode::{rk4_step, time_grid};

/// Largest accepted `Δt · λ_max` for fixed-step integration.
pub const MAX_STEP_FACTOR: f64 = 0.5;

/// Default `Δt · λ_max` when no step is given.
pub const DEFAULT_STEP_FACTOR: f64 = 0.05;

/// Default horizon in units of the slowest time constant `1/λ₊_min`.
pub const DEFAULT_HORIZON_FACTOR: f64 = 40.0;

/// Error norms below this are treated as underflow by [`fit_rate`].
pub const UNDERFLOW: f64 = 1e-14;

/// Error norms below this fraction of the initial error sit at the roundoff
/// floor of the state and are excluded by [`fit_rate`] as well.
pub const NOISE_FLOOR: f64 = 1e-10;

/// Stacked agent positions; agent `i` (1-based) occupies entries `d(i-1)..di`.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    d: usize,
    data: DVector<f64>,
}

impl Configuration {
    pub fn new(d: usize, data: DVector<f64>) -> Result<Self> {
        if d == 0 || !data.len().is_multiple_of(d) {
            return invalid(format!("length {} is not a multiple of dimension {d}", data.len()));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return invalid("configuration has non-finite entries");
        }
        Ok(Self { d, data })
    }

    pub fn from_agents(agents: &[Vec<f64>]) -> Result<Self> {
        let d = agents.first().map(Vec::len).unwrap_or(0);
        if agents.iter().any(|a| a.len() != d) {
            return invalid("agents have inconsistent dimensions");
        }
        Self::new(
            d,
            DVector::from_iterator(d * agents.len(), agents.iter().flatten().copied()),
        )
    }

    pub fn zeros(n: usize, d: usize) -> Self {
        Self {
            d,
            data: DVector::zeros(n * d),
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn agent_count(&self) -> usize {
        self.data.len() / self.d
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.data
    }

    pub fn into_vector(self) -> DVector<f64> {
        self.data
    }

    /// Position of the 1-based agent `i`.
    pub fn agent(&self, i: usize) -> DVector<f64> {
        self.data.rows((i - 1) * self.d, self.d).into_owned()
    }

    pub fn agents(&self) -> Vec<DVector<f64>> {
        (1..=self.agent_count()).map(|i| self.agent(i)).collect()
    }

    pub(crate) fn check_shape(&self, n: usize, d: usize) -> Result<()> {
        if self.d != d || self.data.len() != n * d {
            return invalid(format!(
                "configuration has {} agents in dimension {}, expected {n} in dimension {d}",
                self.agent_count(),
                self.d
            ));
        }
        Ok(())
    }
}

/// Uniform random positions in `[-half_width, half_width]^d`, reproducible from `seed`.
pub fn random_configuration(n: usize, d: usize, half_width: f64, seed: u64) -> Result<Configuration> {
    if !(half_width > 0.0) || !half_width.is_finite() {
        return invalid(format!("box half-width must be positive, got {half_width}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = DVector::from_fn(n * d, |_, _| rng.random_range(-half_width..=half_width));
    Configuration::new(d, data)
}

/// `r_e = p_u - τ_uvᵀ p_v` for every edge, in edge order.
pub fn edge_residuals(p: &Configuration, q: &SymmetryLaplacian) -> Result<Vec<DVector<f64>>> {
    p.check_shape(q.node_count(), q.dim())?;
    Ok(q.edges()
        .iter()
        .map(|e| p.agent(e.u) - e.rotation.matrix().tr_mul(&p.agent(e.v)))
        .collect())
}

/// Symmetry-forcing potential `½ Σ_e ‖p_u - τ(γ_vu) p_v‖²`.
pub fn potential(p: &Configuration, q: &SymmetryLaplacian) -> Result<f64> {
    Ok(0.5 * edge_residuals(p, q)?.iter().map(|r| r.norm_squared()).sum::<f64>())
}

/// `½ pᵀ Q p`, equal to [`potential`].
pub fn potential_quadratic(p: &Configuration, q: &SymmetryLaplacian) -> Result<f64> {
    Ok(0.5 * p.as_vector().dot(&q.apply(p)?))
}

/// Per-edge symmetry error norms.
pub fn edge_errors(p: &Configuration, q: &SymmetryLaplacian) -> Result<Vec<f64>> {
    Ok(edge_residuals(p, q)?.iter().map(|r| r.norm()).collect())
}

/// The gradient control `-Q p`.
pub fn control(p: &Configuration, q: &SymmetryLaplacian) -> Result<Configuration> {
    Configuration::new(p.dim(), -q.apply(p)?)
}

/// The same control assembled agent by agent: `u_i = Σ_j (τ(γ_ji) p_j - p_i)`
/// over the neighbours `j` of `i`.
pub fn control_per_agent(p: &Configuration, q: &SymmetryLaplacian) -> Result<Configuration> {
    p.check_shape(q.node_count(), q.dim())?;
    let d = q.dim();
    let mut u = DVector::zeros(p.as_vector().len());
    for e in q.edges() {
        let (pu, pv) = (p.agent(e.u), p.agent(e.v));
        let r = e.rotation.matrix();
        let at_u = r.tr_mul(&pv) - &pu;
        let at_v = r * &pu - &pv;
        let mut block = u.rows_mut((e.u - 1) * d, d);
        block += at_u;
        let mut block = u.rows_mut((e.v - 1) * d, d);
        block += at_v;
    }
    Configuration::new(d, u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntegrationMethod {
    /// Classical fixed-step fourth-order Runge-Kutta.
    #[default]
    Rk4,
    /// Exact solution sampled on the same grid through the eigen-decomposition.
    ClosedForm,
}

/// A run sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace {
    pub dt: f64,
    pub times: Vec<f64>,
    pub states: Vec<Configuration>,
    /// Per-edge error norms at every step.
    pub edge_errors: Vec<Vec<f64>>,
    /// `‖Eᵀ p‖` at every step.
    pub total_errors: Vec<f64>,
    pub potentials: Vec<f64>,
    pub seed: Option<u64>,
}

impl SimulationTrace {
    pub(crate) fn with_capacity(dt: f64, steps: usize) -> Self {
        Self {
            dt,
            times: Vec::with_capacity(steps),
            states: Vec::with_capacity(steps),
            edge_errors: Vec::with_capacity(steps),
            total_errors: Vec::with_capacity(steps),
            potentials: Vec::with_capacity(steps),
            seed: None,
        }
    }

    /// Records a sample whose error terms are measured on `measured`
    /// (the state itself, or its shifted version when maneuvering).
    pub(crate) fn record(
        &mut self,
        t: f64,
        state: Configuration,
        measured: &Configuration,
        q: &SymmetryLaplacian,
    ) -> Result<()> {
        let errors = edge_errors(measured, q)?;
        let total = errors.iter().map(|e| e * e).sum::<f64>().sqrt();
        self.potentials.push(0.5 * total * total);
        self.total_errors.push(total);
        self.edge_errors.push(errors);
        self.times.push(t);
        self.states.push(state);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &Configuration {
        self.states.last().expect("trace is never empty")
    }

    pub fn final_edge_errors(&self) -> &[f64] {
        self.edge_errors.last().expect("trace is never empty")
    }
}

/// Default step `DEFAULT_STEP_FACTOR / λ_max`.
pub fn default_step(s: &Spectrum) -> f64 {
    DEFAULT_STEP_FACTOR / s.lambda_max().max(f64::MIN_POSITIVE)
}

/// Default horizon `40 / λ₊_min`.
pub fn default_horizon(s: &Spectrum) -> Result<f64> {
    s.lambda_plus_min()
        .map(|l| DEFAULT_HORIZON_FACTOR / l)
        .ok_or_else(|| Error::NumericFailure("Laplacian has no positive eigenvalue".into()))
}

pub(crate) fn check_step(s: &Spectrum, dt: f64, horizon: f64) -> Result<()> {
    if !(dt > 0.0) || !dt.is_finite() {
        return invalid(format!("time step must be positive, got {dt}"));
    }
    if !(horizon >= dt) || !horizon.is_finite() {
        return invalid(format!("horizon {horizon} must be finite and at least the step {dt}"));
    }
    let limit = MAX_STEP_FACTOR / s.lambda_max();
    if dt > limit {
        return invalid(format!(
            "time step {dt} exceeds the stability guard {limit:.6e} (= {MAX_STEP_FACTOR}/λ_max); try dt = {:.6e}",
            default_step(s)
        ));
    }
    Ok(())
}

/// Integrates `p' = -Q p` from `p0` over `[0, horizon]` on a uniform grid.
pub fn integrate(
    q: &SymmetryLaplacian,
    p0: &Configuration,
    dt: f64,
    horizon: f64,
    method: IntegrationMethod,
) -> Result<SimulationTrace> {
    p0.check_shape(q.node_count(), q.dim())?;
    let s = spectrum(q, DEFAULT_RANK_TOL)?;
    check_step(&s, dt, horizon)?;
    let grid = time_grid(dt, horizon);
    let mut trace = SimulationTrace::with_capacity(dt, grid.len());
    let d = q.dim();
    match method {
        IntegrationMethod::Rk4 => {
            let mut f = |_t: f64, y: &DVector<f64>| -(q.matrix() * y);
            let mut y = p0.as_vector().clone();
            for (k, &t) in grid.iter().enumerate() {
                if k > 0 {
                    y = rk4_step(&mut f, grid[k - 1], &y, dt);
                }
                let state = Configuration::new(d, y.clone())?;
                trace.record(t, state.clone(), &state, q)?;
            }
        }
        IntegrationMethod::ClosedForm => {
            for &t in &grid {
                let state = s.propagate(p0, t)?;
                trace.record(t, state.clone(), &state, q)?;
            }
        }
    }
    Ok(trace)
}

/// Least-squares slope of `ln‖Eᵀp‖` against time over the final third of the
/// trace, truncated where the error falls below [`UNDERFLOW`] or below
/// [`NOISE_FLOOR`] times the initial error. A converging
/// run yields approximately `-λ₊_min`.
pub fn fit_rate(trace: &SimulationTrace) -> Result<f64> {
    fit_log_slope(&trace.times, &trace.total_errors)
}

pub(crate) fn fit_log_slope(times: &[f64], errors: &[f64]) -> Result<f64> {
    let floor = errors
        .first()
        .map_or(UNDERFLOW, |&e0| (NOISE_FLOOR * e0).max(UNDERFLOW));
    let end = errors.iter().position(|&e| !(e >= floor)).unwrap_or(errors.len());
    if end < 3 {
        return Err(Error::NumericFailure(
            "symmetry error is zero from the start; no decay to fit".into(),
        ));
    }
    let start = end - end / 3;
    let (ts, ls): (Vec<f64>, Vec<f64>) = (start..end).map(|k| (times[k], errors[k].ln())).unzip();
    let m = ts.len() as f64;
    let tm = ts.iter().sum::<f64>() / m;
    let lm = ls.iter().sum::<f64>() / m;
    let num: f64 = ts.iter().zip(&ls).map(|(t, l)| (t - tm) * (l - lm)).sum();
    let den: f64 = ts.iter().map(|t| (t - tm) * (t - tm)).sum();
    if den == 0.0 {
        return Err(Error::NumericFailure("fit window has a single time".into()));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laplacian::{build_laplacian, null_basis, steady_state};
    use crate::symgroup::assignment;
    use crate::topology::cycle_minus_edge;

    fn setup(n: usize) -> SymmetryLaplacian {
        build_laplacian(&cycle_minus_edge(n, (n, 1)).unwrap(), &assignment(n).unwrap()).unwrap()
    }

    #[test]
    fn potential_examples() {
        let q = setup(3);
        let p = Configuration::from_agents(&[vec![1.0, 0.0], vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!((potential(&p, &q).unwrap() - 3.0).abs() < 1e-12);
        assert!((potential_quadratic(&p, &q).unwrap() - 3.0).abs() < 1e-12);
        let errs = edge_errors(&p, &q).unwrap();
        assert!((errs.iter().map(|e| e * e).sum::<f64>() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_configurations_are_equilibria() {
        let n = 5;
        let (g, tau) = (cycle_minus_edge(n, (n, 1)).unwrap(), assignment(n).unwrap());
        let q = build_laplacian(&g, &tau).unwrap();
        let p = null_basis(&g, &tau)
            .unwrap()
            .embed(&DVector::from_vec(vec![0.4, 2.0]))
            .unwrap();
        assert!(potential(&p, &q).unwrap() < 1e-24);
        assert!(edge_errors(&p, &q).unwrap().iter().all(|&e| e < 1e-12));
        assert!(control(&p, &q).unwrap().as_vector().amax() < 1e-12);
    }

    #[test]
    fn two_agent_control_by_hand() {
        // tree on C_3 with edges (1,2),(2,3); only agent 1 is away from the origin
        let q = setup(3);
        let p = Configuration::from_agents(&[vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let u = control(&p, &q).unwrap();
        let per_agent = control_per_agent(&p, &q).unwrap();
        let r = q.edges()[0].rotation.matrix();
        // u_1 = τ(γ_21) p_2 - p_1 = -p_1, u_2 = τ(γ_12) p_1 - p_2 = R p_1, u_3 = 0
        assert!((u.agent(1) - DVector::from_vec(vec![-1.0, 0.0])).amax() < 1e-15);
        assert!((u.agent(2) - r * DVector::from_vec(vec![1.0, 0.0])).amax() < 1e-15);
        assert!(u.agent(3).amax() < 1e-15);
        assert!((u.as_vector() - per_agent.as_vector()).amax() < 1e-15);
    }

    #[test]
    fn configuration_checks() {
        assert!(Configuration::new(2, DVector::zeros(5)).is_err());
        assert!(Configuration::new(2, DVector::from_vec(vec![f64::NAN, 0.0])).is_err());
        assert!(Configuration::from_agents(&[vec![1.0], vec![1.0, 2.0]]).is_err());
        let q = setup(4);
        assert!(potential(&Configuration::zeros(3, 2), &q).is_err());
        assert!(control(&Configuration::zeros(4, 3), &q).is_err());
    }

    #[test]
    fn random_configuration_is_seeded() {
        let a = random_configuration(6, 2, 5.0, 42).unwrap();
        let b = random_configuration(6, 2, 5.0, 42).unwrap();
        let c = random_configuration(6, 2, 5.0, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.as_vector().amax() <= 5.0);
        assert!(random_configuration(6, 2, 0.0, 1).is_err());
    }

    #[test]
    fn integrate_guards_step() {
        let q = setup(4);
        let s = spectrum(&q, DEFAULT_RANK_TOL).unwrap();
        let p0 = random_configuration(4, 2, 1.0, 1).unwrap();
        let err = integrate(&q, &p0, 1.0 / s.lambda_max(), 10.0, IntegrationMethod::Rk4).unwrap_err();
        assert!(err.to_string().contains("try dt"));
        assert!(integrate(&q, &p0, 0.0, 1.0, IntegrationMethod::Rk4).is_err());
        assert!(integrate(&q, &p0, 0.01, 0.001, IntegrationMethod::Rk4).is_err());
    }

    #[test]
    fn equilibrium_trace_is_constant() {
        let n = 4;
        let (g, tau) = (cycle_minus_edge(n, (n, 1)).unwrap(), assignment(n).unwrap());
        let q = build_laplacian(&g, &tau).unwrap();
        let p0 = null_basis(&g, &tau)
            .unwrap()
            .embed(&DVector::from_vec(vec![1.0, 1.0]))
            .unwrap();
        let trace = integrate(&q, &p0, 0.01, 1.0, IntegrationMethod::Rk4).unwrap();
        for s in &trace.states {
            assert!((s.as_vector() - p0.as_vector()).amax() < 1e-13);
        }
        assert!(fit_rate(&trace).is_err());
    }

    #[test]
    fn integrate_converges_and_potential_decreases() {
        let n = 6;
        let (g, tau) = (cycle_minus_edge(n, (n, 1)).unwrap(), assignment(n).unwrap());
        let q = build_laplacian(&g, &tau).unwrap();
        let s = spectrum(&q, DEFAULT_RANK_TOL).unwrap();
        let p0 = random_configuration(n, 2, 5.0, 7).unwrap();
        let trace = integrate(
            &q,
            &p0,
            default_step(&s),
            default_horizon(&s).unwrap(),
            IntegrationMethod::Rk4,
        )
        .unwrap();
        let limit = steady_state(&p0, &null_basis(&g, &tau).unwrap()).unwrap();
        assert!((trace.final_state().as_vector() - limit.as_vector()).amax() < 1e-6);
        // Non-increasing up to roundoff once the potential reaches the noise floor.
        let slack = 1e-20 * trace.potentials[0];
        assert!(trace.potentials.windows(2).all(|w| w[1] <= w[0] + slack));
        assert!(trace.final_edge_errors().iter().all(|&e| e < 1e-8));
        let rate = fit_rate(&trace).unwrap();
        let lambda = s.lambda_plus_min().unwrap();
        assert!((rate + lambda).abs() < 0.05 * lambda, "rate {rate} vs {lambda}");
    }
}
