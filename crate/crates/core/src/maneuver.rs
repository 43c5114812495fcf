//! Formation maneuvering along a virtual reference `(r, R, s)`.
//!
//! The reference obeys `r' = v`, `R' = Ω R`, `s' = α s`. Agents apply
//!
//! ```text
//! u = -Q c + 1 ⊗ v + (I ⊗ Ω + α I) c,    c = p - 1 ⊗ r
//! ```
//!
//! In the moving frame `ζ = (1/s)(I ⊗ Rᵀ) c` the planar closed loop reduces to
//! the stationary flow `ζ' = -Q ζ`.
//!
//! Inputs are piecewise constant. On a simulation grid they are sampled at the
//! start of each step and held for the whole step, and the reference is
//! advanced exactly under the held input. Agents and reference therefore see
//! the same reference at every Runge-Kutta stage.

use nalgebra::{DMatrix, DVector, Vector3};

use crate::dynamics::{check_step, fit_log_slope, Configuration, SimulationTrace};
use crate::error::{invalid, Result};
use crate::laplacian::{spectrum, SymmetryLaplacian, DEFAULT_RANK_TOL};
use crate::ode::{rk4_step, time_grid};
use crate::symgroup::{rotation2, skew, RotationElement};

/// Angular velocity of the reference frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngularVelocity {
    Planar(f64),
    Spatial(Vector3<f64>),
}

impl AngularVelocity {
    pub fn zero(d: usize) -> Self {
        if d == 3 {
            Self::Spatial(Vector3::zeros())
        } else {
            Self::Planar(0.0)
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Planar(_) => 2,
            Self::Spatial(_) => 3,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Planar(w) => *w == 0.0,
            Self::Spatial(w) => w.iter().all(|&x| x == 0.0),
        }
    }

    fn is_finite(&self) -> bool {
        match self {
            Self::Planar(w) => w.is_finite(),
            Self::Spatial(w) => w.iter().all(|x| x.is_finite()),
        }
    }

    /// The skew-symmetric generator `Ω`.
    pub fn generator(&self) -> DMatrix<f64> {
        match self {
            Self::Planar(w) => DMatrix::from_row_slice(2, 2, &[0.0, -w, *w, 0.0]),
            Self::Spatial(w) => DMatrix::from_column_slice(3, 3, skew(w).as_slice()),
        }
    }

    /// `exp(Ω τ)`.
    pub fn rotation_over(&self, tau: f64) -> Result<RotationElement> {
        match self {
            Self::Planar(w) => rotation2(w * tau),
            Self::Spatial(w) => {
                let rate = w.norm();
                if rate == 0.0 {
                    RotationElement::identity(3)
                } else {
                    RotationElement::axis_angle(&(w / rate), rate * tau)
                }
            }
        }
    }
}

/// A signal held constant from each segment start until the next one.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstant<T> {
    segments: Vec<(f64, T)>,
}

impl<T> PiecewiseConstant<T> {
    /// Segments must start at `t = 0` and have strictly increasing start times,
    /// so they cover `[0, ∞)` without gaps.
    pub fn new(segments: Vec<(f64, T)>) -> Result<Self> {
        match segments.first() {
            None => return invalid("piecewise signal needs at least one segment"),
            Some((t0, _)) if *t0 != 0.0 => {
                return invalid(format!("first segment must start at t = 0, starts at {t0}"))
            }
            _ => {}
        }
        for w in segments.windows(2) {
            if !(w[1].0 > w[0].0) || !w[1].0.is_finite() {
                return invalid(format!(
                    "segment start times must increase strictly, got {} after {}",
                    w[1].0, w[0].0
                ));
            }
        }
        Ok(Self { segments })
    }

    pub fn constant(value: T) -> Self {
        Self {
            segments: vec![(0.0, value)],
        }
    }

    pub fn segments(&self) -> &[(f64, T)] {
        &self.segments
    }

    pub fn value_at(&self, t: f64) -> &T {
        let k = self.segments.partition_point(|(start, _)| *start <= t);
        &self.segments[k.saturating_sub(1)].1
    }
}

/// Input values in force at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct InputSample {
    pub velocity: DVector<f64>,
    pub angular: AngularVelocity,
    pub scale_rate: f64,
}

/// Piecewise-constant `v(t)`, `ω(t)` and `α(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceInputs {
    d: usize,
    velocity: PiecewiseConstant<DVector<f64>>,
    angular: PiecewiseConstant<AngularVelocity>,
    scale_rate: PiecewiseConstant<f64>,
}

impl ReferenceInputs {
    pub fn new(
        d: usize,
        velocity: PiecewiseConstant<DVector<f64>>,
        angular: PiecewiseConstant<AngularVelocity>,
        scale_rate: PiecewiseConstant<f64>,
    ) -> Result<Self> {
        if !(d == 2 || d == 3) {
            return invalid(format!("dimension must be 2 or 3, got {d}"));
        }
        for (t, v) in velocity.segments() {
            if v.len() != d || v.iter().any(|x| !x.is_finite()) {
                return invalid(format!("velocity segment at t = {t} must be a finite {d}-vector"));
            }
        }
        for (t, w) in angular.segments() {
            if w.dim() != d || !w.is_finite() {
                return invalid(format!(
                    "angular velocity segment at t = {t} must be finite and {d}-dimensional"
                ));
            }
        }
        for (t, a) in scale_rate.segments() {
            if !a.is_finite() {
                return invalid(format!("scale rate segment at t = {t} must be finite"));
            }
        }
        Ok(Self {
            d,
            velocity,
            angular,
            scale_rate,
        })
    }

    /// No motion at all: the reference stays where it starts.
    pub fn zero(d: usize) -> Result<Self> {
        Self::new(
            d,
            PiecewiseConstant::constant(DVector::zeros(d)),
            PiecewiseConstant::constant(AngularVelocity::zero(d)),
            PiecewiseConstant::constant(0.0),
        )
    }

    /// Planar inputs following timed waypoints `(t_k, x_k)`, starting at `t_0 = 0`.
    ///
    /// Each leg moves at the chord velocity. Headings at the waypoints come
    /// from finite differences of the path and the frame turns at the rate
    /// that carries it from one waypoint heading to the next over the leg.
    /// After the final waypoint the reference stops. Returns the inputs and
    /// the heading at the first waypoint, which is the natural initial frame
    /// angle.
    pub fn from_waypoints(waypoints: &[(f64, [f64; 2])], scale_rate: PiecewiseConstant<f64>) -> Result<(Self, f64)> {
        if waypoints.len() < 2 {
            return invalid("need at least two waypoints");
        }
        if waypoints[0].0 != 0.0 {
            return invalid("first waypoint must be at t = 0");
        }
        let diff = |a: usize, b: usize| {
            let (pa, pb) = (waypoints[a].1, waypoints[b].1);
            (pb[1] - pa[1]).atan2(pb[0] - pa[0])
        };
        let last = waypoints.len() - 1;
        let headings: Vec<f64> = (0..=last)
            .map(|k| match k {
                0 => diff(0, 1),
                k if k == last => diff(last - 1, last),
                k => diff(k - 1, k + 1),
            })
            .collect();
        let mut velocity = Vec::with_capacity(waypoints.len());
        let mut angular = Vec::with_capacity(waypoints.len());
        for k in 0..last {
            let (t0, a) = waypoints[k];
            let (t1, b) = waypoints[k + 1];
            let span = t1 - t0;
            if !(span > 0.0) {
                return invalid(format!("waypoint times must increase, got {t1} after {t0}"));
            }
            velocity.push((t0, DVector::from_vec(vec![(b[0] - a[0]) / span, (b[1] - a[1]) / span])));
            angular.push((
                t0,
                AngularVelocity::Planar(wrap_angle(headings[k + 1] - headings[k]) / span),
            ));
        }
        let t_end = waypoints[last].0;
        velocity.push((t_end, DVector::zeros(2)));
        angular.push((t_end, AngularVelocity::Planar(0.0)));
        let inputs = Self::new(
            2,
            PiecewiseConstant::new(velocity)?,
            PiecewiseConstant::new(angular)?,
            scale_rate,
        )?;
        Ok((inputs, headings[0]))
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn velocity(&self) -> &PiecewiseConstant<DVector<f64>> {
        &self.velocity
    }

    pub fn angular(&self) -> &PiecewiseConstant<AngularVelocity> {
        &self.angular
    }

    pub fn scale_rate(&self) -> &PiecewiseConstant<f64> {
        &self.scale_rate
    }

    pub fn sample(&self, t: f64) -> InputSample {
        InputSample {
            velocity: self.velocity.value_at(t).clone(),
            angular: *self.angular.value_at(t),
            scale_rate: *self.scale_rate.value_at(t),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.velocity
            .segments()
            .iter()
            .all(|(_, v)| v.iter().all(|&x| x == 0.0))
            && self.angular.segments().iter().all(|(_, w)| w.is_zero())
            && self.scale_rate.segments().iter().all(|(_, a)| *a == 0.0)
    }
}

fn wrap_angle(a: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    (a + PI).rem_euclid(TAU) - PI
}

/// The virtual state `(r, R, s)` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceState {
    pub t: f64,
    pub r: DVector<f64>,
    pub rotation: RotationElement,
    pub s: f64,
}

impl ReferenceState {
    pub fn new(t: f64, r: DVector<f64>, rotation: RotationElement, s: f64) -> Result<Self> {
        if r.len() != rotation.dim() {
            return invalid("reference position and rotation dimensions differ");
        }
        if !(s > 0.0) || !s.is_finite() {
            return invalid(format!("reference scale must be positive and finite, got {s}"));
        }
        if r.iter().any(|x| !x.is_finite()) || !t.is_finite() {
            return invalid("reference state must be finite");
        }
        Ok(Self { t, r, rotation, s })
    }

    /// `r = 0`, `R = I`, `s = 1` at `t = 0`.
    pub fn identity(d: usize) -> Result<Self> {
        Self::new(0.0, DVector::zeros(d), RotationElement::identity(d)?, 1.0)
    }

    pub fn dim(&self) -> usize {
        self.r.len()
    }

    /// Exact evolution over `tau` under a held input.
    pub fn advance(&self, input: &InputSample, tau: f64) -> Result<Self> {
        let r = if input.velocity.iter().all(|&x| x == 0.0) {
            self.r.clone()
        } else {
            &self.r + &input.velocity * tau
        };
        let rotation = if input.angular.is_zero() {
            self.rotation.clone()
        } else {
            input.angular.rotation_over(tau)?.compose(&self.rotation)?
        };
        let s = if input.scale_rate == 0.0 {
            self.s
        } else {
            self.s * (input.scale_rate * tau).exp()
        };
        Ok(Self {
            t: self.t + tau,
            r,
            rotation,
            s,
        })
    }
}

/// Reference states on the grid `0, Δt, ..., ≥ T`, with inputs sampled at the
/// start of each step.
pub fn propagate_reference(
    inputs: &ReferenceInputs,
    state0: &ReferenceState,
    dt: f64,
    horizon: f64,
) -> Result<Vec<ReferenceState>> {
    if inputs.dim() != state0.dim() {
        return invalid("reference inputs and initial state have different dimensions");
    }
    if !(dt > 0.0) || !dt.is_finite() || !(horizon >= dt) || !horizon.is_finite() {
        return invalid(format!("need 0 < dt <= horizon, got dt = {dt}, horizon = {horizon}"));
    }
    let grid = time_grid(dt, horizon);
    let mut out = Vec::with_capacity(grid.len());
    let mut state = ReferenceState {
        t: 0.0,
        ..state0.clone()
    };
    for (k, &t) in grid.iter().enumerate() {
        if k > 0 {
            let input = inputs.sample(grid[k - 1]);
            state = state.advance(&input, dt)?;
        }
        state.t = t;
        out.push(state.clone());
    }
    Ok(out)
}

/// `c = p - 1 ⊗ r`.
pub fn shifted_configuration(p: &Configuration, reference: &ReferenceState) -> Result<Configuration> {
    let d = reference.dim();
    p.check_shape(p.agent_count(), d)?;
    Configuration::new(d, shift(p.as_vector(), &reference.r))
}

fn shift(y: &DVector<f64>, r: &DVector<f64>) -> DVector<f64> {
    let d = r.len();
    DVector::from_fn(y.len(), |i, _| y[i] - r[i % d])
}

fn velocity_field(
    q: &SymmetryLaplacian,
    y: &DVector<f64>,
    reference: &ReferenceState,
    input: &InputSample,
) -> DVector<f64> {
    let d = reference.dim();
    let c = shift(y, &reference.r);
    let mut u = -(q.matrix() * &c);
    if input.velocity.iter().any(|&x| x != 0.0) {
        for (i, x) in u.iter_mut().enumerate() {
            *x += input.velocity[i % d];
        }
    }
    if !input.angular.is_zero() {
        let omega = input.angular.generator();
        for i in 0..c.len() / d {
            let mut block = u.rows_mut(i * d, d);
            block += &omega * c.rows(i * d, d);
        }
    }
    if input.scale_rate != 0.0 {
        u += &c * input.scale_rate;
    }
    u
}

/// `u = -Q c + 1 ⊗ v + (I ⊗ Ω + α I) c`.
pub fn maneuver_control(
    p: &Configuration,
    reference: &ReferenceState,
    input: &InputSample,
    q: &SymmetryLaplacian,
) -> Result<Configuration> {
    p.check_shape(q.node_count(), q.dim())?;
    if reference.dim() != q.dim() || input.velocity.len() != q.dim() || input.angular.dim() != q.dim() {
        return invalid("reference, inputs and Laplacian dimensions differ");
    }
    Configuration::new(q.dim(), velocity_field(q, p.as_vector(), reference, input))
}

/// `ζ = (1/s)(I ⊗ Rᵀ) c`.
#[derive(Debug, Clone, PartialEq)]
pub struct MovingFrameState {
    pub zeta: Configuration,
}

impl MovingFrameState {
    /// Inverse map back to inertial positions, `p = 1 ⊗ r + s (I ⊗ R) ζ`.
    pub fn to_configuration(&self, reference: &ReferenceState) -> Result<Configuration> {
        let d = reference.dim();
        self.zeta.check_shape(self.zeta.agent_count(), d)?;
        let r = reference.rotation.matrix();
        let z = self.zeta.as_vector();
        let mut p = DVector::zeros(z.len());
        for i in 0..z.len() / d {
            let block = r * z.rows(i * d, d) * reference.s + &reference.r;
            p.rows_mut(i * d, d).copy_from(&block);
        }
        Configuration::new(d, p)
    }
}

pub fn moving_frame(p: &Configuration, reference: &ReferenceState) -> Result<MovingFrameState> {
    if !(reference.s > 0.0) {
        return invalid(format!("reference scale must be positive, got {}", reference.s));
    }
    let c = shifted_configuration(p, reference)?;
    Ok(MovingFrameState {
        zeta: Configuration::new(reference.dim(), to_frame(c.as_vector(), reference))?,
    })
}

fn to_frame(c: &DVector<f64>, reference: &ReferenceState) -> DVector<f64> {
    let d = reference.dim();
    let r = reference.rotation.matrix();
    let mut z = DVector::zeros(c.len());
    for i in 0..c.len() / d {
        z.rows_mut(i * d, d)
            .copy_from(&(r.tr_mul(&c.rows(i * d, d)) / reference.s));
    }
    z
}

/// Edge residual norms of the shifted configuration `c = p - 1 ⊗ r`.
pub fn shifted_errors(p: &Configuration, reference: &ReferenceState, q: &SymmetryLaplacian) -> Result<Vec<f64>> {
    crate::dynamics::edge_errors(&shifted_configuration(p, reference)?, q)
}

/// `‖ζ' + Q ζ‖` for the exact closed loop at the given frame state.
///
/// Under the augmented law `ζ' = -(I ⊗ Rᵀ) Q (I ⊗ R) ζ`, so the residual is
/// `‖(Q - (I ⊗ Rᵀ) Q (I ⊗ R)) ζ‖`. It vanishes in the plane, where every
/// rotation commutes with the edge rotations, and generally not in space.
pub fn frame_residual(zeta: &Configuration, reference: &ReferenceState, q: &SymmetryLaplacian) -> Result<f64> {
    zeta.check_shape(q.node_count(), q.dim())?;
    let d = q.dim();
    let r = reference.rotation.matrix();
    let z = zeta.as_vector();
    let mut rotated = DVector::zeros(z.len());
    for i in 0..q.node_count() {
        rotated.rows_mut(i * d, d).copy_from(&(r * z.rows(i * d, d)));
    }
    let qr = q.matrix() * rotated;
    let mut back = DVector::zeros(z.len());
    for i in 0..q.node_count() {
        back.rows_mut(i * d, d).copy_from(&r.tr_mul(&qr.rows(i * d, d)));
    }
    Ok((q.matrix() * z - back).norm())
}

/// A maneuvering run: the agent trace (errors measured on `c`), the
/// reference on the same grid and the moving-frame series.
#[derive(Debug, Clone)]
pub struct ManeuverTrace {
    pub trace: SimulationTrace,
    pub reference: Vec<ReferenceState>,
    pub zeta: Vec<Configuration>,
    /// `‖Eᵀ ζ‖` per step.
    pub zeta_errors: Vec<f64>,
    /// [`frame_residual`] per step.
    pub frame_residuals: Vec<f64>,
}

impl ManeuverTrace {
    /// Decay rate of the symmetry error in the moving frame.
    pub fn fit_frame_rate(&self) -> Result<f64> {
        fit_log_slope(&self.trace.times, &self.zeta_errors)
    }
}

/// Co-integrates the agents under the augmented law and the reference.
pub fn simulate_maneuver(
    q: &SymmetryLaplacian,
    p0: &Configuration,
    inputs: &ReferenceInputs,
    ref0: &ReferenceState,
    dt: f64,
    horizon: f64,
) -> Result<ManeuverTrace> {
    p0.check_shape(q.node_count(), q.dim())?;
    if inputs.dim() != q.dim() || ref0.dim() != q.dim() {
        return invalid("reference dimension does not match the Laplacian");
    }
    let s = spectrum(q, DEFAULT_RANK_TOL)?;
    check_step(&s, dt, horizon)?;
    let reference = propagate_reference(inputs, ref0, dt, horizon)?;
    let d = q.dim();
    let mut trace = SimulationTrace::with_capacity(dt, reference.len());
    let mut zeta = Vec::with_capacity(reference.len());
    let mut zeta_errors = Vec::with_capacity(reference.len());
    let mut frame_residuals = Vec::with_capacity(reference.len());
    let incidence = q.incidence()?;
    let mut y = p0.as_vector().clone();
    for (k, base) in reference.iter().enumerate() {
        if k > 0 {
            let prev = &reference[k - 1];
            let input = inputs.sample(prev.t);
            let mut failure = None;
            let mut f = |t: f64, state: &DVector<f64>| {
                let tau = t - prev.t;
                let at = if tau == 0.0 {
                    prev.clone()
                } else {
                    prev.advance(&input, tau).unwrap_or_else(|e| {
                        failure = Some(e);
                        prev.clone()
                    })
                };
                velocity_field(q, state, &at, &input)
            };
            y = rk4_step(&mut f, prev.t, &y, dt);
            if let Some(e) = failure {
                return Err(e);
            }
        }
        let state = Configuration::new(d, y.clone())?;
        let c = Configuration::new(d, shift(&y, &base.r))?;
        let z = Configuration::new(d, to_frame(c.as_vector(), base))?;
        zeta_errors.push(incidence.residuals(&z)?.norm());
        frame_residuals.push(frame_residual(&z, base, q)?);
        zeta.push(z);
        trace.record(base.t, state, &c, q)?;
    }
    Ok(ManeuverTrace {
        trace,
        reference,
        zeta,
        zeta_errors,
        frame_residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{control, integrate, random_configuration, IntegrationMethod};
    use crate::laplacian::{build_laplacian, null_basis};
    use crate::symgroup::assignment;
    use crate::topology::cycle_minus_edge;
    use std::f64::consts::FRAC_PI_2;

    fn setup(n: usize) -> SymmetryLaplacian {
        build_laplacian(&cycle_minus_edge(n, (n, 1)).unwrap(), &assignment(n).unwrap()).unwrap()
    }

    fn planar_inputs(v: [f64; 2], w: f64, a: f64) -> ReferenceInputs {
        ReferenceInputs::new(
            2,
            PiecewiseConstant::constant(DVector::from_vec(v.to_vec())),
            PiecewiseConstant::constant(AngularVelocity::Planar(w)),
            PiecewiseConstant::constant(a),
        )
        .unwrap()
    }

    #[test]
    fn piecewise_lookup_and_gaps() {
        let pc = PiecewiseConstant::new(vec![(0.0, 1), (1.0, 2), (2.5, 3)]).unwrap();
        assert_eq!(*pc.value_at(0.0), 1);
        assert_eq!(*pc.value_at(0.99), 1);
        assert_eq!(*pc.value_at(1.0), 2);
        assert_eq!(*pc.value_at(100.0), 3);
        assert!(PiecewiseConstant::new(vec![(0.5, 1)]).is_err());
        assert!(PiecewiseConstant::new(vec![(0.0, 1), (0.0, 2)]).is_err());
        assert!(PiecewiseConstant::<i32>::new(vec![]).is_err());
    }

    #[test]
    fn reference_propagation() {
        let still = propagate_reference(
            &ReferenceInputs::zero(2).unwrap(),
            &ReferenceState::identity(2).unwrap(),
            0.1,
            1.0,
        )
        .unwrap();
        assert!(still.iter().all(|s| s.r == DVector::zeros(2) && s.s == 1.0));

        let moving = propagate_reference(
            &planar_inputs([1.0, 0.0], 0.0, 0.0),
            &ReferenceState::identity(2).unwrap(),
            0.01,
            2.0,
        )
        .unwrap();
        let last = moving.last().unwrap();
        assert!((last.t - 2.0).abs() < 1e-12);
        assert!((&last.r - DVector::from_vec(vec![2.0, 0.0])).amax() < 1e-12);

        let spin = propagate_reference(
            &planar_inputs([0.0, 0.0], FRAC_PI_2, 0.0),
            &ReferenceState::identity(2).unwrap(),
            0.01,
            1.0,
        )
        .unwrap();
        let expected = rotation2(FRAC_PI_2).unwrap();
        assert!((spin.last().unwrap().rotation.matrix() - expected.matrix()).amax() < 1e-12);
        assert!(spin.iter().all(|s| s.rotation.orthogonality_defect().0 < 1e-12));

        let grow = propagate_reference(
            &planar_inputs([0.0, 0.0], 0.0, -0.3),
            &ReferenceState::identity(2).unwrap(),
            0.05,
            3.0,
        )
        .unwrap();
        assert!((grow.last().unwrap().s - (-0.9f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn zero_inputs_reduce_to_stationary_law() {
        let q = setup(5);
        let p = random_configuration(5, 2, 3.0, 11).unwrap();
        let u = maneuver_control(
            &p,
            &ReferenceState::identity(2).unwrap(),
            &ReferenceInputs::zero(2).unwrap().sample(0.0),
            &q,
        )
        .unwrap();
        assert_eq!(u, control(&p, &q).unwrap());
    }

    #[test]
    fn moving_frame_round_trip() {
        let p = random_configuration(4, 2, 3.0, 3).unwrap();
        let id = ReferenceState::identity(2).unwrap();
        assert_eq!(moving_frame(&p, &id).unwrap().zeta, p);
        let reference =
            ReferenceState::new(0.0, DVector::from_vec(vec![1.0, -2.0]), rotation2(0.7).unwrap(), 2.5).unwrap();
        let z = moving_frame(&p, &reference).unwrap();
        let back = z.to_configuration(&reference).unwrap();
        assert!((back.as_vector() - p.as_vector()).amax() < 1e-12);
        let centred = Configuration::new(2, DVector::from_fn(8, |i, _| reference.r[i % 2])).unwrap();
        assert!(moving_frame(&centred, &reference).unwrap().zeta.as_vector().amax() < 1e-15);
        assert!(ReferenceState::new(0.0, DVector::zeros(2), rotation2(0.0).unwrap(), 0.0).is_err());
    }

    #[test]
    fn frame_is_stationary_on_the_symmetric_set() {
        let n = 6;
        let (g, tau) = (cycle_minus_edge(n, (n, 1)).unwrap(), assignment(n).unwrap());
        let q = build_laplacian(&g, &tau).unwrap();
        let reference =
            ReferenceState::new(0.0, DVector::from_vec(vec![3.0, 1.0]), rotation2(0.4).unwrap(), 1.7).unwrap();
        let input = planar_inputs([0.5, -0.2], 0.3, 0.1).sample(0.0);
        let zeta0 = null_basis(&g, &tau)
            .unwrap()
            .embed(&DVector::from_vec(vec![1.0, 0.5]))
            .unwrap();
        let p = MovingFrameState { zeta: zeta0.clone() }
            .to_configuration(&reference)
            .unwrap();
        assert!(shifted_errors(&p, &reference, &q).unwrap().iter().all(|&e| e < 1e-12));

        let h = 1e-6;
        let u = maneuver_control(&p, &reference, &input, &q).unwrap();
        let step = |sign: f64| {
            let p2 = Configuration::new(2, p.as_vector() + u.as_vector() * (sign * h)).unwrap();
            let r2 = reference.advance(&input, sign * h).unwrap();
            moving_frame(&p2, &r2).unwrap().zeta.into_vector()
        };
        let dzeta = (step(1.0) - step(-1.0)) / (2.0 * h);
        assert!(dzeta.amax() < 1e-6, "{}", dzeta.amax());
    }

    #[test]
    fn degenerate_maneuver_is_bitwise_stationary() {
        let q = setup(4);
        let p0 = random_configuration(4, 2, 2.0, 5).unwrap();
        let a = integrate(&q, &p0, 0.01, 2.0, IntegrationMethod::Rk4).unwrap();
        let b = simulate_maneuver(
            &q,
            &p0,
            &ReferenceInputs::zero(2).unwrap(),
            &ReferenceState::identity(2).unwrap(),
            0.01,
            2.0,
        )
        .unwrap();
        assert_eq!(a.states, b.trace.states);
        assert_eq!(a.edge_errors, b.trace.edge_errors);
        assert_eq!(a.potentials, b.trace.potentials);
        assert_eq!(a.times, b.trace.times);
    }

    #[test]
    fn waypoint_inputs() {
        let wps = [(0.0, [0.0, 0.0]), (1.0, [1.0, 0.0]), (2.0, [1.0, 1.0])];
        let (inputs, h0) = ReferenceInputs::from_waypoints(&wps, PiecewiseConstant::constant(0.0)).unwrap();
        assert_eq!(h0, 0.0);
        let s0 = inputs.sample(0.5);
        assert_eq!(s0.velocity, DVector::from_vec(vec![1.0, 0.0]));
        assert!(matches!(s0.angular, AngularVelocity::Planar(w) if (w - std::f64::consts::FRAC_PI_4).abs() < 1e-12));
        assert_eq!(inputs.sample(5.0).velocity, DVector::zeros(2));
        assert!(ReferenceInputs::from_waypoints(&wps[..1], PiecewiseConstant::constant(0.0)).is_err());
    }

    #[test]
    fn planar_generator_commutes_with_rotation() {
        let omega = AngularVelocity::Planar(0.8).generator();
        let r = rotation2(1.1).unwrap().matrix().clone();
        assert!((&omega * &r - &r * &omega).amax() < 1e-12);
    }
}
