mod common;

use common::path_laplacian;
use nalgebra::DVector;
use symform::dynamics::{default_horizon, default_step};
use symform::laplacian::DEFAULT_RANK_TOL;
use symform::maneuver::PiecewiseConstant;
use symform::{
    integrate, moving_frame, random_configuration, rotation2, simulate_maneuver, spectrum, AngularVelocity,
    IntegrationMethod, ReferenceInputs, ReferenceState,
};

fn waypoint_inputs() -> (ReferenceInputs, ReferenceState) {
    let waypoints = [
        (0.0, [0.0, 0.0]),
        (20.0, [10.0, 4.0]),
        (45.0, [18.0, -3.0]),
        (70.0, [30.0, 2.0]),
    ];
    let alpha = PiecewiseConstant::new(vec![(0.0, 0.0), (10.0, 0.02), (30.0, -0.02), (50.0, 0.0)]).unwrap();
    let (inputs, heading) = ReferenceInputs::from_waypoints(&waypoints, alpha).unwrap();
    let r0 = ReferenceState::new(0.0, DVector::zeros(2), rotation2(heading).unwrap(), 1.0).unwrap();
    (inputs, r0)
}

#[test]
fn moving_frame_follows_the_stationary_flow() {
    let q = path_laplacian(6);
    let s = spectrum(&q, DEFAULT_RANK_TOL).unwrap();
    let (dt, horizon) = (default_step(&s), default_horizon(&s).unwrap());
    let (inputs, r0) = waypoint_inputs();
    let p0 = random_configuration(6, 2, 5.0, 42).unwrap();
    let run = simulate_maneuver(&q, &p0, &inputs, &r0, dt, horizon).unwrap();
    let zeta0 = moving_frame(&p0, &r0).unwrap().zeta;
    let stationary = integrate(&q, &zeta0, dt, horizon, IntegrationMethod::Rk4).unwrap();
    assert_eq!(stationary.len(), run.zeta.len());
    let worst = run
        .zeta
        .iter()
        .zip(&stationary.states)
        .map(|(a, b)| (a.as_vector() - b.as_vector()).norm())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-5, "moving-frame deviation {worst}");
    assert!(run.trace.final_edge_errors().iter().all(|&e| e < 1e-8));
    // the planar frame residual vanishes up to roundoff
    assert!(run.frame_residuals.iter().all(|&r| r < 1e-9));
}

#[test]
fn reference_is_carried_along() {
    let q = path_laplacian(6);
    let s = spectrum(&q, DEFAULT_RANK_TOL).unwrap();
    let (inputs, r0) = waypoint_inputs();
    let p0 = random_configuration(6, 2, 5.0, 3).unwrap();
    let run = simulate_maneuver(&q, &p0, &inputs, &r0, default_step(&s), 80.0).unwrap();
    let last = run.reference.last().unwrap();
    // inputs are held over whole steps, so each leg boundary costs at most dt·|Δv|
    let slack = 3.0 * default_step(&s);
    assert!((last.r[0] - 30.0).abs() < slack && (last.r[1] - 2.0).abs() < slack);
    // the formation centroid tracks r once the shape has formed
    let centroid = run
        .trace
        .final_state()
        .agents()
        .iter()
        .fold(DVector::zeros(2), |acc, a| acc + a)
        / 6.0;
    assert!((centroid - &last.r).amax() < 1e-3);
}

#[test]
fn constant_rotation_and_growth() {
    let q = path_laplacian(5);
    let inputs = ReferenceInputs::new(
        2,
        PiecewiseConstant::constant(DVector::from_vec(vec![0.3, -0.1])),
        PiecewiseConstant::constant(AngularVelocity::Planar(0.2)),
        PiecewiseConstant::new(vec![(0.0, 0.05), (5.0, 0.0)]).unwrap(),
    )
    .unwrap();
    let r0 = ReferenceState::identity(2).unwrap();
    let p0 = random_configuration(5, 2, 2.0, 8).unwrap();
    let run = simulate_maneuver(&q, &p0, &inputs, &r0, 0.02, 10.0).unwrap();
    let last = run.reference.last().unwrap();
    assert!((last.s - 0.25f64.exp()).abs() < 1e-12);
    assert!((last.rotation.angle() - 2.0).abs() < 1e-9);
    let stationary = integrate(&q, &run.zeta[0], 0.02, 10.0, IntegrationMethod::Rk4).unwrap();
    let gap = (run.zeta.last().unwrap().as_vector() - stationary.final_state().as_vector()).norm();
    assert!(gap < 1e-5, "{gap}");
}
