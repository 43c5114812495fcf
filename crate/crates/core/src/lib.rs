//! Formation control from rotational symmetry constraints.
//!
//! A team of `n` single-integrator agents is driven to a configuration that is
//! symmetric under the cyclic point group `C_n`. Only the `n - 1` edges of a
//! spanning tree of the cycle graph carry constraints. Each edge asks that one
//! agent be the rotated image of its neighbour, and the gradient of the summed
//! squared residuals gives the linear flow `p' = -Q p`, where `Q` is a
//! matrix-weighted Laplacian whose off-diagonal blocks are negated rotations.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`symgroup`] | planar rotations, cyclic automorphisms, the map from automorphisms to rotations |
//! | [`topology`] | cycle graphs, spanning-tree interaction graphs, rotation chains |
//! | [`laplacian`] | incidence factor, Laplacian `Q`, spectrum, null basis, closed-form flow |
//! | [`dynamics`] | potential, control law, RK4 integration, decay-rate fitting |
//! | [`maneuver`] | virtual reference trajectory and the augmented control law |
//! | [`spatial3d`] | the eight-agent cube formation in three dimensions |

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod laplacian;
pub mod maneuver;
mod ode;
pub mod spatial3d;
pub mod symgroup;
pub mod topology;

pub use dynamics::{
    control, edge_errors, fit_rate, integrate, potential, random_configuration, Configuration, IntegrationMethod,
    SimulationTrace,
};
pub use error::{Error, Result};
pub use laplacian::{
    build_incidence, build_laplacian, closed_form_solution, null_basis, spectrum, steady_state, NullBasis, Spectrum,
    SymmetryIncidence, SymmetryLaplacian,
};
pub use maneuver::{
    maneuver_control, moving_frame, propagate_reference, shifted_errors, simulate_maneuver, AngularVelocity,
    ManeuverTrace, MovingFrameState, ReferenceInputs, ReferenceState,
};
pub use spatial3d::{build_cube, rotation3, simulate_cube, Axis, AxisRotation, CompositeLaplacian, CubeSpec};
pub use symgroup::{
    assignment, rotation2, rotational_automorphisms, CyclicAutomorphism, PointGroupAssignment, RotationElement,
};
pub use topology::{
    cycle_minus_edge, rotation_chain, CycleGraph, InteractionGraph, RotationChain, TreeEdge, TreeViolation,
    WeightedEdge,
};
