//! Cube formation in three dimensions.
//!
//! Eight agents sit on two square faces, each constrained by `C_4` rotations
//! about a face axis, and one cross face joins them through `C_4` rotations
//! about an orthogonal axis. After dropping redundant edges the seven
//! remaining constraints form a spanning tree. The Laplacian is assembled as a
//! sum of per-edge terms; the composition of the two face Laplacians with the
//! re-indexed cross Laplacian is kept as an independent cross-check.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector, Vector3};

use crate::dynamics::Configuration;
use crate::error::{invalid, Result};
use crate::laplacian::{NullBasis, SymmetryLaplacian};
use crate::maneuver::{simulate_maneuver, ManeuverTrace, ReferenceInputs, ReferenceState};
use crate::symgroup::RotationElement;
use crate::topology::{cycle_minus_edge, RotationChain, WeightedEdge};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    X,
    Y,
    Z,
    Custom(Vector3<f64>),
}

impl Axis {
    pub fn vector(&self) -> Vector3<f64> {
        match self {
            Self::X => Vector3::x(),
            Self::Y => Vector3::y(),
            Self::Z => Vector3::z(),
            Self::Custom(v) => *v,
        }
    }
}

/// A rotation about a fixed axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisRotation {
    pub axis: Vector3<f64>,
    pub angle: f64,
    pub rotation: RotationElement,
}

pub fn rotation3(axis: &Axis, theta: f64) -> Result<AxisRotation> {
    let a = axis.vector();
    Ok(AxisRotation {
        axis: a,
        angle: theta,
        rotation: RotationElement::axis_angle(&a, theta)?,
    })
}

/// Node layout of the cube constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeSpec {
    /// Top face in `C_4` order about `face_axis`.
    pub top: [usize; 4],
    /// Bottom face in `C_4` order about `face_axis`.
    pub bottom: [usize; 4],
    pub face_axis: Axis,
    /// Face-cycle edge left out of both face chains, as a 0-based index into
    /// the local cycle `(1,2), (2,3), (3,4), (4,1)`.
    pub face_removed: usize,
    /// Cross face in `C_4` order about `cross_axis`.
    pub cross: [usize; 4],
    pub cross_axis: Axis,
    /// Cross-cycle edges kept, as 0-based indices into the local cycle of `cross`.
    pub cross_edges: Vec<usize>,
}

impl Default for CubeSpec {
    fn default() -> Self {
        Self {
            top: [1, 2, 3, 4],
            bottom: [5, 6, 7, 8],
            face_axis: Axis::Z,
            face_removed: 3,
            cross: [2, 1, 5, 6],
            cross_axis: Axis::Y,
            cross_edges: vec![1],
        }
    }
}

/// The cube Laplacian with the pieces it is composed from.
#[derive(Debug, Clone)]
pub struct CompositeLaplacian {
    pub spec: CubeSpec,
    /// Edge-sum assembly over all seven constraints.
    pub laplacian: SymmetryLaplacian,
    /// Face Laplacian on local nodes `1..=4` (12 × 12).
    pub face: SymmetryLaplacian,
    /// Cross Laplacian on local nodes `1..=4` (12 × 12).
    pub cross: SymmetryLaplacian,
    /// Places the stacked `[top, bottom]` blocks at their global node slots.
    pub face_permutation: DMatrix<f64>,
    /// Places the cross-face blocks (followed by the remaining nodes) at their global slots.
    pub cross_permutation: DMatrix<f64>,
}

const NODES: usize = 8;
const DIM: usize = 3;

fn block_permutation(order: &[usize]) -> DMatrix<f64> {
    let mut p = DMatrix::zeros(DIM * NODES, DIM * NODES);
    for (local, &global) in order.iter().enumerate() {
        for a in 0..DIM {
            p[((global - 1) * DIM + a, local * DIM + a)] = 1.0;
        }
    }
    p
}

fn is_permutation(nodes: &[usize]) -> bool {
    let mut seen = [false; NODES + 1];
    nodes.iter().all(|&i| {
        let fresh = (1..=NODES).contains(&i) && !seen[i];
        if fresh {
            seen[i] = true;
        }
        fresh
    })
}

pub fn build_cube(spec: &CubeSpec) -> Result<CompositeLaplacian> {
    let faces: Vec<usize> = spec.top.iter().chain(&spec.bottom).copied().collect();
    if !is_permutation(&faces) {
        return invalid("top and bottom faces must partition nodes 1..=8");
    }
    if !is_permutation(&spec.cross) {
        return invalid("cross face must list four distinct nodes in 1..=8");
    }
    if spec.face_removed > 3 {
        return invalid(format!("face_removed must be in 0..=3, got {}", spec.face_removed));
    }
    if let Some(k) = spec.cross_edges.iter().find(|&&k| k > 3) {
        return invalid(format!("cross edge index must be in 0..=3, got {k}"));
    }
    let face_rot = rotation3(&spec.face_axis, FRAC_PI_2)?.rotation;
    let cross_rot = rotation3(&spec.cross_axis, FRAC_PI_2)?.rotation;

    let removed = (spec.face_removed + 1, (spec.face_removed + 1) % 4 + 1);
    let face_pairs = cycle_minus_edge(4, removed)?.pairs();
    let local = |pairs: &[(usize, usize)], rot: &RotationElement| -> Vec<WeightedEdge> {
        pairs
            .iter()
            .map(|&(u, v)| WeightedEdge {
                u,
                v,
                rotation: rot.clone(),
            })
            .collect()
    };
    let face_local = local(&face_pairs, &face_rot);
    let cross_pairs: Vec<(usize, usize)> = spec.cross_edges.iter().map(|&k| (k + 1, (k + 1) % 4 + 1)).collect();
    let cross_local = local(&cross_pairs, &cross_rot);

    let relabel = |edges: &[WeightedEdge], nodes: &[usize; 4]| -> Vec<WeightedEdge> {
        edges
            .iter()
            .map(|e| WeightedEdge {
                u: nodes[e.u - 1],
                v: nodes[e.v - 1],
                rotation: e.rotation.clone(),
            })
            .collect()
    };
    let mut edges = relabel(&face_local, &spec.top);
    edges.extend(relabel(&face_local, &spec.bottom));
    edges.extend(relabel(&cross_local, &spec.cross));
    let laplacian = SymmetryLaplacian::from_edges(NODES, DIM, edges)?;

    let mut cross_order: Vec<usize> = spec.cross.to_vec();
    cross_order.extend((1..=NODES).filter(|i| !spec.cross.contains(i)));
    Ok(CompositeLaplacian {
        spec: spec.clone(),
        laplacian,
        face: SymmetryLaplacian::assemble(4, DIM, face_local)?,
        cross: SymmetryLaplacian::assemble(4, DIM, cross_local)?,
        face_permutation: block_permutation(&faces),
        cross_permutation: block_permutation(&cross_order),
    })
}

impl CompositeLaplacian {
    pub fn matrix(&self) -> &DMatrix<f64> {
        self.laplacian.matrix()
    }

    /// `P_f (I₂ ⊗ Q_face) P_fᵀ + P_c [Q_cross, 0; 0, 0] P_cᵀ`.
    pub fn composed_form(&self) -> DMatrix<f64> {
        let size = DIM * NODES;
        let half = DIM * 4;
        let mut faces = DMatrix::zeros(size, size);
        faces.view_mut((0, 0), (half, half)).copy_from(self.face.matrix());
        faces.view_mut((half, half), (half, half)).copy_from(self.face.matrix());
        let mut cross = DMatrix::zeros(size, size);
        cross.view_mut((0, 0), (half, half)).copy_from(self.cross.matrix());
        &self.face_permutation * faces * self.face_permutation.transpose()
            + &self.cross_permutation * cross * self.cross_permutation.transpose()
    }

    pub fn chain(&self) -> Result<RotationChain> {
        RotationChain::from_weighted(NODES, DIM, self.laplacian.edges())
    }

    pub fn null_basis(&self) -> Result<NullBasis> {
        Ok(NullBasis::from_chain(&self.chain()?))
    }

    /// The symmetric configuration generated by agent 1 sitting at `q`.
    pub fn symmetric_configuration(&self, q: &Vector3<f64>) -> Result<Configuration> {
        self.null_basis()?.embed(&DVector::from_column_slice(q.as_slice()))
    }
}

/// Runs the cube formation. Without inputs this is the stationary flow; with
/// inputs it is the augmented maneuvering law with `Ω = [ω]×`, and the
/// trace's frame residuals measure how far the moving-frame state departs
/// from `ζ' = -Q ζ`.
pub fn simulate_cube(
    cube: &CompositeLaplacian,
    p0: &Configuration,
    inputs: Option<&ReferenceInputs>,
    ref0: Option<&ReferenceState>,
    dt: f64,
    horizon: f64,
) -> Result<ManeuverTrace> {
    let zero = ReferenceInputs::zero(DIM)?;
    let identity = ReferenceState::identity(DIM)?;
    simulate_maneuver(
        &cube.laplacian,
        p0,
        inputs.unwrap_or(&zero),
        ref0.unwrap_or(&identity),
        dt,
        horizon,
    )
}
