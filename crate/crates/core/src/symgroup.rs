//! Cyclic rotational symmetry: rotation matrices, the rotational automorphisms
//! of the cycle graph `C_n`, and the homomorphism sending each automorphism to
//! a rotation of the plane by a multiple of `2π/n`.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};

use crate::error::{invalid, Result};

/// Orthogonality and determinant tolerance accepted by [`RotationElement::from_matrix`].
pub const ROTATION_TOL: f64 = 1e-10;

/// Smallest supported cycle order.
pub const MIN_ORDER: usize = 3;

/// A proper rotation of the plane or of space.
///
/// Planar rotations keep their angle so that compositions are done on angles
/// and the matrix is rebuilt from the reduced sum.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationElement {
    matrix: DMatrix<f64>,
    angle: Option<f64>,
}

impl RotationElement {
    pub fn identity(dim: usize) -> Result<Self> {
        match dim {
            2 => rotation2(0.0),
            3 => Ok(Self {
                matrix: DMatrix::identity(3, 3),
                angle: None,
            }),
            _ => invalid(format!("rotation dimension must be 2 or 3, got {dim}")),
        }
    }

    /// Rotation of space by `theta` about the unit vector `axis` (Rodrigues formula).
    pub fn axis_angle(axis: &Vector3<f64>, theta: f64) -> Result<Self> {
        if !theta.is_finite() || axis.iter().any(|a| !a.is_finite()) {
            return invalid("axis and angle must be finite");
        }
        let norm = axis.norm();
        if norm == 0.0 {
            return invalid("rotation axis must be non-zero");
        }
        if (norm - 1.0).abs() > 1e-12 {
            return invalid(format!("rotation axis must have unit norm, got {norm}"));
        }
        let k = skew(axis);
        let m = Matrix3::identity() + k * theta.sin() + k * k * (1.0 - theta.cos());
        Ok(Self {
            matrix: DMatrix::from_column_slice(3, 3, m.as_slice()),
            angle: None,
        })
    }

    /// Wraps an explicit matrix after checking it is a proper rotation.
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        let d = matrix.nrows();
        if matrix.ncols() != d || !(d == 2 || d == 3) {
            return invalid(format!(
                "rotation matrix must be 2x2 or 3x3, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return invalid("rotation matrix has non-finite entries");
        }
        let ortho = (matrix.transpose() * &matrix - DMatrix::identity(d, d)).amax();
        let det = matrix.determinant();
        if ortho > ROTATION_TOL || (det - 1.0).abs() > ROTATION_TOL {
            return invalid(format!(
                "matrix is not a proper rotation (orthogonality residual {ortho:e}, det {det})"
            ));
        }
        let angle = (d == 2).then(|| matrix[(1, 0)].atan2(matrix[(0, 0)]).rem_euclid(TAU));
        Ok(Self { matrix, angle })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Rotation angle in radians. Planar angles are reduced to `[0, 2π)`;
    /// spatial angles are recovered from the trace and lie in `[0, π]`.
    pub fn angle(&self) -> f64 {
        match self.angle {
            Some(a) => a,
            None => ((self.matrix.trace() - 1.0) / 2.0).clamp(-1.0, 1.0).acos(),
        }
    }

    /// Unit rotation axis of a spatial rotation, `None` for planar ones or the identity.
    pub fn axis(&self) -> Option<Vector3<f64>> {
        if self.dim() != 3 {
            return None;
        }
        let m = &self.matrix;
        let v = Vector3::new(m[(2, 1)] - m[(1, 2)], m[(0, 2)] - m[(2, 0)], m[(1, 0)] - m[(0, 1)]);
        let n = v.norm();
        if n > 1e-12 {
            return Some(v / n);
        }
        // angle 0 or π: the axis spans the +1 eigenspace of (M + I)/2
        let sym = (m + DMatrix::identity(3, 3)) * 0.5;
        let (col, norm) = (0..3)
            .map(|j| (j, sym.column(j).norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))?;
        if norm < 1e-12 || self.angle() < 1e-12 {
            return None;
        }
        let c = sym.column(col);
        Some(Vector3::new(c[0], c[1], c[2]) / norm)
    }

    /// `self · other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return invalid("cannot compose rotations of different dimension");
        }
        match (self.angle, other.angle) {
            (Some(a), Some(b)) => rotation2(a + b),
            _ => Ok(Self {
                matrix: &self.matrix * &other.matrix,
                angle: None,
            }),
        }
    }

    pub fn inverse(&self) -> Self {
        match self.angle {
            Some(a) => rotation2(-a).expect("finite angle"),
            None => Self {
                matrix: self.matrix.transpose(),
                angle: None,
            },
        }
    }

    pub fn power(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.dim()).expect("valid dimension");
        for _ in 0..k {
            acc = self.compose(&acc).expect("same dimension");
        }
        acc
    }

    pub fn apply(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.dim() {
            return invalid(format!(
                "vector of length {} does not match rotation dimension {}",
                x.len(),
                self.dim()
            ));
        }
        Ok(&self.matrix * x)
    }

    /// Largest entry of `|MᵀM - I|` together with `|det M - 1|`.
    pub fn orthogonality_defect(&self) -> (f64, f64) {
        let d = self.dim();
        let ortho = (self.matrix.transpose() * &self.matrix - DMatrix::identity(d, d)).amax();
        (ortho, (self.matrix.determinant() - 1.0).abs())
    }
}

pub(crate) fn skew(w: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -w.z, w.y, w.z, 0.0, -w.x, -w.y, w.x, 0.0)
}

/// The standard planar rotation `[[cos θ, -sin θ], [sin θ, cos θ]]`.
/// Quarter turns get exact entries.
pub fn rotation2(theta: f64) -> Result<RotationElement> {
    if !theta.is_finite() {
        return invalid(format!("rotation angle must be finite, got {theta}"));
    }
    let angle = theta.rem_euclid(TAU);
    let quarters = angle / FRAC_PI_2;
    let (s, c) = if quarters == quarters.round() {
        match quarters as i64 % 4 {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        }
    } else {
        theta.sin_cos()
    };
    Ok(RotationElement {
        matrix: DMatrix::from_row_slice(2, 2, &[c, -s, s, c]),
        angle: Some(angle),
    })
}

/// A rotational automorphism of `C_n`: the cyclic shift `i ↦ ((i - 1 + shift) mod n) + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicAutomorphism {
    n: usize,
    shift: usize,
}

impl CyclicAutomorphism {
    pub fn new(n: usize, shift: i64) -> Result<Self> {
        if n < MIN_ORDER {
            return invalid(format!("group order must be at least {MIN_ORDER}, got {n}"));
        }
        Ok(Self {
            n,
            shift: shift.rem_euclid(n as i64) as usize,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn generator(n: usize) -> Result<Self> {
        Self::new(n, 1)
    }

    /// The shift taking node `from` onto node `to`.
    pub fn mapping(n: usize, from: usize, to: usize) -> Result<Self> {
        Self::new(n, to as i64 - from as i64)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0
    }

    /// Image of the 1-based vertex `i`.
    pub fn apply(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.n {
            return invalid(format!("node {i} outside 1..={}", self.n));
        }
        Ok((i - 1 + self.shift) % self.n + 1)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return invalid(format!(
                "cannot compose automorphisms of C_{} and C_{}",
                self.n, other.n
            ));
        }
        Ok(Self {
            n: self.n,
            shift: (self.shift + other.shift) % self.n,
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            n: self.n,
            shift: (self.n - self.shift) % self.n,
        }
    }

    /// Image of every vertex, in order `1..=n`.
    pub fn permutation(&self) -> Vec<usize> {
        (1..=self.n).map(|i| (i - 1 + self.shift) % self.n + 1).collect()
    }
}

impl fmt::Display for CyclicAutomorphism {
    /// Cycle notation, e.g. `(1 2 3)` or `(1 3)(2 4)`; the identity prints as `id`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "id");
        }
        let mut seen = vec![false; self.n + 1];
        for start in 1..=self.n {
            if seen[start] {
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = (i - 1 + self.shift) % self.n + 1;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// All `n` rotational automorphisms of `C_n`, ordered by shift.
pub fn rotational_automorphisms(n: usize) -> Result<Vec<CyclicAutomorphism>> {
    (0..n as i64).map(|k| CyclicAutomorphism::new(n, k)).collect()
}

/// The homomorphism from the rotational automorphisms of `C_n` to the planar
/// point group, sending shift `k` to the rotation by `k · 2π/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointGroupAssignment {
    n: usize,
    base_angle: f64,
}

impl PointGroupAssignment {
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_ORDER {
            return invalid(format!("group order must be at least {MIN_ORDER}, got {n}"));
        }
        Ok(Self {
            n,
            base_angle: TAU / n as f64,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn base_angle(&self) -> f64 {
        self.base_angle
    }

    pub fn tau(&self, gamma: &CyclicAutomorphism) -> Result<RotationElement> {
        if gamma.order() != self.n {
            return invalid(format!(
                "automorphism of C_{} used with an assignment for C_{}",
                gamma.order(),
                self.n
            ));
        }
        rotation2(gamma.shift() as f64 * self.base_angle)
    }

    /// `(γ, τ(γ))` for every rotational automorphism.
    pub fn elements(&self) -> Vec<(CyclicAutomorphism, RotationElement)> {
        rotational_automorphisms(self.n)
            .expect("order already validated")
            .into_iter()
            .map(|g| {
                let r = self.tau(&g).expect("same order");
                (g, r)
            })
            .collect()
    }
}

pub fn assignment(n: usize) -> Result<PointGroupAssignment> {
    PointGroupAssignment::new(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
        (a - b).amax() <= tol
    }

    #[test]
    fn rotation2_special_angles() {
        assert_eq!(rotation2(0.0).unwrap().matrix(), &DMatrix::identity(2, 2));
        let quarter = rotation2(FRAC_PI_2).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!(close(quarter.matrix(), &expected, 1e-15));
        let sixth = rotation2(FRAC_PI_3).unwrap();
        assert_abs_diff_eq!(sixth.matrix()[(1, 0)], 3f64.sqrt() / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sixth.matrix()[(0, 0)], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn rotation2_rejects_non_finite() {
        assert!(rotation2(f64::NAN).is_err());
        assert!(rotation2(f64::INFINITY).is_err());
    }

    #[test]
    fn automorphisms_of_c3() {
        let all = rotational_automorphisms(3).unwrap();
        let names: Vec<String> = all.iter().map(|g| g.to_string()).collect();
        assert_eq!(names, vec!["id", "(1 2 3)", "(1 3 2)"]);
        let two = all[2];
        assert_eq!(two.compose(&two).unwrap().shift(), 1);
        assert!(rotational_automorphisms(2).is_err());
    }

    #[test]
    fn automorphisms_of_c4() {
        let all = rotational_automorphisms(4).unwrap();
        assert_eq!(all.len(), 4);
        assert_eq!(all[1].permutation(), vec![2, 3, 4, 1]);
        assert_eq!(all[2].to_string(), "(1 3)(2 4)");
    }

    #[test]
    fn permutation_action_and_range() {
        let g = CyclicAutomorphism::new(3, 1).unwrap();
        assert_eq!(g.apply(1).unwrap(), 2);
        assert_eq!(CyclicAutomorphism::new(3, 2).unwrap().apply(1).unwrap(), 3);
        assert_eq!(CyclicAutomorphism::identity(5).unwrap().apply(4).unwrap(), 4);
        assert!(g.apply(0).is_err());
        assert!(g.apply(4).is_err());
        assert_eq!(CyclicAutomorphism::mapping(6, 6, 1).unwrap().shift(), 1);
    }

    #[test]
    fn assignment_values() {
        let tau = assignment(4).unwrap();
        let g1 = CyclicAutomorphism::new(4, 1).unwrap();
        assert!(close(
            tau.tau(&g1).unwrap().matrix(),
            rotation2(FRAC_PI_2).unwrap().matrix(),
            0.0
        ));
        let id = CyclicAutomorphism::identity(4).unwrap();
        assert_eq!(tau.tau(&id).unwrap().matrix(), &DMatrix::identity(2, 2));
        let half = assignment(6)
            .unwrap()
            .tau(&CyclicAutomorphism::new(6, 3).unwrap())
            .unwrap();
        assert!(close(half.matrix(), &(-DMatrix::identity(2, 2)), 1e-15));
        assert!(tau.tau(&CyclicAutomorphism::new(5, 1).unwrap()).is_err());
    }

    #[test]
    fn inverse_is_transpose() {
        for n in 3..=12 {
            let tau = assignment(n).unwrap();
            for (g, r) in tau.elements() {
                let inv = tau.tau(&g.inverse()).unwrap();
                assert!(close(inv.matrix(), &r.matrix().transpose(), 1e-12));
            }
        }
    }

    #[test]
    fn apply_checks_dimension_and_preserves_norm() {
        let r = rotation2(FRAC_PI_2).unwrap();
        let y = r.apply(&DVector::from_vec(vec![1.0, 0.0])).unwrap();
        assert_abs_diff_eq!(y[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y[1], 1.0, epsilon = 1e-15);
        assert!(r.apply(&DVector::from_vec(vec![1.0, 0.0, 0.0])).is_err());
        let third = rotation2(2.0 * PI / 3.0).unwrap();
        let x = DVector::from_vec(vec![0.3, -1.7]);
        let back = third.apply(&third.apply(&third.apply(&x).unwrap()).unwrap()).unwrap();
        assert!((back - &x).amax() < 1e-14);
    }

    #[test]
    fn axis_angle_basics() {
        let z = Vector3::z();
        let r = RotationElement::axis_angle(&z, FRAC_PI_2).unwrap();
        let y = r.apply(&DVector::from_vec(vec![1.0, 0.0, 0.0])).unwrap();
        assert!((y - DVector::from_vec(vec![0.0, 1.0, 0.0])).amax() < 1e-15);
        assert!(RotationElement::axis_angle(&Vector3::zeros(), 1.0).is_err());
        assert!(RotationElement::axis_angle(&Vector3::new(1.0, 1.0, 0.0), 1.0).is_err());
        let axis = Vector3::new(1.0, 2.0, 2.0) / 3.0;
        let r = RotationElement::axis_angle(&axis, 0.7).unwrap();
        assert!((r.axis().unwrap() - axis).amax() < 1e-12);
        assert_abs_diff_eq!(r.angle(), 0.7, epsilon = 1e-12);
        let half = RotationElement::axis_angle(&Vector3::y(), PI).unwrap();
        assert!((half.axis().unwrap() - Vector3::y()).amax() < 1e-12);
    }

    #[test]
    fn from_matrix_rejects_reflections() {
        let reflection = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(RotationElement::from_matrix(reflection).is_err());
        let r = RotationElement::from_matrix(rotation2(1.0).unwrap().matrix().clone()).unwrap();
        assert_abs_diff_eq!(r.angle(), 1.0, epsilon = 1e-15);
    }
}
