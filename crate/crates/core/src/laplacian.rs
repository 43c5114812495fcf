//! The symmetry-constraining matrix-weighted Laplacian `Q = E Eᵀ`, its
//! spectrum and null space, and the closed-form solution of `p' = -Q p`.
//!
//! For a tree edge `(u, v)` with rotation `τ_uv` the incidence factor `E` has a
//! block column holding `I` at node `u` and `-τ_uv` at node `v`, so `Eᵀp`
//! stacks the residuals `p_u - τ_uvᵀ p_v`. The Laplacian has diagonal blocks
//! `deg(u) I` and off-diagonal blocks `[Q]_uv = -τ_uvᵀ`, `[Q]_vu = -τ_uv`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::dynamics::Configuration;
use crate::error::{invalid, Error, Result};
use crate::symgroup::PointGroupAssignment;
use crate::topology::{check_spanning_tree, rotation_chain, InteractionGraph, RotationChain, WeightedEdge};

/// Relative eigenvalue threshold below which an eigenvalue counts as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Largest tolerated `|Q - Qᵀ|` entry before the spectrum is refused.
pub const ASYMMETRY_TOL: f64 = 1e-10;

fn set_block(m: &mut DMatrix<f64>, d: usize, row: usize, col: usize, block: &DMatrix<f64>) {
    m.view_mut(((row - 1) * d, (col - 1) * d), (d, d)).copy_from(block);
}

fn check_edges(n: usize, d: usize, edges: &[WeightedEdge]) -> Result<()> {
    if !(d == 2 || d == 3) {
        return invalid(format!("dimension must be 2 or 3, got {d}"));
    }
    if let Some(e) = edges.iter().find(|e| e.rotation.dim() != d) {
        return invalid(format!(
            "edge ({},{}) carries a {}-dimensional rotation in a {d}-dimensional formation",
            e.u,
            e.v,
            e.rotation.dim()
        ));
    }
    let pairs: Vec<_> = edges.iter().map(|e| (e.u, e.v)).collect();
    check_spanning_tree(n, &pairs)?;
    Ok(())
}

/// The block incidence factor `E` of size `dn × d|E|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryIncidence {
    n: usize,
    d: usize,
    matrix: DMatrix<f64>,
}

impl SymmetryIncidence {
    pub fn from_edges(n: usize, d: usize, edges: &[WeightedEdge]) -> Result<Self> {
        check_edges(n, d, edges)?;
        let mut matrix = DMatrix::zeros(d * n, d * edges.len());
        let eye = DMatrix::identity(d, d);
        for (k, e) in edges.iter().enumerate() {
            set_block(&mut matrix, d, e.u, k + 1, &eye);
            set_block(&mut matrix, d, e.v, k + 1, &(-e.rotation.matrix()));
        }
        Ok(Self { n, d, matrix })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn edge_count(&self) -> usize {
        self.matrix.ncols() / self.d
    }

    /// `Eᵀp`: the stacked edge residuals.
    pub fn residuals(&self, p: &Configuration) -> Result<DVector<f64>> {
        p.check_shape(self.n, self.d)?;
        Ok(self.matrix.tr_mul(p.as_vector()))
    }
}

pub fn build_incidence(g: &InteractionGraph, tau: &PointGroupAssignment) -> Result<SymmetryIncidence> {
    SymmetryIncidence::from_edges(g.node_count(), 2, &g.weighted_edges(tau)?)
}

/// The `dn × dn` Laplacian `Q` together with the edges it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryLaplacian {
    n: usize,
    d: usize,
    edges: Vec<WeightedEdge>,
    matrix: DMatrix<f64>,
}

impl SymmetryLaplacian {
    /// Block-entry assembly over a spanning tree of rotation-weighted edges.
    pub fn from_edges(n: usize, d: usize, edges: Vec<WeightedEdge>) -> Result<Self> {
        check_edges(n, d, &edges)?;
        Self::assemble(n, d, edges)
    }

    /// Block-entry assembly without the spanning-tree check, for partial
    /// Laplacians that are later composed into a larger one.
    pub fn assemble(n: usize, d: usize, edges: Vec<WeightedEdge>) -> Result<Self> {
        if let Some(e) = edges
            .iter()
            .find(|e| e.u == 0 || e.v == 0 || e.u > n || e.v > n || e.rotation.dim() != d)
        {
            return invalid(format!(
                "edge ({},{}) does not fit {n} nodes in dimension {d}",
                e.u, e.v
            ));
        }
        let mut matrix = DMatrix::zeros(d * n, d * n);
        let eye = DMatrix::<f64>::identity(d, d);
        for i in 1..=n {
            let degree = edges.iter().filter(|e| e.u == i || e.v == i).count();
            set_block(&mut matrix, d, i, i, &(&eye * degree as f64));
        }
        for e in &edges {
            let r = e.rotation.matrix();
            set_block(&mut matrix, d, e.u, e.v, &(-r.transpose()));
            set_block(&mut matrix, d, e.v, e.u, &(-r));
        }
        Ok(Self { n, d, edges, matrix })
    }

    /// Wraps an arbitrary matrix with the given edge metadata, without
    /// checking that it is the Laplacian of those edges. Verification tooling
    /// uses this to feed deliberately corrupted matrices through the checks.
    pub fn from_parts(n: usize, d: usize, edges: Vec<WeightedEdge>, matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != d * n || matrix.ncols() != d * n {
            return invalid(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                d * n,
                d * n
            ));
        }
        Ok(Self { n, d, edges, matrix })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// The `d × d` block at 1-based block indices `(u, v)`.
    pub fn block(&self, u: usize, v: usize) -> DMatrix<f64> {
        let d = self.d;
        self.matrix.view(((u - 1) * d, (v - 1) * d), (d, d)).into_owned()
    }

    pub fn incidence(&self) -> Result<SymmetryIncidence> {
        SymmetryIncidence::from_edges(self.n, self.d, &self.edges)
    }

    /// `E Eᵀ`, the product-form construction.
    pub fn product_form(&self) -> Result<DMatrix<f64>> {
        let e = self.incidence()?;
        Ok(e.matrix() * e.matrix().transpose())
    }

    pub fn asymmetry(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    pub fn apply(&self, p: &Configuration) -> Result<DVector<f64>> {
        p.check_shape(self.n, self.d)?;
        Ok(&self.matrix * p.as_vector())
    }
}

pub fn build_laplacian(g: &InteractionGraph, tau: &PointGroupAssignment) -> Result<SymmetryLaplacian> {
    SymmetryLaplacian::from_edges(g.node_count(), 2, g.weighted_edges(tau)?)
}

/// `V₀`, the stacked chain rotations `S_i`, spanning `Null(Q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NullBasis {
    n: usize,
    d: usize,
    v0: DMatrix<f64>,
}

impl NullBasis {
    pub fn from_chain(chain: &RotationChain) -> Self {
        let n = chain.node_count();
        let d = chain.get(1).dim();
        let mut v0 = DMatrix::zeros(d * n, d);
        for (i, s) in chain.elements().iter().enumerate() {
            v0.view_mut((i * d, 0), (d, d)).copy_from(s.matrix());
        }
        Self { n, d, v0 }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.v0
    }

    /// `V₀ / √n`, which has orthonormal columns.
    pub fn normalized(&self) -> DMatrix<f64> {
        &self.v0 / (self.n as f64).sqrt()
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// The symmetric configuration `p_i = S_i q`.
    pub fn embed(&self, q: &DVector<f64>) -> Result<Configuration> {
        if q.len() != self.d {
            return invalid(format!("expected a {}-vector, got length {}", self.d, q.len()));
        }
        Configuration::new(self.d, &self.v0 * q)
    }
}

pub fn null_basis(g: &InteractionGraph, tau: &PointGroupAssignment) -> Result<NullBasis> {
    Ok(NullBasis::from_chain(&rotation_chain(g, tau)?))
}

/// Limit of the flow: the orthogonal projection `(1/n) V₀ V₀ᵀ p0`.
pub fn steady_state(p0: &Configuration, basis: &NullBasis) -> Result<Configuration> {
    p0.check_shape(basis.n, basis.d)?;
    let coeffs = basis.v0.tr_mul(p0.as_vector()) / basis.n as f64;
    Configuration::new(basis.d, &basis.v0 * coeffs)
}

/// Per-agent form of the limit: `p_i = (1/n) S_i Σ_k S_kᵀ p_k(0)`.
pub fn steady_state_per_agent(p0: &Configuration, chain: &RotationChain) -> Result<Configuration> {
    let n = chain.node_count();
    let d = chain.get(1).dim();
    p0.check_shape(n, d)?;
    let mut sum = DVector::zeros(d);
    for (k, s) in chain.elements().iter().enumerate() {
        sum += s.matrix().tr_mul(&p0.agent(k + 1));
    }
    sum /= n as f64;
    let mut out = DVector::zeros(d * n);
    for (i, s) in chain.elements().iter().enumerate() {
        out.rows_mut(i * d, d).copy_from(&(s.matrix() * &sum));
    }
    Configuration::new(d, out)
}

/// Ascending eigen-decomposition of `Q` with the rank split at a relative tolerance.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
    threshold: f64,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors, column `k` paired with eigenvalue `k`.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// Absolute threshold: `tol · max(1, λ_max)`.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues.iter().filter(|&&l| l >= self.threshold).count()
    }

    pub fn null_dim(&self) -> usize {
        self.eigenvalues.len() - self.rank()
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// Smallest eigenvalue above the threshold: the slowest decay rate.
    pub fn lambda_plus_min(&self) -> Option<f64> {
        self.eigenvalues.iter().copied().find(|&l| l >= self.threshold)
    }

    /// Index of the eigenvector belonging to [`Self::lambda_plus_min`].
    pub fn slowest_mode(&self) -> Option<DVector<f64>> {
        let k = self.eigenvalues.iter().position(|&l| l >= self.threshold)?;
        Some(self.eigenvectors.column(k).into_owned())
    }

    /// `e^{-Qt} p0` through the eigen-decomposition; eigenvalues under the
    /// threshold are treated as exact zeros.
    pub fn propagate(&self, p0: &Configuration, t: f64) -> Result<Configuration> {
        if !(t >= 0.0) || !t.is_finite() {
            return invalid(format!("time must be finite and non-negative, got {t}"));
        }
        if p0.as_vector().len() != self.eigenvalues.len() {
            return invalid("configuration length does not match the spectrum");
        }
        if t == 0.0 {
            return Ok(p0.clone());
        }
        let mut coeffs = self.eigenvectors.tr_mul(p0.as_vector());
        for (c, &l) in coeffs.iter_mut().zip(self.eigenvalues.iter()) {
            if l >= self.threshold {
                *c *= (-l * t).exp();
            }
        }
        Configuration::new(p0.dim(), &self.eigenvectors * coeffs)
    }
}

pub fn spectrum(q: &SymmetryLaplacian, tol: f64) -> Result<Spectrum> {
    if !(tol > 0.0) {
        return invalid(format!("rank tolerance must be positive, got {tol}"));
    }
    let m = q.matrix();
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NumericFailure("Laplacian has non-finite entries".into()));
    }
    let asym = q.asymmetry();
    if asym > ASYMMETRY_TOL {
        return Err(Error::NumericFailure(format!(
            "Laplacian is not symmetric (max |Q - Qᵀ| = {asym:e})"
        )));
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NumericFailure("symmetric eigen-solver did not converge".into()))?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = DVector::from_iterator(order.len(), order.iter().map(|&k| eig.eigenvalues[k]));
    let mut eigenvectors = DMatrix::zeros(m.nrows(), m.ncols());
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    let lambda_max = eigenvalues[eigenvalues.len() - 1];
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        threshold: tol * lambda_max.max(1.0),
    })
}

/// `p(t) = e^{-Qt} p(0)` evaluated in the eigenbasis of `Q`.
pub fn closed_form_solution(q: &SymmetryLaplacian, p0: &Configuration, t: f64) -> Result<Configuration> {
    spectrum(q, DEFAULT_RANK_TOL)?.propagate(p0, t)
}
