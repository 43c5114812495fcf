//! Cycle graphs, spanning-tree interaction graphs and rotation chains.
//!
//! Nodes are labelled `1..=n` throughout the public API.
//!
//! Edge convention: a stored edge `(u, v)` carries the automorphism `γ_uv`
//! taking `u` onto `v`, so a symmetric target satisfies `τ(γ_uv) p_u = p_v`.
//! The edge constraint is `p_u - τ(γ_vu) p_v = 0` with `τ(γ_vu) = τ(γ_uv)ᵀ`.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::symgroup::{CyclicAutomorphism, PointGroupAssignment, RotationElement, MIN_ORDER};

/// The cycle graph `C_n` with edges `{i, i+1}` and `{n, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleGraph {
    n: usize,
}

impl CycleGraph {
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_ORDER {
            return invalid(format!("cycle graph needs at least {MIN_ORDER} nodes, got {n}"));
        }
        Ok(Self { n })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (1..=self.n).map(|i| (i, i % self.n + 1)).collect()
    }

    /// Undirected membership test.
    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        let ok = |a: usize| a >= 1 && a <= self.n;
        ok(u) && ok(v) && (v == u % self.n + 1 || u == v % self.n + 1)
    }

    pub fn degree(&self, i: usize) -> usize {
        if i >= 1 && i <= self.n {
            2
        } else {
            0
        }
    }
}

/// One interaction edge with its group element `γ_uv`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeEdge {
    pub u: usize,
    pub v: usize,
    pub gamma: CyclicAutomorphism,
}

/// An edge weighted by an explicit rotation `τ_uv` with `τ_uv p_u = p_v` at the target.
///
/// This is the form consumed by the Laplacian builders, shared by the planar
/// graphs and the spatial cube.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedEdge {
    pub u: usize,
    pub v: usize,
    pub rotation: RotationElement,
}

/// Why an edge set fails to be a spanning tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeViolation {
    NodeOutOfRange {
        edge: (usize, usize),
        n: usize,
    },
    SelfLoop(usize),
    NotCycleEdge(usize, usize),
    OrderMismatch {
        edge: (usize, usize),
        order: usize,
        n: usize,
    },
    NotAcyclic {
        closing_edge: (usize, usize),
    },
    NotConnected {
        unreachable: usize,
    },
}

impl fmt::Display for TreeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NodeOutOfRange { edge, n } => {
                write!(f, "edge {edge:?} references a node outside 1..={n}")
            }
            Self::SelfLoop(u) => write!(f, "self loop at node {u}"),
            Self::NotCycleEdge(u, v) => write!(f, "edge ({u},{v}) is not an edge of the cycle graph"),
            Self::OrderMismatch { edge, order, n } => write!(
                f,
                "edge {edge:?} carries an automorphism of C_{order} in a graph on {n} nodes"
            ),
            Self::NotAcyclic { closing_edge } => {
                write!(f, "not acyclic: edge {closing_edge:?} closes a cycle")
            }
            Self::NotConnected { unreachable } => {
                write!(f, "not connected: node {unreachable} is unreachable from node 1")
            }
        }
    }
}

impl From<TreeViolation> for Error {
    fn from(v: TreeViolation) -> Self {
        Error::InvalidArgument(v.to_string())
    }
}

/// Checks that `pairs` form a spanning tree on nodes `1..=n`.
pub fn check_spanning_tree(n: usize, pairs: &[(usize, usize)]) -> std::result::Result<(), TreeViolation> {
    for &(u, v) in pairs {
        if u == 0 || v == 0 || u > n || v > n {
            return Err(TreeViolation::NodeOutOfRange { edge: (u, v), n });
        }
        if u == v {
            return Err(TreeViolation::SelfLoop(u));
        }
    }
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(u, v) in pairs {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a == b {
            return Err(TreeViolation::NotAcyclic { closing_edge: (u, v) });
        }
        parent[a] = b;
    }
    let root = find(&mut parent, 1);
    for i in 2..=n {
        if find(&mut parent, i) != root {
            return Err(TreeViolation::NotConnected { unreachable: i });
        }
    }
    Ok(())
}

/// A spanning-tree subgraph of `C_n` with one automorphism per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionGraph {
    n: usize,
    edges: Vec<TreeEdge>,
}

impl InteractionGraph {
    /// Builds the graph without checking the tree property; see [`Self::validate`].
    pub fn new(n: usize, edges: Vec<TreeEdge>) -> Result<Self> {
        if n < MIN_ORDER {
            return invalid(format!("interaction graph needs at least {MIN_ORDER} nodes, got {n}"));
        }
        Ok(Self { n, edges })
    }

    /// Builds and validates.
    pub fn spanning_tree(n: usize, edges: Vec<TreeEdge>) -> Result<Self> {
        let g = Self::new(n, edges)?;
        g.validate()?;
        Ok(g)
    }

    /// Edges given as `(u, v, shift)` triples.
    pub fn from_shifts(n: usize, edges: &[(usize, usize, i64)]) -> Result<Self> {
        let edges = edges
            .iter()
            .map(|&(u, v, k)| {
                Ok(TreeEdge {
                    u,
                    v,
                    gamma: CyclicAutomorphism::new(n, k)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::spanning_tree(n, edges)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.u, e.v)).collect()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|e| e.u == i || e.v == i).count()
    }

    /// Reports the first violated spanning-tree property.
    pub fn validate(&self) -> std::result::Result<(), TreeViolation> {
        let cycle = CycleGraph { n: self.n };
        for e in &self.edges {
            if e.u == 0 || e.v == 0 || e.u > self.n || e.v > self.n {
                return Err(TreeViolation::NodeOutOfRange {
                    edge: (e.u, e.v),
                    n: self.n,
                });
            }
            if !cycle.contains_edge(e.u, e.v) {
                return Err(TreeViolation::NotCycleEdge(e.u, e.v));
            }
            if e.gamma.order() != self.n {
                return Err(TreeViolation::OrderMismatch {
                    edge: (e.u, e.v),
                    order: e.gamma.order(),
                    n: self.n,
                });
            }
        }
        check_spanning_tree(self.n, &self.pairs())
    }

    /// True when every edge's automorphism actually maps `u` onto `v`, so the
    /// rotation chain reproduces a `C_n`-symmetric target.
    pub fn is_cn_consistent(&self) -> bool {
        self.edges
            .iter()
            .all(|e| e.gamma.apply(e.u).map(|w| w == e.v).unwrap_or(false))
    }

    /// Edges with their rotations `τ(γ_uv)`.
    pub fn weighted_edges(&self, tau: &PointGroupAssignment) -> Result<Vec<WeightedEdge>> {
        if tau.order() != self.n {
            return invalid(format!(
                "assignment for C_{} used with a graph on {} nodes",
                tau.order(),
                self.n
            ));
        }
        self.edges
            .iter()
            .map(|e| {
                Ok(WeightedEdge {
                    u: e.u,
                    v: e.v,
                    rotation: tau.tau(&e.gamma)?,
                })
            })
            .collect()
    }
}

/// `C_n` with one edge removed: the path through the remaining edges, each
/// carrying the generator (rotation by `2π/n`).
pub fn cycle_minus_edge(n: usize, removed: (usize, usize)) -> Result<InteractionGraph> {
    let cycle = CycleGraph::new(n)?;
    let (a, b) = removed;
    if !cycle.contains_edge(a, b) {
        return invalid(format!("({a},{b}) is not an edge of C_{n}"));
    }
    // orient the removed edge as (tail, tail + 1)
    let start = if b == a % n + 1 { b } else { a };
    let generator = CyclicAutomorphism::generator(n)?;
    let edges = (0..n - 1)
        .map(|k| {
            let u = (start - 1 + k) % n + 1;
            TreeEdge {
                u,
                v: u % n + 1,
                gamma: generator,
            }
        })
        .collect();
    InteractionGraph::spanning_tree(n, edges)
}

/// Per-node rotations `S_i` with `S_1 = I` and `S_v = τ_uv S_u` along every tree edge.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationChain {
    elements: Vec<RotationElement>,
    shifts: Option<Vec<CyclicAutomorphism>>,
}

impl RotationChain {
    /// Chain over arbitrary rotation-weighted tree edges, by breadth-first
    /// traversal from node 1.
    pub fn from_weighted(n: usize, dim: usize, edges: &[WeightedEdge]) -> Result<Self> {
        let pairs: Vec<_> = edges.iter().map(|e| (e.u, e.v)).collect();
        check_spanning_tree(n, &pairs)?;
        if let Some(e) = edges.iter().find(|e| e.rotation.dim() != dim) {
            return invalid(format!("edge ({},{}) rotation has wrong dimension", e.u, e.v));
        }
        let adjacency = adjacency(n, &pairs);
        let mut elements: Vec<Option<RotationElement>> = vec![None; n + 1];
        elements[1] = Some(RotationElement::identity(dim)?);
        let mut queue = VecDeque::from([1usize]);
        while let Some(node) = queue.pop_front() {
            let here = elements[node].clone().expect("visited");
            for &(edge, other) in &adjacency[node] {
                if elements[other].is_some() {
                    continue;
                }
                let e = &edges[edge];
                let step = if e.u == node {
                    e.rotation.clone()
                } else {
                    e.rotation.inverse()
                };
                elements[other] = Some(step.compose(&here)?);
                queue.push_back(other);
            }
        }
        Ok(Self {
            elements: elements
                .into_iter()
                .skip(1)
                .map(|s| s.expect("tree is connected"))
                .collect(),
            shifts: None,
        })
    }

    pub fn node_count(&self) -> usize {
        self.elements.len()
    }

    /// `S_i` for the 1-based node `i`.
    pub fn get(&self, i: usize) -> &RotationElement {
        &self.elements[i - 1]
    }

    pub fn elements(&self) -> &[RotationElement] {
        &self.elements
    }

    /// The accumulated automorphism per node when the chain was built from shifts.
    pub fn shifts(&self) -> Option<&[CyclicAutomorphism]> {
        self.shifts.as_deref()
    }
}

fn adjacency(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); n + 1];
    for (k, &(u, v)) in pairs.iter().enumerate() {
        adj[u].push((k, v));
        adj[v].push((k, u));
    }
    adj
}

/// Rotation chain of a planar interaction graph.
///
/// Products are accumulated as integer shifts and mapped through `τ` once per
/// node, so `S_i` is exactly the rotation by the accumulated multiple of `2π/n`.
pub fn rotation_chain(g: &InteractionGraph, tau: &PointGroupAssignment) -> Result<RotationChain> {
    g.validate()?;
    if tau.order() != g.n {
        return invalid("assignment order does not match the graph");
    }
    let adjacency = adjacency(g.n, &g.pairs());
    let mut acc: Vec<Option<CyclicAutomorphism>> = vec![None; g.n + 1];
    acc[1] = Some(CyclicAutomorphism::identity(g.n)?);
    let mut queue = VecDeque::from([1usize]);
    while let Some(node) = queue.pop_front() {
        let here = acc[node].expect("visited");
        for &(edge, other) in &adjacency[node] {
            if acc[other].is_some() {
                continue;
            }
            let e = &g.edges[edge];
            let step = if e.u == node { e.gamma } else { e.gamma.inverse() };
            acc[other] = Some(step.compose(&here)?);
            queue.push_back(other);
        }
    }
    let shifts: Vec<CyclicAutomorphism> = acc.into_iter().skip(1).map(|s| s.expect("connected")).collect();
    let elements = shifts.iter().map(|s| tau.tau(s)).collect::<Result<Vec<_>>>()?;
    Ok(RotationChain {
        elements,
        shifts: Some(shifts),
    })
}

/// Image of node `i` under `gamma`.
pub fn permutation_action(gamma: &CyclicAutomorphism, i: usize) -> Result<usize> {
    gamma.apply(i)
}
