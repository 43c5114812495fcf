//! Scenario files: the JSON schema, default resolution and validation.
//!
//! A scenario names the formation (planar `C_n` path or the 3-D cube), its
//! spanning tree, the initial positions, an optional maneuvering reference and
//! the integration grid. Everything left out is filled in by [`resolve`] and
//! echoed back through [`Scenario::resolved`].

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::{DVector, Vector3};
use serde::{Deserialize, Serialize};
use symform::dynamics::{default_horizon, default_step, MAX_STEP_FACTOR};
use symform::laplacian::DEFAULT_RANK_TOL;
use symform::maneuver::PiecewiseConstant;
use symform::{
    assignment, build_cube, cycle_minus_edge, random_configuration, rotation2, spectrum, AngularVelocity, Axis,
    CompositeLaplacian, Configuration, CubeSpec, InteractionGraph, ReferenceInputs, ReferenceState, RotationElement,
    SymmetryLaplacian,
};

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_BOX: f64 = 5.0;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    #[default]
    Planar,
    Cube,
}

/// The on-disk schema. Unknown keys are rejected so typos surface early.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default)]
    pub kind: Kind,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    /// Cycle edge `[u, v]` left out of the tree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub remove: Option<[usize; 2]>,
    /// Explicit tree edges `[u, v, shift]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(usize, usize, i64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Half-width of the box the random start is drawn from.
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cube: Option<CubeFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment<T> {
    pub t: f64,
    pub value: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OmegaValue {
    Planar(f64),
    Spatial([f64; 3]),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Waypoint {
    pub t: f64,
    pub p: [f64; 2],
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<Vec<f64>>,
    /// Initial frame angle; about `axis0` in 3-D.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis0: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocity: Option<Vec<Segment<Vec<f64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<Segment<OmegaValue>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<Segment<f64>>>,
    /// Planar path; replaces `velocity` and `omega`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub waypoints: Option<Vec<Waypoint>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisValue {
    Named(String),
    Vector([f64; 3]),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<[usize; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<[usize; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face_axis: Option<AxisValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face_removed: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross: Option<[usize; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_axis: Option<AxisValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_edges: Option<Vec<usize>>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub dt: Option<f64>,
    pub horizon: Option<f64>,
    pub output: Option<PathBuf>,
}

impl Overrides {
    fn apply(&self, file: &mut ScenarioFile) {
        if let Some(seed) = self.seed {
            file.seed = Some(seed);
        }
        if let Some(dt) = self.dt {
            file.dt = Some(dt);
        }
        if let Some(h) = self.horizon {
            file.horizon = Some(h);
        }
        if let Some(out) = &self.output {
            file.output = Some(out.clone());
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Initial {
    Seeded { seed: u64, half_width: f64 },
    Explicit,
}

#[derive(Debug, Clone)]
pub struct Reference {
    pub inputs: ReferenceInputs,
    pub initial: ReferenceState,
}

/// A validated scenario with every default filled in.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub description: Option<String>,
    pub kind: Kind,
    pub n: usize,
    pub dim: usize,
    pub graph: Option<InteractionGraph>,
    pub cube: Option<CompositeLaplacian>,
    /// The Laplacian every command works from. Tests may swap in a corrupted one.
    pub laplacian: SymmetryLaplacian,
    pub initial: Initial,
    pub p0: Configuration,
    pub reference: Option<Reference>,
    pub dt: f64,
    pub horizon: f64,
    pub output: PathBuf,
    /// The fully resolved file, suitable for echoing.
    pub resolved: ScenarioFile,
}

impl Scenario {
    pub fn seed(&self) -> Option<u64> {
        match self.initial {
            Initial::Seeded { seed, .. } => Some(seed),
            Initial::Explicit => None,
        }
    }

    pub fn resolved_json(&self) -> String {
        serde_json::to_string_pretty(&self.resolved).expect("scenario serializes")
    }
}

/// Parses scenario text. `origin` names the source in error messages.
pub fn parse_scenario(text: &str, origin: &str) -> Result<ScenarioFile, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let message = if path == "." || path.is_empty() {
            inner.to_string()
        } else {
            format!("at `{path}`: {inner}")
        };
        CliError::config(origin, message)
    })
}

pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    load_scenario_with(path, &Overrides::default())
}

pub fn load_scenario_with(path: &Path, overrides: &Overrides) -> Result<Scenario, CliError> {
    let origin = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| CliError::config(&origin, format!("cannot read: {e}")))?;
    let mut file = parse_scenario(&text, &origin)?;
    overrides.apply(&mut file);
    let default_name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("scenario")
        .to_string();
    resolve(file, &default_name)
}

fn axis_from(value: &AxisValue, field: &str) -> Result<Axis, String> {
    match value {
        AxisValue::Named(s) => match s.as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(format!(
                "`{field}` must be \"x\", \"y\", \"z\" or a unit 3-vector, got \"{other}\""
            )),
        },
        AxisValue::Vector(v) => Ok(Axis::Custom(Vector3::from(*v))),
    }
}

fn axis_value(axis: &Axis) -> AxisValue {
    match axis {
        Axis::X => AxisValue::Named("x".into()),
        Axis::Y => AxisValue::Named("y".into()),
        Axis::Z => AxisValue::Named("z".into()),
        Axis::Custom(v) => AxisValue::Vector([v.x, v.y, v.z]),
    }
}

fn cube_spec(file: &Option<CubeFile>) -> Result<CubeSpec, String> {
    let base = CubeSpec::default();
    let Some(f) = file else { return Ok(base) };
    Ok(CubeSpec {
        top: f.top.unwrap_or(base.top),
        bottom: f.bottom.unwrap_or(base.bottom),
        face_axis: f
            .face_axis
            .as_ref()
            .map(|a| axis_from(a, "cube.face_axis"))
            .transpose()?
            .unwrap_or(base.face_axis),
        face_removed: f.face_removed.unwrap_or(base.face_removed),
        cross: f.cross.unwrap_or(base.cross),
        cross_axis: f
            .cross_axis
            .as_ref()
            .map(|a| axis_from(a, "cube.cross_axis"))
            .transpose()?
            .unwrap_or(base.cross_axis),
        cross_edges: f.cross_edges.clone().unwrap_or(base.cross_edges),
    })
}

fn segments<T: Clone, U>(
    field: &str,
    given: &Option<Vec<Segment<T>>>,
    default: U,
    convert: impl Fn(&T) -> Result<U, String>,
) -> Result<PiecewiseConstant<U>, String> {
    match given {
        None => Ok(PiecewiseConstant::constant(default)),
        Some(list) => {
            let converted = list
                .iter()
                .map(|s| Ok((s.t, convert(&s.value)?)))
                .collect::<Result<Vec<_>, String>>()?;
            PiecewiseConstant::new(converted).map_err(|e| format!("`reference.{field}`: {e}"))
        }
    }
}

fn resolve_reference(file: &ReferenceFile, d: usize) -> Result<(Reference, ReferenceFile), String> {
    let scale_rate = segments("alpha", &file.alpha, 0.0, |&a| Ok(a))?;
    let (inputs, heading) = match &file.waypoints {
        Some(points) => {
            if d != 2 {
                return Err("`reference.waypoints` is only available for planar formations".into());
            }
            if file.velocity.is_some() || file.omega.is_some() {
                return Err("`reference.waypoints` cannot be combined with `velocity` or `omega`".into());
            }
            let pts: Vec<(f64, [f64; 2])> = points.iter().map(|w| (w.t, w.p)).collect();
            let (inputs, heading) = ReferenceInputs::from_waypoints(&pts, scale_rate).map_err(|e| e.to_string())?;
            (inputs, Some(heading))
        }
        None => {
            let velocity = segments("velocity", &file.velocity, DVector::zeros(d), |v: &Vec<f64>| {
                if v.len() == d {
                    Ok(DVector::from_vec(v.clone()))
                } else {
                    Err(format!("`reference.velocity` values must have {d} components"))
                }
            })?;
            let angular = segments("omega", &file.omega, AngularVelocity::zero(d), |w| match (w, d) {
                (OmegaValue::Planar(w), 2) => Ok(AngularVelocity::Planar(*w)),
                (OmegaValue::Spatial(w), 3) => Ok(AngularVelocity::Spatial(Vector3::from(*w))),
                _ => Err(format!(
                    "`reference.omega` values must be {} in dimension {d}",
                    if d == 2 { "numbers" } else { "3-vectors" }
                )),
            })?;
            let inputs = ReferenceInputs::new(d, velocity, angular, scale_rate).map_err(|e| e.to_string())?;
            (inputs, None)
        }
    };
    let r0 = file.r0.clone().unwrap_or_else(|| match &file.waypoints {
        Some(w) if !w.is_empty() => w[0].p.to_vec(),
        _ => vec![0.0; d],
    });
    if r0.len() != d {
        return Err(format!("`reference.r0` must have {d} components"));
    }
    let angle0 = file.angle0.or(heading).unwrap_or(0.0);
    let rotation = match d {
        2 => {
            if file.axis0.is_some() {
                return Err("`reference.axis0` is only meaningful in 3-D".into());
            }
            rotation2(angle0)
        }
        _ => {
            let axis = Vector3::from(file.axis0.unwrap_or([0.0, 0.0, 1.0]));
            if angle0 == 0.0 {
                RotationElement::identity(3)
            } else {
                RotationElement::axis_angle(&axis, angle0)
            }
        }
    }
    .map_err(|e| format!("`reference`: {e}"))?;
    let s0 = file.s0.unwrap_or(1.0);
    let initial = ReferenceState::new(0.0, DVector::from_vec(r0.clone()), rotation, s0).map_err(|e| e.to_string())?;

    let echo_segments = |pc: &PiecewiseConstant<DVector<f64>>| {
        pc.segments()
            .iter()
            .map(|(t, v)| Segment {
                t: *t,
                value: v.iter().copied().collect(),
            })
            .collect()
    };
    let echo = ReferenceFile {
        r0: Some(r0),
        angle0: Some(angle0),
        axis0: if d == 3 {
            Some(file.axis0.unwrap_or([0.0, 0.0, 1.0]))
        } else {
            None
        },
        s0: Some(s0),
        velocity: Some(echo_segments(inputs.velocity())),
        omega: Some(
            inputs
                .angular()
                .segments()
                .iter()
                .map(|(t, w)| Segment {
                    t: *t,
                    value: match w {
                        AngularVelocity::Planar(w) => OmegaValue::Planar(*w),
                        AngularVelocity::Spatial(w) => OmegaValue::Spatial([w.x, w.y, w.z]),
                    },
                })
                .collect(),
        ),
        alpha: Some(
            inputs
                .scale_rate()
                .segments()
                .iter()
                .map(|(t, a)| Segment { t: *t, value: *a })
                .collect(),
        ),
        waypoints: file.waypoints.clone(),
    };
    Ok((Reference { inputs, initial }, echo))
}

/// Validates a parsed file and fills in every default.
pub fn resolve(file: ScenarioFile, default_name: &str) -> Result<Scenario, CliError> {
    let name = file.name.clone().unwrap_or_else(|| default_name.to_string());
    let fail = |message: String| CliError::config(&name, message);
    let n = file.n;
    let mut resolved = file.clone();
    resolved.name = Some(name.clone());

    let (dim, graph, cube, laplacian) = match file.kind {
        Kind::Planar => {
            let dim = file.dimension.unwrap_or(2);
            if dim != 2 {
                return Err(fail(format!("planar formations have dimension 2, got {dim}")));
            }
            if file.cube.is_some() {
                return Err(fail("`cube` is only valid with \"kind\": \"cube\"".into()));
            }
            let graph = match (&file.remove, &file.edges) {
                (Some(_), Some(_)) => return Err(fail("give either `remove` or `edges`, not both".into())),
                (_, Some(edges)) => InteractionGraph::from_shifts(n, edges),
                (Some([u, v]), None) => cycle_minus_edge(n, (*u, *v)),
                (None, None) => cycle_minus_edge(n, (n, 1)),
            }
            .map_err(|e| fail(e.to_string()))?;
            let q = symform::build_laplacian(&graph, &assignment(n).map_err(|e| fail(e.to_string()))?)
                .map_err(|e| fail(e.to_string()))?;
            resolved.remove = None;
            resolved.edges = Some(
                graph
                    .edges()
                    .iter()
                    .map(|e| (e.u, e.v, e.gamma.shift() as i64))
                    .collect(),
            );
            (dim, Some(graph), None, q)
        }
        Kind::Cube => {
            if n != 8 {
                return Err(fail(format!("the cube formation has 8 agents, got n = {n}")));
            }
            let dim = file.dimension.unwrap_or(3);
            if dim != 3 {
                return Err(fail(format!("the cube formation has dimension 3, got {dim}")));
            }
            if file.remove.is_some() || file.edges.is_some() {
                return Err(fail(
                    "cube constraints are set through `cube`, not `remove` or `edges`".into(),
                ));
            }
            let spec = cube_spec(&file.cube).map_err(fail)?;
            let cube = build_cube(&spec).map_err(|e| fail(e.to_string()))?;
            resolved.cube = Some(CubeFile {
                top: Some(spec.top),
                bottom: Some(spec.bottom),
                face_axis: Some(axis_value(&spec.face_axis)),
                face_removed: Some(spec.face_removed),
                cross: Some(spec.cross),
                cross_axis: Some(axis_value(&spec.cross_axis)),
                cross_edges: Some(spec.cross_edges.clone()),
            });
            let q = cube.laplacian.clone();
            (dim, None, Some(cube), q)
        }
    };
    resolved.dimension = Some(dim);

    let (initial, p0) = match &file.positions {
        Some(_) if file.seed.is_some() || file.half_width.is_some() => {
            return Err(fail("give either `positions` or `seed`/`box`, not both".into()))
        }
        Some(positions) => {
            if positions.len() != n || positions.iter().any(|p| p.len() != dim) {
                return Err(fail(format!("`positions` must list {n} points of dimension {dim}")));
            }
            let p0 = Configuration::from_agents(positions).map_err(|e| fail(e.to_string()))?;
            (Initial::Explicit, p0)
        }
        None => {
            let seed = file.seed.unwrap_or(DEFAULT_SEED);
            let half_width = file.half_width.unwrap_or(DEFAULT_BOX);
            let p0 = random_configuration(n, dim, half_width, seed).map_err(|e| fail(e.to_string()))?;
            resolved.seed = Some(seed);
            resolved.half_width = Some(half_width);
            (Initial::Seeded { seed, half_width }, p0)
        }
    };

    let reference = match &file.reference {
        None => None,
        Some(r) => {
            let (reference, echo) = resolve_reference(r, dim).map_err(fail)?;
            resolved.reference = Some(echo);
            Some(reference)
        }
    };

    let s = spectrum(&laplacian, DEFAULT_RANK_TOL).map_err(|e| fail(e.to_string()))?;
    let dt = file.dt.unwrap_or_else(|| default_step(&s));
    let horizon = match file.horizon {
        Some(h) => h,
        None => default_horizon(&s).map_err(|e| fail(e.to_string()))?,
    };
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(fail(format!("`dt` must be positive, got {dt}")));
    }
    let limit = MAX_STEP_FACTOR / s.lambda_max();
    if dt > limit {
        return Err(fail(format!(
            "`dt` = {dt} exceeds the stability guard {limit:.6e}; try dt = {:.6e}",
            default_step(&s)
        )));
    }
    if !(horizon >= dt) || !horizon.is_finite() {
        return Err(fail(format!("`horizon` must be finite and at least dt, got {horizon}")));
    }
    resolved.dt = Some(dt);
    resolved.horizon = Some(horizon);
    let output = file.output.clone().unwrap_or_else(|| PathBuf::from("out").join(&name));
    resolved.output = Some(output.clone());

    Ok(Scenario {
        name,
        description: file.description,
        kind: file.kind,
        n,
        dim,
        graph,
        cube,
        laplacian,
        initial,
        p0,
        reference,
        dt,
        horizon,
        output,
        resolved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_resolves_defaults() {
        let file = parse_scenario(r#"{"n": 6, "remove": [6, 1], "seed": 42}"#, "inline").unwrap();
        let s = resolve(file, "minimal").unwrap();
        assert_eq!(s.name, "minimal");
        assert_eq!((s.n, s.dim), (6, 2));
        assert_eq!(s.seed(), Some(42));
        assert!(s.dt > 0.0 && s.horizon > s.dt);
        let echo = s.resolved_json();
        for key in ["\"dt\"", "\"horizon\"", "\"edges\"", "\"box\"", "\"output\""] {
            assert!(echo.contains(key), "{key} missing from {echo}");
        }
        // the echo resolves to the same scenario
        let again = resolve(parse_scenario(&echo, "echo").unwrap(), "x").unwrap();
        assert_eq!(again.p0, s.p0);
        assert_eq!(again.laplacian.matrix(), s.laplacian.matrix());
    }

    #[test]
    fn missing_n_is_named() {
        let err = parse_scenario(r#"{"remove": [6, 1], "seed": 42}"#, "inline").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("`n`"), "{err}");
    }

    #[test]
    fn errors_carry_paths_and_lines() {
        let err = parse_scenario("{\n  \"n\": 6,\n  \"seed\": \"x\"\n}", "inline")
            .unwrap_err()
            .to_string();
        assert!(err.contains("seed") && err.contains("line 3"), "{err}");
        let err = parse_scenario("{\n  \"n\": 6,\n  \"sede\": 1\n}", "inline")
            .unwrap_err()
            .to_string();
        assert!(err.contains("sede"), "{err}");
        let err = parse_scenario("{\"n\": 6, \"reference\": {\"alpha\": [{\"t\": 0}]}}", "inline")
            .unwrap_err()
            .to_string();
        assert!(err.contains("reference.alpha[0]") && err.contains("value"), "{err}");
        let err = parse_scenario("{\n\"n\": 6,,}", "inline").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn semantic_errors() {
        let bad = [
            r#"{"n": 6, "remove": [1, 3]}"#,
            r#"{"n": 6, "edges": [[1, 2, 1], [2, 3, 1]]}"#,
            r#"{"n": 2}"#,
            r#"{"n": 4, "dt": 10.0}"#,
            r#"{"n": 4, "positions": [[0, 0]]}"#,
            r#"{"n": 8, "kind": "cube", "dimension": 2}"#,
            r#"{"n": 4, "reference": {"velocity": [{"t": 0, "value": [1, 2, 3]}]}}"#,
            r#"{"n": 4, "reference": {"s0": -1}}"#,
        ];
        for text in bad {
            let file = parse_scenario(text, "inline").unwrap();
            let err = resolve(file, "bad").unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text}: {err}");
        }
        let err = resolve(parse_scenario(r#"{"n": 4, "dt": 10.0}"#, "i").unwrap(), "bad").unwrap_err();
        assert!(err.to_string().contains("try dt"), "{err}");
    }

    #[test]
    fn cube_and_waypoints() {
        let cube = resolve(
            parse_scenario(r#"{"n": 8, "kind": "cube", "seed": 1}"#, "i").unwrap(),
            "c",
        )
        .unwrap();
        assert_eq!(cube.dim, 3);
        assert_eq!(cube.laplacian.edges().len(), 7);
        let text = r#"{"n": 5, "reference": {"waypoints": [{"t": 0, "p": [1, 1]}, {"t": 4, "p": [5, 1]}]}}"#;
        let s = resolve(parse_scenario(text, "i").unwrap(), "w").unwrap();
        let r = s.reference.unwrap();
        assert_eq!(r.initial.r.as_slice(), &[1.0, 1.0]);
        assert_eq!(r.inputs.sample(1.0).velocity.as_slice(), &[1.0, 0.0]);
    }
}
