//! Scenario files: self-contained JSON descriptions of one content
//! experiment — the region Ω and window, the operand set, the gauge
//! bodies, grid and ε-ladder parameters — plus their validation,
//! deterministic execution, and report emission.
//!
//! A run produces three artifacts, written atomically (to a temporary
//! sibling, then renamed):
//!
//! * `<name>_ladder.csv` — one row per (curve, ε):
//!   `scenario,functional,target,body,h,eps,value`;
//! * `<name>_summary.csv` — one row per curve:
//!   `scenario,functional,target,body,estimate,lower,upper,target_value,exists_flag`;
//! * `<name>_report.json` — the scenario echo with all resolved defaults,
//!   plus the full relation report.
//!
//! Two runs of one scenario produce byte-identical files: there is no
//! randomness anywhere in the pipeline, hash iteration never reaches an
//! artifact, and floats are printed with the shortest round-trip format.

use crate::content::{relation_report, CurveKind, CurveReport, RasterParams, RelationReport};
use crate::convex::{ConvexBody, ConvexError};
use crate::geom::{AxisBox, Point};
use crate::raster::{
    distance_field, field_bytes, field_csv, rasterize, DistanceMethod, Grid, RasterError,
    RasterMode,
};
use crate::shapes::set1::{Interval1, Set1};
use crate::shapes::{Domain, Shape, ShapeError};
use serde::{Deserialize, Serialize};
use std::io::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid scenario at `{field}`: {msg}")]
    Validation { field: String, msg: String },
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Convex(#[from] ConvexError),
    #[error(transparent)]
    Content(#[from] crate::content::ContentError),
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("scenario has no body named `{0}`")]
    UnknownBody(String),
}

fn invalid(field: &str, msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation { field: field.to_string(), msg: msg.into() }
}

/// Serializable shape tree mirroring [`Shape`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeSpec {
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    Points {
        points: Vec<Vec<f64>>,
    },
    /// 1-D interval/point union: `parts` closed, `open_parts` open.
    Intervals {
        #[serde(default)]
        parts: Vec<(f64, f64)>,
        #[serde(default)]
        open_parts: Vec<(f64, f64)>,
        #[serde(default)]
        points: Vec<f64>,
    },
    Union {
        a: Box<ShapeSpec>,
        b: Box<ShapeSpec>,
    },
    Intersection {
        a: Box<ShapeSpec>,
        b: Box<ShapeSpec>,
    },
    Difference {
        a: Box<ShapeSpec>,
        b: Box<ShapeSpec>,
    },
}

fn pad(field: &str, v: &[f64], dim: usize) -> Result<Point, ScenarioError> {
    if v.len() != dim {
        return Err(invalid(field, format!("expected {dim} coordinates, got {}", v.len())));
    }
    let mut p = [0.0; 3];
    p[..dim].copy_from_slice(v);
    Ok(p)
}

impl ShapeSpec {
    pub fn to_shape(&self, dim: usize, field: &str) -> Result<Shape, ScenarioError> {
        let sub = |leaf: &str| format!("{field}.{leaf}");
        Ok(match self {
            ShapeSpec::Ball { center, radius } => Shape::Ball {
                dim,
                center: pad(&sub("center"), center, dim)?,
                radius: *radius,
            },
            ShapeSpec::Box { lo, hi } => Shape::Box {
                dim,
                lo: pad(&sub("lo"), lo, dim)?,
                hi: pad(&sub("hi"), hi, dim)?,
            },
            ShapeSpec::Polygon { vertices } => {
                if dim != 2 {
                    return Err(invalid(field, "polygons are 2-D"));
                }
                Shape::Polygon {
                    vertices: vertices.iter().map(|v| [v[0], v[1], 0.0]).collect(),
                }
            }
            ShapeSpec::Points { points } => Shape::Points {
                dim,
                points: points
                    .iter()
                    .map(|p| pad(&sub("points"), p, dim))
                    .collect::<Result<_, _>>()?,
            },
            ShapeSpec::Intervals { parts, open_parts, points } => {
                if dim != 1 {
                    return Err(invalid(field, "interval sets are 1-D"));
                }
                let mut iv: Vec<Interval1> =
                    parts.iter().map(|&(a, b)| Interval1::closed(a, b)).collect();
                iv.extend(open_parts.iter().map(|&(a, b)| Interval1::open(a, b)));
                iv.extend(points.iter().map(|&x| Interval1::point(x)));
                Shape::Intervals { set: Set1::from_parts(iv) }
            }
            ShapeSpec::Union { a, b } => {
                Shape::union(a.to_shape(dim, &sub("a"))?, b.to_shape(dim, &sub("b"))?)
            }
            ShapeSpec::Intersection { a, b } => {
                Shape::intersection(a.to_shape(dim, &sub("a"))?, b.to_shape(dim, &sub("b"))?)
            }
            ShapeSpec::Difference { a, b } => {
                Shape::difference(a.to_shape(dim, &sub("a"))?, b.to_shape(dim, &sub("b"))?)
            }
        })
    }
}

/// Serializable gauge body description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Ball { radius: f64 },
    Polytope { vertices: Vec<Vec<f64>> },
    Interval { lo: f64, hi: f64 },
}

impl BodySpec {
    pub fn to_body(&self, dim: usize, field: &str) -> Result<ConvexBody, ScenarioError> {
        Ok(match self {
            BodySpec::Ball { radius } => ConvexBody::ball(dim, *radius)?,
            BodySpec::Polytope { vertices } => {
                let pts: Vec<Point> = vertices
                    .iter()
                    .map(|v| pad(&format!("{field}.vertices"), v, dim))
                    .collect::<Result<_, _>>()?;
                ConvexBody::make_polytope(dim, &pts)?
            }
            BodySpec::Interval { lo, hi } => {
                if dim != 1 {
                    return Err(invalid(field, "interval bodies are 1-D"));
                }
                ConvexBody::interval(*lo, *hi)?
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyEntry {
    pub name: String,
    pub body: BodySpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    /// Cells along the window's longest extent.
    pub n: usize,
    /// Mesh segments per full turn for curved boundaries.
    pub refinement: usize,
    /// Smallest admissible ε in cells.
    pub eps_floor_cells: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        let p = RasterParams::default();
        GridSpec { n: p.grid_n, refinement: p.refinement, eps_floor_cells: p.eps_floor_cells }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LadderSpec {
    /// Largest ε in cells; successive points halve it.
    pub eps_max_cells: f64,
    pub points: usize,
}

impl Default for LadderSpec {
    fn default() -> Self {
        LadderSpec { eps_max_cells: 64.0, points: 4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TolSpec {
    pub rel_tol: f64,
}

impl Default for TolSpec {
    fn default() -> Self {
        TolSpec { rel_tol: 0.03 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

/// A parsed scenario file. Optional sections materialize their defaults on
/// deserialization, so serializing the struct back echoes every resolved
/// knob explicitly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub dimension: usize,
    pub window: WindowSpec,
    /// The open region Ω (points classified strictly inside count).
    pub open_region: ShapeSpec,
    /// The operand set E (or lower-dimensional S).
    pub shape: ShapeSpec,
    pub bodies: Vec<BodyEntry>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub ladder: LadderSpec,
    #[serde(default)]
    pub tolerances: TolSpec,
    /// Curve kinds to include in the CSV artifacts; `None` = all six.
    #[serde(default)]
    pub curves: Option<Vec<String>>,
    /// Output directory; CLI `--out` overrides.
    #[serde(default)]
    pub out_dir: Option<String>,
}

/// A validated scenario with every description resolved to engine types.
#[derive(Debug, Clone)]
pub struct ResolvedScenario {
    pub file: ScenarioFile,
    pub shape: Shape,
    pub domain: Domain,
    pub bodies: Vec<(String, ConvexBody)>,
    pub params: RasterParams,
    pub h: f64,
    /// Strictly decreasing ε values, eps_max_cells·h downward.
    pub ladder: Vec<f64>,
    pub kinds: Vec<CurveKind>,
}

pub fn parse_scenario(text: &str) -> Result<ScenarioFile, ScenarioError> {
    Ok(serde_json::from_str(text)?)
}

pub fn resolve(file: &ScenarioFile) -> Result<ResolvedScenario, ScenarioError> {
    if file.name.is_empty() || !file.name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-')
    {
        return Err(invalid("name", "must be a nonempty [alnum_-] token (used in file names)"));
    }
    let dim = file.dimension;
    if !(1..=3).contains(&dim) {
        return Err(invalid("dimension", "must be 1, 2 or 3"));
    }
    if file.window.lo.len() != dim || file.window.hi.len() != dim {
        return Err(invalid("window", format!("lo/hi must have {dim} coordinates")));
    }
    let window = AxisBox::new(dim, &file.window.lo, &file.window.hi)
        .ok_or_else(|| invalid("window", "need finite lo < hi on every axis"))?;
    let open_region = file.open_region.to_shape(dim, "open_region")?;
    open_region.validate()?;
    let shape = file.shape.to_shape(dim, "shape")?;
    shape.validate()?;
    let domain = Domain::new(open_region, window)
        .map_err(|e| invalid("open_region", e.to_string()))?;
    if file.bodies.is_empty() {
        return Err(invalid("bodies", "need at least one body"));
    }
    let mut bodies = Vec::new();
    for (i, entry) in file.bodies.iter().enumerate() {
        let field = format!("bodies[{i}]");
        if entry.name.is_empty() {
            return Err(invalid(&field, "body name must be nonempty"));
        }
        if bodies.iter().any(|(n, _)| n == &entry.name) {
            return Err(invalid(&field, format!("duplicate body name `{}`", entry.name)));
        }
        bodies.push((entry.name.clone(), entry.body.to_body(dim, &field)?));
    }
    if file.grid.n < 16 {
        return Err(invalid("grid.n", "must be at least 16"));
    }
    if file.ladder.points == 0 {
        return Err(invalid("ladder.points", "must be positive"));
    }
    let eps_min_cells = file.ladder.eps_max_cells * 0.5f64.powi(file.ladder.points as i32 - 1);
    if dim > 1 && eps_min_cells < file.grid.eps_floor_cells {
        return Err(invalid(
            "ladder",
            format!(
                "smallest ε is {eps_min_cells} cells, below the floor of {} cells",
                file.grid.eps_floor_cells
            ),
        ));
    }
    let params = RasterParams {
        grid_n: file.grid.n,
        refinement: file.grid.refinement,
        eps_floor_cells: file.grid.eps_floor_cells,
    };
    let h = if dim == 1 && shape.to_set1().is_some() {
        // Exact path: ε values still scale off the nominal grid for
        // comparability, but no raster is built.
        window.max_extent() / file.grid.n as f64
    } else {
        Grid::cover(&domain.window, file.grid.n)?.spacing()
    };
    let ladder: Vec<f64> = (0..file.ladder.points)
        .map(|k| file.ladder.eps_max_cells * 0.5f64.powi(k as i32) * h)
        .collect();
    let kinds = match &file.curves {
        None => crate::content::CURVE_KINDS.to_vec(),
        Some(labels) => {
            let mut kinds = Vec::new();
            for l in labels {
                let kind = crate::content::CURVE_KINDS
                    .iter()
                    .find(|k| k.label() == l)
                    .ok_or_else(|| invalid("curves", format!("unknown curve kind `{l}`")))?;
                kinds.push(*kind);
            }
            kinds
        }
    };
    Ok(ResolvedScenario {
        file: file.clone(),
        shape,
        domain,
        bodies,
        params,
        h,
        ladder,
        kinds,
    })
}

pub fn evaluate(rs: &ResolvedScenario) -> Result<RelationReport, ScenarioError> {
    Ok(relation_report(&rs.shape, &rs.domain, &rs.bodies, &rs.ladder, &rs.params)?)
}

/// The `target` CSV column: the curve's target set, except the complement
/// one-sided curve which is marked `complement` to stay distinguishable.
fn csv_target(kind: CurveKind) -> &'static str {
    match kind {
        CurveKind::SmComplement => "complement",
        k => k.target().label(),
    }
}

fn wanted<'r>(rs: &ResolvedScenario, body: &'r crate::content::BodyReport) -> Vec<&'r CurveReport> {
    body.curves.iter().filter(|c| rs.kinds.contains(&c.kind)).collect()
}

/// One row per (selected curve, ladder point).
pub fn ladder_csv(rs: &ResolvedScenario, report: &RelationReport) -> String {
    let mut out = String::from("scenario,functional,target,body,h,eps,value\n");
    for body in &report.bodies {
        for c in wanted(rs, body) {
            for (eps, value) in c.curve.ladder.iter().zip(&c.curve.values) {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    rs.file.name,
                    c.kind.functional().label(),
                    csv_target(c.kind),
                    body.body_label,
                    c.curve.h,
                    eps,
                    value
                ));
            }
        }
    }
    out
}

/// One row per selected curve.
pub fn summary_csv(rs: &ResolvedScenario, report: &RelationReport) -> String {
    let mut out =
        String::from("scenario,functional,target,body,estimate,lower,upper,target_value,exists_flag\n");
    for body in &report.bodies {
        for c in wanted(rs, body) {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                rs.file.name,
                c.kind.functional().label(),
                csv_target(c.kind),
                body.body_label,
                c.estimate.value,
                c.estimate.lower,
                c.estimate.upper,
                c.target_value,
                c.exists
            ));
        }
    }
    out
}

/// Scenario echo with the values every default resolved to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedEcho {
    pub h: f64,
    pub ladder: Vec<f64>,
    pub rel_tol: f64,
    pub grid_n: usize,
    pub refinement: usize,
    pub eps_floor_cells: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: ScenarioFile,
    pub resolved: ResolvedEcho,
    pub report: RelationReport,
}

pub struct RunOutput {
    pub report: RelationReport,
    pub ladder_csv: String,
    pub summary_csv: String,
    pub report_json: String,
    /// Paths written, in (ladder, summary, json) order.
    pub paths: Vec<PathBuf>,
}

/// Writes via a temporary sibling and an atomic rename, so a crash never
/// leaves a half-written artifact under the final name.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

/// Runs a scenario and writes its three artifacts into `out_dir` (which
/// overrides the file's own `out_dir`; default `.`).
pub fn run_to_dir(
    file: &ScenarioFile,
    out_dir: Option<&Path>,
) -> Result<RunOutput, ScenarioError> {
    let rs = resolve(file)?;
    let report = evaluate(&rs)?;
    let ladder = ladder_csv(&rs, &report);
    let summary = summary_csv(&rs, &report);
    let run_report = RunReport {
        scenario: rs.file.clone(),
        resolved: ResolvedEcho {
            h: rs.h,
            ladder: rs.ladder.clone(),
            rel_tol: rs.file.tolerances.rel_tol,
            grid_n: rs.params.grid_n,
            refinement: rs.params.refinement,
            eps_floor_cells: rs.params.eps_floor_cells,
        },
        report: report.clone(),
    };
    let json = serde_json::to_string_pretty(&run_report)?;
    let dir: PathBuf = match out_dir {
        Some(d) => d.to_path_buf(),
        None => PathBuf::from(rs.file.out_dir.as_deref().unwrap_or(".")),
    };
    std::fs::create_dir_all(&dir)?;
    let paths = vec![
        dir.join(format!("{}_ladder.csv", rs.file.name)),
        dir.join(format!("{}_summary.csv", rs.file.name)),
        dir.join(format!("{}_report.json", rs.file.name)),
    ];
    write_atomic(&paths[0], ladder.as_bytes())?;
    write_atomic(&paths[1], summary.as_bytes())?;
    write_atomic(&paths[2], json.as_bytes())?;
    Ok(RunOutput { report, ladder_csv: ladder, summary_csv: summary, report_json: json, paths })
}

/// Computes the anisotropic distance field to the scenario's shape under
/// the named body's gauge and writes it (binary by default, CSV on
/// request).
///
/// The seed is the cell-center raster for positive-mass shapes and the
/// supercover for λ-null ones; distances use the two-sweep propagation
/// with neighborhood radius 3.
pub fn dump_field(
    file: &ScenarioFile,
    body_name: &str,
    out_path: &Path,
    csv: bool,
) -> Result<(), ScenarioError> {
    let rs = resolve(file)?;
    let body = rs
        .bodies
        .iter()
        .find(|(n, _)| n == body_name)
        .map(|(_, b)| b.clone())
        .ok_or_else(|| ScenarioError::UnknownBody(body_name.to_string()))?;
    let grid = Grid::cover(&rs.domain.window, rs.params.grid_n)?;
    let mode = if rs.shape.null_mass() { RasterMode::Supercover } else { RasterMode::CellCenter };
    let seed = rasterize(&rs.shape, grid, mode)?;
    let f = distance_field(&seed, &body, DistanceMethod::Chamfer { radius: 3 })?;
    let bytes = if csv { field_csv(&f).into_bytes() } else { field_bytes(&f) };
    if let Some(parent) = out_path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    write_atomic(out_path, &bytes)?;
    Ok(())
}

/// The built-in scenario deck: the showcase configurations the
/// verification suite reproduces.
///
/// * `annulus` — Ω is the disc of radius 2 minus the unit circle, E the
///   closed annulus between radii 1 and 2. The Ω-clipped boundary is
///   empty, so the two-sided curve collapses to 0 while the
///   window-relative and symmetrized curves stay near 4π and 2π: the
///   showcase of a window-relative limit existing with the wrong value.
/// * `disc` — unit disc, square gauge, Ω a box cutting nothing: one-sided
///   content against an anisotropic perimeter of exactly 8.
/// * `square` — unit square with Ω a strict neighborhood of its closure,
///   ball and triangle gauges; the coincidence case.
pub fn builtin_scenarios() -> Vec<ScenarioFile> {
    let ball2 = |r: f64| ShapeSpec::Ball { center: vec![0.0, 0.0], radius: r };
    vec![
        ScenarioFile {
            name: "annulus".into(),
            dimension: 2,
            window: WindowSpec { lo: vec![-2.7, -2.7], hi: vec![2.7, 2.7] },
            open_region: ShapeSpec::Union {
                a: Box::new(ball2(1.0)),
                b: Box::new(ShapeSpec::Difference {
                    a: Box::new(ball2(2.0)),
                    b: Box::new(ball2(1.0)),
                }),
            },
            shape: ShapeSpec::Difference { a: Box::new(ball2(2.0)), b: Box::new(ball2(1.0)) },
            bodies: vec![BodyEntry { name: "ball".into(), body: BodySpec::Ball { radius: 1.0 } }],
            grid: GridSpec { n: 1024, ..GridSpec::default() },
            ladder: LadderSpec { eps_max_cells: 64.0, points: 4 },
            tolerances: TolSpec::default(),
            curves: None,
            out_dir: None,
        },
        ScenarioFile {
            name: "disc".into(),
            dimension: 2,
            window: WindowSpec { lo: vec![-2.3, -2.3], hi: vec![2.3, 2.3] },
            open_region: ShapeSpec::Box { lo: vec![-1.4, -1.4], hi: vec![1.4, 1.4] },
            shape: ball2(1.0),
            bodies: vec![BodyEntry {
                name: "square".into(),
                body: BodySpec::Polytope {
                    vertices: vec![
                        vec![1.0, 1.0],
                        vec![-1.0, 1.0],
                        vec![-1.0, -1.0],
                        vec![1.0, -1.0],
                    ],
                },
            }],
            grid: GridSpec { n: 1024, ..GridSpec::default() },
            ladder: LadderSpec { eps_max_cells: 64.0, points: 4 },
            tolerances: TolSpec::default(),
            curves: None,
            out_dir: None,
        },
        ScenarioFile {
            name: "square".into(),
            dimension: 2,
            window: WindowSpec { lo: vec![-1.5, -1.5], hi: vec![2.75, 2.75] },
            open_region: ShapeSpec::Box { lo: vec![-0.35, -0.35], hi: vec![1.62, 1.62] },
            shape: ShapeSpec::Box { lo: vec![0.0, 0.0], hi: vec![1.0, 1.0] },
            bodies: vec![
                BodyEntry { name: "ball".into(), body: BodySpec::Ball { radius: 1.0 } },
                BodyEntry {
                    name: "triangle".into(),
                    body: BodySpec::Polytope {
                        vertices: vec![vec![2.0, -1.0], vec![-1.0, 2.0], vec![-1.0, -1.0]],
                    },
                },
            ],
            grid: GridSpec { n: 2048, ..GridSpec::default() },
            ladder: LadderSpec { eps_max_cells: 32.0, points: 4 },
            tolerances: TolSpec::default(),
            curves: None,
            out_dir: None,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_scenarios_resolve() {
        for file in builtin_scenarios() {
            let rs = resolve(&file).unwrap_or_else(|e| panic!("{}: {e}", file.name));
            assert!(rs.ladder.windows(2).all(|w| w[1] < w[0]));
            assert_eq!(rs.kinds.len(), 6);
        }
    }

    #[test]
    fn scenario_roundtrips_through_json() {
        for file in builtin_scenarios() {
            let text = serde_json::to_string_pretty(&file).unwrap();
            let back = parse_scenario(&text).unwrap();
            assert_eq!(file, back);
        }
    }

    #[test]
    fn ladder_floor_violation_names_the_ladder() {
        let mut file = builtin_scenarios().remove(0);
        file.ladder = LadderSpec { eps_max_cells: 16.0, points: 4 }; // smallest: 2 cells
        match resolve(&file) {
            Err(ScenarioError::Validation { field, .. }) => assert_eq!(field, "ladder"),
            other => panic!("expected ladder validation error, got {other:?}"),
        }
    }

    #[test]
    fn defaults_materialize_on_parse() {
        let text = r#"{
            "name": "tiny",
            "dimension": 1,
            "window": {"lo": [-2.0], "hi": [3.0]},
            "open_region": {"op": "box", "lo": [-2.0], "hi": [3.0]},
            "shape": {"op": "intervals", "parts": [[0.0, 1.0]], "points": [2.0]},
            "bodies": [{"name": "sym", "body": {"kind": "interval", "lo": -1.0, "hi": 1.0}}]
        }"#;
        let file = parse_scenario(text).unwrap();
        assert_eq!(file.grid.n, 1024);
        assert_eq!(file.ladder.points, 4);
        assert_eq!(file.tolerances.rel_tol, 0.03);
        let rs = resolve(&file).unwrap();
        let report = evaluate(&rs).unwrap();
        // Exact path: one-sided content of [0,1]∪{2} is 4 at every ε.
        let sm = report.bodies[0]
            .curves
            .iter()
            .find(|c| c.kind == CurveKind::SmSet)
            .unwrap();
        assert!(sm.curve.values.iter().all(|v| (v - 4.0).abs() < 1e-12));
        assert!(sm.curve.h == 0.0);
    }

    /// The committed scenario deck must stay in sync with the built-ins;
    /// regenerate with `cargo run -p minklab --example emit_scenarios`.
    #[test]
    fn committed_deck_matches_builtins() {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
        for builtin in builtin_scenarios() {
            let path = dir.join(format!("{}.json", builtin.name));
            let text = std::fs::read_to_string(&path)
                .unwrap_or_else(|e| panic!("read {}: {e}", path.display()));
            let parsed = parse_scenario(&text).unwrap();
            assert_eq!(parsed, builtin, "{} drifted from the built-in", path.display());
        }
    }

    #[test]
    fn unknown_fields_and_kinds_are_rejected() {
        let text = r#"{"name": "x", "dimension": 2, "unknown_field": 1}"#;
        assert!(matches!(parse_scenario(text), Err(ScenarioError::Parse(_))));
        let mut file = builtin_scenarios().remove(1);
        file.curves = Some(vec!["no_such_curve".into()]);
        match resolve(&file) {
            Err(ScenarioError::Validation { field, .. }) => assert_eq!(field, "curves"),
            other => panic!("expected curves validation error, got {other:?}"),
        }
    }

    #[test]
    fn csv_artifacts_have_the_pinned_columns() {
        let file = ScenarioFile {
            name: "line".into(),
            dimension: 1,
            window: WindowSpec { lo: vec![-2.0], hi: vec![4.0] },
            open_region: ShapeSpec::Box { lo: vec![-2.0], hi: vec![4.0] },
            shape: ShapeSpec::Intervals {
                parts: vec![(0.0, 1.0)],
                open_parts: vec![],
                points: vec![2.0],
            },
            bodies: vec![BodyEntry {
                name: "sym".into(),
                body: BodySpec::Interval { lo: -1.0, hi: 1.0 },
            }],
            grid: GridSpec::default(),
            ladder: LadderSpec::default(),
            tolerances: TolSpec::default(),
            curves: None,
            out_dir: None,
        };
        let rs = resolve(&file).unwrap();
        let report = evaluate(&rs).unwrap();
        let ladder = ladder_csv(&rs, &report);
        let summary = summary_csv(&rs, &report);
        assert!(ladder.starts_with("scenario,functional,target,body,h,eps,value\n"));
        assert!(summary
            .starts_with("scenario,functional,target,body,estimate,lower,upper,target_value,exists_flag\n"));
        // 6 curves × 4 ladder points + header.
        assert_eq!(ladder.lines().count(), 1 + 6 * 4);
        assert_eq!(summary.lines().count(), 1 + 6);
        assert!(summary.contains("sm,complement,sym"));
    }
}
