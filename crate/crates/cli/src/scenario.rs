//! Scenario files: a TOML document describing the constraint, the targets and
//! optional `solver`, `certify` and `oracle` blocks.
//!
//! ```toml
//! dim = 2
//!
//! [constraint]
//! kind = "ball"
//! center = [-3.0, 4.0]
//! radius = 1.5
//!
//! [[targets]]
//! kind = "box"
//! center = [-7.0, 1.0]
//! half_widths = [1.0, 1.0]
//!
//! [solver]
//! max_iters = 100000
//! start = [-3.0, 5.5]
//! schedule = { kind = "harmonic", c = 1.0 }
//! ```
//!
//! Unknown fields are rejected everywhere.

use std::path::Path;

use heron_core::geometry::ConvexSet;
use heron_core::{
    ConstraintProjection, OracleConfig, Scenario, SolverConfig, Stagnation, StepSchedule, Vector,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub dim: usize,
    pub constraint: SetRecord,
    pub targets: Vec<SetRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certify: Option<CertifyBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SetRecord {
    Singleton {
        point: Vec<f64>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Box {
        center: Vec<f64>,
        half_widths: Vec<f64>,
    },
    Affine {
        base: Vec<f64>,
        #[serde(default)]
        directions: Vec<Vec<f64>>,
    },
    Halfspace {
        normal: Vec<f64>,
        offset: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ScheduleRecord {
    Harmonic { c: f64 },
    Power { c: f64, p: f64 },
    Explicit { steps: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionRecord {
    Metric,
    Sphere,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_stride: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection: Option<ProjectionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stagnation_window: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleRecord>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxRecord {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_points_per_axis: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refinement_rounds: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounding_box: Option<BoxRecord>,
}

pub const DEFAULT_MAX_ITERS: u64 = 10_000;

fn vector(field: &str, coords: &[f64], dim: usize) -> Result<Vector, CliError> {
    if coords.len() != dim {
        return Err(CliError::Schema(format!(
            "{field}: expected {dim} coordinates, found {}",
            coords.len()
        )));
    }
    Vector::new(coords.to_vec()).map_err(|e| CliError::Schema(format!("{field}: {e}")))
}

impl SetRecord {
    pub fn to_set(&self, field: &str, dim: usize) -> Result<ConvexSet, CliError> {
        let invalid = |e: heron_core::HeronError| CliError::Schema(format!("{field}: {e}"));
        match self {
            Self::Singleton { point } => Ok(ConvexSet::singleton(vector(
                &format!("{field}.point"),
                point,
                dim,
            )?)),
            Self::Ball { center, radius } => {
                ConvexSet::ball(vector(&format!("{field}.center"), center, dim)?, *radius)
                    .map_err(invalid)
            }
            Self::Box {
                center,
                half_widths,
            } => {
                if half_widths.len() != dim {
                    return Err(CliError::Schema(format!(
                        "{field}.half_widths: expected {dim} values, found {}",
                        half_widths.len()
                    )));
                }
                ConvexSet::axis_box(
                    vector(&format!("{field}.center"), center, dim)?,
                    half_widths.clone(),
                )
                .map_err(invalid)
            }
            Self::Affine { base, directions } => {
                let dirs = directions
                    .iter()
                    .enumerate()
                    .map(|(i, d)| vector(&format!("{field}.directions[{i}]"), d, dim))
                    .collect::<Result<Vec<_>, _>>()?;
                ConvexSet::affine(vector(&format!("{field}.base"), base, dim)?, dirs)
                    .map_err(invalid)
            }
            Self::Halfspace { normal, offset } => {
                ConvexSet::halfspace(vector(&format!("{field}.normal"), normal, dim)?, *offset)
                    .map_err(invalid)
            }
        }
    }

    pub fn from_set(set: &ConvexSet) -> Self {
        let v = |x: &Vector| x.as_slice().to_vec();
        match set {
            ConvexSet::Singleton(p) => Self::Singleton { point: v(p) },
            ConvexSet::Ball(b) => Self::Ball {
                center: v(b.center()),
                radius: b.radius(),
            },
            ConvexSet::Box(b) => Self::Box {
                center: v(b.center()),
                half_widths: b.half_widths().to_vec(),
            },
            ConvexSet::Affine(a) => Self::Affine {
                base: v(a.base()),
                directions: a.directions().iter().map(v).collect(),
            },
            ConvexSet::Halfspace(h) => Self::Halfspace {
                normal: v(h.normal()),
                offset: h.offset(),
            },
        }
    }
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Schema(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario records always serialize")
    }

    pub fn scenario(&self) -> Result<Scenario, CliError> {
        if self.dim == 0 {
            return Err(CliError::Schema("dim: must be at least 1".into()));
        }
        let constraint = self.constraint.to_set("constraint", self.dim)?;
        let targets = self
            .targets
            .iter()
            .enumerate()
            .map(|(i, t)| t.to_set(&format!("targets[{i}]"), self.dim))
            .collect::<Result<Vec<_>, _>>()?;
        if targets.is_empty() {
            return Err(CliError::Schema(
                "targets: at least one target is required".into(),
            ));
        }
        Scenario::new(constraint, targets).map_err(|e| CliError::Schema(e.to_string()))
    }

    /// Re-derives every set record from the validated sets (affine directions come
    /// back orthonormalized); the optional blocks are kept as written.
    pub fn normalized(&self) -> Result<Self, CliError> {
        let sc = self.scenario()?;
        Ok(Self {
            dim: self.dim,
            constraint: SetRecord::from_set(sc.constraint()),
            targets: sc.targets().iter().map(SetRecord::from_set).collect(),
            ..self.clone()
        })
    }

    /// Solver configuration from the `solver` block. A missing start defaults to
    /// the projection of the target centroid onto the constraint.
    pub fn solver_config(&self, sc: &Scenario) -> Result<SolverConfig, CliError> {
        let block = self.solver.clone().unwrap_or_default();
        let schedule = match &block.schedule {
            None => StepSchedule::harmonic(1.0),
            Some(ScheduleRecord::Harmonic { c }) => StepSchedule::harmonic(*c),
            Some(ScheduleRecord::Power { c, p }) => StepSchedule::power(*c, *p),
            Some(ScheduleRecord::Explicit { steps }) => StepSchedule::explicit(steps.clone()),
        }
        .map_err(|e| CliError::Schema(format!("solver.schedule: {e}")))?;
        let start = match &block.start {
            Some(s) => vector("solver.start", s, self.dim)?,
            None => sc.default_start(),
        };
        let mut cfg = SolverConfig::new(
            schedule,
            block.max_iters.unwrap_or(DEFAULT_MAX_ITERS),
            start,
        )
        .with_stride(block.trace_stride.unwrap_or(1))
        .with_projection(match block.projection {
            Some(ProjectionRecord::Sphere) => ConstraintProjection::Sphere,
            _ => ConstraintProjection::Metric,
        });
        if let Some(w) = block.stagnation_window {
            cfg = cfg.with_stagnation(Stagnation::new(w));
        }
        if cfg.max_iters == 0 {
            return Err(CliError::Schema(
                "solver.max_iters: must be positive".into(),
            ));
        }
        if cfg.trace_stride == 0 {
            return Err(CliError::Schema(
                "solver.trace_stride: must be positive".into(),
            ));
        }
        Ok(cfg)
    }

    pub fn oracle_config(&self) -> Result<OracleConfig, CliError> {
        let block = self.oracle.clone().unwrap_or_default();
        let mut cfg = OracleConfig::default();
        if let Some(n) = block.grid_points_per_axis {
            cfg.grid_points_per_axis = n;
        }
        if let Some(r) = block.refinement_rounds {
            cfg.refinement_rounds = r;
        }
        if let Some(b) = &block.bounding_box {
            cfg.bounding_box = Some((
                vector("oracle.bounding_box.lower", &b.lower, self.dim)?,
                vector("oracle.bounding_box.upper", &b.upper, self.dim)?,
            ));
        }
        Ok(cfg)
    }

    pub fn certify_directions(&self) -> Result<Option<Vec<Vector>>, CliError> {
        let Some(dirs) = self.certify.as_ref().and_then(|c| c.directions.as_ref()) else {
            return Ok(None);
        };
        dirs.iter()
            .enumerate()
            .map(|(i, d)| vector(&format!("certify.directions[{i}]"), d, self.dim))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }
}
