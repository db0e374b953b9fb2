//! Projected subgradient method for the constrained sum-of-distances problem.
//!
//! Each iteration evaluates `D(x_k)`, takes the summed distance subgradient
//! `g_k`, and moves to `x_{k+1} = P(x_k - a_k g_k)` where `P` projects onto the
//! constraint. The method is not a descent method, so the result reports the best
//! iterate seen and the running minimum `V_k = min_{j <= k} D(x_j)`.
//!
//! Step schedules are restricted to families with divergent sum and convergent
//! sum of squares (`c/k` and `c/k^p` with `1/2 < p <= 1`); an explicit list is
//! accepted but flagged as unchecked.

use std::fmt;

use crate::error::{HeronError, Result};
use crate::geometry::{ConvexSet, MEMBERSHIP_TOL};
use crate::objective::Scenario;
use crate::vector::Vector;

/// Step-size rule `a_k`, indexed from `k = 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum StepSchedule {
    /// `a_k = c / k`
    Harmonic { c: f64 },
    /// `a_k = c / k^p`, `1/2 < p <= 1`
    Power { c: f64, p: f64 },
    /// Caller-supplied steps; the divergence conditions are not checked.
    Explicit(Vec<f64>),
}

impl StepSchedule {
    pub fn harmonic(c: f64) -> Result<Self> {
        let s = Self::Harmonic { c };
        s.validate()?;
        Ok(s)
    }

    pub fn power(c: f64, p: f64) -> Result<Self> {
        let s = Self::Power { c, p };
        s.validate()?;
        Ok(s)
    }

    pub fn explicit(steps: Vec<f64>) -> Result<Self> {
        let s = Self::Explicit(steps);
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |c: f64| c.is_finite() && c > 0.0;
        match self {
            Self::Harmonic { c } if !positive(*c) => Err(HeronError::InvalidSchedule(format!(
                "harmonic scale must be positive, got {c}"
            ))),
            Self::Power { c, .. } if !positive(*c) => Err(HeronError::InvalidSchedule(format!(
                "power scale must be positive, got {c}"
            ))),
            Self::Power { p, .. } if !(*p > 0.5 && *p <= 1.0) => Err(HeronError::InvalidSchedule(
                format!("power exponent must satisfy 0.5 < p <= 1, got {p}"),
            )),
            Self::Explicit(steps) if steps.is_empty() => Err(HeronError::InvalidSchedule(
                "explicit step list is empty".into(),
            )),
            Self::Explicit(steps) => match steps.iter().position(|a| !positive(*a)) {
                Some(i) => Err(HeronError::InvalidSchedule(format!(
                    "explicit step {} is not positive: {}",
                    i + 1,
                    steps[i]
                ))),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }

    /// Step for iteration `k >= 1`; `None` past the end of an explicit list.
    pub fn step(&self, k: u64) -> Option<f64> {
        debug_assert!(k >= 1);
        match self {
            Self::Harmonic { c } => Some(c / k as f64),
            Self::Power { c, p } => Some(c / (k as f64).powf(*p)),
            Self::Explicit(steps) => steps.get((k - 1) as usize).copied(),
        }
    }

    /// Whether the schedule is known to satisfy the convergence conditions.
    pub fn is_checked(&self) -> bool {
        !matches!(self, Self::Explicit(_))
    }

    /// Number of steps available, if finite.
    pub fn available_steps(&self) -> Option<u64> {
        match self {
            Self::Explicit(steps) => Some(steps.len() as u64),
            _ => None,
        }
    }
}

impl fmt::Display for StepSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Harmonic { c } => write!(f, "harmonic:{c}"),
            Self::Power { c, p } => write!(f, "power:{c},{p}"),
            Self::Explicit(steps) => write!(f, "explicit[{}]", steps.len()),
        }
    }
}

/// How iterates are mapped back onto the constraint after each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConstraintProjection {
    /// The metric projection of the constraint set.
    #[default]
    Metric,
    /// For a ball constraint, the radial map `c + r (y - c)/|y - c|` onto its
    /// bounding sphere, applied to interior points too; this is the update that
    /// reproduces the reference disk and ball runs. Other sets use the metric
    /// projection.
    Sphere,
}

impl ConstraintProjection {
    pub fn apply(self, set: &ConvexSet, y: &Vector) -> Result<Vector> {
        match (self, set) {
            (Self::Sphere, ConvexSet::Ball(b)) => {
                y.check_dim(set.dim())?;
                Ok(b.project_to_sphere(y))
            }
            _ => set.project(y),
        }
    }
}

/// Optional early stop: `V_k` has not dropped by more than `tol` for `window`
/// consecutive iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stagnation {
    pub window: u64,
    pub tol: f64,
}

impl Stagnation {
    pub fn new(window: u64) -> Self {
        Self { window, tol: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub schedule: StepSchedule,
    pub max_iters: u64,
    /// Rows are stored for `k = 1` and every `k` divisible by the stride.
    pub trace_stride: u64,
    /// `x_1`; projected onto the constraint first if infeasible.
    pub start: Vector,
    pub projection: ConstraintProjection,
    pub stagnation: Option<Stagnation>,
}

impl SolverConfig {
    pub fn new(schedule: StepSchedule, max_iters: u64, start: Vector) -> Self {
        Self {
            schedule,
            max_iters,
            trace_stride: 1,
            start,
            projection: ConstraintProjection::Metric,
            stagnation: None,
        }
    }

    pub fn with_stride(mut self, stride: u64) -> Self {
        self.trace_stride = stride;
        self
    }

    pub fn with_projection(mut self, projection: ConstraintProjection) -> Self {
        self.projection = projection;
        self
    }

    pub fn with_stagnation(mut self, stagnation: Stagnation) -> Self {
        self.stagnation = Some(stagnation);
        self
    }

    fn validate(&self, dim: usize) -> Result<()> {
        self.schedule.validate()?;
        self.start.check_dim(dim)?;
        if self.max_iters == 0 {
            return Err(HeronError::InvalidConfig(
                "max_iters must be positive".into(),
            ));
        }
        if self.trace_stride == 0 {
            return Err(HeronError::InvalidConfig(
                "trace_stride must be positive".into(),
            ));
        }
        if let Some(s) = &self.stagnation {
            if s.window == 0 || s.tol.is_nan() || s.tol < 0.0 {
                return Err(HeronError::InvalidConfig(
                    "stagnation window must be positive and tolerance nonnegative".into(),
                ));
            }
        }
        Ok(())
    }
}

/// One stored iteration: `x_k`, `D(x_k)` and the running minimum `V_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub k: u64,
    pub x: Vector,
    pub d_value: f64,
    pub v_best: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolverWarning {
    /// The supplied start was outside the constraint and was projected onto it.
    StartProjected { supplied: Vector, distance: f64 },
    /// An explicit step list was used; convergence is not guaranteed.
    UncheckedSchedule,
}

impl fmt::Display for SolverWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::StartProjected { supplied, distance } => write!(
                f,
                "start {supplied} is infeasible (distance {distance:e}); projected onto the constraint"
            ),
            Self::UncheckedSchedule => {
                write!(f, "explicit step list: convergence conditions are unchecked")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    /// Best iterate visited (earliest on ties).
    pub best_x: Vector,
    /// `D(best_x)`, equal to the final `V_k`.
    pub best_value: f64,
    /// Iteration index of `best_x`.
    pub best_k: u64,
    /// Number of iterates evaluated.
    pub iterations: u64,
    pub trace: Vec<TraceRow>,
    /// Iteration at which the stagnation rule fired, if it did.
    pub stopped_early: Option<u64>,
    pub warnings: Vec<SolverWarning>,
    /// `x_{iterations + 1}`, the iterate a continuation starts from.
    next_x: Vector,
    last_improvement: u64,
    config: SolverConfig,
    scenario: Scenario,
}

impl SolveResult {
    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn next_x(&self) -> &Vector {
        &self.next_x
    }

    /// Rows with the given iteration indices, in the order requested.
    pub fn rows_at(&self, ks: &[u64]) -> Vec<Option<&TraceRow>> {
        ks.iter()
            .map(|k| {
                self.trace
                    .binary_search_by_key(k, |r| r.k)
                    .ok()
                    .map(|i| &self.trace[i])
            })
            .collect()
    }
}

/// Runs the projected subgradient method for `cfg.max_iters` iterations.
pub fn solve(sc: &Scenario, cfg: &SolverConfig) -> Result<SolveResult> {
    cfg.validate(sc.dim())?;
    if let Some(n) = cfg.schedule.available_steps() {
        if n < cfg.max_iters {
            return Err(HeronError::InvalidSchedule(format!(
                "explicit list has {n} steps but {} iterations were requested",
                cfg.max_iters
            )));
        }
    }

    let mut warnings = Vec::new();
    if !cfg.schedule.is_checked() {
        warnings.push(SolverWarning::UncheckedSchedule);
    }
    let omega = sc.constraint();
    let distance = omega.distance(&cfg.start)?;
    let start = if distance > MEMBERSHIP_TOL {
        warnings.push(SolverWarning::StartProjected {
            supplied: cfg.start.clone(),
            distance,
        });
        omega.project(&cfg.start)?
    } else {
        cfg.start.clone()
    };

    let mut result = SolveResult {
        best_value: f64::INFINITY,
        best_x: start.clone(),
        best_k: 0,
        iterations: 0,
        trace: Vec::new(),
        stopped_early: None,
        warnings,
        next_x: start,
        last_improvement: 0,
        config: cfg.clone(),
        scenario: sc.clone(),
    };
    advance(&mut result, cfg.max_iters)?;
    Ok(result)
}

/// Continues a run for `extra_iters` more iterations using the schedule's global
/// index, so that `solve(n)` followed by `resume(m)` reproduces `solve(n + m)`
/// exactly. A run that already stopped on stagnation is returned unchanged.
pub fn resume(sc: &Scenario, result: &SolveResult, extra_iters: u64) -> Result<SolveResult> {
    if *sc != result.scenario {
        return Err(HeronError::ScenarioMismatch);
    }
    let mut next = result.clone();
    if extra_iters == 0 || result.stopped_early.is_some() {
        return Ok(next);
    }
    let total = result.iterations + extra_iters;
    if let Some(n) = result.config.schedule.available_steps() {
        if n < total {
            return Err(HeronError::InvalidSchedule(format!(
                "explicit list has {n} steps but {total} iterations were requested"
            )));
        }
    }
    next.config.max_iters = total;
    advance(&mut next, extra_iters)?;
    Ok(next)
}

fn advance(state: &mut SolveResult, count: u64) -> Result<()> {
    let sc = &state.scenario;
    let cfg = &state.config;
    let omega = sc.constraint();
    let first = state.iterations + 1;
    let last = state.iterations + count;
    let mut x = std::mem::replace(&mut state.next_x, Vector::zeros(sc.dim()));

    for k in first..=last {
        let (d, g) = sc.value_and_subgradient(&x);
        if d < state.best_value {
            if let Some(s) = &cfg.stagnation {
                if d < state.best_value - s.tol {
                    state.last_improvement = k;
                }
            }
            state.best_value = d;
            state.best_x = x.clone();
            state.best_k = k;
        }
        if k == 1 || k % cfg.trace_stride == 0 {
            state.trace.push(TraceRow {
                k,
                x: x.clone(),
                d_value: d,
                v_best: state.best_value,
            });
        }
        let alpha = cfg
            .schedule
            .step(k)
            .ok_or_else(|| HeronError::InvalidSchedule(format!("no step for iteration {k}")))?;
        x = cfg.projection.apply(omega, &x.add_scaled(-alpha, &g))?;
        state.iterations = k;

        if let Some(s) = &cfg.stagnation {
            if k - state.last_improvement >= s.window {
                state.stopped_early = Some(k);
                break;
            }
        }
    }
    state.next_x = x;
    Ok(())
}
