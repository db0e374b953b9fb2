//! Problem instances and the sum-of-distances objective `D(x) = sum_i d(x; target_i)`.

use crate::error::{HeronError, Result};
use crate::geometry::ConvexSet;
use crate::vector::Vector;

/// A constrained sum-of-distances problem: minimize `D(x)` over `x` in `constraint`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    dim: usize,
    constraint: ConvexSet,
    targets: Vec<ConvexSet>,
}

/// Value of the objective at a point; always nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ObjectiveValue(f64);

impl ObjectiveValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<ObjectiveValue> for f64 {
    fn from(v: ObjectiveValue) -> f64 {
        v.0
    }
}

impl Scenario {
    pub fn new(constraint: ConvexSet, targets: Vec<ConvexSet>) -> Result<Self> {
        if targets.is_empty() {
            return Err(HeronError::InvalidScenario(
                "at least one target set is required".into(),
            ));
        }
        let dim = constraint.dim();
        for (i, t) in targets.iter().enumerate() {
            if t.dim() != dim {
                return Err(HeronError::InvalidScenario(format!(
                    "target {i} has dimension {}, constraint has dimension {dim}",
                    t.dim()
                )));
            }
        }
        Ok(Self {
            dim,
            constraint,
            targets,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraint(&self) -> &ConvexSet {
        &self.constraint
    }

    pub fn targets(&self) -> &[ConvexSet] {
        &self.targets
    }

    /// Sum of the distances from `x` to every target.
    pub fn evaluate(&self, x: &Vector) -> Result<ObjectiveValue> {
        x.check_dim(self.dim)?;
        Ok(ObjectiveValue(self.value_unchecked(x)))
    }

    pub(crate) fn value_unchecked(&self, x: &Vector) -> f64 {
        let mut total = 0.0;
        for t in &self.targets {
            total += x.distance_to(&t.project_unchecked(x));
        }
        total
    }

    /// The subgradient of `D` at `x` obtained by summing each target's distance
    /// subgradient selection. Its norm is at most the number of targets.
    pub fn subgradient(&self, x: &Vector) -> Result<Vector> {
        x.check_dim(self.dim)?;
        Ok(self.value_and_subgradient(x).1)
    }

    /// `D(x)` and the summed subgradient from a single projection per target.
    /// Bit-identical to calling [`evaluate`](Self::evaluate) and
    /// [`subgradient`](Self::subgradient) separately.
    pub(crate) fn value_and_subgradient(&self, x: &Vector) -> (f64, Vector) {
        let mut total = 0.0;
        let mut g = Vector::zeros(self.dim);
        for t in &self.targets {
            let (d, v) = t.distance_and_subgradient(x);
            total += d;
            g.add_assign(&v);
        }
        (total, g)
    }

    /// Sufficient condition for a minimizer to exist: the constraint or at least
    /// one target is bounded. `false` is a warning only.
    pub fn check_existence(&self) -> bool {
        self.constraint.is_bounded() || self.targets.iter().any(ConvexSet::is_bounded)
    }

    /// Deterministic default start: the projection onto the constraint of the
    /// centroid of the target anchors (points, centers, bases).
    pub fn default_start(&self) -> Vector {
        let mut sum = Vector::zeros(self.dim);
        for t in &self.targets {
            sum.add_assign(&t.anchor());
        }
        let centroid = sum.div(self.targets.len() as f64);
        self.constraint.project_unchecked(&centroid)
    }
}
