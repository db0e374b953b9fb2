//! Minimizing a sum of Euclidean distances to closed convex sets over a closed
//! convex constraint set.
//!
//! - [`geometry`]: singletons, balls, axis-aligned boxes, affine subspaces and
//!   halfspaces with exact projections, distances, normal cones and distance
//!   subgradients.
//! - [`objective`]: the problem instance [`Scenario`] and `D(x)`.
//! - [`solver`]: projected subgradient method with diminishing steps.
//! - [`certify`]: optimality certificates at candidate points.
//! - [`oracle`]: brute-force grid minimizer for validation.
//! - [`trace`]: CSV export of solver traces.
//!
//! ```
//! use heron_core::{vector, ConvexSet, Scenario, SolverConfig, StepSchedule, solve};
//!
//! // classical Heron: a point on the x-axis minimizing |MA| + |MB|
//! let sc = Scenario::new(
//!     ConvexSet::line(vector![0, 0], vector![1, 0]).unwrap(),
//!     vec![ConvexSet::singleton(vector![0, 1]), ConvexSet::singleton(vector![4, 3])],
//! ).unwrap();
//! let cfg = SolverConfig::new(StepSchedule::harmonic(1.0).unwrap(), 20_000, vector![0, 0]);
//! let r = solve(&sc, &cfg).unwrap();
//! assert!((r.best_value - 32f64.sqrt()).abs() < 1e-6);
//! ```

pub mod certify;
pub mod error;
pub mod geometry;
pub mod objective;
pub mod oracle;
pub mod solver;
pub mod trace;
mod vector;

pub use certify::{Certificate, TwoSetVerdict, Verdict};
pub use error::{HeronError, Result};
pub use geometry::ConvexSet;
pub use objective::{ObjectiveValue, Scenario};
pub use oracle::{grid_solve, OracleConfig, OracleResult};
pub use solver::{
    resume, solve, ConstraintProjection, SolveResult, SolverConfig, SolverWarning, Stagnation,
    StepSchedule, TraceRow,
};
pub use vector::Vector;
