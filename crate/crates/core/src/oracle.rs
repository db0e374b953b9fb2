//! Brute-force grid minimizer used as an independent check on the solver and
//! the certificates.
//!
//! Grid points of a bounding box are projected onto the constraint (so every
//! candidate is feasible) and `D` is evaluated there. Because `D` is
//! `n`-Lipschitz and projection is nonexpansive, the incumbent is within
//! `n * h * sqrt(s)` of the minimum over the box, `h` being the grid spacing.
//! Refinement rounds re-grid a box four times smaller around the incumbent.

use rayon::prelude::*;

use crate::error::{HeronError, Result};
use crate::objective::Scenario;
use crate::vector::Vector;

/// Cap on the total number of objective evaluations over all rounds.
pub const MAX_EVALUATIONS: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    /// At least 8.
    pub grid_points_per_axis: usize,
    pub refinement_rounds: usize,
    /// `(lower, upper)` corners overriding the derived box.
    pub bounding_box: Option<(Vector, Vector)>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            grid_points_per_axis: 201,
            refinement_rounds: 4,
            bounding_box: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub point: Vector,
    pub value: f64,
    /// `n * h * sqrt(s)`. After refinement this assumes the minimizer lies in
    /// the final box.
    pub error_bound: f64,
    /// Largest per-axis grid spacing of the final round.
    pub spacing: f64,
    pub evaluations: u64,
    /// The initial search box.
    pub bounding_box: (Vector, Vector),
}

/// Smallest box around a bounded constraint; otherwise the box around all
/// bounded targets, inflated far enough to be sure to contain a minimizer.
///
/// The inflation radius is `D(q) / m` for the feasible point `q` nearest the
/// targets' box center and `m` bounded targets: a minimizer `x*` has
/// `m * d(x*, box) <= D(x*) <= D(q)`.
pub fn default_bounding_box(sc: &Scenario) -> Result<(Vector, Vector)> {
    if let Some(b) = sc.constraint().bounding_box() {
        return Ok(b);
    }
    let boxes: Vec<(Vector, Vector)> = sc
        .targets()
        .iter()
        .filter_map(|t| t.bounding_box())
        .collect();
    let Some((first, rest)) = boxes.split_first() else {
        return Err(HeronError::NoBoundingBox);
    };
    let (mut lo, mut hi) = (first.0.as_slice().to_vec(), first.1.as_slice().to_vec());
    for (l, h) in rest {
        for j in 0..lo.len() {
            lo[j] = lo[j].min(l[j]);
            hi[j] = hi[j].max(h[j]);
        }
    }
    let center = Vector::new(lo.iter().zip(&hi).map(|(l, h)| 0.5 * (l + h)).collect())?;
    let q = sc.constraint().project(&center)?;
    let reach = sc.evaluate(&q)?.value() / boxes.len() as f64;
    Ok((
        Vector::new(lo.iter().map(|l| l - reach).collect())?,
        Vector::new(hi.iter().map(|h| h + reach).collect())?,
    ))
}

struct Grid {
    lower: Vec<f64>,
    step: Vec<f64>,
    counts: Vec<usize>,
}

impl Grid {
    fn new(lower: &[f64], upper: &[f64], points: usize) -> Self {
        let mut step = Vec::with_capacity(lower.len());
        let mut counts = Vec::with_capacity(lower.len());
        for (l, u) in lower.iter().zip(upper) {
            let width = u - l;
            if width > 0.0 {
                counts.push(points);
                step.push(width / (points - 1) as f64);
            } else {
                counts.push(1);
                step.push(0.0);
            }
        }
        Self {
            lower: lower.to_vec(),
            step,
            counts,
        }
    }

    fn len(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).product()
    }

    fn spacing(&self) -> f64 {
        self.step.iter().copied().fold(0.0, f64::max)
    }

    /// Mixed-radix decoding, last axis fastest, so index order is lexicographic.
    fn point(&self, mut index: u64) -> Vector {
        let dim = self.counts.len();
        let mut coords = vec![0.0; dim];
        for j in (0..dim).rev() {
            let c = self.counts[j] as u64;
            let i = index % c;
            index /= c;
            coords[j] = self.lower[j] + i as f64 * self.step[j];
        }
        Vector::from_raw(coords)
    }
}

fn validate(cfg: &OracleConfig, dim: usize) -> Result<()> {
    if cfg.grid_points_per_axis < 8 {
        return Err(HeronError::InvalidConfig(format!(
            "grid_points_per_axis must be at least 8, got {}",
            cfg.grid_points_per_axis
        )));
    }
    if let Some((lo, hi)) = &cfg.bounding_box {
        lo.check_dim(dim)?;
        hi.check_dim(dim)?;
        if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
            return Err(HeronError::InvalidConfig(
                "bounding box lower corner exceeds upper corner".into(),
            ));
        }
    }
    Ok(())
}

/// Grid search for the minimum of `D` over the constraint.
pub fn grid_solve(sc: &Scenario, cfg: &OracleConfig) -> Result<OracleResult> {
    let dim = sc.dim();
    validate(cfg, dim)?;
    let bbox = match &cfg.bounding_box {
        Some(b) => b.clone(),
        None => default_bounding_box(sc)?,
    };

    let per_round = Grid::new(
        bbox.0.as_slice(),
        bbox.1.as_slice(),
        cfg.grid_points_per_axis,
    )
    .len();
    let requested = per_round * (cfg.refinement_rounds as u128 + 1);
    if requested > MAX_EVALUATIONS {
        return Err(HeronError::BudgetExceeded {
            requested,
            cap: MAX_EVALUATIONS,
        });
    }

    let omega = sc.constraint();
    let mut lower = bbox.0.as_slice().to_vec();
    let mut upper = bbox.1.as_slice().to_vec();
    let mut best: Option<(f64, Vector)> = None;
    let mut evaluations = 0u64;
    let mut spacing = 0.0;

    for round in 0..=cfg.refinement_rounds {
        let grid = Grid::new(&lower, &upper, cfg.grid_points_per_axis);
        spacing = grid.spacing();
        let n = grid.len() as u64;
        evaluations += n;
        let (value, index) = (0..n)
            .into_par_iter()
            .map(|i| {
                let x = omega.project_unchecked(&grid.point(i));
                (sc.value_unchecked(&x), i)
            })
            .reduce(
                || (f64::INFINITY, u64::MAX),
                |a, b| if (b.0, b.1) < (a.0, a.1) { b } else { a },
            );
        let candidate = omega.project_unchecked(&grid.point(index));
        match &best {
            Some((v, _)) if *v <= value => {}
            _ => best = Some((value, candidate)),
        }

        if round < cfg.refinement_rounds {
            let center = &best.as_ref().expect("incumbent after first round").1;
            for j in 0..dim {
                let half = (upper[j] - lower[j]) / 8.0;
                lower[j] = center[j] - half;
                upper[j] = center[j] + half;
            }
        }
    }

    let (value, point) = best.expect("at least one round");
    Ok(OracleResult {
        point,
        value,
        error_bound: sc.targets().len() as f64 * spacing * (dim as f64).sqrt(),
        spacing,
        evaluations,
        bounding_box: bbox,
    })
}
