//! Exact Euclidean geometry of the supported closed convex sets.
//!
//! Every set here is nonempty, closed and convex by construction, so the metric
//! projection is unique and the distance function is convex and 1-Lipschitz.
//! The operations are:
//!
//! - [`ConvexSet::distance`] and [`ConvexSet::project`], the nearest-point map;
//! - [`ConvexSet::normal_cone_project`], projection of a vector onto the normal
//!   cone `N(x; set)` at a member `x`;
//! - [`ConvexSet::distance_subgradient`], the selection `(x - P(x)) / d(x)` off the
//!   set and `0` on it;
//! - membership and boundedness queries.

use crate::error::{HeronError, Result};
use crate::vector::Vector;

/// Absolute membership tolerance used for normal-cone preconditions.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// A point within this distance of a face is treated as lying on it.
pub const BOUNDARY_TOL: f64 = 1e-9;
/// Spanning vectors whose Gram-Schmidt residual falls below this norm are dropped.
pub const DEPENDENT_TOL: f64 = 1e-10;
const ORTHONORMAL_TOL: f64 = 1e-12;

/// Closed Euclidean ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    center: Vector,
    radius: f64,
}

impl Ball {
    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Radial map onto the bounding sphere: `c + r (x - c) / |x - c|`.
    ///
    /// Unlike [`ConvexSet::project`] this also moves interior points out to the
    /// sphere. The center itself has no radial direction and is returned as is.
    pub fn project_to_sphere(&self, x: &Vector) -> Vector {
        let w = x.sub(&self.center);
        let n = w.norm();
        if n == 0.0 {
            return x.clone();
        }
        Vector::from_raw(
            self.center
                .iter()
                .zip(w.iter())
                .map(|(c, wj)| c + self.radius * wj / n)
                .collect(),
        )
    }
}

/// Axis-aligned box `[c - h, c + h]` with per-axis half-widths.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisBox {
    center: Vector,
    half_widths: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl AxisBox {
    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn half_widths(&self) -> &[f64] {
        &self.half_widths
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }
}

/// Affine subspace `base + span(directions)` with an orthonormal direction list.
///
/// An empty direction list is the single point `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine {
    base: Vector,
    directions: Vec<Vector>,
}

impl Affine {
    pub fn base(&self) -> &Vector {
        &self.base
    }

    /// Orthonormal basis of the direction subspace.
    pub fn directions(&self) -> &[Vector] {
        &self.directions
    }

    /// Component of `v` orthogonal to the direction subspace.
    pub fn orthogonal_component(&self, v: &Vector) -> Vector {
        let mut r = v.clone();
        for d in &self.directions {
            r = r.add_scaled(-v.dot(d), d);
        }
        r
    }
}

/// Closed halfspace `{x : <normal, x> <= offset}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    normal: Vector,
    offset: f64,
}

impl Halfspace {
    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    fn unit_normal(&self) -> Vector {
        self.normal.div(self.normal.norm())
    }
}

/// The supported family of nonempty closed convex sets.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexSet {
    Singleton(Vector),
    Ball(Ball),
    Box(AxisBox),
    Affine(Affine),
    Halfspace(Halfspace),
}

impl ConvexSet {
    pub fn singleton(point: Vector) -> Self {
        Self::Singleton(point)
    }

    pub fn ball(center: Vector, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(HeronError::InvalidSet(format!(
                "ball radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Self::Ball(Ball { center, radius }))
    }

    pub fn axis_box(center: Vector, half_widths: Vec<f64>) -> Result<Self> {
        if half_widths.len() != center.dim() {
            return Err(HeronError::DimensionMismatch {
                expected: center.dim(),
                found: half_widths.len(),
            });
        }
        if let Some(h) = half_widths.iter().find(|h| !(h.is_finite() && **h > 0.0)) {
            return Err(HeronError::InvalidSet(format!(
                "box half-widths must be positive and finite, got {h}"
            )));
        }
        let lower = center
            .iter()
            .zip(&half_widths)
            .map(|(c, h)| c - h)
            .collect();
        let upper = center
            .iter()
            .zip(&half_widths)
            .map(|(c, h)| c + h)
            .collect();
        Ok(Self::Box(AxisBox {
            center,
            half_widths,
            lower,
            upper,
        }))
    }

    /// Box with the same half-width on every axis (a square or cube).
    pub fn cube(center: Vector, half_width: f64) -> Result<Self> {
        let hw = vec![half_width; center.dim()];
        Self::axis_box(center, hw)
    }

    /// Affine subspace through `base` spanned by `spanning`, which need not be
    /// independent or normalized. The spanning list is orthonormalized with
    /// re-orthogonalized Gram-Schmidt; dependent vectors are dropped.
    pub fn affine(base: Vector, spanning: Vec<Vector>) -> Result<Self> {
        let dim = base.dim();
        let mut directions: Vec<Vector> = Vec::with_capacity(spanning.len());
        for v in spanning {
            v.check_dim(dim)?;
            let mut w = v;
            for _ in 0..2 {
                for q in &directions {
                    w = w.add_scaled(-w.dot(q), q);
                }
            }
            let n = w.norm();
            if n < DEPENDENT_TOL {
                continue;
            }
            directions.push(w.div(n));
        }
        for (i, a) in directions.iter().enumerate() {
            for (j, b) in directions.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                if (a.dot(b) - target).abs() > ORTHONORMAL_TOL {
                    return Err(HeronError::InvalidSet(
                        "affine directions could not be orthonormalized".into(),
                    ));
                }
            }
        }
        Ok(Self::Affine(Affine { base, directions }))
    }

    /// The line through `point` along `direction`.
    pub fn line(point: Vector, direction: Vector) -> Result<Self> {
        if direction.norm() < DEPENDENT_TOL {
            return Err(HeronError::InvalidSet("line direction is zero".into()));
        }
        Self::affine(point, vec![direction])
    }

    pub fn halfspace(normal: Vector, offset: f64) -> Result<Self> {
        if normal.norm() == 0.0 {
            return Err(HeronError::InvalidSet("halfspace normal is zero".into()));
        }
        if !offset.is_finite() {
            return Err(HeronError::InvalidSet(
                "halfspace offset is not finite".into(),
            ));
        }
        Ok(Self::Halfspace(Halfspace { normal, offset }))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Singleton(_) => "singleton",
            Self::Ball(_) => "ball",
            Self::Box(_) => "box",
            Self::Affine(_) => "affine",
            Self::Halfspace(_) => "halfspace",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Singleton(p) => p.dim(),
            Self::Ball(b) => b.center.dim(),
            Self::Box(b) => b.center.dim(),
            Self::Affine(a) => a.base.dim(),
            Self::Halfspace(h) => h.normal.dim(),
        }
    }

    /// A fixed point associated with the set: the point, center or base, or for a
    /// halfspace the point of its bounding hyperplane nearest the origin.
    pub fn anchor(&self) -> Vector {
        match self {
            Self::Singleton(p) => p.clone(),
            Self::Ball(b) => b.center.clone(),
            Self::Box(b) => b.center.clone(),
            Self::Affine(a) => a.base.clone(),
            Self::Halfspace(h) => h.normal.scale(h.offset / h.normal.norm_squared()),
        }
    }

    /// Metric projection: the unique nearest point of the set. Identity on members.
    pub fn project(&self, x: &Vector) -> Result<Vector> {
        x.check_dim(self.dim())?;
        Ok(self.project_unchecked(x))
    }

    pub(crate) fn project_unchecked(&self, x: &Vector) -> Vector {
        match self {
            Self::Singleton(p) => p.clone(),
            Self::Ball(b) => {
                let w = x.sub(&b.center);
                let n = w.norm();
                if n <= b.radius {
                    x.clone()
                } else {
                    Vector::from_raw(
                        b.center
                            .iter()
                            .zip(w.iter())
                            .map(|(c, wj)| c + b.radius * wj / n)
                            .collect(),
                    )
                }
            }
            Self::Box(b) => Vector::from_raw(
                x.iter()
                    .zip(b.lower.iter().zip(&b.upper))
                    .map(|(xj, (lo, hi))| xj.clamp(*lo, *hi))
                    .collect(),
            ),
            Self::Affine(a) => {
                let rel = x.sub(&a.base);
                let mut p = a.base.clone();
                for d in &a.directions {
                    p = p.add_scaled(rel.dot(d), d);
                }
                p
            }
            Self::Halfspace(h) => {
                let excess = h.normal.dot(x) - h.offset;
                if excess <= 0.0 {
                    x.clone()
                } else {
                    x.add_scaled(-excess / h.normal.norm_squared(), &h.normal)
                }
            }
        }
    }

    /// Euclidean distance from `x` to the set, computed as `|x - project(x)|`.
    pub fn distance(&self, x: &Vector) -> Result<f64> {
        x.check_dim(self.dim())?;
        Ok(x.distance_to(&self.project_unchecked(x)))
    }

    /// Distance together with the subgradient selection; one projection serves both.
    pub(crate) fn distance_and_subgradient(&self, x: &Vector) -> (f64, Vector) {
        let p = self.project_unchecked(x);
        let d = x.distance_to(&p);
        if d > 0.0 {
            (d, x.sub(&p).div(d))
        } else {
            (0.0, Vector::zeros(x.dim()))
        }
    }

    /// A subgradient of `d(.; set)` at `x`: the unit vector `(x - P(x)) / d(x)` when
    /// `x` is outside the set, and `0` when it is a member.
    pub fn distance_subgradient(&self, x: &Vector) -> Result<Vector> {
        x.check_dim(self.dim())?;
        Ok(self.distance_and_subgradient(x).1)
    }

    pub fn is_member(&self, x: &Vector, tol: f64) -> Result<bool> {
        Ok(self.distance(x)? <= tol)
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            Self::Singleton(_) | Self::Ball(_) | Self::Box(_) => true,
            Self::Affine(a) => a.directions.is_empty(),
            Self::Halfspace(_) => false,
        }
    }

    /// Smallest axis-aligned box `(lower, upper)` containing the set, if bounded.
    pub fn bounding_box(&self) -> Option<(Vector, Vector)> {
        match self {
            Self::Singleton(p) => Some((p.clone(), p.clone())),
            Self::Ball(b) => {
                let r = vec![b.radius; b.center.dim()];
                let r = Vector::from_raw(r);
                Some((b.center.sub(&r), b.center.add(&r)))
            }
            Self::Box(b) => Some((
                Vector::from_raw(b.lower.clone()),
                Vector::from_raw(b.upper.clone()),
            )),
            Self::Affine(a) if a.directions.is_empty() => Some((a.base.clone(), a.base.clone())),
            Self::Affine(_) | Self::Halfspace(_) => None,
        }
    }

    /// Projection of `v` onto the normal cone `N(xbar; set)` using the default
    /// membership and boundary tolerances.
    pub fn normal_cone_project(&self, xbar: &Vector, v: &Vector) -> Result<Vector> {
        self.normal_cone_project_with_tol(xbar, v, MEMBERSHIP_TOL, BOUNDARY_TOL)
    }

    /// As [`normal_cone_project`](Self::normal_cone_project) with explicit tolerances.
    /// Points within `boundary_tol` of a face are treated as on it, which can only
    /// enlarge the cone.
    pub fn normal_cone_project_with_tol(
        &self,
        xbar: &Vector,
        v: &Vector,
        member_tol: f64,
        boundary_tol: f64,
    ) -> Result<Vector> {
        let dim = self.dim();
        xbar.check_dim(dim)?;
        v.check_dim(dim)?;
        let distance = self.distance(xbar)?;
        if distance > member_tol {
            return Err(HeronError::NotInSet {
                distance,
                tol: member_tol,
            });
        }
        Ok(match self {
            Self::Singleton(_) => v.clone(),
            Self::Ball(b) => {
                let w = xbar.sub(&b.center);
                let n = w.norm();
                if n < b.radius - boundary_tol {
                    Vector::zeros(dim)
                } else {
                    let u = w.div(n);
                    u.scale(v.dot(&u).max(0.0))
                }
            }
            Self::Box(b) => Vector::from_raw(
                (0..dim)
                    .map(|j| {
                        let at_lower = xbar[j] <= b.lower[j] + boundary_tol;
                        let at_upper = xbar[j] >= b.upper[j] - boundary_tol;
                        match (at_lower, at_upper) {
                            (true, true) => v[j],
                            (true, false) => v[j].min(0.0),
                            (false, true) => v[j].max(0.0),
                            (false, false) => 0.0,
                        }
                    })
                    .collect(),
            ),
            Self::Affine(a) => a.orthogonal_component(v),
            Self::Halfspace(h) => {
                let n = h.unit_normal();
                let gap = (h.offset - h.normal.dot(xbar)) / h.normal.norm();
                if gap > boundary_tol {
                    Vector::zeros(dim)
                } else {
                    n.scale(v.dot(&n).max(0.0))
                }
            }
        })
    }
}
