//! Optimality certificates for candidate points.
//!
//! When a feasible `xbar` lies outside every target, the unit vectors
//! `a_i = (xbar - P_i(xbar)) / d(xbar; target_i)` are well defined and `xbar` is a
//! global minimizer exactly when `-sum_i a_i` lies in the normal cone of the
//! constraint at `xbar`. The certificate reports the distance from `-sum_i a_i`
//! to that cone; it is zero at an optimum.
//!
//! Two derived tests are also provided: cosine sums `sum_i cos(a_i, u)` along
//! directions `u` spanning the tangent space (all zero at an optimum when the
//! normal cone is the orthogonal complement of that space), and the two-target
//! check for constraints whose normal cone is a line `span{a}`.

use std::fmt;

use crate::error::{HeronError, Result};
use crate::geometry::{ConvexSet, BOUNDARY_TOL, DEPENDENT_TOL, MEMBERSHIP_TOL};
use crate::objective::Scenario;
use crate::vector::Vector;

/// Default tolerance on the stationarity residual.
pub const CERTIFICATE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    CertifiedOptimal { tol: f64 },
    NotStationary { residual: f64 },
    Inapplicable { reason: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Self::CertifiedOptimal { .. } => "certified_optimal",
            Self::NotStationary { .. } => "not_stationary",
            Self::Inapplicable { .. } => "inapplicable",
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, Self::CertifiedOptimal { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::CertifiedOptimal { tol } => write!(f, "certified_optimal (tol {tol:e})"),
            Self::NotStationary { residual } => write!(f, "not_stationary (residual {residual:e})"),
            Self::Inapplicable { reason } => write!(f, "inapplicable ({reason})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub point: Vector,
    /// `a_i(xbar)`, one per target; empty when inapplicable.
    pub unit_vectors: Vec<Vector>,
    /// Distance from `-sum a_i` to the normal cone; `None` when inapplicable.
    pub residual: Option<f64>,
    pub cosine_sums: Option<Vec<(Vector, f64)>>,
    pub verdict: Verdict,
}

/// The unit vectors `a_i(xbar)`. Fails if `xbar` lies in some target (within the
/// membership tolerance), where `a_i` is undefined.
pub fn unit_vectors(sc: &Scenario, xbar: &Vector) -> Result<Vec<Vector>> {
    xbar.check_dim(sc.dim())?;
    sc.targets()
        .iter()
        .enumerate()
        .map(|(index, t)| {
            let p = t.project(xbar)?;
            let distance = xbar.distance_to(&p);
            if distance <= MEMBERSHIP_TOL {
                return Err(HeronError::InsideTarget { index, distance });
            }
            Ok(xbar.sub(&p).div(distance))
        })
        .collect()
}

fn require_feasible(sc: &Scenario, xbar: &Vector) -> Result<()> {
    xbar.check_dim(sc.dim())?;
    let distance = sc.constraint().distance(xbar)?;
    if distance > MEMBERSHIP_TOL {
        return Err(HeronError::NotInSet {
            distance,
            tol: MEMBERSHIP_TOL,
        });
    }
    Ok(())
}

/// Builds the stationarity certificate at `xbar`.
///
/// Errors if `xbar` is infeasible. If `xbar` lies in a target the certificate is
/// returned with an `Inapplicable` verdict.
pub fn stationarity_residual(sc: &Scenario, xbar: &Vector, tol: f64) -> Result<Certificate> {
    require_feasible(sc, xbar)?;
    let a = match unit_vectors(sc, xbar) {
        Ok(a) => a,
        Err(HeronError::InsideTarget { index, distance }) => {
            return Ok(Certificate {
                point: xbar.clone(),
                unit_vectors: Vec::new(),
                residual: None,
                cosine_sums: None,
                verdict: Verdict::Inapplicable {
                    reason: format!("point lies in target {index} (distance {distance:e})"),
                },
            })
        }
        Err(e) => return Err(e),
    };
    let mut sum = Vector::zeros(sc.dim());
    for ai in &a {
        sum = sum.add(ai);
    }
    let g = sum.scale(-1.0);
    let in_cone = sc.constraint().normal_cone_project(xbar, &g)?;
    let residual = g.distance_to(&in_cone);
    let verdict = if residual <= tol {
        Verdict::CertifiedOptimal { tol }
    } else {
        Verdict::NotStationary { residual }
    };
    Ok(Certificate {
        point: xbar.clone(),
        unit_vectors: a,
        residual: Some(residual),
        cosine_sums: None,
        verdict,
    })
}

/// `sum_i cos(a_i(xbar), u_j)` for every direction `u_j`.
pub fn cosine_sums(sc: &Scenario, xbar: &Vector, dirs: &[Vector]) -> Result<Vec<f64>> {
    require_feasible(sc, xbar)?;
    for (index, u) in dirs.iter().enumerate() {
        u.check_dim(sc.dim())?;
        if u.norm() == 0.0 {
            return Err(HeronError::ZeroDirection { index });
        }
    }
    let a = unit_vectors(sc, xbar)?;
    Ok(dirs
        .iter()
        .map(|u| a.iter().map(|ai| ai.cosine(u)).sum())
        .collect())
}

impl Certificate {
    /// Attaches cosine sums along `dirs` to an applicable certificate.
    pub fn with_cosine_sums(mut self, sc: &Scenario, dirs: &[Vector]) -> Result<Self> {
        if self.residual.is_some() {
            let sums = cosine_sums(sc, &self.point, dirs)?;
            self.cosine_sums = Some(dirs.iter().cloned().zip(sums).collect());
        }
        Ok(self)
    }
}

/// Orthonormal basis of the orthogonal complement of `span(normals)` in `R^dim`.
fn complement_basis(normals: &[Vector], dim: usize) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    let mut kept = 0;
    let candidates = normals
        .iter()
        .cloned()
        .map(|v| (true, v))
        .chain((0..dim).map(|j| (false, Vector::unit(dim, j))));
    for (is_normal, v) in candidates {
        let mut w = v;
        for _ in 0..2 {
            for q in &basis {
                w = w.add_scaled(-w.dot(q), q);
            }
        }
        let n = w.norm();
        if n < DEPENDENT_TOL {
            continue;
        }
        basis.push(w.div(n));
        if is_normal {
            kept += 1;
        }
    }
    basis.split_off(kept)
}

/// Orthonormal basis of the subspace orthogonal to the normal cone of `set` at
/// `xbar`. For an affine set this is its direction space; at a smooth boundary
/// point of a ball or halfspace it is the tangent hyperplane; at interior points
/// it is all of `R^s`.
pub fn tangent_basis(set: &ConvexSet, xbar: &Vector) -> Result<Vec<Vector>> {
    let dim = set.dim();
    // normal_cone_project validates membership and dimension
    let mut normals = Vec::new();
    for j in 0..dim {
        for sign in [1.0, -1.0] {
            let probe = Vector::unit(dim, j).scale(sign);
            let n = set.normal_cone_project(xbar, &probe)?;
            if n.norm() > DEPENDENT_TOL {
                normals.push(n);
            }
        }
    }
    Ok(match set {
        ConvexSet::Affine(a) => a.directions().to_vec(),
        ConvexSet::Singleton(_) => Vec::new(),
        _ => complement_basis(&normals, dim),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum TwoSetVerdict {
    Inapplicable(String),
    Checked {
        /// `a_1 + a_2 = 0`
        opposite: bool,
        cos_first: f64,
        cos_second: f64,
        necessary_holds: bool,
        /// Only decided in the plane; `None` for `s != 2`.
        sufficient_holds: Option<bool>,
    },
}

impl TwoSetVerdict {
    pub fn necessary_holds(&self) -> bool {
        matches!(
            self,
            Self::Checked {
                necessary_holds: true,
                ..
            }
        )
    }

    pub fn sufficient_holds(&self) -> Option<bool> {
        match self {
            Self::Checked {
                sufficient_holds, ..
            } => *sufficient_holds,
            Self::Inapplicable(_) => None,
        }
    }
}

/// Whether the normal cone of `set` at `xbar` is exactly `span{a}`, as far as
/// the library can verify.
fn normal_cone_is_line(set: &ConvexSet, a: &Vector, tol: f64) -> std::result::Result<(), String> {
    match set {
        ConvexSet::Affine(aff) if aff.directions().len() + 1 == set.dim() => {
            let off = a.sub(&aff.orthogonal_component(a)).norm();
            if off <= tol * a.norm() {
                Ok(())
            } else {
                Err("the vector is not orthogonal to the affine constraint".into())
            }
        }
        ConvexSet::Affine(_) => Err("the affine constraint does not have codimension one".into()),
        ConvexSet::Singleton(_) if set.dim() == 1 => Ok(()),
        _ => Err(format!(
            "the normal cone of a {} constraint is not a line span",
            set.kind()
        )),
    }
}

/// Two-target optimality test for constraints whose normal cone at `xbar` is
/// `span{a}`: necessary condition `a_1 + a_2 = 0` or `cos(a_1, a) = cos(a_2, a)`;
/// in the plane the same condition with `a_1 != a_2` is also sufficient.
pub fn two_set_check(sc: &Scenario, xbar: &Vector, a: &Vector, tol: f64) -> Result<TwoSetVerdict> {
    if sc.targets().len() != 2 {
        return Err(HeronError::Precondition(format!(
            "two-set check needs exactly 2 targets, scenario has {}",
            sc.targets().len()
        )));
    }
    a.check_dim(sc.dim())?;
    if a.norm() == 0.0 {
        return Err(HeronError::ZeroDirection { index: 0 });
    }
    require_feasible(sc, xbar)?;
    if let Err(reason) = normal_cone_is_line(sc.constraint(), a, BOUNDARY_TOL.max(tol)) {
        return Ok(TwoSetVerdict::Inapplicable(reason));
    }
    let units = match unit_vectors(sc, xbar) {
        Ok(u) => u,
        Err(HeronError::InsideTarget { index, .. }) => {
            return Ok(TwoSetVerdict::Inapplicable(format!(
                "point lies in target {index}"
            )))
        }
        Err(e) => return Err(e),
    };
    let (a1, a2) = (&units[0], &units[1]);
    let opposite = a1.add(a2).norm() <= tol;
    let cos_first = a1.cosine(a);
    let cos_second = a2.cosine(a);
    let equal_cos = (cos_first - cos_second).abs() <= tol;
    let necessary_holds = opposite || equal_cos;
    let sufficient_holds =
        (sc.dim() == 2).then(|| opposite || (a1.distance_to(a2) > tol && equal_cos));
    Ok(TwoSetVerdict::Checked {
        opposite,
        cos_first,
        cos_second,
        necessary_holds,
        sufficient_holds,
    })
}
