//! Test-only oracles and random generators shared by the integration suites.
//! Nothing here calls into the code paths it is used to check.
#![allow(dead_code)]

use heron_core::geometry::ConvexSet;
use heron_core::{vector, Scenario, Vector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(rng: &mut TestRng, dim: usize, scale: f64) -> Vector {
    Vector::new((0..dim).map(|_| rng.gen_range(-scale..scale)).collect()).unwrap()
}

pub fn random_unit(rng: &mut TestRng, dim: usize) -> Vector {
    loop {
        let v = random_vector(rng, dim, 1.0);
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v.div(n);
        }
    }
}

pub const KINDS: [&str; 5] = ["singleton", "ball", "box", "affine", "halfspace"];

pub fn random_set(rng: &mut TestRng, kind: &str, dim: usize) -> ConvexSet {
    let c = random_vector(rng, dim, 5.0);
    match kind {
        "singleton" => ConvexSet::singleton(c),
        "ball" => ConvexSet::ball(c, rng.gen_range(0.2..3.0)).unwrap(),
        "box" => {
            ConvexSet::axis_box(c, (0..dim).map(|_| rng.gen_range(0.2..3.0)).collect()).unwrap()
        }
        "affine" => {
            let k = rng.gen_range(0..dim);
            let dirs = (0..k).map(|_| random_vector(rng, dim, 1.0)).collect();
            ConvexSet::affine(c, dirs).unwrap()
        }
        "halfspace" => {
            ConvexSet::halfspace(random_vector(rng, dim, 2.0), rng.gen_range(-3.0..3.0)).unwrap()
        }
        _ => unreachable!(),
    }
}

/// A point of the set, built from the set's parameters rather than a projection.
pub fn sample_member(rng: &mut TestRng, set: &ConvexSet) -> Vector {
    let dim = set.dim();
    match set {
        ConvexSet::Singleton(p) => p.clone(),
        ConvexSet::Ball(b) => {
            let u = random_unit(rng, dim);
            let t: f64 = rng.gen_range(0.0..=1.0);
            b.center().add_scaled(b.radius() * t, &u)
        }
        ConvexSet::Box(b) => Vector::new(
            b.lower()
                .iter()
                .zip(b.upper())
                .map(|(l, h)| rng.gen_range(*l..=*h))
                .collect(),
        )
        .unwrap(),
        ConvexSet::Affine(a) => {
            let mut p = a.base().clone();
            for d in a.directions() {
                p = p.add_scaled(rng.gen_range(-5.0..5.0), d);
            }
            p
        }
        ConvexSet::Halfspace(h) => {
            // move any point far enough along -normal
            let x = random_vector(rng, dim, 5.0);
            let n = h.normal();
            let excess = n.dot(&x) - h.offset();
            let slack = rng.gen_range(0.0..2.0);
            x.add_scaled(-(excess.max(0.0) / n.norm_squared() + slack / n.norm()), n)
        }
    }
}

/// Members on the boundary half of the time (where normal cones are nontrivial).
pub fn sample_member_mixed(rng: &mut TestRng, set: &ConvexSet) -> Vector {
    if rng.gen_bool(0.5) {
        return sample_member(rng, set);
    }
    let dim = set.dim();
    match set {
        ConvexSet::Ball(b) => b.center().add_scaled(b.radius(), &random_unit(rng, dim)),
        ConvexSet::Box(b) => {
            let mut x: Vec<f64> = sample_member(rng, set).into_vec();
            let j = rng.gen_range(0..dim);
            x[j] = if rng.gen_bool(0.5) {
                b.lower()[j]
            } else {
                b.upper()[j]
            };
            if rng.gen_bool(0.3) {
                let i = rng.gen_range(0..dim);
                x[i] = b.upper()[i];
            }
            Vector::new(x).unwrap()
        }
        ConvexSet::Halfspace(h) => {
            let x = random_vector(rng, dim, 5.0);
            let n = h.normal();
            x.add_scaled(-(n.dot(&x) - h.offset()) / n.norm_squared(), n)
        }
        _ => sample_member(rng, set),
    }
}

/// A vector of the normal cone at a member `xbar`, from the cone's description.
pub fn sample_normal(rng: &mut TestRng, set: &ConvexSet, xbar: &Vector, tol: f64) -> Vector {
    let dim = set.dim();
    let t: f64 = rng.gen_range(0.0..3.0);
    match set {
        ConvexSet::Singleton(_) => random_vector(rng, dim, 3.0),
        ConvexSet::Ball(b) => {
            let w = xbar.sub(b.center());
            if w.norm() < b.radius() - tol {
                Vector::zeros(dim)
            } else {
                w.div(w.norm()).scale(t)
            }
        }
        ConvexSet::Box(b) => Vector::new(
            (0..dim)
                .map(|j| {
                    let s: f64 = rng.gen_range(0.0..3.0);
                    let lo = xbar[j] <= b.lower()[j] + tol;
                    let hi = xbar[j] >= b.upper()[j] - tol;
                    match (lo, hi) {
                        (true, false) => -s,
                        (false, true) => s,
                        (true, true) => rng.gen_range(-3.0..3.0),
                        (false, false) => 0.0,
                    }
                })
                .collect(),
        )
        .unwrap(),
        ConvexSet::Affine(a) => {
            let mut v = random_vector(rng, dim, 3.0);
            for d in a.directions() {
                v = v.add_scaled(-v.dot(d), d);
            }
            v
        }
        ConvexSet::Halfspace(h) => {
            let n = h.normal();
            if (h.offset() - n.dot(xbar)) / n.norm() > tol {
                Vector::zeros(dim)
            } else {
                n.div(n.norm()).scale(t)
            }
        }
    }
}

/// The subgradient of the distance to the square `[a-r, a+r] x [b-r, b+r]`
/// written as the nine-case vertex/face table. The left-face case is
/// read as `x - a < -r` and the right-face case as `x - a > r`.
pub fn square_table_subgradient(x: [f64; 2], center: [f64; 2], r: f64) -> [f64; 2] {
    let (dx, dy) = (x[0] - center[0], x[1] - center[1]);
    let unit = |q: [f64; 2]| {
        let (ux, uy) = (x[0] - q[0], x[1] - q[1]);
        let n = (ux * ux + uy * uy).sqrt();
        [ux / n, uy / n]
    };
    let (a, b) = (center[0], center[1]);
    let q1 = [a + r, b + r];
    let q2 = [a - r, b + r];
    let q3 = [a - r, b - r];
    let q4 = [a + r, b - r];
    if dx.abs() <= r && dy.abs() <= r {
        [0.0, 0.0]
    } else if dx > r && dy > r {
        unit(q1)
    } else if dx < -r && dy > r {
        unit(q2)
    } else if dx < -r && dy < -r {
        unit(q3)
    } else if dx > r && dy < -r {
        unit(q4)
    } else if dx.abs() <= r && dy > r {
        [0.0, 1.0]
    } else if dx.abs() <= r && dy < -r {
        [0.0, -1.0]
    } else if dx > r && dy.abs() <= r {
        [1.0, 0.0]
    } else {
        debug_assert!(dx < -r && dy.abs() <= r);
        [-1.0, 0.0]
    }
}

/// A point in region `(rx, ry)` of the square, each in {-1: below, 0: inside, 1: above}.
pub fn sample_square_region(
    rng: &mut TestRng,
    center: [f64; 2],
    r: f64,
    rx: i32,
    ry: i32,
) -> [f64; 2] {
    let mut pick = |c: f64, region: i32| match region {
        -1 => c - r - rng.gen_range(0.01..5.0),
        0 => c + rng.gen_range(-r..=r),
        _ => c + r + rng.gen_range(0.01..5.0),
    };
    [pick(center[0], rx), pick(center[1], ry)]
}

/// Classical Heron by reflection: the point of the line `p + t u` minimizing
/// `|M - A| + |M - B|` for `A`, `B` strictly on the same side.
pub fn reflection_optimum(p: [f64; 2], u: [f64; 2], a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    let un = (u[0] * u[0] + u[1] * u[1]).sqrt();
    let n = [-u[1] / un, u[0] / un];
    let side = (a[0] - p[0]) * n[0] + (a[1] - p[1]) * n[1];
    let a_ref = [a[0] - 2.0 * side * n[0], a[1] - 2.0 * side * n[1]];
    let h_ref = (a_ref[0] - p[0]) * n[0] + (a_ref[1] - p[1]) * n[1];
    let h_b = (b[0] - p[0]) * n[0] + (b[1] - p[1]) * n[1];
    let t = h_ref / (h_ref - h_b);
    [
        a_ref[0] + t * (b[0] - a_ref[0]),
        a_ref[1] + t * (b[1] - a_ref[1]),
    ]
}

pub struct HeronInstance {
    pub point: [f64; 2],
    pub dir: [f64; 2],
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub optimum: [f64; 2],
}

impl HeronInstance {
    pub fn scenario(&self) -> Scenario {
        Scenario::new(
            ConvexSet::line(
                vector![self.point[0], self.point[1]],
                vector![self.dir[0], self.dir[1]],
            )
            .unwrap(),
            vec![
                ConvexSet::singleton(vector![self.a[0], self.a[1]]),
                ConvexSet::singleton(vector![self.b[0], self.b[1]]),
            ],
        )
        .unwrap()
    }

    pub fn optimum(&self) -> Vector {
        vector![self.optimum[0], self.optimum[1]]
    }

    pub fn unit_dir(&self) -> Vector {
        let u = vector![self.dir[0], self.dir[1]];
        u.div(u.norm())
    }

    pub fn unit_normal(&self) -> Vector {
        let u = self.unit_dir();
        vector![-u[1], u[0]]
    }

    pub fn optimal_value(&self) -> f64 {
        let d = |p: [f64; 2]| {
            ((p[0] - self.optimum[0]).powi(2) + (p[1] - self.optimum[1]).powi(2)).sqrt()
        };
        d(self.a) + d(self.b)
    }
}

/// Two points on the same side of a random line, at least `0.5` away from it.
pub fn random_heron(rng: &mut TestRng) -> HeronInstance {
    let point = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
    let angle: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    let dir = [angle.cos(), angle.sin()];
    let n = [-dir[1], dir[0]];
    let side = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let place = |rng: &mut TestRng| {
        let along = rng.gen_range(-4.0..4.0);
        let off = side * rng.gen_range(0.5..4.0);
        [
            point[0] + along * dir[0] + off * n[0],
            point[1] + along * dir[1] + off * n[1],
        ]
    };
    let a = place(rng);
    let b = place(rng);
    HeronInstance {
        point,
        dir,
        a,
        b,
        optimum: reflection_optimum(point, dir, a, b),
    }
}

pub fn classical_heron() -> HeronInstance {
    HeronInstance {
        point: [0.0, 0.0],
        dir: [1.0, 0.0],
        a: [0.0, 1.0],
        b: [4.0, 3.0],
        optimum: reflection_optimum([0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [4.0, 3.0]),
    }
}

/// Random planar scenario: ball constraint and 2-5 singleton/box targets, all
/// at positive distance from the ball.
pub fn random_ball_scenario(rng: &mut TestRng) -> Scenario {
    let center = random_vector(rng, 2, 4.0);
    let radius = rng.gen_range(0.5..2.5);
    let omega = ConvexSet::ball(center.clone(), radius).unwrap();
    let n = rng.gen_range(2..=5);
    let mut targets = Vec::with_capacity(n);
    while targets.len() < n {
        let c = random_vector(rng, 2, 9.0);
        let t = if rng.gen_bool(0.5) {
            ConvexSet::singleton(c)
        } else {
            ConvexSet::axis_box(c, vec![rng.gen_range(0.2..1.5), rng.gen_range(0.2..1.5)]).unwrap()
        };
        if t.distance(&center).unwrap() > radius + 0.2 {
            targets.push(t);
        }
    }
    Scenario::new(omega, targets).unwrap()
}

/// Golden-section minimization of a unimodal function on `[lo, hi]`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    while hi - lo > tol {
        if f(c) < f(d) {
            hi = d;
        } else {
            lo = c;
        }
        c = hi - g * (hi - lo);
        d = lo + g * (hi - lo);
    }
    0.5 * (lo + hi)
}

/// Disk of radius 1.5 at (-3, 4) and four unit-half-width squares.
pub fn squares_disk() -> Scenario {
    let squares = [(-7.0, 1.0), (-5.0, -8.0), (4.0, 7.0), (5.0, 1.0)]
        .iter()
        .map(|&(a, b)| ConvexSet::cube(vector![a, b], 1.0).unwrap())
        .collect();
    Scenario::new(ConvexSet::ball(vector![-3, 4], 1.5).unwrap(), squares).unwrap()
}

/// Ball of radius 2 at (0, 2, 0) and five unit-half-width cubes.
pub fn cubes_ball() -> Scenario {
    let cubes = [
        [0.0, -4.0, 0.0],
        [6.0, 2.0, -3.0],
        [-3.0, -4.0, 2.0],
        [-5.0, 4.0, 4.0],
        [-1.0, 8.0, 1.0],
    ]
    .iter()
    .map(|c| ConvexSet::cube(vector![c[0], c[1], c[2]], 1.0).unwrap())
    .collect();
    Scenario::new(ConvexSet::ball(vector![0, 2, 0], 2.0).unwrap(), cubes).unwrap()
}

/// `sum_i |x - P_i(x)|` evaluated from the targets' projections.
pub fn objective_by_hand(sc: &Scenario, x: &Vector) -> f64 {
    sc.targets()
        .iter()
        .map(|t| x.distance_to(&t.project(x).unwrap()))
        .sum()
}
