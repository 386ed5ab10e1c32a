//! Convex sets, exact projection operators, and the alternating/parallel
//! projection iterations they support.
//!
//! Only set shapes with closed-form projections are provided. The clustering
//! algorithm itself needs nothing beyond singletons; balls, half-spaces and
//! boxes exist so that the projection machinery can be exercised on scenes
//! with known geometry.

use crate::error::{Error, Result};

/// Membership tests accept points this far outside a set's exact boundary.
pub const SET_TOL: f64 = 1e-12;

/// A point in d-dimensional Euclidean space. Coordinates are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    /// Builds a point, rejecting empty or non-finite coordinate vectors.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::contract("point must have dimension >= 1"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::contract("point coordinates must be finite"));
        }
        Ok(Point { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// Euclidean distance to another point of the same dimension.
    pub fn distance(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Largest absolute per-coordinate difference.
    pub fn max_norm_distance(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn dot(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.coords
    }
}

/// A closed convex region with an exact projection operator.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexSet {
    /// The one-point set {center}.
    Singleton { center: Point },
    /// Closed ball of the given radius around `center`.
    Ball { center: Point, radius: f64 },
    /// {y : normal . y <= offset}.
    HalfSpace { normal: Point, offset: f64 },
    /// Axis-aligned box [lower, upper].
    Box { lower: Point, upper: Point },
}

impl ConvexSet {
    pub fn singleton(center: Point) -> Self {
        ConvexSet::Singleton { center }
    }

    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::contract("ball radius must be positive and finite"));
        }
        Ok(ConvexSet::Ball { center, radius })
    }

    pub fn half_space(normal: Point, offset: f64) -> Result<Self> {
        if normal.coords().iter().all(|c| *c == 0.0) {
            return Err(Error::contract("half-space normal must be non-zero"));
        }
        if !offset.is_finite() {
            return Err(Error::contract("half-space offset must be finite"));
        }
        Ok(ConvexSet::HalfSpace { normal, offset })
    }

    pub fn axis_box(lower: Point, upper: Point) -> Result<Self> {
        if lower.dim() != upper.dim() {
            return Err(Error::DimensionMismatch {
                expected: lower.dim(),
                got: upper.dim(),
            });
        }
        if lower
            .coords()
            .iter()
            .zip(upper.coords())
            .any(|(l, u)| l > u)
        {
            return Err(Error::contract("box lower bound exceeds upper bound"));
        }
        Ok(ConvexSet::Box { lower, upper })
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::Singleton { center } => center.dim(),
            ConvexSet::Ball { center, .. } => center.dim(),
            ConvexSet::HalfSpace { normal, .. } => normal.dim(),
            ConvexSet::Box { lower, .. } => lower.dim(),
        }
    }

    /// Exact membership test, within `SET_TOL` of the boundary.
    pub fn contains(&self, p: &Point) -> bool {
        if p.dim() != self.dim() {
            return false;
        }
        match self {
            ConvexSet::Singleton { center } => p.max_norm_distance(center) <= SET_TOL,
            ConvexSet::Ball { center, radius } => p.distance(center) <= radius + SET_TOL,
            ConvexSet::HalfSpace { normal, offset } => normal.dot(p) <= offset + SET_TOL,
            ConvexSet::Box { lower, upper } => p
                .coords()
                .iter()
                .zip(lower.coords().iter().zip(upper.coords()))
                .all(|(c, (l, u))| *c >= l - SET_TOL && *c <= u + SET_TOL),
        }
    }

    /// Projects `p` onto the set: the unique member closest to `p` in
    /// Euclidean distance. A member projects to itself.
    pub fn project(&self, p: &Point) -> Result<Point> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.dim(),
            });
        }
        let projected = match self {
            ConvexSet::Singleton { center } => center.clone(),
            ConvexSet::Ball { center, radius } => {
                let dist = p.distance(center);
                if dist <= *radius {
                    p.clone()
                } else {
                    let scale = radius / dist;
                    let coords = p
                        .coords()
                        .iter()
                        .zip(center.coords())
                        .map(|(x, c)| c + (x - c) * scale)
                        .collect();
                    Point { coords }
                }
            }
            ConvexSet::HalfSpace { normal, offset } => {
                let violation = normal.dot(p) - offset;
                if violation <= 0.0 {
                    p.clone()
                } else {
                    let step = violation / normal.dot(normal);
                    let coords = p
                        .coords()
                        .iter()
                        .zip(normal.coords())
                        .map(|(x, n)| x - step * n)
                        .collect();
                    Point { coords }
                }
            }
            ConvexSet::Box { lower, upper } => {
                let coords = p
                    .coords()
                    .iter()
                    .zip(lower.coords().iter().zip(upper.coords()))
                    .map(|(c, (l, u))| c.clamp(*l, *u))
                    .collect();
                Point { coords }
            }
        };
        Ok(projected)
    }
}

/// Record of a projection iteration: every visited point, in order.
#[derive(Debug, Clone)]
pub struct PocsTrace {
    /// Visited points, starting with the initial one.
    pub iterates: Vec<Point>,
    /// The iteration reached a fixed point (within tolerance).
    pub converged: bool,
    /// The iteration revisited an earlier point without settling: a limit cycle.
    pub cycle_detected: bool,
}

impl PocsTrace {
    pub fn final_point(&self) -> &Point {
        self.iterates.last().expect("trace is never empty")
    }
}

/// How many previous full-cycle endpoints the limit-cycle check looks at.
const CYCLE_WINDOW: usize = 8;

fn check_dims(sets: &[ConvexSet], start: &Point) -> Result<()> {
    if sets.is_empty() {
        return Err(Error::contract("at least one convex set required"));
    }
    for set in sets {
        if set.dim() != start.dim() {
            return Err(Error::DimensionMismatch {
                expected: start.dim(),
                got: set.dim(),
            });
        }
    }
    Ok(())
}

/// Cyclic sequential projection onto each set in turn.
///
/// Stops when a full pass moves the point by at most `tol` everywhere
/// (converged), when the endpoint of a pass returns to the endpoint of one of
/// the previous few passes without settling (a limit cycle, which disjoint
/// sets produce), or after `max_iter` passes.
pub fn alternating_pocs(
    sets: &[ConvexSet],
    start: &Point,
    max_iter: usize,
    tol: f64,
) -> Result<PocsTrace> {
    check_dims(sets, start)?;
    let mut iterates = vec![start.clone()];
    let mut endpoints: Vec<Point> = Vec::new();
    let mut current = start.clone();
    let mut converged = false;
    let mut cycle_detected = false;

    for _ in 0..max_iter {
        let mut max_move: f64 = 0.0;
        for set in sets {
            let next = set.project(&current)?;
            max_move = max_move.max(next.max_norm_distance(&current));
            iterates.push(next.clone());
            current = next;
        }
        if max_move <= tol {
            converged = true;
            break;
        }
        if endpoints
            .iter()
            .rev()
            .take(CYCLE_WINDOW)
            .any(|p| p.max_norm_distance(&current) <= tol)
        {
            cycle_detected = true;
            break;
        }
        endpoints.push(current.clone());
    }

    Ok(PocsTrace {
        iterates,
        converged,
        cycle_detected,
    })
}

/// Weighted simultaneous projection onto all sets at once.
///
/// Each step moves the point by the convex combination of its projection
/// residuals. Weights must be non-negative and sum to one. For disjoint sets
/// the iteration settles at the minimizer of the weighted sum of squared
/// distances to the sets.
pub fn parallel_pocs(
    sets: &[ConvexSet],
    weights: &[f64],
    start: &Point,
    max_iter: usize,
    tol: f64,
) -> Result<PocsTrace> {
    check_dims(sets, start)?;
    if weights.len() != sets.len() {
        return Err(Error::contract(format!(
            "{} sets but {} weights",
            sets.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|w| *w < 0.0) {
        return Err(Error::contract("weights must be non-negative"));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::contract(format!(
            "weights must sum to 1, got {total}"
        )));
    }

    let mut iterates = vec![start.clone()];
    let mut current = start.clone();
    let mut converged = false;

    for _ in 0..max_iter {
        let mut step = vec![0.0; current.dim()];
        for (set, w) in sets.iter().zip(weights) {
            let proj = set.project(&current)?;
            for (s, (p, c)) in step
                .iter_mut()
                .zip(proj.coords().iter().zip(current.coords()))
            {
                *s += w * (p - c);
            }
        }
        let coords: Vec<f64> = current
            .coords()
            .iter()
            .zip(&step)
            .map(|(c, s)| c + s)
            .collect();
        let next = Point { coords };
        let moved = next.max_norm_distance(&current);
        iterates.push(next.clone());
        current = next;
        if moved <= tol {
            converged = true;
            break;
        }
    }

    Ok(PocsTrace {
        iterates,
        converged,
        cycle_detected: false,
    })
}
