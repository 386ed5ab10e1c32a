//! The projection-based clustering algorithm.
//!
//! Each cluster prototype is projected onto its member points simultaneously;
//! the projections are combined convexly with weights proportional to the
//! member's distance from the prototype, so one update moves the prototype to
//! the distance-weighted mean of its members. Assignment to the nearest
//! prototype alternates with the update, Lloyd-style.

use serde::{Deserialize, Serialize};

use crate::baselines::{kmeanspp_init, random_point_init};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::geometry::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Pocs,
    KMeans,
    Fcm,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Pocs => "pocs",
            Algorithm::KMeans => "kmeans",
            Algorithm::Fcm => "fcm",
        }
    }

    /// Iteration cap used when the caller does not choose one.
    pub fn default_max_iter(&self) -> usize {
        match self {
            Algorithm::Pocs => 100,
            Algorithm::KMeans | Algorithm::Fcm => 300,
        }
    }

    /// Prototype seeding used when the caller does not choose one. The
    /// projection algorithm is defined with k-means++ seeding; the baselines
    /// default to plain random seeding, which is what the published
    /// comparison figures correspond to.
    pub fn default_init(&self) -> InitMethod {
        match self {
            Algorithm::Pocs => InitMethod::KMeansPlusPlus,
            Algorithm::KMeans | Algorithm::Fcm => InitMethod::RandomPoints,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitMethod {
    /// Distance-squared weighted seeding from the data.
    KMeansPlusPlus,
    /// k distinct rows drawn uniformly without replacement.
    RandomPoints,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmptyClusterPolicy {
    /// Move an empty cluster's prototype to the point farthest from its
    /// nearest prototype.
    #[default]
    ReseedFarthest,
}

/// Everything a fit needs besides the data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgoConfig {
    pub algorithm: Algorithm,
    pub k: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Convergence tolerance on max-norm prototype movement, in the
    /// coordinate units the fit runs in.
    pub tol: f64,
    /// Fuzzy C-Means exponent; ignored by the other algorithms.
    pub fuzzifier: f64,
    pub init: InitMethod,
    /// Recompute the assignment every iteration. Disabling reproduces the
    /// variant that assigns points only once, before the first update round.
    pub reassign: bool,
    pub empty_cluster_policy: EmptyClusterPolicy,
}

impl AlgoConfig {
    pub fn new(algorithm: Algorithm, k: usize, seed: u64) -> Self {
        AlgoConfig {
            algorithm,
            k,
            seed,
            max_iter: algorithm.default_max_iter(),
            tol: 1e-6,
            fuzzifier: 2.0,
            init: algorithm.default_init(),
            reassign: true,
            empty_cluster_policy: EmptyClusterPolicy::ReseedFarthest,
        }
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_fuzzifier(mut self, m: f64) -> Self {
        self.fuzzifier = m;
        self
    }

    pub fn with_init(mut self, init: InitMethod) -> Self {
        self.init = init;
        self
    }

    pub fn with_reassign(mut self, reassign: bool) -> Self {
        self.reassign = reassign;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self, dataset: &Dataset) -> Result<()> {
        if self.k == 0 {
            return Err(Error::config("k must be at least 1"));
        }
        if self.k > dataset.len() {
            return Err(Error::config(format!(
                "k = {} exceeds the {} available points",
                self.k,
                dataset.len()
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::config("max_iter must be at least 1"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::config("tol must be positive"));
        }
        if self.algorithm == Algorithm::Fcm && !(self.fuzzifier > 1.0) {
            return Err(Error::config("fuzzifier must exceed 1"));
        }
        Ok(())
    }

    pub(crate) fn initial_prototypes(&self, dataset: &Dataset) -> Result<Vec<Point>> {
        match self.init {
            InitMethod::KMeansPlusPlus => kmeanspp_init(dataset, self.k, self.seed),
            InitMethod::RandomPoints => random_point_init(dataset, self.k, self.seed),
        }
    }
}

/// Hard cluster labels: one index in [0, k) per dataset point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    labels: Vec<usize>,
    k: usize,
}

impl Assignment {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if let Some(bad) = labels.iter().find(|l| **l >= k) {
            return Err(Error::contract(format!(
                "label {bad} out of range for k = {k}"
            )));
        }
        Ok(Assignment { labels, k })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Indices of the points carrying each label.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            members[l].push(i);
        }
        members
    }
}

/// A fitted hard-clustering result.
#[derive(Debug, Clone)]
pub struct ClusterModel {
    pub prototypes: Vec<Point>,
    pub assignment: Assignment,
    pub iterations_run: usize,
    pub converged: bool,
    /// Final value of the weighted projection cost.
    pub objective: f64,
}

fn nearest_prototype(point: &Point, prototypes: &[Point]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, proto) in prototypes.iter().enumerate() {
        let d = point.distance(proto);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

/// Labels every point with its nearest prototype; ties go to the lowest
/// prototype index.
pub fn assign_points(dataset: &Dataset, prototypes: &[Point]) -> Result<Assignment> {
    if prototypes.is_empty() {
        return Err(Error::contract("at least one prototype required"));
    }
    for p in prototypes {
        if p.dim() != dataset.dim() {
            return Err(Error::DimensionMismatch {
                expected: dataset.dim(),
                got: p.dim(),
            });
        }
    }
    let labels = dataset
        .points()
        .iter()
        .map(|p| nearest_prototype(p, prototypes).0)
        .collect();
    Assignment::new(labels, prototypes.len())
}

/// Moves every empty cluster's prototype to the point farthest from its
/// nearest prototype, then relabels. Returns true if anything changed.
pub(crate) fn reseed_empty_clusters(
    dataset: &Dataset,
    prototypes: &mut [Point],
    assignment: &mut Assignment,
) -> Result<bool> {
    let mut reseeded = false;
    loop {
        let sizes = assignment.cluster_sizes();
        let Some(empty) = sizes.iter().position(|s| *s == 0) else {
            return Ok(reseeded);
        };
        let farthest = dataset
            .points()
            .iter()
            .enumerate()
            .map(|(i, p)| (i, nearest_prototype(p, prototypes).1))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("dataset is non-empty");
        prototypes[empty] = dataset.points()[farthest.0].clone();
        *assignment = assign_points(dataset, prototypes)?;
        reseeded = true;
    }
}

/// Projection weights for one prototype and its member points: each member's
/// share is its distance from the prototype over the total distance. When
/// every member coincides with the prototype the weights are uniform.
pub fn pocs_weights(prototype: &Point, members: &[Point]) -> Result<Vec<f64>> {
    if members.is_empty() {
        return Err(Error::contract("weights need at least one member"));
    }
    let distances: Vec<f64> = members.iter().map(|m| prototype.distance(m)).collect();
    let total: f64 = distances.iter().sum();
    if total == 0.0 {
        return Ok(vec![1.0 / members.len() as f64; members.len()]);
    }
    Ok(distances.into_iter().map(|d| d / total).collect())
}

fn weighted_update<'a>(
    prototype: &Point,
    members: impl Iterator<Item = &'a Point> + Clone,
    count: usize,
) -> Point {
    let distances = members.clone().map(|m| prototype.distance(m));
    let total: f64 = distances.clone().sum();
    let mut coords = prototype.coords().to_vec();
    if total == 0.0 {
        return prototype.clone();
    }
    for (member, dist) in members.zip(distances) {
        let w = dist / total;
        for (c, (m, p)) in coords
            .iter_mut()
            .zip(member.coords().iter().zip(prototype.coords()))
        {
            *c += w * (m - p);
        }
    }
    debug_assert!(count > 0);
    Point::new(coords).expect("finite inputs give a finite update")
}

/// One prototype update: the prototype plus the weighted sum of its
/// projection residuals, which lands on the distance-weighted mean of the
/// members. A prototype whose members all coincide with it stays put.
pub fn pocs_update_prototype(prototype: &Point, members: &[Point]) -> Result<Point> {
    if members.is_empty() {
        return Err(Error::contract("update needs at least one member"));
    }
    for m in members {
        if m.dim() != prototype.dim() {
            return Err(Error::DimensionMismatch {
                expected: prototype.dim(),
                got: m.dim(),
            });
        }
    }
    Ok(weighted_update(prototype, members.iter(), members.len()))
}

/// The weighted projection cost: over every cluster, the weighted sum of
/// squared distances from the prototype to each member, with the same
/// distance-proportional weights the update uses.
pub fn pocs_objective(model: &ClusterModel, dataset: &Dataset) -> Result<f64> {
    if model.assignment.len() != dataset.len() {
        return Err(Error::contract(format!(
            "assignment covers {} points, dataset has {}",
            model.assignment.len(),
            dataset.len()
        )));
    }
    objective_of(dataset, &model.prototypes, &model.assignment)
}

fn objective_of(dataset: &Dataset, prototypes: &[Point], assignment: &Assignment) -> Result<f64> {
    let mut objective = 0.0;
    for (j, member_idx) in assignment.members().into_iter().enumerate() {
        if member_idx.is_empty() {
            continue;
        }
        let proto = &prototypes[j];
        let total: f64 = member_idx
            .iter()
            .map(|&i| proto.distance(&dataset.points()[i]))
            .sum();
        if total == 0.0 {
            continue;
        }
        for &i in &member_idx {
            let d = proto.distance(&dataset.points()[i]);
            objective += (d / total) * d * d;
        }
    }
    Ok(objective)
}

/// Fits the projection-based clustering model.
///
/// Prototypes are seeded per `config.init`, then assignment and the
/// distance-weighted update alternate. The fit stops when a full round
/// leaves the assignment unchanged, or moves every prototype by at most
/// `config.tol`, or after `config.max_iter` rounds. With `reassign`
/// disabled the assignment is computed once and only the movement test
/// applies.
pub fn fit_pocs(dataset: &Dataset, config: &AlgoConfig) -> Result<ClusterModel> {
    config.validate(dataset)?;
    let mut prototypes = config.initial_prototypes(dataset)?;
    let mut assignment = assign_points(dataset, &prototypes)?;
    reseed_empty_clusters(dataset, &mut prototypes, &mut assignment)?;

    let mut iterations_run = 0;
    let mut converged = false;

    for iter in 1..=config.max_iter {
        iterations_run = iter;

        let mut movement: f64 = 0.0;
        for (j, member_idx) in assignment.members().into_iter().enumerate() {
            if member_idx.is_empty() {
                continue;
            }
            let updated = weighted_update(
                &prototypes[j],
                member_idx.iter().map(|&i| &dataset.points()[i]),
                member_idx.len(),
            );
            movement = movement.max(updated.max_norm_distance(&prototypes[j]));
            prototypes[j] = updated;
        }

        if config.reassign {
            let mut next = assign_points(dataset, &prototypes)?;
            let reseeded = reseed_empty_clusters(dataset, &mut prototypes, &mut next)?;
            let stable = !reseeded && next == assignment;
            assignment = next;
            if stable || (!reseeded && movement <= config.tol) {
                converged = true;
                break;
            }
        } else if movement <= config.tol {
            converged = true;
            break;
        }
    }

    let objective = objective_of(dataset, &prototypes, &assignment)?;
    Ok(ClusterModel {
        prototypes,
        assignment,
        iterations_run,
        converged,
        objective,
    })
}
