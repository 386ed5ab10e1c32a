//! K-Means and Fuzzy C-Means baselines, plus the prototype seeding schemes.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cluster::{
    AlgoConfig, Assignment, ClusterModel, InitMethod, assign_points, pocs_objective,
    reseed_empty_clusters,
};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::geometry::Point;

fn distinct_point_count(dataset: &Dataset) -> usize {
    let mut seen = HashSet::new();
    for p in dataset.points() {
        let key: Vec<u64> = p.coords().iter().map(|c| c.to_bits()).collect();
        seen.insert(key);
    }
    seen.len()
}

/// k-means++ seeding: the first center is a uniformly random data point, each
/// later one a data point drawn with probability proportional to its squared
/// distance from the nearest center already chosen. Deterministic per seed.
pub fn kmeanspp_init(dataset: &Dataset, k: usize, seed: u64) -> Result<Vec<Point>> {
    if k == 0 {
        return Err(Error::config("k must be at least 1"));
    }
    let distinct = distinct_point_count(dataset);
    if k > distinct {
        return Err(Error::config(format!(
            "k = {k} exceeds the {distinct} distinct points available"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = dataset.points();
    let mut centers: Vec<Point> = Vec::with_capacity(k);
    centers.push(points[rng.random_range(0..points.len())].clone());

    let mut min_dist_sq: Vec<f64> = points
        .iter()
        .map(|p| {
            let d = p.distance(&centers[0]);
            d * d
        })
        .collect();

    while centers.len() < k {
        let total: f64 = min_dist_sq.iter().sum();
        debug_assert!(total > 0.0, "k <= distinct points rules this out");
        let target = rng.random::<f64>() * total;
        let mut cumulative = 0.0;
        let mut chosen = None;
        for (i, &w) in min_dist_sq.iter().enumerate() {
            cumulative += w;
            if cumulative > target {
                chosen = Some(i);
                break;
            }
        }
        // rounding can leave the target just past the final cumulative sum
        let chosen = chosen.unwrap_or_else(|| {
            min_dist_sq
                .iter()
                .rposition(|w| *w > 0.0)
                .expect("total > 0")
        });
        let center = points[chosen].clone();
        for (slot, p) in min_dist_sq.iter_mut().zip(points) {
            let d = p.distance(&center);
            *slot = slot.min(d * d);
        }
        centers.push(center);
    }
    Ok(centers)
}

/// Plain random seeding: k distinct rows drawn uniformly without replacement.
pub fn random_point_init(dataset: &Dataset, k: usize, seed: u64) -> Result<Vec<Point>> {
    if k == 0 {
        return Err(Error::config("k must be at least 1"));
    }
    if k > dataset.len() {
        return Err(Error::config(format!(
            "k = {k} exceeds the {} available points",
            dataset.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let indices = rand::seq::index::sample(&mut rng, dataset.len(), k);
    Ok(indices
        .iter()
        .map(|i| dataset.points()[i].clone())
        .collect())
}

fn mean_of<'a>(members: impl Iterator<Item = &'a Point>, dim: usize) -> Option<Point> {
    let mut sums = vec![0.0; dim];
    let mut count = 0usize;
    for m in members {
        for (s, c) in sums.iter_mut().zip(m.coords()) {
            *s += c;
        }
        count += 1;
    }
    if count == 0 {
        return None;
    }
    for s in &mut sums {
        *s /= count as f64;
    }
    Some(Point::new(sums).expect("mean of finite points is finite"))
}

fn lloyd(
    dataset: &Dataset,
    config: &AlgoConfig,
    mut observe: impl FnMut(&[Point], &Assignment),
) -> Result<ClusterModel> {
    config.validate(dataset)?;
    let mut prototypes = config.initial_prototypes(dataset)?;
    let mut assignment = assign_points(dataset, &prototypes)?;
    reseed_empty_clusters(dataset, &mut prototypes, &mut assignment)?;
    observe(&prototypes, &assignment);

    let mut iterations_run = 0;
    let mut converged = false;
    for iter in 1..=config.max_iter {
        iterations_run = iter;
        for (j, member_idx) in assignment.members().into_iter().enumerate() {
            if let Some(mean) = mean_of(
                member_idx.iter().map(|&i| &dataset.points()[i]),
                dataset.dim(),
            ) {
                prototypes[j] = mean;
            }
        }
        let mut next = assign_points(dataset, &prototypes)?;
        let reseeded = reseed_empty_clusters(dataset, &mut prototypes, &mut next)?;
        let stable = !reseeded && next == assignment;
        assignment = next;
        observe(&prototypes, &assignment);
        if stable {
            converged = true;
            break;
        }
    }

    let model = ClusterModel {
        prototypes,
        assignment,
        iterations_run,
        converged,
        objective: 0.0,
    };
    let objective = pocs_objective(&model, dataset)?;
    Ok(ClusterModel { objective, ..model })
}

/// Lloyd's K-Means: assign to the nearest prototype, move each prototype to
/// the arithmetic mean of its members, stop once a round leaves the
/// assignment unchanged (or at `max_iter`).
pub fn fit_kmeans(dataset: &Dataset, config: &AlgoConfig) -> Result<ClusterModel> {
    lloyd(dataset, config, |_, _| {})
}

/// A fitted fuzzy model: soft memberships rather than hard labels.
#[derive(Debug, Clone)]
pub struct FuzzyModel {
    pub prototypes: Vec<Point>,
    /// Row-stochastic n x k matrix; row i holds point i's memberships.
    pub membership: Vec<Vec<f64>>,
    pub fuzzifier: f64,
    pub iterations_run: usize,
    pub converged: bool,
}

/// Memberships below this squared distance collapse to a basis row.
const COINCIDENT_DIST_SQ: f64 = 1e-300;

fn membership_row(point: &Point, centers: &[Point], exponent: f64, is_m2: bool) -> Vec<f64> {
    let dist_sq: Vec<f64> = centers
        .iter()
        .map(|c| {
            let d = point.distance(c);
            d * d
        })
        .collect();
    if let Some(hit) = dist_sq.iter().position(|d| *d < COINCIDENT_DIST_SQ) {
        let mut row = vec![0.0; centers.len()];
        row[hit] = 1.0;
        return row;
    }
    let inv: Vec<f64> = dist_sq
        .iter()
        .map(|&d2| if is_m2 { 1.0 / d2 } else { d2.powf(exponent) })
        .collect();
    let total: f64 = inv.iter().sum();
    inv.into_iter().map(|v| v / total).collect()
}

fn fuzzy_centers(
    dataset: &Dataset,
    membership: &[Vec<f64>],
    m: f64,
    previous: &[Point],
) -> Vec<Point> {
    let k = previous.len();
    let dim = dataset.dim();
    let mut numerators = vec![vec![0.0; dim]; k];
    let mut denominators = vec![0.0; k];
    for (point, row) in dataset.points().iter().zip(membership) {
        for (j, &u) in row.iter().enumerate() {
            let um = if m == 2.0 { u * u } else { u.powf(m) };
            denominators[j] += um;
            for (acc, c) in numerators[j].iter_mut().zip(point.coords()) {
                *acc += um * c;
            }
        }
    }
    numerators
        .into_iter()
        .zip(&denominators)
        .enumerate()
        .map(|(j, (num, &den))| {
            if den > 0.0 {
                Point::new(num.into_iter().map(|v| v / den).collect())
                    .expect("convex combination of finite points")
            } else {
                previous[j].clone()
            }
        })
        .collect()
}

/// Fuzzy C-Means with fuzzifier `m`. Centers and memberships alternate until
/// the largest center movement drops to `config.tol` or `config.max_iter` is
/// hit. A point coincident with a center gets membership one there, zero
/// elsewhere.
///
/// `config.init` picks the starting state: `RandomPoints` (the default for
/// this algorithm) draws a seeded random row-stochastic membership matrix and
/// derives the first centers from it, which is what the published comparison
/// figures correspond to; `KMeansPlusPlus` starts from k-means++ centers
/// instead, with memberships derived by the first membership update.
pub fn fit_fcm(dataset: &Dataset, config: &AlgoConfig, m: f64) -> Result<FuzzyModel> {
    if !(m > 1.0) {
        return Err(Error::config("fuzzifier must exceed 1"));
    }
    let mut cfg = config.clone();
    cfg.fuzzifier = m;
    cfg.validate(dataset)?;

    let n = dataset.len();
    let k = cfg.k;
    let mut membership: Vec<Vec<f64>> = vec![vec![0.0; k]; n];
    let mut centers = match cfg.init {
        InitMethod::RandomPoints => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            for row in &mut membership {
                for u in row.iter_mut() {
                    *u = rng.random::<f64>();
                }
                let total: f64 = row.iter().sum();
                if total > 0.0 {
                    for u in row.iter_mut() {
                        *u /= total;
                    }
                } else {
                    row.fill(1.0 / k as f64);
                }
            }
            let placeholder = vec![dataset.points()[0].clone(); k];
            fuzzy_centers(dataset, &membership, m, &placeholder)
        }
        InitMethod::KMeansPlusPlus => kmeanspp_init(dataset, k, cfg.seed)?,
    };

    let exponent = -1.0 / (m - 1.0);
    let is_m2 = m == 2.0;
    let mut iterations_run = 0;
    let mut converged = false;
    for iter in 1..=cfg.max_iter {
        iterations_run = iter;
        for (row, point) in membership.iter_mut().zip(dataset.points()) {
            *row = membership_row(point, &centers, exponent, is_m2);
        }
        let next = fuzzy_centers(dataset, &membership, m, &centers);
        let movement = next
            .iter()
            .zip(&centers)
            .map(|(a, b)| a.max_norm_distance(b))
            .fold(0.0, f64::max);
        centers = next;
        if movement <= cfg.tol {
            converged = true;
            break;
        }
    }

    Ok(FuzzyModel {
        prototypes: centers,
        membership,
        fuzzifier: m,
        iterations_run,
        converged,
    })
}

/// Collapses a fuzzy model to hard labels by per-row argmax (ties to the
/// lowest index), so it can be scored like the hard-clustering fits.
pub fn harden(model: &FuzzyModel, dataset: &Dataset) -> Result<ClusterModel> {
    if model.membership.len() != dataset.len() {
        return Err(Error::contract(format!(
            "membership has {} rows, dataset has {} points",
            model.membership.len(),
            dataset.len()
        )));
    }
    let k = model.prototypes.len();
    let labels = model
        .membership
        .iter()
        .map(|row| {
            let mut best = (0usize, f64::NEG_INFINITY);
            for (j, &u) in row.iter().enumerate() {
                if u > best.1 {
                    best = (j, u);
                }
            }
            best.0
        })
        .collect();
    let assignment = Assignment::new(labels, k)?;
    let hard = ClusterModel {
        prototypes: model.prototypes.clone(),
        assignment,
        iterations_run: model.iterations_run,
        converged: model.converged,
        objective: 0.0,
    };
    let objective = pocs_objective(&hard, dataset)?;
    Ok(ClusterModel { objective, ..hard })
}
