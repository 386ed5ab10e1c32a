//! Clustering error, repeated-run statistics, and fit timing.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::baselines::{fit_fcm, fit_kmeans, harden};
use crate::cluster::{AlgoConfig, Algorithm, ClusterModel, fit_pocs};
use crate::data::Dataset;
use crate::error::{Error, Result};

/// Sum over clusters of unsquared Euclidean distances from each member to its
/// prototype. This is the error the benchmark tables report; it expects the
/// min-max-normalized data the fit ran on.
pub fn clustering_error(model: &ClusterModel, dataset: &Dataset) -> Result<f64> {
    if model.assignment.len() != dataset.len() {
        return Err(Error::contract(format!(
            "assignment covers {} points, dataset has {}",
            model.assignment.len(),
            dataset.len()
        )));
    }
    Ok(model
        .assignment
        .labels()
        .iter()
        .zip(dataset.points())
        .map(|(&label, point)| point.distance(&model.prototypes[label]))
        .sum())
}

/// One seeded fit, scored and timed.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub algorithm: String,
    pub dataset: String,
    pub seed: u64,
    pub error: f64,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    pub wall_clock_fit: Duration,
}

/// Mean/std of error and mean fit time for one (algorithm, dataset) cell.
#[derive(Debug, Clone, Serialize)]
pub struct AggregateRow {
    pub algorithm: String,
    pub dataset: String,
    pub runs: usize,
    pub mean_error: f64,
    /// Population standard deviation over the runs.
    pub std_error: f64,
    pub mean_time: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct AggregateReport {
    pub rows: Vec<AggregateRow>,
    pub runs: Vec<RunReport>,
}

/// Streaming mean and population standard deviation (Welford).
#[derive(Debug, Clone, Default)]
pub struct RunningStats {
    count: usize,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, value: f64) {
        self.count += 1;
        let delta = value - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (value - self.mean);
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn population_std(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        (self.m2 / self.count as f64).sqrt()
    }
}

/// What a benchmark runner must produce for each seed.
pub struct FitOutcome {
    pub error: f64,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// A named fit procedure the harness can time. The closure receives the seed
/// for the run and must be self-contained; only its execution is timed.
pub struct BenchRunner<'a> {
    pub name: String,
    pub fit: Box<dyn Fn(u64) -> Result<FitOutcome> + Sync + 'a>,
}

impl<'a> BenchRunner<'a> {
    /// Standard runner for one of the three algorithms on a dataset.
    pub fn for_algorithm(
        algorithm: Algorithm,
        dataset: &'a Dataset,
        template: &AlgoConfig,
    ) -> BenchRunner<'a> {
        let template = template.clone();
        let fit = move |seed: u64| -> Result<FitOutcome> {
            let config = template.clone().with_seed(seed);
            let model = match algorithm {
                Algorithm::Pocs => fit_pocs(dataset, &config)?,
                Algorithm::KMeans => fit_kmeans(dataset, &config)?,
                Algorithm::Fcm => {
                    let fuzzy = fit_fcm(dataset, &config, config.fuzzifier)?;
                    harden(&fuzzy, dataset)?
                }
            };
            Ok(FitOutcome {
                error: clustering_error(&model, dataset)?,
                objective: model.objective,
                iterations: model.iterations_run,
                converged: model.converged,
            })
        };
        BenchRunner {
            name: algorithm.name().to_string(),
            fit: Box::new(fit),
        }
    }
}

/// Executes `runs` seeded fits per runner (seed = `base_seed` + run index),
/// recording one `RunReport` each and aggregating error mean/std and mean
/// wall-clock of the fit call alone. `parallel` distributes runs across
/// threads; results are identical either way, only the timings move.
pub fn run_experiment_with(
    dataset_name: &str,
    runners: &[BenchRunner<'_>],
    runs: usize,
    base_seed: u64,
    parallel: bool,
) -> Result<AggregateReport> {
    if runs == 0 {
        return Err(Error::config("runs must be at least 1"));
    }
    let mut rows = Vec::with_capacity(runners.len());
    let mut all_runs = Vec::with_capacity(runners.len() * runs);
    for runner in runners {
        let one_run = |run_idx: usize| -> Result<RunReport> {
            let seed = base_seed + run_idx as u64;
            let started = Instant::now();
            let outcome = (runner.fit)(seed).map_err(|e| {
                Error::contract(format!(
                    "{} run failed on {dataset_name} (seed {seed}): {e}",
                    runner.name
                ))
            })?;
            let wall_clock_fit = started.elapsed();
            Ok(RunReport {
                algorithm: runner.name.clone(),
                dataset: dataset_name.to_string(),
                seed,
                error: outcome.error,
                objective: outcome.objective,
                iterations: outcome.iterations,
                converged: outcome.converged,
                wall_clock_fit,
            })
        };
        let reports: Vec<RunReport> = if parallel {
            (0..runs)
                .into_par_iter()
                .map(one_run)
                .collect::<Result<Vec<_>>>()?
        } else {
            (0..runs).map(one_run).collect::<Result<Vec<_>>>()?
        };

        let mut stats = RunningStats::default();
        let mut total_time = Duration::ZERO;
        for r in &reports {
            stats.push(r.error);
            total_time += r.wall_clock_fit;
        }
        rows.push(AggregateRow {
            algorithm: runner.name.clone(),
            dataset: dataset_name.to_string(),
            runs,
            mean_error: stats.mean(),
            std_error: stats.population_std(),
            mean_time: total_time / runs as u32,
        });
        all_runs.extend(reports);
    }
    Ok(AggregateReport {
        rows,
        runs: all_runs,
    })
}

/// `run_experiment_with` over the standard algorithm runners.
pub fn run_experiment(
    dataset: &Dataset,
    dataset_name: &str,
    algorithms: &[(Algorithm, AlgoConfig)],
    runs: usize,
    base_seed: u64,
    parallel: bool,
) -> Result<AggregateReport> {
    let runners: Vec<BenchRunner> = algorithms
        .iter()
        .map(|(algo, cfg)| BenchRunner::for_algorithm(*algo, dataset, cfg))
        .collect();
    run_experiment_with(dataset_name, &runners, runs, base_seed, parallel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::Assignment;
    use crate::geometry::Point;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn error_zero_when_members_sit_on_prototypes() {
        let ds = Dataset::new(vec![pt(&[0.25]), pt(&[0.75])]).unwrap();
        let model = ClusterModel {
            prototypes: vec![pt(&[0.25]), pt(&[0.75])],
            assignment: Assignment::new(vec![0, 1], 2).unwrap(),
            iterations_run: 1,
            converged: true,
            objective: 0.0,
        };
        assert_eq!(clustering_error(&model, &ds).unwrap(), 0.0);
    }

    #[test]
    fn error_sums_unsquared_distances() {
        let ds = Dataset::new(vec![pt(&[0.0]), pt(&[1.0])]).unwrap();
        let model = ClusterModel {
            prototypes: vec![pt(&[0.5])],
            assignment: Assignment::new(vec![0, 0], 1).unwrap(),
            iterations_run: 1,
            converged: true,
            objective: 0.0,
        };
        assert!((clustering_error(&model, &ds).unwrap() - 1.0).abs() < 1e-15);
    }

    // independent naive re-implementation used as the oracle
    fn naive_error(model: &ClusterModel, dataset: &Dataset) -> f64 {
        let mut total = 0.0;
        for (j, proto) in model.prototypes.iter().enumerate() {
            for (i, &label) in model.assignment.labels().iter().enumerate() {
                if label == j {
                    let p = dataset.points()[i].coords();
                    let c = proto.coords();
                    let mut dist_sq = 0.0;
                    for (a, b) in p.iter().zip(c) {
                        dist_sq += (a - b) * (a - b);
                    }
                    total += dist_sq.sqrt();
                }
            }
        }
        total
    }

    #[test]
    fn error_matches_naive_oracle_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let n = rng.random_range(1..30);
            let k = rng.random_range(1..6).min(n);
            let dim = rng.random_range(1..4);
            let points: Vec<Point> = (0..n)
                .map(|_| pt(&(0..dim).map(|_| rng.random::<f64>()).collect::<Vec<_>>()))
                .collect();
            let ds = Dataset::new(points).unwrap();
            let prototypes: Vec<Point> = (0..k)
                .map(|_| pt(&(0..dim).map(|_| rng.random::<f64>()).collect::<Vec<_>>()))
                .collect();
            let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
            let model = ClusterModel {
                prototypes,
                assignment: Assignment::new(labels, k).unwrap(),
                iterations_run: 0,
                converged: false,
                objective: 0.0,
            };
            let fast = clustering_error(&model, &ds).unwrap();
            let slow = naive_error(&model, &ds);
            assert!((fast - slow).abs() <= 1e-12, "{fast} vs {slow}");
        }
    }

    #[test]
    fn welford_matches_two_pass_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.random_range(1..40);
            let values: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 100.0).collect();
            let mut stats = RunningStats::default();
            for v in &values {
                stats.push(*v);
            }
            let mean: f64 = values.iter().sum::<f64>() / n as f64;
            let var: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
            assert!((stats.mean() - mean).abs() <= 1e-9);
            assert!((stats.population_std() - var.sqrt()).abs() <= 1e-9);
        }
    }

    #[test]
    fn single_run_has_zero_std() {
        let (ds, _) = crate::data::make_blobs(2, 15, 2, 0.03, 0.4, 0).unwrap();
        let cfg = AlgoConfig::new(Algorithm::KMeans, 2, 0);
        let report =
            run_experiment(&ds, "blobs", &[(Algorithm::KMeans, cfg)], 1, 7, false).unwrap();
        assert_eq!(report.rows[0].std_error, 0.0);
        assert_eq!(report.runs.len(), 1);
        assert_eq!(report.runs[0].seed, 7);
    }

    #[test]
    fn parallel_and_sequential_agree_on_everything_but_time() {
        let (ds, _) = crate::data::make_blobs(3, 20, 2, 0.04, 0.3, 2).unwrap();
        let algos = vec![
            (Algorithm::Pocs, AlgoConfig::new(Algorithm::Pocs, 3, 0)),
            (Algorithm::KMeans, AlgoConfig::new(Algorithm::KMeans, 3, 0)),
        ];
        let seq = run_experiment(&ds, "blobs", &algos, 8, 100, false).unwrap();
        let par = run_experiment(&ds, "blobs", &algos, 8, 100, true).unwrap();
        for (a, b) in seq.rows.iter().zip(&par.rows) {
            assert_eq!(a.mean_error, b.mean_error);
            assert_eq!(a.std_error, b.std_error);
        }
        for (a, b) in seq.runs.iter().zip(&par.runs) {
            assert_eq!(a.seed, b.seed);
            assert_eq!(a.error, b.error);
        }
    }

    #[test]
    fn timing_covers_only_the_fit_call() {
        let noop = BenchRunner {
            name: "noop".to_string(),
            fit: Box::new(|_| {
                Ok(FitOutcome {
                    error: 0.0,
                    objective: 0.0,
                    iterations: 0,
                    converged: true,
                })
            }),
        };
        let report = run_experiment_with("none", &[noop], 5, 0, false).unwrap();
        assert!(report.rows[0].mean_time < Duration::from_millis(1));
    }

    #[test]
    fn failed_run_reports_algorithm_and_seed() {
        let failing = BenchRunner {
            name: "broken".to_string(),
            fit: Box::new(|_| Err(Error::contract("boom"))),
        };
        let err = run_experiment_with("ds", &[failing], 3, 11, false).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("broken") && msg.contains("seed 11"), "{msg}");
    }
}
