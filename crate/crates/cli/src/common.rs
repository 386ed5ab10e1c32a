//! Flag types and the fit plumbing shared by the subcommands.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use pocs_clustering::{
    AlgoConfig, Algorithm, Assignment, ClusterModel, Dataset, Delimiter, InitMethod, Point,
    RawTable, Scaling, clustering_error, fit_fcm, fit_kmeans, fit_pocs, harden, load_dataset,
    normalize_with,
};

use crate::cli_error::{CliError, CliResult};
use crate::registry::Registry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgoArg {
    Pocs,
    Kmeans,
    Fcm,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Algorithm {
        match a {
            AlgoArg::Pocs => Algorithm::Pocs,
            AlgoArg::Kmeans => Algorithm::KMeans,
            AlgoArg::Fcm => Algorithm::Fcm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingArg {
    /// One min/max over the whole table (the published benchmark scheme).
    Global,
    /// Independent min/max per dimension.
    PerDim,
    /// No rescaling.
    Raw,
}

impl From<ScalingArg> for Scaling {
    fn from(s: ScalingArg) -> Scaling {
        match s {
            ScalingArg::Global => Scaling::Global,
            ScalingArg::PerDim => Scaling::PerDimension,
            ScalingArg::Raw => Scaling::Raw,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitArg {
    KmeansPp,
    Random,
}

impl From<InitArg> for InitMethod {
    fn from(i: InitArg) -> InitMethod {
        match i {
            InitArg::KmeansPp => InitMethod::KMeansPlusPlus,
            InitArg::Random => InitMethod::RandomPoints,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DelimiterArg {
    Whitespace,
    Comma,
}

impl From<DelimiterArg> for Delimiter {
    fn from(d: DelimiterArg) -> Delimiter {
        match d {
            DelimiterArg::Whitespace => Delimiter::Whitespace,
            DelimiterArg::Comma => Delimiter::Comma,
        }
    }
}

/// Parses a `--columns 0,1` style list.
pub fn parse_columns(spec: &str) -> CliResult<Vec<usize>> {
    spec.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| CliError::usage(format!("--columns: {tok:?} is not a column index")))
        })
        .collect()
}

/// The fit flags `fit` and `plot` share.
#[derive(Debug, Clone, Args)]
pub struct FitParams {
    /// Clustering algorithm to run.
    #[arg(long, value_enum)]
    pub algo: Option<AlgoArg>,

    /// Number of clusters; defaults to the registry value for --dataset.
    #[arg(long)]
    pub k: Option<usize>,

    /// Path to a point file (one point per line).
    #[arg(long)]
    pub data: Option<PathBuf>,

    /// Short name of a registered benchmark dataset.
    #[arg(long)]
    pub dataset: Option<String>,

    /// Seed for the deterministic generator.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Iteration cap; defaults to 100 for pocs, 300 for the baselines.
    #[arg(long)]
    pub max_iter: Option<usize>,

    /// Convergence tolerance on prototype movement.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,

    /// Fuzzy C-Means fuzzifier.
    #[arg(long, default_value_t = 2.0)]
    pub m: f64,

    /// Prototype seeding; defaults to kmeans-pp for pocs, random otherwise.
    #[arg(long, value_enum)]
    pub init: Option<InitArg>,

    /// Keep the initial assignment fixed instead of reassigning each round.
    #[arg(long)]
    pub no_reassign: bool,

    /// Coordinate scaling applied before the fit.
    #[arg(long, value_enum, default_value_t = ScalingArg::Global)]
    pub scaling: ScalingArg,

    /// Shorthand for --scaling raw.
    #[arg(long, conflicts_with = "scaling")]
    pub raw_space: bool,

    /// Comma-separated coordinate columns to keep, e.g. 0,1.
    #[arg(long)]
    pub columns: Option<String>,

    /// Field separator; auto-detected when omitted.
    #[arg(long, value_enum)]
    pub delimiter: Option<DelimiterArg>,
}

/// Where the input points came from and how they were prepared.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DataSpec {
    pub path: String,
    pub dataset: Option<String>,
    pub columns: Option<Vec<usize>>,
    pub delimiter: Option<DelimiterArg>,
    pub scaling: ScalingArg,
}

/// Loads and normalizes the points a `DataSpec` describes.
pub fn load_prepared(spec: &DataSpec) -> CliResult<Dataset> {
    let mut table: RawTable =
        load_dataset(&spec.path, spec.delimiter.map(Into::into)).map_err(CliError::from)?;
    if let Some(columns) = &spec.columns {
        table = table.select_columns(columns)?;
    }
    let (dataset, _) = normalize_with(&table, spec.scaling.into())?;
    Ok(dataset)
}

/// Resolves `--data` / `--dataset` into a concrete `DataSpec` plus the
/// registry's cluster count when a short name was used.
pub fn resolve_data_flags(
    data: Option<&PathBuf>,
    dataset: Option<&str>,
    columns: Option<&str>,
    delimiter: Option<DelimiterArg>,
    scaling: ScalingArg,
) -> CliResult<(DataSpec, Option<usize>)> {
    let columns = columns.map(parse_columns).transpose()?;
    match (data, dataset) {
        (Some(path), None) => Ok((
            DataSpec {
                path: path.display().to_string(),
                dataset: None,
                columns,
                delimiter,
                scaling,
            },
            None,
        )),
        (None, Some(name)) => {
            let registry = Registry::load()?;
            let (path, entry) = registry.resolve(name)?;
            Ok((
                DataSpec {
                    path: path.display().to_string(),
                    dataset: Some(name.to_string()),
                    columns: columns.or_else(|| entry.columns.clone()),
                    delimiter,
                    scaling,
                },
                Some(entry.k),
            ))
        }
        (Some(_), Some(_)) => Err(CliError::usage("give either --data or --dataset, not both")),
        (None, None) => Err(CliError::usage("one of --data or --dataset is required")),
    }
}

/// The configuration echo embedded in every fit document, sufficient to
/// regenerate the result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub algorithm: AlgoArg,
    pub k: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub tol: f64,
    pub fuzzifier: f64,
    pub init: InitArg,
    pub reassign: bool,
    #[serde(flatten)]
    pub data: DataSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitResultDoc {
    pub prototypes: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
    pub clustering_error: f64,
    pub objective: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<f64>,
}

/// The JSON document `fit` emits and `plot` can consume.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitDocument {
    pub config: ConfigEcho,
    pub result: FitResultDoc,
}

impl FitDocument {
    /// Rebuilds the fitted model (prototypes + labels) recorded in the
    /// document.
    pub fn to_model(&self) -> CliResult<ClusterModel> {
        let prototypes = self
            .result
            .prototypes
            .iter()
            .map(|c| Point::new(c.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let assignment = Assignment::new(self.result.labels.clone(), prototypes.len())?;
        Ok(ClusterModel {
            prototypes,
            assignment,
            iterations_run: self.result.iterations,
            converged: self.result.converged,
            objective: self.result.objective,
        })
    }
}

/// Runs one configured fit on prepared data, timing only the fit call.
pub fn run_single_fit(
    dataset: &Dataset,
    config: &AlgoConfig,
    with_timing: bool,
) -> CliResult<(ClusterModel, Option<f64>)> {
    let started = Instant::now();
    let model = match config.algorithm {
        Algorithm::Pocs => fit_pocs(dataset, config)?,
        Algorithm::KMeans => fit_kmeans(dataset, config)?,
        Algorithm::Fcm => {
            let fuzzy = fit_fcm(dataset, config, config.fuzzifier)?;
            harden(&fuzzy, dataset)?
        }
    };
    let elapsed = started.elapsed();
    Ok((model, with_timing.then_some(elapsed.as_secs_f64() * 1e3)))
}

/// Builds the full document for a fit: config echo, scored result, timing.
pub fn fit_document(
    echo: ConfigEcho,
    dataset: &Dataset,
    config: &AlgoConfig,
    with_timing: bool,
) -> CliResult<FitDocument> {
    let (model, wall_clock_ms) = run_single_fit(dataset, config, with_timing)?;
    let error = clustering_error(&model, dataset)?;
    Ok(FitDocument {
        config: echo,
        result: FitResultDoc {
            prototypes: model
                .prototypes
                .iter()
                .map(|p| p.coords().to_vec())
                .collect(),
            labels: model.assignment.labels().to_vec(),
            iterations: model.iterations_run,
            converged: model.converged,
            clustering_error: error,
            objective: model.objective,
            wall_clock_ms,
        },
    })
}
