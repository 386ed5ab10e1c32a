//! `fit`: one seeded run, JSON result on stdout or to a file.

use std::fs;
use std::path::PathBuf;

use clap::Args;

use pocs_clustering::{AlgoConfig, Algorithm};

use crate::cli_error::{CliError, CliResult};
use crate::common::{
    ConfigEcho, FitDocument, FitParams, InitArg, ScalingArg, fit_document, load_prepared,
    resolve_data_flags,
};

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub params: FitParams,

    /// Write the JSON document here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Omit wall-clock fields, making the output bit-reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

pub fn validate_flags(m: f64, tol: f64, max_iter: Option<usize>) -> CliResult<()> {
    if !(m > 1.0) {
        return Err(CliError::usage("fuzzifier must exceed 1"));
    }
    if !(tol > 0.0) {
        return Err(CliError::usage("--tol must be positive"));
    }
    if max_iter == Some(0) {
        return Err(CliError::usage("--max-iter must be at least 1"));
    }
    Ok(())
}

pub fn build_document(params: &FitParams, with_timing: bool) -> CliResult<FitDocument> {
    let algo = params
        .algo
        .ok_or_else(|| CliError::usage("--algo is required"))?;
    validate_flags(params.m, params.tol, params.max_iter)?;
    let scaling = if params.raw_space {
        ScalingArg::Raw
    } else {
        params.scaling
    };
    let (spec, registry_k) = resolve_data_flags(
        params.data.as_ref(),
        params.dataset.as_deref(),
        params.columns.as_deref(),
        params.delimiter,
        scaling,
    )?;
    let k = params
        .k
        .or(registry_k)
        .ok_or_else(|| CliError::usage("--k is required unless --dataset provides one"))?;
    if k == 0 {
        return Err(CliError::usage("--k must be at least 1"));
    }

    let algorithm: Algorithm = algo.into();
    let mut config = AlgoConfig::new(algorithm, k, params.seed)
        .with_tol(params.tol)
        .with_fuzzifier(params.m)
        .with_reassign(!params.no_reassign);
    if let Some(max_iter) = params.max_iter {
        config = config.with_max_iter(max_iter);
    }
    if let Some(init) = params.init {
        config = config.with_init(init.into());
    }

    let echo = ConfigEcho {
        algorithm: algo,
        k,
        seed: params.seed,
        max_iter: config.max_iter,
        tol: config.tol,
        fuzzifier: config.fuzzifier,
        init: match config.init {
            pocs_clustering::InitMethod::KMeansPlusPlus => InitArg::KmeansPp,
            pocs_clustering::InitMethod::RandomPoints => InitArg::Random,
        },
        reassign: config.reassign,
        data: spec.clone(),
    };

    let dataset = load_prepared(&spec)?;
    fit_document(echo, &dataset, &config, with_timing)
}

pub fn run(args: FitArgs) -> CliResult<()> {
    let document = build_document(&args.params, !args.no_timing)?;
    let json =
        serde_json::to_string_pretty(&document).map_err(|e| CliError::runtime(e.to_string()))?;
    match &args.out {
        Some(path) => fs::write(path, json + "\n")?,
        None => println!("{json}"),
    }
    Ok(())
}
