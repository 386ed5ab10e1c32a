//! `bench`: seeded repeated-run comparison across algorithms and datasets,
//! with CSV/JSON artifacts and a formatted mean ± std table.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::Args;
use clap::ValueEnum;
use serde::Serialize;

use pocs_clustering::{AggregateRow, AlgoConfig, Algorithm, run_experiment};

use crate::cli_error::{CliError, CliResult};
use crate::common::{AlgoArg, DataSpec, InitArg, ScalingArg, load_prepared};
use crate::fit::validate_flags;
use crate::registry::Registry;

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated registered dataset names, or "all".
    #[arg(long, default_value = "all")]
    pub datasets: String,

    /// Comma-separated algorithms to compare.
    #[arg(long, default_value = "kmeans,fcm,pocs")]
    pub algos: String,

    /// Seeded runs per (algorithm, dataset) cell.
    #[arg(long, default_value_t = 20)]
    pub runs: usize,

    /// Base seed; run i uses seed + i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Override the registry cluster count for every dataset.
    #[arg(long)]
    pub k: Option<usize>,

    /// Iteration cap; defaults to 100 for pocs, 300 for the baselines.
    #[arg(long)]
    pub max_iter: Option<usize>,

    /// Convergence tolerance on prototype movement.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,

    /// Fuzzy C-Means fuzzifier.
    #[arg(long, default_value_t = 2.0)]
    pub m: f64,

    /// Prototype seeding override for every algorithm.
    #[arg(long, value_enum)]
    pub init: Option<InitArg>,

    /// Keep the initial assignment fixed instead of reassigning each round.
    #[arg(long)]
    pub no_reassign: bool,

    /// Coordinate scaling applied before the fits.
    #[arg(long, value_enum, default_value_t = ScalingArg::Global)]
    pub scaling: ScalingArg,

    /// Shorthand for --scaling raw.
    #[arg(long, conflicts_with = "scaling")]
    pub raw_space: bool,

    /// CSV output path; the JSON mirror lands next to it.
    #[arg(long, default_value = "bench.csv")]
    pub out: PathBuf,

    /// Run the seeded fits serially so timings are contention-free.
    #[arg(long)]
    pub timing_sequential: bool,

    /// Zero the timing column, making the artifacts bit-reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Serialize)]
struct CsvRowDoc {
    algorithm: String,
    dataset: String,
    runs: usize,
    mean_error: f64,
    std_error: f64,
    mean_time_s: f64,
}

#[derive(Serialize)]
struct BenchDocument {
    rows: Vec<CsvRowDoc>,
}

fn parse_algos(spec: &str) -> CliResult<Vec<AlgoArg>> {
    let algos: Vec<AlgoArg> = spec
        .split(',')
        .map(|tok| {
            AlgoArg::from_str(tok.trim(), true)
                .map_err(|_| CliError::usage(format!("unknown algorithm {tok:?}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if algos.is_empty() {
        return Err(CliError::usage("--algos must name at least one algorithm"));
    }
    Ok(algos)
}

fn mean_time_seconds(row: &AggregateRow, with_timing: bool) -> f64 {
    if with_timing {
        row.mean_time.as_secs_f64()
    } else {
        0.0
    }
}

fn csv_text(rows: &[CsvRowDoc]) -> String {
    let mut csv = String::from("algorithm,dataset,runs,mean_error,std_error,mean_time_s\n");
    for r in rows {
        writeln!(
            csv,
            "{},{},{},{:.4},{:.4},{:.6}",
            r.algorithm, r.dataset, r.runs, r.mean_error, r.std_error, r.mean_time_s
        )
        .expect("writing to String cannot fail");
    }
    csv
}

fn formatted_table(datasets: &[String], algos: &[AlgoArg], rows: &[CsvRowDoc]) -> String {
    let mut out = String::new();
    write!(out, "{:<14}", "dataset").expect("writing to String cannot fail");
    for algo in algos {
        let algorithm: Algorithm = (*algo).into();
        write!(out, "{:<20}", algorithm.name()).expect("writing to String cannot fail");
    }
    out.push('\n');
    for ds in datasets {
        write!(out, "{ds:<14}").expect("writing to String cannot fail");
        for algo in algos {
            let algorithm: Algorithm = (*algo).into();
            let cell = rows
                .iter()
                .find(|r| &r.dataset == ds && r.algorithm == algorithm.name())
                .map(|r| format!("{:.1} \u{b1} {:.1}", r.mean_error, r.std_error))
                .unwrap_or_default();
            write!(out, "{cell:<20}").expect("writing to String cannot fail");
        }
        out.push('\n');
    }
    out
}

pub fn run(args: BenchArgs) -> CliResult<()> {
    validate_flags(args.m, args.tol, args.max_iter)?;
    if args.runs == 0 {
        return Err(CliError::usage("--runs must be at least 1"));
    }
    let algos = parse_algos(&args.algos)?;
    let scaling = if args.raw_space {
        ScalingArg::Raw
    } else {
        args.scaling
    };

    let registry = Registry::load()?;
    let dataset_names: Vec<String> = if args.datasets.trim() == "all" {
        registry.names().iter().map(|s| s.to_string()).collect()
    } else {
        args.datasets
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect()
    };
    if dataset_names.is_empty() {
        return Err(CliError::usage("--datasets must name at least one dataset"));
    }
    // fail before any computation if a file is absent
    for name in &dataset_names {
        registry.resolve(name)?;
    }

    let mut csv_rows: Vec<CsvRowDoc> = Vec::new();
    for name in &dataset_names {
        let (path, entry) = registry.resolve(name)?;
        let spec = DataSpec {
            path: path.display().to_string(),
            dataset: Some(name.clone()),
            columns: entry.columns.clone(),
            delimiter: None,
            scaling,
        };
        let k = args.k.unwrap_or(entry.k);
        let dataset = load_prepared(&spec)?;

        let algo_configs: Vec<(Algorithm, AlgoConfig)> = algos
            .iter()
            .map(|a| {
                let algorithm: Algorithm = (*a).into();
                let mut config = AlgoConfig::new(algorithm, k, args.seed)
                    .with_tol(args.tol)
                    .with_fuzzifier(args.m)
                    .with_reassign(!args.no_reassign);
                if let Some(max_iter) = args.max_iter {
                    config = config.with_max_iter(max_iter);
                }
                if let Some(init) = args.init {
                    config = config.with_init(init.into());
                }
                (algorithm, config)
            })
            .collect();

        let report = run_experiment(
            &dataset,
            name,
            &algo_configs,
            args.runs,
            args.seed,
            !args.timing_sequential,
        )?;
        for row in &report.rows {
            csv_rows.push(CsvRowDoc {
                algorithm: row.algorithm.clone(),
                dataset: row.dataset.clone(),
                runs: row.runs,
                mean_error: row.mean_error,
                std_error: row.std_error,
                mean_time_s: mean_time_seconds(row, !args.no_timing),
            });
        }
    }

    let csv = csv_text(&csv_rows);
    fs::write(&args.out, &csv)?;
    let json_path = args.out.with_extension("json");
    print!("{}", formatted_table(&dataset_names, &algos, &csv_rows));
    let json = serde_json::to_string_pretty(&BenchDocument { rows: csv_rows })
        .map_err(|e| CliError::runtime(e.to_string()))?;
    fs::write(&json_path, json + "\n")?;
    eprintln!("wrote {} and {}", args.out.display(), json_path.display());
    Ok(())
}
