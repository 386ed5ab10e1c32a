//! `plot`: SVG scatter of a fitted 2-D model, either from a saved fit
//! document or by fitting on the spot.

use std::fs;
use std::path::PathBuf;

use clap::Args;

use pocs_clustering::plot::scatter_svg;

use crate::cli_error::{CliError, CliResult};
use crate::common::{FitDocument, FitParams, load_prepared};
use crate::fit::build_document;

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// A fit document produced by `fit --out`; mutually exclusive with the
    /// fit flags below.
    #[arg(long, conflicts_with_all = ["algo", "data", "dataset"])]
    pub fit: Option<PathBuf>,

    #[command(flatten)]
    pub params: FitParams,

    /// Where to write the SVG.
    #[arg(long, default_value = "plot.svg")]
    pub out: PathBuf,
}

pub fn run(args: PlotArgs) -> CliResult<()> {
    let document: FitDocument = match &args.fit {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?
        }
        None if args.params.algo.is_some() => build_document(&args.params, false)?,
        None => {
            return Err(CliError::usage(
                "give --fit or the fit flags (--algo, --data/--dataset)",
            ));
        }
    };

    let dataset = load_prepared(&document.config.data)?;
    if dataset.dim() != 2 {
        return Err(CliError::runtime("plotting supports 2-D datasets only"));
    }
    if dataset.len() != document.result.labels.len() {
        return Err(CliError::runtime(format!(
            "fit document labels {} points but {} has {}",
            document.result.labels.len(),
            document.config.data.path,
            dataset.len()
        )));
    }
    let model = document.to_model()?;
    let svg = scatter_svg(&dataset, &model)?;
    fs::write(&args.out, svg)?;
    eprintln!("wrote {}", args.out.display());
    Ok(())
}
