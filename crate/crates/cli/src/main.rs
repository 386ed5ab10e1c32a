//! Command-line surface of the clustering toolkit.
//!
//! Exit codes: 0 success, 1 runtime or data failure, 2 usage error.

mod bench;
mod cli_error;
mod common;
mod demo;
mod fit;
mod plot;
mod registry;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "pocs-clustering",
    version,
    about = "Projection-based clustering with K-Means and Fuzzy C-Means baselines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one seeded fit and print the result as JSON.
    Fit(fit::FitArgs),
    /// Compare algorithms over seeded repeated runs; write CSV/JSON reports.
    Bench(bench::BenchArgs),
    /// Render a fitted 2-D model as an SVG scatter plot.
    Plot(plot::PlotArgs),
    /// Run the projection iterations on a built-in geometric scene.
    #[command(name = "demo-pocs")]
    DemoPocs(demo::DemoArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fit(args) => fit::run(args),
        Command::Bench(args) => bench::run(args),
        Command::Plot(args) => plot::run(args),
        Command::DemoPocs(args) => demo::run(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
