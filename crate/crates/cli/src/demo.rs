//! `demo-pocs`: the projection iterations on small named 2-D scenes,
//! alternating and parallel side by side.

use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};

use pocs_clustering::plot::trace_svg;
use pocs_clustering::{ConvexSet, PocsTrace, Point, alternating_pocs, parallel_pocs};

use crate::cli_error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scene {
    /// Two unit balls whose intersection is non-empty.
    IntersectingBalls,
    /// Two disjoint unit balls.
    DisjointBalls,
    /// Three point sets, pairwise disjoint.
    ThreeSingletons,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    /// Which built-in scene to run.
    #[arg(long, value_enum)]
    pub scene: Scene,

    /// Iteration cap for both schemes.
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,

    /// Convergence tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,

    /// Also draw the iterate paths to this SVG file.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

fn pt(x: f64, y: f64) -> Point {
    Point::new(vec![x, y]).expect("finite literals")
}

fn scene_setup(scene: Scene) -> (Vec<ConvexSet>, Point) {
    match scene {
        Scene::IntersectingBalls => (
            vec![
                ConvexSet::ball(pt(0.0, 0.0), 1.0).expect("positive radius"),
                ConvexSet::ball(pt(1.0, 0.0), 1.0).expect("positive radius"),
            ],
            pt(5.0, 5.0),
        ),
        Scene::DisjointBalls => (
            vec![
                ConvexSet::ball(pt(0.0, 0.0), 1.0).expect("positive radius"),
                ConvexSet::ball(pt(4.0, 0.0), 1.0).expect("positive radius"),
            ],
            pt(0.5, 2.5),
        ),
        Scene::ThreeSingletons => (
            vec![
                ConvexSet::singleton(pt(0.0, 0.0)),
                ConvexSet::singleton(pt(4.0, 0.0)),
                ConvexSet::singleton(pt(0.0, 3.0)),
            ],
            pt(2.0, 2.0),
        ),
    }
}

fn describe(label: &str, trace: &PocsTrace) -> String {
    let end = trace.final_point();
    format!(
        "{label:<12} iterates={:<5} final=({:.6}, {:.6}) converged={} cycle_detected={}",
        trace.iterates.len(),
        end.coords()[0],
        end.coords()[1],
        trace.converged,
        trace.cycle_detected,
    )
}

pub fn run(args: DemoArgs) -> CliResult<()> {
    if !(args.tol > 0.0) {
        return Err(CliError::usage("--tol must be positive"));
    }
    let (sets, start) = scene_setup(args.scene);
    let weights = vec![1.0 / sets.len() as f64; sets.len()];

    let alternating = alternating_pocs(&sets, &start, args.max_iter, args.tol)?;
    let parallel = parallel_pocs(&sets, &weights, &start, args.max_iter, args.tol)?;

    println!("scene: {:?}", args.scene);
    println!(
        "start: ({:.6}, {:.6})  sets: {}  weights: uniform 1/{}",
        start.coords()[0],
        start.coords()[1],
        sets.len(),
        sets.len()
    );
    println!("{}", describe("alternating", &alternating));
    println!("{}", describe("parallel", &parallel));

    if let Some(path) = &args.svg {
        let svg = trace_svg(
            &sets,
            &[("alternating", &alternating), ("parallel", &parallel)],
        )?;
        fs::write(path, svg)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}
