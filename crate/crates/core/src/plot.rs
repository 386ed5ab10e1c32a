//! Deterministic SVG output: cluster scatter plots and projection traces.
//!
//! The writers emit plain strings with fixed-precision coordinates, so the
//! same inputs always produce byte-identical files.

use std::fmt::Write;

use crate::cluster::ClusterModel;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::geometry::{ConvexSet, PocsTrace};

/// Cluster fill colors, cycled by label. Red is reserved for prototypes.
pub const PALETTE: [&str; 12] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#b07aa1", "#76b7b2", "#edc948", "#ff9da7", "#9c755f",
    "#bab0ac", "#86bcb6", "#d4a6c8", "#8cd17d",
];

fn require_2d(dim: usize) -> Result<()> {
    if dim != 2 {
        return Err(Error::contract(format!(
            "plotting supports 2-D datasets only, got dimension {dim}"
        )));
    }
    Ok(())
}

/// Scatter plot of a fitted model over its (normalized) dataset: one fill
/// color per cluster, prototypes as red markers drawn on top. The viewport
/// covers the unit square with a 5% margin.
pub fn scatter_svg(dataset: &Dataset, model: &ClusterModel) -> Result<String> {
    require_2d(dataset.dim())?;
    if model.assignment.len() != dataset.len() {
        return Err(Error::contract(format!(
            "assignment covers {} points, dataset has {}",
            model.assignment.len(),
            dataset.len()
        )));
    }

    let mut svg = String::new();
    svg.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-0.05 -0.05 1.1 1.1\" \
         width=\"720\" height=\"720\">\n",
    );
    svg.push_str("<rect x=\"-0.05\" y=\"-0.05\" width=\"1.1\" height=\"1.1\" fill=\"#ffffff\"/>\n");

    for (point, &label) in dataset.points().iter().zip(model.assignment.labels()) {
        let color = PALETTE[label % PALETTE.len()];
        let x = point.coords()[0];
        let y = 1.0 - point.coords()[1];
        writeln!(
            svg,
            "<circle class=\"pt\" cx=\"{x:.4}\" cy=\"{y:.4}\" r=\"0.005\" fill=\"{color}\"/>"
        )
        .expect("writing to String cannot fail");
    }

    for proto in &model.prototypes {
        let x = proto.coords()[0];
        let y = 1.0 - proto.coords()[1];
        writeln!(
            svg,
            "<circle class=\"proto\" cx=\"{x:.4}\" cy=\"{y:.4}\" r=\"0.012\" fill=\"red\" \
             stroke=\"#ffffff\" stroke-width=\"0.003\"/>"
        )
        .expect("writing to String cannot fail");
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

struct View {
    min_x: f64,
    min_y: f64,
    scale: f64,
    size: f64,
}

impl View {
    fn to_px(&self, x: f64, y: f64) -> (f64, f64) {
        (
            (x - self.min_x) * self.scale,
            self.size - (y - self.min_y) * self.scale,
        )
    }
}

fn set_bounds(set: &ConvexSet) -> (f64, f64, f64, f64) {
    match set {
        ConvexSet::Singleton { center } => {
            let c = center.coords();
            (c[0], c[1], c[0], c[1])
        }
        ConvexSet::Ball { center, radius } => {
            let c = center.coords();
            (c[0] - radius, c[1] - radius, c[0] + radius, c[1] + radius)
        }
        ConvexSet::HalfSpace { .. } => (0.0, 0.0, 0.0, 0.0),
        ConvexSet::Box { lower, upper } => (
            lower.coords()[0],
            lower.coords()[1],
            upper.coords()[0],
            upper.coords()[1],
        ),
    }
}

/// Draws 2-D projection scenes: the convex sets in outline plus one polyline
/// per trace, with every iterate marked.
pub fn trace_svg(sets: &[ConvexSet], traces: &[(&str, &PocsTrace)]) -> Result<String> {
    for set in sets {
        require_2d(set.dim())?;
    }
    let trace_colors = ["#4e79a7", "#f28e2b", "#59a14f", "#b07aa1"];

    let mut min_x = f64::INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for set in sets {
        let (lo_x, lo_y, hi_x, hi_y) = set_bounds(set);
        min_x = min_x.min(lo_x);
        min_y = min_y.min(lo_y);
        max_x = max_x.max(hi_x);
        max_y = max_y.max(hi_y);
    }
    for (_, trace) in traces {
        for p in &trace.iterates {
            require_2d(p.dim())?;
            min_x = min_x.min(p.coords()[0]);
            min_y = min_y.min(p.coords()[1]);
            max_x = max_x.max(p.coords()[0]);
            max_y = max_y.max(p.coords()[1]);
        }
    }
    let span = (max_x - min_x).max(max_y - min_y).max(1e-9);
    let margin = span * 0.08;
    let size = 720.0;
    let view = View {
        min_x: min_x - margin,
        min_y: min_y - margin,
        scale: size / (span + 2.0 * margin),
        size,
    };

    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {size:.0} {size:.0}\" \
         width=\"{size:.0}\" height=\"{size:.0}\">"
    )
    .expect("writing to String cannot fail");
    writeln!(
        svg,
        "<rect x=\"0\" y=\"0\" width=\"{size:.0}\" height=\"{size:.0}\" fill=\"#ffffff\"/>"
    )
    .expect("writing to String cannot fail");

    for set in sets {
        match set {
            ConvexSet::Singleton { center } => {
                let (cx, cy) = view.to_px(center.coords()[0], center.coords()[1]);
                writeln!(
                    svg,
                    "<circle class=\"set\" cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"5\" fill=\"#333333\"/>"
                )
                .expect("writing to String cannot fail");
            }
            ConvexSet::Ball { center, radius } => {
                let (cx, cy) = view.to_px(center.coords()[0], center.coords()[1]);
                let r = radius * view.scale;
                writeln!(
                    svg,
                    "<circle class=\"set\" cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{r:.2}\" \
                     fill=\"#eeeeee\" stroke=\"#333333\" stroke-width=\"1.5\"/>"
                )
                .expect("writing to String cannot fail");
            }
            ConvexSet::Box { lower, upper } => {
                let (x0, y1) = view.to_px(lower.coords()[0], lower.coords()[1]);
                let (x1, y0) = view.to_px(upper.coords()[0], upper.coords()[1]);
                writeln!(
                    svg,
                    "<rect class=\"set\" x=\"{x0:.2}\" y=\"{y0:.2}\" width=\"{w:.2}\" \
                     height=\"{h:.2}\" fill=\"#eeeeee\" stroke=\"#333333\" stroke-width=\"1.5\"/>",
                    w = x1 - x0,
                    h = y1 - y0,
                )
                .expect("writing to String cannot fail");
            }
            ConvexSet::HalfSpace { normal, offset } => {
                // draw the boundary line normal . y = offset across the view
                let n = normal.coords();
                let (p0, p1) = if n[1].abs() > n[0].abs() {
                    let x0 = view.min_x;
                    let x1 = view.min_x + (span + 2.0 * margin);
                    (
                        (x0, (offset - n[0] * x0) / n[1]),
                        (x1, (offset - n[0] * x1) / n[1]),
                    )
                } else {
                    let y0 = view.min_y;
                    let y1 = view.min_y + (span + 2.0 * margin);
                    (
                        ((offset - n[1] * y0) / n[0], y0),
                        ((offset - n[1] * y1) / n[0], y1),
                    )
                };
                let (x0, y0) = view.to_px(p0.0, p0.1);
                let (x1, y1) = view.to_px(p1.0, p1.1);
                writeln!(
                    svg,
                    "<line class=\"set\" x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" \
                     y2=\"{y1:.2}\" stroke=\"#333333\" stroke-width=\"1.5\"/>"
                )
                .expect("writing to String cannot fail");
            }
        }
    }

    for (idx, (name, trace)) in traces.iter().enumerate() {
        let color = trace_colors[idx % trace_colors.len()];
        let mut path = String::new();
        for p in &trace.iterates {
            let (x, y) = view.to_px(p.coords()[0], p.coords()[1]);
            if path.is_empty() {
                write!(path, "{x:.2},{y:.2}").expect("writing to String cannot fail");
            } else {
                write!(path, " {x:.2},{y:.2}").expect("writing to String cannot fail");
            }
        }
        writeln!(
            svg,
            "<polyline class=\"trace\" data-name=\"{name}\" points=\"{path}\" fill=\"none\" \
             stroke=\"{color}\" stroke-width=\"1.5\"/>"
        )
        .expect("writing to String cannot fail");
        for p in &trace.iterates {
            let (x, y) = view.to_px(p.coords()[0], p.coords()[1]);
            writeln!(
                svg,
                "<circle class=\"iter\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"{color}\"/>"
            )
            .expect("writing to String cannot fail");
        }
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}
