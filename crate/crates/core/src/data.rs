//! Dataset loading, min-max normalization, and synthetic blob generation.

use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Field separator for point files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Delimiter {
    Whitespace,
    Comma,
}

/// A parsed point file: raw rows, before any normalization.
#[derive(Debug, Clone)]
pub struct RawTable {
    rows: Vec<Vec<f64>>,
    source_path: String,
    delimiter: Delimiter,
}

/// An immutable collection of points of uniform dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Vec<Point>,
    dim: usize,
}

impl Dataset {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let dim = match points.first() {
            Some(p) => p.dim(),
            None => return Err(Error::contract("dataset must contain at least one point")),
        };
        if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad.dim(),
            });
        }
        Ok(Dataset { points, dim })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// How raw coordinates are mapped into the unit range before clustering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    /// One min/max over every coordinate of the whole table; aspect ratio is
    /// preserved. This is the scheme behind the published benchmark figures.
    #[default]
    Global,
    /// Independent min/max per dimension; every dimension fills [0, 1].
    PerDimension,
    /// No rescaling.
    Raw,
}

/// The per-dimension (min, max) pairs a normalization was computed from,
/// kept so points can be mapped back to raw coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationSpec {
    bounds: Vec<(f64, f64)>,
    scaling: Scaling,
}

impl NormalizationSpec {
    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn scaling(&self) -> Scaling {
        self.scaling
    }

    /// Maps a normalized point back to raw coordinates. Exact inverse for
    /// non-constant dimensions; constant dimensions recover their min.
    pub fn denormalize(&self, p: &Point) -> Result<Point> {
        if p.dim() != self.bounds.len() {
            return Err(Error::DimensionMismatch {
                expected: self.bounds.len(),
                got: p.dim(),
            });
        }
        let coords = p
            .coords()
            .iter()
            .zip(&self.bounds)
            .map(|(v, (mn, mx))| mn + v * (mx - mn))
            .collect();
        Point::new(coords)
    }
}

impl RawTable {
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn arity(&self) -> usize {
        self.rows[0].len()
    }

    pub fn source_path(&self) -> &str {
        &self.source_path
    }

    pub fn delimiter(&self) -> Delimiter {
        self.delimiter
    }

    /// Keeps only the given columns, in the given order. Datasets that carry
    /// a trailing ground-truth label are trimmed this way.
    pub fn select_columns(&self, columns: &[usize]) -> Result<RawTable> {
        if columns.is_empty() {
            return Err(Error::contract("column selection must be non-empty"));
        }
        let arity = self.arity();
        if let Some(bad) = columns.iter().find(|c| **c >= arity) {
            return Err(Error::config(format!(
                "column {bad} out of range for a table with {arity} columns"
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| columns.iter().map(|c| r[*c]).collect())
            .collect();
        Ok(RawTable {
            rows,
            source_path: self.source_path.clone(),
            delimiter: self.delimiter,
        })
    }

    /// Converts the rows into a `Dataset` without rescaling.
    pub fn to_dataset(&self) -> Result<Dataset> {
        let points = self
            .rows
            .iter()
            .map(|r| Point::new(r.clone()))
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(points)
    }
}

fn split_line(line: &str, delimiter: Delimiter) -> Vec<&str> {
    match delimiter {
        Delimiter::Whitespace => line.split_whitespace().collect(),
        Delimiter::Comma => line.split(',').map(str::trim).collect(),
    }
}

fn parse_rows(text: &str, path: &str, delimiter: Delimiter) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut arity = None;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields = split_line(line, delimiter);
        let mut row = Vec::with_capacity(fields.len());
        for field in &fields {
            let value: f64 = field.parse().map_err(|_| Error::Parse {
                path: path.to_string(),
                line: line_no,
                message: format!("non-numeric field {field:?}"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    path: path.to_string(),
                    line: line_no,
                    message: format!("non-finite value {field:?}"),
                });
            }
            row.push(value);
        }
        match arity {
            None => arity = Some(row.len()),
            Some(a) if a != row.len() => {
                return Err(Error::Parse {
                    path: path.to_string(),
                    line: line_no,
                    message: format!("expected {a} fields, found {}", row.len()),
                });
            }
            _ => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            path: path.to_string(),
            line: 1,
            message: "file contains no data rows".to_string(),
        });
    }
    Ok(rows)
}

/// Loads a point file: one point per non-blank line, fields separated by
/// whitespace or commas. With no explicit delimiter, whitespace is tried
/// first and commas second.
pub fn load_dataset(path: impl AsRef<Path>, delimiter: Option<Delimiter>) -> Result<RawTable> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{shown}: {e}"))))?;
    let (rows, delimiter) = match delimiter {
        Some(d) => (parse_rows(&text, &shown, d)?, d),
        None => match parse_rows(&text, &shown, Delimiter::Whitespace) {
            Ok(rows) => (rows, Delimiter::Whitespace),
            Err(ws_err) => match parse_rows(&text, &shown, Delimiter::Comma) {
                Ok(rows) => (rows, Delimiter::Comma),
                Err(_) => return Err(ws_err),
            },
        },
    };
    Ok(RawTable {
        rows,
        source_path: shown,
        delimiter,
    })
}

/// Min-max normalizes a table with independent per-dimension bounds, so every
/// non-constant dimension fills [0, 1]. Constant dimensions map to 0.
pub fn normalize(table: &RawTable) -> Result<(Dataset, NormalizationSpec)> {
    normalize_with(table, Scaling::PerDimension)
}

/// Normalizes with an explicit scaling mode. `Scaling::Global` uses one
/// min/max over the whole table, `Scaling::Raw` leaves coordinates untouched
/// (bounds are recorded as (0, 1) so denormalize is the identity).
pub fn normalize_with(table: &RawTable, scaling: Scaling) -> Result<(Dataset, NormalizationSpec)> {
    let arity = table.arity();
    let bounds: Vec<(f64, f64)> = match scaling {
        Scaling::Raw => vec![(0.0, 1.0); arity],
        Scaling::PerDimension => (0..arity)
            .map(|d| {
                let col = table.rows.iter().map(|r| r[d]);
                let mn = col.clone().fold(f64::INFINITY, f64::min);
                let mx = col.fold(f64::NEG_INFINITY, f64::max);
                (mn, mx)
            })
            .collect(),
        Scaling::Global => {
            let all = table.rows.iter().flatten().copied();
            let mn = all.clone().fold(f64::INFINITY, f64::min);
            let mx = all.fold(f64::NEG_INFINITY, f64::max);
            vec![(mn, mx); arity]
        }
    };
    let points = table
        .rows
        .iter()
        .map(|row| {
            let coords = row
                .iter()
                .zip(&bounds)
                .map(|(v, (mn, mx))| {
                    let range = mx - mn;
                    if range == 0.0 { 0.0 } else { (v - mn) / range }
                })
                .collect();
            Point::new(coords)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((Dataset::new(points)?, NormalizationSpec { bounds, scaling }))
}

/// Draws `k` isotropic Gaussian clusters inside the unit cube, with centers
/// at least `separation` apart. Returns the points and the true centers.
/// Deterministic for a given seed.
pub fn make_blobs(
    k: usize,
    points_per_cluster: usize,
    dim: usize,
    spread: f64,
    separation: f64,
    seed: u64,
) -> Result<(Dataset, Vec<Point>)> {
    if k < 1 || points_per_cluster < 1 || dim < 1 {
        return Err(Error::config("k, points_per_cluster and dim must be >= 1"));
    }
    if !(spread > 0.0) || !(separation > 0.0) {
        return Err(Error::config("spread and separation must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Uniform::new(0.0f64, 1.0).expect("valid range");

    let mut centers: Vec<Point> = Vec::with_capacity(k);
    let max_attempts = 1000 * k;
    let mut attempts = 0;
    while centers.len() < k {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::config(format!(
                "cannot place {k} centers with separation {separation} in the unit cube"
            )));
        }
        let candidate = Point::new((0..dim).map(|_| unit.sample(&mut rng)).collect())?;
        if centers.iter().all(|c| c.distance(&candidate) >= separation) {
            centers.push(candidate);
        }
    }

    let noise = Normal::new(0.0f64, spread).map_err(|_| Error::config("invalid spread"))?;
    let mut points = Vec::with_capacity(k * points_per_cluster);
    for center in &centers {
        for _ in 0..points_per_cluster {
            let coords = center
                .coords()
                .iter()
                .map(|c| c + noise.sample(&mut rng))
                .collect();
            points.push(Point::new(coords)?);
        }
    }
    Ok((Dataset::new(points)?, centers))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn loads_whitespace_file() {
        let f = write_temp("1.0 2.0\n3.5\t4.5\n\n5 6\n");
        let t = load_dataset(f.path(), None).unwrap();
        assert_eq!(t.n_rows(), 3);
        assert_eq!(t.arity(), 2);
        assert_eq!(t.delimiter(), Delimiter::Whitespace);
        assert_eq!(t.rows()[1], vec![3.5, 4.5]);
    }

    #[test]
    fn auto_detects_comma_delimiter() {
        let f = write_temp("1.0,2.0\n3.0,4.0\n");
        let t = load_dataset(f.path(), None).unwrap();
        assert_eq!(t.delimiter(), Delimiter::Comma);
        assert_eq!(t.n_rows(), 2);
    }

    #[test]
    fn ragged_rows_report_line_number() {
        let f = write_temp("1.0 2.0\n1.0 2.0 3.0\n");
        let err = load_dataset(f.path(), None).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn non_numeric_field_reports_line_number() {
        let f = write_temp("1.0 2.0\n3.0 oops\n5.0 6.0\n");
        let err = load_dataset(f.path(), Some(Delimiter::Whitespace)).unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("oops"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            load_dataset("/definitely/not/here.txt", None),
            Err(Error::Io(_))
        ));
    }

    #[test]
    fn column_selection_drops_labels() {
        let f = write_temp("1.0 2.0 7\n3.0 4.0 7\n");
        let t = load_dataset(f.path(), None).unwrap();
        let sel = t.select_columns(&[0, 1]).unwrap();
        assert_eq!(sel.arity(), 2);
        assert_eq!(sel.rows()[0], vec![1.0, 2.0]);
        assert!(t.select_columns(&[3]).is_err());
        assert!(t.select_columns(&[]).is_err());
    }

    #[test]
    fn per_dimension_normalization_hits_unit_corners() {
        let f = write_temp("0 10\n10 20\n");
        let t = load_dataset(f.path(), None).unwrap();
        let (ds, spec) = normalize(&t).unwrap();
        assert_eq!(ds.points()[0].coords(), &[0.0, 0.0]);
        assert_eq!(ds.points()[1].coords(), &[1.0, 1.0]);
        assert_eq!(spec.bounds(), &[(0.0, 10.0), (10.0, 20.0)]);
    }

    #[test]
    fn constant_dimension_maps_to_zero() {
        let f = write_temp("5 1\n5 2\n");
        let t = load_dataset(f.path(), None).unwrap();
        let (ds, _) = normalize(&t).unwrap();
        assert_eq!(ds.points()[0].coords()[0], 0.0);
        assert_eq!(ds.points()[1].coords()[0], 0.0);
    }

    #[test]
    fn global_scaling_preserves_aspect_ratio() {
        let f = write_temp("0 0\n100 50\n");
        let t = load_dataset(f.path(), None).unwrap();
        let (ds, _) = normalize_with(&t, Scaling::Global).unwrap();
        assert_eq!(ds.points()[1].coords(), &[1.0, 0.5]);
    }

    #[test]
    fn denormalize_round_trips_non_constant_dims() {
        let f = write_temp("1.5 -3.0\n4.5 9.0\n2.25 1.0\n");
        let t = load_dataset(f.path(), None).unwrap();
        for scaling in [Scaling::PerDimension, Scaling::Global, Scaling::Raw] {
            let (ds, spec) = normalize_with(&t, scaling).unwrap();
            for (point, row) in ds.points().iter().zip(t.rows()) {
                let back = spec.denormalize(point).unwrap();
                for (b, r) in back.coords().iter().zip(row) {
                    assert!((b - r).abs() <= 1e-12, "{scaling:?}: {b} vs {r}");
                }
            }
        }
    }

    #[test]
    fn normalized_output_stays_in_unit_range() {
        let f = write_temp("-5 100\n3 -40\n8 0\n");
        let t = load_dataset(f.path(), None).unwrap();
        for scaling in [Scaling::PerDimension, Scaling::Global] {
            let (ds, _) = normalize_with(&t, scaling).unwrap();
            for p in ds.points() {
                for c in p.coords() {
                    assert!((0.0..=1.0).contains(c));
                }
            }
        }
    }

    #[test]
    fn blobs_are_deterministic_and_separated() {
        let (d1, c1) = make_blobs(3, 10, 2, 0.01, 0.4, 7).unwrap();
        let (d2, c2) = make_blobs(3, 10, 2, 0.01, 0.4, 7).unwrap();
        assert_eq!(d1, d2);
        assert_eq!(c1, c2);
        assert_eq!(d1.len(), 30);
        for (i, a) in c1.iter().enumerate() {
            for b in &c1[i + 1..] {
                assert!(a.distance(b) >= 0.4);
            }
        }
    }

    #[test]
    fn single_blob_stays_near_its_center() {
        let (ds, centers) = make_blobs(1, 500, 2, 0.02, 0.1, 11).unwrap();
        let c = &centers[0];
        let within = ds
            .points()
            .iter()
            .filter(|p| p.distance(c) <= 4.0 * 0.02 * 1.5)
            .count();
        assert!(
            within == ds.len(),
            "{}/{} points near center",
            within,
            ds.len()
        );
    }

    #[test]
    fn infeasible_separation_is_rejected() {
        assert!(make_blobs(50, 1, 1, 0.01, 0.9, 0).is_err());
    }
}
