//! Point clouds, planar Delaunay triangulations and neighbourhood graphs.
//!
//! A [`PointCloud`] is either a list of coordinates in `R^d` or a symmetric
//! distance matrix. Coordinate clouds in the plane feed the Delaunay and
//! alpha-complex path; matrix clouds only support Vietoris–Rips filtrations.

mod delaunay;
mod neighbourhood;
pub mod segment;

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, MetricViolation, Result};

pub use delaunay::{delaunay, circumradius, doubled_area, TriEdge, TriFace, Triangulation};
pub use neighbourhood::{neighbourhood_graph, MetricGraph};

/// A point in the plane.
pub type Point2 = [f64; 2];

/// Tolerance shared by every geometric predicate and metric-axiom check.
pub const GEOMETRIC_TOLERANCE: f64 = 1e-9;

/// How a cloud file is laid out on disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CloudFormat {
    /// One point per line, comma-separated coordinates.
    CsvCoords,
    /// `n` lines of `n` comma-separated distances.
    CsvMatrix,
}

impl std::str::FromStr for CloudFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv-coords" | "coords" => Ok(Self::CsvCoords),
            "csv-matrix" | "matrix" => Ok(Self::CsvMatrix),
            other => Err(Error::InvalidParameter(format!("unknown cloud format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    Coordinates { dim: usize, coords: Vec<f64> },
    Matrix { dist: Vec<f64> },
}

/// A finite metric space: coordinates in `R^d` or a validated distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    n: usize,
    storage: Storage,
}

impl PointCloud {
    /// Builds a cloud from row-major coordinates of dimension `dim`.
    pub fn from_coords(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("point dimension must be at least 1".into()));
        }
        if coords.is_empty() || coords.len() % dim != 0 {
            return Err(Error::InvalidParameter(format!(
                "{} coordinates do not form a non-empty list of {dim}-dimensional points",
                coords.len()
            )));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "coordinate {} of point {} is not finite",
                i % dim,
                i / dim
            )));
        }
        Ok(Self {
            n: coords.len() / dim,
            storage: Storage::Coordinates { dim, coords },
        })
    }

    /// Builds a planar cloud.
    pub fn from_points(points: &[Point2]) -> Result<Self> {
        Self::from_coords(2, points.iter().flat_map(|p| p.iter().copied()).collect())
    }

    /// Builds a cloud from a row-major `n x n` distance matrix, checking the
    /// metric axioms within [`GEOMETRIC_TOLERANCE`].
    pub fn from_distance_matrix(n: usize, dist: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("a cloud needs at least one point".into()));
        }
        if dist.len() != n * n {
            return Err(Error::NotSquare { rows: n, row: 0, cols: dist.len() / n.max(1) });
        }
        check_metric(n, &dist).map_err(Error::Metric)?;
        Ok(Self { n, storage: Storage::Matrix { dist } })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Ambient dimension, `None` for distance-matrix clouds.
    pub fn dim(&self) -> Option<usize> {
        match &self.storage {
            Storage::Coordinates { dim, .. } => Some(*dim),
            Storage::Matrix { .. } => None,
        }
    }

    pub fn is_matrix(&self) -> bool {
        matches!(self.storage, Storage::Matrix { .. })
    }

    pub fn is_planar(&self) -> bool {
        self.dim() == Some(2)
    }

    /// Coordinates of point `i`; empty for matrix clouds.
    pub fn point(&self, i: usize) -> &[f64] {
        match &self.storage {
            Storage::Coordinates { dim, coords } => &coords[i * dim..(i + 1) * dim],
            Storage::Matrix { .. } => &[],
        }
    }

    /// Planar coordinates of point `i`.
    pub fn point2(&self, i: usize) -> Option<Point2> {
        match &self.storage {
            Storage::Coordinates { dim: 2, coords } => Some([coords[2 * i], coords[2 * i + 1]]),
            _ => None,
        }
    }

    /// All points as planar coordinates, or an error for other clouds.
    pub fn points2(&self) -> Result<Vec<Point2>> {
        match &self.storage {
            Storage::Coordinates { dim: 2, coords } => {
                Ok(coords.chunks_exact(2).map(|c| [c[0], c[1]]).collect())
            }
            Storage::Coordinates { dim, .. } => Err(Error::NotPlanar(format!("{dim}-dimensional points"))),
            Storage::Matrix { .. } => Err(Error::NotPlanar("a distance matrix".into())),
        }
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        match &self.storage {
            Storage::Coordinates { dim: 2, coords } => {
                let dx = coords[2 * i] - coords[2 * j];
                let dy = coords[2 * i + 1] - coords[2 * j + 1];
                (dx * dx + dy * dy).sqrt()
            }
            Storage::Coordinates { dim, coords } => {
                let (a, b) = (&coords[i * dim..(i + 1) * dim], &coords[j * dim..(j + 1) * dim]);
                a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
            }
            Storage::Matrix { dist } => dist[i * self.n + j],
        }
    }

    /// Largest pairwise distance, found by a quadratic scan.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                best = best.max(self.dist(i, j));
            }
        }
        best
    }

    /// Writes the cloud in `format`. Coordinate clouds can only be written as
    /// coordinates; matrix clouds only as matrices.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        match &self.storage {
            Storage::Coordinates { dim, coords } => {
                for row in coords.chunks_exact(*dim) {
                    write_row(&mut out, row)?;
                }
            }
            Storage::Matrix { dist } => {
                for row in dist.chunks_exact(self.n) {
                    write_row(&mut out, row)?;
                }
            }
        }
        Ok(())
    }
}

fn write_row<W: Write>(out: &mut W, row: &[f64]) -> Result<()> {
    let line = row.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
    writeln!(out, "{line}")?;
    Ok(())
}

fn check_metric(n: usize, d: &[f64]) -> Result<(), MetricViolation> {
    let tol = GEOMETRIC_TOLERANCE;
    for i in 0..n {
        for j in 0..n {
            let v = d[i * n + j];
            if !v.is_finite() {
                return Err(MetricViolation::NotFinite { i, j });
            }
            if i == j && v.abs() > tol {
                return Err(MetricViolation::NonZeroDiagonal { i, value: v });
            }
            if i != j && v <= 0.0 {
                return Err(MetricViolation::NonPositive { i, j, value: v });
            }
            if (v - d[j * n + i]).abs() > tol {
                return Err(MetricViolation::Asymmetric { i, j, dij: v, dji: d[j * n + i] });
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                let pr = d[p * n + r];
                let pq_qr = d[p * n + q] + d[q * n + r];
                if pr > pq_qr + tol {
                    return Err(MetricViolation::Triangle { p, q, r, pr, pq_qr });
                }
            }
        }
    }
    Ok(())
}

/// Reads a cloud file. Blank lines and lines starting with `#` are skipped.
pub fn load_cloud(path: &Path, format: CloudFormat) -> Result<PointCloud> {
    let text = std::fs::read_to_string(path)?;
    parse_cloud(&text, format, path)
}

/// Parses cloud text; `origin` only labels error messages.
pub fn parse_cloud(text: &str, format: CloudFormat, origin: &Path) -> Result<PointCloud> {
    let parse_err = |line: usize, msg: String| Error::Parse { path: origin.to_path_buf(), line, msg };
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let values = line
            .split(',')
            .map(|field| {
                field
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| parse_err(idx + 1, format!("`{}`: {e}", field.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((idx + 1, values));
    }
    if rows.is_empty() {
        return Err(parse_err(0, "no points".into()));
    }
    match format {
        CloudFormat::CsvCoords => {
            let dim = rows[0].1.len();
            let mut coords = Vec::with_capacity(rows.len() * dim);
            for (line, row) in &rows {
                if row.len() != dim {
                    return Err(parse_err(*line, format!("expected {dim} coordinates, found {}", row.len())));
                }
                coords.extend_from_slice(row);
            }
            PointCloud::from_coords(dim, coords)
        }
        CloudFormat::CsvMatrix => {
            let n = rows.len();
            let mut dist = Vec::with_capacity(n * n);
            for (r, (_, row)) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::NotSquare { rows: n, row: r, cols: row.len() });
                }
                dist.extend_from_slice(row);
            }
            PointCloud::from_distance_matrix(n, dist)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, format: CloudFormat) -> Result<PointCloud> {
        parse_cloud(text, format, Path::new("test.csv"))
    }

    #[test]
    fn two_point_file() {
        let cloud = parse("0,0\n1,0\n", CloudFormat::CsvCoords).unwrap();
        assert_eq!(cloud.len(), 2);
        assert_eq!(cloud.dim(), Some(2));
        assert_eq!(cloud.dist(0, 1), 1.0);
    }

    #[test]
    fn triangle_inequality_violation_names_the_triple() {
        // d(0,2) = 5 > d(0,1) + d(1,2) = 2
        let err = parse("0,1,5\n1,0,1\n5,1,0\n", CloudFormat::CsvMatrix).unwrap_err();
        match err {
            Error::Metric(MetricViolation::Triangle { p, q, r, .. }) => {
                assert_eq!((p, q, r), (0, 1, 2));
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn matrix_must_be_square() {
        let err = parse("0,1\n1,0,2\n", CloudFormat::CsvMatrix).unwrap_err();
        assert!(matches!(err, Error::NotSquare { row: 1, cols: 3, .. }));
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let err = parse("0,1\n2,0\n", CloudFormat::CsvMatrix).unwrap_err();
        assert!(matches!(err, Error::Metric(MetricViolation::Asymmetric { .. })));
    }

    #[test]
    fn ragged_coordinates_rejected() {
        let err = parse("0,0\n1\n", CloudFormat::CsvCoords).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn comments_are_skipped() {
        let cloud = parse("# header\n\n0.5,1\n", CloudFormat::CsvCoords).unwrap();
        assert_eq!(cloud.point(0), &[0.5, 1.0]);
    }
}
