use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::SkeletonGraph;
use crate::error::{Error, Result};
use crate::filtration::alpha_filtration;
use crate::geometry::segment::{distance, Segment};
use crate::geometry::{delaunay, Point2, PointCloud};
use crate::persistence::{compute_persistence, Dot};

/// Sample points per unit length used when no density is given.
pub const DEFAULT_THICKNESS_DENSITY: f64 = 1000.0;

/// Thickness of an embedded graph, estimated from a dense sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThicknessReport {
    /// Largest persistence of a hole born after the graph itself is covered.
    pub thickness: f64,
    /// Largest death of any hole, the radius of the widest cycle.
    pub max_radius: f64,
    /// Deaths of the holes present from the start, ascending, with multiplicity.
    pub deaths: Vec<f64>,
    /// Dots born after `birth_tolerance`; these decide the thickness.
    pub witnesses: Vec<Dot>,
    pub density: f64,
    /// Births up to this value count as born at zero: the sample is only
    /// connected along the graph once edges of the sample spacing appear.
    pub birth_tolerance: f64,
}

/// Every vertex once plus evenly spaced interior points on each edge, with
/// spacing at most `1 / density`.
pub fn sample_graph(segments: &[Segment], density: f64) -> Vec<Point2> {
    let mut seen = HashSet::new();
    let mut points = Vec::new();
    let mut add = |p: Point2, points: &mut Vec<Point2>| {
        if seen.insert((p[0].to_bits(), p[1].to_bits())) {
            points.push(p);
        }
    };
    for s in segments {
        add(s[0], &mut points);
        add(s[1], &mut points);
    }
    for s in segments {
        let pieces = (distance(s[0], s[1]) * density).ceil().max(1.0) as usize;
        for i in 1..pieces {
            let t = i as f64 / pieces as f64;
            add([s[0][0] + t * (s[1][0] - s[0][0]), s[0][1] + t * (s[1][1] - s[0][1])], &mut points);
        }
    }
    points
}

/// Samples `g` at `density` points per unit length, builds the alpha
/// filtration of the sample and reads the holes off its diagram.
pub fn graph_thickness(g: &SkeletonGraph, density: f64) -> Result<ThicknessReport> {
    if !(density > 0.0) {
        return Err(Error::InvalidParameter(format!("sample density must be positive, got {density}")));
    }
    let segments = g.segments();
    if segments.is_empty() {
        return Err(Error::InvalidParameter("thickness needs an embedded graph with edges".into()));
    }
    let points = sample_graph(&segments, density);
    let cloud = PointCloud::from_points(&points)?;
    let persistence = compute_persistence(&alpha_filtration(&delaunay(&cloud)?));
    let birth_tolerance = 1.0 / density;

    let mut deaths = Vec::new();
    let mut witnesses = Vec::new();
    for dot in persistence.pd1.finite_dots() {
        if dot.birth > birth_tolerance {
            witnesses.push(*dot);
        } else {
            deaths.extend(std::iter::repeat(dot.death).take(dot.multiplicity));
        }
    }
    deaths.sort_by(f64::total_cmp);
    Ok(ThicknessReport {
        thickness: witnesses.iter().map(Dot::persistence).fold(0.0, f64::max),
        max_radius: persistence.pd1.finite_dots().map(|d| d.death).fold(0.0, f64::max),
        deaths,
        witnesses,
        density,
        birth_tolerance,
    })
}
