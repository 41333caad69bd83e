//! Filtrations `{Q(C; alpha)}` stored as ordered simplex lists of dimension at
//! most 2.
//!
//! Every value is an offset radius: an edge of length `l` enters at `l / 2`,
//! so the skeleton length of an edge is twice its filtration value.

use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{PointCloud, Triangulation};

/// A vertex, edge or triangle with the scale at which it enters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Simplex {
    vertices: [usize; 3],
    dim: u8,
    pub value: f64,
}

impl Simplex {
    pub fn vertex(v: usize) -> Self {
        Self { vertices: [v, usize::MAX, usize::MAX], dim: 0, value: 0.0 }
    }

    pub fn edge(a: usize, b: usize, value: f64) -> Self {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        Self { vertices: [a, b, usize::MAX], dim: 1, value }
    }

    pub fn triangle(a: usize, b: usize, c: usize, value: f64) -> Self {
        let mut v = [a, b, c];
        v.sort_unstable();
        Self { vertices: v, dim: 2, value }
    }

    /// Sorted vertex indices.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices[..=self.dim as usize]
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    fn key(&self) -> (u8, [usize; 3]) {
        (self.dim, self.vertices)
    }

    /// Keys of the codimension-one faces.
    fn facet_keys(&self) -> Vec<(u8, [usize; 3])> {
        let v = self.vertices;
        match self.dim {
            0 => Vec::new(),
            1 => vec![Simplex::vertex(v[0]).key(), Simplex::vertex(v[1]).key()],
            _ => vec![
                Simplex::edge(v[0], v[1], 0.0).key(),
                Simplex::edge(v[0], v[2], 0.0).key(),
                Simplex::edge(v[1], v[2], 0.0).key(),
            ],
        }
    }
}

/// Which complex the filtration was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiltrationKind {
    Alpha,
    Rips,
    /// Assembled by hand through [`Filtration::from_ordered`].
    Custom,
}

impl std::fmt::Display for FiltrationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Alpha => "alpha",
            Self::Rips => "rips",
            Self::Custom => "custom",
        })
    }
}

/// A validated filtration: faces precede cofaces and never enter later.
#[derive(Debug, Clone)]
pub struct Filtration {
    simplices: Vec<Simplex>,
    kind: FiltrationKind,
    max_scale: f64,
    vertex_count: usize,
    boundaries: Vec<Vec<usize>>,
}

impl Filtration {
    /// Sorts `simplices` by `(value, dim, vertices)` and validates the result.
    pub fn new(
        kind: FiltrationKind,
        vertex_count: usize,
        mut simplices: Vec<Simplex>,
        max_scale: f64,
    ) -> Result<Self> {
        simplices.sort_by(|a, b| {
            a.value
                .total_cmp(&b.value)
                .then(a.dim.cmp(&b.dim))
                .then(a.vertices.cmp(&b.vertices))
        });
        Self::from_ordered(kind, vertex_count, simplices, max_scale)
    }

    /// Keeps the given order; fails when a simplex precedes one of its faces
    /// or enters before it.
    pub fn from_ordered(
        kind: FiltrationKind,
        vertex_count: usize,
        simplices: Vec<Simplex>,
        max_scale: f64,
    ) -> Result<Self> {
        let mut position: HashMap<(u8, [usize; 3]), usize> = HashMap::with_capacity(simplices.len());
        let mut boundaries = Vec::with_capacity(simplices.len());
        for (i, s) in simplices.iter().enumerate() {
            let bad = |reason: String| Error::NonMonotone { position: i, reason };
            if !(s.value >= 0.0) {
                return Err(bad(format!("value {} is negative or NaN", s.value)));
            }
            if s.vertices().iter().any(|&v| v >= vertex_count) {
                return Err(bad(format!("vertex out of range in {:?}", s.vertices())));
            }
            if s.dim == 0 && s.value != 0.0 {
                return Err(bad(format!("vertex {} enters at {} instead of 0", s.vertices[0], s.value)));
            }
            let mut column = Vec::with_capacity(3);
            for key in s.facet_keys() {
                let &j = position
                    .get(&key)
                    .ok_or_else(|| bad(format!("face {:?} of {:?} is missing or later", face_label(key), s.vertices())))?;
                if simplices[j].value > s.value {
                    return Err(bad(format!(
                        "face {:?} enters at {} after {:?} at {}",
                        face_label(key),
                        simplices[j].value,
                        s.vertices(),
                        s.value
                    )));
                }
                column.push(j);
            }
            column.sort_unstable();
            if position.insert(s.key(), i).is_some() {
                return Err(bad(format!("simplex {:?} listed twice", s.vertices())));
            }
            boundaries.push(column);
        }
        Ok(Self { simplices, kind, max_scale, vertex_count, boundaries })
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn kind(&self) -> FiltrationKind {
        self.kind
    }

    /// Scale cap for Rips filtrations, the largest value otherwise.
    pub fn max_scale(&self) -> f64 {
        self.max_scale
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Filtration positions of the codimension-one faces of simplex `i`, ascending.
    pub fn boundary(&self, i: usize) -> &[usize] {
        &self.boundaries[i]
    }

    /// Number of leading simplices with value at most `alpha`: the complex `Q(C; alpha)`.
    pub fn prefix_len(&self, alpha: f64) -> usize {
        self.simplices.partition_point(|s| s.value <= alpha)
    }

    /// Writes one simplex per line as `value,dim,v0[,v1[,v2]]`.
    pub fn write_dump<W: Write>(&self, mut out: W) -> Result<()> {
        for s in &self.simplices {
            let verts = s.vertices().iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            writeln!(out, "{},{},{}", s.value, s.dim, verts)?;
        }
        Ok(())
    }
}

fn face_label(key: (u8, [usize; 3])) -> Vec<usize> {
    key.1[..=key.0 as usize].to_vec()
}

/// The alpha-complex filtration of a planar Delaunay triangulation.
///
/// Triangles enter at their circumradius. An edge enters at half its length
/// when its diametral disc holds no opposite vertex of an incident triangle,
/// and otherwise together with its smallest incident triangle.
pub fn alpha_filtration(tri: &Triangulation) -> Filtration {
    let n = tri.vertex_count();
    let mut incident: HashMap<[usize; 2], (f64, bool)> =
        tri.edges.iter().map(|e| (e.vertices, (f64::INFINITY, false))).collect();
    for t in &tri.triangles {
        let v = t.vertices;
        for (a, b, c) in [(v[0], v[1], v[2]), (v[0], v[2], v[1]), (v[1], v[2], v[0])] {
            let entry = incident.entry([a, b]).or_insert((f64::INFINITY, false));
            entry.0 = entry.0.min(t.circumradius);
            let (pa, pb, pc) = (tri.points[a], tri.points[b], tri.points[c]);
            // c lies strictly inside the diametral disc of ab iff the angle at c is obtuse
            let dot = (pa[0] - pc[0]) * (pb[0] - pc[0]) + (pa[1] - pc[1]) * (pb[1] - pc[1]);
            if dot < 0.0 {
                entry.1 = true;
            }
        }
    }

    let mut simplices = Vec::with_capacity(n + tri.edges.len() + tri.triangles.len());
    simplices.extend((0..n).map(Simplex::vertex));
    for e in &tri.edges {
        let (min_face, attached) = incident[&e.vertices];
        let value = if attached { min_face } else { e.circumradius.min(min_face) };
        simplices.push(Simplex::edge(e.vertices[0], e.vertices[1], value));
    }
    for t in &tri.triangles {
        let [a, b, c] = t.vertices;
        simplices.push(Simplex::triangle(a, b, c, t.circumradius));
    }
    let max_value = simplices.iter().map(|s| s.value).fold(0.0, f64::max);
    Filtration::new(FiltrationKind::Alpha, n, simplices, max_value)
        .expect("alpha values are monotone by construction")
}

/// The Vietoris–Rips filtration up to dimension 2, truncated at `max_scale`.
/// Edges enter at half the distance, triangles with their longest edge.
pub fn rips_filtration(cloud: &PointCloud, max_scale: f64) -> Result<Filtration> {
    if !(max_scale > 0.0) {
        return Err(Error::InvalidParameter(format!("Rips scale cap must be positive, got {max_scale}")));
    }
    let n = cloud.len();
    let mut half = vec![f64::INFINITY; n * n];
    let mut simplices: Vec<Simplex> = (0..n).map(Simplex::vertex).collect();
    for u in 0..n {
        for v in u + 1..n {
            let value = cloud.dist(u, v) / 2.0;
            if value <= max_scale {
                half[u * n + v] = value;
                simplices.push(Simplex::edge(u, v, value));
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let ab = half[a * n + b];
            if ab > max_scale {
                continue;
            }
            for c in b + 1..n {
                let value = ab.max(half[a * n + c]).max(half[b * n + c]);
                if value <= max_scale {
                    simplices.push(Simplex::triangle(a, b, c, value));
                }
            }
        }
    }
    Filtration::new(FiltrationKind::Rips, n, simplices, max_scale)
}
