use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::segment::{distance, Segment};
use crate::geometry::Point2;
use crate::hopes::{Provenance, SkeletonEdge, SkeletonGraph, SkeletonVertex, UnionFind};

/// The three pattern families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatternKind {
    /// Centre joined to `k` rim vertices on the unit circle, rim closed into a cycle.
    Wheel(usize),
    /// Integer lattice on `[0, k] x [0, l]`.
    Grid(usize, usize),
    /// `k` unit hexagons added around the first one, ring by ring.
    Hexagons(usize),
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Wheel(k) => write!(f, "wheel:{k}"),
            Self::Grid(k, l) => write!(f, "grid:{k}x{l}"),
            Self::Hexagons(k) => write!(f, "hexagons:{k}"),
        }
    }
}

impl FromStr for PatternKind {
    type Err = Error;

    /// Accepts `wheel:5`, `grid:3x2` (or `grid:3,2`) and `hexagons:6` (or `hex:6`).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse pattern `{s}`"));
        let (name, args) = s.split_once(':').ok_or_else(bad)?;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        match name.trim() {
            "wheel" => Ok(Self::Wheel(num(args)?)),
            "grid" => {
                let (k, l) = args.split_once(['x', ',']).ok_or_else(bad)?;
                Ok(Self::Grid(num(k)?, num(l)?))
            }
            "hexagons" | "hex" => Ok(Self::Hexagons(num(args)?)),
            _ => Err(bad()),
        }
    }
}

/// A straight-line planar graph.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedGraph {
    pub vertices: Vec<Point2>,
    pub edges: Vec<[usize; 2]>,
}

impl EmbeddedGraph {
    pub fn edge_length(&self, e: usize) -> f64 {
        let [u, v] = self.edges[e];
        distance(self.vertices[u], self.vertices[v])
    }

    pub fn total_length(&self) -> f64 {
        (0..self.edges.len()).map(|e| self.edge_length(e)).sum()
    }

    /// Unit vector from the first to the second endpoint of edge `e`, and
    /// the unit vector to its left.
    pub fn frame(&self, e: usize) -> (Point2, Point2) {
        let [u, v] = self.edges[e];
        let (a, b) = (self.vertices[u], self.vertices[v]);
        let len = distance(a, b);
        let along = [(b[0] - a[0]) / len, (b[1] - a[1]) / len];
        (along, [-along[1], along[0]])
    }

    pub fn segments(&self) -> Vec<Segment> {
        self.edges.iter().map(|&[u, v]| [self.vertices[u], self.vertices[v]]).collect()
    }

    /// First Betti number `E - V + components`.
    pub fn betti_number(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices.len());
        let merges = self.edges.iter().filter(|&&[u, v]| uf.union(u, v)).count();
        self.edges.len() - merges
    }

    pub fn to_skeleton(&self, name: &str) -> SkeletonGraph {
        SkeletonGraph::new(
            self.vertices.iter().enumerate().map(|(i, &p)| SkeletonVertex::at(i, p)).collect(),
            (0..self.edges.len())
                .map(|e| SkeletonEdge::tree(self.edges[e][0], self.edges[e][1], self.edge_length(e)))
                .collect(),
            Provenance::Pattern { name: name.into() },
        )
    }
}

pub fn make_pattern(kind: PatternKind) -> Result<EmbeddedGraph> {
    match kind {
        PatternKind::Wheel(k) if k >= 3 => Ok(wheel(k)),
        PatternKind::Grid(k, l) if k >= 1 && l >= 1 => Ok(grid(k, l)),
        PatternKind::Hexagons(k) if k >= 1 => Ok(hexagons(k)),
        other => Err(Error::InvalidParameter(format!("pattern {other} is out of range"))),
    }
}

fn wheel(k: usize) -> EmbeddedGraph {
    let mut vertices = vec![[0.0, 0.0]];
    vertices.extend((0..k).map(|i| {
        let t = 2.0 * PI * i as f64 / k as f64;
        [t.cos(), t.sin()]
    }));
    let mut edges: Vec<[usize; 2]> = (1..=k).map(|i| [0, i]).collect();
    edges.extend((1..=k).map(|i| [i, i % k + 1]));
    EmbeddedGraph { vertices, edges }
}

fn grid(k: usize, l: usize) -> EmbeddedGraph {
    let index = |i: usize, j: usize| i * (l + 1) + j;
    let mut vertices = Vec::with_capacity((k + 1) * (l + 1));
    let mut edges = Vec::new();
    for i in 0..=k {
        for j in 0..=l {
            vertices.push([i as f64, j as f64]);
            if i < k {
                edges.push([index(i, j), index(i + 1, j)]);
            }
            if j < l {
                edges.push([index(i, j), index(i, j + 1)]);
            }
        }
    }
    EmbeddedGraph { vertices, edges }
}

/// Centres of the first `k` hexagons: the origin, then rings around it, each
/// ring starting straight above the origin and running clockwise.
fn hexagon_centres(k: usize) -> Vec<Point2> {
    let step = 3f64.sqrt();
    // neighbour directions clockwise from the top
    let dirs: Vec<Point2> = (0..6)
        .map(|i| {
            let t = PI / 2.0 - PI / 3.0 * i as f64;
            [step * t.cos(), step * t.sin()]
        })
        .collect();
    let mut centres = vec![[0.0, 0.0]];
    let mut ring = 1;
    while centres.len() < k {
        let mut c = [dirs[0][0] * ring as f64, dirs[0][1] * ring as f64];
        for side in 0..6 {
            let d = dirs[(side + 2) % 6];
            for _ in 0..ring {
                centres.push(c);
                c = [c[0] + d[0], c[1] + d[1]];
            }
        }
        ring += 1;
    }
    centres.truncate(k);
    centres
}

fn hexagons(k: usize) -> EmbeddedGraph {
    let mut vertices: Vec<Point2> = Vec::new();
    let mut by_position: HashMap<(i64, i64), usize> = HashMap::new();
    let mut edges: Vec<[usize; 2]> = Vec::new();
    let mut seen_edges = std::collections::HashSet::new();
    let mut vertex = |p: Point2, vertices: &mut Vec<Point2>| {
        let key = ((p[0] * 1e6).round() as i64, (p[1] * 1e6).round() as i64);
        *by_position.entry(key).or_insert_with(|| {
            vertices.push(p);
            vertices.len() - 1
        })
    };
    for c in hexagon_centres(k) {
        let corners: Vec<usize> = (0..6)
            .map(|m| {
                let t = PI / 3.0 * m as f64;
                vertex([c[0] + t.cos(), c[1] + t.sin()], &mut vertices)
            })
            .collect();
        for m in 0..6 {
            let (a, b) = (corners[m], corners[(m + 1) % 6]);
            if seen_edges.insert((a.min(b), a.max(b))) {
                edges.push([a, b]);
            }
        }
    }
    EmbeddedGraph { vertices, edges }
}
