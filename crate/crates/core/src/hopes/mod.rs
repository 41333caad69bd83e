//! The homologically persistent skeleton: a minimum spanning tree plus the
//! critical edges that create lasting cycles, and the subgraphs selected by
//! scale or by persistence gaps.

mod prune;
mod simplify;
mod thickness;

use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::filtration::{alpha_filtration, rips_filtration, Filtration};
use crate::geometry::segment::Segment;
use crate::geometry::{delaunay, Point2, PointCloud};
use crate::persistence::{compute_persistence, GapDecomposition, Persistence};

pub use prune::prune_degree_one;
pub use simplify::simplify;
pub use thickness::{graph_thickness, sample_graph, ThicknessReport, DEFAULT_THICKNESS_DENSITY};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkeletonVertex {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
}

impl SkeletonVertex {
    pub fn at(id: usize, p: Point2) -> Self {
        Self { id, x: Some(p[0]), y: Some(p[1]) }
    }

    pub fn position(&self) -> Option<Point2> {
        Some([self.x?, self.y?])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Tree,
    Critical,
}

/// An undirected edge between vertex ids. Critical edges carry the
/// `(birth, death)` label of the cycle they create.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkeletonEdge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
    pub kind: EdgeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub birth: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub death: Option<f64>,
}

impl SkeletonEdge {
    pub fn tree(u: usize, v: usize, length: f64) -> Self {
        Self { u, v, length, kind: EdgeKind::Tree, birth: None, death: None }
    }

    pub fn critical(u: usize, v: usize, length: f64, birth: f64, death: f64) -> Self {
        Self { u, v, length, kind: EdgeKind::Critical, birth: Some(birth), death: Some(death) }
    }

    /// Filtration scale at which the edge appears: half its length.
    pub fn scale(&self) -> f64 {
        self.length / 2.0
    }
}

/// Where a skeleton came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Hopes { filtration: String },
    Reduced { alpha: f64 },
    Derived { k: usize, l: usize, scale: Option<f64> },
    Pruned { from: Box<Provenance> },
    Simplified { epsilon: f64, from: Box<Provenance> },
    Mapper { intervals: usize, overlap: f64, eps: f64, min_points: usize },
    AlphaReeb { alpha: f64, graph_eps: f64 },
    Pattern { name: String },
}

/// An embedded graph: the output format of every skeletonisation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkeletonGraph {
    pub vertices: Vec<SkeletonVertex>,
    pub edges: Vec<SkeletonEdge>,
    pub provenance: Provenance,
}

impl SkeletonGraph {
    pub fn new(vertices: Vec<SkeletonVertex>, edges: Vec<SkeletonEdge>, provenance: Provenance) -> Self {
        Self { vertices, edges, provenance }
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn critical_edges(&self) -> impl Iterator<Item = &SkeletonEdge> {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Critical)
    }

    pub fn tree_edges(&self) -> impl Iterator<Item = &SkeletonEdge> {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Tree)
    }

    /// Position of every vertex by id.
    pub fn positions(&self) -> HashMap<usize, Point2> {
        self.vertices.iter().filter_map(|v| Some((v.id, v.position()?))).collect()
    }

    /// Straight-line edges; empty when the vertices have no coordinates.
    pub fn segments(&self) -> Vec<Segment> {
        let pos = self.positions();
        self.edges
            .iter()
            .filter_map(|e| Some([*pos.get(&e.u)?, *pos.get(&e.v)?]))
            .collect()
    }

    /// Positions of vertices without incident edges.
    pub fn isolated_points(&self) -> Vec<Point2> {
        let mut touched = std::collections::HashSet::new();
        for e in &self.edges {
            touched.insert(e.u);
            touched.insert(e.v);
        }
        self.vertices
            .iter()
            .filter(|v| !touched.contains(&v.id))
            .filter_map(SkeletonVertex::position)
            .collect()
    }

    /// Number of connected components, counting isolated vertices.
    pub fn component_count(&self) -> usize {
        let index: HashMap<usize, usize> = self.vertices.iter().enumerate().map(|(i, v)| (v.id, i)).collect();
        let mut uf = UnionFind::new(self.vertices.len());
        let mut count = self.vertices.len();
        for e in &self.edges {
            if uf.union(index[&e.u], index[&e.v]) {
                count -= 1;
            }
        }
        count
    }

    /// Writes the skeleton as pretty JSON, optionally under a `meta` header.
    pub fn write_json<W: Write>(&self, out: W, meta: Option<&serde_json::Value>) -> Result<()> {
        let mut value = serde_json::to_value(self)?;
        if let (Some(meta), Some(obj)) = (meta, value.as_object_mut()) {
            obj.insert("meta".into(), meta.clone());
        }
        serde_json::to_writer_pretty(out, &value)?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Disjoint sets over `0..n` with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false when they were already one.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

fn cloud_vertices(n: usize, coords: Option<&[Point2]>) -> Vec<SkeletonVertex> {
    (0..n)
        .map(|i| match coords {
            Some(c) => SkeletonVertex::at(i, c[i]),
            None => SkeletonVertex { id: i, x: None, y: None },
        })
        .collect()
}

/// Spanning forest of the filtration's edges taken in filtration order: the
/// edges that merge components, which are exactly the H0 destroyers.
/// Lengths are twice the filtration values.
pub fn minimum_spanning_tree(f: &Filtration, coords: Option<&[Point2]>) -> SkeletonGraph {
    let mut uf = UnionFind::new(f.vertex_count());
    let edges = f
        .simplices()
        .iter()
        .filter(|s| s.dim() == 1)
        .filter(|s| uf.union(s.vertices()[0], s.vertices()[1]))
        .map(|s| SkeletonEdge::tree(s.vertices()[0], s.vertices()[1], 2.0 * s.value))
        .collect();
    SkeletonGraph::new(
        cloud_vertices(f.vertex_count(), coords),
        edges,
        Provenance::Hopes { filtration: f.kind().to_string() },
    )
}

/// HoPeS of a filtration from an already computed persistence.
pub fn hopes_from_persistence(f: &Filtration, persistence: &Persistence, coords: Option<&[Point2]>) -> SkeletonGraph {
    let simplices = f.simplices();
    let mut edges: Vec<SkeletonEdge> = persistence
        .pairing
        .merging_edges()
        .map(|i| {
            let s = &simplices[i];
            SkeletonEdge::tree(s.vertices()[0], s.vertices()[1], 2.0 * s.value)
        })
        .collect();
    edges.extend(persistence.pairing.critical_pairs().map(|p| {
        let s = &simplices[p.creator];
        SkeletonEdge::critical(s.vertices()[0], s.vertices()[1], 2.0 * s.value, p.birth, p.death)
    }));
    SkeletonGraph::new(
        cloud_vertices(f.vertex_count(), coords),
        edges,
        Provenance::Hopes { filtration: f.kind().to_string() },
    )
}

/// HoPeS of a filtration: minimum spanning tree plus every critical edge.
pub fn build_hopes(f: &Filtration, coords: Option<&[Point2]>) -> SkeletonGraph {
    hopes_from_persistence(f, &compute_persistence(f), coords)
}

/// Filtration, persistence and HoPeS of a cloud. Planar clouds use the alpha
/// filtration; other clouds the Rips filtration up to half their diameter,
/// where every pair is already joined.
pub fn hopes_of_cloud(cloud: &PointCloud) -> Result<(SkeletonGraph, Persistence, Filtration)> {
    let (f, coords) = if cloud.is_planar() {
        (alpha_filtration(&delaunay(cloud)?), Some(cloud.points2()?))
    } else {
        (rips_filtration(cloud, (cloud.diameter() / 2.0).max(f64::MIN_POSITIVE))?, None)
    };
    let persistence = compute_persistence(&f);
    let skeleton = hopes_from_persistence(&f, &persistence, coords.as_deref());
    Ok((skeleton, persistence, f))
}

/// `HoPeS(C; alpha)`: drops edges that appear after `alpha` and critical
/// edges whose cycle has died by `alpha`.
pub fn reduced_hopes(h: &SkeletonGraph, alpha: f64) -> SkeletonGraph {
    let edges = h
        .edges
        .iter()
        .filter(|e| e.scale() <= alpha)
        .filter(|e| e.death.map_or(true, |d| d > alpha))
        .copied()
        .collect();
    SkeletonGraph::new(h.vertices.clone(), edges, Provenance::Reduced { alpha })
}

/// `HoPeS_{k,l}(C)`: the reduced skeleton at `vs_{k,l}` keeping only critical
/// edges whose dot belongs to `VS_{k,l}`.
///
/// When the diagram has no dots there is no selection scale; the result is
/// the spanning tree alone.
pub fn derived_hopes(h: &SkeletonGraph, gd: &GapDecomposition, k: usize, l: usize) -> SkeletonGraph {
    let selection = gd.vertical(k).and_then(|v| Some((v.vs(l)?, v.vs_dots(l))));
    let Some((vs, dots)) = selection else {
        let edges = h.tree_edges().copied().collect();
        return SkeletonGraph::new(h.vertices.clone(), edges, Provenance::Derived { k, l, scale: None });
    };
    let selected = |e: &SkeletonEdge| match (e.birth, e.death) {
        (Some(b), Some(d)) => d > vs && dots.iter().any(|dot| dot.birth == b && dot.death == d),
        _ => true,
    };
    let edges = h
        .edges
        .iter()
        .filter(|e| e.scale() <= vs && selected(e))
        .copied()
        .collect();
    SkeletonGraph::new(h.vertices.clone(), edges, Provenance::Derived { k, l, scale: Some(vs) })
}

/// The stages of the parameter-free HoPeS pipeline on one cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplifiedHopes {
    pub derived: SkeletonGraph,
    pub pruned: SkeletonGraph,
    pub simplified: SkeletonGraph,
    /// Largest finite death among the dots above the first widest diagonal
    /// gap; 0 when the diagram is empty.
    pub epsilon: f64,
}

/// `HoPeS_{k,l}`, pruned of degree-one vertices, then simplified with the
/// threshold [`SimplifiedHopes::epsilon`].
pub fn simplified_hopes(cloud: &PointCloud, k: usize, l: usize) -> Result<SimplifiedHopes> {
    let (h, persistence, _) = hopes_of_cloud(cloud)?;
    let gd = crate::persistence::diagonal_gaps(&persistence.pd1);
    let epsilon = gd
        .ds_dots(1)
        .iter()
        .map(|d| d.death)
        .filter(|d| d.is_finite())
        .fold(0.0, f64::max);
    let derived = derived_hopes(&h, &gd, k, l);
    let pruned = prune_degree_one(&derived);
    let simplified = simplify(&pruned, epsilon);
    Ok(SimplifiedHopes { derived, pruned, simplified, epsilon })
}
