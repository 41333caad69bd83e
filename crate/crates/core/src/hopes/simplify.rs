use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap, HashSet};

use super::{EdgeKind, Provenance, SkeletonEdge, SkeletonGraph, SkeletonVertex};
use crate::geometry::segment::{adjacent_segments_overlap, distance, midpoint, segments_intersect};
use crate::geometry::Point2;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Label {
    kind: EdgeKind,
    birth: Option<f64>,
    death: Option<f64>,
}

#[derive(PartialEq)]
struct Candidate {
    length: f64,
    u: usize,
    v: usize,
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.length.total_cmp(&other.length).then((self.u, self.v).cmp(&(other.u, other.v)))
    }
}

struct Embedded {
    pos: BTreeMap<usize, Point2>,
    adj: BTreeMap<usize, BTreeMap<usize, Label>>,
}

impl Embedded {
    fn length(&self, u: usize, v: usize) -> f64 {
        distance(self.pos[&u], self.pos[&v])
    }

    fn degree(&self, u: usize) -> usize {
        self.adj[&u].len()
    }

    fn share_neighbour(&self, u: usize, v: usize) -> bool {
        self.adj[&u].keys().any(|x| *x != v && self.adj[&v].contains_key(x))
    }

    fn remove_vertex(&mut self, u: usize) -> (Point2, BTreeMap<usize, Label>) {
        let edges = self.adj.remove(&u).unwrap();
        for x in edges.keys() {
            self.adj.get_mut(x).unwrap().remove(&u);
        }
        (self.pos.remove(&u).unwrap(), edges)
    }

    fn insert_vertex(&mut self, u: usize, p: Point2, edges: BTreeMap<usize, Label>) {
        for (&x, &label) in &edges {
            self.adj.get_mut(&x).unwrap().insert(u, label);
        }
        self.adj.insert(u, edges);
        self.pos.insert(u, p);
    }

    /// Whether any edge at `w` crosses another edge, overlaps an adjacent one,
    /// or has collapsed to a point.
    fn has_crossing_at(&self, w: usize) -> bool {
        let p = self.pos[&w];
        let around: Vec<usize> = self.adj[&w].keys().copied().collect();
        for (i, &x) in around.iter().enumerate() {
            let px = self.pos[&x];
            if px == p {
                return true;
            }
            for &y in &around[i + 1..] {
                if adjacent_segments_overlap(p, px, self.pos[&y]) {
                    return true;
                }
            }
            for (&a, others) in &self.adj {
                if a == w {
                    continue;
                }
                if others.is_empty() && segments_intersect(p, px, self.pos[&a], self.pos[&a]) {
                    return true;
                }
                for &b in others.keys() {
                    if b <= a || b == w {
                        continue;
                    }
                    let (pa, pb) = (self.pos[&a], self.pos[&b]);
                    let touching = if a == x {
                        adjacent_segments_overlap(px, p, pb)
                    } else if b == x {
                        adjacent_segments_overlap(px, p, pa)
                    } else {
                        segments_intersect(p, px, pa, pb)
                    };
                    if touching {
                        return true;
                    }
                }
            }
        }
        if around.is_empty() {
            // a lone vertex must not land on an edge
            return self.adj.iter().any(|(&a, others)| {
                others.keys().any(|&b| {
                    a != w && b > a && segments_intersect(p, p, self.pos[&a], self.pos[&b])
                })
            });
        }
        false
    }
}

/// Collapses edges shorter than `epsilon`, shortest first, while keeping the
/// drawing planar.
///
/// An edge on a triangle is never collapsed. Collapsing `uv` replaces both
/// endpoints by one vertex joined to all their neighbours, placed at the
/// midpoint when `u` and `v` both have degree two or neither has, and at the
/// endpoint of degree other than two otherwise. A collapse that makes edges
/// cross is undone and the edge is frozen. Vertices without coordinates are
/// left as they are.
pub fn simplify(g: &SkeletonGraph, epsilon: f64) -> SkeletonGraph {
    let mut graph = Embedded { pos: BTreeMap::new(), adj: BTreeMap::new() };
    let mut unplaced = Vec::new();
    for v in &g.vertices {
        match v.position() {
            Some(p) => {
                graph.pos.insert(v.id, p);
                graph.adj.insert(v.id, BTreeMap::new());
            }
            None => unplaced.push(*v),
        }
    }
    let mut kept_edges = Vec::new();
    for e in &g.edges {
        if !(graph.pos.contains_key(&e.u) && graph.pos.contains_key(&e.v)) || e.u == e.v {
            kept_edges.push(*e);
            continue;
        }
        let label = Label { kind: e.kind, birth: e.birth, death: e.death };
        graph.adj.get_mut(&e.u).unwrap().insert(e.v, label);
        graph.adj.get_mut(&e.v).unwrap().insert(e.u, label);
    }
    let mut next_id = g.vertices.iter().map(|v| v.id + 1).max().unwrap_or(0);

    let mut queue = BinaryHeap::new();
    let push = |queue: &mut BinaryHeap<Reverse<Candidate>>, graph: &Embedded, u: usize, v: usize| {
        let (u, v) = (u.min(v), u.max(v));
        let length = graph.length(u, v);
        if length < epsilon {
            queue.push(Reverse(Candidate { length, u, v }));
        }
    };
    for (&u, others) in &graph.adj {
        for &v in others.keys().filter(|&&v| v > u) {
            push(&mut queue, &graph, u, v);
        }
    }

    let mut frozen = HashSet::new();
    while let Some(Reverse(Candidate { length, u, v })) = queue.pop() {
        let current = graph.adj.get(&u).is_some_and(|a| a.contains_key(&v));
        if !current || frozen.contains(&(u, v)) || graph.length(u, v) != length {
            continue;
        }
        if graph.share_neighbour(u, v) {
            continue;
        }
        let (du, dv) = (graph.degree(u), graph.degree(v));
        let (pu, pv) = (graph.pos[&u], graph.pos[&v]);
        let p = match (du == 2, dv == 2) {
            (true, true) | (false, false) => midpoint(pu, pv),
            (false, true) => pu,
            (true, false) => pv,
        };

        let (_, edges_u) = graph.remove_vertex(u);
        let (_, edges_v) = graph.remove_vertex(v);
        let mut merged = BTreeMap::new();
        for (&x, &label) in edges_u.iter().chain(&edges_v) {
            if x != u && x != v {
                merged.insert(x, label);
            }
        }
        let w = next_id;
        graph.insert_vertex(w, p, merged);

        if graph.has_crossing_at(w) {
            graph.remove_vertex(w);
            let mut restore_u = edges_u;
            let joining = restore_u.remove(&v).unwrap();
            graph.insert_vertex(u, pu, restore_u);
            let mut restore_v = edges_v;
            restore_v.insert(u, joining);
            graph.insert_vertex(v, pv, restore_v);
            frozen.insert((u, v));
            continue;
        }
        next_id += 1;
        let around: Vec<usize> = graph.adj[&w].keys().copied().collect();
        for x in around {
            push(&mut queue, &graph, w, x);
        }
    }

    let mut vertices: Vec<SkeletonVertex> = graph.pos.iter().map(|(&id, &p)| SkeletonVertex::at(id, p)).collect();
    vertices.extend(unplaced);
    vertices.sort_by_key(|v| v.id);
    let mut edges = kept_edges;
    for (&u, others) in &graph.adj {
        for (&v, label) in others.range(u + 1..) {
            edges.push(SkeletonEdge {
                u,
                v,
                length: graph.length(u, v),
                kind: label.kind,
                birth: label.birth,
                death: label.death,
            });
        }
    }
    SkeletonGraph::new(
        vertices,
        edges,
        Provenance::Simplified { epsilon, from: Box::new(g.provenance.clone()) },
    )
}
