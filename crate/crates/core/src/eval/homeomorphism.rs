use std::collections::HashMap;

use crate::hopes::SkeletonGraph;

/// An undirected multigraph as a symmetric multiplicity matrix; loops sit on
/// the diagonal and count twice towards the degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    mult: Vec<u32>,
}

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Self { n, mult: vec![0; n * n] }
    }

    pub fn from_skeleton(g: &SkeletonGraph) -> Self {
        let index: HashMap<usize, usize> = g.vertices.iter().enumerate().map(|(i, v)| (v.id, i)).collect();
        let mut m = Self::new(g.vertices.len());
        for e in &g.edges {
            m.add_edge(index[&e.u], index[&e.v]);
        }
        m
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|i| (i..self.n).map(|j| self.get(i, j) as usize).sum::<usize>()).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.mult[i * self.n + j]
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.mult[a * self.n + b] += 1;
        if a != b {
            self.mult[b * self.n + a] += 1;
        }
    }

    fn remove_edge(&mut self, a: usize, b: usize) {
        self.mult[a * self.n + b] -= 1;
        if a != b {
            self.mult[b * self.n + a] -= 1;
        }
    }

    pub fn degree(&self, v: usize) -> u32 {
        (0..self.n).map(|j| self.get(v, j)).sum::<u32>() + self.get(v, v)
    }

    /// Replaces every degree-two vertex that is not a lone loop by an edge
    /// between its two neighbours. A cycle component ends as one vertex with
    /// a loop.
    pub fn smoothed(&self) -> Self {
        let mut g = self.clone();
        let mut alive = vec![true; g.n];
        loop {
            let next = (0..g.n).find(|&v| alive[v] && g.degree(v) == 2 && g.get(v, v) == 0);
            let Some(v) = next else { break };
            let ends: Vec<usize> =
                (0..g.n).flat_map(|j| std::iter::repeat(j).take(g.get(v, j) as usize)).collect();
            let (a, b) = (ends[0], ends[1]);
            g.remove_edge(v, a);
            g.remove_edge(v, b);
            g.add_edge(a, b);
            alive[v] = false;
        }
        let keep: Vec<usize> = (0..g.n).filter(|&v| alive[v]).collect();
        let mut out = Self::new(keep.len());
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                out.mult[i * out.n + j] = g.get(a, b);
            }
        }
        out
    }

    /// Ordered colour refinement: each round splits colours by the multiset
    /// of (neighbour colour, multiplicity). Colour numbers depend only on the
    /// structure, never on vertex numbering.
    fn refine(&self, colours: &mut Vec<usize>) {
        loop {
            let count = distinct(colours);
            let signatures: Vec<(usize, Vec<(usize, u32)>)> = (0..self.n)
                .map(|v| {
                    let mut s: Vec<(usize, u32)> =
                        (0..self.n).filter(|&j| self.get(v, j) > 0).map(|j| (colours[j], self.get(v, j))).collect();
                    s.push((usize::MAX, self.get(v, v)));
                    s.sort_unstable();
                    (colours[v], s)
                })
                .collect();
            let mut sorted = signatures.clone();
            sorted.sort();
            sorted.dedup();
            for v in 0..self.n {
                colours[v] = sorted.binary_search(&signatures[v]).unwrap();
            }
            if distinct(colours) == count {
                return;
            }
        }
    }

    /// A certificate equal for two multigraphs exactly when they are
    /// isomorphic: the smallest multiplicity matrix over the orderings
    /// reached by individualisation and refinement.
    pub fn canonical_form(&self) -> Vec<u32> {
        let mut colours = vec![0; self.n];
        self.refine(&mut colours);
        let mut best: Option<Vec<u32>> = None;
        self.search(colours, &mut best);
        let mut cert = vec![self.n as u32];
        cert.extend(best.unwrap_or_default());
        cert
    }

    fn search(&self, colours: Vec<usize>, best: &mut Option<Vec<u32>>) {
        let n = self.n;
        let mut size = vec![0usize; n.max(1)];
        for &c in &colours {
            size[c] += 1;
        }
        let Some(cell) = (0..n).find(|&c| size[c] > 1) else {
            let mut order = vec![0; n];
            for v in 0..n {
                order[colours[v]] = v;
            }
            let cert: Vec<u32> = order.iter().flat_map(|&a| order.iter().map(move |&b| (a, b))).map(|(a, b)| self.get(a, b)).collect();
            if best.as_ref().map_or(true, |b| cert < *b) {
                *best = Some(cert);
            }
            return;
        };
        for v in (0..n).filter(|&v| colours[v] == cell) {
            // v keeps the cell's colour, the rest of the cell moves up by one
            let mut next: Vec<usize> = colours.iter().map(|&c| if c > cell { c + 1 } else { c }).collect();
            for u in 0..n {
                if colours[u] == cell && u != v {
                    next[u] = cell + 1;
                }
            }
            self.refine(&mut next);
            self.search(next, best);
        }
    }
}

fn distinct(colours: &[usize]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Whether two skeletons are homeomorphic as topological graphs: equal up to
/// subdividing edges. Vertex positions are ignored.
pub fn is_homeomorphic(a: &SkeletonGraph, b: &SkeletonGraph) -> bool {
    let (ma, mb) = (Multigraph::from_skeleton(a).smoothed(), Multigraph::from_skeleton(b).smoothed());
    if ma.vertex_count() != mb.vertex_count() || ma.edge_count() != mb.edge_count() {
        return false;
    }
    let degrees = |m: &Multigraph| {
        let mut d: Vec<u32> = (0..m.vertex_count()).map(|v| m.degree(v)).collect();
        d.sort_unstable();
        d
    };
    degrees(&ma) == degrees(&mb) && ma.canonical_form() == mb.canonical_form()
}
