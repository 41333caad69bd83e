use std::collections::{BTreeSet, HashMap};

use super::{Provenance, SkeletonGraph};

/// Repeatedly removes degree-one vertices, smallest id first, together with
/// their edges. A tree shrinks to a single isolated vertex rather than vanishing.
pub fn prune_degree_one(g: &SkeletonGraph) -> SkeletonGraph {
    let mut degree: HashMap<usize, usize> = g.vertices.iter().map(|v| (v.id, 0)).collect();
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, e) in g.edges.iter().enumerate() {
        *degree.get_mut(&e.u).unwrap() += 1;
        *degree.get_mut(&e.v).unwrap() += 1;
        incident.entry(e.u).or_default().push(i);
        incident.entry(e.v).or_default().push(i);
    }

    let mut edge_alive = vec![true; g.edges.len()];
    let mut removed = BTreeSet::new();
    let mut leaves: BTreeSet<usize> = degree.iter().filter(|(_, &d)| d == 1).map(|(&v, _)| v).collect();
    while let Some(v) = leaves.pop_first() {
        if degree[&v] != 1 {
            continue;
        }
        let &e = incident[&v].iter().find(|&&e| edge_alive[e]).unwrap();
        edge_alive[e] = false;
        let edge = &g.edges[e];
        let other = if edge.u == v { edge.v } else { edge.u };
        *degree.get_mut(&v).unwrap() = 0;
        removed.insert(v);
        let d = degree.get_mut(&other).unwrap();
        *d -= 1;
        if *d == 1 {
            leaves.insert(other);
        }
    }

    SkeletonGraph::new(
        g.vertices.iter().filter(|v| !removed.contains(&v.id)).copied().collect(),
        g.edges
            .iter()
            .zip(&edge_alive)
            .filter(|(_, &alive)| alive)
            .map(|(e, _)| *e)
            .collect(),
        Provenance::Pruned { from: Box::new(g.provenance.clone()) },
    )
}
