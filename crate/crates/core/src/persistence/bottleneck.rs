use std::collections::VecDeque;

use super::PersistenceDiagram;

/// Bottleneck distance with the L-infinity ground metric; every dot may also
/// be matched to its nearest diagonal point at half its persistence.
///
/// Essential dots are matched among themselves by sorted birth. Diagrams with
/// different numbers of essential dots are infinitely far apart.
pub fn bottleneck_distance(a: &PersistenceDiagram, b: &PersistenceDiagram) -> f64 {
    let split = |pd: &PersistenceDiagram| {
        let (mut finite, mut essential) = (Vec::new(), Vec::new());
        for (birth, death) in pd.expanded() {
            if death.is_infinite() {
                essential.push(birth);
            } else {
                finite.push((birth, death));
            }
        }
        essential.sort_by(f64::total_cmp);
        (finite, essential)
    };
    let (fa, ea) = split(a);
    let (fb, eb) = split(b);
    if ea.len() != eb.len() {
        return f64::INFINITY;
    }
    let essential = ea.iter().zip(&eb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    essential.max(finite_bottleneck(&fa, &fb))
}

fn finite_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let (n, m) = (a.len(), b.len());
    if n + m == 0 {
        return 0.0;
    }
    let linf = |p: (f64, f64), q: (f64, f64)| (p.0 - q.0).abs().max((p.1 - q.1).abs());
    let half = |p: (f64, f64)| (p.1 - p.0) / 2.0;

    // left side: a's dots then diagonal slots for b; right side: b's dots then
    // diagonal slots for a
    let cost = |i: usize, j: usize| -> f64 {
        match (i < n, j < m) {
            (true, true) => linf(a[i], b[j]),
            (true, false) => {
                if j - m == i {
                    half(a[i])
                } else {
                    f64::INFINITY
                }
            }
            (false, true) => {
                if i - n == j {
                    half(b[j])
                } else {
                    f64::INFINITY
                }
            }
            (false, false) => 0.0,
        }
    };

    let mut candidates = vec![0.0];
    for i in 0..n {
        candidates.push(half(a[i]));
        for j in 0..m {
            candidates.push(linf(a[i], b[j]));
        }
    }
    candidates.extend(b.iter().map(|&q| half(q)));
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let size = n + m;
    let feasible = |threshold: f64| {
        let adjacency: Vec<Vec<usize>> = (0..size)
            .map(|i| (0..size).filter(|&j| cost(i, j) <= threshold).collect())
            .collect();
        maximum_matching(&adjacency, size) == size
    };

    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Hopcroft–Karp maximum matching size for a bipartite graph given by
/// left-side adjacency lists into `0..right`.
fn maximum_matching(adjacency: &[Vec<usize>], right: usize) -> usize {
    const FREE: usize = usize::MAX;
    let left = adjacency.len();
    let mut match_left = vec![FREE; left];
    let mut match_right = vec![FREE; right];
    let mut layer = vec![0usize; left];
    let mut matched = 0;

    loop {
        // layer the free left vertices and everything reachable by alternating paths
        let mut queue = VecDeque::new();
        for u in 0..left {
            if match_left[u] == FREE {
                layer[u] = 0;
                queue.push_back(u);
            } else {
                layer[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adjacency[u] {
                let w = match_right[v];
                if w == FREE {
                    found = true;
                } else if layer[w] == usize::MAX {
                    layer[w] = layer[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return matched;
        }

        fn augment(
            u: usize,
            adjacency: &[Vec<usize>],
            layer: &mut [usize],
            match_left: &mut [usize],
            match_right: &mut [usize],
        ) -> bool {
            for &v in &adjacency[u] {
                let w = match_right[v];
                let next = w == usize::MAX
                    || (layer[w] == layer[u] + 1 && augment(w, adjacency, layer, match_left, match_right));
                if next {
                    match_left[u] = v;
                    match_right[v] = u;
                    return true;
                }
            }
            layer[u] = usize::MAX;
            false
        }

        for u in 0..left {
            if match_left[u] == FREE && augment(u, adjacency, &mut layer, &mut match_left, &mut match_right) {
                matched += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd(pairs: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::from_pairs(1, pairs.iter().copied())
    }

    #[test]
    fn identical_diagrams_are_at_zero() {
        let a = pd(&[(1.5, 2.577), (2.0, 2.577)]);
        assert_eq!(bottleneck_distance(&a, &a), 0.0);
    }

    #[test]
    fn single_dot_goes_to_the_diagonal() {
        let d = bottleneck_distance(&pd(&[(2.0, 2.577)]), &pd(&[]));
        assert!((d - 0.2885).abs() < 1e-12);
    }

    #[test]
    fn matching_prefers_dot_to_dot() {
        let d = bottleneck_distance(&pd(&[(0.0, 4.0)]), &pd(&[(0.5, 4.2)]));
        assert_eq!(d, 0.5);
    }

    #[test]
    fn essential_counts_must_agree() {
        let a = pd(&[(0.0, f64::INFINITY)]);
        assert_eq!(bottleneck_distance(&a, &pd(&[])), f64::INFINITY);
        let b = pd(&[(0.25, f64::INFINITY), (1.0, 2.0)]);
        assert_eq!(bottleneck_distance(&a, &b), 0.5);
    }
}
