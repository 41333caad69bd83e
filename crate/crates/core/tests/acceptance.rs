//! Acceptance suite: one line per criterion, exit status 1 if any fails.
//!
//! Every random input comes from a fixed seed, so a run is reproducible.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cloudskel::baselines::{alpha_reeb, mapper, AlphaReebConfig, MapperConfig};
use cloudskel::eval::{betti_number, is_homeomorphic, rms_distance, RmsMode};
use cloudskel::filtration::{alpha_filtration, Filtration};
use cloudskel::geometry::segment::{directed_hausdorff, distance, hausdorff};
use cloudskel::geometry::{delaunay, Point2, PointCloud};
use cloudskel::hopes::{
    derived_hopes, graph_thickness, hopes_of_cloud, prune_degree_one, reduced_hopes, simplify, Provenance,
    SkeletonEdge, SkeletonGraph, SkeletonVertex, DEFAULT_THICKNESS_DENSITY,
};
use cloudskel::persistence::{bottleneck_distance, compute_persistence, diagonal_gaps, PersistenceDiagram};
use cloudskel::synth::{cloud_seed, generate_cloud, make_pattern, EmbeddedGraph, NoiseModel, PatternKind};

/// Slack on length comparisons.
const LENGTH_TOL: f64 = 1e-9;
/// Slack on distance bounds.
const BOUND_TOL: f64 = 1e-6;
/// Precision of Hausdorff computations.
const HAUSDORFF_PRECISION: f64 = 1e-9;
/// Slack on the gap fixtures, which go through one subtraction.
const FIXTURE_TOL: f64 = 1e-12;

struct Outcome {
    pass: bool,
    detail: String,
}

fn random_cloud(rng: &mut ChaCha8Rng, n: usize) -> (PointCloud, Vec<Point2>) {
    let pts: Vec<Point2> = (0..n).map(|_| [rng.gen::<f64>(), rng.gen::<f64>()]).collect();
    (PointCloud::from_points(&pts).unwrap(), pts)
}

fn alpha_of(pts: &[Point2]) -> Filtration {
    alpha_filtration(&delaunay(&PointCloud::from_points(pts).unwrap()).unwrap())
}

/// Scales to probe a filtration at: simplex values and midpoints between them.
fn probe_scales(f: &Filtration, rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    let mut values: Vec<f64> = f.simplices().iter().map(|s| s.value).collect();
    values.dedup();
    (0..count)
        .map(|i| {
            let j = rng.gen_range(0..values.len());
            if i % 2 == 0 || j + 1 == values.len() {
                values[j]
            } else {
                (values[j] + values[j + 1]) / 2.0
            }
        })
        .collect()
}

// ---- GF(2) linear algebra oracle ----

type BitRow = Vec<u64>;

fn bit_row(len: usize, ones: &[usize]) -> BitRow {
    let mut r = vec![0u64; len.div_ceil(64).max(1)];
    for &i in ones {
        r[i / 64] ^= 1 << (i % 64);
    }
    r
}

fn gf2_rank(mut rows: Vec<BitRow>) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, |r| r.len() * 64);
    for col in 0..width {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & b != 0) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[w] & b != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Edges and triangles of the prefix complex, edges as vertex pairs with
/// their filtration values, triangles as edge-index triples.
struct Prefix {
    edges: Vec<(usize, usize, f64)>,
    triangles: Vec<[usize; 3]>,
    vertices: usize,
}

fn prefix(f: &Filtration, alpha: f64) -> Prefix {
    let mut edges = Vec::new();
    let mut tris = Vec::new();
    for s in f.simplices().iter().filter(|s| s.value <= alpha) {
        match s.dim() {
            1 => edges.push((s.vertices()[0].min(s.vertices()[1]), s.vertices()[0].max(s.vertices()[1]), s.value)),
            2 => tris.push([s.vertices()[0], s.vertices()[1], s.vertices()[2]]),
            _ => {}
        }
    }
    let index = |a: usize, b: usize| edges.iter().position(|e| (e.0, e.1) == (a.min(b), a.max(b))).unwrap();
    let triangles = tris.iter().map(|t| [index(t[0], t[1]), index(t[1], t[2]), index(t[0], t[2])]).collect();
    Prefix { edges, triangles, vertices: f.vertex_count() }
}

impl Prefix {
    fn boundary_rows(&self) -> Vec<BitRow> {
        self.triangles.iter().map(|t| bit_row(self.edges.len(), t)).collect()
    }

    fn betti1(&self) -> usize {
        let d1 = self.edges.iter().map(|e| bit_row(self.vertices, &[e.0, e.1])).collect();
        self.edges.len() - gf2_rank(d1) - gf2_rank(self.boundary_rows())
    }

    fn components(&self, edges: impl Iterator<Item = usize>) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut count = self.vertices;
        for e in edges {
            let (a, b) = (root(&mut parent, self.edges[e].0), root(&mut parent, self.edges[e].1));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
        count
    }

    /// Kruskal over the prefix edges ordered by value; lengths are twice the
    /// values.
    fn forest_length(&self) -> f64 {
        let mut order: Vec<usize> = (0..self.edges.len()).collect();
        order.sort_by(|&a, &b| self.edges[a].2.total_cmp(&self.edges[b].2));
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        let mut total = 0.0;
        for e in order {
            let (a, b) = (root(&mut parent, self.edges[e].0), root(&mut parent, self.edges[e].1));
            if a != b {
                parent[a] = b;
                total += 2.0 * self.edges[e].2;
            }
        }
        total
    }
}

// ---- criteria ----

fn criterion_persistence(rng: &mut ChaCha8Rng) -> (Outcome, Vec<(Vec<Point2>, f64)>) {
    let start = Instant::now();
    let (mut checks, mut mismatches) = (0, 0);
    let mut cases = Vec::new();
    for _ in 0..200 {
        let n = rng.gen_range(3..=12);
        let (cloud, pts) = random_cloud(rng, n);
        let f = alpha_filtration(&delaunay(&cloud).unwrap());
        let p = compute_persistence(&f);
        for alpha in probe_scales(&f, rng, 5) {
            checks += 1;
            if p.pd1.live_count(alpha) != prefix(&f, alpha).betti1() {
                mismatches += 1;
            }
            cases.push((pts.clone(), alpha));
        }
    }
    let elapsed = start.elapsed();
    let pass = mismatches == 0 && elapsed < Duration::from_secs(60);
    (Outcome { pass, detail: format!("{checks} checks, {mismatches} mismatches, {elapsed:.1?}") }, cases)
}

fn criterion_optimality(rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let (mut checks, mut beaten, mut subsets) = (0, 0, 0u64);
    let mut worst_gap: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.gen_range(4..=8);
        let (cloud, pts) = random_cloud(rng, n);
        let f = alpha_of(&pts);
        let (h, _, _) = hopes_of_cloud(&cloud).unwrap();
        for alpha in probe_scales(&f, rng, 5) {
            checks += 1;
            let q = prefix(&f, alpha);
            let best = reduced_hopes(&h, alpha).total_length();
            let c = q.components(0..q.edges.len());
            let size = n - c + q.betti1();
            let boundaries = q.boundary_rows();
            let b_rank = gf2_rank(boundaries.clone());
            let admissible = |chosen: &[usize]| {
                if q.components(chosen.iter().copied()) != c {
                    return false;
                }
                let mut rows = boundaries.clone();
                rows.extend(chosen.iter().map(|&e| bit_row(q.edges.len(), &[e])));
                gf2_rank(rows) == chosen.len() + b_rank
            };
            // the shortest admissible subgraph must exist and match
            let mut shortest = f64::INFINITY;
            for_each_subset(q.edges.len(), size, &mut |chosen| {
                subsets += 1;
                let len: f64 = chosen.iter().map(|&e| 2.0 * q.edges[e].2).sum();
                if len < shortest - LENGTH_TOL && admissible(chosen) {
                    shortest = len;
                }
            });
            if shortest < best - LENGTH_TOL {
                beaten += 1;
            }
            worst_gap = worst_gap.max((shortest - best).abs());
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: beaten == 0 && worst_gap <= LENGTH_TOL && elapsed < Duration::from_secs(600),
        detail: format!(
            "{checks} (cloud, scale) pairs, {subsets} subgraphs enumerated, {beaten} beaten, \
             max |shortest admissible - skeleton| {worst_gap:.2e}, {elapsed:.1?}"
        ),
    }
}

fn for_each_subset(n: usize, k: usize, visit: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            rec(i + 1, n, k, cur, visit);
            cur.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut Vec::new(), visit);
    }
}

fn criterion_length_identity(cases: &[(Vec<Point2>, f64)]) -> Outcome {
    let mut worst: f64 = 0.0;
    for (pts, alpha) in cases {
        let cloud = PointCloud::from_points(pts).unwrap();
        let (h, p, f) = hopes_of_cloud(&cloud).unwrap();
        let reduced = reduced_hopes(&h, *alpha).total_length();
        let births: f64 = p.pd1.expanded().filter(|(b, d)| b <= alpha && alpha < d).map(|(b, _)| b).sum();
        let expected = prefix(&f, *alpha).forest_length() + 2.0 * births;
        worst = worst.max((reduced - expected).abs());
    }
    Outcome { pass: worst <= LENGTH_TOL, detail: format!("{} cases, max deviation {worst:.2e}", cases.len()) }
}

fn criterion_mst(rng: &mut ChaCha8Rng) -> Outcome {
    let mut mismatches = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(3..=60);
        let (cloud, pts) = random_cloud(rng, n);
        let (h, _, _) = hopes_of_cloud(&cloud).unwrap();
        let tree: BTreeSet<(usize, usize)> = h.tree_edges().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
        // Kruskal on the complete Euclidean graph
        let mut pairs: Vec<(f64, usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| (distance(pts[i], pts[j]), i, j)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut comp: Vec<usize> = (0..n).collect();
        let mut oracle = BTreeSet::new();
        let mut oracle_len = 0.0;
        for (d, i, j) in pairs {
            let (ci, cj) = (comp[i], comp[j]);
            if ci != cj {
                for c in comp.iter_mut() {
                    if *c == cj {
                        *c = ci;
                    }
                }
                oracle.insert((i, j));
                oracle_len += d;
            }
        }
        if oracle != tree {
            mismatches += 1;
        }
        let tree_len: f64 = h.tree_edges().map(|e| e.length).sum();
        worst = worst.max((tree_len - oracle_len).abs());
    }
    Outcome {
        pass: mismatches == 0 && worst <= LENGTH_TOL,
        detail: format!("100 clouds, {mismatches} edge-set mismatches, max length deviation {worst:.2e}"),
    }
}

fn perturb(points: &[Point2], delta: f64, rng: &mut ChaCha8Rng) -> Vec<Point2> {
    points
        .iter()
        .map(|p| {
            let t = rng.gen::<f64>() * std::f64::consts::TAU;
            let r = delta * rng.gen::<f64>().sqrt();
            [p[0] + r * t.cos(), p[1] + r * t.sin()]
        })
        .collect()
}

const PATTERNS: [PatternKind; 9] = [
    PatternKind::Wheel(3),
    PatternKind::Wheel(5),
    PatternKind::Wheel(8),
    PatternKind::Grid(2, 2),
    PatternKind::Grid(3, 1),
    PatternKind::Grid(3, 3),
    PatternKind::Hexagons(1),
    PatternKind::Hexagons(4),
    PatternKind::Hexagons(7),
];

fn criterion_stability(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst_excess = f64::NEG_INFINITY;
    for trial in 0..50 {
        let kind = PATTERNS[trial % PATTERNS.len()];
        let c = generate_cloud(kind, NoiseModel::Uniform(0.05), 50.0, cloud_seed(5, trial, 0)).unwrap();
        let delta = 0.05 * rng.gen_range(0.01..=1.0);
        let moved = perturb(&c.points, delta, rng);
        let pd = |pts: &[Point2]| compute_persistence(&alpha_of(pts)).pd1;
        let d = bottleneck_distance(&pd(&c.points), &pd(&moved));
        worst_excess = worst_excess.max(d - delta);
    }
    Outcome {
        pass: worst_excess <= BOUND_TOL,
        detail: format!("50 trials, max d_B - delta = {worst_excess:.3e}"),
    }
}

fn brute_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let cost = |p: (f64, f64), q: (f64, f64)| match (p.1.is_infinite(), q.1.is_infinite()) {
        (true, true) => (p.0 - q.0).abs(),
        (false, false) => (p.0 - q.0).abs().max((p.1 - q.1).abs()),
        _ => f64::INFINITY,
    };
    let diag = |p: (f64, f64)| if p.1.is_infinite() { f64::INFINITY } else { (p.1 - p.0) / 2.0 };
    // each dot of a goes to a distinct dot of b or to the diagonal
    fn rec(
        i: usize,
        a: &[(f64, f64)],
        b: &[(f64, f64)],
        used: &mut Vec<bool>,
        worst: f64,
        best: &mut f64,
        cost: &dyn Fn((f64, f64), (f64, f64)) -> f64,
        diag: &dyn Fn((f64, f64)) -> f64,
    ) {
        if worst >= *best {
            return;
        }
        if i == a.len() {
            let rest = b.iter().zip(used.iter()).filter(|(_, u)| !**u).map(|(q, _)| diag(*q)).fold(worst, f64::max);
            *best = best.min(rest);
            return;
        }
        rec(i + 1, a, b, used, worst.max(diag(a[i])), best, cost, diag);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                rec(i + 1, a, b, used, worst.max(cost(a[i], b[j])), best, cost, diag);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    rec(0, a, b, &mut vec![false; b.len()], 0.0, &mut best, &cost, &diag);
    best
}

fn criterion_bottleneck(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut mismatched_infinite = 0;
    for trial in 0..100 {
        let draw = |rng: &mut ChaCha8Rng| -> Vec<(f64, f64)> {
            let n = rng.gen_range(0..=5);
            (0..n)
                .map(|_| {
                    let b = rng.gen::<f64>();
                    if trial % 5 == 0 && rng.gen_bool(0.3) {
                        (b, f64::INFINITY)
                    } else {
                        (b, b + rng.gen::<f64>())
                    }
                })
                .collect()
        };
        let (a, b) = (draw(rng), draw(rng));
        let fast = bottleneck_distance(&PersistenceDiagram::from_pairs(1, a.clone()), &PersistenceDiagram::from_pairs(1, b.clone()));
        let slow = brute_bottleneck(&a, &b);
        if fast.is_infinite() || slow.is_infinite() {
            if fast != slow {
                mismatched_infinite += 1;
            }
        } else {
            worst = worst.max((fast - slow).abs());
        }
    }
    Outcome {
        pass: worst <= LENGTH_TOL && mismatched_infinite == 0,
        detail: format!("100 pairs, max deviation {worst:.2e}, {mismatched_infinite} infinite mismatches"),
    }
}

fn criterion_gap_fixtures() -> Outcome {
    let two = diagonal_gaps(&PersistenceDiagram::from_pairs(1, [(1.5, 2.577), (2.0, 2.577)]));
    let theta = diagonal_gaps(&PersistenceDiagram::from_pairs(1, [(0.0, 2.577), (0.0, 2.577)]));
    let got = [two.ds(1), two.vs(1, 1), two.vs(1, 2), theta.ds(1), theta.vs(1, 1)];
    let want = [0.577, 2.0, 1.5, 2.577, 0.0];
    let ok = got.iter().zip(want).all(|(g, w)| g.is_some_and(|g| (g - w).abs() <= FIXTURE_TOL));
    Outcome { pass: ok, detail: format!("got {got:?}, want {want:?}") }
}

struct Reconstruction {
    cloud: PointCloud,
    derived: SkeletonGraph,
    simplified: SkeletonGraph,
    full: SkeletonGraph,
}

fn pattern_segments(g: &EmbeddedGraph) -> Vec<[Point2; 2]> {
    g.segments()
}

/// Hausdorff distance between a cloud and the pattern it was drawn around.
fn sample_epsilon(points: &[Point2], g: &EmbeddedGraph) -> f64 {
    hausdorff((&[], points), (&pattern_segments(g), &[]), HAUSDORFF_PRECISION)
}

fn skeleton_parts(g: &SkeletonGraph) -> (Vec<[Point2; 2]>, Vec<Point2>) {
    (g.segments(), g.isolated_points())
}

fn criterion_reconstruction() -> (Outcome, Vec<Reconstruction>) {
    let start = Instant::now();
    let types = [
        (PatternKind::Wheel(5), NoiseModel::Gaussian(0.04)),
        (PatternKind::Grid(3, 3), NoiseModel::Uniform(0.2)),
        (PatternKind::Hexagons(6), NoiseModel::Uniform(0.4)),
    ];
    let mut runs = Vec::new();
    let mut lines = Vec::new();
    let mut pass = true;
    for (type_id, (kind, noise)) in types.into_iter().enumerate() {
        let (mut betti_ok, mut contained) = (0, 0);
        let mut worst_ratio: f64 = 0.0;
        for index in 0..20 {
            let c = generate_cloud(kind, noise, 100.0, cloud_seed(8, type_id, index)).unwrap();
            let cloud = c.cloud().unwrap();
            let (h, p, _) = hopes_of_cloud(&cloud).unwrap();
            let derived = derived_hopes(&h, &diagonal_gaps(&p.pd1), 1, 1);
            if betti_number(&derived) == c.pattern.betti_number() {
                betti_ok += 1;
            }
            let eps = sample_epsilon(&c.points, &c.pattern);
            let (segs, isolated) = skeleton_parts(&derived);
            let reach = directed_hausdorff((&segs, &isolated), (&pattern_segments(&c.pattern), &[]), HAUSDORFF_PRECISION);
            if reach <= 2.0 * eps + BOUND_TOL {
                contained += 1;
            }
            worst_ratio = worst_ratio.max(reach / eps);
            let gd = diagonal_gaps(&p.pd1);
            let epsilon = gd.ds_dots(1).iter().map(|d| d.death).filter(|d| d.is_finite()).fold(0.0, f64::max);
            let simplified = simplify(&prune_degree_one(&derived), epsilon);
            runs.push(Reconstruction { cloud, derived, simplified, full: h });
        }
        pass &= betti_ok * 100 >= 90 * 20 && contained == 20;
        lines.push(format!("{kind} {noise}: Betti {betti_ok}/20, contained {contained}/20, max reach/eps {worst_ratio:.2}"));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(900);
    (Outcome { pass, detail: format!("{}; {elapsed:.1?}", lines.join("; ")) }, runs)
}

fn criterion_simplification(runs: &[Reconstruction]) -> Outcome {
    let changed = runs.iter().filter(|r| betti_number(&r.simplified) != betti_number(&r.derived)).count();
    let (before, after): (usize, usize) =
        runs.iter().fold((0, 0), |(b, a), r| (b + r.derived.edges.len(), a + r.simplified.edges.len()));
    Outcome {
        pass: changed == 0,
        detail: format!("{} skeletons, {changed} changed Betti number, edges {before} -> {after}", runs.len()),
    }
}

fn criterion_zero_rms(runs: &[Reconstruction], extra: &[PointCloud]) -> Outcome {
    let mut nonzero = 0;
    let mut count = 0;
    for (cloud, full) in runs.iter().map(|r| (r.cloud.clone(), r.full.clone())).chain(
        extra.iter().map(|c| (c.clone(), hopes_of_cloud(c).unwrap().0)),
    ) {
        count += 1;
        if rms_distance(&cloud, &full, RmsMode::Mean).unwrap() != 0.0 {
            nonzero += 1;
        }
    }
    Outcome { pass: nonzero == 0, detail: format!("{count} clouds, {nonzero} with nonzero RMS") }
}

fn criterion_derived_stability(rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let thickness: Vec<(f64, Vec<f64>)> = PATTERNS
        .iter()
        .map(|&k| {
            let r = graph_thickness(&make_pattern(k).unwrap().to_skeleton("p"), DEFAULT_THICKNESS_DENSITY).unwrap();
            let mut deaths = r.deaths.clone();
            deaths.sort_by(f64::total_cmp);
            (r.thickness, deaths)
        })
        .collect();
    let (mut accepted, mut rejected, mut violations) = (0, 0, 0);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut attempt = 0;
    while accepted < 20 && attempt < 200 {
        let which = attempt % PATTERNS.len();
        let kind = PATTERNS[which];
        let c = generate_cloud(kind, NoiseModel::Uniform(0.01), 150.0, cloud_seed(11, which, attempt)).unwrap();
        attempt += 1;
        let eps = sample_epsilon(&c.points, &c.pattern);
        let (theta, deaths) = &thickness[which];
        let spread = deaths.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        if deaths.len() != c.pattern.betti_number() || !(deaths[0] > 7.0 * eps + 2.0 * theta + spread) {
            rejected += 1;
            continue;
        }
        accepted += 1;
        let delta = eps / 2.0;
        let moved = perturb(&c.points, delta, rng);
        let derived = |pts: &[Point2]| {
            let (h, p, _) = hopes_of_cloud(&PointCloud::from_points(pts).unwrap()).unwrap();
            derived_hopes(&h, &diagonal_gaps(&p.pd1), 1, 1)
        };
        let (a, b) = (derived(&c.points), derived(&moved));
        let (sa, pa) = skeleton_parts(&a);
        let (sb, pb) = skeleton_parts(&b);
        let d = hausdorff((&sa, &pa), (&sb, &pb), HAUSDORFF_PRECISION);
        let bound = 2.0 * delta + 4.0 * eps;
        worst_excess = worst_excess.max(d - bound);
        if d > bound + BOUND_TOL {
            violations += 1;
        }
    }
    Outcome {
        pass: accepted == 20 && violations == 0,
        detail: format!(
            "{accepted} clouds meeting the hypothesis ({rejected} rejected), {violations} violations, max excess {worst_excess:.3e}, {:.1?}",
            start.elapsed()
        ),
    }
}

fn subdivide(g: &SkeletonGraph, rng: &mut ChaCha8Rng, times: usize) -> SkeletonGraph {
    let mut vertices = g.vertices.clone();
    let mut edges = g.edges.clone();
    for _ in 0..times {
        let e = edges.swap_remove(rng.gen_range(0..edges.len()));
        let id = vertices.iter().map(|v| v.id).max().unwrap() + 1;
        vertices.push(SkeletonVertex { id, x: None, y: None });
        edges.push(SkeletonEdge::tree(e.u, id, e.length / 2.0));
        edges.push(SkeletonEdge::tree(id, e.v, e.length / 2.0));
    }
    SkeletonGraph::new(vertices, edges, Provenance::Pattern { name: "subdivided".into() })
}

fn criterion_homeomorphism(rng: &mut ChaCha8Rng) -> Outcome {
    let p = |k| make_pattern(k).unwrap().to_skeleton("p");
    let fixture = is_homeomorphic(&p(PatternKind::Wheel(4)), &p(PatternKind::Grid(2, 2)))
        && !is_homeomorphic(&p(PatternKind::Wheel(4)), &p(PatternKind::Wheel(5)));
    let mut failures = 0;
    for trial in 0..100 {
        let g = p(PATTERNS[trial % PATTERNS.len()]);
        let times = rng.gen_range(1..=30);
        let s = subdivide(&g, rng, times);
        if !is_homeomorphic(&g, &s) || !is_homeomorphic(&s, &g) {
            failures += 1;
        }
    }
    Outcome {
        pass: fixture && failures == 0,
        detail: format!("fixture {}, {failures}/100 subdivision failures", if fixture { "ok" } else { "wrong" }),
    }
}

fn criterion_baselines() -> (Outcome, Vec<PointCloud>) {
    let start = Instant::now();
    let clouds: Vec<PointCloud> = (0..20)
        .map(|i| generate_cloud(PatternKind::Hexagons(1), NoiseModel::None, 100.0, cloud_seed(13, 0, i)).unwrap())
        .map(|c| c.cloud().unwrap())
        .collect();
    let defaults = cloudskel::eval::BenchmarkConfig::default();
    let mut best_mapper = (0, 0.0, 0.0);
    for &t in &defaults.mapper_t {
        for &eps in &defaults.mapper_eps {
            let ok = clouds
                .iter()
                .filter(|c| betti_number(&prune_degree_one(&mapper(c, &MapperConfig::new(t, eps)).unwrap())) == 1)
                .count();
            if ok > best_mapper.0 {
                best_mapper = (ok, t, eps);
            }
        }
    }
    let mut best_reeb = (0, 0.0);
    for &alpha in &defaults.reeb_alpha {
        let ok = clouds
            .iter()
            .filter(|c| betti_number(&prune_degree_one(&alpha_reeb(c, &AlphaReebConfig::new(alpha)).unwrap())) == 1)
            .count();
        if ok > best_reeb.0 {
            best_reeb = (ok, alpha);
        }
    }
    let pass = best_mapper.0 * 100 >= 80 * 20 && best_reeb.0 * 100 >= 80 * 20;
    let detail = format!(
        "Mapper best {}/20 at t = {}, eps = {}; alpha-Reeb best {}/20 at alpha = {}; {:.1?}",
        best_mapper.0,
        best_mapper.1,
        best_mapper.2,
        best_reeb.0,
        best_reeb.1,
        start.elapsed()
    );
    (Outcome { pass, detail }, clouds)
}

fn main() {
    let mut failed = 0;
    let mut report = |n: usize, name: &str, o: Outcome| {
        println!("criterion {n:>2} {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_101);
    let (o, cases) = criterion_persistence(&mut rng);
    report(1, "persistence vs GF(2) rank", o);
    report(2, "optimality of reduced skeletons", criterion_optimality(&mut rng));
    report(3, "length identity", criterion_length_identity(&cases));
    report(4, "spanning tree vs Kruskal", criterion_mst(&mut rng));
    report(5, "diagram stability", criterion_stability(&mut rng));
    report(6, "bottleneck vs brute force", criterion_bottleneck(&mut rng));
    report(7, "gap fixtures", criterion_gap_fixtures());
    let (o, runs) = criterion_reconstruction();
    report(8, "reconstruction", o);
    report(9, "simplification keeps Betti number", criterion_simplification(&runs));
    let (baseline_outcome, h1_clouds) = criterion_baselines();
    report(10, "zero RMS of full skeleton", criterion_zero_rms(&runs, &h1_clouds));
    report(11, "derived skeleton stability", criterion_derived_stability(&mut rng));
    report(12, "homeomorphism", criterion_homeomorphism(&mut rng));
    report(13, "baseline sanity", baseline_outcome);
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
