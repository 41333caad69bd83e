//! Straight-line segment predicates and distances in the plane.

use super::{Point2, GEOMETRIC_TOLERANCE};

pub type Segment = [Point2; 2];

fn sub(a: Point2, b: Point2) -> Point2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn dot(a: Point2, b: Point2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn distance(a: Point2, b: Point2) -> f64 {
    let d = sub(a, b);
    (d[0] * d[0] + d[1] * d[1]).sqrt()
}

pub fn midpoint(a: Point2, b: Point2) -> Point2 {
    [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
}

/// Distance from `p` to the closed segment `[a, b]`. Exactly zero when `p`
/// is one of the endpoints.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ends = distance(p, a).min(distance(p, b));
    let ab = sub(b, a);
    let len2 = dot(ab, ab);
    if len2 == 0.0 {
        return ends;
    }
    let t = dot(sub(p, a), ab) / len2;
    if t <= 0.0 || t >= 1.0 {
        return ends;
    }
    let foot = [a[0] + t * ab[0], a[1] + t * ab[1]];
    distance(p, foot).min(ends)
}

/// Distance from `p` to the union of `segments` and `points`.
pub fn distance_to_set(p: Point2, segments: &[Segment], points: &[Point2]) -> f64 {
    let seg = segments
        .iter()
        .map(|s| point_segment_distance(p, s[0], s[1]))
        .fold(f64::INFINITY, f64::min);
    points.iter().map(|&q| distance(p, q)).fold(seg, f64::min)
}

/// Sign of the turn `a -> b -> c`, with near-collinear triples reported as 0.
fn orientation(a: Point2, b: Point2, c: Point2) -> i8 {
    let ab = sub(b, a);
    let ac = sub(c, a);
    let cross = ab[0] * ac[1] - ab[1] * ac[0];
    let scale = (dot(ab, ab) * dot(ac, ac)).sqrt();
    if cross.abs() <= GEOMETRIC_TOLERANCE * scale.max(GEOMETRIC_TOLERANCE) {
        0
    } else if cross > 0.0 {
        1
    } else {
        -1
    }
}

fn within_box(a: Point2, b: Point2, p: Point2) -> bool {
    let tol = GEOMETRIC_TOLERANCE;
    p[0] >= a[0].min(b[0]) - tol
        && p[0] <= a[0].max(b[0]) + tol
        && p[1] >= a[1].min(b[1]) - tol
        && p[1] <= a[1].max(b[1]) + tol
}

/// Whether the closed segments `[a, b]` and `[c, d]` meet. Touching and
/// collinear overlap count as meeting.
pub fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && within_box(a, b, c))
        || (o2 == 0 && within_box(a, b, d))
        || (o3 == 0 && within_box(c, d, a))
        || (o4 == 0 && within_box(c, d, b))
}

/// Whether two segments sharing the endpoint `shared` overlap beyond it:
/// they are collinear and leave `shared` in the same direction.
pub fn adjacent_segments_overlap(shared: Point2, p: Point2, q: Point2) -> bool {
    orientation(shared, p, q) == 0 && dot(sub(p, shared), sub(q, shared)) > 0.0
}

struct Piece {
    upper: f64,
    a: Point2,
    b: Point2,
    fa: f64,
    fb: f64,
    // distances from a and b to every target segment, then every target point
    da: Vec<f64>,
    db: Vec<f64>,
}

/// Upper bound, accurate to `precision`, on `sup_{x in S} d(x, T)` where `S`
/// is the union of `from` segments and points and `T` of `to` segments and
/// points.
///
/// Each segment of `S` is bisected depth-first until no piece can beat the
/// best value seen by more than `precision`; segments with the largest bound
/// go first so that the best value rises early. A piece `[a, b]` is bounded
/// twice: `d(., T)` is 1-Lipschitz, so it stays below
/// `(f(a) + f(b) + |ab|) / 2`, and the distance to each single target is
/// convex along the piece, so it stays below `min_j max(d_j(a), d_j(b))`.
/// The second bound is exact on flat stretches.
pub fn directed_hausdorff(
    from: (&[Segment], &[Point2]),
    to: (&[Segment], &[Point2]),
    precision: f64,
) -> f64 {
    let parts = |p: Point2| -> Vec<f64> {
        to.0.iter()
            .map(|s| point_segment_distance(p, s[0], s[1]))
            .chain(to.1.iter().map(|&q| distance(p, q)))
            .collect()
    };
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let bound = |a: Point2, b: Point2, fa: f64, fb: f64, da: &[f64], db: &[f64]| {
        let convex = da.iter().zip(db).map(|(x, y)| x.max(*y)).fold(f64::INFINITY, f64::min);
        ((fa + fb + distance(a, b)) / 2.0).min(convex)
    };

    let mut best = from.1.iter().map(|&p| min(&parts(p))).fold(0.0f64, f64::max);
    let mut roots: Vec<(f64, usize, f64, f64)> = from
        .0
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let (da, db) = (parts(s[0]), parts(s[1]));
            let (fa, fb) = (min(&da), min(&db));
            (bound(s[0], s[1], fa, fb, &da, &db), i, fa, fb)
        })
        .collect();
    for r in &roots {
        best = best.max(r.2).max(r.3);
    }
    roots.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
    let mut worst_left: f64 = best;
    for (upper, i, fa, fb) in roots {
        if upper <= best + precision {
            worst_left = worst_left.max(upper);
            continue;
        }
        let s = from.0[i];
        let mut stack = vec![Piece { upper, a: s[0], b: s[1], fa, fb, da: parts(s[0]), db: parts(s[1]) }];
        while let Some(piece) = stack.pop() {
            if piece.upper <= best + precision {
                worst_left = worst_left.max(piece.upper);
                continue;
            }
            let m = midpoint(piece.a, piece.b);
            let dm = parts(m);
            let fm = min(&dm);
            best = best.max(fm);
            let left_upper = bound(piece.a, m, piece.fa, fm, &piece.da, &dm);
            let right_upper = bound(m, piece.b, fm, piece.fb, &dm, &piece.db);
            stack.push(Piece { upper: right_upper, a: m, b: piece.b, fa: fm, fb: piece.fb, da: dm.clone(), db: piece.db });
            stack.push(Piece { upper: left_upper, a: piece.a, b: m, fa: piece.fa, fb: fm, da: piece.da, db: dm });
        }
    }
    // every discarded piece was within `precision` of the best value at the
    // time, so the true supremum lies in [best, worst_left]
    worst_left.min(best + precision).max(best)
}

/// Symmetric Hausdorff distance between two unions of segments and points.
pub fn hausdorff(
    a: (&[Segment], &[Point2]),
    b: (&[Segment], &[Point2]),
    precision: f64,
) -> f64 {
    directed_hausdorff(a, b, precision).max(directed_hausdorff(b, a, precision))
}
