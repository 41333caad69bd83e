use spade::{DelaunayTriangulation, Point2 as SpadePoint, Triangulation as _};

use super::{Point2, PointCloud};
use crate::error::{Error, Result};

/// A Delaunay edge with the radius of its smallest circumscribed ball (half its length).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriEdge {
    pub vertices: [usize; 2],
    pub circumradius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriFace {
    pub vertices: [usize; 3],
    pub circumradius: f64,
}

/// A planar Delaunay triangulation `Del(C)` of a cloud. Vertex tuples are
/// sorted; edges and faces are listed in lexicographic order.
#[derive(Debug, Clone)]
pub struct Triangulation {
    pub points: Vec<Point2>,
    pub edges: Vec<TriEdge>,
    pub triangles: Vec<TriFace>,
}

impl Triangulation {
    pub fn vertex_count(&self) -> usize {
        self.points.len()
    }

    /// Euler characteristic `V - E + F` over inner faces; 1 for a
    /// triangulated convex hull, `V - E` when everything is collinear.
    pub fn euler_characteristic(&self) -> i64 {
        self.points.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }
}

/// Circumradius `abc / 4K` of a planar triangle; infinite for degenerate ones.
pub fn circumradius(a: Point2, b: Point2, c: Point2) -> f64 {
    let side = |p: Point2, q: Point2| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
    let area = doubled_area(a, b, c).abs() / 2.0;
    if area == 0.0 {
        return f64::INFINITY;
    }
    side(a, b) * side(b, c) * side(c, a) / (4.0 * area)
}

/// Signed doubled area of `abc`.
///
/// Nearly collinear triples, such as rounded samples along one straight
/// edge, lose every significant digit in the floating-point determinant;
/// their radii then come out wrong by orders of magnitude and break the
/// order of the filtration. Those triples are evaluated exactly.
pub fn doubled_area(a: Point2, b: Point2, c: Point2) -> f64 {
    let (ux, uy, vx, vy) = (b[0] - a[0], b[1] - a[1], c[0] - a[0], c[1] - a[1]);
    let det = ux * vy - uy * vx;
    // each product carries a relative error of a few ulps, so this keeps the
    // determinant within about 1e-12 relative
    if det.abs() > 1e-3 * ((ux * vy).abs() + (uy * vx).abs()) {
        return det;
    }
    exact_doubled_area(a, b, c)
}

/// The determinant over big integers: every finite double is an integer
/// times a power of two, so all six coordinates share the smallest exponent.
fn exact_doubled_area(a: Point2, b: Point2, c: Point2) -> f64 {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;

    let decode = |x: f64| -> (i64, i32) {
        if x == 0.0 {
            return (0, i32::MAX);
        }
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i32;
        let frac = (bits & ((1 << 52) - 1)) as i64;
        let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1 << 52), exp - 1075) };
        (if x < 0.0 { -m } else { m }, e)
    };
    let parts = [a[0], a[1], b[0], b[1], c[0], c[1]].map(decode);
    let Some(e_min) = parts.iter().map(|p| p.1).filter(|&e| e != i32::MAX).min() else { return 0.0 };
    let big = |(m, e): (i64, i32)| -> BigInt {
        if m == 0 {
            BigInt::from(0)
        } else {
            BigInt::from(m) << (e - e_min) as usize
        }
    };
    let [ax, ay, bx, by, cx, cy] = parts.map(big);
    let det = (&bx - &ax) * (&cy - &ay) - (&by - &ay) * (&cx - &ax);
    det.to_f64().unwrap_or(f64::NAN) * 2f64.powi(2 * e_min)
}

/// Delaunay triangulation of a planar cloud.
///
/// Points are inserted in index order, so cocircular configurations resolve
/// to the same diagonal on every run. Collinear input yields edges only.
pub fn delaunay(cloud: &PointCloud) -> Result<Triangulation> {
    let points = cloud.points2()?;
    let mut dt: DelaunayTriangulation<SpadePoint<f64>> = DelaunayTriangulation::new();
    for (i, p) in points.iter().enumerate() {
        let handle = dt
            .insert(SpadePoint::new(p[0], p[1]))
            .map_err(|e| Error::InvalidParameter(format!("point {i} cannot be triangulated: {e:?}")))?;
        if handle.index() != i {
            return Err(Error::DuplicatePoint { first: handle.index(), second: i });
        }
    }

    let mut edges: Vec<TriEdge> = dt
        .undirected_edges()
        .map(|e| {
            let [a, b] = e.vertices();
            let (a, b) = (a.fix().index(), b.fix().index());
            let vertices = if a < b { [a, b] } else { [b, a] };
            let (p, q) = (points[vertices[0]], points[vertices[1]]);
            let len = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
            TriEdge { vertices, circumradius: len / 2.0 }
        })
        .collect();
    edges.sort_by(|x, y| x.vertices.cmp(&y.vertices));

    let mut triangles: Vec<TriFace> = dt
        .inner_faces()
        .map(|f| {
            let mut v = f.vertices().map(|h| h.fix().index());
            v.sort_unstable();
            TriFace {
                vertices: v,
                circumradius: circumradius(points[v[0]], points[v[1]], points[v[2]]),
            }
        })
        .collect();
    triangles.sort_by(|x, y| x.vertices.cmp(&y.vertices));

    Ok(Triangulation { points, edges, triangles })
}
