//! Persistent homology in dimensions 0 and 1 over Z/2, bottleneck distance,
//! and the diagonal/vertical gap analysis of persistence diagrams.

mod bottleneck;
mod gaps;

use serde::{Deserialize, Serialize};

use crate::filtration::Filtration;

pub use bottleneck::bottleneck_distance;
pub use gaps::{diagonal_gaps, vertical_gaps, Gap, GapDecomposition, GapReport, VerticalGaps};

/// Tolerance for deciding that a dot lies on a gap's boundary line.
pub const DIAGRAM_TOLERANCE: f64 = 1e-9;

/// Relative gap below which a pair counts as dying when it is born.
///
/// Cocircular points give triangles whose circumradii agree exactly but are
/// computed with different rounding, which would otherwise leave dots of
/// persistence around 1e-16 on regular patterns.
pub const ZERO_PERSISTENCE: f64 = 1e-12;

/// Whether a class born at `birth` and dying at `death` has positive persistence.
pub fn is_persistent(birth: f64, death: f64) -> bool {
    if death == f64::INFINITY {
        return birth.is_finite();
    }
    death - birth > ZERO_PERSISTENCE * death.abs().max(1.0)
}

/// A point of a persistence diagram with its multiplicity. Essential classes
/// have infinite death, written as `null` in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dot {
    pub birth: f64,
    #[serde(with = "infinite_as_null")]
    pub death: f64,
    pub multiplicity: usize,
}

impl Dot {
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_essential(&self) -> bool {
        self.death == f64::INFINITY
    }
}

mod infinite_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_none()
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// A multiset of off-diagonal dots in one homological dimension, sorted by
/// `(birth, death)` with equal dots merged.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pub dimension: usize,
    dots: Vec<Dot>,
}

impl PersistenceDiagram {
    /// Builds a diagram from `(birth, death)` pairs; pairs on the diagonal,
    /// up to [`ZERO_PERSISTENCE`], are dropped.
    pub fn from_pairs(dimension: usize, pairs: impl IntoIterator<Item = (f64, f64)>) -> Self {
        Self::from_dots(
            dimension,
            pairs.into_iter().map(|(birth, death)| Dot { birth, death, multiplicity: 1 }),
        )
    }

    pub fn from_dots(dimension: usize, dots: impl IntoIterator<Item = Dot>) -> Self {
        let mut dots: Vec<Dot> = dots
            .into_iter()
            .filter(|d| is_persistent(d.birth, d.death) && d.multiplicity > 0)
            .collect();
        dots.sort_by(|a, b| a.birth.total_cmp(&b.birth).then(a.death.total_cmp(&b.death)));
        let mut merged: Vec<Dot> = Vec::with_capacity(dots.len());
        for d in dots {
            match merged.last_mut() {
                Some(last) if last.birth == d.birth && last.death == d.death => {
                    last.multiplicity += d.multiplicity
                }
                _ => merged.push(d),
            }
        }
        Self { dimension, dots: merged }
    }

    pub fn dots(&self) -> &[Dot] {
        &self.dots
    }

    /// Number of dots counted with multiplicity.
    pub fn len(&self) -> usize {
        self.dots.iter().map(|d| d.multiplicity).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.dots.is_empty()
    }

    /// Every dot repeated by its multiplicity, as `(birth, death)`.
    pub fn expanded(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.dots
            .iter()
            .flat_map(|d| std::iter::repeat((d.birth, d.death)).take(d.multiplicity))
    }

    /// Classes alive at `alpha`: dots with `birth <= alpha < death`.
    pub fn live_count(&self, alpha: f64) -> usize {
        self.dots
            .iter()
            .filter(|d| d.birth <= alpha && alpha < d.death)
            .map(|d| d.multiplicity)
            .sum()
    }

    pub fn finite_dots(&self) -> impl Iterator<Item = &Dot> {
        self.dots.iter().filter(|d| !d.is_essential())
    }

    pub fn essential_count(&self) -> usize {
        self.dots.iter().filter(|d| d.is_essential()).map(|d| d.multiplicity).sum()
    }

    /// Largest finite persistence, zero for an empty diagram.
    pub fn max_persistence(&self) -> f64 {
        self.finite_dots().map(Dot::persistence).fold(0.0, f64::max)
    }
}

/// One persistence pair. `destroyer` is `None` for essential classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersistencePair {
    pub dimension: usize,
    pub creator: usize,
    pub destroyer: Option<usize>,
    pub birth: f64,
    #[serde(with = "infinite_as_null")]
    pub death: f64,
}

/// Every pair produced by the reduction, including zero-persistence ones.
/// Simplices are referred to by filtration position.
#[derive(Debug, Clone, Default)]
pub struct Pairing {
    pub pairs: Vec<PersistencePair>,
}

impl Pairing {
    /// Edges that merge two components: the minimum spanning forest.
    pub fn merging_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs.iter().filter(|p| p.dimension == 0).filter_map(|p| p.destroyer)
    }

    /// Cycle-creating edges whose class survives past its birth.
    pub fn critical_pairs(&self) -> impl Iterator<Item = &PersistencePair> {
        self.pairs.iter().filter(|p| p.dimension == 1 && is_persistent(p.birth, p.death))
    }
}

/// Diagrams in dimensions 0 and 1 together with the pairing behind them.
#[derive(Debug, Clone)]
pub struct Persistence {
    pub pd0: PersistenceDiagram,
    pub pd1: PersistenceDiagram,
    pub pairing: Pairing,
}

const UNPAIRED: usize = usize::MAX;

/// Reduces the boundary matrix of `f` column by column over Z/2.
///
/// Triangle columns are reduced first; every edge that becomes a triangle
/// pivot is known to be positive, so its own column is skipped (clearing).
pub fn compute_persistence(f: &Filtration) -> Persistence {
    let n = f.len();
    let simplices = f.simplices();
    let mut reduced: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut pivot_column = vec![UNPAIRED; n];
    let mut cleared = vec![false; n];

    for dim in [2, 1] {
        for j in 0..n {
            if simplices[j].dim() != dim || cleared[j] {
                continue;
            }
            let mut column = f.boundary(j).to_vec();
            while let Some(&low) = column.last() {
                let owner = pivot_column[low];
                if owner == UNPAIRED {
                    break;
                }
                column = symmetric_difference(&column, &reduced[owner]);
            }
            if let Some(&low) = column.last() {
                pivot_column[low] = j;
                if dim == 2 {
                    cleared[low] = true;
                }
            }
            reduced[j] = column;
        }
    }

    let mut pairs = Vec::new();
    for (i, s) in simplices.iter().enumerate() {
        let destroyer = (pivot_column[i] != UNPAIRED).then_some(pivot_column[i]);
        let dimension = match s.dim() {
            0 => 0,
            // an edge with a non-zero reduced column kills a component instead
            1 if !reduced[i].is_empty() => continue,
            1 => 1,
            _ => continue,
        };
        let death = destroyer.map_or(f64::INFINITY, |d| simplices[d].value);
        pairs.push(PersistencePair { dimension, creator: i, destroyer, birth: s.value, death });
    }

    let diagram = |dim: usize| {
        PersistenceDiagram::from_pairs(
            dim,
            pairs.iter().filter(|p| p.dimension == dim).map(|p| (p.birth, p.death)),
        )
    };
    Persistence { pd0: diagram(0), pd1: diagram(1), pairing: Pairing { pairs } }
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::{alpha_filtration, rips_filtration};
    use crate::geometry::{delaunay, PointCloud};

    fn alpha_persistence(points: &[[f64; 2]]) -> Persistence {
        let cloud = PointCloud::from_points(points).unwrap();
        compute_persistence(&alpha_filtration(&delaunay(&cloud).unwrap()))
    }

    #[test]
    fn square_has_one_hole() {
        let p = alpha_persistence(&[[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]]);
        let dots = p.pd1.dots();
        assert_eq!(dots.len(), 1);
        assert!((dots[0].birth - 1.0).abs() < 1e-12);
        assert!((dots[0].death - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(p.pd0.finite_dots().count(), 1);
        assert_eq!(p.pd0.len(), 4);
        assert_eq!(p.pd0.essential_count(), 1);
    }

    fn hexagon(jitter: f64) -> Vec<[f64; 2]> {
        (0..6)
            .map(|i| {
                let t = std::f64::consts::PI / 3.0 * i as f64 + jitter * (i * i) as f64;
                let r = 1.0 + jitter * i as f64;
                [r * t.cos(), r * t.sin()]
            })
            .collect()
    }

    #[test]
    fn regular_hexagon_has_a_single_dot() {
        let p = alpha_persistence(&hexagon(0.0));
        assert_eq!(p.pd1.len(), 1);
        let d = p.pd1.dots()[0];
        assert!((d.birth - 0.5).abs() < 1e-12 && (d.death - 1.0).abs() < 1e-12, "{d:?}");
    }

    #[test]
    fn perturbed_hexagon_on_unit_circle() {
        let pts = hexagon(1e-7);
        let p = alpha_persistence(&pts);
        assert_eq!(p.pd1.len(), 1);
        let d = p.pd1.dots()[0];
        assert!((d.birth - 0.5).abs() < 1e-6 && (d.death - 1.0).abs() < 1e-6, "{d:?}");
    }

    #[test]
    fn collinear_points_have_no_cycles() {
        let p = alpha_persistence(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]);
        assert!(p.pd1.is_empty());
        assert_eq!(p.pairing.merging_edges().count(), 2);
    }

    #[test]
    fn rips_equilateral_hole_dies_immediately() {
        let cloud = PointCloud::from_points(&[[0.0, 0.0], [2.0, 0.0], [1.0, 3f64.sqrt()]]).unwrap();
        let p = compute_persistence(&rips_filtration(&cloud, 2.0).unwrap());
        assert!(p.pd1.is_empty());
        assert_eq!(p.pairing.pairs.iter().filter(|q| q.dimension == 1).count(), 1);
    }

    #[test]
    fn rips_cap_leaves_essential_cycle() {
        let cloud = PointCloud::from_points(&[[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]]).unwrap();
        let p = compute_persistence(&rips_filtration(&cloud, 1.2).unwrap());
        assert_eq!(p.pd1.essential_count(), 1);
        assert_eq!(p.pd1.dots()[0].birth, 1.0);
    }

    #[test]
    fn diagram_json_uses_null_for_infinity() {
        let pd = PersistenceDiagram::from_pairs(1, [(1.0, f64::INFINITY), (0.5, 1.0), (0.5, 1.0)]);
        let json = serde_json::to_string(pd.dots()).unwrap();
        assert_eq!(
            json,
            r#"[{"birth":0.5,"death":1.0,"multiplicity":2},{"birth":1.0,"death":null,"multiplicity":1}]"#
        );
        let back: Vec<Dot> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, pd.dots());
    }

    #[test]
    fn live_count_uses_half_open_interval() {
        let pd = PersistenceDiagram::from_pairs(1, [(0.5, 1.0)]);
        assert_eq!(pd.live_count(0.5), 1);
        assert_eq!(pd.live_count(1.0), 0);
        assert_eq!(pd.live_count(0.4), 0);
    }
}
