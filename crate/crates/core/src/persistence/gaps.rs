use serde::{Deserialize, Serialize};

use super::{Dot, PersistenceDiagram, DIAGRAM_TOLERANCE};

/// An empty open strip of a persistence diagram. For diagonal gaps the bounds
/// are persistence values `y - x`; for vertical gaps they are births `x`, and
/// the first vertical gap is unbounded on the right.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub lower: f64,
    #[serde(with = "super::infinite_as_null")]
    pub upper: f64,
}

impl Gap {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Diagonal gaps of the finite part of a diagram, ranked widest first.
///
/// The strip levels are 0 and the distinct persistences `p_1 < ... < p_m`;
/// the `m` gaps lie between consecutive levels and the open strip above `p_m`
/// is not a gap. Equal widths rank the lower gap first.
#[derive(Debug, Clone, PartialEq)]
pub struct GapDecomposition {
    dots: Vec<Dot>,
    ranked: Vec<Gap>,
}

/// Vertical gaps of `DS_k`, ranked widest first.
///
/// With distinct births `x_1 < ... < x_q`, the first gap is `{x > x_q}` with
/// infinite width and the rest are `(x_i, x_{i+1})`, equal widths ranking the
/// leftmost first.
#[derive(Debug, Clone, PartialEq)]
pub struct VerticalGaps {
    pub k: usize,
    dots: Vec<Dot>,
    ranked: Vec<Gap>,
}

pub fn diagonal_gaps(pd: &PersistenceDiagram) -> GapDecomposition {
    let dots: Vec<Dot> = pd.finite_dots().copied().collect();
    let mut levels: Vec<f64> = dots.iter().map(Dot::persistence).collect();
    levels.push(0.0);
    let levels = distinct_levels(levels);
    let mut ranked: Vec<Gap> = levels.windows(2).map(|w| Gap { lower: w[0], upper: w[1] }).collect();
    // stable sort keeps lower gaps first among equal widths
    ranked.sort_by(|a, b| b.width().total_cmp(&a.width()));
    GapDecomposition { dots, ranked }
}

/// Shorthand for `gd.vertical(k)` followed by the `l`-th selection:
/// returns `vs_{k,l}` and `VS_{k,l}`.
pub fn vertical_gaps(gd: &GapDecomposition, k: usize, l: usize) -> Option<(f64, Vec<Dot>)> {
    let v = gd.vertical(k)?;
    Some((v.vs(l)?, v.vs_dots(l)))
}

fn distinct_levels(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(values.len());
    for v in values {
        match out.last() {
            Some(&last) if v - last <= DIAGRAM_TOLERANCE => {}
            _ => out.push(v),
        }
    }
    out
}

impl GapDecomposition {
    /// Gaps widest first; `gaps()[k - 1]` is `dgap_k`.
    pub fn gaps(&self) -> &[Gap] {
        &self.ranked
    }

    /// The finite dots the decomposition was built from.
    pub fn dots(&self) -> &[Dot] {
        &self.dots
    }

    /// `ds_k`: upper boundary of the lowest of the `k` widest gaps. Indices
    /// past the last gap reuse the last one; `None` for an empty diagram or `k = 0`.
    pub fn ds(&self, k: usize) -> Option<f64> {
        if k == 0 || self.ranked.is_empty() {
            return None;
        }
        let k = k.min(self.ranked.len());
        self.ranked[..k].iter().map(|g| g.upper).min_by(f64::total_cmp)
    }

    /// `DS_k`: dots on or above the line `y - x = ds_k`.
    pub fn ds_dots(&self, k: usize) -> Vec<Dot> {
        let Some(ds) = self.ds(k) else { return Vec::new() };
        self.dots
            .iter()
            .filter(|d| d.persistence() >= ds - DIAGRAM_TOLERANCE)
            .copied()
            .collect()
    }

    pub fn vertical(&self, k: usize) -> Option<VerticalGaps> {
        let dots = self.ds_dots(k);
        if dots.is_empty() {
            return None;
        }
        let births = distinct_levels(dots.iter().map(|d| d.birth).collect());
        let last = *births.last().unwrap();
        let mut ranked = vec![Gap { lower: last, upper: f64::INFINITY }];
        let mut finite: Vec<Gap> = births.windows(2).map(|w| Gap { lower: w[0], upper: w[1] }).collect();
        finite.sort_by(|a, b| b.width().total_cmp(&a.width()));
        ranked.extend(finite);
        Some(VerticalGaps { k, dots, ranked })
    }

    /// `vs_{k,l}`, see [`VerticalGaps::vs`].
    pub fn vs(&self, k: usize, l: usize) -> Option<f64> {
        self.vertical(k)?.vs(l)
    }

    /// Summary of the `k`-selections for `k = 1..=max_k`, for JSON output.
    pub fn report(&self, max_k: usize) -> GapReport {
        let selections = (1..=max_k.min(self.ranked.len()))
            .filter_map(|k| {
                let v = self.vertical(k)?;
                Some(Selection {
                    k,
                    ds: self.ds(k)?,
                    ds_count: v.dots.iter().map(|d| d.multiplicity).sum(),
                    vertical_gaps: v.ranked.clone(),
                    vs: (1..=v.ranked.len())
                        .map(|l| VerticalSelection {
                            l,
                            vs: v.vs(l).unwrap(),
                            vs_count: v.vs_dots(l).iter().map(|d| d.multiplicity).sum(),
                        })
                        .collect(),
                })
            })
            .collect();
        GapReport { diagonal_gaps: self.ranked.clone(), selections }
    }
}

impl VerticalGaps {
    /// Gaps widest first; `gaps()[l - 1]` is `vgap_{k,l}`.
    pub fn gaps(&self) -> &[Gap] {
        &self.ranked
    }

    /// `DS_k`.
    pub fn dots(&self) -> &[Dot] {
        &self.dots
    }

    /// `vs_{k,l}`: the leftmost lower boundary among the `l` widest vertical
    /// gaps. Past the last gap the value stays at the smallest birth.
    pub fn vs(&self, l: usize) -> Option<f64> {
        if l == 0 {
            return None;
        }
        let l = l.min(self.ranked.len());
        self.ranked[..l].iter().map(|g| g.lower).min_by(f64::total_cmp)
    }

    /// `VS_{k,l}`: dots of `DS_k` on or left of the line `x = vs_{k,l}`.
    pub fn vs_dots(&self, l: usize) -> Vec<Dot> {
        let Some(vs) = self.vs(l) else { return Vec::new() };
        self.dots.iter().filter(|d| d.birth <= vs + DIAGRAM_TOLERANCE).copied().collect()
    }
}

/// Serialisable view of a [`GapDecomposition`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub diagonal_gaps: Vec<Gap>,
    pub selections: Vec<Selection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub k: usize,
    pub ds: f64,
    pub ds_count: usize,
    pub vertical_gaps: Vec<Gap>,
    pub vs: Vec<VerticalSelection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerticalSelection {
    pub l: usize,
    pub vs: f64,
    pub vs_count: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_scale() -> PersistenceDiagram {
        PersistenceDiagram::from_pairs(1, [(1.5, 2.577), (2.0, 2.577)])
    }

    #[test]
    fn two_scale_diagonal_gaps() {
        let gd = diagonal_gaps(&two_scale());
        assert_eq!(gd.gaps().len(), 2);
        assert_eq!(gd.gaps()[0].lower, 0.0);
        assert!((gd.ds(1).unwrap() - 0.577).abs() < 1e-12);
        assert!((gd.ds(2).unwrap() - 0.577).abs() < 1e-12);
        assert_eq!(gd.ds_dots(1).len(), 2);
        // the second widest strip sits between the two persistence levels
        assert!((gd.gaps()[1].upper - 1.077).abs() < 1e-12);
    }

    #[test]
    fn two_scale_vertical_gaps() {
        let gd = diagonal_gaps(&two_scale());
        let v = gd.vertical(1).unwrap();
        assert_eq!(v.gaps()[0].width(), f64::INFINITY);
        assert_eq!(v.vs(1), Some(2.0));
        assert_eq!(v.vs_dots(1).len(), 2);
        assert_eq!(v.vs(2), Some(1.5));
        assert_eq!(v.vs_dots(2), vec![Dot { birth: 1.5, death: 2.577, multiplicity: 1 }]);
        // saturation past the last gap
        assert_eq!(v.vs(5), Some(1.5));
    }

    #[test]
    fn double_dot_from_zero() {
        let gd = diagonal_gaps(&PersistenceDiagram::from_pairs(1, [(0.0, 2.577), (0.0, 2.577)]));
        assert_eq!(gd.gaps().len(), 1);
        assert_eq!(gd.ds(1), Some(2.577));
        assert_eq!(gd.vs(1, 1), Some(0.0));
        assert_eq!(gd.ds_dots(1)[0].multiplicity, 2);
    }

    #[test]
    fn empty_diagram_has_no_gaps() {
        let gd = diagonal_gaps(&PersistenceDiagram::default());
        assert!(gd.gaps().is_empty());
        assert_eq!(gd.ds(1), None);
        assert!(gd.vertical(1).is_none());
    }

    #[test]
    fn single_dot_selects_its_birth() {
        let gd = diagonal_gaps(&PersistenceDiagram::from_pairs(1, [(0.3, 1.1)]));
        assert_eq!(gd.vs(1, 1), Some(0.3));
    }

    #[test]
    fn equal_widths_prefer_lower_gap() {
        // levels 0, 1, 2: both gaps have width 1
        let gd = diagonal_gaps(&PersistenceDiagram::from_pairs(1, [(0.0, 1.0), (0.0, 2.0)]));
        assert_eq!(gd.gaps()[0], Gap { lower: 0.0, upper: 1.0 });
        assert_eq!(gd.ds(1), Some(1.0));
    }

    #[test]
    fn report_round_trips() {
        let report = diagonal_gaps(&two_scale()).report(3);
        let json = serde_json::to_string(&report).unwrap();
        let back: GapReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        assert_eq!(report.selections.len(), 2);
    }
}
