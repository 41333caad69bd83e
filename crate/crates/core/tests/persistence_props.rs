mod common;

use proptest::prelude::*;

use cloudskel::filtration::alpha_filtration;
use cloudskel::geometry::delaunay;
use cloudskel::persistence::{bottleneck_distance, compute_persistence, diagonal_gaps, PersistenceDiagram};
use common::{cloud, gf2_rank, planar_points};

fn diagram() -> impl Strategy<Value = PersistenceDiagram> {
    prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 0..8)
        .prop_map(|v| PersistenceDiagram::from_pairs(1, v.into_iter().map(|(b, p)| (b, b + p))))
}

/// Diagram with a few dots on a coarse grid, so that gaps tie often.
fn coarse_diagram() -> impl Strategy<Value = PersistenceDiagram> {
    prop::collection::vec((0u8..5, 1u8..6), 0..8).prop_map(|v| {
        PersistenceDiagram::from_pairs(1, v.into_iter().map(|(b, p)| (b as f64 * 0.5, b as f64 * 0.5 + p as f64 * 0.25)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn live_dots_count_cycles_of_the_prefix(pts in planar_points(3, 12), t in 0.0f64..1.0) {
        let Ok(tri) = delaunay(&cloud(&pts)) else { return Ok(()) };
        let f = alpha_filtration(&tri);
        let alpha = f.simplices()[((f.len() - 1) as f64 * t) as usize].value;
        let prefix: Vec<_> = f.simplices().iter().filter(|s| s.value <= alpha).collect();
        let edges: Vec<Vec<usize>> = prefix.iter().filter(|s| s.dim() == 1).map(|s| s.vertices().to_vec()).collect();
        let edge_index = |a: usize, b: usize| edges.iter().position(|e| (e[0] == a && e[1] == b) || (e[0] == b && e[1] == a)).unwrap();
        let tris: Vec<Vec<usize>> = prefix
            .iter()
            .filter(|s| s.dim() == 2)
            .map(|s| {
                let v = s.vertices();
                vec![edge_index(v[0], v[1]), edge_index(v[1], v[2]), edge_index(v[0], v[2])]
            })
            .collect();
        let betti = edges.len() - gf2_rank(&edges, pts.len()) - gf2_rank(&tris, edges.len());
        prop_assert_eq!(compute_persistence(&f).pd1.live_count(alpha), betti);
    }

    #[test]
    fn bottleneck_is_a_metric(a in diagram(), b in diagram(), c in diagram()) {
        let d = bottleneck_distance;
        prop_assert_eq!(d(&a, &a), 0.0);
        prop_assert!((d(&a, &b) - d(&b, &a)).abs() <= 1e-9);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-9);
    }

    #[test]
    fn identical_multisets_are_at_distance_zero(v in prop::collection::vec((0.0f64..1.0, 0.01f64..1.0), 0..8)) {
        let pairs: Vec<(f64, f64)> = v.iter().map(|&(b, p)| (b, b + p)).collect();
        let mut shuffled = pairs.clone();
        shuffled.reverse();
        let a = PersistenceDiagram::from_pairs(1, pairs.clone());
        let b = PersistenceDiagram::from_pairs(1, shuffled);
        prop_assert_eq!(bottleneck_distance(&a, &b), 0.0);
        if let Some(&(x, y)) = pairs.first() {
            let mut fewer = pairs.clone();
            fewer.remove(0);
            let c = PersistenceDiagram::from_pairs(1, fewer);
            prop_assert!(bottleneck_distance(&a, &c) <= (y - x) / 2.0 + 1e-12);
        }
    }

    #[test]
    fn diagonal_gaps_are_empty_and_bounded_by_dots(pd in coarse_diagram()) {
        let gd = diagonal_gaps(&pd);
        let levels: Vec<f64> = pd.finite_dots().map(|d| d.persistence()).collect();
        for g in gd.gaps() {
            prop_assert!(levels.iter().all(|&p| !(p > g.lower + 1e-9 && p < g.upper - 1e-9)));
            prop_assert!(g.lower == 0.0 || levels.iter().any(|&p| (p - g.lower).abs() <= 1e-9));
            prop_assert!(levels.iter().any(|&p| (p - g.upper).abs() <= 1e-9));
        }
        for w in gd.gaps().windows(2) {
            prop_assert!(w[0].width() >= w[1].width());
        }
    }

    #[test]
    fn vertical_gaps_are_empty_and_bounded_by_births(pd in coarse_diagram(), k in 1usize..4) {
        let gd = diagonal_gaps(&pd);
        let Some(v) = gd.vertical(k) else { return Ok(()) };
        let births: Vec<f64> = v.dots().iter().map(|d| d.birth).collect();
        for g in v.gaps() {
            prop_assert!(births.iter().all(|&b| !(b > g.lower + 1e-9 && b < g.upper - 1e-9)));
            prop_assert!(births.iter().any(|&b| (b - g.lower).abs() <= 1e-9));
            prop_assert!(g.upper.is_infinite() || births.iter().any(|&b| (b - g.upper).abs() <= 1e-9));
        }
        prop_assert_eq!(v.gaps().len(), {
            let mut b = births.clone();
            b.sort_by(f64::total_cmp);
            b.dedup_by(|x, y| (*x - *y).abs() <= 1e-9);
            b.len()
        });
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Balls of radius at least the diameter all share a point, so no cycle
    // survives past it. Noiseless samples are nearly collinear along every
    // edge and stress the radius computation of thin triangles.
    #[test]
    fn nothing_dies_after_the_diameter(kind in prop::sample::select(vec![
        cloudskel::synth::PatternKind::Hexagons(1),
        cloudskel::synth::PatternKind::Wheel(5),
        cloudskel::synth::PatternKind::Hexagons(3),
    ]), seed in any::<u64>()) {
        let g = cloudskel::synth::generate_cloud(kind, cloudskel::synth::NoiseModel::None, 100.0, seed).unwrap();
        let c = g.cloud().unwrap();
        let f = alpha_filtration(&delaunay(&c).unwrap());
        let p = compute_persistence(&f);
        let diameter = c.diameter();
        prop_assert!(p.pd1.finite_dots().all(|d| d.death <= diameter), "{:?}", p.pd1.finite_dots().last());
    }
}
