// Shared helpers for the integration tests; each test target uses a subset.
#![allow(dead_code)]

use proptest::prelude::*;

use cloudskel::geometry::{Point2, PointCloud};

/// Between `min` and `max` points in the unit square, on a 1e-6 grid so that
/// written coordinates are short decimals.
pub fn planar_points(min: usize, max: usize) -> impl Strategy<Value = Vec<Point2>> {
    prop::collection::vec((0u32..1_000_000, 0u32..1_000_000), min..=max).prop_map(|v| {
        let mut pts: Vec<Point2> = v.into_iter().map(|(x, y)| [x as f64 * 1e-6, y as f64 * 1e-6]).collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        pts
    })
}

pub fn cloud(points: &[Point2]) -> PointCloud {
    PointCloud::from_points(points).unwrap()
}

/// Rank over GF(2) of rows given as sets of column indices.
pub fn gf2_rank(rows: &[Vec<usize>], width: usize) -> usize {
    let words = width.div_ceil(64).max(1);
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            let mut bits = vec![0u64; words];
            for &c in r {
                bits[c / 64] ^= 1 << (c % 64);
            }
            bits
        })
        .collect();
    let mut rank = 0;
    for col in 0..width {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..m.len()).find(|&i| m[i][w] & b != 0) else { continue };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
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
