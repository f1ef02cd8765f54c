//! Yao graph: every point connects to its nearest neighbor in each of `k`
//! cones. For `k > 6` its stretch is at most `1 / (1 - 2 sin(pi / k))`.

use crate::geometry::{cone_index, Point};
use crate::params::{spanner_parameters, ParamError};

/// Undirected edges `(i, j)`, `i < j`, sorted. Coincident points are not
/// connected; callers handle duplicates.
pub fn yao_graph(points: &[Point], k: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut best: Vec<Option<(f64, usize)>> = vec![None; k];
    for (i, &p) in points.iter().enumerate() {
        best.iter_mut().for_each(|b| *b = None);
        for (j, &q) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let Some(cone) = cone_index(p, q, k) else {
                continue;
            };
            let d = p.dist2(q);
            if best[cone].is_none_or(|(bd, bj)| d < bd || (d == bd && j < bj)) {
                best[cone] = Some((d, j));
            }
        }
        for &(_, j) in best.iter().flatten() {
            edges.push((i.min(j), i.max(j)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    edges
}

/// Stretch guaranteed by a Yao graph with `k` cones, infinite for `k <= 6`.
pub fn yao_stretch(k: usize) -> f64 {
    let s = 2.0 * (std::f64::consts::PI / k as f64).sin();
    if s >= 1.0 {
        f64::INFINITY
    } else {
        1.0 / (1.0 - s)
    }
}

/// Euclidean `t`-spanner on `points` using the cone count of `t`.
pub fn euclidean_spanner(points: &[Point], t: f64) -> Result<Vec<(usize, usize)>, ParamError> {
    let params = spanner_parameters(t)?;
    Ok(yao_graph(points, params.k))
}
