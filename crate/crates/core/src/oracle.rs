//! Brute-force ground truth: the explicit transmission graph and plain
//! shortest-path, BFS and reachability computations over it.
//!
//! Sizes are capped because everything here is quadratic or worse. The caps
//! can be raised through `TSPAN_ORACLE_CAP` (materialization) and
//! `TSPAN_APSP_CAP` (all-pairs sweeps).

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use ordered_float::OrderedFloat;

use crate::geometry::{Point, Site};
use crate::par::{map_range, Execution};
use crate::spanner::SpannerGraph;

pub const MATERIALIZE_CAP: usize = 2000;
pub const APSP_CAP: usize = 600;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} is capped at n = {cap}, got n = {n}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },
}

fn cap(var: &str, default: usize) -> usize {
    std::env::var(var).ok().and_then(|v| v.parse().ok()).unwrap_or(default)
}

pub fn materialize_cap() -> usize {
    cap("TSPAN_ORACLE_CAP", MATERIALIZE_CAP)
}

pub fn apsp_cap() -> usize {
    cap("TSPAN_APSP_CAP", APSP_CAP)
}

/// A directed graph with nonnegative edge weights.
pub trait WeightedGraph {
    fn node_count(&self) -> usize;
    fn for_each_out(&self, u: usize, f: impl FnMut(usize, f64));
    fn edge_count(&self) -> usize;
}

/// Transmission graph: `p -> q` iff `|pq| <= r_p` (with the `EPS` slack).
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitGraph {
    out: Vec<Vec<(u32, f64)>>,
    m: usize,
}

impl ExplicitGraph {
    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn out(&self, p: usize) -> &[(u32, f64)] {
        &self.out[p]
    }

    pub fn contains(&self, p: usize, q: usize) -> bool {
        self.out[p].binary_search_by_key(&(q as u32), |e| e.0).is_ok()
    }

    /// All edges `(p, q)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(p, l)| l.iter().map(move |&(q, _)| (p, q as usize)))
    }
}

impl WeightedGraph for ExplicitGraph {
    fn node_count(&self) -> usize {
        self.out.len()
    }

    fn for_each_out(&self, u: usize, mut f: impl FnMut(usize, f64)) {
        for &(v, w) in &self.out[u] {
            f(v as usize, w);
        }
    }

    fn edge_count(&self) -> usize {
        self.m
    }
}

impl WeightedGraph for SpannerGraph {
    fn node_count(&self) -> usize {
        self.n
    }

    fn for_each_out(&self, u: usize, mut f: impl FnMut(usize, f64)) {
        for (v, w) in self.out_edges(u) {
            f(v, w);
        }
    }

    fn edge_count(&self) -> usize {
        self.m()
    }
}

/// Exact all-pairs test, capped by [`materialize_cap`].
pub fn materialize(sites: &[Site]) -> Result<ExplicitGraph, OracleError> {
    let cap = materialize_cap();
    if sites.len() > cap {
        return Err(OracleError::CapExceeded { what: "materialize", n: sites.len(), cap });
    }
    Ok(materialize_uncapped(sites))
}

pub(crate) fn materialize_uncapped(sites: &[Site]) -> ExplicitGraph {
    let mut m = 0;
    let out: Vec<Vec<(u32, f64)>> = sites
        .iter()
        .enumerate()
        .map(|(p, sp)| {
            let list: Vec<(u32, f64)> = sites
                .iter()
                .enumerate()
                .filter(|&(q, sq)| q != p && sp.covers(sq.point()))
                .map(|(q, sq)| (q as u32, sp.point().dist(sq.point())))
                .collect();
            m += list.len();
            list
        })
        .collect();
    ExplicitGraph { out, m }
}

/// Shortest-path distances from `source`; `f64::INFINITY` if unreachable.
/// Dense graphs use the quadratic array variant.
pub fn dijkstra_all(g: &impl WeightedGraph, source: usize) -> Vec<f64> {
    let n = g.node_count();
    if n > 0 && g.edge_count() * 8 > n * n {
        return dijkstra_dense(g, source);
    }
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Reverse((OrderedFloat(0.0), source)));
    while let Some(Reverse((OrderedFloat(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        g.for_each_out(u, |v, w| {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((OrderedFloat(nd), v)));
            }
        });
    }
    dist
}

fn dijkstra_dense(g: &impl WeightedGraph, source: usize) -> Vec<f64> {
    let n = g.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[source] = 0.0;
    loop {
        let mut u = usize::MAX;
        let mut best = f64::INFINITY;
        for v in 0..n {
            if !done[v] && dist[v] < best {
                best = dist[v];
                u = v;
            }
        }
        if u == usize::MAX {
            break;
        }
        done[u] = true;
        g.for_each_out(u, |v, w| {
            if best + w < dist[v] {
                dist[v] = best + w;
            }
        });
    }
    dist
}

/// Distance matrix of `g`, one Dijkstra per source, capped by [`apsp_cap`].
pub fn all_pairs<G: WeightedGraph + Sync>(g: &G, exec: Execution) -> Result<Vec<Vec<f64>>, OracleError> {
    let cap = apsp_cap();
    let n = g.node_count();
    if n > cap {
        return Err(OracleError::CapExceeded { what: "all-pairs shortest paths", n, cap });
    }
    Ok(map_range(exec, n, |s| dijkstra_all(g, s)))
}

/// Hop distances from `root`; `None` if unreachable.
pub fn bfs_oracle(g: &ExplicitGraph, root: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    let mut queue = VecDeque::new();
    dist[root] = Some(0);
    queue.push_back(root);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].expect("queued sites have a distance");
        for &(v, _) in g.out(u) {
            if dist[v as usize].is_none() {
                dist[v as usize] = Some(d + 1);
                queue.push_back(v as usize);
            }
        }
    }
    dist
}

/// Whether `s` reaches some site whose disk contains `t`.
pub fn geom_reach_oracle(sites: &[Site], g: &ExplicitGraph, s: usize, t: Point) -> bool {
    bfs_oracle(g, s).iter().zip(sites).any(|(d, site)| d.is_some() && site.covers(t))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StretchReport {
    /// Ordered pairs `p != q` with `q` reachable from `p`.
    pub pairs: usize,
    pub max_ratio: f64,
    /// `(p, q, d_H / d_G)` for every pair above `t (1 + 1e-9)`.
    pub violations: Vec<(usize, usize, f64)>,
}

impl StretchReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares `h` against precomputed distances of the transmission graph.
pub fn audit_stretch_against(dg: &[Vec<f64>], h: &SpannerGraph, t: f64, exec: Execution) -> StretchReport {
    let rows = map_range(exec, dg.len(), |p| {
        let dh = dijkstra_all(h, p);
        let mut pairs = 0;
        let mut max_ratio: f64 = 0.0;
        let mut bad = Vec::new();
        for q in 0..dg.len() {
            let d = dg[p][q];
            if q == p || !d.is_finite() {
                continue;
            }
            pairs += 1;
            let ratio = if d == 0.0 {
                if dh[q] == 0.0 {
                    1.0
                } else {
                    f64::INFINITY
                }
            } else {
                dh[q] / d
            };
            max_ratio = max_ratio.max(ratio);
            if dh[q].is_nan() || dh[q] > t * d * (1.0 + 1e-9) {
                bad.push((p, q, ratio));
            }
        }
        (pairs, max_ratio, bad)
    });
    let mut report = StretchReport::default();
    for (pairs, max_ratio, bad) in rows {
        report.pairs += pairs;
        report.max_ratio = report.max_ratio.max(max_ratio);
        report.violations.extend(bad);
    }
    report
}

/// Maximum of `d_H / d_G` over all reachable ordered pairs.
pub fn audit_stretch(sites: &[Site], h: &SpannerGraph, t: f64) -> Result<StretchReport, OracleError> {
    let g = materialize(sites)?;
    let dg = all_pairs(&g, Execution::default())?;
    Ok(audit_stretch_against(&dg, h, t, Execution::default()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mutual_pair_has_two_edges() {
        let sites = vec![Site::new(0, 0.0, 0.0, 2.0), Site::new(1, 1.0, 0.0, 2.0)];
        assert_eq!(materialize(&sites).unwrap().m(), 2);
        let apart = vec![Site::new(0, 0.0, 0.0, 0.5), Site::new(1, 1.0, 0.0, 0.5)];
        assert_eq!(materialize(&apart).unwrap().m(), 0);
    }

    #[test]
    fn hand_counted_five_sites() {
        // 0 reaches 1,2; 1 reaches 0; 2 reaches nobody; 3 reaches 2,4; 4 reaches 3
        let sites = vec![
            Site::new(0, 0.0, 0.0, 2.0),
            Site::new(1, 1.0, 0.0, 1.0),
            Site::new(2, 0.0, 2.0, 0.1),
            Site::new(3, 0.0, 4.0, 2.0),
            Site::new(4, 1.5, 4.0, 1.5),
        ];
        let g = materialize(&sites).unwrap();
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 0), (3, 2), (3, 4), (4, 3)]);
    }

    #[test]
    fn path_distances_are_prefix_sums() {
        let sites: Vec<Site> = (0..6).map(|i| Site::new(i, (i * i) as f64, 0.0, 2.0 * i as f64 + 1.0)).collect();
        let g = materialize(&sites).unwrap();
        let d = dijkstra_all(&g, 0);
        for (i, di) in d.iter().enumerate() {
            assert!((di - (i * i) as f64).abs() < 1e-12);
        }
        assert_eq!(bfs_oracle(&g, 5)[0], Some(4));
    }

    #[test]
    fn unreachable_is_infinite() {
        let sites = vec![Site::new(0, 0.0, 0.0, 1.0), Site::new(1, 5.0, 0.0, 10.0)];
        let g = materialize(&sites).unwrap();
        assert!(dijkstra_all(&g, 0)[1].is_infinite());
        assert_eq!(bfs_oracle(&g, 0)[1], None);
    }

    #[test]
    fn dense_and_heap_dijkstra_agree() {
        let sites: Vec<Site> =
            (0..40).map(|i| Site::new(i, (i * 7 % 13) as f64, (i * 5 % 11) as f64, 3.0 + (i % 4) as f64)).collect();
        let g = materialize(&sites).unwrap();
        for s in [0, 7, 39] {
            let a = dijkstra_dense(&g, s);
            let b = {
                let sparse = SpannerGraph::from_edges(
                    &sites,
                    g.edges().map(|(p, q)| (p as u32, q as u32)).collect(),
                    2.0,
                    101,
                    68,
                );
                dijkstra_all(&sparse, s)
            };
            for q in 0..40 {
                assert!((a[q] - b[q]).abs() < 1e-9 || (a[q].is_infinite() && b[q].is_infinite()));
            }
        }
    }

    #[test]
    fn identity_spanner_has_ratio_one() {
        let sites: Vec<Site> = (0..30).map(|i| Site::new(i, (i % 6) as f64, (i / 6) as f64, 1.5)).collect();
        let g = materialize(&sites).unwrap();
        let h = SpannerGraph::from_edges(&sites, g.edges().map(|(p, q)| (p as u32, q as u32)).collect(), 2.0, 101, 68);
        let r = audit_stretch(&sites, &h, 1.0).unwrap();
        assert!(r.is_ok());
        assert!((r.max_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complete_instance_distances_are_direct() {
        let sites: Vec<Site> =
            (0..25).map(|i| Site::new(i, (i * 17 % 23) as f64, (i * 11 % 19) as f64, 100.0)).collect();
        let g = materialize(&sites).unwrap();
        assert_eq!(g.m(), 25 * 24);
        for s in [0, 12] {
            let d = dijkstra_all(&g, s);
            for q in 0..25 {
                assert!((d[q] - sites[s].point().dist(sites[q].point())).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn extra_edges_never_raise_the_ratio() {
        use crate::spanner::{build_spanner, BuildOptions, Variant};
        let sites: Vec<Site> = (0..60)
            .map(|i| Site::new(i, (i * 7 % 17) as f64 * 0.9, (i * 5 % 13) as f64, 1.5 + (i % 3) as f64))
            .collect();
        let g = materialize(&sites).unwrap();
        let dg = all_pairs(&g, Execution::Sequential).unwrap();
        let (h, _) = build_spanner(&sites, 2.0, Variant::Ratio, BuildOptions::sequential()).unwrap();
        let base = audit_stretch_against(&dg, &h, 2.0, Execution::Sequential);
        let mut more: Vec<(u32, u32)> = h.edge_pairs().to_vec();
        more.extend(g.edges().step_by(3).map(|(p, q)| (p as u32, q as u32)));
        let h2 = SpannerGraph::from_edges(&sites, more, 2.0, h.k, h.c);
        let r = audit_stretch_against(&dg, &h2, 2.0, Execution::Sequential);
        assert!(r.max_ratio <= base.max_ratio + 1e-12);
    }
}
