//! Edge selection for one cone over a decomposition with presorted cell
//! lists: cells are visited by increasing level, and each still-active site
//! of a cell takes an incoming edge from the first neighbor cell whose
//! disks reach it.

use super::envelope::{select_with, EnvelopeError, SeparatingLine};
use crate::decomposition::{radius_tol, AnnulusDecomposition, QuadNode};
use crate::geometry::{cell_side, Point, Site};

pub(crate) struct ConeEdges {
    pub edges: Vec<(u32, u32)>,
    /// Largest number of edges into one site in this cone.
    pub max_in_degree: usize,
}

impl ConeEdges {
    pub fn new(mut edges: Vec<(u32, u32)>) -> Self {
        edges.sort_unstable_by_key(|&(a, b)| (b, a));
        edges.dedup();
        let mut max_in_degree = 0;
        let mut run = 0;
        for i in 0..edges.len() {
            run = if i > 0 && edges[i - 1].1 == edges[i].1 { run + 1 } else { 1 };
            max_in_degree = max_in_degree.max(run);
        }
        Self { edges, max_in_degree }
    }
}

/// `R_tau` together with `m_tau`, in id order with `m_tau` last if absent.
pub(crate) fn sources(node: &QuadNode) -> Vec<usize> {
    let mut r = node.assigned.clone();
    if r.binary_search(&node.m).is_err() {
        r.push(node.m);
    }
    r
}

pub(crate) fn select_for_cone(
    dec: &AnnulusDecomposition,
    orig: &[Site],
    cone: usize,
) -> Result<ConeEdges, EnvelopeError> {
    let s = &dec.structure;
    let k = dec.params.k;
    let mut active = vec![true; s.sites.len()];
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut found: Vec<usize> = Vec::new();
    for level in 0..s.level_count() as u32 {
        let side = cell_side(level);
        for &sigma in s.nodes_at_level(level) {
            let node = &s.nodes[sigma];
            let mut by_x: Option<Vec<usize>> = None;
            let mut by_y: Option<Vec<usize>> = None;
            for nb in dec.incoming[sigma].iter().filter(|nb| nb.cones.contains(cone, k)) {
                let tau = &s.nodes[nb.node as usize];
                let (a, b) = (node.cell, tau.cell);
                let (dx, dy) = (b.ix - a.ix, b.iy - a.iy);
                // the line runs through the middle of the empty strip between the cells
                let (line, queries) = if dx.abs() >= 2 {
                    let mid = (2 * a.ix + 1 + dx) as f64;
                    let q = by_y.get_or_insert_with(|| filter_active(&node.sorted_y, &active));
                    (SeparatingLine::Vertical(0.5 * mid * side), q)
                } else {
                    let mid = (2 * a.iy + 1 + dy) as f64;
                    let q = by_x.get_or_insert_with(|| filter_active(&node.sorted_x, &active));
                    (SeparatingLine::Horizontal(0.5 * mid * side), q)
                };
                if queries.is_empty() {
                    continue;
                }
                let rs = sources(tau);
                let disks: Vec<Site> = rs.iter().map(|&r| s.sites[r]).collect();
                let points: Vec<Point> = queries.iter().map(|&q| s.sites[q].point()).collect();
                let picks = select_with(
                    &disks,
                    &points,
                    line,
                    |d| radius_tol(d.radius, dec.radius_slack),
                    |ri, qi| orig[rs[ri]].covers(orig[queries[qi]].point()),
                )?;
                for (ri, qi) in picks {
                    edges.push((rs[ri] as u32, queries[qi] as u32));
                    found.push(queries[qi]);
                }
            }
            for q in found.drain(..) {
                active[q] = false;
            }
        }
    }
    Ok(ConeEdges::new(edges))
}

fn filter_active(list: &[u32], active: &[bool]) -> Vec<usize> {
    list.iter().map(|&q| q as usize).filter(|&q| active[q]).collect()
}
