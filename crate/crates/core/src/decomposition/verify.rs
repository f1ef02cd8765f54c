//! Brute-force checks of the two decomposition properties: every neighbor
//! pair is same-level and `[c - 2, 2c)`-separated, and every edge of the
//! transmission graph is represented by some neighbor pair.

use super::{radius_tol, AnnulusDecomposition};
use crate::geometry::{cell_distance, within};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DecompositionReport {
    pub neighbor_pairs: usize,
    /// `(sigma, tau)` node pairs violating separation or level equality.
    pub separation_violations: Vec<(usize, usize)>,
    /// Full neighbor relation not symmetric at these pairs.
    pub symmetry_violations: Vec<(usize, usize)>,
    pub largest_neighborhood: usize,
    pub edges_checked: usize,
    /// Edges `(p, q)` with no representing pair.
    pub uncovered_edges: Vec<(usize, usize)>,
    pub max_assignments_per_site: usize,
}

impl DecompositionReport {
    pub fn is_ok(&self) -> bool {
        self.separation_violations.is_empty() && self.symmetry_violations.is_empty() && self.uncovered_edges.is_empty()
    }
}

/// Checks the stored and full neighbor relations.
pub fn check_neighbor_pairs(dec: &AnnulusDecomposition, report: &mut DecompositionReport) {
    let s = &dec.structure;
    let lo = dec.params.cf() - 2.0;
    let hi = 2.0 * dec.params.cf();
    let bad = |sigma: usize, tau: usize, report: &mut DecompositionReport| {
        let (a, b) = (s.nodes[sigma].cell, s.nodes[tau].cell);
        let d = cell_distance(&a, &b) / a.diameter();
        let ok = a.level == b.level && d >= lo * (1.0 - 1e-12) && d < hi;
        if !ok {
            report.separation_violations.push((sigma, tau));
        }
    };
    for (sigma, list) in dec.incoming.iter().enumerate() {
        for nb in list {
            report.neighbor_pairs += 1;
            bad(sigma, nb.node as usize, report);
        }
    }
    for sigma in 0..s.nodes.len() {
        let full = dec.full_neighbors(sigma);
        report.largest_neighborhood = report.largest_neighborhood.max(full.len());
        for &tau in &full {
            bad(sigma, tau, report);
            if dec.full_neighbors(tau).binary_search(&sigma).is_err() {
                report.symmetry_violations.push((sigma, tau));
            }
        }
    }
    let mut counts = vec![0usize; s.sites.len()];
    for node in &s.nodes {
        for &p in &node.assigned {
            counts[p] += 1;
        }
    }
    report.max_assignments_per_site = counts.into_iter().max().unwrap_or(0);
}

/// True if some stored pair `(sigma, tau)` has `q in sigma`, `p in tau` and
/// either `p in R_tau` or `q in D(m_tau)`.
pub fn edge_is_represented(dec: &AnnulusDecomposition, p: usize, q: usize) -> bool {
    let s = &dec.structure;
    for level in 0..s.level_count() as u32 {
        let (Some(sigma), Some(tau)) = (s.node_containing(q, level), s.node_containing(p, level)) else {
            continue;
        };
        let (a, b) = (s.nodes[sigma].cell, s.nodes[tau].cell);
        if !dec.params.in_annulus(b.ix - a.ix, b.iy - a.iy) {
            continue;
        }
        if dec.incoming[sigma].binary_search_by_key(&(tau as u32), |n| n.node).is_err() {
            continue;
        }
        if s.nodes[tau].assigned.binary_search(&p).is_ok() {
            return true;
        }
        let m = &s.sites[s.nodes[tau].m];
        let r = m.radius + radius_tol(m.radius, dec.radius_slack);
        if within(m.point().dist2(s.sites[q].point()), r) {
            return true;
        }
    }
    false
}

/// Checks every given edge `(p, q)` of the transmission graph. For a partial
/// decomposition, edges between level-0 cells closer than `c - 2` are
/// skipped.
pub fn check_edge_coverage(dec: &AnnulusDecomposition, edges: &[(usize, usize)], report: &mut DecompositionReport) {
    let s = &dec.structure;
    for &(p, q) in edges {
        if dec.partial {
            let (a, b) = (s.level0_cell(p), s.level0_cell(q));
            if dec.params.clique_offset(b.ix - a.ix, b.iy - a.iy) {
                continue;
            }
        }
        report.edges_checked += 1;
        if !edge_is_represented(dec, p, q) {
            report.uncovered_edges.push((p, q));
        }
    }
}

pub fn check_decomposition(dec: &AnnulusDecomposition, edges: &[(usize, usize)]) -> DecompositionReport {
    let mut report = DecompositionReport::default();
    check_neighbor_pairs(dec, &mut report);
    check_edge_coverage(dec, edges, &mut report);
    report
}
