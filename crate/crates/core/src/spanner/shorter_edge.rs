//! Witness check: every transmission edge `pq` left out of the spanner must
//! have a kept edge `rq` with `|pr| <= |pq| - |rq| / t`. This is what makes
//! induction on edge length give stretch `t`.

use super::{SpannerError, SpannerGraph, Variant};
use crate::geometry::{cell_of, GridCell, Site, EPS};
use crate::normalize::normalization_for;
use crate::params::spanner_parameters;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ShorterEdgeReport {
    /// Edges of the transmission graph missing from the spanner and checked.
    pub checked: usize,
    /// Missing edges exempt because both ends lie in nearby level-0 cells.
    pub skipped: usize,
    pub violations: Vec<(usize, usize)>,
}

impl ShorterEdgeReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Whether `pq` has a witness among the in-edges of `q`.
pub fn has_witness(sites: &[Site], h: &SpannerGraph, p: usize, q: usize) -> bool {
    let pq = sites[p].point().dist(sites[q].point());
    let tol = EPS + 1e-9 * pq;
    h.in_edges(q).any(|(r, rq)| sites[p].point().dist(sites[r].point()) <= pq - rq / h.t + tol)
}

/// Checks every transmission edge absent from `h`. For [`Variant::Ratio`],
/// edges between level-0 cells closer than `c - 2` (after that variant's
/// normalization) are exempt; they are handled by the Yao graphs instead.
pub fn verify_shorter_edge(
    sites: &[Site],
    h: &SpannerGraph,
    variant: Variant,
) -> Result<ShorterEdgeReport, SpannerError> {
    let params = spanner_parameters(h.t)?;
    let cells: Option<Vec<GridCell>> = if variant == Variant::Ratio && !sites.is_empty() {
        let map = normalization_for(sites, variant.normalize_mode(&params))?;
        Some(sites.iter().map(|s| cell_of(map.apply(s.point()), 0)).collect())
    } else {
        None
    };
    let mut report = ShorterEdgeReport::default();
    for p in 0..sites.len() {
        for q in 0..sites.len() {
            if p == q || !sites[p].covers(sites[q].point()) || h.contains(p, q) {
                continue;
            }
            if let Some(cells) = &cells {
                let (a, b) = (cells[p], cells[q]);
                if params.clique_offset(b.ix - a.ix, b.iy - a.iy) {
                    report.skipped += 1;
                    continue;
                }
            }
            report.checked += 1;
            if !has_witness(sites, h, p, q) {
                report.violations.push((p, q));
            }
        }
    }
    Ok(report)
}
