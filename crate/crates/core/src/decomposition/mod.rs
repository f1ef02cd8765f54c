//! Cell hierarchies and the annulus decomposition derived from them.
//!
//! Three hierarchies share one node type ([`QuadNode`]): a full quadtree for
//! inputs of bounded spread, a quadforest truncated at level `ceil(log2 Psi)`
//! for bounded radius ratio, and a compressed quadtree augmented with the
//! cells of a well-separated pair decomposition for arbitrary inputs.
//!
//! Sites are stored in Z-order of their level-0 cells, so the sites of every
//! aligned cell form a contiguous range of [`QuadStructure::order`].
//!
//! The decomposition keeps, for each cell `sigma`, only the neighbors `tau`
//! whose largest disk `D(m_tau)` can reach `sigma` at all. Other neighbors
//! can never contribute an edge into `sigma`, so dropping them changes no
//! output; [`AnnulusDecomposition::full_neighbors`] still enumerates the
//! complete relation.

mod components;
mod compressed;
mod index;
mod quadtree;
pub mod verify;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::io::{self, Write};

pub use components::{partition_components, partition_components_bruteforce};
pub use compressed::{augment_with_wspd, build_compressed_quadtree, compute_wspd, WspdPair};
pub use index::LevelIndex;
pub use quadtree::{build_quadforest, build_quadtree};

use crate::geometry::{cell_diameter, cell_of, cell_side, cones_containing_cell, ConeSpan, GridCell, Site};
use crate::params::SpannerParams;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum DecompositionError {
    #[error("input is not normalized: {0}")]
    NotNormalized(String),
    #[error("sites {0} and {1} share a level-0 cell")]
    Duplicate(usize, usize),
    #[error("no sites")]
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureKind {
    Quadtree,
    Quadforest,
    Compressed,
}

#[derive(Clone, Debug)]
pub struct QuadNode {
    pub cell: GridCell,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// The node's sites are `order[start..end]`.
    pub start: usize,
    pub end: usize,
    /// Site of largest radius in the cell (ties: smaller id).
    pub m: usize,
    /// Assigned sites `R_sigma`, sorted by id.
    pub assigned: Vec<usize>,
    /// Sites sorted by `(x, id)` and `(y, id)`; only for the uncompressed
    /// hierarchies.
    pub sorted_x: Vec<u32>,
    pub sorted_y: Vec<u32>,
}

impl QuadNode {
    fn new(cell: GridCell, start: usize, end: usize) -> Self {
        Self {
            cell,
            parent: None,
            children: Vec::new(),
            start,
            end,
            m: usize::MAX,
            assigned: Vec::new(),
            sorted_x: Vec::new(),
            sorted_y: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    pub fn level(&self) -> u32 {
        self.cell.level
    }
}

#[derive(Clone, Debug)]
pub struct QuadStructure {
    pub kind: StructureKind,
    /// Normalized sites, indexed by id.
    pub sites: Vec<Site>,
    pub order: Vec<usize>,
    pub nodes: Vec<QuadNode>,
    pub roots: Vec<usize>,
    by_level: Vec<Vec<usize>>,
    lookup: HashMap<GridCell, usize>,
    indices: Vec<LevelIndex>,
    level0: Vec<GridCell>,
}

impl QuadStructure {
    pub(crate) fn new(kind: StructureKind, sites: Vec<Site>, order: Vec<usize>, level0: Vec<GridCell>) -> Self {
        Self {
            kind,
            sites,
            order,
            nodes: Vec::new(),
            roots: Vec::new(),
            by_level: Vec::new(),
            lookup: HashMap::new(),
            indices: Vec::new(),
            level0,
        }
    }

    pub fn sites_of(&self, v: usize) -> &[usize] {
        let n = &self.nodes[v];
        &self.order[n.start..n.end]
    }

    pub fn node_at(&self, cell: &GridCell) -> Option<usize> {
        self.lookup.get(cell).copied()
    }

    /// Number of stored levels (`max level + 1`).
    pub fn level_count(&self) -> usize {
        self.by_level.len()
    }

    pub fn nodes_at_level(&self, level: u32) -> &[usize] {
        self.by_level.get(level as usize).map_or(&[], Vec::as_slice)
    }

    pub fn level_index(&self, level: u32) -> Option<&LevelIndex> {
        self.indices.get(level as usize)
    }

    /// The level-0 cell of a site (normalized coordinates).
    pub fn level0_cell(&self, site: usize) -> GridCell {
        self.level0[site]
    }

    /// Node of the given level whose cell contains `site`, if stored.
    pub fn node_containing(&self, site: usize, level: u32) -> Option<usize> {
        self.node_at(&self.level0[site].ancestor(level))
    }

    /// Rebuilds level lists, the cell lookup, bucket indices and `m`.
    pub(crate) fn finalize(&mut self) {
        let max_level = self.nodes.iter().map(|n| n.cell.level).max().unwrap_or(0) as usize;
        self.by_level = vec![Vec::new(); if self.nodes.is_empty() { 0 } else { max_level + 1 }];
        self.lookup.clear();
        for (i, n) in self.nodes.iter().enumerate() {
            self.by_level[n.cell.level as usize].push(i);
            self.lookup.insert(n.cell, i);
        }
        self.indices = self
            .by_level
            .iter()
            .map(|ids| {
                let cells: Vec<(usize, GridCell)> = ids.iter().map(|&i| (i, self.nodes[i].cell)).collect();
                LevelIndex::new(&cells)
            })
            .collect();
        for level in 0..self.by_level.len() {
            for k in 0..self.by_level[level].len() {
                let v = self.by_level[level][k];
                let m = if self.nodes[v].children.is_empty() {
                    let ids = &self.order[self.nodes[v].start..self.nodes[v].end];
                    best_radius(&self.sites, ids.iter().copied())
                } else {
                    best_radius(&self.sites, self.nodes[v].children.iter().map(|&c| self.nodes[c].m))
                };
                self.nodes[v].m = m;
            }
        }
    }

    /// One line per node: `level ix iy |sites| m R-size`.
    pub fn dump(&self, out: &mut dyn Write) -> io::Result<()> {
        for level in 0..self.by_level.len() {
            for &v in &self.by_level[level] {
                let n = &self.nodes[v];
                writeln!(out, "{} {} {} {} {} {}", n.cell.level, n.cell.ix, n.cell.iy, n.len(), n.m, n.assigned.len())?;
            }
        }
        Ok(())
    }
}

fn best_radius(sites: &[Site], ids: impl Iterator<Item = usize>) -> usize {
    let mut best = usize::MAX;
    for i in ids {
        if best == usize::MAX
            || sites[i].radius > sites[best].radius
            || (sites[i].radius == sites[best].radius && i < best)
        {
            best = i;
        }
    }
    best
}

pub(crate) fn level0_cells(sites: &[Site]) -> Vec<GridCell> {
    sites.iter().map(|s| cell_of(s.point(), 0)).collect()
}

/// Z-order comparison of two same-level cells with nonnegative coordinates.
pub(crate) fn morton_cmp(a: &GridCell, b: &GridCell) -> Ordering {
    let (ax, ay, bx, by) = (a.ix as u64, a.iy as u64, b.ix as u64, b.iy as u64);
    let x = ax ^ bx;
    let y = ay ^ by;
    let less_msb = |p: u64, q: u64| p < q && p < (p ^ q);
    if less_msb(x, y) {
        ay.cmp(&by)
    } else {
        ax.cmp(&bx)
    }
}

/// Sites ordered along the Z-curve of their level-0 cells, ties by id.
pub(crate) fn morton_order(level0: &[GridCell]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..level0.len()).collect();
    order.sort_by(|&a, &b| morton_cmp(&level0[a], &level0[b]).then(a.cmp(&b)));
    order
}

/// Level of the smallest aligned cell containing both level-0 cells.
pub(crate) fn lca_level(a: &GridCell, b: &GridCell) -> u32 {
    let x = (a.ix ^ b.ix) as u64;
    let y = (a.iy ^ b.iy) as u64;
    64 - (x | y).leading_zeros()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Neighbor {
    pub node: u32,
    /// Cones `j` for which the neighbor lies in `C^2_j` at the cell center.
    pub cones: ConeSpan,
}

#[derive(Clone, Debug)]
pub struct AnnulusDecomposition {
    pub structure: QuadStructure,
    pub params: SpannerParams,
    /// True for the quadforest variant, which only covers edges between
    /// level-0 cells at distance at least `c - 2`.
    pub partial: bool,
    /// For each node `sigma`, the neighbors `tau` with
    /// `d(sigma, tau) <= r(m_tau)`, sorted by node id.
    pub incoming: Vec<Vec<Neighbor>>,
    /// Absolute slack (normalized units) applied to radius comparisons.
    pub radius_slack: f64,
}

impl AnnulusDecomposition {
    /// Lower end of the `R_sigma` radius interval, in multiples of the diameter.
    pub fn assign_lower(&self) -> f64 {
        assign_lower(self.structure.kind, &self.params)
    }

    /// Every same-level node `tau` with `d(sigma, tau) in [c - 2, 2c) diam`.
    pub fn full_neighbors(&self, v: usize) -> Vec<usize> {
        let s = &self.structure;
        let cell = s.nodes[v].cell;
        let reach = 2 * self.params.c as i64 * 2 + 2;
        let mut out = Vec::new();
        if let Some(idx) = s.level_index(cell.level) {
            idx.window(cell.ix - reach, cell.ix + reach, cell.iy - reach, cell.iy + reach, |w, ix, iy| {
                if self.params.in_annulus(ix - cell.ix, iy - cell.iy) {
                    out.push(w);
                }
            });
        }
        out.sort_unstable();
        out
    }

    pub fn dump(&self, out: &mut dyn Write) -> io::Result<()> {
        self.structure.dump(out)
    }
}

fn assign_lower(kind: StructureKind, params: &SpannerParams) -> f64 {
    match kind {
        StructureKind::Compressed => params.cf() - 2.0,
        _ => params.cf(),
    }
}

/// Tolerance for a normalized radius `r`.
#[inline]
pub(crate) fn radius_tol(r: f64, slack: f64) -> f64 {
    slack + 1e-9 * r
}

/// Populates `R_sigma` and the pruned neighbor lists.
///
/// `radius_slack` is the absolute disk-membership slack expressed in
/// normalized units; interval endpoints are resolved toward inclusion.
pub fn derive_decomposition(
    mut structure: QuadStructure,
    params: SpannerParams,
    radius_slack: f64,
) -> AnnulusDecomposition {
    let lower = assign_lower(structure.kind, &params);
    let upper = 2.0 * (params.cf() + 1.0);
    for node in &mut structure.nodes {
        node.assigned.clear();
    }
    let levels = structure.level_count() as i64;
    for p in 0..structure.sites.len() {
        let r = structure.sites[p].radius;
        let tol = radius_tol(r, radius_slack);
        let hi = ((r + tol) / lower).log2().floor() as i64 + 1;
        let lo = ((r - tol).max(f64::MIN_POSITIVE) / upper).log2().floor() as i64 - 1;
        for i in lo.max(0)..=hi.min(levels - 1) {
            let d = cell_diameter(i as u32);
            if r >= lower * d - tol && r < upper * d + tol {
                if let Some(v) = structure.node_containing(p, i as u32) {
                    structure.nodes[v].assigned.push(p);
                }
            }
        }
    }
    for node in &mut structure.nodes {
        node.assigned.sort_unstable();
    }

    let mut incoming: Vec<Vec<Neighbor>> = vec![Vec::new(); structure.nodes.len()];
    let two_c = 2.0 * params.cf();
    for level in 0..structure.level_count() as u32 {
        let Some(index) = structure.level_index(level) else {
            continue;
        };
        let diam = cell_diameter(level);
        let side = cell_side(level);
        for &tau in structure.nodes_at_level(level) {
            let node = &structure.nodes[tau];
            let rm = structure.sites[node.m].radius;
            let reach = (rm + radius_tol(rm, radius_slack)).min(two_c * diam);
            // d(sigma, tau)^2 = gap_sq * diam^2 / 2 <= reach^2
            let max_gap_sq = 2.0 * (reach / diam) * (reach / diam);
            let w = (reach / side).floor() as i64 + 1;
            let cell = node.cell;
            index.window(cell.ix - w, cell.ix + w, cell.iy - w, cell.iy + w, |sigma, ix, iy| {
                let (dx, dy) = (cell.ix - ix, cell.iy - iy);
                if params.in_annulus(dx, dy) && (crate::geometry::gap_sq(dx, dy) as f64) <= max_gap_sq {
                    let sc = GridCell::new(level, ix, iy);
                    let cones = cones_containing_cell(sc.center(), &cell, params.k, 2);
                    incoming[sigma].push(Neighbor { node: tau as u32, cones });
                }
            });
        }
    }
    for list in &mut incoming {
        list.sort_unstable_by_key(|n| n.node);
    }
    let partial = structure.kind == StructureKind::Quadforest;
    AnnulusDecomposition { structure, params, partial, incoming, radius_slack }
}
