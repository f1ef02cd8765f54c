//! Exact BFS tree of the transmission graph using only a spanner.
//!
//! Layer `W_{i+1}` is found by walking spanner edges out of `W_i` and its
//! growing frontier, and admitting a target `q` only when some disk of `W_i`
//! contains it. With stretch at most 2 every site at hop distance `i + 1`
//! is reached this way.

use std::collections::VecDeque;

use crate::geom_query::{build_disk_containment, DiskContainment};
use crate::geometry::Site;
use crate::spanner::SpannerGraph;

/// Largest stretch accepted by [`bfs_tree`].
pub const MAX_BFS_STRETCH: f64 = 2.0;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum BfsError {
    #[error("root {root} out of range for {n} sites")]
    RootOutOfRange { root: usize, n: usize },
    #[error("spanner stretch {0} exceeds {MAX_BFS_STRETCH}")]
    StretchTooLarge(f64),
    #[error("spanner has {h} vertices but there are {n} sites")]
    SizeMismatch { h: usize, n: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BfsResult {
    pub root: usize,
    /// Hop distance from the root, `None` if unreachable.
    pub dist: Vec<Option<usize>>,
    /// The layer site whose disk admitted the site.
    pub parent: Vec<Option<usize>>,
    pub layers: Vec<Vec<usize>>,
    /// How often each spanner edge (in [`SpannerGraph::edges`] order) was
    /// examined.
    pub relaxations: Vec<u8>,
}

impl BfsResult {
    pub fn max_relaxations(&self) -> u8 {
        self.relaxations.iter().copied().max().unwrap_or(0)
    }
}

pub fn bfs_tree(sites: &[Site], h: &SpannerGraph, root: usize) -> Result<BfsResult, BfsError> {
    let n = sites.len();
    if root >= n {
        return Err(BfsError::RootOutOfRange { root, n });
    }
    if h.n != n {
        return Err(BfsError::SizeMismatch { h: h.n, n });
    }
    if h.t > MAX_BFS_STRETCH {
        return Err(BfsError::StretchTooLarge(h.t));
    }
    let mut dist = vec![None; n];
    let mut parent = vec![None; n];
    let mut relaxations = vec![0u8; h.m()];
    let out_start: Vec<usize> = {
        let mut acc = Vec::with_capacity(n + 1);
        let mut total = 0;
        for p in 0..n {
            acc.push(total);
            total += h.out_degree(p);
        }
        acc.push(total);
        acc
    };
    dist[root] = Some(0);
    let mut layers = vec![vec![root]];
    let mut queue = VecDeque::new();
    loop {
        let i = layers.len() - 1;
        let layer = &layers[i];
        if layer.is_empty() {
            layers.pop();
            break;
        }
        let members: Vec<Site> = layer.iter().map(|&p| sites[p]).collect();
        let disks = build_disk_containment(&members);
        let mut next = Vec::new();
        queue.extend(layer.iter().copied());
        while let Some(p) = queue.pop_front() {
            for (e, (q, _)) in h.out_edges(p).enumerate() {
                let slot = &mut relaxations[out_start[p] + e];
                *slot = slot.saturating_add(1);
                if dist[q].is_some() {
                    continue;
                }
                if let Some(u) = disks.query(sites[q].point()) {
                    dist[q] = Some(i + 1);
                    parent[q] = Some(u);
                    next.push(q);
                    queue.push_back(q);
                }
            }
        }
        layers.push(next);
    }
    Ok(BfsResult { root, dist, parent, layers, relaxations })
}
