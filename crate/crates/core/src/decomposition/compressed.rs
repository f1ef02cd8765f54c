//! Compressed quadtree, its well-separated pair decomposition, and the
//! insertion of intermediate cells that turns the pairs into same-level
//! neighbors.
//!
//! A node's cell is the smallest aligned cell holding all of its sites.
//! Its children are the nonempty quadrants, each shrunk to the smallest
//! aligned cell of its own sites, so a child is either the quadrant itself
//! or a cell at most a quarter of the parent's diameter with no other site
//! in between. Single-site leaves are level-0 cells.

use std::collections::{BTreeSet, HashMap};

use super::{lca_level, level0_cells, morton_order, DecompositionError, QuadNode, QuadStructure, StructureKind};
use crate::geometry::{cell_distance, Site};
use crate::params::SpannerParams;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WspdPair {
    pub v: usize,
    pub w: usize,
    /// Node whose split produced the pair (the common parent for siblings).
    pub from: usize,
    /// `c * max(diam v, diam w) <= d(v, w)`.
    pub separation_ok: bool,
}

/// Requires distinct level-0 cells for all sites, which holds whenever the
/// closest pair is at least `c + 2 > 1`.
pub fn build_compressed_quadtree(sites: Vec<Site>) -> Result<QuadStructure, DecompositionError> {
    if sites.is_empty() {
        return Err(DecompositionError::Empty);
    }
    let level0 = level0_cells(&sites);
    let order = morton_order(&level0);
    for w in order.windows(2) {
        if level0[w[0]] == level0[w[1]] {
            return Err(DecompositionError::Duplicate(w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    let mut s = QuadStructure::new(StructureKind::Compressed, sites, order, level0);
    let n = s.order.len();
    let root = build_range(&mut s, 0, n);
    s.roots = vec![root];
    s.finalize();
    Ok(s)
}

fn build_range(s: &mut QuadStructure, lo: usize, hi: usize) -> usize {
    let first = s.level0[s.order[lo]];
    if hi - lo == 1 {
        s.nodes.push(QuadNode::new(first, lo, hi));
        return s.nodes.len() - 1;
    }
    let level = lca_level(&first, &s.level0[s.order[hi - 1]]);
    let v = s.nodes.len();
    s.nodes.push(QuadNode::new(first.ancestor(level), lo, hi));
    let mut kids = Vec::new();
    let mut a = lo;
    while a < hi {
        let quadrant = s.level0[s.order[a]].ancestor(level - 1);
        let mut b = a + 1;
        while b < hi && s.level0[s.order[b]].ancestor(level - 1) == quadrant {
            b += 1;
        }
        let k = build_range(s, a, b);
        s.nodes[k].parent = Some(v);
        kids.push(k);
        a = b;
    }
    s.nodes[v].children = kids;
    v
}

/// Pairs found by splitting the node of larger diameter until
/// `c * max(diam) <= d(v, w)`. Each pair stands for both orientations, so
/// every ordered pair of distinct sites falls in exactly one pair.
pub fn compute_wspd(tree: &QuadStructure, c: f64) -> Vec<WspdPair> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for (u, node) in tree.nodes.iter().enumerate() {
        let kids = &node.children;
        for i in 0..kids.len() {
            for j in i + 1..kids.len() {
                stack.push((kids[i], kids[j], u));
            }
        }
    }
    while let Some((v, w, from)) = stack.pop() {
        let (cv, cw) = (tree.nodes[v].cell, tree.nodes[w].cell);
        let d = cell_distance(&cv, &cw);
        let big = cv.diameter().max(cw.diameter());
        if c * big <= d {
            out.push(WspdPair { v, w, from, separation_ok: true });
            continue;
        }
        // split the larger cell; a leaf is level 0 and never the strictly larger one
        let split_v = if cv.level != cw.level { cv.level > cw.level } else { tree.nodes[w].children.is_empty() };
        let (big_node, other) = if split_v { (v, w) } else { (w, v) };
        if tree.nodes[big_node].children.is_empty() {
            // two leaves that are too close; only possible for unnormalized input
            out.push(WspdPair { v, w, from, separation_ok: false });
            continue;
        }
        for &ch in &tree.nodes[big_node].children {
            if split_v {
                stack.push((ch, other, big_node));
            } else {
                stack.push((other, ch, big_node));
            }
        }
    }
    out.sort_by_key(|p| (p.v.min(p.w), p.v.max(p.w)));
    out
}

/// Inserts, for every pair, cells of diameter `min(d(v,w)/c, diam(from))`
/// rounded down to a power of two above `v` and `w`. Cells landing on the
/// same tree edge are merged and chained by decreasing level; an inserted
/// node holds exactly the sites of the child below it.
pub fn augment_with_wspd(tree: &QuadStructure, pairs: &[WspdPair], params: &SpannerParams) -> QuadStructure {
    let mut s = tree.clone();
    let c = params.cf();
    let mut wanted: HashMap<usize, BTreeSet<u32>> = HashMap::new();
    for p in pairs {
        let (cv, cw) = (s.nodes[p.v].cell, s.nodes[p.w].cell);
        let d = cell_distance(&cv, &cw);
        let r = (d / c).min(s.nodes[p.from].cell.diameter());
        let raw = if r > 0.0 { r.log2().floor() as i64 } else { 0 };
        for x in [p.v, p.w] {
            let Some(parent) = s.nodes[x].parent else {
                continue;
            };
            let lo = s.nodes[x].cell.level as i64;
            let hi = s.nodes[parent].cell.level as i64;
            let level = raw.max(cv.level.max(cw.level) as i64).clamp(lo, hi);
            if level > lo && level < hi {
                wanted.entry(x).or_default().insert(level as u32);
            }
        }
    }
    let mut children: Vec<usize> = wanted.keys().copied().collect();
    children.sort_unstable();
    for x in children {
        let parent = s.nodes[x].parent.expect("inserted above a non-root");
        let cell = s.nodes[x].cell;
        let (start, end) = (s.nodes[x].start, s.nodes[x].end);
        let mut above = parent;
        let mut slot = s.nodes[parent].children.iter().position(|&k| k == x).expect("child listed");
        for &level in wanted[&x].iter().rev() {
            let v = s.nodes.len();
            let mut node = QuadNode::new(cell.ancestor(level), start, end);
            node.parent = Some(above);
            s.nodes.push(node);
            s.nodes[above].children[slot] = v;
            above = v;
            s.nodes[v].children.push(x);
            slot = 0;
        }
        s.nodes[x].parent = Some(above);
    }
    s.finalize();
    s
}
