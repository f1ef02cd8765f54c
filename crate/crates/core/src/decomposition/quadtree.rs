//! Uncompressed hierarchies: the quadtree over all levels up to the cell
//! containing every site, and the quadforest truncated at `ceil(log2 Psi)`.

use super::{lca_level, level0_cells, morton_order, DecompositionError, QuadNode, QuadStructure, StructureKind};
use crate::geometry::{GridCell, Site};
use crate::normalize::{closest_pair, radius_ratio};
use crate::params::SpannerParams;

const NORMALIZATION_TOL: f64 = 1e-6;

/// Quadtree for sites normalized so that the closest pair has distance `c`.
pub fn build_quadtree(sites: Vec<Site>, params: &SpannerParams) -> Result<QuadStructure, DecompositionError> {
    if sites.is_empty() {
        return Err(DecompositionError::Empty);
    }
    if sites.len() >= 2 {
        let points: Vec<_> = sites.iter().map(Site::point).collect();
        let (i, j, d) = closest_pair(&points).expect("at least two sites");
        if d == 0.0 {
            return Err(DecompositionError::Duplicate(i.min(j), i.max(j)));
        }
        if (d - params.cf()).abs() > NORMALIZATION_TOL * params.cf() {
            return Err(DecompositionError::NotNormalized(format!("closest pair {d}, expected {}", params.c)));
        }
    }
    let level0 = level0_cells(&sites);
    let order = morton_order(&level0);
    let top = lca_level(&level0[order[0]], &level0[*order.last().expect("nonempty")]);
    Ok(build_uniform(StructureKind::Quadtree, sites, order, level0, top))
}

/// Number of stored levels above level 0 for radius ratio `psi`.
pub fn forest_height(psi: f64) -> u32 {
    let mut l = 0u32;
    while (2f64).powi(l as i32) < psi * (1.0 - 1e-12) {
        l += 1;
    }
    l
}

/// Quadforest for sites normalized so that the smallest radius is `c`.
pub fn build_quadforest(sites: Vec<Site>, params: &SpannerParams) -> Result<QuadStructure, DecompositionError> {
    if sites.is_empty() {
        return Err(DecompositionError::Empty);
    }
    let rmin = sites.iter().map(|s| s.radius).fold(f64::INFINITY, f64::min);
    if (rmin - params.cf()).abs() > NORMALIZATION_TOL * params.cf() {
        return Err(DecompositionError::NotNormalized(format!("smallest radius {rmin}, expected {}", params.c)));
    }
    let top = forest_height(radius_ratio(&sites));
    let level0 = level0_cells(&sites);
    let order = morton_order(&level0);
    Ok(build_uniform(StructureKind::Quadforest, sites, order, level0, top))
}

fn build_uniform(
    kind: StructureKind,
    sites: Vec<Site>,
    order: Vec<usize>,
    level0: Vec<GridCell>,
    top: u32,
) -> QuadStructure {
    let mut s = QuadStructure::new(kind, sites, order, level0);
    let mut current: Vec<usize> = Vec::new();
    let mut i = 0;
    while i < s.order.len() {
        let cell = s.level0[s.order[i]];
        let mut j = i + 1;
        while j < s.order.len() && s.level0[s.order[j]] == cell {
            j += 1;
        }
        let mut node = QuadNode::new(cell, i, j);
        let ids = &s.order[i..j];
        node.sorted_x = sorted_by(&s.sites, ids, |a| (a.x, a.id));
        node.sorted_y = sorted_by(&s.sites, ids, |a| (a.y, a.id));
        current.push(s.nodes.len());
        s.nodes.push(node);
        i = j;
    }
    for level in 1..=top {
        let mut next = Vec::new();
        let mut a = 0;
        while a < current.len() {
            let cell = s.nodes[current[a]].cell.ancestor(level);
            let mut b = a + 1;
            while b < current.len() && s.nodes[current[b]].cell.ancestor(level) == cell {
                b += 1;
            }
            let kids: Vec<usize> = current[a..b].to_vec();
            let start = s.nodes[kids[0]].start;
            let end = s.nodes[*kids.last().expect("nonempty run")].end;
            let mut node = QuadNode::new(cell, start, end);
            node.sorted_x = merge_children(&s, &kids, |n| &n.sorted_x, |x| (x.x, x.id));
            node.sorted_y = merge_children(&s, &kids, |n| &n.sorted_y, |x| (x.y, x.id));
            let v = s.nodes.len();
            for &k in &kids {
                s.nodes[k].parent = Some(v);
            }
            node.children = kids;
            s.nodes.push(node);
            next.push(v);
            a = b;
        }
        current = next;
    }
    s.roots = current;
    s.finalize();
    s
}

fn sorted_by(sites: &[Site], ids: &[usize], key: impl Fn(&Site) -> (f64, usize)) -> Vec<u32> {
    let mut v: Vec<u32> = ids.iter().map(|&i| i as u32).collect();
    v.sort_by(|&a, &b| {
        let (ka, kb) = (key(&sites[a as usize]), key(&sites[b as usize]));
        ka.0.total_cmp(&kb.0).then(ka.1.cmp(&kb.1))
    });
    v
}

/// k-way merge of the children's sorted lists.
fn merge_children(
    s: &QuadStructure,
    kids: &[usize],
    list: impl Fn(&QuadNode) -> &Vec<u32>,
    key: impl Fn(&Site) -> (f64, usize),
) -> Vec<u32> {
    let lists: Vec<&Vec<u32>> = kids.iter().map(|&k| list(&s.nodes[k])).collect();
    let total = lists.iter().map(|l| l.len()).sum();
    let mut pos = vec![0usize; lists.len()];
    let mut out = Vec::with_capacity(total);
    for _ in 0..total {
        let mut best: Option<(usize, (f64, usize))> = None;
        for (li, l) in lists.iter().enumerate() {
            if let Some(&id) = l.get(pos[li]) {
                let k = key(&s.sites[id as usize]);
                let better = match best {
                    None => true,
                    Some((_, bk)) => k.0.total_cmp(&bk.0).then(k.1.cmp(&bk.1)).is_lt(),
                };
                if better {
                    best = Some((li, k));
                }
            }
        }
        let (li, _) = best.expect("lists not exhausted");
        out.push(lists[li][pos[li]]);
        pos[li] += 1;
    }
    out
}
