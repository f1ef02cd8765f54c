//! Edge selection for one cone driven by a dynamic nearest-neighbor
//! structure over the still-active sites of each node.
//!
//! Nodes are visited by increasing level. A node inherits the structure of
//! its largest child and absorbs the others. For each neighbor `tau` in the
//! cone and each source `r`, nearest active sites are taken while `r`
//! reaches them; they are put back once `tau` is done and removed for good
//! at the end of the node.

use super::engine::{sources, ConeEdges};
use crate::decomposition::AnnulusDecomposition;
use crate::geom_query::DynamicNN;
use crate::geometry::Site;

pub(crate) fn select_for_cone_nn<N: DynamicNN + Default>(
    dec: &AnnulusDecomposition,
    orig: &[Site],
    cone: usize,
) -> ConeEdges {
    let s = &dec.structure;
    let k = dec.params.k;
    let mut held: Vec<Option<N>> = (0..s.nodes.len()).map(|_| None).collect();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut found: Vec<usize> = Vec::new();
    let mut taken: Vec<usize> = Vec::new();
    for level in 0..s.level_count() as u32 {
        for &v in s.nodes_at_level(level) {
            let node = &s.nodes[v];
            let mut set = if node.children.is_empty() {
                let mut set = N::default();
                for &p in s.sites_of(v) {
                    set.insert(p, s.sites[p].point()).expect("fresh structure");
                }
                set
            } else {
                let mut kids: Vec<(usize, N)> =
                    node.children.iter().map(|&c| (c, held[c].take().expect("child processed first"))).collect();
                let big = (0..kids.len())
                    .max_by(|&a, &b| kids[a].1.len().cmp(&kids[b].1.len()).then(kids[b].0.cmp(&kids[a].0)))
                    .expect("internal node has children");
                let (_, mut set) = kids.swap_remove(big);
                for (_, other) in kids {
                    for (p, at) in other.members() {
                        set.insert(p, at).expect("children are disjoint");
                    }
                }
                set
            };
            for nb in dec.incoming[v].iter().filter(|nb| nb.cones.contains(cone, k)) {
                for r in sources(&s.nodes[nb.node as usize]) {
                    let center = s.sites[r].point();
                    while let Some((q, _)) = set.nearest(center) {
                        if !orig[r].covers(orig[q].point()) {
                            break;
                        }
                        edges.push((r as u32, q as u32));
                        set.delete(q).expect("nearest is a member");
                        taken.push(q);
                    }
                }
                for q in taken.drain(..) {
                    set.insert(q, s.sites[q].point()).expect("was deleted above");
                    found.push(q);
                }
            }
            found.sort_unstable();
            found.dedup();
            for q in found.drain(..) {
                set.delete(q).expect("found sites are members");
            }
            held[v] = Some(set);
        }
    }
    ConeEdges::new(edges)
}
