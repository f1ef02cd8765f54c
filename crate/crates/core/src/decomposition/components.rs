//! Groups sites whose axis-parallel squares of side `2M` overlap.
//!
//! Sites in different groups are more than `2M` apart in some coordinate,
//! so with every radius at most `M` no site reaches across groups.

use std::collections::BTreeMap;

use ordered_float::OrderedFloat;

use crate::geometry::Site;

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn groups(mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = by_root.into_values().collect();
        out.sort_by_key(|g| g[0]);
        out
    }
}

/// Connected components of the squares of side `2 * half_side` centered at
/// the sites, by an x-sweep over a y-ordered search tree. Each component is
/// sorted; components are ordered by their smallest id.
///
/// The sweep keeps the invariant that any two y-consecutive active sites
/// within `2 * half_side` of each other are already joined, so joining a new
/// site with its two y-neighbors suffices.
pub fn partition_components(sites: &[Site], half_side: f64) -> Vec<Vec<usize>> {
    let n = sites.len();
    let reach = 2.0 * half_side;
    let mut by_x: Vec<usize> = (0..n).collect();
    by_x.sort_by(|&a, &b| sites[a].x.total_cmp(&sites[b].x).then(a.cmp(&b)));
    let mut dsu = Dsu::new(n);
    let mut active: BTreeMap<(OrderedFloat<f64>, usize), ()> = BTreeMap::new();
    let mut tail = 0;
    for &p in &by_x {
        let s = &sites[p];
        while tail < n && sites[by_x[tail]].x < s.x - reach {
            let q = by_x[tail];
            active.remove(&(OrderedFloat(sites[q].y), q));
            tail += 1;
        }
        let key = (OrderedFloat(s.y), p);
        if let Some((&(y, q), _)) = active.range(..key).next_back() {
            if s.y - y.0 <= reach {
                dsu.union(p, q);
            }
        }
        if let Some((&(y, q), _)) = active.range(key..).next() {
            if y.0 - s.y <= reach {
                dsu.union(p, q);
            }
        }
        active.insert(key, ());
    }
    dsu.groups()
}

/// Quadratic reference for [`partition_components`].
pub fn partition_components_bruteforce(sites: &[Site], half_side: f64) -> Vec<Vec<usize>> {
    let reach = 2.0 * half_side;
    let mut dsu = Dsu::new(sites.len());
    for i in 0..sites.len() {
        for j in i + 1..sites.len() {
            if (sites[i].x - sites[j].x).abs() <= reach && (sites[i].y - sites[j].y).abs() <= reach {
                dsu.union(i, j);
            }
        }
    }
    dsu.groups()
}
