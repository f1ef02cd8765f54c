//! "Which disk contains this point?" over a fixed set of weighted sites.

use crate::geometry::{within, Point, Site, EPS};

/// Immutable disk-containment index. `query(q)` returns a site whose disk
/// contains `q` whenever one exists.
pub trait DiskContainment: Send + Sync {
    fn query(&self, q: Point) -> Option<usize>;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[inline]
fn power(s: &Site, q: Point) -> f64 {
    s.radius * s.radius - s.point().dist2(q)
}

#[inline]
fn beats(cand: (f64, usize), best: Option<(f64, usize)>) -> bool {
    match best {
        None => true,
        Some((bp, bid)) => cand.0 > bp || (cand.0 == bp && cand.1 < bid),
    }
}

/// Reference: linear scan for the largest `r^2 - |sq|^2`.
#[derive(Clone, Debug, Default)]
pub struct LinearDisks {
    sites: Vec<Site>,
}

impl LinearDisks {
    pub fn new(sites: &[Site]) -> Self {
        Self { sites: sites.to_vec() }
    }
}

impl DiskContainment for LinearDisks {
    fn query(&self, q: Point) -> Option<usize> {
        let mut best = None;
        for s in &self.sites {
            let cand = (power(s, q), s.id);
            if beats(cand, best) {
                best = Some(cand);
            }
        }
        let (_, id) = best?;
        let s = self.sites.iter().find(|s| s.id == id)?;
        if s.covers(q) {
            return Some(id);
        }
        // the power maximizer is not always the one inside the EPS slack
        self.sites.iter().find(|s| s.covers(q)).map(|s| s.id)
    }

    fn len(&self) -> usize {
        self.sites.len()
    }
}

const LEAF: usize = 8;

#[derive(Clone, Debug)]
struct KdNode {
    lo: Point,
    hi: Point,
    rmax: f64,
    start: usize,
    end: usize,
    /// Index of the left child; the right child follows its subtree.
    left: Option<(usize, usize)>,
}

/// kd-partition of the sites with per-node bounding boxes and largest
/// radius. A query runs branch and bound for the site of largest power
/// `r^2 - |sq|^2`, which contains `q` iff that power is nonnegative.
#[derive(Clone, Debug)]
pub struct KdDisks {
    sites: Vec<Site>,
    nodes: Vec<KdNode>,
}

/// Builds the default containment structure.
pub fn build_disk_containment(sites: &[Site]) -> KdDisks {
    KdDisks::new(sites)
}

impl KdDisks {
    pub fn new(sites: &[Site]) -> Self {
        let mut me = Self { sites: sites.to_vec(), nodes: Vec::new() };
        if !me.sites.is_empty() {
            let n = me.sites.len();
            me.build(0, n);
        }
        me
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let slice = &self.sites[start..end];
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut rmax = 0.0f64;
        for s in slice {
            lo = Point::new(lo.x.min(s.x), lo.y.min(s.y));
            hi = Point::new(hi.x.max(s.x), hi.y.max(s.y));
            rmax = rmax.max(s.radius);
        }
        let idx = self.nodes.len();
        self.nodes.push(KdNode { lo, hi, rmax, start, end, left: None });
        if end - start > LEAF {
            let mid = start + (end - start) / 2;
            let by_x = hi.x - lo.x >= hi.y - lo.y;
            self.sites[start..end].select_nth_unstable_by(mid - start, |a, b| {
                if by_x {
                    a.x.total_cmp(&b.x)
                } else {
                    a.y.total_cmp(&b.y)
                }
            });
            let l = self.build(start, mid);
            let r = self.build(mid, end);
            self.nodes[idx].left = Some((l, r));
        }
        idx
    }

    #[inline]
    fn box_dist2(node: &KdNode, q: Point) -> f64 {
        let dx = (node.lo.x - q.x).max(q.x - node.hi.x).max(0.0);
        let dy = (node.lo.y - q.y).max(q.y - node.hi.y).max(0.0);
        dx * dx + dy * dy
    }

    fn argmax_power(&self, q: Point) -> Option<(f64, usize, usize)> {
        let mut best: Option<(f64, usize)> = None;
        let mut at = 0usize;
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            let node = &self.nodes[i];
            let bound = node.rmax * node.rmax - Self::box_dist2(node, q);
            if let Some((bp, _)) = best {
                if bound < bp {
                    continue;
                }
            }
            match node.left {
                None => {
                    for (k, s) in self.sites[node.start..node.end].iter().enumerate() {
                        let cand = (power(s, q), s.id);
                        if beats(cand, best) {
                            best = Some(cand);
                            at = node.start + k;
                        }
                    }
                }
                Some((l, r)) => {
                    let bl = self.nodes[l].rmax.powi(2) - Self::box_dist2(&self.nodes[l], q);
                    let br = self.nodes[r].rmax.powi(2) - Self::box_dist2(&self.nodes[r], q);
                    // pop the more promising child first
                    if bl >= br {
                        stack.push(r);
                        stack.push(l);
                    } else {
                        stack.push(l);
                        stack.push(r);
                    }
                }
            }
        }
        best.map(|(p, id)| (p, id, at))
    }

    fn any_within(&self, q: Point) -> Option<usize> {
        let mut stack = vec![0usize];
        let mut found: Option<usize> = None;
        while let Some(i) = stack.pop() {
            let node = &self.nodes[i];
            let reach = node.rmax + EPS;
            if Self::box_dist2(node, q) > reach * reach {
                continue;
            }
            match node.left {
                None => {
                    for s in &self.sites[node.start..node.end] {
                        if within(s.point().dist2(q), s.radius) && found.is_none_or(|f| s.id < f) {
                            found = Some(s.id);
                        }
                    }
                }
                Some((l, r)) => {
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
        found
    }
}

impl DiskContainment for KdDisks {
    fn query(&self, q: Point) -> Option<usize> {
        if self.sites.is_empty() {
            return None;
        }
        let (p, id, at) = self.argmax_power(q)?;
        if self.sites[at].covers(q) {
            return Some(id);
        }
        // Every power is at most `p`; a site can only pass the EPS-tolerant
        // test if its power is at least `-(2 r EPS + EPS^2)`.
        let rmax = self.nodes[0].rmax;
        if p >= -(2.0 * rmax * EPS + EPS * EPS) {
            return self.any_within(q);
        }
        None
    }

    fn len(&self) -> usize {
        self.sites.len()
    }
}
