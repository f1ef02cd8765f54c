//! Dynamic nearest neighbor: a bucketed grid with ring search and a
//! linear-scan reference.

use std::collections::HashMap;

use crate::geometry::Point;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum NnError {
    #[error("point {0} is not in the set")]
    NotPresent(usize),
    #[error("point {0} is already in the set")]
    AlreadyPresent(usize),
}

/// A planar point set under insertion, deletion and nearest-neighbor
/// queries. `nearest` returns a point at exactly minimal distance; among
/// equidistant points the smallest id wins.
pub trait DynamicNN: Send {
    fn insert(&mut self, id: usize, p: Point) -> Result<(), NnError>;
    fn delete(&mut self, id: usize) -> Result<(), NnError>;
    /// `(id, squared distance)` of the nearest point, `None` when empty.
    fn nearest(&self, q: Point) -> Option<(usize, f64)>;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn contains(&self, id: usize) -> bool;
    /// Current members with their positions, in unspecified order.
    fn members(&self) -> Vec<(usize, Point)>;
}

#[inline]
fn better(cand: (usize, f64), best: Option<(usize, f64)>) -> bool {
    match best {
        None => true,
        Some((bid, bd)) => cand.1 < bd || (cand.1 == bd && cand.0 < bid),
    }
}

/// Reference implementation: unordered vector, linear scan.
#[derive(Clone, Debug, Default)]
pub struct LinearNn {
    items: Vec<(usize, Point)>,
    slot: HashMap<usize, usize>,
}

impl LinearNn {
    pub fn new() -> Self {
        Self::default()
    }
}

impl DynamicNN for LinearNn {
    fn insert(&mut self, id: usize, p: Point) -> Result<(), NnError> {
        if self.slot.contains_key(&id) {
            return Err(NnError::AlreadyPresent(id));
        }
        self.slot.insert(id, self.items.len());
        self.items.push((id, p));
        Ok(())
    }

    fn delete(&mut self, id: usize) -> Result<(), NnError> {
        let i = self.slot.remove(&id).ok_or(NnError::NotPresent(id))?;
        self.items.swap_remove(i);
        if i < self.items.len() {
            self.slot.insert(self.items[i].0, i);
        }
        Ok(())
    }

    fn nearest(&self, q: Point) -> Option<(usize, f64)> {
        let mut best = None;
        for &(id, p) in &self.items {
            let cand = (id, p.dist2(q));
            if better(cand, best) {
                best = Some(cand);
            }
        }
        best
    }

    fn len(&self) -> usize {
        self.items.len()
    }

    fn contains(&self, id: usize) -> bool {
        self.slot.contains_key(&id)
    }

    fn members(&self) -> Vec<(usize, Point)> {
        self.items.clone()
    }
}

/// Below this size a query is a plain scan.
const SCAN_THRESHOLD: usize = 24;

/// Uniform grid of buckets. The bucket side is chosen from the bounding box
/// and size at the last rebuild; a rebuild happens whenever the set has
/// doubled since then. A query examines square rings of buckets around the
/// query point and stops once no unexamined bucket can hold a closer point.
/// If the ring search inspects more buckets than about twice the set size it
/// finishes with a scan instead, which bounds the cost on skewed inputs.
#[derive(Clone, Debug)]
pub struct GridNn {
    pos: HashMap<usize, Point>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    h: f64,
    built_for: usize,
    lo: (i64, i64),
    hi: (i64, i64),
}

impl Default for GridNn {
    fn default() -> Self {
        Self {
            pos: HashMap::new(),
            buckets: HashMap::new(),
            h: 1.0,
            built_for: 0,
            lo: (i64::MAX, i64::MAX),
            hi: (i64::MIN, i64::MIN),
        }
    }
}

impl GridNn {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    fn key(&self, p: Point) -> (i64, i64) {
        ((p.x / self.h).floor() as i64, (p.y / self.h).floor() as i64)
    }

    fn place(&mut self, id: usize, p: Point) {
        let k = self.key(p);
        self.lo = (self.lo.0.min(k.0), self.lo.1.min(k.1));
        self.hi = (self.hi.0.max(k.0), self.hi.1.max(k.1));
        self.buckets.entry(k).or_default().push(id);
    }

    fn rebuild(&mut self) {
        let n = self.pos.len();
        let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in self.pos.values() {
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
        let extent = (x1 - x0).max(y1 - y0);
        let area = ((x1 - x0) * (y1 - y0)).max(extent * extent / n.max(1) as f64);
        let mut h = (2.0 * area / n.max(1) as f64).sqrt();
        if !(h.is_finite() && h > 0.0) {
            h = extent.max(1.0);
        }
        // keep bucket indices comfortably inside i64
        h = h.max(extent / 1e12).max(f64::MIN_POSITIVE);
        self.h = h;
        self.buckets.clear();
        self.lo = (i64::MAX, i64::MAX);
        self.hi = (i64::MIN, i64::MIN);
        let items: Vec<(usize, Point)> = self.pos.iter().map(|(&i, &p)| (i, p)).collect();
        for (id, p) in items {
            self.place(id, p);
        }
        self.built_for = n;
    }

    fn scan(&self, q: Point) -> Option<(usize, f64)> {
        let mut best = None;
        for (&id, &p) in &self.pos {
            let cand = (id, p.dist2(q));
            if better(cand, best) {
                best = Some(cand);
            }
        }
        best
    }

    fn visit(&self, key: (i64, i64), q: Point, best: &mut Option<(usize, f64)>) {
        if let Some(ids) = self.buckets.get(&key) {
            for &id in ids {
                let cand = (id, self.pos[&id].dist2(q));
                if better(cand, *best) {
                    *best = Some(cand);
                }
            }
        }
    }
}

impl DynamicNN for GridNn {
    fn insert(&mut self, id: usize, p: Point) -> Result<(), NnError> {
        if self.pos.contains_key(&id) {
            return Err(NnError::AlreadyPresent(id));
        }
        self.pos.insert(id, p);
        if self.pos.len() > 2 * self.built_for.max(SCAN_THRESHOLD / 2) {
            self.rebuild();
        } else {
            self.place(id, p);
        }
        Ok(())
    }

    fn delete(&mut self, id: usize) -> Result<(), NnError> {
        let p = self.pos.remove(&id).ok_or(NnError::NotPresent(id))?;
        let k = self.key(p);
        if let Some(b) = self.buckets.get_mut(&k) {
            if let Some(i) = b.iter().position(|&x| x == id) {
                b.swap_remove(i);
            }
            if b.is_empty() {
                self.buckets.remove(&k);
            }
        }
        Ok(())
    }

    fn nearest(&self, q: Point) -> Option<(usize, f64)> {
        let n = self.pos.len();
        if n == 0 {
            return None;
        }
        if n <= SCAN_THRESHOLD || self.buckets.is_empty() {
            return self.scan(q);
        }
        let (cx, cy) = self.key(q);
        let budget = 2 * n + 16;
        let mut inspected = 0usize;
        let mut best = None;
        // rings closer than the occupied box hold nothing
        let mut ring: i64 = (self.lo.0 - cx).max(cx - self.hi.0).max(self.lo.1 - cy).max(cy - self.hi.1).max(0);
        loop {
            // buckets at Chebyshev distance `ring`, clipped to the occupied box
            let (x0, x1) = ((cx - ring).max(self.lo.0), (cx + ring).min(self.hi.0));
            let (y0, y1) = ((cy - ring).max(self.lo.1), (cy + ring).min(self.hi.1));
            if x0 <= x1 && y0 <= y1 {
                for x in x0..=x1 {
                    if x == cx - ring || x == cx + ring {
                        for y in y0..=y1 {
                            self.visit((x, y), q, &mut best);
                            inspected += 1;
                        }
                    } else {
                        for y in [cy - ring, cy + ring] {
                            if y >= y0 && y <= y1 {
                                self.visit((x, y), q, &mut best);
                                inspected += 1;
                            }
                        }
                    }
                }
            }
            // every bucket outside this ring is at least `ring * h` away
            if let Some((_, d2)) = best {
                let reach = ring as f64 * self.h;
                if d2 < reach * reach {
                    return best;
                }
            }
            let covered =
                cx - ring <= self.lo.0 && cx + ring >= self.hi.0 && cy - ring <= self.lo.1 && cy + ring >= self.hi.1;
            if covered {
                return best;
            }
            if inspected > budget {
                return self.scan(q);
            }
            ring += 1;
        }
    }

    fn len(&self) -> usize {
        self.pos.len()
    }

    fn contains(&self, id: usize) -> bool {
        self.pos.contains_key(&id)
    }

    fn members(&self) -> Vec<(usize, Point)> {
        self.pos.iter().map(|(&i, &p)| (i, p)).collect()
    }
}
