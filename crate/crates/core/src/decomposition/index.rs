//! Coarse bucket hash over the cells of one grid level, for window queries.

use std::collections::HashMap;

use crate::geometry::GridCell;

/// `(node, ix, iy)` entries keyed by bucket coordinates.
type Buckets = HashMap<(i64, i64), Vec<(u32, i64, i64)>>;

#[derive(Clone, Debug, Default)]
pub struct LevelIndex {
    bucket: i64,
    buckets: Buckets,
}

impl LevelIndex {
    /// `cells` are `(node, cell)` pairs, all of the same level.
    pub fn new(cells: &[(usize, GridCell)]) -> Self {
        if cells.is_empty() {
            return Self::default();
        }
        let (mut x0, mut x1, mut y0, mut y1) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for (_, c) in cells {
            x0 = x0.min(c.ix);
            x1 = x1.max(c.ix);
            y0 = y0.min(c.iy);
            y1 = y1.max(c.iy);
        }
        let area = (x1 - x0 + 1) as f64 * (y1 - y0 + 1) as f64;
        let bucket = ((area / cells.len() as f64).sqrt().floor() as i64).max(1);
        let mut buckets = Buckets::new();
        for &(node, c) in cells {
            buckets.entry((c.ix.div_euclid(bucket), c.iy.div_euclid(bucket))).or_default().push((
                node as u32,
                c.ix,
                c.iy,
            ));
        }
        Self { bucket, buckets }
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    /// Calls `f(node, ix, iy)` for every indexed cell with
    /// `ix in [x0, x1]` and `iy in [y0, y1]`.
    pub fn window(&self, x0: i64, x1: i64, y0: i64, y1: i64, mut f: impl FnMut(usize, i64, i64)) {
        if self.buckets.is_empty() || x0 > x1 || y0 > y1 {
            return;
        }
        let b = self.bucket;
        let (bx0, bx1) = (x0.div_euclid(b), x1.div_euclid(b));
        let (by0, by1) = (y0.div_euclid(b), y1.div_euclid(b));
        let span = (bx1 - bx0 + 1).saturating_mul(by1 - by0 + 1);
        let mut emit = |items: &Vec<(u32, i64, i64)>| {
            for &(node, ix, iy) in items {
                if ix >= x0 && ix <= x1 && iy >= y0 && iy <= y1 {
                    f(node as usize, ix, iy);
                }
            }
        };
        if span as usize > self.buckets.len() {
            for (key, items) in &self.buckets {
                if key.0 >= bx0 && key.0 <= bx1 && key.1 >= by0 && key.1 <= by1 {
                    emit(items);
                }
            }
        } else {
            for bx in bx0..=bx1 {
                for by in by0..=by1 {
                    if let Some(items) = self.buckets.get(&(bx, by)) {
                        emit(items);
                    }
                }
            }
        }
    }
}
