//! Similarity transforms that put an instance into the scale each
//! construction expects.
//!
//! The map is `p' = (p - offset) * scale`, `r' = r * scale`. The offset is
//! the lower-left corner of the bounding box, so normalized coordinates are
//! nonnegative and the whole instance sits in the cell `(0, 0)` of a large
//! enough grid.

use std::collections::BTreeSet;

use ordered_float::OrderedFloat;

use crate::geometry::{Point, Site};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormalizeMode {
    /// Closest pair of sites at the given distance.
    ClosestPair(f64),
    /// Smallest radius equal to the given value.
    SmallestRadius(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Normalization {
    pub scale: f64,
    pub offset: Point,
}

impl Normalization {
    pub fn identity() -> Self {
        Self { scale: 1.0, offset: Point::default() }
    }

    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        Point::new((p.x - self.offset.x) * self.scale, (p.y - self.offset.y) * self.scale)
    }

    #[inline]
    pub fn invert(&self, p: Point) -> Point {
        Point::new(p.x / self.scale + self.offset.x, p.y / self.scale + self.offset.y)
    }

    pub fn apply_site(&self, s: &Site) -> Site {
        let p = self.apply(s.point());
        Site::new(s.id, p.x, p.y, s.radius * self.scale)
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum NormalizeError {
    #[error("closest-pair normalization needs at least two sites")]
    TooFewSites,
    #[error("sites {0} and {1} coincide; closest-pair scaling is undefined")]
    DuplicatePoints(usize, usize),
    #[error("instance is empty")]
    Empty,
}

/// Exact closest pair by an x-sweep over a y-ordered active set.
/// Returns `(i, j, distance)` with `i < j`, or `None` for fewer than two points.
pub fn closest_pair(points: &[Point]) -> Option<(usize, usize, f64)> {
    if points.len() < 2 {
        return None;
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].x.total_cmp(&points[b].x).then(a.cmp(&b)));
    let mut active: BTreeSet<(OrderedFloat<f64>, usize)> = BTreeSet::new();
    let mut best = (usize::MAX, usize::MAX, f64::INFINITY);
    let mut tail = 0;
    for &i in &order {
        let p = points[i];
        while tail < order.len() && points[order[tail]].x < p.x - best.2 {
            let j = order[tail];
            active.remove(&(OrderedFloat(points[j].y), j));
            tail += 1;
        }
        let lo = (OrderedFloat(p.y - best.2), 0usize);
        let hi = (OrderedFloat(p.y + best.2), usize::MAX);
        for &(_, j) in active.range(lo..=hi) {
            let d = p.dist(points[j]);
            let key = (i.min(j), i.max(j));
            if d < best.2 || (d == best.2 && key < (best.0, best.1)) {
                best = (key.0, key.1, d);
            }
        }
        active.insert((OrderedFloat(p.y), i));
    }
    Some(best)
}

/// Bounding-box lower-left corner.
pub fn min_corner(sites: &[Site]) -> Point {
    sites.iter().fold(Point::new(f64::INFINITY, f64::INFINITY), |acc, s| Point::new(acc.x.min(s.x), acc.y.min(s.y)))
}

/// Computes the map for `mode` without applying it.
pub fn normalization_for(sites: &[Site], mode: NormalizeMode) -> Result<Normalization, NormalizeError> {
    if sites.is_empty() {
        return Err(NormalizeError::Empty);
    }
    let offset = min_corner(sites);
    let scale = match mode {
        NormalizeMode::ClosestPair(target) => {
            let pts: Vec<Point> = sites.iter().map(Site::point).collect();
            let (i, j, d) = closest_pair(&pts).ok_or(NormalizeError::TooFewSites)?;
            if d == 0.0 {
                return Err(NormalizeError::DuplicatePoints(i, j));
            }
            target / d
        }
        NormalizeMode::SmallestRadius(target) => {
            let rmin = sites.iter().map(|s| s.radius).fold(f64::INFINITY, f64::min);
            target / rmin
        }
    };
    Ok(Normalization { scale, offset })
}

/// Applies the normalization for `mode`. Ids are preserved.
pub fn normalize(sites: &[Site], mode: NormalizeMode) -> Result<(Vec<Site>, Normalization), NormalizeError> {
    let map = normalization_for(sites, mode)?;
    Ok((sites.iter().map(|s| map.apply_site(s)).collect(), map))
}

/// Radius ratio `max r / min r`.
pub fn radius_ratio(sites: &[Site]) -> f64 {
    let (lo, hi) = sites.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), s| (lo.min(s.radius), hi.max(s.radius)));
    if sites.is_empty() {
        1.0
    } else {
        hi / lo
    }
}
