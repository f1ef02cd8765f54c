//! Planar primitives shared by every construction: sites, grid cells and cones.
//!
//! Grid `Q_i` consists of axis-parallel squares of diameter `2^i` (side
//! `2^i / sqrt(2)`), aligned so that the origin is a cell corner. Cells are
//! half-open, `[x0, x1) x [y0, y1)`, which makes [`cell_of`] a function.
//!
//! Cones come in families of `k` partition cones with apex at a point; cone
//! `j` has middle axis at angle `2*pi*j/k`. Partition cones use half-open
//! angular intervals; expanded cones (`expansion > 1`) are closed.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

/// Absolute tolerance for boundary comparisons.
pub const EPS: f64 = 1e-9;

/// Angular slack used when testing containment in closed cones.
pub const ANGLE_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dist2(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        self.dist2(other).sqrt()
    }

    /// Angle of `other - self` in `(-pi, pi]`.
    #[inline]
    pub fn angle_to(self, other: Point) -> f64 {
        (other.y - self.y).atan2(other.x - self.x)
    }
}

/// `true` when a point at squared distance `d2` lies in a closed disk of
/// radius `radius`, with [`EPS`] absolute slack on the radius.
#[inline]
pub fn within(d2: f64, radius: f64) -> bool {
    let r = radius + EPS;
    d2 <= r * r
}

/// A transmission site: a point with a positive transmission radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Site {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub radius: f64,
}

impl Site {
    pub fn new(id: usize, x: f64, y: f64, radius: f64) -> Self {
        Self { id, x, y, radius }
    }

    #[inline]
    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }

    /// Whether `p` lies in the disk `D(self)`.
    #[inline]
    pub fn covers(&self, p: Point) -> bool {
        within(self.point().dist2(p), self.radius)
    }

    /// Whether the transmission graph has the directed edge `self -> other`.
    #[inline]
    pub fn reaches(&self, other: &Site) -> bool {
        self.covers(other.point())
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SiteError {
    #[error("site {id}: radius must be positive and finite, got {radius}")]
    BadRadius { id: usize, radius: f64 },
    #[error("site {id}: coordinates must be finite")]
    BadCoordinate { id: usize },
    #[error("site ids must be contiguous from 0: position {position} holds id {id}")]
    NonContiguousIds { position: usize, id: usize },
}

/// Checks the `Site` invariants: positive finite radii, finite coordinates,
/// ids equal to their position.
pub fn validate_sites(sites: &[Site]) -> Result<(), SiteError> {
    for (position, s) in sites.iter().enumerate() {
        if s.id != position {
            return Err(SiteError::NonContiguousIds { position, id: s.id });
        }
        if !(s.x.is_finite() && s.y.is_finite()) {
            return Err(SiteError::BadCoordinate { id: s.id });
        }
        if !(s.radius.is_finite() && s.radius > 0.0) {
            return Err(SiteError::BadRadius { id: s.id, radius: s.radius });
        }
    }
    Ok(())
}

/// Side length of a cell of grid `Q_level`.
#[inline]
pub fn cell_side(level: u32) -> f64 {
    FRAC_1_SQRT_2 * 2f64.powi(level as i32)
}

/// Diameter `2^level` of a cell of grid `Q_level`.
#[inline]
pub fn cell_diameter(level: u32) -> f64 {
    2f64.powi(level as i32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridCell {
    pub level: u32,
    pub ix: i64,
    pub iy: i64,
}

impl GridCell {
    pub const fn new(level: u32, ix: i64, iy: i64) -> Self {
        Self { level, ix, iy }
    }

    pub fn diameter(&self) -> f64 {
        cell_diameter(self.level)
    }

    pub fn side(&self) -> f64 {
        cell_side(self.level)
    }

    pub fn min_corner(&self) -> Point {
        let s = self.side();
        Point::new(self.ix as f64 * s, self.iy as f64 * s)
    }

    pub fn max_corner(&self) -> Point {
        let s = self.side();
        Point::new((self.ix + 1) as f64 * s, (self.iy + 1) as f64 * s)
    }

    pub fn center(&self) -> Point {
        let s = self.side();
        Point::new((self.ix as f64 + 0.5) * s, (self.iy as f64 + 0.5) * s)
    }

    pub fn corners(&self) -> [Point; 4] {
        let lo = self.min_corner();
        let hi = self.max_corner();
        [lo, Point::new(hi.x, lo.y), hi, Point::new(lo.x, hi.y)]
    }

    /// Half-open containment, consistent with [`cell_of`].
    pub fn contains(&self, p: Point) -> bool {
        cell_of(p, self.level) == *self
    }

    /// The enclosing cell one level up.
    pub fn parent(&self) -> GridCell {
        GridCell::new(self.level + 1, self.ix.div_euclid(2), self.iy.div_euclid(2))
    }

    /// The enclosing cell at `level >= self.level`.
    pub fn ancestor(&self, level: u32) -> GridCell {
        debug_assert!(level >= self.level);
        let shift = level - self.level;
        if shift >= 63 {
            return GridCell::new(level, if self.ix < 0 { -1 } else { 0 }, if self.iy < 0 { -1 } else { 0 });
        }
        GridCell::new(level, self.ix >> shift, self.iy >> shift)
    }

    /// The four quadrants one level down (requires `level > 0`).
    pub fn children(&self) -> [GridCell; 4] {
        debug_assert!(self.level > 0);
        let l = self.level - 1;
        let (x, y) = (2 * self.ix, 2 * self.iy);
        [GridCell::new(l, x, y), GridCell::new(l, x + 1, y), GridCell::new(l, x, y + 1), GridCell::new(l, x + 1, y + 1)]
    }

    /// Whether `other` is this cell or lies inside it.
    pub fn encloses(&self, other: &GridCell) -> bool {
        other.level <= self.level && other.ancestor(self.level) == *self
    }
}

/// The unique cell of `Q_level` containing `p`.
///
/// Every level is derived from the level-0 cell by integer shifts, so the
/// cells of one point at different levels always nest, even where rounding
/// would put a point on different sides of a shared grid line.
#[inline]
pub fn cell_of(p: Point, level: u32) -> GridCell {
    let s = cell_side(0);
    GridCell::new(0, (p.x / s).floor() as i64, (p.y / s).floor() as i64).ancestor(level)
}

/// Smallest distance between points of the two closed squares.
pub fn cell_distance(a: &GridCell, b: &GridCell) -> f64 {
    if a.level == b.level {
        let gx = ((a.ix - b.ix).abs() - 1).max(0) as f64;
        let gy = ((a.iy - b.iy).abs() - 1).max(0) as f64;
        return gx.hypot(gy) * a.side();
    }
    let (alo, ahi) = (a.min_corner(), a.max_corner());
    let (blo, bhi) = (b.min_corner(), b.max_corner());
    let gx = (alo.x - bhi.x).max(blo.x - ahi.x).max(0.0);
    let gy = (alo.y - bhi.y).max(blo.y - ahi.y).max(0.0);
    gx.hypot(gy)
}

/// Squared gap `gx^2 + gy^2` between two same-level cells, in units of the
/// cell side. The cell distance is `sqrt(gap_sq / 2) * diameter`, so
/// comparisons against integer multiples of the diameter are exact.
#[inline]
pub fn gap_sq(dx: i64, dy: i64) -> i64 {
    let gx = (dx.abs() - 1).max(0);
    let gy = (dy.abs() - 1).max(0);
    gx * gx + gy * gy
}

/// Same as [`gap_sq`] for two cells of equal level.
#[inline]
pub fn cell_gap_sq(a: &GridCell, b: &GridCell) -> i64 {
    debug_assert_eq!(a.level, b.level);
    gap_sq(a.ix - b.ix, a.iy - b.iy)
}

/// Wraps an angle into `(-pi, pi]`.
#[inline]
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}

#[inline]
pub fn cone_axis(index: usize, k: usize) -> f64 {
    TAU * index as f64 / k as f64
}

/// Index of the partition cone (of `k`) with apex `apex` that contains `p`,
/// or `None` when `p == apex`.
#[inline]
pub fn cone_index(apex: Point, p: Point, k: usize) -> Option<usize> {
    if p == apex {
        return None;
    }
    let width = TAU / k as f64;
    let shifted = apex.angle_to(p) + width / 2.0;
    let j = (shifted / width).floor() as i64;
    Some(j.rem_euclid(k as i64) as usize)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cone {
    pub index: usize,
    pub k: usize,
    pub apex: Point,
    /// `l` in `C^l`; the opening angle is `l * 2*pi / k`.
    pub expansion: u32,
}

impl Cone {
    pub fn new(index: usize, k: usize, apex: Point, expansion: u32) -> Self {
        debug_assert!(index < k && expansion >= 1);
        Self { index, k, apex, expansion }
    }

    pub fn half_opening(&self) -> f64 {
        self.expansion as f64 * PI / self.k as f64
    }

    pub fn axis(&self) -> f64 {
        cone_axis(self.index, self.k)
    }
}

/// Membership of `p` in `cone`. The apex belongs to every cone.
pub fn cone_contains(cone: &Cone, p: Point) -> bool {
    if p == cone.apex {
        return true;
    }
    if cone.expansion == 1 {
        return cone_index(cone.apex, p, cone.k) == Some(cone.index);
    }
    let half = cone.half_opening();
    if half >= PI {
        return true;
    }
    wrap_angle(cone.apex.angle_to(p) - cone.axis()).abs() <= half + ANGLE_EPS
}

/// Angular interval `[lo, hi]` (unwrapped, `hi - lo < pi`) subtended by `cell`
/// from `apex`, or `None` if the apex lies in the closed cell.
pub fn cell_angular_span(apex: Point, cell: &GridCell) -> Option<(f64, f64)> {
    let lo = cell.min_corner();
    let hi = cell.max_corner();
    if apex.x >= lo.x && apex.x <= hi.x && apex.y >= lo.y && apex.y <= hi.y {
        return None;
    }
    let mid = apex.angle_to(cell.center());
    let mut dmin = f64::INFINITY;
    let mut dmax = f64::NEG_INFINITY;
    for c in cell.corners() {
        let d = wrap_angle(apex.angle_to(c) - mid);
        dmin = dmin.min(d);
        dmax = dmax.max(d);
    }
    Some((mid + dmin, mid + dmax))
}

/// Whether the whole (closed) cell lies in the cone. Exact for cones with
/// opening below `pi`, which covers every cone used by the constructions.
pub fn cell_in_cone(cell: &GridCell, cone: &Cone) -> bool {
    let half = cone.half_opening();
    if half >= PI {
        return true;
    }
    let Some((lo, hi)) = cell_angular_span(cone.apex, cell) else {
        return false;
    };
    let axis = cone.axis();
    let a = wrap_angle(lo - axis);
    let b = a + (hi - lo);
    if cone.expansion == 1 {
        a >= -half && b < half
    } else {
        a >= -half - ANGLE_EPS && b <= half + ANGLE_EPS
    }
}

/// A run of consecutive cone indices `first, first+1, ...` (mod `k`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ConeSpan {
    pub first: u32,
    pub count: u32,
}

impl ConeSpan {
    pub fn contains(&self, j: usize, k: usize) -> bool {
        self.count > 0 && ((j + k - self.first as usize) % k) < self.count as usize
    }

    pub fn iter(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        let first = self.first as usize;
        (0..self.count as usize).map(move |i| (first + i) % k)
    }
}

/// All `j` such that `cell` lies in the expanded cone `C^expansion_j` with
/// apex `apex`. Agrees with [`cell_in_cone`] for `expansion >= 2`.
pub fn cones_containing_cell(apex: Point, cell: &GridCell, k: usize, expansion: u32) -> ConeSpan {
    let half = expansion as f64 * PI / k as f64;
    if half >= PI {
        return ConeSpan { first: 0, count: k as u32 };
    }
    let Some((lo, hi)) = cell_angular_span(apex, cell) else {
        return ConeSpan::default();
    };
    let width = TAU / k as f64;
    let w = half + ANGLE_EPS;
    let jmin = ((hi - w) / width).ceil() as i64;
    let jmax = ((lo + w) / width).floor() as i64;
    // Re-check the boundary candidates with the exact wrapped test so the two
    // routes never disagree on rounding.
    let mut first = None;
    let mut count = 0u32;
    for j in (jmin - 1)..=(jmax + 1) {
        let idx = j.rem_euclid(k as i64) as usize;
        let axis = cone_axis(idx, k);
        let a = wrap_angle(lo - axis);
        let b = a + (hi - lo);
        let inside =
            if expansion == 1 { a >= -half && b < half } else { a >= -half - ANGLE_EPS && b <= half + ANGLE_EPS };
        if inside {
            if first.is_none() {
                first = Some(idx as u32);
            }
            count += 1;
        }
    }
    ConeSpan { first: first.unwrap_or(0), count }
}
