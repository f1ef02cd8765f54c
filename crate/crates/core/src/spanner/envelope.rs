//! For points `Q` on one side of an axis-parallel line and disks centered on
//! the other side, find for every `q` one disk containing it.
//!
//! In a frame where the line is `v = 0`, the disk centers lie at `v > 0` and
//! `Q` at `v < 0`, a point `q` lies in `D(r)` iff `v_q >= f_r(u_q)` with
//! `f_r(u) = v_r - sqrt(rho^2 - (u - u_r)^2)`. The lower envelope of the
//! `f_r` is built by divide and conquer and then swept together with `Q`.

use crate::geometry::{Point, Site, EPS};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SeparatingLine {
    /// The line `y = value`.
    Horizontal(f64),
    /// The line `x = value`.
    Vertical(f64),
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum EnvelopeError {
    #[error("point {0} is not strictly on the expected side of the line")]
    NotSeparated(usize),
    #[error("query points are not sorted along the line")]
    NotSorted,
}

#[derive(Clone, Copy, Debug)]
struct Arc {
    u: f64,
    v: f64,
    rho: f64,
    id: usize,
}

impl Arc {
    #[inline]
    fn lo(&self) -> f64 {
        self.u - self.half_width()
    }

    #[inline]
    fn hi(&self) -> f64 {
        self.u + self.half_width()
    }

    /// Half-width of the part below the line.
    #[inline]
    fn half_width(&self) -> f64 {
        (self.rho * self.rho - self.v * self.v).max(0.0).sqrt()
    }

    #[inline]
    fn eval(&self, u: f64) -> Option<f64> {
        let du = u - self.u;
        let h = self.rho * self.rho - du * du;
        (h >= 0.0).then(|| self.v - h.sqrt())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopePiece {
    pub u0: f64,
    pub u1: f64,
    /// Index into the disk list passed to [`CapEnvelope::new`].
    pub owner: usize,
}

/// Lower envelope of the lower disk caps below the line, as pieces with
/// disjoint, increasing `u`-intervals. Gaps are uncovered.
#[derive(Clone, Debug)]
pub struct CapEnvelope {
    arcs: Vec<Arc>,
    pub pieces: Vec<EnvelopePiece>,
}

/// Maps points to `(u, v)` with the disk side at `v > 0`.
#[derive(Clone, Copy, Debug)]
struct Frame {
    line: SeparatingLine,
    flip: bool,
}

impl Frame {
    fn new(line: SeparatingLine, disk_side: Point) -> Self {
        let flip = match line {
            SeparatingLine::Horizontal(y) => disk_side.y < y,
            SeparatingLine::Vertical(x) => disk_side.x < x,
        };
        Self { line, flip }
    }

    #[inline]
    fn map(&self, p: Point) -> (f64, f64) {
        let (u, v) = match self.line {
            SeparatingLine::Horizontal(y) => (p.x, p.y - y),
            SeparatingLine::Vertical(x) => (p.y, p.x - x),
        };
        (u, if self.flip { -v } else { v })
    }
}

impl CapEnvelope {
    fn from_arcs(mut arcs: Vec<Arc>) -> Self {
        let live: Vec<usize> = (0..arcs.len()).filter(|&i| arcs[i].rho > arcs[i].v).collect();
        let pieces = if live.is_empty() { Vec::new() } else { build(&arcs, &live) };
        arcs.shrink_to_fit();
        Self { arcs, pieces }
    }

    /// Envelope of `disks` below `line`, radii grown by `inflate`.
    pub fn new(disks: &[Site], line: SeparatingLine, inflate: f64) -> Result<Self, EnvelopeError> {
        let Some(first) = disks.first() else {
            return Ok(Self { arcs: Vec::new(), pieces: Vec::new() });
        };
        let frame = Frame::new(line, first.point());
        let mut arcs = Vec::with_capacity(disks.len());
        for (i, d) in disks.iter().enumerate() {
            let (u, v) = frame.map(d.point());
            if v <= 0.0 {
                return Err(EnvelopeError::NotSeparated(d.id));
            }
            arcs.push(Arc { u, v, rho: d.radius + inflate, id: i });
        }
        Ok(Self::from_arcs(arcs))
    }

    /// Lowest arc value at `u` among the given piece indices.
    fn lowest(&self, u: f64, cand: impl Iterator<Item = usize>) -> Option<(f64, usize)> {
        let mut best: Option<(f64, usize)> = None;
        for p in cand {
            let a = &self.arcs[self.pieces[p].owner];
            if let Some(f) = a.eval(u) {
                if best.is_none_or(|(bf, bi)| f < bf || (f == bf && a.id < bi)) {
                    best = Some((f, a.id));
                }
            }
        }
        best
    }
}

fn build(arcs: &[Arc], ids: &[usize]) -> Vec<EnvelopePiece> {
    if ids.len() == 1 {
        let a = &arcs[ids[0]];
        return vec![EnvelopePiece { u0: a.lo(), u1: a.hi(), owner: ids[0] }];
    }
    let mid = ids.len() / 2;
    let left = build(arcs, &ids[..mid]);
    let right = build(arcs, &ids[mid..]);
    merge(arcs, &left, &right)
}

/// `u`-coordinates where the two circles cross.
fn crossings(a: &Arc, b: &Arc) -> [Option<f64>; 2] {
    let (dx, dy) = (b.u - a.u, b.v - a.v);
    let d2 = dx * dx + dy * dy;
    if d2 == 0.0 {
        return [None, None];
    }
    let d = d2.sqrt();
    let l = (a.rho * a.rho - b.rho * b.rho + d2) / (2.0 * d);
    let h2 = a.rho * a.rho - l * l;
    if h2 < 0.0 {
        return [None, None];
    }
    let h = h2.sqrt();
    let mx = a.u + l * dx / d;
    [Some(mx + h * dy / d), Some(mx - h * dy / d)]
}

fn owner_at(pieces: &[EnvelopePiece], at: &mut usize, u: f64) -> Option<usize> {
    while *at < pieces.len() && pieces[*at].u1 < u {
        *at += 1;
    }
    pieces.get(*at).filter(|p| p.u0 <= u).map(|p| p.owner)
}

fn push(out: &mut Vec<EnvelopePiece>, u0: f64, u1: f64, owner: usize) {
    if let Some(last) = out.last_mut() {
        if last.owner == owner && last.u1 >= u0 {
            last.u1 = last.u1.max(u1);
            return;
        }
    }
    out.push(EnvelopePiece { u0, u1, owner });
}

fn lower(arcs: &[Arc], a: usize, b: usize, u: f64) -> usize {
    match (arcs[a].eval(u), arcs[b].eval(u)) {
        (Some(fa), Some(fb)) => {
            if fa < fb || (fa == fb && arcs[a].id < arcs[b].id) {
                a
            } else {
                b
            }
        }
        (Some(_), None) => a,
        (None, Some(_)) => b,
        // both domains end within rounding of `u`
        (None, None) => {
            if arcs[a].id < arcs[b].id {
                a
            } else {
                b
            }
        }
    }
}

fn merge(arcs: &[Arc], left: &[EnvelopePiece], right: &[EnvelopePiece]) -> Vec<EnvelopePiece> {
    let mut xs: Vec<f64> = Vec::with_capacity(2 * (left.len() + right.len()));
    for p in left.iter().chain(right) {
        xs.push(p.u0);
        xs.push(p.u1);
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut out = Vec::with_capacity(left.len() + right.len());
    let (mut ia, mut ib) = (0usize, 0usize);
    for w in xs.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let mid = 0.5 * (x0 + x1);
        let oa = owner_at(left, &mut ia, mid);
        let ob = owner_at(right, &mut ib, mid);
        match (oa, ob) {
            (None, None) => {}
            (Some(a), None) | (None, Some(a)) => push(&mut out, x0, x1, a),
            (Some(a), Some(b)) => {
                let mut cuts = vec![x0];
                for u in crossings(&arcs[a], &arcs[b]).into_iter().flatten() {
                    if u > x0 && u < x1 {
                        cuts.push(u);
                    }
                }
                cuts.push(x1);
                cuts.sort_by(f64::total_cmp);
                for s in cuts.windows(2) {
                    let o = lower(arcs, a, b, 0.5 * (s[0] + s[1]));
                    push(&mut out, s[0], s[1], o);
                }
            }
        }
    }
    out
}

/// Picks for every `q` a disk whose envelope arc lies lowest at `q`, then
/// confirms it with `covers(disk index, q index)`. If the confirmation
/// fails while `q` is inside the inflated union, the first covering disk in
/// list order is taken instead.
///
/// `queries` must be sorted along the line. Returns `(disk index, query
/// index)` pairs.
pub fn select_with(
    disks: &[Site],
    queries: &[Point],
    line: SeparatingLine,
    inflate: impl Fn(&Site) -> f64,
    covers: impl Fn(usize, usize) -> bool,
) -> Result<Vec<(usize, usize)>, EnvelopeError> {
    if disks.is_empty() || queries.is_empty() {
        return Ok(Vec::new());
    }
    let frame = Frame::new(line, disks[0].point());
    let mut arcs = Vec::with_capacity(disks.len());
    for (i, d) in disks.iter().enumerate() {
        let (u, v) = frame.map(d.point());
        if v <= 0.0 {
            return Err(EnvelopeError::NotSeparated(d.id));
        }
        arcs.push(Arc { u, v, rho: d.radius + inflate(d), id: i });
    }
    let mut mapped = Vec::with_capacity(queries.len());
    for (i, &q) in queries.iter().enumerate() {
        let (u, v) = frame.map(q);
        if v >= 0.0 {
            return Err(EnvelopeError::NotSeparated(i));
        }
        if mapped.last().is_some_and(|&(pu, _)| pu > u) {
            return Err(EnvelopeError::NotSorted);
        }
        mapped.push((u, v));
    }
    let env = CapEnvelope::from_arcs(arcs);
    let mut out = Vec::new();
    let mut at = 0usize;
    let n = env.pieces.len();
    for (qi, &(u, v)) in mapped.iter().enumerate() {
        while at < n && env.pieces[at].u1 < u {
            at += 1;
        }
        let cand = at.saturating_sub(1)..(at + 2).min(n);
        let Some((f, owner)) = env.lowest(u, cand) else {
            continue;
        };
        if v < f {
            continue;
        }
        if covers(owner, qi) {
            out.push((owner, qi));
        } else if let Some(r) = (0..disks.len()).find(|&r| covers(r, qi)) {
            out.push((r, qi));
        }
    }
    Ok(out)
}

fn default_inflate(disks: &[Site], queries: &[Site]) -> f64 {
    let mag = disks.iter().chain(queries).map(|s| s.x.abs().max(s.y.abs()) + s.radius).fold(0.0, f64::max);
    4.0 * EPS + 1e-12 * mag
}

/// Edges `(r id, q id)` giving every coverable `q` one disk containing it.
/// `queries` must be sorted along the line and strictly on the other side
/// of it from every disk center.
pub fn select_edges_envelope(
    queries: &[Site],
    disks: &[Site],
    line: SeparatingLine,
) -> Result<Vec<(usize, usize)>, EnvelopeError> {
    let inflate = default_inflate(disks, queries);
    let pts: Vec<Point> = queries.iter().map(Site::point).collect();
    let picks = select_with(disks, &pts, line, |_| inflate, |r, q| disks[r].covers(pts[q]))?;
    Ok(picks.into_iter().map(|(r, q)| (disks[r].id, queries[q].id)).collect())
}

/// Reference: the first disk in list order containing each `q`.
pub fn select_edges_bruteforce(queries: &[Site], disks: &[Site]) -> Vec<(usize, usize)> {
    queries.iter().filter_map(|q| disks.iter().find(|r| r.covers(q.point())).map(|r| (r.id, q.id))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn sorted_by_x(mut q: Vec<Site>) -> Vec<Site> {
        q.sort_by(|a, b| a.x.total_cmp(&b.x));
        q
    }

    #[test]
    fn one_big_disk_covers_everything() {
        let q = sorted_by_x((0..20).map(|i| Site::new(i, i as f64, -1.0 - (i % 3) as f64, 1.0)).collect());
        let r = vec![Site::new(100, 10.0, 5.0, 50.0)];
        let got = select_edges_envelope(&q, &r, SeparatingLine::Horizontal(0.0)).unwrap();
        assert_eq!(got.len(), 20);
        assert!(got.iter().all(|&(r, _)| r == 100));
    }

    #[test]
    fn missing_disks_give_nothing() {
        let q = sorted_by_x((0..10).map(|i| Site::new(i, i as f64, -10.0, 1.0)).collect());
        let r: Vec<Site> = (0..5).map(|i| Site::new(50 + i, 3.0 * i as f64, 2.0, 2.5)).collect();
        assert!(select_edges_envelope(&q, &r, SeparatingLine::Horizontal(0.0)).unwrap().is_empty());
    }

    #[test]
    fn unseparated_input_rejected() {
        let q = vec![Site::new(0, 0.0, 1.0, 1.0)];
        let r = vec![Site::new(1, 0.0, 2.0, 5.0)];
        assert!(matches!(
            select_edges_envelope(&q, &r, SeparatingLine::Horizontal(0.0)),
            Err(EnvelopeError::NotSeparated(_))
        ));
    }

    #[test]
    fn unsorted_queries_rejected() {
        let q = vec![Site::new(0, 3.0, -1.0, 1.0), Site::new(1, 1.0, -1.0, 1.0)];
        let r = vec![Site::new(2, 0.0, 2.0, 5.0)];
        assert_eq!(select_edges_envelope(&q, &r, SeparatingLine::Horizontal(0.0)), Err(EnvelopeError::NotSorted));
    }

    #[test]
    fn all_four_orientations_agree_with_bruteforce() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for trial in 0..200 {
            let m = rng.gen_range(1..30);
            let n = rng.gen_range(1..80);
            let r: Vec<Site> = (0..m)
                .map(|i| {
                    Site::new(1000 + i, rng.gen_range(-20.0..20.0), rng.gen_range(0.1..15.0), rng.gen_range(0.5..20.0))
                })
                .collect();
            let q: Vec<Site> =
                (0..n).map(|i| Site::new(i, rng.gen_range(-30.0..30.0), rng.gen_range(-15.0..-0.01), 1.0)).collect();
            let swap = |s: &Site, sx: f64, sy: f64, t: bool| {
                let (x, y) = if t { (s.y, s.x) } else { (s.x, s.y) };
                Site::new(s.id, sx * x, sy * y, s.radius)
            };
            let (sx, sy, transpose) = match trial % 4 {
                0 => (1.0, 1.0, false),
                1 => (1.0, -1.0, false),
                2 => (1.0, 1.0, true),
                _ => (-1.0, 1.0, true),
            };
            let r2: Vec<Site> = r.iter().map(|s| swap(s, sx, sy, transpose)).collect();
            let mut q2: Vec<Site> = q.iter().map(|s| swap(s, sx, sy, transpose)).collect();
            let line = if transpose { SeparatingLine::Vertical(0.0) } else { SeparatingLine::Horizontal(0.0) };
            q2.sort_by(|a, b| if transpose { a.y.total_cmp(&b.y) } else { a.x.total_cmp(&b.x) });
            let got = select_edges_envelope(&q2, &r2, line).unwrap();
            let want = select_edges_bruteforce(&q2, &r2);
            let mut gq: Vec<usize> = got.iter().map(|e| e.1).collect();
            let mut wq: Vec<usize> = want.iter().map(|e| e.1).collect();
            gq.sort_unstable();
            wq.sort_unstable();
            assert_eq!(gq, wq, "trial {trial}");
            for (rid, qid) in got {
                let rs = r2.iter().find(|s| s.id == rid).unwrap();
                let qs = q2.iter().find(|s| s.id == qid).unwrap();
                assert!(rs.covers(qs.point()));
            }
        }
    }
}
