//! Cone count `k` and separation `c` as functions of the stretch `t`.

use std::f64::consts::PI;

use crate::geometry::gap_sq;

/// Slack used when an inequality lower bound happens to be an integer.
const BOUND_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpannerParams {
    pub t: f64,
    pub k: usize,
    pub c: u32,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ParamError {
    #[error("stretch must be a finite number greater than 1, got {0}")]
    StretchTooSmall(f64),
    #[error("parameters (t={t}, k={k}, c={c}) violate: {what}")]
    Violated { t: f64, k: usize, c: u32, what: &'static str },
}

fn yao_ratio(k: usize) -> f64 {
    let a = 8.0 * PI / k as f64;
    (1.0 + (2.0 - 2.0 * a.cos()).sqrt()) / (2.0 * a.cos() - 1.0)
}

fn k_ok(t: f64, k: usize) -> bool {
    let a = 8.0 * PI / k as f64;
    k >= 25 && k as f64 >= 16.0 * PI * t / (t - 1.0) && a.cos() > 0.5 && yao_ratio(k) <= t
}

/// Smallest integer `k >= 25` and smallest integer `c` meeting every
/// constraint of [`SpannerParams::check`].
pub fn spanner_parameters(t: f64) -> Result<SpannerParams, ParamError> {
    if !(t.is_finite() && t > 1.0) {
        return Err(ParamError::StretchTooSmall(t));
    }
    let mut k = 25usize.max((16.0 * PI * t / (t - 1.0) - BOUND_SLACK).ceil() as usize);
    while !k_ok(t, k) {
        k += 1;
    }
    let strict = 3.0 + 2.0 / (PI / k as f64).sin();
    let loose = 2.0 + 2.0 * t / (t - 1.0);
    let c = (strict.floor() as u32 + 1).max((loose - BOUND_SLACK).ceil() as u32).max(6);
    let params = SpannerParams { t, k, c };
    params.check()?;
    Ok(params)
}

impl SpannerParams {
    pub fn cf(&self) -> f64 {
        self.c as f64
    }

    /// Re-evaluates all five constraints.
    pub fn check(&self) -> Result<(), ParamError> {
        let Self { t, k, c } = *self;
        let fail = |what| Err(ParamError::Violated { t, k, c, what });
        if !(t.is_finite() && t > 1.0) {
            return Err(ParamError::StretchTooSmall(t));
        }
        let cf = c as f64;
        if k < 25 {
            return fail("k >= 25");
        }
        if (k as f64) < 16.0 * PI * t / (t - 1.0) - BOUND_SLACK {
            return fail("k >= 16 pi t / (t - 1)");
        }
        if cf <= 3.0 + 2.0 / (PI / k as f64).sin() {
            return fail("c > 3 + 2 / sin(pi / k)");
        }
        if cf < 2.0 + 2.0 * t / (t - 1.0) - BOUND_SLACK {
            return fail("c >= 2 + 2t / (t - 1)");
        }
        if (8.0 * PI / k as f64).cos() <= 0.5 || yao_ratio(k) > t {
            return fail("(1 + sqrt(2 - 2 cos(8 pi / k))) / (2 cos(8 pi / k) - 1) <= t");
        }
        Ok(())
    }

    /// Whether a same-level offset lies in the neighbor annulus
    /// `[c - 2, 2c) * diameter`.
    #[inline]
    pub fn in_annulus(&self, dx: i64, dy: i64) -> bool {
        let g = gap_sq(dx, dy);
        let c = self.c as i64;
        g >= 2 * (c - 2) * (c - 2) && g < 8 * c * c
    }

    /// Whether two level-0 cells are closer than `c - 2` (their sites form a clique).
    #[inline]
    pub fn clique_offset(&self, dx: i64, dy: i64) -> bool {
        let c = self.c as i64;
        gap_sq(dx, dy) < 2 * (c - 2) * (c - 2)
    }

    /// Whether two level-0 cells are at distance at most `c - 2`.
    #[inline]
    pub fn near_offset(&self, dx: i64, dy: i64) -> bool {
        let c = self.c as i64;
        gap_sq(dx, dy) <= 2 * (c - 2) * (c - 2)
    }

    /// Largest possible `|N(sigma)|`: the number of same-level offsets in the
    /// annulus, counted exactly.
    pub fn volume_bound(&self) -> usize {
        count_offsets(self.c, |dx, dy| self.in_annulus(dx, dy))
    }

    /// Number of level-0 offsets at distance at most `c - 2`.
    pub fn near_cell_count(&self) -> usize {
        count_offsets(self.c, |dx, dy| self.near_offset(dx, dy))
    }

    /// Bound on `|edges| / n` for the annulus-driven constructions: one edge
    /// per neighbor cell and cone.
    pub fn sparsity_bound(&self) -> f64 {
        (self.k * self.volume_bound()) as f64
    }

    /// Bound on `|edges| / n` for the radius-ratio construction, which also
    /// adds both orientations of a Yao graph (at most `2k` edges per site)
    /// for every nearby level-0 cell pair.
    pub fn sparsity_bound_with_cliques(&self) -> f64 {
        self.sparsity_bound() + (2 * self.k * self.near_cell_count()) as f64
    }

    /// Bound on the size of a geometric-reachability cover set.
    pub fn cover_set_bound(&self) -> usize {
        self.near_cell_count() + self.k * self.volume_bound()
    }
}

fn count_offsets(c: u32, pred: impl Fn(i64, i64) -> bool) -> usize {
    let r = 4 * c as i64 + 4;
    let mut n = 0;
    for dx in -r..=r {
        for dy in -r..=r {
            if pred(dx, dy) {
                n += 1;
            }
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_parameter_table() {
        // independent scripted evaluation of the constraints
        let table = [(1.1, 553, 356), (1.25, 252, 164), (1.5, 151, 100), (2.0, 101, 68), (3.0, 76, 52), (5.0, 63, 44)];
        for (t, k, c) in table {
            let p = spanner_parameters(t).unwrap();
            assert_eq!((p.k, p.c), (k, c), "t = {t}");
        }
    }

    #[test]
    fn minimality() {
        for t in [1.2, 1.5, 2.0, 2.5, 4.0] {
            let p = spanner_parameters(t).unwrap();
            assert!(SpannerParams { k: p.k - 1, ..p }.check().is_err() || p.k == 25);
            assert!(SpannerParams { c: p.c - 1, ..p }.check().is_err());
        }
    }

    #[test]
    fn rejects_t_at_most_one() {
        assert!(spanner_parameters(1.0).is_err());
        assert!(spanner_parameters(0.5).is_err());
        assert!(spanner_parameters(f64::NAN).is_err());
    }

    #[test]
    fn frozen_offset_counts() {
        // exact integer enumeration, cross-checked by an independent script
        let p = spanner_parameters(2.0).unwrap();
        assert_eq!(p.volume_bound(), 89636);
        assert_eq!(p.near_cell_count(), 28117);
        let p = spanner_parameters(3.0).unwrap();
        assert_eq!(p.volume_bound(), 52860);
        assert_eq!(p.near_cell_count(), 16273);
        let p = spanner_parameters(1.5).unwrap();
        assert_eq!(p.volume_bound(), 192120);
    }

    #[test]
    fn annulus_matches_float_distance_away_from_boundary() {
        let p = spanner_parameters(2.0).unwrap();
        let c = p.cf();
        for dx in -200i64..=200 {
            for dy in [-150i64, -3, 0, 7, 96] {
                let gx = (dx.abs() - 1).max(0) as f64;
                let gy = (dy.abs() - 1).max(0) as f64;
                let d = gx.hypot(gy) * std::f64::consts::FRAC_1_SQRT_2;
                if (d - (c - 2.0)).abs() > 1e-6 && (d - 2.0 * c).abs() > 1e-6 {
                    assert_eq!(p.in_annulus(dx, dy), d >= c - 2.0 && d < 2.0 * c);
                }
            }
        }
    }
}
