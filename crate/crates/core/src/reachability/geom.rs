//! Geometric reachability: can site `s` reach an arbitrary point `t`?
//!
//! Every node of the radius-ratio quadforest keeps a disk-containment index
//! over its sites. A query collects a constant-size cover set `Q` around `t`
//! such that every disk containing `t` also contains a member of `Q`; then
//! `s` reaches `t` exactly when it reaches some member of `Q`.

use crate::decomposition::{radius_tol, AnnulusDecomposition};
use crate::geom_query::{DiskContainment, KdDisks};
use crate::geometry::{cell_distance, cell_of, cones_containing_cell, validate_sites, GridCell, Point, Site};
use crate::normalize::Normalization;
use crate::params::{spanner_parameters, SpannerParams};
use crate::spanner::{prepare, Variant};

use super::{BaseOracle, ReachError};

/// Stretch of the spanner whose quadforest the oracle reuses.
pub const ORACLE_STRETCH: f64 = 2.0;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoverSet {
    /// Site ids, sorted and distinct. Every member's disk contains the point.
    pub sites: Vec<usize>,
    /// Sites contributed by nearby level-0 cells.
    pub near: Vec<usize>,
    /// Per cone, the level at which it stopped, if any.
    pub stop_level: Vec<Option<u32>>,
}

impl CoverSet {
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }
}

pub struct GeomOracle {
    sites: Vec<Site>,
    forest: Option<Forest>,
    params: SpannerParams,
    base: BaseOracle,
}

struct Forest {
    dec: AnnulusDecomposition,
    map: Normalization,
    /// One index per forest node, over original coordinates.
    disks: Vec<KdDisks>,
}

pub fn build_geom_oracle(sites: &[Site], base: BaseOracle) -> Result<GeomOracle, ReachError> {
    if base.len() != sites.len() {
        return Err(ReachError::SizeMismatch { base: base.len(), n: sites.len() });
    }
    validate_sites(sites).map_err(|e| ReachError::Build(e.into()))?;
    let params = spanner_parameters(ORACLE_STRETCH).expect("fixed stretch is valid");
    let forest = if sites.is_empty() {
        None
    } else {
        let prepared = prepare(sites, &params, Variant::Ratio)?;
        let dec = prepared.decomposition;
        let disks = (0..dec.structure.nodes.len())
            .map(|v| {
                let members: Vec<Site> = dec.structure.sites_of(v).iter().map(|&p| sites[p]).collect();
                KdDisks::new(&members)
            })
            .collect();
        Some(Forest { dec, map: prepared.normalization, disks })
    };
    Ok(GeomOracle { sites: sites.to_vec(), forest, params, base })
}

impl GeomOracle {
    pub fn params(&self) -> &SpannerParams {
        &self.params
    }

    pub fn base(&self) -> &BaseOracle {
        &self.base
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    /// Number of forest levels.
    pub fn depth(&self) -> usize {
        self.forest.as_ref().map_or(0, |f| f.dec.structure.level_count())
    }

    /// Total number of site references held by the per-node indices.
    pub fn stored_references(&self) -> usize {
        self.forest.as_ref().map_or(0, |f| f.disks.iter().map(|d| d.len()).sum())
    }

    /// Upper bound on the size of any cover set.
    pub fn cover_set_bound(&self) -> usize {
        self.params.cover_set_bound()
    }

    pub fn cover_set(&self, t: Point) -> CoverSet {
        let Some(f) = &self.forest else {
            return CoverSet::default();
        };
        let s = &f.dec.structure;
        let c = self.params.c as i64;
        let k = self.params.k;
        let tn = f.map.apply(t);
        let mut out = CoverSet { stop_level: vec![None; k], ..CoverSet::default() };

        let home = cell_of(tn, 0);
        if let Some(index) = s.level_index(0) {
            let reach = 2 * c;
            let mut near = Vec::new();
            index.window(home.ix - reach, home.ix + reach, home.iy - reach, home.iy + reach, |tau, ix, iy| {
                if self.params.near_offset(ix - home.ix, iy - home.iy) {
                    near.push(tau);
                }
            });
            near.sort_unstable();
            out.near = near.into_iter().filter_map(|tau| f.disks[tau].query(t)).collect();
        }

        let mut open = k;
        let reach = 4 * c + 2;
        for level in 0..s.level_count() as u32 {
            if open == 0 {
                break;
            }
            let Some(index) = s.level_index(level) else {
                continue;
            };
            let sigma = home.ancestor(level);
            let apex = sigma.center();
            let mut found = Vec::new();
            index.window(sigma.ix - reach, sigma.ix + reach, sigma.iy - reach, sigma.iy + reach, |tau, ix, iy| {
                if !self.params.in_annulus(ix - sigma.ix, iy - sigma.iy) {
                    return;
                }
                let cell = GridCell::new(level, ix, iy);
                // no disk of tau can reach t if even its largest one falls short of the cell
                let r = s.sites[s.nodes[tau].m].radius;
                if cell_distance(&sigma, &cell) > r + radius_tol(r, f.dec.radius_slack) {
                    return;
                }
                if let Some(q) = f.disks[tau].query(t) {
                    found.push((cones_containing_cell(apex, &cell, k, 2), q));
                }
            });
            for (j, stop) in out.stop_level.iter_mut().enumerate() {
                if stop.is_some() {
                    continue;
                }
                let mut hit = false;
                for (span, q) in &found {
                    if span.contains(j, k) {
                        out.sites.push(*q);
                        hit = true;
                    }
                }
                if hit {
                    *stop = Some(level);
                    open -= 1;
                }
            }
        }
        out.sites.extend_from_slice(&out.near);
        out.sites.sort_unstable();
        out.sites.dedup();
        out
    }

    /// Whether site `s` reaches point `t`. Panics if `s` is out of range.
    pub fn geom_reach(&self, s: usize, t: Point) -> bool {
        assert!(s < self.sites.len(), "site {s} out of range");
        self.cover_set(t).sites.iter().any(|&q| self.base.reach(s, q))
    }
}
