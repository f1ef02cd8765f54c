//! Spanner construction for transmission graphs.
//!
//! Three builders share the same shape: normalize the instance, build a
//! cell hierarchy, derive the annulus decomposition, then select incoming
//! edges per cone.
//!
//! * [`Variant::Spread`]: full quadtree, envelope-based selection. Cost
//!   grows with the spread of the point set.
//! * [`Variant::Ratio`]: quadforest of height `ceil(log2 Psi)`, the same
//!   selection, plus Yao graphs among sites of nearby level-0 cells.
//! * [`Variant::General`]: compressed quadtree refined by a well-separated
//!   pair decomposition, selection through a dynamic nearest-neighbor
//!   structure.
//!
//! Cones are independent, so all variants process them in parallel when
//! [`Execution::Parallel`] is requested and the `parallel` feature is on.
//! Every edge is tested against the original, unnormalized coordinates.

mod engine;
pub mod envelope;
pub mod euclidean;
mod general;
mod graph;
pub mod shorter_edge;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

pub use envelope::{select_edges_bruteforce, select_edges_envelope, CapEnvelope, EnvelopeError, SeparatingLine};
pub use euclidean::{euclidean_spanner, yao_graph, yao_stretch};
pub use graph::SpannerGraph;
pub use shorter_edge::{verify_shorter_edge, ShorterEdgeReport};

use crate::decomposition::{
    augment_with_wspd, build_compressed_quadtree, build_quadforest, build_quadtree, compute_wspd, derive_decomposition,
    AnnulusDecomposition, DecompositionError,
};
use crate::geom_query::{DynamicNN, GridNn};
use crate::geometry::{validate_sites, Site, SiteError, EPS};
use crate::normalize::{normalize, Normalization, NormalizeError, NormalizeMode};
use crate::par::{map_range, map_slice, Execution};
use crate::params::{spanner_parameters, ParamError, SpannerParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Spread,
    Ratio,
    General,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Spread, Variant::Ratio, Variant::General];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Spread => "spread",
            Variant::Ratio => "ratio",
            Variant::General => "general",
        }
    }

    pub fn normalize_mode(self, params: &SpannerParams) -> NormalizeMode {
        match self {
            Variant::Spread => NormalizeMode::ClosestPair(params.cf()),
            Variant::Ratio => NormalizeMode::SmallestRadius(params.cf()),
            Variant::General => NormalizeMode::ClosestPair(params.cf() + 2.0),
        }
    }

    /// Upper bound on `m / n` for this variant.
    pub fn sparsity_bound(self, params: &SpannerParams) -> f64 {
        match self {
            Variant::Ratio => params.sparsity_bound_with_cliques(),
            _ => params.sparsity_bound(),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown variant `{s}` (expected spread, ratio or general)"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildOptions {
    pub execution: Execution,
}

impl BuildOptions {
    pub fn sequential() -> Self {
        Self { execution: Execution::Sequential }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BuildReport {
    pub nodes: usize,
    pub levels: usize,
    /// Stored (pruned) neighbor pairs.
    pub neighbor_pairs: usize,
    pub wspd_pairs: usize,
    /// Largest in-degree of one site within one cone, over all cones.
    pub max_cone_in_degree: usize,
    pub clique_edges: usize,
    /// Yao edges dropped because the source does not reach the target.
    pub clique_rejected: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum SpannerError {
    #[error(transparent)]
    Sites(#[from] SiteError),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
}

/// A normalized instance with its decomposition.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub decomposition: AnnulusDecomposition,
    pub normalization: Normalization,
    pub wspd_pairs: usize,
}

/// Absolute slack, in normalized units, that covers the `EPS` tolerance of
/// the disk test in original units plus rounding from the map.
pub fn radius_slack(normalized: &[Site], scale: f64) -> f64 {
    let mag = normalized.iter().map(|s| s.x.abs().max(s.y.abs()) + s.radius).fold(0.0, f64::max);
    2.0 * EPS * scale + 1e-12 * mag
}

/// Normalizes `sites` and builds the decomposition `variant` uses.
/// Needs at least two sites.
pub fn prepare(sites: &[Site], params: &SpannerParams, variant: Variant) -> Result<Prepared, SpannerError> {
    let (normalized, normalization) = normalize(sites, variant.normalize_mode(params))?;
    let slack = radius_slack(&normalized, normalization.scale);
    let (structure, wspd_pairs) = match variant {
        Variant::Spread => (build_quadtree(normalized, params)?, 0),
        Variant::Ratio => (build_quadforest(normalized, params)?, 0),
        Variant::General => {
            let tree = build_compressed_quadtree(normalized)?;
            let pairs = compute_wspd(&tree, params.cf());
            (augment_with_wspd(&tree, &pairs, params), pairs.len())
        }
    };
    let decomposition = derive_decomposition(structure, *params, slack);
    Ok(Prepared { decomposition, normalization, wspd_pairs })
}

fn report_for(p: &Prepared) -> BuildReport {
    let s = &p.decomposition.structure;
    BuildReport {
        nodes: s.nodes.len(),
        levels: s.level_count(),
        neighbor_pairs: p.decomposition.incoming.iter().map(Vec::len).sum(),
        wspd_pairs: p.wspd_pairs,
        ..BuildReport::default()
    }
}

/// Builds a `t`-spanner of the transmission graph of `sites`.
pub fn build_spanner(
    sites: &[Site],
    t: f64,
    variant: Variant,
    opts: BuildOptions,
) -> Result<(SpannerGraph, BuildReport), SpannerError> {
    match variant {
        Variant::General => build_spanner_general_with::<GridNn>(sites, t, opts),
        _ => build_with_envelopes(sites, t, variant, opts),
    }
}

fn trivial(sites: &[Site], params: &SpannerParams) -> Option<(SpannerGraph, BuildReport)> {
    (sites.len() < 2).then(|| (SpannerGraph::empty(sites.len(), params.t, params.k, params.c), BuildReport::default()))
}

fn build_with_envelopes(
    sites: &[Site],
    t: f64,
    variant: Variant,
    opts: BuildOptions,
) -> Result<(SpannerGraph, BuildReport), SpannerError> {
    let params = spanner_parameters(t)?;
    validate_sites(sites)?;
    if let Some(out) = trivial(sites, &params) {
        return Ok(out);
    }
    let prepared = prepare(sites, &params, variant)?;
    let dec = &prepared.decomposition;
    let mut report = report_for(&prepared);
    let cones = map_range(opts.execution, params.k, |j| engine::select_for_cone(dec, sites, j));
    let mut edges = Vec::new();
    for cone in cones {
        let cone = cone?;
        report.max_cone_in_degree = report.max_cone_in_degree.max(cone.max_in_degree);
        edges.extend(cone.edges);
    }
    if variant == Variant::Ratio {
        let (clique, rejected) = clique_edges(dec, sites, &params, opts.execution);
        report.clique_edges = clique.len();
        report.clique_rejected = rejected;
        edges.extend(clique);
    }
    Ok((SpannerGraph::from_edges(sites, edges, t, params.k, params.c), report))
}

/// Directed edges among sites of level-0 cells closer than `c - 2`: Yao
/// graphs on distinct locations, both orientations, plus links between
/// coincident sites. Returns the edges kept and the number dropped for not
/// being edges of the transmission graph.
fn clique_edges(
    dec: &AnnulusDecomposition,
    orig: &[Site],
    params: &SpannerParams,
    exec: Execution,
) -> (Vec<(u32, u32)>, usize) {
    let s = &dec.structure;
    let Some(index) = s.level_index(0) else {
        return (Vec::new(), 0);
    };
    // offsets with gap below c - 2 diameters stay within sqrt(2)(c - 2) + 1 cells
    let reach = 2 * params.c as i64;
    let mut pairs = Vec::new();
    for &a in s.nodes_at_level(0) {
        let cell = s.nodes[a].cell;
        index.window(cell.ix - reach, cell.ix + reach, cell.iy - reach, cell.iy + reach, |b, bx, by| {
            if b >= a && params.clique_offset(bx - cell.ix, by - cell.iy) {
                pairs.push((a, b));
            }
        });
    }
    let k = params.k;
    let per_pair = map_slice(exec, &pairs, |&(a, b)| {
        let mut members: Vec<usize> = s.sites_of(a).to_vec();
        if b != a {
            members.extend_from_slice(s.sites_of(b));
        }
        members.sort_unstable();
        let mut edges = Vec::new();
        let mut rejected = 0usize;
        let mut push = |p: usize, q: usize, edges: &mut Vec<(u32, u32)>| {
            if orig[p].covers(orig[q].point()) {
                edges.push((p as u32, q as u32));
            } else {
                rejected += 1;
            }
        };
        let mut reps: Vec<usize> = Vec::new();
        let mut seen: HashMap<(u64, u64), usize> = HashMap::new();
        for &p in &members {
            let key = (orig[p].x.to_bits(), orig[p].y.to_bits());
            match seen.get(&key) {
                Some(&r) => {
                    push(r, p, &mut edges);
                    push(p, r, &mut edges);
                }
                None => {
                    seen.insert(key, p);
                    reps.push(p);
                }
            }
        }
        let points: Vec<_> = reps.iter().map(|&p| orig[p].point()).collect();
        for (i, j) in yao_graph(&points, k) {
            push(reps[i], reps[j], &mut edges);
            push(reps[j], reps[i], &mut edges);
        }
        (edges, rejected)
    });
    let mut edges = Vec::new();
    let mut rejected = 0;
    for (e, r) in per_pair {
        edges.extend(e);
        rejected += r;
    }
    edges.sort_unstable();
    edges.dedup();
    (edges, rejected)
}

pub fn build_spanner_spread(sites: &[Site], t: f64) -> Result<SpannerGraph, SpannerError> {
    build_spanner(sites, t, Variant::Spread, BuildOptions::default()).map(|(g, _)| g)
}

pub fn build_spanner_radius_ratio(sites: &[Site], t: f64) -> Result<SpannerGraph, SpannerError> {
    build_spanner(sites, t, Variant::Ratio, BuildOptions::default()).map(|(g, _)| g)
}

/// General construction with the nearest-neighbor structure `N`.
pub fn build_spanner_general<N: DynamicNN + Default>(sites: &[Site], t: f64) -> Result<SpannerGraph, SpannerError> {
    build_spanner_general_with::<N>(sites, t, BuildOptions::default()).map(|(g, _)| g)
}

/// Each cone gets its own family of `N` structures, so cones can run
/// concurrently.
pub fn build_spanner_general_with<N: DynamicNN + Default>(
    sites: &[Site],
    t: f64,
    opts: BuildOptions,
) -> Result<(SpannerGraph, BuildReport), SpannerError> {
    let params = spanner_parameters(t)?;
    validate_sites(sites)?;
    if let Some(out) = trivial(sites, &params) {
        return Ok(out);
    }
    let prepared = prepare(sites, &params, Variant::General)?;
    let dec = &prepared.decomposition;
    let mut report = report_for(&prepared);
    let cones = map_range(opts.execution, params.k, |j| general::select_for_cone_nn::<N>(dec, sites, j));
    let mut edges = Vec::new();
    for cone in cones {
        report.max_cone_in_degree = report.max_cone_in_degree.max(cone.max_in_degree);
        edges.extend(cone.edges);
    }
    Ok((SpannerGraph::from_edges(sites, edges, t, params.k, params.c), report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert!("fast".parse::<Variant>().is_err());
    }

    #[test]
    fn single_site_gives_empty_spanner() {
        for v in Variant::ALL {
            let (g, _) = build_spanner(&[Site::new(0, 1.0, 1.0, 1.0)], 2.0, v, BuildOptions::default()).unwrap();
            assert_eq!((g.n, g.m()), (1, 0));
        }
    }

    #[test]
    fn one_way_pair_keeps_only_the_reaching_edge() {
        let sites = vec![Site::new(0, 0.0, 0.0, 2.0), Site::new(1, 1.5, 0.0, 1.0)];
        for v in Variant::ALL {
            let (g, _) = build_spanner(&sites, 2.0, v, BuildOptions::default()).unwrap();
            assert!(g.contains(0, 1), "{v}");
            assert!(!g.contains(1, 0), "{v}");
        }
    }

    #[test]
    fn stretch_below_one_rejected() {
        let sites = vec![Site::new(0, 0.0, 0.0, 2.0), Site::new(1, 1.5, 0.0, 1.0)];
        assert!(matches!(build_spanner_spread(&sites, 1.0), Err(SpannerError::Params(_))));
    }
}
