//! Site-to-site and site-to-point reachability in the transmission graph.

mod base;
mod geom;

pub use base::{base_cap, build_base_oracle, build_base_oracle_with_cap, BaseOracle, BASE_CAP};
pub use geom::{build_geom_oracle, CoverSet, GeomOracle, ORACLE_STRETCH};

use crate::spanner::SpannerError;

#[derive(Debug, thiserror::Error)]
pub enum ReachError {
    #[error("base oracle is capped at n = {cap}, got n = {n}")]
    CapExceeded { n: usize, cap: usize },
    #[error("base oracle covers {base} sites but there are {n}")]
    SizeMismatch { base: usize, n: usize },
    #[error(transparent)]
    Build(#[from] SpannerError),
}
