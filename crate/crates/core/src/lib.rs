//! Sparse spanners for directed transmission graphs, with BFS and
//! geometric reachability built on top of them.
//!
//! A site `p` with radius `r_p` has a directed edge to every site inside its
//! disk. [`spanner::build_spanner`] selects `O(n)` of those edges so that
//! shortest paths stretch by at most a factor `t`.

pub mod bfs;
pub mod decomposition;
pub mod geom_query;
pub mod geometry;
pub mod instance;
pub mod io;
pub mod normalize;
pub mod oracle;
pub mod par;
pub mod params;
pub mod reachability;
pub mod spanner;
