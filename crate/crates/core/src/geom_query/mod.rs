//! Query structures used by the constructions and applications: dynamic
//! nearest neighbor and disk containment. Both sit behind traits so faster
//! implementations can replace the baselines without touching callers.

mod disk;
mod nn;

pub use disk::{build_disk_containment, DiskContainment, KdDisks, LinearDisks};
pub use nn::{DynamicNN, GridNn, LinearNn, NnError};
