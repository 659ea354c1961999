//! Query-efficient sorting and selection in partially ordered sets of bounded width.

pub mod adversary;
pub mod bounds;
pub mod brute;
pub mod chainmerge;
pub mod dilworth;
pub mod error;
pub mod extensions;
pub mod generate;
pub mod linext;
pub mod oracle;
pub mod poset;
pub mod selection;
pub mod sorting;
pub mod transitive;

pub use error::{Error, Result};
pub use poset::{Chains, ElementId, Poset, Verdict};
