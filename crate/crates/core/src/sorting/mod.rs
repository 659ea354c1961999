//! Sorting algorithms. Each returns a [`ChainMergeIndex`] over every element.

mod entropy;
mod insertion;
mod mergesort;
mod peeling;
mod variants;

pub use entropy::{
    entropy_sort, entropy_sort_with, weighted_binary_search, EntropyOutcome, Probe, SearchRecord,
    WeightedIntervalPartition,
};
pub use insertion::bin_insertion_sort;
pub use mergesort::{mergesort_with_stats, poset_mergesort, BuildRecord, MergesortStats, PeelRecord};
pub use peeling::{peel, peel_with_index};
pub use variants::{sort_transitive, sort_unknown_width, TransitiveSort, UnknownWidthSort};

use crate::chainmerge::ChainMergeIndex;
use crate::dilworth::ChainCover;
use crate::error::{Error, Result};
use crate::oracle::PosetOracle;
use crate::poset::{empty_rows, Chains, ElementId, Poset, Verdict};
use fixedbitset::FixedBitSet;
use std::collections::HashMap;

/// The order learned by an insertion sort, with a minimum chain cover kept
/// up to date.
struct Inserted {
    rows: Vec<FixedBitSet>,
    cover: ChainCover,
    w: usize,
}

impl Inserted {
    fn new(n: usize, w: usize) -> Self {
        Inserted { rows: empty_rows(n), cover: ChainCover::new(n), w }
    }

    /// Chains of the inserted elements; fails once more than `w` are needed.
    fn chains(&self) -> Result<Chains> {
        if self.cover.chain_count() > self.w {
            return Err(Error::WidthExceeded(self.w));
        }
        Ok(self.cover.chains())
    }

    /// Adds `e` with its complete relation to the inserted elements.
    fn add(&mut self, e: ElementId, below: &[ElementId], above: &[ElementId]) {
        for &y in below {
            self.rows[e].insert(y);
        }
        for &a in above {
            self.rows[a].insert(e);
        }
        self.cover.insert(e, &self.rows);
    }

    /// Final index, built from the learned order without further queries.
    fn finish(self) -> Result<ChainMergeIndex> {
        let chains = self.chains()?;
        let poset = Poset::from_closed_rows(self.rows);
        ChainMergeIndex::build(&mut PosetOracle::new(&poset), chains)
    }
}

/// Verdicts between the element being inserted and earlier elements.
#[derive(Default)]
struct Memo {
    seen: HashMap<ElementId, Verdict>,
}

impl Memo {
    /// Relation of `y` to `e`, asking the oracle once per `y`.
    fn get<O: crate::oracle::Oracle + ?Sized>(
        &mut self,
        oracle: &mut O,
        y: ElementId,
        e: ElementId,
    ) -> Result<Verdict> {
        if let Some(&v) = self.seen.get(&y) {
            return Ok(v);
        }
        let v = oracle.query(y, e)?;
        self.seen.insert(y, v);
        Ok(v)
    }
}
