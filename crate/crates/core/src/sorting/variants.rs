//! Sorting without a known width bound, and sorting transitive relations.

use super::mergesort::poset_mergesort;
use crate::chainmerge::ChainMergeIndex;
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::poset::ElementId;
use crate::transitive::{recover_extra_relations, TransitiveAdapter, TransitiveOracle, TransitiveRelation};

#[derive(Debug, Clone)]
pub struct UnknownWidthSort {
    pub index: ChainMergeIndex,
    /// Width bounds tried, in order; the last one succeeded.
    pub attempts: Vec<usize>,
}

/// Runs mergesort with width bounds 2, 4, 8, … until one succeeds. A bound of
/// at least `n` always succeeds.
pub fn sort_unknown_width<O: Oracle + ?Sized>(oracle: &mut O) -> Result<UnknownWidthSort> {
    let n = oracle.len();
    let mut attempts = Vec::new();
    let mut b = 2usize;
    loop {
        attempts.push(b);
        match poset_mergesort(oracle, b) {
            Ok(index) => return Ok(UnknownWidthSort { index, attempts }),
            Err(Error::WidthExceeded(_)) if b < n => b *= 2,
            Err(e) => return Err(e),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TransitiveSort {
    /// Sorted form of the poset the adapter answered with.
    pub index: ChainMergeIndex,
    pub relation: TransitiveRelation,
    pub sort_queries: u64,
    pub recovery_queries: u64,
}

struct CountPairs<T> {
    inner: T,
    count: u64,
}

impl<T: TransitiveOracle> TransitiveOracle for CountPairs<T> {
    fn len(&self) -> usize {
        self.inner.len()
    }

    fn query_pair(&mut self, x: ElementId, y: ElementId) -> Result<(bool, bool)> {
        let r = self.inner.query_pair(x, y)?;
        self.count += 1;
        Ok(r)
    }
}

/// Sorts the poset induced by the adapter with mergesort, then recovers the
/// pairs related in both directions.
pub fn sort_transitive<T: TransitiveOracle + ?Sized>(inner: &mut T, w: usize) -> Result<TransitiveSort> {
    let mut adapter = TransitiveAdapter::new(&mut *inner);
    let index = poset_mergesort(&mut adapter, w)?;
    let sort_queries = adapter.forwarded();
    let mut counted = CountPairs { inner, count: 0 };
    let relation = recover_extra_relations(&mut counted, &index)?;
    Ok(TransitiveSort { index, relation, sort_queries, recovery_queries: counted.count })
}
