//! Poset mergesort.
//!
//! Elements are split by position into halves, each half is sorted into at most
//! `w` chains, and the concatenated chains are indexed and peeled back to `w`.
//! The index built at each level is kept while its parent is built, so the
//! parent only queries pairs that straddle its two halves.

use super::peeling::peel_with_index;
use crate::chainmerge::ChainMergeIndex;
use crate::error::Result;
use crate::oracle::{Counting, Oracle};
use crate::poset::{Chains, ElementId};

/// One chain-merge build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildRecord {
    pub chains: usize,
    pub elements: usize,
    pub queries: u64,
}

/// One call to peeling. `rounds` holds the decomposition after every round
/// when tracing is on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelRecord {
    pub input: Chains,
    pub output: Chains,
    pub rounds: Vec<Chains>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MergesortStats {
    pub recursion_queries: u64,
    pub final_queries: u64,
    pub builds: Vec<BuildRecord>,
    pub peels: Vec<PeelRecord>,
}

impl MergesortStats {
    pub fn total_queries(&self) -> u64 {
        self.recursion_queries + self.final_queries
    }
}

struct Node {
    chains: Chains,
    index: Option<ChainMergeIndex>,
}

/// Sorts all elements of the oracle, assuming width at most `w`.
pub fn poset_mergesort<O: Oracle + ?Sized>(oracle: &mut O, w: usize) -> Result<ChainMergeIndex> {
    let all: Vec<ElementId> = (0..oracle.len()).collect();
    Ok(mergesort_with_stats(oracle, &all, w, false)?.0)
}

/// Sorts the listed elements, reporting per-phase query counts. With `trace`
/// every peeling call and round is recorded.
pub fn mergesort_with_stats<O: Oracle + ?Sized>(
    oracle: &mut O,
    elems: &[ElementId],
    w: usize,
    trace: bool,
) -> Result<(ChainMergeIndex, MergesortStats)> {
    assert!(w >= 1, "width bound must be positive");
    let mut stats = MergesortStats::default();
    let node = recurse(oracle, elems, w, trace, &mut stats)?;

    let mut counted = Counting::new(&mut *oracle);
    let prior = |x, y| node.index.as_ref().and_then(|i| i.try_lookup(x, y));
    let index = ChainMergeIndex::build_with_prior(&mut counted, node.chains, prior)?;
    stats.final_queries = counted.count();
    stats.builds.push(BuildRecord {
        chains: index.chains().len(),
        elements: index.len(),
        queries: stats.final_queries,
    });
    Ok((index, stats))
}

fn recurse<O: Oracle + ?Sized>(
    oracle: &mut O,
    elems: &[ElementId],
    w: usize,
    trace: bool,
    stats: &mut MergesortStats,
) -> Result<Node> {
    if elems.len() <= w {
        return Ok(Node { chains: elems.iter().map(|&x| vec![x]).collect(), index: None });
    }
    let mid = elems.len() / 2;
    let left = recurse(oracle, &elems[..mid], w, trace, stats)?;
    let right = recurse(oracle, &elems[mid..], w, trace, stats)?;
    let mut chains = left.chains;
    chains.extend(right.chains);

    let prior = |x, y| {
        let from = |idx: &Option<ChainMergeIndex>| idx.as_ref().and_then(|i| i.try_lookup(x, y));
        from(&left.index).or_else(|| from(&right.index))
    };
    let mut counted = Counting::new(&mut *oracle);
    let index = ChainMergeIndex::build_with_prior(&mut counted, chains, prior)?;
    stats.recursion_queries += counted.count();
    stats.builds.push(BuildRecord { chains: index.chains().len(), elements: elems.len(), queries: counted.count() });

    let chains = if index.chains().len() > w {
        let mut rounds = Vec::new();
        let out = peel_with_index(&index, w, |c| {
            if trace {
                rounds.push(c.clone());
            }
        })?;
        if trace {
            stats.peels.push(PeelRecord { input: index.chains().clone(), output: out.clone(), rounds });
        }
        out
    } else {
        index.chains().clone()
    };
    Ok(Node { chains, index: Some(index) })
}
