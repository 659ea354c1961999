//! Binary insertion sort.
//!
//! Elements are inserted in id order. Before each insertion the known order is
//! covered by a minimum set of chains, and two binary searches per chain find
//! the lowest element above the new one and the highest element below it.

use super::{Inserted, Memo};
use crate::chainmerge::ChainMergeIndex;
use crate::error::Result;
use crate::oracle::Oracle;
use crate::poset::Verdict;

/// Sorts all elements of the oracle, assuming width at most `w`.
pub fn bin_insertion_sort<O: Oracle + ?Sized>(oracle: &mut O, w: usize) -> Result<ChainMergeIndex> {
    let n = oracle.len();
    let mut known = Inserted::new(n, w);
    for e in 0..n {
        let chains = known.chains()?;
        let mut memo = Memo::default();
        let mut below = Vec::new();
        let mut above = Vec::new();
        for chain in &chains {
            // first position whose element dominates e
            let (mut lo, mut hi) = (0, chain.len());
            while lo < hi {
                let mid = (lo + hi) / 2;
                if memo.get(oracle, chain[mid], e)? == Verdict::Dominates {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            let top = lo;
            // first position in [0, top) that e does not dominate
            let (mut lo, mut hi) = (0, top);
            while lo < hi {
                let mid = (lo + hi) / 2;
                if memo.get(oracle, chain[mid], e)? == Verdict::DominatedBy {
                    lo = mid + 1;
                } else {
                    hi = mid;
                }
            }
            below.extend_from_slice(&chain[..lo]);
            above.extend_from_slice(&chain[top..]);
        }
        known.add(e, &below, &above);
    }
    known.finish()
}
