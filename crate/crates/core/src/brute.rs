//! Reference answers computed directly from a known poset.

use crate::poset::{ElementId, Poset};

/// Length of the longest chain strictly below each element.
pub fn heights_bruteforce(p: &Poset) -> Vec<usize> {
    let n = p.len();
    let mut order: Vec<ElementId> = (0..n).collect();
    // in a closed order, fewer elements below means earlier in some linear extension
    order.sort_by_key(|&x| p.below(x).count_ones(..));
    let mut h = vec![0; n];
    for &x in &order {
        h[x] = p.below(x).ones().map(|y| h[y] + 1).max().unwrap_or(0);
    }
    h
}

/// Elements of height at most `k - 1`, sorted by id.
pub fn kselect_bruteforce(p: &Poset, k: usize) -> Vec<ElementId> {
    heights_bruteforce(p).into_iter().enumerate().filter(|&(_, h)| h < k).map(|(x, _)| x).collect()
}

/// Minimal elements, sorted by id.
pub fn minimals_bruteforce(p: &Poset) -> Vec<ElementId> {
    kselect_bruteforce(p, 1)
}
