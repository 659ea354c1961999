//! Shared fixtures for the benchmarks.

use posetkit::generate::{chain_union, width_bounded};
use posetkit::Poset;

/// Sizes and widths swept by the benchmarks.
pub const SIZES: [usize; 3] = [64, 256, 1024];
pub const WIDTHS: [usize; 3] = [2, 4, 8];

/// A fixed instance per size and width, alternating between both generators.
pub fn fixture(n: usize, w: usize) -> Poset {
    let seed = (n * 31 + w) as u64;
    if w.is_multiple_of(4) {
        width_bounded(n, w, seed)
    } else {
        chain_union(n, w, seed)
    }
}

pub fn grid() -> impl Iterator<Item = (usize, usize, Poset)> {
    SIZES.into_iter().flat_map(|n| WIDTHS.into_iter().map(move |w| (n, w, fixture(n, w))))
}
