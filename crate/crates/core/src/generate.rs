//! Seeded random instance generators.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64`, so a seed fixes the
//! instance on every platform.

use crate::poset::{close_rows, empty_rows, ElementId, Poset};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Assigns each element to one of `w` chains uniformly and shuffles each chain.
/// Chains are listed smallest element first.
pub fn random_chains<R: Rng>(n: usize, w: usize, rng: &mut R) -> Vec<Vec<ElementId>> {
    assert!(w >= 1, "width must be positive");
    let mut chains = vec![Vec::new(); w];
    for x in 0..n {
        chains[rng.gen_range(0..w)].push(x);
    }
    for chain in &mut chains {
        chain.shuffle(rng);
    }
    chains
}

fn rows_from_chains(n: usize, chains: &[Vec<ElementId>]) -> Vec<fixedbitset::FixedBitSet> {
    let mut below = empty_rows(n);
    for chain in chains {
        for (i, &x) in chain.iter().enumerate() {
            for &y in &chain[..i] {
                below[x].insert(y);
            }
        }
    }
    below
}

/// A union of `w` disjoint random chains.
pub fn chain_union(n: usize, w: usize, seed: u64) -> Poset {
    let mut rng = rng_from_seed(seed);
    let chains = random_chains(n, w, &mut rng);
    Poset::from_closed_rows(rows_from_chains(n, &chains))
}

/// Random chains plus cross-chain relations, keeping width at most `w`.
///
/// A uniform global order fixes every chain's internal order; each pair from
/// different chains that agrees with the global order becomes a relation with
/// probability `1/w`.
pub fn width_bounded(n: usize, w: usize, seed: u64) -> Poset {
    let mut rng = rng_from_seed(seed);
    assert!(w >= 1, "width must be positive");
    let chain_of: Vec<usize> = (0..n).map(|_| rng.gen_range(0..w)).collect();
    let mut global: Vec<ElementId> = (0..n).collect();
    global.shuffle(&mut rng);

    let mut below = empty_rows(n);
    let p = 1.0 / w as f64;
    for (i, &x) in global.iter().enumerate() {
        for &y in &global[..i] {
            if chain_of[x] == chain_of[y] || rng.gen_bool(p) {
                below[x].insert(y);
            }
        }
    }
    close_rows(&mut below);
    Poset::from_closed_rows(below)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilworth::width;

    #[test]
    fn chain_union_shape() {
        let p = chain_union(60, 4, 11);
        assert!(width(&p) <= 4);
        let q = chain_union(60, 4, 11);
        assert_eq!(p, q);
        assert_ne!(p, chain_union(60, 4, 12));
    }

    #[test]
    fn width_bounded_respects_width() {
        for seed in 0..20 {
            for w in 1..=4 {
                let p = width_bounded(12, w, seed);
                assert!(width(&p) <= w);
            }
        }
    }

    #[test]
    fn single_chain() {
        let p = chain_union(10, 1, 0);
        assert_eq!(p.relation_count(), 45);
    }

    #[test]
    fn chain_sizes_concentrate() {
        // Each chain of D(1000, 4) has mean 250; a Chernoff bound puts a deviation
        // of 125 at probability below 1e-8 per chain.
        for seed in 0..10_000 {
            let mut rng = rng_from_seed(seed);
            let chains = random_chains(1000, 4, &mut rng);
            for c in &chains {
                assert!((125..=375).contains(&c.len()), "seed {seed}: chain of {}", c.len());
            }
        }
    }
}
