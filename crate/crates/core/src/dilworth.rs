//! Width and minimum chain decompositions via bipartite matching on the closure.
//!
//! An element `x` is matched to `y` when `y` sits directly below `x` in its chain,
//! so the number of chains is the number of elements minus the matching size.

use crate::poset::{Chains, ElementId, Poset};
use fixedbitset::FixedBitSet;
use std::collections::VecDeque;

/// A maximum matching over a growing set of active elements.
///
/// Rows are supplied by the caller on every update and must be transitively
/// closed; entries for inactive elements are ignored.
#[derive(Debug, Clone)]
pub struct ChainCover {
    active: FixedBitSet,
    lower: Vec<Option<ElementId>>,
    upper: Vec<Option<ElementId>>,
    matched: usize,
    buf: FixedBitSet,
}

impl ChainCover {
    pub fn new(n: usize) -> ChainCover {
        ChainCover {
            active: FixedBitSet::with_capacity(n),
            lower: vec![None; n],
            upper: vec![None; n],
            matched: 0,
            buf: FixedBitSet::with_capacity(n),
        }
    }

    /// Activates `x` and restores a maximum matching. The previous matching stays
    /// valid, so at most two augmenting rounds succeed.
    pub fn insert(&mut self, x: ElementId, rows: &[FixedBitSet]) {
        self.active.insert(x);
        while self.augment(rows) {}
    }

    /// Activates all of `elems` at once, seeding with a greedy matching.
    pub fn insert_all(&mut self, elems: &[ElementId], rows: &[FixedBitSet]) {
        for &x in elems {
            self.active.insert(x);
        }
        for &x in elems {
            if self.lower[x].is_some() {
                continue;
            }
            let free = rows[x].ones().find(|&y| self.active.contains(y) && self.upper[y].is_none());
            if let Some(y) = free {
                self.lower[x] = Some(y);
                self.upper[y] = Some(x);
                self.matched += 1;
            }
        }
        while self.augment(rows) {}
    }

    pub fn chain_count(&self) -> usize {
        self.active.count_ones(..) - self.matched
    }

    /// Finds one shortest augmenting path by BFS from every free left vertex.
    fn augment(&mut self, rows: &[FixedBitSet]) -> bool {
        let mut unvisited = self.active.clone();
        let mut via: Vec<Option<ElementId>> = vec![None; self.lower.len()];
        let mut queue: VecDeque<ElementId> = self.active.ones().filter(|&x| self.lower[x].is_none()).collect();
        while let Some(x) = queue.pop_front() {
            self.buf.clone_from(&rows[x]);
            self.buf.intersect_with(&unvisited);
            let reached: Vec<ElementId> = self.buf.ones().collect();
            for y in reached {
                unvisited.set(y, false);
                via[y] = Some(x);
                match self.upper[y] {
                    Some(next) => queue.push_back(next),
                    None => {
                        self.flip_path(y, &via);
                        return true;
                    }
                }
            }
        }
        false
    }

    fn flip_path(&mut self, end: ElementId, via: &[Option<ElementId>]) {
        let mut y = end;
        loop {
            let x = via[y].expect("path parent");
            let previous = self.lower[x];
            self.lower[x] = Some(y);
            self.upper[y] = Some(x);
            match previous {
                Some(p) => y = p,
                None => break,
            }
        }
        self.matched += 1;
    }

    /// Chains in ascending order, listed by their lowest element's id.
    pub fn chains(&self) -> Chains {
        let mut out = Vec::new();
        for x in self.active.ones() {
            if self.lower[x].is_some() {
                continue;
            }
            let mut chain = vec![x];
            let mut cur = x;
            while let Some(up) = self.upper[cur] {
                chain.push(up);
                cur = up;
            }
            out.push(chain);
        }
        out
    }
}

/// Minimum chain decomposition of the sub-order on `elems` given closed `rows`.
pub fn chain_cover_of(elems: &[ElementId], rows: &[FixedBitSet]) -> Chains {
    let mut cover = ChainCover::new(rows.len());
    cover.insert_all(elems, rows);
    cover.chains()
}

/// Minimum chain decomposition of `p`.
pub fn min_chain_decomposition(p: &Poset) -> Chains {
    let all: Vec<ElementId> = (0..p.len()).collect();
    chain_cover_of(&all, p.rows())
}

/// Size of the largest antichain, equal to the minimum number of chains.
pub fn width(p: &Poset) -> usize {
    let all: Vec<ElementId> = (0..p.len()).collect();
    let mut cover = ChainCover::new(p.len());
    cover.insert_all(&all, p.rows());
    cover.chain_count()
}
