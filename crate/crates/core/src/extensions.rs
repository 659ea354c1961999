//! Exact counting of width-bounded extensions of a known partial order.
//!
//! New elements are placed one at a time. A placement is a down-set `D` and an
//! up-set `A` of the current order with every member of `D` below every member
//! of `A`; each poset on the full ground set arises from exactly one sequence of
//! placements. Once the constrained elements are placed, the number of ways to
//! finish depends only on the isomorphism class of the current order, which is
//! memoised under a canonical labelling.

use crate::error::{Error, Result};
use crate::poset::ElementId;
use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::HashMap;

pub const DEFAULT_EXHAUSTIVE_CAP: usize = 8;

/// Hard limit from the bitmask representation.
const MASK_BITS: usize = 32;

/// Ordered pairs `(a, b)`, each read as `a ≻ b`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    pub enforced: Vec<(ElementId, ElementId)>,
    pub prohibited: Vec<(ElementId, ElementId)>,
}

impl ConstraintSet {
    pub fn new() -> ConstraintSet {
        ConstraintSet::default()
    }

    pub fn is_empty(&self) -> bool {
        self.enforced.is_empty() && self.prohibited.is_empty()
    }

    fn pairs(&self) -> impl Iterator<Item = (ElementId, ElementId, bool)> + '_ {
        let e = self.enforced.iter().map(|&(a, b)| (a, b, true));
        let p = self.prohibited.iter().map(|&(a, b)| (a, b, false));
        e.chain(p)
    }
}

/// A small order on elements `0..s`, as bitmask rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Small {
    below: Vec<u32>,
    above: Vec<u32>,
}

impl Small {
    fn len(&self) -> usize {
        self.below.len()
    }

    fn full(&self) -> u32 {
        if self.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.len()) - 1
        }
    }

    fn from_below(below: Vec<u32>) -> Small {
        let mut above = vec![0u32; below.len()];
        for (x, &row) in below.iter().enumerate() {
            for y in bits(row) {
                above[y] |= 1 << x;
            }
        }
        Small { below, above }
    }

    fn with_element(&self, down: u32, up: u32) -> Small {
        let z = self.len();
        let mut below = self.below.clone();
        let mut above = self.above.clone();
        for a in bits(up) {
            below[a] |= 1 << z;
        }
        for d in bits(down) {
            above[d] |= 1 << z;
        }
        below.push(down);
        above.push(up);
        Small { below, above }
    }

    fn incomparable(&self, x: usize) -> u32 {
        self.full() & !self.below[x] & !self.above[x] & !(1 << x)
    }

    fn max_antichain(&self, mask: u32) -> usize {
        if mask == 0 {
            return 0;
        }
        let x = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << x);
        let without = self.max_antichain(rest);
        let with = 1 + self.max_antichain(rest & self.incomparable(x));
        without.max(with)
    }

    /// Calls `f(down, up)` for every placement of a new element keeping width at most `w`.
    fn for_each_placement(&self, w: usize, mut f: impl FnMut(u32, u32)) {
        let full = self.full();
        for down in 0..=full {
            if bits(down).any(|d| self.below[d] & !down != 0) {
                continue;
            }
            let mut allowed = full & !down;
            for d in bits(down) {
                allowed &= self.above[d];
            }
            let mut up = allowed;
            loop {
                let closed = bits(up).all(|a| self.above[a] & !up == 0);
                if closed {
                    let free = full & !(down | up);
                    if self.max_antichain(free) < w {
                        f(down, up);
                    }
                }
                if up == 0 {
                    break;
                }
                up = (up - 1) & allowed;
            }
        }
    }
}

fn bits(mut mask: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

/// Relabels so that isomorphic orders share one row vector.
///
/// Elements are colored by iterated degree refinement; the result is the
/// lexicographically least row vector over all color-respecting permutations.
/// Twins (equal down-sets and up-sets) are kept in id order, which drops only
/// permutations that give identical rows.
fn canonical(q: &Small) -> Vec<u32> {
    let s = q.len();
    let mut color: Vec<usize> =
        (0..s).map(|x| (q.below[x].count_ones() as usize) * (s + 1) + q.above[x].count_ones() as usize).collect();
    let mut classes = usize::MAX;
    loop {
        let sigs: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..s)
            .map(|x| {
                let mut down: Vec<usize> = bits(q.below[x]).map(|y| color[y]).collect();
                let mut up: Vec<usize> = bits(q.above[x]).map(|y| color[y]).collect();
                down.sort_unstable();
                up.sort_unstable();
                (color[x], down, up)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        color = sigs.iter().map(|sig| distinct.binary_search(sig).unwrap()).collect();
        if distinct.len() == classes {
            break;
        }
        classes = distinct.len();
    }

    let mut slots: Vec<usize> = color.clone();
    slots.sort_unstable();
    let twin_lower: Vec<u32> = (0..s)
        .map(|x| (0..x).filter(|&y| q.below[y] == q.below[x] && q.above[y] == q.above[x]).fold(0u32, |m, y| m | 1 << y))
        .collect();

    let mut search = CanonSearch {
        q,
        color: &color,
        slots: &slots,
        twin_lower: &twin_lower,
        perm: Vec::with_capacity(s),
        used: 0,
        best: None,
    };
    search.run();
    search.best.unwrap_or_default()
}

struct CanonSearch<'a> {
    q: &'a Small,
    color: &'a [usize],
    slots: &'a [usize],
    twin_lower: &'a [u32],
    perm: Vec<usize>,
    used: u32,
    best: Option<Vec<u32>>,
}

impl CanonSearch<'_> {
    fn run(&mut self) {
        let i = self.perm.len();
        if i == self.slots.len() {
            let code = self.code();
            if self.best.as_ref().is_none_or(|b| code < *b) {
                self.best = Some(code);
            }
            return;
        }
        for x in 0..self.slots.len() {
            if self.used & (1 << x) != 0 || self.color[x] != self.slots[i] || self.twin_lower[x] & !self.used != 0 {
                continue;
            }
            self.used |= 1 << x;
            self.perm.push(x);
            self.run();
            self.perm.pop();
            self.used &= !(1 << x);
        }
    }

    fn code(&self) -> Vec<u32> {
        let mut pos = vec![0usize; self.perm.len()];
        for (i, &x) in self.perm.iter().enumerate() {
            pos[x] = i;
        }
        self.perm.iter().map(|&x| bits(self.q.below[x]).fold(0u32, |m, y| m | 1 << pos[y])).collect()
    }
}

/// Exhaustive extension counter with a memo shared across calls.
#[derive(Debug, Clone)]
pub struct ExtensionCounter {
    cap: usize,
    memo: HashMap<(Vec<u32>, usize, usize), BigUint>,
}

impl Default for ExtensionCounter {
    fn default() -> Self {
        ExtensionCounter::new(DEFAULT_EXHAUSTIVE_CAP)
    }
}

impl ExtensionCounter {
    pub fn new(cap: usize) -> ExtensionCounter {
        ExtensionCounter { cap, memo: HashMap::new() }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Counts orders of width at most `w` on `known ∪ unplaced` that restrict to the
    /// known order on `known`, contain every enforced pair and no prohibited pair.
    ///
    /// `rows[x]` lists the elements below `x`; only entries inside `known` are read.
    pub fn count(
        &mut self,
        known: &[ElementId],
        rows: &[FixedBitSet],
        unplaced: &[ElementId],
        constraints: &ConstraintSet,
        w: usize,
    ) -> Result<BigUint> {
        let size = known.len() + unplaced.len();
        if size > self.cap || size > MASK_BITS {
            return Err(Error::CapExceeded { size, cap: self.cap.min(MASK_BITS) });
        }
        let local = |id: ElementId| {
            known
                .iter()
                .chain(unplaced)
                .position(|&x| x == id)
                .ok_or_else(|| Error::Domain(format!("constraint mentions unknown element {id}")))
        };

        let k = known.len();
        let below: Vec<u32> = known
            .iter()
            .map(|&x| {
                known.iter().enumerate().filter(|&(_, &y)| rows[x].contains(y)).fold(0u32, |m, (j, _)| m | 1 << j)
            })
            .collect();
        let base = Small::from_below(below);
        if k > 0 && base.max_antichain(base.full()) > w {
            return Ok(BigUint::zero());
        }

        // constraints in local labels; unplaced elements are relabelled k.. in
        // placement order, constrained ones first
        let mut order: Vec<usize> = (k..size).collect();
        let mut involved = vec![false; size];
        let mut local_pairs = Vec::new();
        for (a, b, want) in constraints.pairs() {
            let (la, lb) = (local(a)?, local(b)?);
            involved[la] = true;
            involved[lb] = true;
            local_pairs.push((la, lb, want));
        }
        order.sort_by_key(|&l| !involved[l]);
        let mut label = vec![0usize; size];
        for (l, slot) in label.iter_mut().enumerate().take(k) {
            *slot = l;
        }
        for (i, &l) in order.iter().enumerate() {
            label[l] = k + i;
        }
        let pairs: Vec<(usize, usize, bool)> =
            local_pairs.into_iter().map(|(a, b, want)| (label[a], label[b], want)).collect();
        for &(a, b, want) in &pairs {
            if a == b {
                if want {
                    return Ok(BigUint::zero());
                }
                continue;
            }
            if a < k && b < k && (base.below[a] & (1 << b) != 0) != want {
                return Ok(BigUint::zero());
            }
        }
        let constrained = order.iter().filter(|&&l| involved[l]).count();
        self.place_constrained(&base, constrained, size - k, &pairs, w)
    }

    fn place_constrained(
        &mut self,
        q: &Small,
        constrained: usize,
        remaining: usize,
        pairs: &[(usize, usize, bool)],
        w: usize,
    ) -> Result<BigUint> {
        if constrained == 0 {
            return Ok(self.finish(q, remaining, w));
        }
        let z = q.len();
        let mut children = Vec::new();
        q.for_each_placement(w, |down, up| {
            let ok = pairs.iter().all(|&(a, b, want)| {
                if a == z && b < z {
                    (down & (1 << b) != 0) == want
                } else if b == z && a < z {
                    (up & (1 << a) != 0) == want
                } else {
                    true
                }
            });
            if ok {
                children.push(q.with_element(down, up));
            }
        });
        let mut total = BigUint::zero();
        for child in children {
            total += self.place_constrained(&child, constrained - 1, remaining - 1, pairs, w)?;
        }
        Ok(total)
    }

    /// Ways to add `remaining` unconstrained labelled elements to `q`.
    fn finish(&mut self, q: &Small, remaining: usize, w: usize) -> BigUint {
        if remaining == 0 {
            return BigUint::one();
        }
        let key = (canonical(q), remaining, w);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let canon = Small::from_below(key.0.clone());
        let mut children = Vec::new();
        canon.for_each_placement(w, |down, up| children.push(canon.with_element(down, up)));
        let mut total = BigUint::zero();
        for child in children {
            total += self.finish(&child, remaining - 1, w);
        }
        self.memo.insert(key, total.clone());
        total
    }

    /// Number of labelled posets on `n` elements with width at most `w`.
    pub fn count_posets(&mut self, n: usize, w: usize) -> Result<BigUint> {
        let unplaced: Vec<ElementId> = (0..n).collect();
        self.count(&[], &[], &unplaced, &ConstraintSet::new(), w)
    }
}

/// One-shot count with the default cap. See [`ExtensionCounter::count`].
pub fn count_width_extensions(
    known: &[ElementId],
    rows: &[FixedBitSet],
    unplaced: &[ElementId],
    constraints: &ConstraintSet,
    w: usize,
) -> Result<BigUint> {
    ExtensionCounter::default().count(known, rows, unplaced, constraints, w)
}

/// Base-2 logarithms of the lower and upper bounds on the number of labelled
/// posets of width at most `w` on `n` elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NPosetsBounds {
    pub lower_log2: f64,
    pub upper_log2: f64,
}

pub fn log2_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).log2()).sum()
}

pub fn nposets_bounds(n: usize, w: usize) -> NPosetsBounds {
    let (nf, wf) = (n as f64, w as f64);
    let log_n = if n == 0 { 0.0 } else { nf.log2() };
    let lower = log2_factorial(n) - log2_factorial(w) + 2.0 * nf * (wf - 1.0) - 24.0 * wf * (wf - 1.0) * log_n;
    let upper = log2_factorial(n) + 2.0 * nf * (wf - 1.0) - (wf - 2.0) * (wf - 1.0) / 2.0 * log_n
        + wf * (wf - 1.0) / 2.0 * wf.max(1.0).log2();
    NPosetsBounds { lower_log2: lower, upper_log2: upper }
}
