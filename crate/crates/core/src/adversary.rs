//! Adaptive adversaries for selection lower bounds.
//!
//! The adversary answers as if the order were `w` mutually incomparable
//! chains, deciding chain membership (a colour) only when forced. An element
//! is declared incomparable to everything until it has been involved in `w − 1`
//! queries, at which point it receives a colour different from every element
//! it was declared incomparable to. Elements of one colour are ordered by a
//! fixed index.

use crate::error::{Error, Result};
use crate::generate::rng_from_seed;
use crate::oracle::{check_pair, Oracle};
use crate::poset::{ElementId, Poset, Verdict};
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;

/// Per-colour deviations for the k-selection colouring rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationTable {
    d: Vec<Ratio<i64>>,
}

impl DeviationTable {
    pub fn new(w: usize) -> Self {
        DeviationTable { d: vec![Ratio::zero(); w] }
    }

    pub fn values(&self) -> &[Ratio<i64>] {
        &self.d
    }

    /// Picks the eligible colour of smallest deviation, lowest id on ties, and
    /// moves it up by `1 − 1/|S|` while every other eligible colour moves down
    /// by `1/|S|`.
    pub fn assign(&mut self, eligible: &[usize]) -> Option<usize> {
        let &best = eligible.iter().min_by(|&&a, &&b| self.d[a].cmp(&self.d[b]).then(a.cmp(&b)))?;
        let share = Ratio::new(1, eligible.len() as i64);
        for &c in eligible {
            self.d[c] -= share;
        }
        self.d[best] += Ratio::one();
        Some(best)
    }

    /// Zero sum, and the `m` smallest deviations sum to at least `m(m − w)/2`.
    pub fn invariants_hold(&self) -> bool {
        let w = self.d.len() as i64;
        if self.d.iter().copied().sum::<Ratio<i64>>() != Ratio::zero() {
            return false;
        }
        let mut sorted = self.d.clone();
        sorted.sort();
        let mut prefix = Ratio::zero();
        for (i, v) in sorted.iter().enumerate() {
            prefix += v;
            let m = i as i64 + 1;
            if prefix < Ratio::new(m * (m - w), 2) {
                return false;
            }
        }
        true
    }
}

/// How a colour is picked when an element must be placed in a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColourRule {
    /// Free colour with the fewest members, lowest id on ties.
    FewestMembers,
    /// Free colour of smallest deviation.
    SmallestDeviation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Announcement {
    /// 1-based number of the query that triggered it.
    pub query: u64,
    pub element: ElementId,
    pub colour: usize,
}

#[derive(Debug, Clone)]
pub struct Adversary {
    w: usize,
    rule: ColourRule,
    index: Vec<usize>,
    counts: Vec<u64>,
    colour: Vec<Option<usize>>,
    members: Vec<usize>,
    neighbours: Vec<Vec<ElementId>>,
    deviations: DeviationTable,
    deviations_ok: bool,
    log: Vec<(ElementId, ElementId, Verdict)>,
    announcements: Vec<Announcement>,
}

impl Adversary {
    pub fn new(n: usize, w: usize, rule: ColourRule) -> Self {
        assert!(w >= 1, "width must be positive");
        Adversary {
            w,
            rule,
            index: (0..n).collect(),
            counts: vec![0; n],
            colour: vec![None; n],
            members: vec![0; w],
            neighbours: vec![Vec::new(); n],
            deviations: DeviationTable::new(w),
            deviations_ok: true,
            log: Vec::new(),
            announcements: Vec::new(),
        }
    }

    /// The adversary for minimal elements.
    pub fn min(n: usize, w: usize) -> Self {
        Self::new(n, w, ColourRule::FewestMembers)
    }

    /// The adversary for k-selection.
    pub fn ksel(n: usize, w: usize) -> Self {
        Self::new(n, w, ColourRule::SmallestDeviation)
    }

    /// Orders elements within a chain by a random permutation instead of by id.
    pub fn with_index_seed(mut self, seed: u64) -> Self {
        self.index.shuffle(&mut rng_from_seed(seed));
        self
    }

    pub fn queries(&self) -> u64 {
        self.log.len() as u64
    }

    pub fn log(&self) -> &[(ElementId, ElementId, Verdict)] {
        &self.log
    }

    pub fn announcements(&self) -> &[Announcement] {
        &self.announcements
    }

    pub fn colour(&self, e: ElementId) -> Option<usize> {
        self.colour[e]
    }

    pub fn deviations(&self) -> &DeviationTable {
        &self.deviations
    }

    /// Whether the deviation invariants held after every update so far.
    pub fn deviations_always_held(&self) -> bool {
        self.deviations_ok
    }

    fn free_colours(&self, e: ElementId) -> Vec<usize> {
        let mut taken = vec![false; self.w];
        for &b in &self.neighbours[e] {
            if let Some(c) = self.colour[b] {
                taken[c] = true;
            }
        }
        (0..self.w).filter(|&c| !taken[c]).collect()
    }

    fn assign(&mut self, e: ElementId) -> Result<()> {
        let free = self.free_colours(e);
        let c = match self.rule {
            ColourRule::FewestMembers => free.iter().copied().min_by_key(|&c| (self.members[c], c)),
            ColourRule::SmallestDeviation => {
                let c = self.deviations.assign(&free);
                self.deviations_ok &= self.deviations.invariants_hold();
                c
            }
        }
        .ok_or(Error::ColorExhausted(e))?;
        self.set_colour(e, c);
        Ok(())
    }

    fn set_colour(&mut self, e: ElementId, c: usize) {
        self.colour[e] = Some(c);
        self.members[c] += 1;
        self.announcements.push(Announcement { query: self.queries() + 1, element: e, colour: c });
    }

    fn respond(&mut self, a: ElementId, b: ElementId) -> Result<Verdict> {
        self.counts[a] += 1;
        self.counts[b] += 1;
        let limit = self.w as u64 - 1;
        if self.counts[a] <= limit || self.counts[b] <= limit {
            self.neighbours[a].push(b);
            self.neighbours[b].push(a);
            for e in [a, b] {
                if self.counts[e] == limit {
                    self.assign(e)?;
                }
            }
            return Ok(Verdict::Incomparable);
        }
        // with one chain nothing is ever declared incomparable
        for e in [a, b] {
            if self.colour[e].is_none() && self.w == 1 {
                self.set_colour(e, 0);
            }
        }
        let (ca, cb) = (self.colour[a], self.colour[b]);
        if ca != cb {
            return Ok(Verdict::Incomparable);
        }
        Ok(if self.index[a] > self.index[b] { Verdict::Dominates } else { Verdict::DominatedBy })
    }

    /// Completes the colouring and returns a poset of `w` chains agreeing with
    /// every answer given.
    pub fn finalize_witness(&self) -> Result<Poset> {
        let n = self.colour.len();
        let mut colour = self.colour.clone();
        let mut members = self.members.clone();
        for e in 0..n {
            if colour[e].is_some() {
                continue;
            }
            let mut taken = vec![false; self.w];
            for &b in &self.neighbours[e] {
                if let Some(c) = colour[b] {
                    taken[c] = true;
                }
            }
            let c =
                (0..self.w).filter(|&c| !taken[c]).min_by_key(|&c| (members[c], c)).ok_or(Error::ColorExhausted(e))?;
            colour[e] = Some(c);
            members[c] += 1;
        }
        let mut chains: Vec<Vec<ElementId>> = vec![Vec::new(); self.w];
        for e in 0..n {
            chains[colour[e].unwrap()].push(e);
        }
        let mut pairs = Vec::new();
        for chain in &mut chains {
            chain.sort_by_key(|&e| self.index[e]);
            pairs.extend(chain.windows(2).map(|p| (p[1], p[0])));
        }
        let witness = Poset::from_relations(n, pairs)?;
        for &(x, y, v) in &self.log {
            if witness.relation(x, y) != v {
                return Err(Error::WitnessMismatch(x, y));
            }
        }
        Ok(witness)
    }
}

impl Oracle for Adversary {
    fn len(&self) -> usize {
        self.colour.len()
    }

    fn query(&mut self, x: ElementId, y: ElementId) -> Result<Verdict> {
        check_pair(x, y, self.len())?;
        let v = self.respond(x, y)?;
        self.log.push((x, y, v));
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::lower_bound_min_ceil;
    use crate::brute::minimals_bruteforce;
    use crate::dilworth::width;
    use crate::selection::{minimals_det, minimals_rand};
    use rand::Rng;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn first_query_colours_both() {
        let mut a = Adversary::min(5, 2);
        assert_eq!(a.query(0, 1).unwrap(), Verdict::Incomparable);
        let (c0, c1) = (a.colour(0).unwrap(), a.colour(1).unwrap());
        assert_ne!(c0, c1);
        assert_eq!(a.announcements().len(), 2);
    }

    #[test]
    fn same_colour_follows_index() {
        let mut a = Adversary::min(4, 2);
        a.query(0, 1).unwrap();
        a.query(2, 3).unwrap();
        // 0 and 2 both took colour 0
        assert_eq!(a.colour(0), a.colour(2));
        assert_eq!(a.query(2, 0).unwrap(), Verdict::Dominates);
        assert_eq!(a.query(1, 3).unwrap(), Verdict::DominatedBy);
        a.finalize_witness().unwrap();
    }

    #[test]
    fn deviation_first_assignment() {
        let mut d = DeviationTable::new(2);
        assert_eq!(d.assign(&[0, 1]), Some(0));
        assert_eq!(d.values(), &[r(1, 2), r(-1, 2)]);
        assert!(d.invariants_hold());
    }

    #[test]
    fn deviation_ineligible_unchanged() {
        let mut d = DeviationTable::new(3);
        d.assign(&[1, 2]);
        assert_eq!(d.values()[0], r(0, 1));
    }

    #[test]
    fn deviation_random_stream() {
        let mut rng = rng_from_seed(5);
        let mut d = DeviationTable::new(5);
        for _ in 0..20_000 {
            let eligible: Vec<usize> = (0..5).filter(|_| rng.gen_bool(0.6)).collect();
            if eligible.is_empty() {
                continue;
            }
            d.assign(&eligible);
            assert!(d.invariants_hold());
        }
    }

    #[test]
    fn empty_interaction_has_witness() {
        let a = Adversary::min(6, 3);
        let p = a.finalize_witness().unwrap();
        assert_eq!(width(&p), 3);
    }

    #[test]
    fn minimals_forced_to_pay() {
        for &(n, w) in &[(4, 2), (30, 2), (31, 3), (40, 5), (12, 1)] {
            for seed in 0..3 {
                let mut adv = Adversary::min(n, w).with_index_seed(seed);
                let got = minimals_det(&mut adv, w).unwrap();
                let witness = adv.finalize_witness().unwrap();
                assert_eq!(got, minimals_bruteforce(&witness));
                assert!(adv.queries() >= lower_bound_min_ceil(n, w));
                assert_eq!(width(&witness), w);

                let mut adv = Adversary::min(n, w);
                let got = minimals_rand(&mut adv, w, seed).unwrap();
                let witness = adv.finalize_witness().unwrap();
                assert_eq!(got, minimals_bruteforce(&witness));
                assert!(adv.queries() >= lower_bound_min_ceil(n, w));
            }
        }
    }

    #[test]
    fn ksel_adversary_is_consistent() {
        for &(n, w) in &[(30, 2), (40, 3), (60, 5)] {
            let mut adv = Adversary::ksel(n, w);
            let got = crate::selection::kselect_det(&mut adv, w, 2).unwrap();
            let witness = adv.finalize_witness().unwrap();
            assert_eq!(got, crate::brute::kselect_bruteforce(&witness, 2));
            assert!(adv.deviations_always_held());
        }
    }
}
