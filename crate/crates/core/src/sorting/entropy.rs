//! Entropy-weighted insertion sort.
//!
//! The insertion loop matches binary insertion sort, but each search over a
//! chain is a binary search on the unit interval, cut into one piece per
//! possible outcome with length proportional to the number of width-`w`
//! extensions consistent with that outcome. Outcomes that rule out few
//! extensions get long pieces and are found with few queries.

use super::{Inserted, Memo};
use crate::chainmerge::ChainMergeIndex;
use crate::error::{Error, Result};
use crate::extensions::{ConstraintSet, ExtensionCounter};
use crate::oracle::{Counting, Oracle};
use crate::poset::{ElementId, Verdict};
use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};

/// The unit interval cut into consecutive pieces of exact rational length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedIntervalPartition {
    weights: Vec<BigUint>,
    prefix: Vec<BigUint>,
    total: BigUint,
}

impl WeightedIntervalPartition {
    /// Piece `j` gets length `weights[j] / Σ weights`. Returns `None` when all
    /// weights are zero.
    pub fn new(weights: Vec<BigUint>) -> Option<Self> {
        let mut prefix = Vec::with_capacity(weights.len());
        let mut acc = BigUint::zero();
        for wj in &weights {
            acc += wj;
            prefix.push(acc.clone());
        }
        if acc.is_zero() {
            return None;
        }
        Some(WeightedIntervalPartition { weights, prefix, total: acc })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, j: usize) -> &BigUint {
        &self.weights[j]
    }

    pub fn total(&self) -> &BigUint {
        &self.total
    }

    /// Upper end of piece `j`.
    pub fn boundary(&self, j: usize) -> Ratio<BigUint> {
        Ratio::new(self.prefix[j].clone(), self.total.clone())
    }

    /// The piece `[b_j, t_j)` containing `x ∈ [0, 1)`.
    pub fn locate(&self, x: &Ratio<BigUint>) -> usize {
        // b_j ≤ x < t_j  ⇔  prefix[j-1] ≤ x·total < prefix[j]
        let scaled = x * Ratio::from_integer(self.total.clone());
        self.prefix.iter().position(|p| Ratio::from_integer(p.clone()) > scaled).unwrap_or(self.len() - 1)
    }
}

/// Direction reported by a probe of piece `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probe {
    Lower,
    Found,
    Higher,
}

/// Searches the partition starting from the midpoint, halving the step after
/// every probe. Fails with `InconsistentProbe` if the answers point outside
/// the interval or the search does not settle.
pub fn weighted_binary_search<F>(partition: &WeightedIntervalPartition, mut probe: F) -> Result<usize>
where
    F: FnMut(usize) -> Result<Probe>,
{
    let two = BigUint::from(2u32);
    let mut x = Ratio::new(BigUint::one(), two.clone());
    let mut t = Ratio::new(BigUint::one(), BigUint::from(4u32));
    let rounds = partition.total().bits() + 2;
    for _ in 0..rounds {
        let j = partition.locate(&x);
        match probe(j)? {
            Probe::Found => return Ok(j),
            Probe::Lower if j > 0 => x -= &t,
            Probe::Higher if j + 1 < partition.len() => x += &t,
            _ => return Err(Error::InconsistentProbe),
        }
        t /= Ratio::from_integer(two.clone());
    }
    Err(Error::InconsistentProbe)
}

/// Which side of a chain a search located.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchKind {
    /// Lowest chain element above the new element.
    Dominator,
    /// Highest chain element below the new element.
    Dominated,
}

/// One weighted search, with the extension counts that weigh its answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchRecord {
    pub element: ElementId,
    pub kind: SearchKind,
    pub total: BigUint,
    pub found: BigUint,
    pub queries: u64,
}

impl SearchRecord {
    /// `2·(1 + ⌊log₂(total / found)⌋)`.
    pub fn query_limit(&self) -> u64 {
        let mut r = self.total.bits().saturating_sub(self.found.bits());
        if r > 0 && (&self.found << r) > self.total {
            r -= 1;
        }
        2 * (1 + r)
    }
}

#[derive(Debug, Clone)]
pub struct EntropyOutcome {
    pub index: ChainMergeIndex,
    pub queries: u64,
    pub searches: Vec<SearchRecord>,
}

/// Sorts with the default exhaustive cap on the number of elements.
pub fn entropy_sort<O: Oracle + ?Sized>(oracle: &mut O, w: usize) -> Result<ChainMergeIndex> {
    Ok(entropy_sort_with(oracle, w, &mut ExtensionCounter::default())?.index)
}

/// Sorts using `counter` for the extension counts. The instance must fit the
/// counter's cap.
pub fn entropy_sort_with<O: Oracle + ?Sized>(
    oracle: &mut O,
    w: usize,
    counter: &mut ExtensionCounter,
) -> Result<EntropyOutcome> {
    let n = oracle.len();
    if n > counter.cap() {
        return Err(Error::CapExceeded { size: n, cap: counter.cap() });
    }
    let mut oracle = Counting::new(oracle);
    let mut known = Inserted::new(n, w);
    let mut searches = Vec::new();
    for e in 0..n {
        let chains = known.chains()?;
        let placed: Vec<ElementId> = (0..e).collect();
        let unplaced: Vec<ElementId> = (e..n).collect();
        let mut fixed = ConstraintSet::new();
        let mut memo = Memo::default();
        let mut below = Vec::new();
        let mut above = Vec::new();

        for chain in &chains {
            let l = chain.len();

            // lowest dominator: outcome j means chain[j..] is above e
            let weights = (0..=l)
                .map(|j| {
                    let mut c = fixed.clone();
                    c.enforced.extend(chain[j..].iter().map(|&y| (y, e)));
                    c.prohibited.extend(chain[..j].iter().map(|&y| (y, e)));
                    counter.count(&placed, &known.rows, &unplaced, &c, w)
                })
                .collect::<Result<Vec<_>>>()?;
            let part = WeightedIntervalPartition::new(weights).ok_or(Error::WidthExceeded(w))?;
            let before = oracle.count();
            let top = weighted_binary_search(&part, |j| {
                if j < l && memo.get(&mut oracle, chain[j], e)? != Verdict::Dominates {
                    return Ok(Probe::Higher);
                }
                if j > 0 && memo.get(&mut oracle, chain[j - 1], e)? == Verdict::Dominates {
                    return Ok(Probe::Lower);
                }
                Ok(Probe::Found)
            })
            .map_err(|err| unsettled(err, w))?;
            searches.push(SearchRecord {
                element: e,
                kind: SearchKind::Dominator,
                total: part.total().clone(),
                found: part.weight(top).clone(),
                queries: oracle.count() - before,
            });
            fixed.enforced.extend(chain[top..].iter().map(|&y| (y, e)));
            fixed.prohibited.extend(chain[..top].iter().map(|&y| (y, e)));

            // highest dominated: outcome j means chain[..j] is below e
            let weights = (0..=l)
                .map(|j| {
                    let mut c = fixed.clone();
                    c.enforced.extend(chain[..j].iter().map(|&y| (e, y)));
                    c.prohibited.extend(chain[j..].iter().map(|&y| (e, y)));
                    counter.count(&placed, &known.rows, &unplaced, &c, w)
                })
                .collect::<Result<Vec<_>>>()?;
            let part = WeightedIntervalPartition::new(weights).ok_or(Error::WidthExceeded(w))?;
            let before = oracle.count();
            let bottom = weighted_binary_search(&part, |j| {
                if j > 0 && memo.get(&mut oracle, chain[j - 1], e)? != Verdict::DominatedBy {
                    return Ok(Probe::Lower);
                }
                if j < l && memo.get(&mut oracle, chain[j], e)? == Verdict::DominatedBy {
                    return Ok(Probe::Higher);
                }
                Ok(Probe::Found)
            })
            .map_err(|err| unsettled(err, w))?;
            searches.push(SearchRecord {
                element: e,
                kind: SearchKind::Dominated,
                total: part.total().clone(),
                found: part.weight(bottom).clone(),
                queries: oracle.count() - before,
            });
            fixed.enforced.extend(chain[..bottom].iter().map(|&y| (e, y)));
            fixed.prohibited.extend(chain[bottom..].iter().map(|&y| (e, y)));

            above.extend_from_slice(&chain[top..]);
            below.extend_from_slice(&chain[..bottom]);
        }
        known.add(e, &below, &above);
    }
    let queries = oracle.count();
    Ok(EntropyOutcome { index: known.finish()?, queries, searches })
}

/// A search that cannot settle means the true outcome has no width-`w`
/// extension, so the order is wider than `w`.
fn unsettled(err: Error, w: usize) -> Error {
    match err {
        Error::InconsistentProbe => Error::WidthExceeded(w),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::entropy_sort_bound;
    use crate::generate::width_bounded;
    use crate::oracle::PosetOracle;
    use crate::poset::Poset;
    use proptest::prelude::*;

    fn part(ws: &[u32]) -> WeightedIntervalPartition {
        WeightedIntervalPartition::new(ws.iter().map(|&w| BigUint::from(w)).collect()).unwrap()
    }

    fn search_for(p: &WeightedIntervalPartition, target: usize) -> (usize, u64) {
        let mut probes = 0;
        let j = weighted_binary_search(p, |j| {
            probes += 1;
            Ok(match j.cmp(&target) {
                std::cmp::Ordering::Less => Probe::Higher,
                std::cmp::Ordering::Equal => Probe::Found,
                std::cmp::Ordering::Greater => Probe::Lower,
            })
        })
        .unwrap();
        (j, probes)
    }

    #[test]
    fn halves() {
        assert_eq!(search_for(&part(&[1, 1]), 1), (1, 1));
        assert_eq!(search_for(&part(&[1, 1]), 0), (0, 2));
    }

    #[test]
    fn single_piece() {
        assert_eq!(search_for(&part(&[5]), 0), (0, 1));
    }

    #[test]
    fn quarter_piece() {
        // pieces [0, 3/4) and [3/4, 1)
        let (j, probes) = search_for(&part(&[3, 1]), 1);
        assert_eq!(j, 1);
        assert!(probes <= 3);
    }

    #[test]
    fn zero_weights_are_skipped() {
        let p = part(&[0, 2, 0, 2]);
        assert_eq!(p.locate(&Ratio::new(BigUint::zero(), BigUint::one())), 1);
        assert_eq!(search_for(&p, 3).0, 3);
    }

    #[test]
    fn boundaries_are_exact() {
        let p = part(&[1, 2, 3]);
        assert_eq!(p.boundary(1), Ratio::new(BigUint::one(), BigUint::from(2u32)));
        assert_eq!(p.boundary(2), Ratio::from_integer(BigUint::one()));
    }

    #[test]
    fn inconsistent_answers_are_reported() {
        let p = part(&[1, 1]);
        assert_eq!(weighted_binary_search(&p, |_| Ok(Probe::Higher)), Err(Error::InconsistentProbe));
        let p = part(&[1, 1, 1, 1, 1, 1, 1, 1]);
        let mut flip = false;
        let r = weighted_binary_search(&p, |j| {
            flip = !flip;
            Ok(if j == 0 || (flip && j + 1 < 8) { Probe::Higher } else { Probe::Lower })
        });
        assert_eq!(r, Err(Error::InconsistentProbe));
    }

    #[test]
    fn query_limit_matches_floor_log() {
        let rec = |t: u32, f: u32| SearchRecord {
            element: 0,
            kind: SearchKind::Dominator,
            total: BigUint::from(t),
            found: BigUint::from(f),
            queries: 0,
        };
        assert_eq!(rec(8, 3).query_limit(), 4);
        assert_eq!(rec(8, 4).query_limit(), 4);
        assert_eq!(rec(8, 8).query_limit(), 2);
        assert_eq!(rec(9, 1).query_limit(), 8);
    }

    #[test]
    fn two_incomparable() {
        let p = Poset::antichain(2);
        let mut o = PosetOracle::new(&p);
        let out = entropy_sort_with(&mut o, 2, &mut ExtensionCounter::default()).unwrap();
        assert_eq!(out.index.to_poset().unwrap(), p);
        assert!(entropy_sort_bound(&BigUint::from(3u32), 2, 2).admits(out.queries));
    }

    #[test]
    fn two_in_a_chain() {
        let p = Poset::chain(2);
        let mut o = PosetOracle::new(&p);
        let out = entropy_sort_with(&mut o, 1, &mut ExtensionCounter::default()).unwrap();
        assert_eq!(out.index.to_poset().unwrap(), p);
        assert_eq!(out.queries, 1);
    }

    #[test]
    fn over_cap() {
        let p = Poset::antichain(9);
        let mut o = PosetOracle::new(&p);
        assert_eq!(entropy_sort(&mut o, 9).unwrap_err(), Error::CapExceeded { size: 9, cap: 8 });
    }

    #[test]
    fn too_wide() {
        let p = Poset::antichain(3);
        let mut o = PosetOracle::new(&p);
        assert_eq!(entropy_sort(&mut o, 2).unwrap_err(), Error::WidthExceeded(2));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn sorts_within_bound(seed in 0u64..5000, n in 1usize..7, w in 1usize..4) {
            let p = width_bounded(n, w, seed);
            let mut counter = ExtensionCounter::default();
            let total = counter.count_posets(n, w).unwrap();
            let mut o = PosetOracle::new(&p);
            let out = entropy_sort_with(&mut o, w, &mut counter).unwrap();
            prop_assert_eq!(out.index.to_poset().unwrap(), p.clone());
            prop_assert!(entropy_sort_bound(&total, n, w).admits(out.queries));
            for s in &out.searches {
                prop_assert!(s.queries <= s.query_limit());
            }
        }
    }
}
