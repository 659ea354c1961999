//! Constant-time relation lookups from a chain decomposition.
//!
//! For every element `x` and chain `j` the index stores the position of the
//! largest element of chain `j` that `x` dominates. Within its own chain that is
//! the element directly below `x`. Building the index scans each ordered pair of
//! chains once from the bottom, so it asks at most `|Cᵢ| + |Cⱼ|` queries per pair.

use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::poset::{empty_rows, Chains, ElementId, Poset, Verdict};
use std::collections::HashMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMergeIndex {
    chains: Chains,
    slot: HashMap<ElementId, (u32, u32)>,
    offsets: Vec<usize>,
    reach: Vec<Option<u32>>,
}

impl ChainMergeIndex {
    /// Builds the index, querying the oracle for every cross-chain comparison.
    pub fn build<O: Oracle + ?Sized>(oracle: &mut O, chains: Chains) -> Result<Self> {
        Self::build_with_prior(oracle, chains, |_, _| None)
    }

    /// Builds the index, asking `prior` first and the oracle only when `prior`
    /// has no answer. Each unordered pair reaches the oracle at most once.
    pub fn build_with_prior<O, F>(oracle: &mut O, chains: Chains, prior: F) -> Result<Self>
    where
        O: Oracle + ?Sized,
        F: Fn(ElementId, ElementId) -> Option<Verdict>,
    {
        let mut index = Self::skeleton(chains)?;
        let q = index.chains.len();
        let mut asked: HashMap<(ElementId, ElementId), Verdict> = HashMap::new();
        let asked_ref = &mut asked;
        let mut dominates = |x: ElementId, y: ElementId| -> Result<bool> {
            if let Some(v) = prior(x, y) {
                return Ok(v == Verdict::Dominates);
            }
            let key = (x.min(y), x.max(y));
            let v = match asked_ref.get(&key) {
                Some(&v) => v,
                None => {
                    let v = oracle.query(key.0, key.1)?;
                    asked_ref.insert(key, v);
                    v
                }
            };
            Ok(if x == key.0 { v == Verdict::Dominates } else { v == Verdict::DominatedBy })
        };

        for i in 0..q {
            for j in 0..q {
                if i == j {
                    continue;
                }
                let mut p = 0usize;
                for a in 0..index.chains[i].len() {
                    let x = index.chains[i][a];
                    while p < index.chains[j].len() && dominates(x, index.chains[j][p])? {
                        p += 1;
                    }
                    let lx = index.offsets[i] + a;
                    index.reach[lx * q + j] = p.checked_sub(1).map(|v| v as u32);
                }
            }
        }
        index.check_antisymmetric()?;
        for (&(x, y), &v) in &asked {
            if index.lookup(x, y) != v {
                return Err(Error::InvalidDecomposition(format!("answer for ({x}, {y}) contradicts the chain order")));
            }
        }
        Ok(index)
    }

    /// Validates the partition and fills in the own-chain entries.
    fn skeleton(chains: Chains) -> Result<Self> {
        let q = chains.len();
        let mut slot = HashMap::new();
        let mut offsets = Vec::with_capacity(q);
        let mut total = 0;
        for (c, chain) in chains.iter().enumerate() {
            if chain.is_empty() {
                return Err(Error::InvalidDecomposition(format!("chain {c} is empty")));
            }
            offsets.push(total);
            total += chain.len();
            for (pos, &x) in chain.iter().enumerate() {
                if slot.insert(x, (c as u32, pos as u32)).is_some() {
                    return Err(Error::InvalidDecomposition(format!("element {x} appears twice")));
                }
            }
        }
        let mut reach = vec![None; total * q];
        for (c, chain) in chains.iter().enumerate() {
            for pos in 0..chain.len() {
                reach[(offsets[c] + pos) * q + c] = pos.checked_sub(1).map(|v| v as u32);
            }
        }
        Ok(ChainMergeIndex { chains, slot, offsets, reach })
    }

    /// Rejects scans that claim both `x ≻ y` and `y ≻ x`.
    fn check_antisymmetric(&self) -> Result<()> {
        let q = self.chains.len();
        for (i, chain) in self.chains.iter().enumerate() {
            for (a, &x) in chain.iter().enumerate() {
                for j in 0..q {
                    if j == i {
                        continue;
                    }
                    if let Some(r) = self.reach[(self.offsets[i] + a) * q + j] {
                        let y = self.chains[j][r as usize];
                        if self.dominates(y, x) {
                            return Err(Error::InvalidDecomposition(format!(
                                "answers place {x} and {y} above each other"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn chains(&self) -> &Chains {
        &self.chains
    }

    pub fn into_chains(self) -> Chains {
        self.chains
    }

    pub fn len(&self) -> usize {
        self.slot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slot.is_empty()
    }

    pub fn contains(&self, x: ElementId) -> bool {
        self.slot.contains_key(&x)
    }

    /// Chain index and position of `x`.
    pub fn locate(&self, x: ElementId) -> Option<(usize, usize)> {
        self.slot.get(&x).map(|&(c, p)| (c as usize, p as usize))
    }

    /// Position in chain `j` of the largest element that `x` dominates.
    pub fn reach(&self, x: ElementId, j: usize) -> Option<usize> {
        let (c, p) = self.locate(x)?;
        self.reach[(self.offsets[c] + p) * self.chains.len() + j].map(|r| r as usize)
    }

    /// Whether `x ≻ y`. Both must be indexed.
    pub fn dominates(&self, x: ElementId, y: ElementId) -> bool {
        let (cy, py) = self.locate(y).expect("element not in index");
        matches!(self.reach(x, cy), Some(r) if r >= py)
    }

    /// Relation between two indexed elements, without queries.
    pub fn lookup(&self, x: ElementId, y: ElementId) -> Verdict {
        if x == y {
            Verdict::Incomparable
        } else if self.dominates(x, y) {
            Verdict::Dominates
        } else if self.dominates(y, x) {
            Verdict::DominatedBy
        } else {
            Verdict::Incomparable
        }
    }

    /// Lookup for pairs that may fall outside the index.
    pub fn try_lookup(&self, x: ElementId, y: ElementId) -> Option<Verdict> {
        (self.contains(x) && self.contains(y)).then(|| self.lookup(x, y))
    }

    fn check_dense(&self) -> Result<usize> {
        let n = self.len();
        if self.slot.keys().all(|&x| x < n) {
            Ok(n)
        } else {
            Err(Error::InvalidDecomposition("element ids are not 0..n".into()))
        }
    }

    /// Full relation matrix, for an index over ids `0..n`.
    pub fn relation_table(&self) -> Result<Vec<Vec<Verdict>>> {
        let n = self.check_dense()?;
        Ok((0..n).map(|x| (0..n).map(|y| self.lookup(x, y)).collect()).collect())
    }

    /// The sorted poset, for an index over ids `0..n`.
    pub fn to_poset(&self) -> Result<Poset> {
        let n = self.check_dense()?;
        let mut rows = empty_rows(n);
        for (x, row) in rows.iter_mut().enumerate() {
            for y in 0..n {
                if x != y && self.dominates(x, y) {
                    row.insert(y);
                }
            }
        }
        Poset::from_relations(n, (0..n).flat_map(|x| rows[x].ones().map(move |y| (x, y))).collect::<Vec<_>>())
    }

    /// Text dump of chains and reach tables.
    pub fn to_text(&self) -> String {
        let q = self.chains.len();
        let mut out = format!("chainmerge {} {}\n", self.len(), q);
        for (c, chain) in self.chains.iter().enumerate() {
            let ids: Vec<String> = chain.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "chain {c}: {}", ids.join(" "));
        }
        for chain in &self.chains {
            for &x in chain {
                let cells: Vec<String> =
                    (0..q).map(|j| self.reach(x, j).map_or("-".to_string(), |r| r.to_string())).collect();
                let _ = writeln!(out, "reach {x}: {}", cells.join(" "));
            }
        }
        out
    }

    /// Reads the format written by [`ChainMergeIndex::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |line: usize, m: &str| Error::Parse { line, message: m.to_string() };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (_, header) = lines.next().ok_or_else(|| bad(1, "missing header"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 || h[0] != "chainmerge" {
            return Err(bad(1, "expected `chainmerge <n> <q>`"));
        }
        let q: usize = h[2].parse().map_err(|_| bad(1, "invalid chain count"))?;
        let mut chains = Vec::with_capacity(q);
        let mut reach_rows: Vec<(usize, ElementId, Vec<Option<u32>>)> = Vec::new();
        for (no, line) in lines {
            if line.is_empty() {
                continue;
            }
            let (head, rest) = line.split_once(':').ok_or_else(|| bad(no, "missing `:`"))?;
            let mut head = head.split_whitespace();
            let kind = head.next().unwrap_or("");
            let key: usize = head.next().and_then(|v| v.parse().ok()).ok_or_else(|| bad(no, "invalid key"))?;
            match kind {
                "chain" => {
                    let ids = rest
                        .split_whitespace()
                        .map(|v| v.parse::<ElementId>().map_err(|_| bad(no, "invalid id")))
                        .collect::<Result<Vec<_>>>()?;
                    chains.push(ids);
                }
                "reach" => {
                    let cells = rest
                        .split_whitespace()
                        .map(|v| match v {
                            "-" => Ok(None),
                            v => v.parse::<u32>().map(Some).map_err(|_| bad(no, "invalid reach")),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if cells.len() != q {
                        return Err(bad(no, "wrong number of reach entries"));
                    }
                    reach_rows.push((no, key, cells));
                }
                _ => return Err(bad(no, "unknown record")),
            }
        }
        if chains.len() != q {
            return Err(bad(0, "chain count does not match header"));
        }
        let mut index = Self::skeleton(chains)?;
        for (no, x, cells) in reach_rows {
            let (c, p) = index.locate(x).ok_or_else(|| bad(no, "reach for unknown element"))?;
            let base = (index.offsets[c] + p) * q;
            index.reach[base..base + q].copy_from_slice(&cells);
        }
        Ok(index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilworth::min_chain_decomposition;
    use crate::generate::{chain_union, width_bounded};
    use crate::oracle::{Counting, PosetOracle};
    use proptest::prelude::*;

    #[test]
    fn two_chains_of_two() {
        // chains 0 < 1 and 2 < 3 with 3 ≻ 1
        let p = Poset::from_relations(4, [(1, 0), (3, 2), (3, 1)]).unwrap();
        let mut o = Counting::new(PosetOracle::new(&p));
        let idx = ChainMergeIndex::build(&mut o, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert!(o.count() <= 8);
        assert_eq!(idx.reach(3, 0), Some(1));
        assert_eq!(idx.reach(2, 0), None);
        assert_eq!(idx.lookup(3, 0), Verdict::Dominates);
        assert_eq!(idx.lookup(2, 1), Verdict::Incomparable);
        assert_eq!(idx.to_poset().unwrap(), p);
    }

    #[test]
    fn rejects_bad_partitions() {
        let p = Poset::chain(3);
        let mut o = PosetOracle::new(&p);
        assert!(matches!(
            ChainMergeIndex::build(&mut o, vec![vec![0, 1], vec![1, 2]]),
            Err(Error::InvalidDecomposition(_))
        ));
        assert!(matches!(ChainMergeIndex::build(&mut o, vec![vec![0], vec![]]), Err(Error::InvalidDecomposition(_))));
    }

    #[test]
    fn detects_misordered_chain() {
        // 0 < 1 listed top-first; the answer 2 ≻ 0 cannot be placed in the index
        let p = Poset::from_relations(3, [(1, 0), (2, 0)]).unwrap();
        let mut o = PosetOracle::new(&p);
        let r = ChainMergeIndex::build(&mut o, vec![vec![1, 0], vec![2]]);
        assert!(matches!(r, Err(Error::InvalidDecomposition(_))));
    }

    #[test]
    fn single_chain_needs_no_queries() {
        let p = Poset::chain(5);
        let mut o = Counting::new(PosetOracle::new(&p));
        let idx = ChainMergeIndex::build(&mut o, vec![(0..5).collect()]).unwrap();
        assert_eq!(o.count(), 0);
        assert_eq!(idx.to_poset().unwrap(), p);
    }

    #[test]
    fn text_round_trip() {
        let p = chain_union(20, 3, 5);
        let mut o = PosetOracle::new(&p);
        let idx = ChainMergeIndex::build(&mut o, min_chain_decomposition(&p)).unwrap();
        let back = ChainMergeIndex::from_text(&idx.to_text()).unwrap();
        assert_eq!(back, idx);
    }

    proptest! {
        #[test]
        fn lookups_match_truth_within_budget(seed in 0u64..1000, n in 1usize..40, w in 1usize..6) {
            let p = width_bounded(n, w, seed);
            let d = min_chain_decomposition(&p);
            let q = d.len();
            let mut o = Counting::new(PosetOracle::new(&p));
            let idx = ChainMergeIndex::build(&mut o, d).unwrap();
            prop_assert!(o.count() as usize <= 2 * q * n);
            let before = o.count();
            for x in 0..n {
                for y in 0..n {
                    if x != y {
                        prop_assert_eq!(idx.lookup(x, y), p.relation(x, y));
                    }
                }
            }
            prop_assert_eq!(o.count(), before);
        }

        #[test]
        fn reach_is_monotone_along_chains(seed in 0u64..1000, n in 1usize..40) {
            let p = width_bounded(n, 3, seed);
            let mut o = PosetOracle::new(&p);
            let idx = ChainMergeIndex::build(&mut o, min_chain_decomposition(&p)).unwrap();
            for chain in idx.chains() {
                for pair in chain.windows(2) {
                    for j in 0..idx.chains().len() {
                        prop_assert!(idx.reach(pair[0], j) <= idx.reach(pair[1], j));
                    }
                }
            }
        }
    }
}
