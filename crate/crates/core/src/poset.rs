//! Ground-truth posets, the relation file format, and chain decompositions.

use crate::error::{Error, Result};
use fixedbitset::FixedBitSet;
use std::fmt::Write as _;

/// Elements are dense integers `0..n`.
pub type ElementId = usize;

/// A chain decomposition: each inner list is one chain, smallest element first.
pub type Chains = Vec<Vec<ElementId>>;

/// Outcome of comparing `x` against `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// `x` dominates `y`.
    Dominates,
    /// `y` dominates `x`.
    DominatedBy,
    Incomparable,
}

impl Verdict {
    /// The verdict for the swapped pair.
    pub fn flip(self) -> Verdict {
        match self {
            Verdict::Dominates => Verdict::DominatedBy,
            Verdict::DominatedBy => Verdict::Dominates,
            Verdict::Incomparable => Verdict::Incomparable,
        }
    }
}

/// A strict partial order stored as its transitive closure.
///
/// Row `x` holds every `y` with `x ≻ y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    below: Vec<FixedBitSet>,
}

/// Warshall closure over bitset rows. Row `i` gains row `k` whenever `i` reaches `k`.
pub(crate) fn close_rows(rows: &mut [FixedBitSet]) {
    let n = rows.len();
    for k in 0..n {
        let row_k = rows[k].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != k && row.contains(k) {
                row.union_with(&row_k);
            }
        }
    }
}

pub(crate) fn empty_rows(n: usize) -> Vec<FixedBitSet> {
    vec![FixedBitSet::with_capacity(n); n]
}

/// Transposes a square bitset matrix.
pub(crate) fn transpose(rows: &[FixedBitSet]) -> Vec<FixedBitSet> {
    let n = rows.len();
    let mut out = empty_rows(n);
    for (x, row) in rows.iter().enumerate() {
        for y in row.ones() {
            out[y].insert(x);
        }
    }
    out
}

impl Poset {
    pub fn antichain(n: usize) -> Poset {
        Poset { below: empty_rows(n) }
    }

    /// The total order in which a larger id dominates a smaller one.
    pub fn chain(n: usize) -> Poset {
        let mut below = empty_rows(n);
        for (x, row) in below.iter_mut().enumerate() {
            row.insert_range(..x);
        }
        Poset { below }
    }

    /// Builds the closure of the given `(u, v)` pairs, each meaning `u ≻ v`.
    pub fn from_relations<I>(n: usize, pairs: I) -> Result<Poset>
    where
        I: IntoIterator<Item = (ElementId, ElementId)>,
    {
        let mut below = empty_rows(n);
        for (u, v) in pairs {
            check_id(u, n)?;
            check_id(v, n)?;
            if u == v {
                return Err(Error::Cycle(u));
            }
            below[u].insert(v);
        }
        close_rows(&mut below);
        if let Some(x) = (0..n).find(|&x| below[x].contains(x)) {
            return Err(Error::Cycle(x));
        }
        Ok(Poset { below })
    }

    /// Wraps rows that are already irreflexive and transitively closed.
    pub(crate) fn from_closed_rows(below: Vec<FixedBitSet>) -> Poset {
        debug_assert!(below.iter().enumerate().all(|(x, r)| !r.contains(x)));
        Poset { below }
    }

    pub fn len(&self) -> usize {
        self.below.len()
    }

    pub fn is_empty(&self) -> bool {
        self.below.is_empty()
    }

    pub fn dominates(&self, x: ElementId, y: ElementId) -> bool {
        self.below[x].contains(y)
    }

    pub fn relation(&self, x: ElementId, y: ElementId) -> Verdict {
        if self.dominates(x, y) {
            Verdict::Dominates
        } else if self.dominates(y, x) {
            Verdict::DominatedBy
        } else {
            Verdict::Incomparable
        }
    }

    /// Elements strictly below `x`.
    pub fn below(&self, x: ElementId) -> &FixedBitSet {
        &self.below[x]
    }

    pub fn rows(&self) -> &[FixedBitSet] {
        &self.below
    }

    /// Elements strictly above each element.
    pub fn above_sets(&self) -> Vec<FixedBitSet> {
        transpose(&self.below)
    }

    pub fn relation_count(&self) -> usize {
        self.below.iter().map(|r| r.count_ones(..)).sum()
    }

    /// Pairs `(x, y)` with `x ≻ y` and nothing strictly between them.
    pub fn cover_pairs(&self) -> Vec<(ElementId, ElementId)> {
        let above = self.above_sets();
        let mut out = Vec::new();
        for (x, row) in self.below.iter().enumerate() {
            for y in row.ones() {
                if row.is_disjoint(&above[y]) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// The sub-poset induced on `elems`, relabelled to `0..elems.len()` in list order.
    pub fn restrict(&self, elems: &[ElementId]) -> Poset {
        let m = elems.len();
        let mut below = empty_rows(m);
        for (i, &x) in elems.iter().enumerate() {
            for (j, &y) in elems.iter().enumerate() {
                if self.dominates(x, y) {
                    below[i].insert(j);
                }
            }
        }
        Poset { below }
    }

    /// Reads the relation file format. The closure of the listed pairs is taken.
    pub fn parse(text: &str) -> Result<Poset> {
        let (n, pairs) = parse_relation_text(text)?;
        Poset::from_relations(n, pairs)
    }

    /// Writes the cover pairs in the relation file format.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.len());
        for (u, v) in self.cover_pairs() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Checks that `chains` partitions the elements and every chain is ascending.
    pub fn is_chain_decomposition(&self, chains: &[Vec<ElementId>]) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.len());
        for chain in chains {
            for (i, &x) in chain.iter().enumerate() {
                if x >= self.len() || seen.put(x) {
                    return false;
                }
                if i > 0 && !self.dominates(x, chain[i - 1]) {
                    return false;
                }
            }
        }
        seen.count_ones(..) == self.len()
    }

    /// Checks that `order` lists every element once with dominated elements first.
    pub fn is_linear_extension(&self, order: &[ElementId]) -> bool {
        if order.len() != self.len() {
            return false;
        }
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &x) in order.iter().enumerate() {
            if x >= self.len() || pos[x] != usize::MAX {
                return false;
            }
            pos[x] = i;
        }
        (0..self.len()).all(|x| self.below[x].ones().all(|y| pos[y] < pos[x]))
    }
}

fn check_id(id: ElementId, n: usize) -> Result<()> {
    if id < n {
        Ok(())
    } else {
        Err(Error::UnknownElement { id, n })
    }
}

/// Parses `n <count>` followed by `u v` lines. `#` starts a comment.
pub(crate) fn parse_relation_text(text: &str) -> Result<(usize, Vec<(ElementId, ElementId)>)> {
    let mut n = None;
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |message: &str| Error::Parse { line: line_no, message: message.to_string() };
        match n {
            None => {
                if fields.len() != 2 || fields[0] != "n" {
                    return Err(bad("expected header `n <count>`"));
                }
                n = Some(fields[1].parse::<usize>().map_err(|_| bad("invalid element count"))?);
            }
            Some(count) => {
                if fields.len() != 2 {
                    return Err(bad("expected `u v`"));
                }
                let u = fields[0].parse::<usize>().map_err(|_| bad("invalid element id"))?;
                let v = fields[1].parse::<usize>().map_err(|_| bad("invalid element id"))?;
                if u >= count || v >= count {
                    return Err(bad("element id out of range"));
                }
                pairs.push((u, v));
            }
        }
    }
    let n = n.ok_or(Error::Parse { line: 0, message: "missing header".into() })?;
    Ok((n, pairs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_closes() {
        let p = Poset::parse("n 3\n0 1\n1 2\n").unwrap();
        assert!(p.dominates(0, 2));
        assert_eq!(p.relation(2, 0), Verdict::DominatedBy);
        assert_eq!(p.relation_count(), 3);
    }

    #[test]
    fn comments_and_blank_lines() {
        let p = Poset::parse("# header\nn 2 # two elements\n\n1 0 # edge\n").unwrap();
        assert!(p.dominates(1, 0));
    }

    #[test]
    fn rejects_cycles_and_loops() {
        assert_eq!(Poset::parse("n 2\n0 1\n1 0\n"), Err(Error::Cycle(0)));
        assert_eq!(Poset::parse("n 2\n1 1\n"), Err(Error::Cycle(1)));
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(Poset::parse("n 2\n0 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Poset::parse("n 2\n0 1 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Poset::parse("2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Poset::parse("n 2\n0 5\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Poset::parse(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn dump_round_trip() {
        let p = Poset::from_relations(5, [(4, 2), (2, 0), (3, 0), (4, 1)]).unwrap();
        assert_eq!(Poset::parse(&p.to_text()).unwrap(), p);
        assert!(!p.cover_pairs().contains(&(4, 0)));
    }

    #[test]
    fn restrict_relabels() {
        let p = Poset::chain(4);
        let q = p.restrict(&[3, 1]);
        assert!(q.dominates(0, 1));
        assert!(!q.dominates(1, 0));
    }

    #[test]
    fn validators() {
        let p = Poset::from_relations(4, [(1, 0), (3, 2)]).unwrap();
        assert!(p.is_chain_decomposition(&[vec![0, 1], vec![2, 3]]));
        assert!(!p.is_chain_decomposition(&[vec![1, 0], vec![2, 3]]));
        assert!(!p.is_chain_decomposition(&[vec![0, 1], vec![2]]));
        assert!(p.is_linear_extension(&[0, 2, 1, 3]));
        assert!(!p.is_linear_extension(&[1, 0, 2, 3]));
    }
}
