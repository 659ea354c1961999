//! Sorting transitive relations that need not be antisymmetric.
//!
//! A transitive relation `⊵` is reached through an oracle that reports both
//! `x ⊵ y` and `y ⊵ x` for a pair. [`TransitiveAdapter`] turns those answers
//! into a poset oracle whose answers never contradict one another, so any poset
//! algorithm can run on top of it. [`recover_extra_relations`] then restores the
//! pairs the adapter hid.

use crate::chainmerge::ChainMergeIndex;
use crate::error::Result;
use crate::generate::{rng_from_seed, width_bounded};
use crate::oracle::{check_pair, KnownRelations, Oracle};
use crate::poset::{close_rows, empty_rows, parse_relation_text, ElementId, Verdict};
use fixedbitset::FixedBitSet;
use rand::Rng;

/// A transitively closed relation; reflexive pairs are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitiveRelation {
    rows: Vec<FixedBitSet>,
}

impl TransitiveRelation {
    pub fn from_pairs<I>(n: usize, pairs: I) -> Self
    where
        I: IntoIterator<Item = (ElementId, ElementId)>,
    {
        let mut rows = empty_rows(n);
        for (u, v) in pairs {
            rows[u].insert(v);
        }
        close_rows(&mut rows);
        TransitiveRelation { rows }
    }

    /// Reads the relation file format; cycles are allowed.
    pub fn parse(text: &str) -> Result<Self> {
        let (n, pairs) = parse_relation_text(text)?;
        Ok(Self::from_pairs(n, pairs))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn relates(&self, x: ElementId, y: ElementId) -> bool {
        self.rows[x].contains(y)
    }

    pub fn rows(&self) -> &[FixedBitSet] {
        &self.rows
    }

    /// Equality ignoring reflexive pairs.
    pub fn same_off_diagonal(&self, other: &TransitiveRelation) -> bool {
        self.len() == other.len()
            && (0..self.len()).all(|x| (0..self.len()).all(|y| x == y || self.relates(x, y) == other.relates(x, y)))
    }
}

/// Reports `(x ⊵ y, y ⊵ x)`.
pub trait TransitiveOracle {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn query_pair(&mut self, x: ElementId, y: ElementId) -> Result<(bool, bool)>;
}

impl<T: TransitiveOracle + ?Sized> TransitiveOracle for &mut T {
    fn len(&self) -> usize {
        (**self).len()
    }

    fn query_pair(&mut self, x: ElementId, y: ElementId) -> Result<(bool, bool)> {
        (**self).query_pair(x, y)
    }
}

/// Answers from a known relation, counting queries.
#[derive(Debug, Clone)]
pub struct RelationOracle<'a> {
    relation: &'a TransitiveRelation,
    count: u64,
}

impl<'a> RelationOracle<'a> {
    pub fn new(relation: &'a TransitiveRelation) -> Self {
        RelationOracle { relation, count: 0 }
    }

    pub fn count(&self) -> u64 {
        self.count
    }
}

impl TransitiveOracle for RelationOracle<'_> {
    fn len(&self) -> usize {
        self.relation.len()
    }

    fn query_pair(&mut self, x: ElementId, y: ElementId) -> Result<(bool, bool)> {
        check_pair(x, y, self.relation.len())?;
        self.count += 1;
        Ok((self.relation.relates(x, y), self.relation.relates(y, x)))
    }
}

/// Presents a transitive relation as a poset oracle.
///
/// A pair related one way is answered that way. A pair related both ways gets
/// the direction already implied by earlier answers; with no such constraint the
/// element with the larger id dominates. Inferred answers cost nothing.
#[derive(Debug, Clone)]
pub struct TransitiveAdapter<T> {
    inner: T,
    known: KnownRelations,
    forwarded: u64,
}

impl<T: TransitiveOracle> TransitiveAdapter<T> {
    pub fn new(inner: T) -> Self {
        let n = inner.len();
        TransitiveAdapter { inner, known: KnownRelations::new(n), forwarded: 0 }
    }

    /// Inner queries spent so far.
    pub fn forwarded(&self) -> u64 {
        self.forwarded
    }

    pub fn inner_mut(&mut self) -> &mut T {
        &mut self.inner
    }

    pub fn into_inner(self) -> T {
        self.inner
    }
}

impl<T: TransitiveOracle> Oracle for TransitiveAdapter<T> {
    fn len(&self) -> usize {
        self.inner.len()
    }

    fn query(&mut self, x: ElementId, y: ElementId) -> Result<Verdict> {
        check_pair(x, y, self.len())?;
        if let Some(v) = self.known.lookup(x, y) {
            return Ok(v);
        }
        let (xy, yx) = self.inner.query_pair(x, y)?;
        self.forwarded += 1;
        let v = match (xy, yx) {
            (true, false) => Verdict::Dominates,
            (false, true) => Verdict::DominatedBy,
            (false, false) => Verdict::Incomparable,
            (true, true) => {
                let x_ok = self.known.allows_dominance(x, y);
                let y_ok = self.known.allows_dominance(y, x);
                match (x_ok, y_ok) {
                    (true, false) => Verdict::Dominates,
                    (false, true) => Verdict::DominatedBy,
                    _ if x > y => Verdict::Dominates,
                    _ => Verdict::DominatedBy,
                }
            }
        };
        self.known.record(x, y, v);
        Ok(v)
    }
}

/// Rebuilds the full relation from a sorted poset over ids `0..n`.
///
/// `index` must be a chain-merge index of the poset the adapter induced. For
/// each element and each chain, including its own, a bottom-up scan finds the
/// largest chain element it relates to; the set of related elements in a chain
/// is closed downward, so this costs at most `2·q·n` inner queries.
pub fn recover_extra_relations<T>(inner: &mut T, index: &ChainMergeIndex) -> Result<TransitiveRelation>
where
    T: TransitiveOracle + ?Sized,
{
    let n = inner.len();
    let chains = index.chains();
    let mut rows = empty_rows(n);
    for ci in chains {
        for cj in chains {
            let same = std::ptr::eq(ci, cj);
            let mut p = 0usize;
            for (a, &x) in ci.iter().enumerate() {
                if same {
                    // everything below x in its own chain is related already
                    p = p.max(a + 1);
                }
                while p < cj.len() && inner.query_pair(x, cj[p])?.0 {
                    p += 1;
                }
                for &y in &cj[..p] {
                    if y != x {
                        rows[x].insert(y);
                    }
                }
            }
        }
    }
    Ok(TransitiveRelation { rows })
}

/// A random transitive relation of width at most `w`: a width-bounded poset with
/// `extra` random pairs made mutual, then closed.
pub fn random_transitive(n: usize, w: usize, extra: usize, seed: u64) -> TransitiveRelation {
    let base = width_bounded(n, w, seed);
    let mut rng = rng_from_seed(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut pairs: Vec<(ElementId, ElementId)> =
        (0..n).flat_map(|x| base.below(x).ones().map(move |y| (x, y))).collect();
    if n >= 2 {
        for _ in 0..extra {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a != b {
                pairs.push((a, b));
                pairs.push((b, a));
            }
        }
    }
    TransitiveRelation::from_pairs(n, pairs)
}
