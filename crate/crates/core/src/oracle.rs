//! Comparison oracles and wrappers that count or infer answers.

use crate::error::{Error, Result};
use crate::poset::{empty_rows, ElementId, Poset, Verdict};
use fixedbitset::FixedBitSet;

/// Answers the relation between two distinct elements.
pub trait Oracle {
    /// Number of elements; ids are `0..len()`.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn query(&mut self, x: ElementId, y: ElementId) -> Result<Verdict>;
}

impl<O: Oracle + ?Sized> Oracle for &mut O {
    fn len(&self) -> usize {
        (**self).len()
    }

    fn query(&mut self, x: ElementId, y: ElementId) -> Result<Verdict> {
        (**self).query(x, y)
    }
}

pub(crate) fn check_pair(x: ElementId, y: ElementId, n: usize) -> Result<()> {
    if x == y {
        return Err(Error::SelfQuery(x));
    }
    for id in [x, y] {
        if id >= n {
            return Err(Error::UnknownElement { id, n });
        }
    }
    Ok(())
}

/// Answers from a known poset.
#[derive(Debug, Clone, Copy)]
pub struct PosetOracle<'a> {
    poset: &'a Poset,
}

impl<'a> PosetOracle<'a> {
    pub fn new(poset: &'a Poset) -> Self {
        PosetOracle { poset }
    }
}

impl Oracle for PosetOracle<'_> {
    fn len(&self) -> usize {
        self.poset.len()
    }

    fn query(&mut self, x: ElementId, y: ElementId) -> Result<Verdict> {
        check_pair(x, y, self.poset.len())?;
        Ok(self.poset.relation(x, y))
    }
}

/// Counts forwarded queries without changing answers.
#[derive(Debug, Clone)]
pub struct Counting<O> {
    inner: O,
    count: u64,
}

impl<O: Oracle> Counting<O> {
    pub fn new(inner: O) -> Self {
        Counting { inner, count: 0 }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: Oracle> Oracle for Counting<O> {
    fn len(&self) -> usize {
        self.inner.len()
    }

    fn query(&mut self, x: ElementId, y: ElementId) -> Result<Verdict> {
        let v = self.inner.query(x, y)?;
        self.count += 1;
        Ok(v)
    }
}

/// A subset of another oracle's elements, relabelled `0..elems.len()`.
#[derive(Debug)]
pub struct Restricted<'a, O: ?Sized> {
    inner: &'a mut O,
    elems: &'a [ElementId],
}

impl<'a, O: Oracle + ?Sized> Restricted<'a, O> {
    pub fn new(inner: &'a mut O, elems: &'a [ElementId]) -> Self {
        Restricted { inner, elems }
    }
}

impl<O: Oracle + ?Sized> Oracle for Restricted<'_, O> {
    fn len(&self) -> usize {
        self.elems.len()
    }

    fn query(&mut self, x: ElementId, y: ElementId) -> Result<Verdict> {
        check_pair(x, y, self.elems.len())?;
        self.inner.query(self.elems[x], self.elems[y])
    }
}

/// Relations learned so far: dominance closed under transitivity, plus answered
/// incomparable pairs.
#[derive(Debug, Clone)]
pub struct KnownRelations {
    below: Vec<FixedBitSet>,
    above: Vec<FixedBitSet>,
    incomparable: Vec<FixedBitSet>,
}

impl KnownRelations {
    pub fn new(n: usize) -> Self {
        KnownRelations { below: empty_rows(n), above: empty_rows(n), incomparable: empty_rows(n) }
    }

    pub fn lookup(&self, x: ElementId, y: ElementId) -> Option<Verdict> {
        if self.below[x].contains(y) {
            Some(Verdict::Dominates)
        } else if self.below[y].contains(x) {
            Some(Verdict::DominatedBy)
        } else if self.incomparable[x].contains(y) {
            Some(Verdict::Incomparable)
        } else {
            None
        }
    }

    /// Whether adding `x ≻ y` keeps the known dominance acyclic.
    pub fn allows_dominance(&self, x: ElementId, y: ElementId) -> bool {
        x != y && !self.below[y].contains(x) && !self.incomparable[x].contains(y)
    }

    /// Records an answer. Dominance is closed transitively.
    pub fn record(&mut self, x: ElementId, y: ElementId, v: Verdict) {
        match v {
            Verdict::Dominates => self.add_dominance(x, y),
            Verdict::DominatedBy => self.add_dominance(y, x),
            Verdict::Incomparable => {
                self.incomparable[x].insert(y);
                self.incomparable[y].insert(x);
            }
        }
    }

    fn add_dominance(&mut self, x: ElementId, y: ElementId) {
        if self.below[x].contains(y) {
            return;
        }
        let mut ups = self.above[x].clone();
        ups.insert(x);
        let mut downs = self.below[y].clone();
        downs.insert(y);
        for a in ups.ones() {
            self.below[a].union_with(&downs);
        }
        for b in downs.ones() {
            self.above[b].union_with(&ups);
        }
    }

    pub fn below_rows(&self) -> &[FixedBitSet] {
        &self.below
    }
}

/// Answers by transitivity and irreflexivity when possible, forwarding otherwise.
#[derive(Debug, Clone)]
pub struct InferenceCache<O> {
    inner: O,
    known: KnownRelations,
    forwarded: u64,
    inferred: u64,
}

impl<O: Oracle> InferenceCache<O> {
    pub fn new(inner: O) -> Self {
        let n = inner.len();
        InferenceCache { inner, known: KnownRelations::new(n), forwarded: 0, inferred: 0 }
    }

    pub fn forwarded(&self) -> u64 {
        self.forwarded
    }

    pub fn inferred(&self) -> u64 {
        self.inferred
    }

    pub fn known(&self) -> &KnownRelations {
        &self.known
    }

    /// The answer available without forwarding, if any.
    pub fn peek(&self, x: ElementId, y: ElementId) -> Option<Verdict> {
        self.known.lookup(x, y)
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: Oracle> Oracle for InferenceCache<O> {
    fn len(&self) -> usize {
        self.inner.len()
    }

    fn query(&mut self, x: ElementId, y: ElementId) -> Result<Verdict> {
        check_pair(x, y, self.len())?;
        if let Some(v) = self.known.lookup(x, y) {
            self.inferred += 1;
            return Ok(v);
        }
        let v = self.inner.query(x, y)?;
        self.forwarded += 1;
        self.known.record(x, y, v);
        Ok(v)
    }
}
