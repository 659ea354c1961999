//! Minimal elements and k-selection.
//!
//! k-selection returns every element of height at most `k − 1`. All functions
//! return the selected ids in ascending order.

use crate::error::{Error, Result};
use crate::generate::rng_from_seed;
use crate::oracle::{Oracle, Restricted};
use crate::poset::{ElementId, Verdict};
use crate::sorting::{entropy_sort, mergesort_with_stats};
use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;

/// Keeps a candidate set `T` of pairwise incomparable elements, comparing each
/// new element against all of `T`. At most `w·n` queries.
pub fn minimals_det<O: Oracle + ?Sized>(oracle: &mut O, w: usize) -> Result<Vec<ElementId>> {
    minimals_det_traced(oracle, w, |_, _| {})
}

/// [`minimals_det`], calling `observe(processed, candidates)` after each element.
pub fn minimals_det_traced<O, F>(oracle: &mut O, w: usize, mut observe: F) -> Result<Vec<ElementId>>
where
    O: Oracle + ?Sized,
    F: FnMut(&[ElementId], &[ElementId]),
{
    let n = oracle.len();
    let order: Vec<ElementId> = (0..n).collect();
    let mut cands: Vec<ElementId> = Vec::with_capacity(w + 1);
    for (t, &x) in order.iter().enumerate() {
        let mut verdicts = Vec::with_capacity(cands.len());
        for &a in &cands {
            verdicts.push(oracle.query(x, a)?);
        }
        if !verdicts.contains(&Verdict::Dominates) {
            let mut keep = verdicts.iter().map(|&v| v != Verdict::DominatedBy);
            cands.retain(|_| keep.next().unwrap());
            push_candidate(&mut cands, x, w)?;
        }
        observe(&order[..=t], &cands);
    }
    cands.sort_unstable();
    Ok(cands)
}

/// Processes elements in a random order, probing candidates in a random order
/// and stopping at the first candidate the new element dominates.
pub fn minimals_rand<O: Oracle + ?Sized>(oracle: &mut O, w: usize, seed: u64) -> Result<Vec<ElementId>> {
    minimals_rand_traced(oracle, w, seed, |_, _| {})
}

/// [`minimals_rand`], calling `observe(processed, candidates)` after each element.
pub fn minimals_rand_traced<O, F>(oracle: &mut O, w: usize, seed: u64, mut observe: F) -> Result<Vec<ElementId>>
where
    O: Oracle + ?Sized,
    F: FnMut(&[ElementId], &[ElementId]),
{
    let mut rng = rng_from_seed(seed);
    let mut order: Vec<ElementId> = (0..oracle.len()).collect();
    order.shuffle(&mut rng);
    let mut cands: Vec<ElementId> = Vec::with_capacity(w + 1);
    for t in 0..order.len() {
        let x = order[t];
        let mut probe = cands.clone();
        probe.shuffle(&mut rng);
        let mut dominated = false;
        for a in probe {
            match oracle.query(x, a)? {
                Verdict::Dominates => {
                    dominated = true;
                    break;
                }
                Verdict::DominatedBy => cands.retain(|&c| c != a),
                Verdict::Incomparable => {}
            }
        }
        if !dominated {
            push_candidate(&mut cands, x, w)?;
        }
        observe(&order[..=t], &cands);
    }
    cands.sort_unstable();
    Ok(cands)
}

fn push_candidate(cands: &mut Vec<ElementId>, x: ElementId, w: usize) -> Result<()> {
    if cands.len() == w {
        return Err(Error::CandidateOverflow(w));
    }
    cands.push(x);
    Ok(())
}

/// How candidate sets are sorted during k-selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SubsetSorter {
    #[default]
    Mergesort,
    /// Only for sets within the exhaustive counting cap.
    Entropy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KSelection {
    pub selected: Vec<ElementId>,
    /// Size of every set that was sorted, in order.
    pub flush_sizes: Vec<usize>,
}

/// Batched k-selection: repeatedly sorts the current candidates together with
/// the next `w·k` elements and keeps those of height at most `k − 1`.
pub fn kselect_det<O: Oracle + ?Sized>(oracle: &mut O, w: usize, k: usize) -> Result<Vec<ElementId>> {
    Ok(kselect_det_with(oracle, w, k, SubsetSorter::Mergesort)?.selected)
}

pub fn kselect_det_with<O: Oracle + ?Sized>(
    oracle: &mut O,
    w: usize,
    k: usize,
    sorter: SubsetSorter,
) -> Result<KSelection> {
    check_k(k)?;
    let all: Vec<ElementId> = (0..oracle.len()).collect();
    let mut cands = Vec::new();
    let mut flush_sizes = Vec::new();
    for batch in all.chunks(w * k) {
        let mut set = cands.clone();
        set.extend_from_slice(batch);
        flush_sizes.push(set.len());
        cands = sort_subset(oracle, set, w, sorter)?.low(k);
    }
    cands.sort_unstable();
    Ok(KSelection { selected: cands, flush_sizes })
}

/// Randomized k-selection. After an initial sort of `w·k` random elements,
/// each element is compared with the maximal candidates in random order and
/// the first comparable one decides:
///
/// * the element dominates a candidate of height `k − 1`: discarded;
/// * anything else comparable, or nothing comparable: deferred.
///
/// Deferred elements are sorted in with the candidates once `w·k` of them
/// accumulate and at the end.
pub fn kselect_rand<O: Oracle + ?Sized>(oracle: &mut O, w: usize, k: usize, seed: u64) -> Result<Vec<ElementId>> {
    kselect_rand_traced(oracle, w, k, seed, |_, _, _| {})
}

/// [`kselect_rand`], calling `observe(processed, candidates, deferred)` after
/// each element past the initial sort.
pub fn kselect_rand_traced<O, F>(
    oracle: &mut O,
    w: usize,
    k: usize,
    seed: u64,
    mut observe: F,
) -> Result<Vec<ElementId>>
where
    O: Oracle + ?Sized,
    F: FnMut(&[ElementId], &[ElementId], &[ElementId]),
{
    check_k(k)?;
    let n = oracle.len();
    let wk = w * k;
    let mut rng = rng_from_seed(seed);
    let mut order: Vec<ElementId> = (0..n).collect();
    order.shuffle(&mut rng);
    if n <= wk {
        let mut out = sort_subset(oracle, order, w, SubsetSorter::Mergesort)?.low(k);
        out.sort_unstable();
        return Ok(out);
    }

    let mut sorted = sort_subset(oracle, order[..wk].to_vec(), w, SubsetSorter::Mergesort)?;
    let mut cands = sorted.low(k);
    let mut tops = sorted.low_maximal(k);
    let mut deferred = Vec::new();
    for t in wk..n {
        let x = order[t];
        let mut probe = tops.clone();
        probe.shuffle(&mut rng);
        let mut keep = true;
        for (a, h) in probe {
            match oracle.query(x, a)? {
                Verdict::Incomparable => continue,
                Verdict::Dominates if h + 1 == k => keep = false,
                _ => {}
            }
            break;
        }
        if keep {
            deferred.push(x);
        }
        if deferred.len() == wk || (t + 1 == n && !deferred.is_empty()) {
            let mut set = std::mem::take(&mut cands);
            set.append(&mut deferred);
            sorted = sort_subset(oracle, set, w, SubsetSorter::Mergesort)?;
            cands = sorted.low(k);
            tops = sorted.low_maximal(k);
        }
        observe(&order[..=t], &cands, &deferred);
    }
    cands.sort_unstable();
    Ok(cands)
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    Ok(())
}

/// A sorted subset with heights relative to the subset.
struct Sorted {
    elems: Vec<ElementId>,
    rows: Vec<FixedBitSet>,
    heights: Vec<usize>,
}

impl Sorted {
    fn low(&self, k: usize) -> Vec<ElementId> {
        (0..self.elems.len()).filter(|&i| self.heights[i] < k).map(|i| self.elems[i]).collect()
    }

    /// Maximal elements among those of height below `k`, with their heights.
    fn low_maximal(&self, k: usize) -> Vec<(ElementId, usize)> {
        let low: Vec<usize> = (0..self.elems.len()).filter(|&i| self.heights[i] < k).collect();
        low.iter()
            .filter(|&&i| !low.iter().any(|&j| self.rows[j].contains(i)))
            .map(|&i| (self.elems[i], self.heights[i]))
            .collect()
    }
}

fn sort_subset<O: Oracle + ?Sized>(
    oracle: &mut O,
    elems: Vec<ElementId>,
    w: usize,
    sorter: SubsetSorter,
) -> Result<Sorted> {
    let m = elems.len();
    let rows: Vec<FixedBitSet> = match sorter {
        SubsetSorter::Mergesort => {
            let (index, _) = mergesort_with_stats(oracle, &elems, w, false)?;
            (0..m)
                .map(|i| {
                    let mut row = FixedBitSet::with_capacity(m);
                    row.extend((0..m).filter(|&j| j != i && index.dominates(elems[i], elems[j])));
                    row
                })
                .collect()
        }
        SubsetSorter::Entropy => {
            let index = entropy_sort(&mut Restricted::new(oracle, &elems), w)?;
            index.to_poset()?.rows().to_vec()
        }
    };
    let mut by_size: Vec<usize> = (0..m).collect();
    by_size.sort_by_key(|&i| rows[i].count_ones(..));
    let mut heights = vec![0usize; m];
    for i in by_size {
        heights[i] = rows[i].ones().map(|j| heights[j] + 1).max().unwrap_or(0);
    }
    Ok(Sorted { elems, rows, heights })
}
