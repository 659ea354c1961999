//! Reducing a chain decomposition to `w` chains.
//!
//! Each round works on copies of the chains and repeatedly deletes the larger of
//! two comparable chain tops ("x dislodges y") until some chain runs out. Tracing
//! back from the element that emptied that chain gives a sequence
//! `(x₁, y₁), …, (x_t, y_t)` where `x₁` was a top and `y_{i−1}` sat directly above
//! `x_i`. Relinking `y_i → x_i` for every `i` and dropping `y_{i−1} → x_i` merges
//! two chains into one.

use crate::chainmerge::ChainMergeIndex;
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::poset::{Chains, ElementId, Verdict};
use std::collections::{HashMap, VecDeque};

/// Builds a chain-merge index over `chains` and peels down to `w` chains.
/// The index build is the only source of queries.
pub fn peel<O: Oracle + ?Sized>(oracle: &mut O, chains: Chains, w: usize) -> Result<Chains> {
    let index = ChainMergeIndex::build(oracle, chains)?;
    peel_with_index(&index, w, |_| {})
}

/// Peels the chains of `index` down to `w`, calling `observe` after every round.
///
/// Fails with `WidthExceeded` when no two chain tops are comparable, which
/// certifies that the indexed elements have width above `w`.
pub fn peel_with_index<F>(index: &ChainMergeIndex, w: usize, mut observe: F) -> Result<Chains>
where
    F: FnMut(&Chains),
{
    let ids: Vec<ElementId> = index.chains().iter().flatten().copied().collect();
    let m = ids.len();
    let local: HashMap<ElementId, usize> = ids.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut up: Vec<Option<usize>> = vec![None; m];
    let mut down: Vec<Option<usize>> = vec![None; m];
    for chain in index.chains() {
        for pair in chain.windows(2) {
            let (lo, hi) = (local[&pair[0]], local[&pair[1]]);
            up[lo] = Some(hi);
            down[hi] = Some(lo);
        }
    }

    let mut q = index.chains().len();
    let mut chains = index.chains().clone();
    while q > w {
        let tops: Vec<usize> = (0..m).filter(|&x| up[x].is_none()).collect();
        let mut current: Vec<Option<usize>> = tops.iter().map(|&t| Some(t)).collect();
        let mut slot_of = vec![usize::MAX; m];
        let mut is_top = vec![false; m];
        let mut pending = VecDeque::new();
        for (s, &t) in tops.iter().enumerate() {
            slot_of[t] = s;
            is_top[t] = true;
            for &u in &tops[..s] {
                pending.push_back((u, t));
            }
        }

        let mut dislodged_by: Vec<Option<usize>> = vec![None; m];
        let emptied = loop {
            let (a, b) = pending.pop_front().ok_or(Error::WidthExceeded(w))?;
            if !is_top[a] || !is_top[b] {
                continue;
            }
            let (x, y) = match index.lookup(ids[a], ids[b]) {
                Verdict::Dominates => (b, a),
                Verdict::DominatedBy => (a, b),
                Verdict::Incomparable => continue,
            };
            dislodged_by[y] = Some(x);
            is_top[y] = false;
            let s = slot_of[y];
            current[s] = down[y];
            match down[y] {
                None => break y,
                Some(next) => {
                    is_top[next] = true;
                    slot_of[next] = s;
                    for other in current.iter().flatten() {
                        if *other != next {
                            pending.push_back((*other, next));
                        }
                    }
                }
            }
        };

        // pairs (x_i, y_i), collected from the last one backwards
        let mut seq = vec![(dislodged_by[emptied].expect("dislodger recorded"), emptied)];
        while let Some(parent) = up[seq.last().unwrap().0] {
            if seq.len() > m {
                return Err(Error::InvalidDecomposition("dislodgement trace does not terminate".into()));
            }
            let x = dislodged_by[parent]
                .ok_or_else(|| Error::InvalidDecomposition(format!("element {} was never dislodged", ids[parent])))?;
            seq.push((x, parent));
        }
        seq.reverse();

        for i in 1..seq.len() {
            let (y_prev, x_i) = (seq[i - 1].1, seq[i].0);
            down[y_prev] = None;
            up[x_i] = None;
        }
        for &(x, y) in &seq {
            down[y] = Some(x);
            up[x] = Some(y);
        }

        let next = collect_chains(&ids, &up, &down);
        if next.len() + 1 != q {
            return Err(Error::InvalidDecomposition(format!("peeling round went from {q} to {} chains", next.len())));
        }
        for chain in &next {
            for pair in chain.windows(2) {
                if !index.dominates(pair[1], pair[0]) {
                    return Err(Error::InvalidDecomposition(format!(
                        "peeled link {} → {} is not a relation",
                        pair[1], pair[0]
                    )));
                }
            }
        }
        q = next.len();
        chains = next;
        observe(&chains);
    }
    Ok(chains)
}

fn collect_chains(ids: &[ElementId], up: &[Option<usize>], down: &[Option<usize>]) -> Chains {
    let mut out = Vec::new();
    for bottom in 0..ids.len() {
        if down[bottom].is_some() {
            continue;
        }
        let mut chain = vec![ids[bottom]];
        let mut cur = bottom;
        while let Some(u) = up[cur] {
            chain.push(ids[u]);
            cur = u;
            if chain.len() > ids.len() {
                break;
            }
        }
        out.push(chain);
    }
    out
}
