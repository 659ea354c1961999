//! Runs one algorithm against a known poset and checks the answer.

use anyhow::Result;
use clap::ValueEnum;
use posetkit::bounds::{
    bin_insertion_bound, entropy_sort_bound, heights_envelope, kselect_det_bound, kselect_rand_expected,
    mergesort_bound, minimals_det_bound, minimals_rand_expected, ternary_weight_envelope, unknown_width_bound,
    QueryBound,
};
use posetkit::brute::{heights_bruteforce, kselect_bruteforce, minimals_bruteforce};
use posetkit::chainmerge::ChainMergeIndex;
use posetkit::extensions::ExtensionCounter;
use posetkit::linext::{build_ternary_tree, heights_from_extension};
use posetkit::oracle::{Counting, PosetOracle};
use posetkit::selection::{kselect_det, kselect_rand, minimals_det, minimals_rand};
use posetkit::sorting::{bin_insertion_sort, entropy_sort_with, poset_mergesort, sort_unknown_width};
use posetkit::Poset;
use std::time::{Duration, Instant};

use crate::report::BenchRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Bininsert,
    Entropy,
    Mergesort,
    UnknownWidth,
    MinimalsDet,
    MinimalsRand,
    KselectDet,
    KselectRand,
    Linext,
    Heights,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Bininsert => "bininsert",
            Algo::Entropy => "entropy",
            Algo::Mergesort => "mergesort",
            Algo::UnknownWidth => "unknown-width",
            Algo::MinimalsDet => "minimals-det",
            Algo::MinimalsRand => "minimals-rand",
            Algo::KselectDet => "kselect-det",
            Algo::KselectRand => "kselect-rand",
            Algo::Linext => "linext",
            Algo::Heights => "heights",
        }
    }

    pub fn uses_k(self) -> bool {
        matches!(self, Algo::KselectDet | Algo::KselectRand)
    }

    /// Whether the bound holds for every run rather than on average.
    pub fn worst_case_bound(self) -> bool {
        !matches!(self, Algo::MinimalsRand | Algo::KselectRand | Algo::Linext)
    }
}

/// Parameters shared by every run.
#[derive(Debug, Clone, Copy)]
pub struct Setup {
    pub w: usize,
    pub k: usize,
    pub seed: u64,
    pub cap: usize,
}

pub struct Run {
    pub algo: Algo,
    pub queries: u64,
    pub bound: QueryBound,
    pub correct: bool,
    pub elapsed: Duration,
    pub index: Option<ChainMergeIndex>,
    pub output: Vec<usize>,
}

impl Run {
    /// Wrong answers always fail; exceeding the bound fails only for worst-case bounds.
    pub fn passed(&self) -> bool {
        self.correct && (!self.algo.worst_case_bound() || self.bound.admits(self.queries))
    }

    pub fn record(&self, p: &Poset, s: &Setup, seed: Option<u64>) -> BenchRecord {
        let k = self.algo.uses_k().then_some(s.k);
        BenchRecord::new(self.algo.name(), p.len(), s.w, k, seed, self.queries, &self.bound, self.elapsed)
    }
}

pub fn run(algo: Algo, p: &Poset, s: &Setup) -> Result<Run> {
    let n = p.len();
    let mut o = Counting::new(PosetOracle::new(p));
    let start = Instant::now();
    let mut index = None;
    let mut output = Vec::new();
    let (bound, correct) = match algo {
        Algo::Bininsert | Algo::Mergesort | Algo::Entropy | Algo::UnknownWidth => {
            let (idx, bound) = match algo {
                Algo::Bininsert => (bin_insertion_sort(&mut o, s.w)?, bin_insertion_bound(n, s.w)),
                Algo::Mergesort => (poset_mergesort(&mut o, s.w)?, mergesort_bound(n, s.w)),
                Algo::Entropy => {
                    let mut counter = ExtensionCounter::new(s.cap);
                    let total = counter.count_posets(n, s.w)?;
                    let out = entropy_sort_with(&mut o, s.w, &mut counter)?;
                    (out.index, entropy_sort_bound(&total, n, s.w))
                }
                _ => {
                    let out = sort_unknown_width(&mut o)?;
                    (out.index, unknown_width_bound(n, &out.attempts))
                }
            };
            let correct = idx.to_poset()? == *p;
            index = Some(idx);
            (bound, correct)
        }
        Algo::MinimalsDet | Algo::MinimalsRand => {
            output = if algo == Algo::MinimalsDet {
                minimals_det(&mut o, s.w)?
            } else {
                minimals_rand(&mut o, s.w, s.seed)?
            };
            let bound =
                if algo == Algo::MinimalsDet { minimals_det_bound(n, s.w) } else { minimals_rand_expected(n, s.w) };
            (bound, output == minimals_bruteforce(p))
        }
        Algo::KselectDet | Algo::KselectRand => {
            output = if algo == Algo::KselectDet {
                kselect_det(&mut o, s.w, s.k)?
            } else {
                kselect_rand(&mut o, s.w, s.k, s.seed)?
            };
            let bound = if algo == Algo::KselectDet {
                kselect_det_bound(n, s.w, s.k)
            } else {
                kselect_rand_expected(n, s.w, s.k)
            };
            (bound, output == kselect_bruteforce(p, s.k))
        }
        Algo::Linext => {
            let tree = build_ternary_tree(&mut o, s.seed)?;
            output = tree.linear_extension();
            (ternary_weight_envelope(n, s.w), p.is_linear_extension(&output))
        }
        Algo::Heights => {
            // the extension comes for free from the poset; only the height queries are counted
            let ext = build_ternary_tree(&mut PosetOracle::new(p), s.seed)?.linear_extension();
            output = heights_from_extension(&ext, &mut o, s.w)?.heights;
            (heights_envelope(n, s.w), output == heights_bruteforce(p))
        }
    };
    Ok(Run { algo, queries: o.count(), bound, correct, elapsed: start.elapsed(), index, output })
}

#[cfg(test)]
mod tests {
    use super::*;
    use posetkit::generate::chain_union;

    #[test]
    fn every_algorithm_on_a_small_instance() {
        let p = chain_union(7, 2, 1);
        let s = Setup { w: 2, k: 2, seed: 1, cap: 8 };
        for algo in Algo::value_variants() {
            let r = run(*algo, &p, &s).unwrap();
            assert!(r.passed(), "{} failed", algo.name());
        }
    }

    #[test]
    fn names_match_cli_values() {
        for algo in Algo::value_variants() {
            assert_eq!(algo.to_possible_value().unwrap().get_name(), algo.name());
        }
    }
}
