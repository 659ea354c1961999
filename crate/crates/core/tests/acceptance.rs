//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

use posetkit::adversary::{Adversary, DeviationTable};
use posetkit::bounds::{
    chainmerge_bound, entropy_sort_bound, kselect_det_bound, kselect_rand_expected, lower_bound_min_ceil,
    mergesort_bound, mergesort_final_bound, mergesort_recursion_bound, minimals_det_bound, minimals_rand_expected,
    random_ksel_bound, ternary_weight_envelope, transitive_recovery_bound,
};
use posetkit::brute::{heights_bruteforce, kselect_bruteforce, minimals_bruteforce};
use posetkit::chainmerge::ChainMergeIndex;
use posetkit::dilworth::{min_chain_decomposition, width};
use posetkit::extensions::ExtensionCounter;
use posetkit::generate::{chain_union, rng_from_seed, width_bounded};
use posetkit::linext::{build_ternary_tree, heights_from_extension};
use posetkit::oracle::{Counting, PosetOracle};
use posetkit::selection::{kselect_det, kselect_rand, minimals_det, minimals_rand};
use posetkit::sorting::{
    bin_insertion_sort, entropy_sort_with, mergesort_with_stats, sort_transitive, sort_unknown_width, MergesortStats,
};
use posetkit::transitive::{random_transitive, RelationOracle, TransitiveAdapter};
use posetkit::Poset;
use rand::Rng;
use statrs::statistics::Statistics;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

/// Multiple of the standard error allowed between an empirical mean and its bound.
const SIGMA_SLACK: f64 = 3.0;
/// Wall-clock limit for the sorting equivalence criterion.
const SORT_TIME_LIMIT: Duration = Duration::from_secs(120);

type Outcome = std::result::Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Instance {
    model: &'static str,
    n: usize,
    w: usize,
    seed: u64,
    poset: Poset,
}

/// 200 instances cycling through both generators, `n ∈ {16, 64, 256}` and
/// `w ∈ {1, 2, 4, 8}`.
fn instances() -> Vec<Instance> {
    (0..200u64)
        .map(|seed| {
            let i = seed as usize;
            let n = [16, 64, 256][(i / 2) % 3];
            let w = [1, 2, 4, 8][(i / 6) % 4];
            let (model, poset) = if i.is_multiple_of(2) {
                ("chains", chain_union(n, w, seed))
            } else {
                ("bounded", width_bounded(n, w, seed))
            };
            Instance { model, n, w, seed, poset }
        })
        .collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn label(inst: &Instance) -> String {
    format!("{}(n={}, w={}, seed={})", inst.model, inst.n, inst.w, inst.seed)
}

fn mergesort_run(inst: &Instance, trace: bool) -> (ChainMergeIndex, MergesortStats) {
    let mut o = PosetOracle::new(&inst.poset);
    let all: Vec<usize> = (0..inst.n).collect();
    mergesort_with_stats(&mut o, &all, inst.w, trace).expect("mergesort")
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let mean = xs.iter().mean();
    let sd = xs.iter().std_dev();
    (mean, sd / (xs.len() as f64).sqrt())
}

fn c1_sorting_equivalence(set: &[Instance]) -> Outcome {
    let start = Instant::now();
    for inst in set {
        let idx = bin_insertion_sort(&mut PosetOracle::new(&inst.poset), inst.w).map_err(|e| e.to_string())?;
        ensure(idx.to_poset().unwrap() == inst.poset, || format!("bin insertion differs on {}", label(inst)))?;
        let (idx, _) = mergesort_run(inst, false);
        ensure(idx.to_poset().unwrap() == inst.poset, || format!("mergesort differs on {}", label(inst)))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < SORT_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("{} instances, {:.1}s", set.len(), elapsed.as_secs_f64()))
}

fn c2_mergesort_bound(set: &[Instance]) -> Outcome {
    let mut worst: f64 = 0.0;
    for inst in set {
        let (_, stats) = mergesort_run(inst, false);
        let rec = mergesort_recursion_bound(inst.n, inst.w);
        let fin = mergesort_final_bound(inst.n, inst.w);
        ensure(rec.admits(stats.recursion_queries), || {
            format!("recursion {} > {} on {}", stats.recursion_queries, rec, label(inst))
        })?;
        ensure(fin.admits(stats.final_queries), || {
            format!("final build {} > {} on {}", stats.final_queries, fin, label(inst))
        })?;
        let total = mergesort_bound(inst.n, inst.w).value();
        if total > 0.0 {
            worst = worst.max(stats.total_queries() as f64 / total);
        }
    }
    Ok(format!("max queries/bound {worst:.3}"))
}

fn c3_chainmerge_bound(set: &[Instance]) -> Outcome {
    let mut builds = 0usize;
    for inst in set {
        let (_, stats) = mergesort_run(inst, false);
        for b in &stats.builds {
            builds += 1;
            ensure(chainmerge_bound(b.chains, b.elements).admits(b.queries), || {
                format!("build of {} chains over {} used {} on {}", b.chains, b.elements, b.queries, label(inst))
            })?;
        }
        let chains = min_chain_decomposition(&inst.poset);
        let q = chains.len();
        let mut o = Counting::new(PosetOracle::new(&inst.poset));
        let idx = ChainMergeIndex::build(&mut o, chains).map_err(|e| e.to_string())?;
        builds += 1;
        let after_build = o.count();
        ensure(chainmerge_bound(q, inst.n).admits(after_build), || format!("direct build over {}", label(inst)))?;
        let table = idx.relation_table().map_err(|e| e.to_string())?;
        ensure(o.count() == after_build, || "lookups issued queries".into())?;
        for (x, row) in table.iter().enumerate() {
            for (y, &v) in row.iter().enumerate() {
                if x != y {
                    ensure(v == inst.poset.relation(x, y), || format!("lookup ({x},{y}) wrong on {}", label(inst)))?;
                }
            }
        }
    }
    Ok(format!("{builds} builds"))
}

fn c4_entropy_bound() -> Outcome {
    let mut counter = ExtensionCounter::default();
    let mut rng = rng_from_seed(4);
    let mut runs = 0;
    for w in [2usize, 3] {
        for n in 1..=7usize {
            let total = counter.count_posets(n, w).map_err(|e| e.to_string())?;
            for s in 0..40u64 {
                let seed = rng.gen::<u64>() ^ s;
                let p = if s % 2 == 0 { width_bounded(n, w, seed) } else { chain_union(n, w.min(n), seed) };
                ensure(width(&p) <= w, || "generator exceeded width".into())?;
                let out = entropy_sort_with(&mut PosetOracle::new(&p), w, &mut counter).map_err(|e| e.to_string())?;
                runs += 1;
                ensure(out.index.to_poset().unwrap() == p, || format!("wrong order n={n} w={w} seed={seed}"))?;
                let bound = entropy_sort_bound(&total, n, w);
                ensure(bound.admits(out.queries), || {
                    format!("{} queries > {} at n={n} w={w} seed={seed}", out.queries, bound)
                })?;
                for rec in &out.searches {
                    ensure(rec.queries <= rec.query_limit(), || format!("search over budget at n={n} seed={seed}"))?;
                }
            }
        }
    }
    Ok(format!("{runs} instances, n ≤ 7"))
}

fn c5_peeling(set: &[Instance]) -> Outcome {
    let mut peels = 0usize;
    for inst in set {
        let (_, stats) = mergesort_run(inst, true);
        for rec in &stats.peels {
            peels += 1;
            let mut elems: Vec<usize> = rec.input.iter().flatten().copied().collect();
            elems.sort_unstable();
            ensure(rec.output.len() == inst.w, || format!("peel left {} chains on {}", rec.output.len(), label(inst)))?;
            let mut prev = rec.input.len();
            for round in &rec.rounds {
                ensure(round.len() + 1 == prev, || format!("round did not remove one chain on {}", label(inst)))?;
                prev = round.len();
                let mut seen: Vec<usize> = round.iter().flatten().copied().collect();
                seen.sort_unstable();
                ensure(seen == elems, || format!("round lost elements on {}", label(inst)))?;
                for chain in round {
                    for pair in chain.windows(2) {
                        ensure(inst.poset.dominates(pair[1], pair[0]), || {
                            format!("false link {} → {} on {}", pair[1], pair[0], label(inst))
                        })?;
                    }
                }
            }
            ensure(rec.rounds.last() == Some(&rec.output), || "output is not the last round".into())?;
        }
    }
    Ok(format!("{peels} peeling calls"))
}

fn c6_minimals(set: &[Instance]) -> Outcome {
    for inst in set {
        let mut o = Counting::new(PosetOracle::new(&inst.poset));
        let got = minimals_det(&mut o, inst.w).map_err(|e| e.to_string())?;
        ensure(got == minimals_bruteforce(&inst.poset), || format!("wrong minimals on {}", label(inst)))?;
        ensure(minimals_det_bound(inst.n, inst.w).admits(o.count()), || {
            format!("{} queries on {}", o.count(), label(inst))
        })?;
    }
    let (n, w, trials) = (200, 4, 2000u64);
    let mut counts = Vec::with_capacity(trials as usize);
    for t in 0..trials {
        let p = chain_union(n, w, 10_000 + t);
        let mut o = Counting::new(PosetOracle::new(&p));
        let got = minimals_rand(&mut o, w, t).map_err(|e| e.to_string())?;
        ensure(got == minimals_bruteforce(&p), || format!("randomized minimals wrong at trial {t}"))?;
        counts.push(o.count() as f64);
    }
    let (mean, se) = mean_and_se(&counts);
    let bound = minimals_rand_expected(n, w).value();
    ensure(mean <= bound + SIGMA_SLACK * se, || format!("mean {mean:.2} > {bound:.2} + {SIGMA_SLACK}·{se:.3}"))?;
    Ok(format!("randomized mean {mean:.2} vs bound {bound:.2}"))
}

fn c7_kselect(set: &[Instance]) -> Outcome {
    for inst in set {
        for k in 1..=3 {
            let truth = kselect_bruteforce(&inst.poset, k);
            let mut o = Counting::new(PosetOracle::new(&inst.poset));
            let det = kselect_det(&mut o, inst.w, k).map_err(|e| e.to_string())?;
            ensure(det == truth, || format!("deterministic k={k} wrong on {}", label(inst)))?;
            let bound = kselect_det_bound(inst.n, inst.w, k);
            ensure(bound.admits(o.count()), || format!("{} > {} at k={k} on {}", o.count(), bound, label(inst)))?;
            let rand =
                kselect_rand(&mut PosetOracle::new(&inst.poset), inst.w, k, inst.seed).map_err(|e| e.to_string())?;
            ensure(rand == truth, || format!("randomized k={k} wrong on {}", label(inst)))?;
        }
    }
    let (n, w) = (256, 3);
    let mut report = Vec::new();
    for k in 1..=3 {
        let mut counts = Vec::new();
        for t in 0..500u64 {
            let p = chain_union(n, w, 20_000 + t);
            let mut o = Counting::new(PosetOracle::new(&p));
            let got = kselect_rand(&mut o, w, k, t).map_err(|e| e.to_string())?;
            ensure(got == kselect_bruteforce(&p, k), || format!("randomized k={k} wrong at trial {t}"))?;
            counts.push(o.count() as f64);
        }
        let (mean, se) = mean_and_se(&counts);
        let bound = kselect_rand_expected(n, w, k).value();
        ensure(mean <= bound + SIGMA_SLACK * se, || format!("k={k}: mean {mean:.1} > {bound:.1}"))?;
        report.push(format!("k={k} mean {mean:.0}/{bound:.0}"));
    }
    Ok(report.join(", "))
}

fn c8_adversary() -> Outcome {
    let mut report = Vec::new();
    for &(n, w) in &[(50usize, 2usize), (99, 3), (200, 5)] {
        let need = lower_bound_min_ceil(n, w);
        let mut adv = Adversary::min(n, w);
        let got = minimals_det(&mut adv, w).map_err(|e| e.to_string())?;
        let witness = adv.finalize_witness().map_err(|e| e.to_string())?;
        ensure(got == minimals_bruteforce(&witness), || format!("deterministic answer wrong at ({n},{w})"))?;
        ensure(adv.queries() >= need, || format!("deterministic used {} < {need}", adv.queries()))?;
        let det = adv.queries();

        let mut adv = Adversary::min(n, w);
        let got = minimals_rand(&mut adv, w, n as u64).map_err(|e| e.to_string())?;
        let witness = adv.finalize_witness().map_err(|e| e.to_string())?;
        ensure(got == minimals_bruteforce(&witness), || format!("randomized answer wrong at ({n},{w})"))?;
        ensure(adv.queries() >= need, || format!("randomized used {} < {need}", adv.queries()))?;
        report.push(format!("({n},{w}): {det}/{}≥{need}", adv.queries()));
    }
    Ok(report.join(", "))
}

fn c9_deviations() -> Outcome {
    for w in [2usize, 5, 8] {
        let mut rng = rng_from_seed(900 + w as u64);
        let mut table = DeviationTable::new(w);
        for step in 0..100_000 {
            let mut eligible: Vec<usize> = (0..w).filter(|_| rng.gen_bool(0.5)).collect();
            if eligible.is_empty() {
                eligible.push(rng.gen_range(0..w));
            }
            table.assign(&eligible);
            ensure(table.invariants_hold(), || format!("w={w} violated at step {step}"))?;
        }
    }
    Ok("3 × 10⁵ updates".into())
}

fn c10_linext(set: &[Instance]) -> Outcome {
    for inst in set {
        let tree = build_ternary_tree(&mut PosetOracle::new(&inst.poset), inst.seed).map_err(|e| e.to_string())?;
        ensure(tree.partitions_correctly(&inst.poset), || format!("bad split on {}", label(inst)))?;
        let ext = tree.linear_extension();
        ensure(inst.poset.is_linear_extension(&ext), || format!("invalid extension on {}", label(inst)))?;
        let h = heights_from_extension(&ext, &mut PosetOracle::new(&inst.poset), inst.w).map_err(|e| e.to_string())?;
        ensure(h.heights == heights_bruteforce(&inst.poset), || format!("wrong heights on {}", label(inst)))?;
        ensure(h.max_frontier <= inst.w, || format!("frontier {} on {}", h.max_frontier, label(inst)))?;
    }
    let (n, w) = (256, 4);
    let mut weights = Vec::new();
    for t in 0..500u64 {
        let p = chain_union(n, w, 30_000 + t);
        let mut o = Counting::new(PosetOracle::new(&p));
        let tree = build_ternary_tree(&mut o, t).map_err(|e| e.to_string())?;
        ensure(o.count() == tree.weight(), || "query count differs from tree weight".into())?;
        weights.push(tree.weight() as f64);
    }
    let mean = weights.iter().mean();
    let envelope = ternary_weight_envelope(n, w).value();
    ensure(mean <= envelope, || format!("mean weight {mean:.0} > {envelope:.0}"))?;
    Ok(format!("mean tree weight {mean:.0} vs {envelope:.0}"))
}

fn c11_transitive() -> Outcome {
    let mut rng = rng_from_seed(11);
    for t in 0..100u64 {
        let n = [8usize, 16, 32, 64][t as usize % 4];
        let w = [1usize, 2, 4, 8][(t as usize / 4) % 4].min(n);
        let extra = rng.gen_range(0..=n);
        let r = random_transitive(n, w, extra, t);
        let mut inner = RelationOracle::new(&r);
        let out = sort_transitive(&mut inner, w).map_err(|e| e.to_string())?;
        ensure(out.relation.same_off_diagonal(&r), || format!("relation {t} not recovered"))?;
        ensure(transitive_recovery_bound(n, w).admits(out.recovery_queries), || {
            format!("recovery used {} > 2nw on relation {t}", out.recovery_queries)
        })?;
        ensure(mergesort_bound(n, w).admits(out.sort_queries), || {
            format!("sorting used {} on relation {t}", out.sort_queries)
        })?;
        // the adapter must induce a poset of the same width
        let mut adapter = TransitiveAdapter::new(RelationOracle::new(&r));
        let induced = posetkit::sorting::poset_mergesort(&mut adapter, n).unwrap().to_poset().unwrap();
        ensure(width(&induced) <= w, || format!("induced poset wider than {w} on relation {t}"))?;
    }
    Ok("100 relations".into())
}

fn c12_unknown_width(set: &[Instance]) -> Outcome {
    for inst in set {
        let out = sort_unknown_width(&mut PosetOracle::new(&inst.poset)).map_err(|e| e.to_string())?;
        ensure(out.index.to_poset().unwrap() == inst.poset, || format!("wrong order on {}", label(inst)))?;
        let wd = width(&inst.poset).max(2);
        let expect: Vec<usize> = (1..).map(|i| 1usize << i).take_while(|&b| b / 2 < wd).collect();
        ensure(out.attempts == expect, || format!("attempts {:?} on {}", out.attempts, label(inst)))?;
    }
    Ok(format!("{} instances", set.len()))
}

fn c13_random_lower_bound() -> Outcome {
    let (n, w) = (400, 4);
    let mut report = Vec::new();
    for k in 1..=2 {
        let mut counts = Vec::new();
        for t in 0..500u64 {
            let p = chain_union(n, w, 40_000 + t);
            let mut o = Counting::new(PosetOracle::new(&p));
            kselect_rand(&mut o, w, k, t).map_err(|e| e.to_string())?;
            counts.push(o.count() as f64);
        }
        let (mean, se) = mean_and_se(&counts);
        let bound = random_ksel_bound(n, w, k).map_err(|e| e.to_string())?;
        ensure(mean >= bound - SIGMA_SLACK * se, || format!("k={k}: mean {mean:.1} < {bound:.1}"))?;
        report.push(format!("k={k} mean {mean:.0} ≥ {bound:.0}"));
    }
    Ok(report.join(", "))
}

fn main() {
    let set = instances();
    let criteria: Vec<Criterion> = vec![
        ("oracle equivalence of sorting", Box::new(|| c1_sorting_equivalence(&set))),
        ("mergesort query bound", Box::new(|| c2_mergesort_bound(&set))),
        ("chain-merge build bound", Box::new(|| c3_chainmerge_bound(&set))),
        ("entropy sort bound", Box::new(c4_entropy_bound)),
        ("peeling", Box::new(|| c5_peeling(&set))),
        ("minimal elements", Box::new(|| c6_minimals(&set))),
        ("k-selection", Box::new(|| c7_kselect(&set))),
        ("adversarial lower bound", Box::new(c8_adversary)),
        ("deviation invariants", Box::new(c9_deviations)),
        ("linear extension and heights", Box::new(|| c10_linext(&set))),
        ("transitive relations", Box::new(c11_transitive)),
        ("unknown width", Box::new(|| c12_unknown_width(&set))),
        ("randomized lower-bound sanity", Box::new(c13_random_lower_bound)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
