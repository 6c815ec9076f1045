//! Acceptance gate: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p brace-forge-core --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use brace_forge::brace::{
    associated_subsolution, check_proposition_five, check_socle_commutator, is_two_sided,
    retract_iso_check, validate_brace, FiniteBrace,
};
use brace_forge::census::enumerate_solutions;
use brace_forge::permgrp::{PermGroup, DEFAULT_CAP};
use brace_forge::ring::{
    brace_from_radical_ring, embed_group_adjoint, ring_from_two_sided_brace, FiniteRing,
};
use brace_forge::solution::{
    is_isomorphic, is_isomorphic_exhaustive, validate_solution, Level, Solution,
};
use brace_forge::structure_group::{
    check_binomial_identity, check_eq2_recursion, check_nonabelian, embed_finite_brace,
    lemma_nil_criterion, theorem_one_report, GElement,
};

const LARGE_BRACE_LIMIT: usize = 100_000;
const SMALL_BRACE_LIMIT: usize = 256;

struct Entry {
    solution: Solution,
    group_order: usize,
    /// Embedded brace with its injection, when within [`LARGE_BRACE_LIMIT`].
    brace: Option<(FiniteBrace, Vec<usize>)>,
}

/// Census solutions for m ≤ 4 with their embedded braces.
fn corpus() -> Vec<Entry> {
    let mut out = Vec::new();
    for m in 1..=4 {
        for s in enumerate_solutions(m, true).expect("census") {
            let g = PermGroup::closure(m, &s.permutation_generators(), DEFAULT_CAP).unwrap();
            let modulus = g.order().max(2);
            let brace = (modulus.pow(m as u32) <= LARGE_BRACE_LIMIT).then(|| {
                let e = embed_finite_brace(&s, DEFAULT_CAP).expect("embedding");
                (e.brace, e.inject)
            });
            out.push(Entry {
                group_order: g.order(),
                solution: s,
                brace,
            });
        }
    }
    out
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn in_prop_corpus(e: &Entry) -> bool {
    e.solution.size() <= 3 || e.brace.is_some()
}

fn ac1(corpus: &[Entry]) -> Outcome {
    let mut checked = 0;
    let mut infinite = 0;
    for e in corpus.iter().filter(|e| in_prop_corpus(e)) {
        let (b, _) = e.brace.as_ref().ok_or("m ≤ 3 brace missing")?;
        let v = check_proposition_five(b, DEFAULT_CAP).map_err(|x| x.to_string())?;
        ensure(v.holds, || {
            format!("{:?}: mpl {:?} vs right nilpotency {:?}", e.solution, v.mpl, v.right_nilpotency)
        })?;
        ensure((v.mpl == Level::Infinite) == v.right_nilpotency.is_none(), || {
            "infinite level without a stalled chain".into()
        })?;
        infinite += usize::from(v.mpl == Level::Infinite);
        checked += 1;
    }
    Ok(format!("{checked} braces, {infinite} of infinite level"))
}

fn ac2(corpus: &[Entry]) -> Outcome {
    let mut checked = 0;
    for e in corpus.iter().filter(|e| in_prop_corpus(e)) {
        let s = &e.solution;
        let m = s.size();
        let (b, inject) = e.brace.as_ref().unwrap();
        let expected = e.group_order.max(2).pow(m as u32);
        ensure(b.order() == expected, || format!("order {} ≠ {expected}", b.order()))?;
        ensure(inject.iter().all_unique() && inject.len() == m, || "injection collides".into())?;
        let restricted = associated_subsolution(b, inject).map_err(|x| x.to_string())?;
        let iso = is_isomorphic(&restricted, s).map_err(|x| x.to_string())?;
        let oracle = is_isomorphic_exhaustive(&restricted, s).map_err(|x| x.to_string())?;
        ensure(iso.is_some() && oracle.is_some(), || format!("{s:?}: image not isomorphic"))?;
        checked += 1;
    }
    Ok(format!("{checked} embeddings"))
}

fn ac3(corpus: &[Entry]) -> Outcome {
    let mut pairs = 0;
    for e in corpus.iter().filter(|e| in_prop_corpus(e)) {
        let s = &e.solution;
        let m = s.size();
        for x in 0..m {
            let a = GElement::generator(s, x).unwrap();
            let bound = m * a.perm().order();
            for y in 0..m {
                let b = GElement::generator(s, y).unwrap();
                let c = lemma_nil_criterion(&a, &b, Some(bound)).map_err(|x| x.to_string())?;
                let fixed = s.left(x, y) == y;
                ensure(c.vanishes == fixed, || format!("{s:?} at ({x}, {y})"))?;
                ensure(c.first_k.is_none_or(|k| k == 1), || "vanished late".into())?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} generator pairs"))
}

fn ac4(corpus: &[Entry]) -> Outcome {
    let sols: Vec<&Solution> = corpus.iter().map(|e| &e.solution).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut cases = 0;
    while cases < 1500 {
        let s = sols[rng.gen_range(0..sols.len())];
        let size = s.size();
        let len = rng.gen_range(1..=5);
        let letters: Vec<(usize, bool)> =
            (0..len).map(|_| (rng.gen_range(0..size), rng.gen_bool(0.5))).collect();
        let a = GElement::word(s, &letters).unwrap();
        if a.perm().order() > 6 {
            continue;
        }
        let b = GElement::generator(s, rng.gen_range(0..size)).unwrap();
        let m = rng.gen_range(1..=6);
        let bin = check_binomial_identity(&a, &b, m).map_err(|x| x.to_string())?;
        let rec = check_eq2_recursion(&a, &b, 6).map_err(|x| x.to_string())?;
        ensure(bin && rec, || format!("{s:?} word {letters:?} m={m}: {bin} {rec}"))?;
        cases += 1;
    }
    Ok(format!("{cases} random cases"))
}

fn ac5(corpus: &[Entry]) -> Outcome {
    let mut nontrivial = 0;
    for e in corpus {
        let r = theorem_one_report(&e.solution).map_err(|x| x.to_string())?;
        if r.trivial {
            ensure(r.hypothesis, || format!("{:?}: trivial but hypothesis fails", e.solution))?;
        } else {
            ensure(r.witness.is_some(), || format!("{:?}: no witness", e.solution))?;
            nontrivial += 1;
        }
        ensure(r.holds, || "check failed".into())?;
    }
    Ok(format!("{} solutions, {nontrivial} non-trivial", corpus.len()))
}

fn small_braces(corpus: &[Entry]) -> impl Iterator<Item = &FiniteBrace> {
    corpus
        .iter()
        .filter_map(|e| e.brace.as_ref().map(|(b, _)| b))
        .filter(|b| b.order() <= SMALL_BRACE_LIMIT)
}

fn ac6(corpus: &[Entry]) -> Outcome {
    let mut n = 0;
    for b in small_braces(corpus) {
        ensure(check_socle_commutator(b), || format!("brace of order {}", b.order()))?;
        n += 1;
    }
    Ok(format!("{n} braces"))
}

fn ac7(corpus: &[Entry]) -> Outcome {
    let mut n = 0;
    for b in small_braces(corpus) {
        let ok = retract_iso_check(b).map_err(|x| x.to_string())?;
        ensure(ok, || format!("brace of order {}", b.order()))?;
        n += 1;
    }
    Ok(format!("{n} braces"))
}

fn ac8() -> Outcome {
    let groups = [
        ("Z2", PermGroup::cyclic(2)),
        ("Z4", PermGroup::cyclic(4)),
        ("Z2xZ2", PermGroup::klein_four()),
        ("Sym3", PermGroup::symmetric(3)),
        ("D4", PermGroup::dihedral(4)),
    ];
    let mut n = 0;
    for (name, g) in &groups {
        for k in [2, 3, 6] {
            let emb = embed_group_adjoint(g, k).map_err(|x| format!("{name}, k={k}: {x}"))?;
            ensure(emb.image_size() == g.order(), || format!("{name}, k={k}: image size"))?;
            ensure(emb.pairs_checked == g.order().pow(2), || "pairs skipped".into())?;
            n += 1;
        }
    }
    Ok(format!("{n} group/modulus combinations"))
}

fn ac9() -> Outcome {
    for (n, k) in [(3, 2), (3, 3), (4, 2)] {
        let r = FiniteRing::strictly_upper_triangular(n, k);
        let b = brace_from_radical_ring(&r).map_err(|x| x.to_string())?;
        validate_brace(&b).map_err(|x| format!("{n}x{n}/Z{k}: {x}"))?;
        ensure(is_two_sided(&b), || format!("{n}x{n}/Z{k} not two-sided"))?;
        let back = ring_from_two_sided_brace(&b).map_err(|x| x.to_string())?;
        ensure(back.order() == r.order(), || "order changed".into())?;
        for x in 0..r.order() {
            for y in 0..r.order() {
                ensure(back.mul(x, y) == r.mul(x, y), || format!("product at ({x}, {y})"))?;
                ensure(back.add(x, y) == r.add(x, y), || format!("sum at ({x}, {y})"))?;
            }
        }
    }
    Ok("3 rings".into())
}

/// Every λ table over all m-tuples of permutations, validated one by one.
fn naive_tables(m: usize) -> Vec<Vec<Vec<usize>>> {
    let perms: Vec<Vec<usize>> = (0..m).permutations(m).collect();
    (0..m)
        .map(|_| perms.iter().cloned())
        .multi_cartesian_product()
        .filter(|t| validate_solution(t.clone(), None).is_ok())
        .collect()
}

fn ac10() -> Outcome {
    for m in 1..=3 {
        let got: Vec<_> = enumerate_solutions(m, false)
            .map_err(|x| x.to_string())?
            .iter()
            .map(Solution::lambda_table)
            .collect();
        let want = naive_tables(m);
        ensure(got == want, || format!("m={m}: {} vs oracle {}", got.len(), want.len()))?;
    }
    let mut counts = Vec::new();
    for m in 2..=4 {
        let first = enumerate_solutions(m, true).map_err(|x| x.to_string())?;
        let second = enumerate_solutions(m, true).map_err(|x| x.to_string())?;
        ensure(first == second, || format!("m={m} not deterministic"))?;
        counts.push(format!("m={m}: {}", first.len()));
    }
    Ok(format!("up to isomorphism {}", counts.join(", ")))
}

fn ac11(corpus: &[Entry]) -> Outcome {
    let mut n = 0;
    for e in corpus.iter().filter(|e| e.group_order <= 200) {
        let s = &e.solution;
        let g = PermGroup::closure(s.size(), &s.permutation_generators(), DEFAULT_CAP).unwrap();
        let engel = g.is_engel_group();
        let nil = g.is_nilpotent().nilpotent;
        ensure(engel == nil, || format!("{s:?}: Engel {engel}, nilpotent {nil}"))?;
        n += 1;
    }
    Ok(format!("{n} groups"))
}

fn ac12(corpus: &[Entry]) -> Outcome {
    let mut n = 0;
    for e in corpus.iter().filter(|e| !e.solution.is_trivial()) {
        let r = check_nonabelian(&e.solution);
        ensure(r.holds && r.witness.is_some(), || format!("{:?}", e.solution))?;
        n += 1;
    }
    Ok(format!("{n} non-trivial solutions"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = corpus();
    println!(
        "corpus: {} solutions, {} embedded braces ({:.1}s)",
        corpus.len(),
        corpus.iter().filter(|e| e.brace.is_some()).count(),
        start.elapsed().as_secs_f64()
    );
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("AC1 mpl equals right nilpotency index", Box::new(|| ac1(&corpus))),
        ("AC2 embedding order and injection", Box::new(|| ac2(&corpus))),
        ("AC3 star sequence vanishing", Box::new(|| ac3(&corpus))),
        ("AC4 binomial identity and recursion", Box::new(|| ac4(&corpus))),
        ("AC5 vanishing forces triviality", Box::new(|| ac5(&corpus))),
        ("AC6 socle commutator identity", Box::new(|| ac6(&corpus))),
        ("AC7 retraction matches socle quotient", Box::new(|| ac7(&corpus))),
        ("AC8 group ring adjoint embedding", Box::new(ac8)),
        ("AC9 radical ring roundtrip", Box::new(ac9)),
        ("AC10 census determinism and oracle", Box::new(ac10)),
        ("AC11 Engel iff nilpotent", Box::new(|| ac11(&corpus))),
        ("AC12 non-commuting generators", Box::new(|| ac12(&corpus))),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail} ({secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name}: {why} ({secs:.1}s)");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
