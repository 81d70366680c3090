//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use qprenex::export::{prenex_problem_text, to_qdimacs, FreeVariables};
use qprenex::gen::{nested_biconditional, GenConfig, Generator};
use qprenex::semantics::{evaluate, evaluate_via_mc, Engine};
use qprenex::transform::{
    extract_quantifier, naive_prenex, prenex, prenex_mc, prenex_with_copies, step_transform,
};
use qprenex::{
    parse, parse_with, substitute, Block, Formula, FreshGen, Op, OperatorTable, Oracle,
    ParseOptions, Quantifier, Substitution, Valuation, Var,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn f(text: &str) -> Formula {
    parse(text).unwrap().formula
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn diagram(ops: OperatorTable) -> Oracle {
    Oracle::new(ops).with_engine(Engine::Diagram).with_cap(64)
}

fn all_valuations(vars: &BTreeSet<Var>) -> Vec<Valuation> {
    let vars: Vec<&Var> = vars.iter().collect();
    (0..1u32 << vars.len())
        .map(|bits| {
            vars.iter()
                .enumerate()
                .map(|(i, v)| ((*v).clone(), bits >> i & 1 == 1))
                .collect()
        })
        .collect()
}

fn metric_fixtures() -> Outcome {
    ensure(f("p <-> q").length() == 3, || "length(p <-> q) != 3".into())?;
    ensure(f("exists x y . x -> p").length() == 6, || {
        "length(exists x y . x -> p) != 6".into()
    })?;
    let phi = f("(exists x . a & ~(exists x y . b)) & ~(forall y . c)");
    ensure(phi.nblock() == 3 && phi.nbvar() == 4, || {
        format!("nblock={} nbvar={}", phi.nblock(), phi.nbvar())
    })?;
    Ok("lengths 3 and 6, nblock 3, nbvar 4".into())
}

fn quantifier_under_xor() -> Outcome {
    let input = f("a & b xor (exists x . x | a)");
    let oracle = diagram(OperatorTable::new()).with_engine(Engine::Enumerate);
    let out = prenex(
        Quantifier::Exists,
        &input,
        &mut FreshGen::for_formula(&input),
    );
    ensure(out.is_prenex(), || "output not prenex".into())?;
    ensure(oracle.equisatisfiable(&input, &out).unwrap(), || {
        "transform not equisatisfiable".into()
    })?;
    let displayed = f(
        "forall xn . exists xp x p . (p <-> x | a) & (p -> (x <-> xp)) \
                       & (~p -> (x <-> xn)) & (a & b xor p)",
    );
    ensure(oracle.equivalent(&input, &displayed).unwrap(), || {
        "displayed final formula not equivalent to the input".into()
    })?;
    Ok(format!(
        "equisatisfiable, displayed form equivalent; output length {}",
        out.length()
    ))
}

fn nested_blocks() -> Outcome {
    let phi = f("(exists x . a & ~(exists x . b)) & ~(forall y . c)");
    let oracle = diagram(OperatorTable::new());
    let out = prenex(Quantifier::Exists, &phi, &mut FreshGen::for_formula(&phi));
    ensure(out.is_prenex(), || "not prenex".into())?;
    let shape: Vec<(Quantifier, usize)> = out.prefix().iter().map(|(q, b)| (*q, b.len())).collect();
    ensure(
        shape == [(Quantifier::Forall, 5), (Quantifier::Exists, 2)],
        || format!("prefix shape {shape:?}"),
    )?;
    ensure(out.qdepth() == 2 && phi.qdepth() == 2, || {
        "depth changed".into()
    })?;
    ensure(oracle.equisatisfiable(&phi, &out).unwrap(), || {
        "not equisatisfiable".into()
    })?;
    let mc = prenex_mc(&phi, &mut FreshGen::for_formula(&phi));
    ensure(oracle.equivalent(&phi, &mc).unwrap(), || {
        "mc form not equivalent".into()
    })?;
    Ok("prefix forall(5) exists(2), depth 2, equisatisfiable; mc equivalent".into())
}

fn theorem_instance(seed: u64) -> Result<(), String> {
    let config = GenConfig {
        vars: 8,
        max_depth: 4,
        max_len: 40,
        ..GenConfig::default()
    };
    let problem = Generator::seeded(config, seed).problem();
    let phi = &problem.formula;
    let oracle = diagram(problem.operators());
    let fail = |what: &str| format!("seed {seed}: {what} for {phi}");
    let (md, nb, nv, len) = (phi.qdepth(), phi.nblock(), phi.nbvar(), phi.length());
    for q in [Quantifier::Exists, Quantifier::Forall] {
        let (out, neg) = prenex_with_copies(q, phi, &mut FreshGen::for_formula(phi));
        ensure(out.is_prenex(), || fail("not prenex"))?;
        ensure(out.qdepth() == md, || fail("depth changed"))?;
        ensure(
            neg.len() + out.length() <= md + 7 * nb + 5 * nv + len,
            || fail("weighted length bound"),
        )?;
        ensure(out.length() <= 9 * len, || fail("9x length bound"))?;
        ensure(
            out.length_counting_negations() <= 9 * phi.length_counting_negations(),
            || fail("9x bound with negations counted"),
        )?;
        let closed = Formula::quant(q, neg.clone(), out.clone());
        let sound = oracle
            .equivalent(phi, &closed)
            .map_err(|e| fail(&e.to_string()))?;
        ensure(sound, || {
            fail("closing the negative copies is not equivalent")
        })?;
        let same = match q {
            Quantifier::Exists => oracle.equisatisfiable(phi, &out),
            Quantifier::Forall => oracle.equivalid(phi, &out),
        }
        .map_err(|e| fail(&e.to_string()))?;
        ensure(same, || fail(&format!("{q:?} verdict differs")))?;
    }
    let mc = prenex_mc(phi, &mut FreshGen::for_formula(phi));
    ensure(mc.qdepth() == md, || fail("mc depth changed"))?;
    ensure(mc.free_vars() == phi.free_vars(), || {
        fail("mc free variables")
    })?;
    ensure(
        oracle
            .equivalent(phi, &mc)
            .map_err(|e| fail(&e.to_string()))?,
        || fail("mc not equivalent"),
    )?;
    Ok(())
}

fn theorem_suite() -> Outcome {
    let n = 10_000u64;
    let failures: Vec<String> = (0..n)
        .into_par_iter()
        .filter_map(|seed| theorem_instance(seed).err())
        .collect();
    match failures.first() {
        None => Ok(format!("{n} formulas, both quantifiers and mc")),
        Some(first) => Err(format!("{} failures; first: {first}", failures.len())),
    }
}

// Small random formulas over a fixed pool, for the lemma checks.
fn small(rng: &mut ChaCha8Rng, pool: &[&str], len: usize, depth: usize) -> Formula {
    if len < 3 {
        let v = pool.choose(rng).unwrap();
        let leaf = Formula::var(v);
        return if rng.gen_bool(0.2) {
            Formula::not(leaf)
        } else {
            leaf
        };
    }
    if depth > 0 && rng.gen_bool(0.3) {
        let v = pool.choose(rng).unwrap();
        let body = small(rng, pool, len - 2, depth - 1);
        return if rng.gen() {
            Formula::exists([*v], body)
        } else {
            Formula::forall([*v], body)
        };
    }
    let op = [Op::And, Op::Or, Op::Iff, Op::Xor, Op::Implies]
        .choose(rng)
        .unwrap()
        .clone();
    let l = rng.gen_range(1..len - 1);
    let a = small(rng, pool, l, depth);
    let b = small(rng, pool, len - 1 - l, depth);
    Formula::app(op, vec![a, b])
}

fn sample(
    rng: &mut ChaCha8Rng,
    pool: &[&str],
    lens: std::ops::Range<usize>,
    depth: usize,
) -> Formula {
    let len = rng.gen_range(lens);
    small(rng, pool, len, depth)
}

fn quantifier(rng: &mut ChaCha8Rng) -> Quantifier {
    if rng.gen() {
        Quantifier::Exists
    } else {
        Quantifier::Forall
    }
}

const POOL: [&str; 4] = ["a", "b", "x", "y"];

fn lemma_extraction(rng: &mut ChaCha8Rng, o: &Oracle) -> Result<bool, String> {
    let p = Var::new("p");
    let psi0 = sample(rng, &POOL, 1..9, 2);
    let op = [Op::And, Op::Or, Op::Iff, Op::Xor]
        .choose(rng)
        .unwrap()
        .clone();
    let psi = Formula::app(op, vec![Formula::Var(p.clone()), psi0]);
    let phi = sample(rng, &POOL, 1..9, 2);
    let q = quantifier(rng);
    let k = rng.gen_range(1..=2);
    let block: Block = POOL.choose_multiple(rng, k).map(|n| Var::new(n)).collect();
    let phi_vars = phi.vars();
    let outer: Block = psi
        .vars()
        .into_iter()
        .filter(|v| *v != p && !phi_vars.contains(v) && rng.gen())
        .collect();
    let quantified = Formula::quant(q, block.clone(), phi.clone());
    let lhs = Formula::quant(
        Quantifier::Exists,
        outer.clone(),
        substitute(&psi, &Substitution::single(p.clone(), quantified))
            .map_err(|e| e.to_string())?,
    );
    let mut gen = FreshGen::new();
    let rhs = extract_quantifier(&psi, &p, q, &block, &phi, &outer, &mut gen)
        .map_err(|e| e.to_string())?;
    o.equivalent(&lhs, &rhs).map_err(|e| e.to_string())
}

fn lemma_step(rng: &mut ChaCha8Rng, o: &Oracle) -> Result<bool, String> {
    let phi = sample(rng, &POOL, 3..16, 3);
    let q = quantifier(rng);
    let step = step_transform(q, &phi, &mut FreshGen::for_formula(&phi));
    let rebuilt = Formula::quant(
        q,
        step.neg.clone(),
        Formula::quant(q.dual(), step.pos.clone(), step.psi.clone()),
    );
    let equivalent = o.equivalent(&phi, &rebuilt).map_err(|e| e.to_string())?;
    Ok(equivalent)
}

fn lemma_weighted(rng: &mut ChaCha8Rng) -> bool {
    let phi = sample(rng, &POOL, 1..24, 4);
    let weight = |f: &Formula| f.length() + 3 * f.nbvar() + 6 * f.nblock();
    let q = quantifier(rng);
    let step = step_transform(q, &phi, &mut FreshGen::for_formula(&phi));
    let depth_ok = step.psi.qdepth() == phi.qdepth().saturating_sub(1);
    let counts_ok = step.neg.len() == phi.nbvar() - step.psi.nbvar()
        && step.pos.len() == step.neg.len() + phi.nblock() - step.psi.nblock();
    weight(&step.psi) <= weight(&phi) && depth_ok && counts_ok
}

fn fact_shannon(rng: &mut ChaCha8Rng, o: &Oracle) -> Result<Option<bool>, String> {
    let p = Var::new("p");
    let phi = sample(rng, &["p", "a", "x"], 1..12, 2);
    let psi = sample(rng, &["a", "b", "x"], 1..8, 1);
    let Ok(lhs) = substitute(&phi, &Substitution::single(p.clone(), psi.clone())) else {
        return Ok(None);
    };
    let at =
        |c: bool| substitute(&phi, &Substitution::single(p.clone(), Formula::constant(c))).unwrap();
    let rhs = Formula::or(
        Formula::and(at(true), psi.clone()),
        Formula::and(at(false), Formula::not(psi)),
    );
    o.equivalent(&lhs, &rhs)
        .map(Some)
        .map_err(|e| e.to_string())
}

fn fact_abbreviation(rng: &mut ChaCha8Rng, o: &Oracle) -> Result<Option<bool>, String> {
    let p = Var::new("p");
    let phi = sample(rng, &["p", "a", "x"], 1..12, 2);
    let psi = sample(rng, &["a", "b", "x"], 1..8, 1);
    let Ok(lhs) = substitute(&phi, &Substitution::single(p.clone(), psi.clone())) else {
        return Ok(None);
    };
    let rhs = Formula::exists(
        [p.clone()],
        Formula::and(Formula::iff(Formula::Var(p), psi), phi),
    );
    o.equivalent(&lhs, &rhs)
        .map(Some)
        .map_err(|e| e.to_string())
}

fn fact_composition(rng: &mut ChaCha8Rng, o: &Oracle) -> Result<Option<bool>, String> {
    let phi = sample(rng, &["p", "q", "a", "x"], 1..12, 2);
    let sigma_image = sample(rng, &["a", "b", "x"], 1..6, 1);
    let psi = sample(rng, &["a", "q", "x"], 1..6, 1);
    let sigma = Substitution::single(Var::new("q"), sigma_image.clone());
    let mut both = sigma.clone();
    both.insert(Var::new("p"), psi.clone());
    let Ok(lhs) = substitute(&phi, &both) else {
        return Ok(None);
    };
    let Ok(mid) = substitute(&phi, &sigma) else {
        return Ok(None);
    };
    let Ok(rhs) = substitute(&mid, &Substitution::single(Var::new("p"), psi)) else {
        return Ok(None);
    };
    o.equivalent(&lhs, &rhs)
        .map(Some)
        .map_err(|e| e.to_string())
}

fn fact_fresh_copies(rng: &mut ChaCha8Rng, o: &Oracle) -> Result<bool, String> {
    let phi = sample(rng, &POOL, 1..12, 2);
    let k = rng.gen_range(1..=2);
    let block: Vec<Var> = POOL.choose_multiple(rng, k).map(|n| Var::new(n)).collect();
    let copies: Vec<Var> = block
        .iter()
        .map(|x| Var::new(&format!("{x}_neg")))
        .collect();
    let lhs = Formula::forall(block.clone(), phi.clone());
    let agree = Formula::conj(
        block
            .iter()
            .zip(&copies)
            .map(|(x, c)| Formula::iff(Formula::Var(x.clone()), Formula::Var(c.clone()))),
    );
    let rhs = Formula::forall(copies, Formula::exists(block, Formula::and(phi, agree)));
    o.equivalent(&lhs, &rhs).map_err(|e| e.to_string())
}

fn lemma_suite() -> Outcome {
    const N: usize = 1_000;
    let o = diagram(OperatorTable::new());
    let mut report = Vec::new();
    type Check = fn(&mut ChaCha8Rng, &Oracle) -> Result<Option<bool>, String>;
    let checks: Vec<(&str, Check)> = vec![
        ("extraction", |r, o| lemma_extraction(r, o).map(Some)),
        ("step equivalence", |r, o| lemma_step(r, o).map(Some)),
        ("weighted length", |r, _| Ok(Some(lemma_weighted(r)))),
        ("shannon", fact_shannon),
        ("abbreviation", fact_abbreviation),
        ("composition", fact_composition),
        ("fresh copies", |r, o| fact_fresh_copies(r, o).map(Some)),
    ];
    for (name, check) in checks {
        let mut rng = ChaCha8Rng::seed_from_u64(name.len() as u64 * 7919);
        let (mut ok, mut attempts) = (0, 0);
        while ok < N {
            attempts += 1;
            if attempts > 50 * N {
                return Err(format!("{name}: too few admissible instances"));
            }
            match check(&mut rng, &o) {
                Ok(Some(true)) => ok += 1,
                Ok(None) => {}
                Ok(Some(false)) => {
                    return Err(format!("{name}: counterexample at attempt {attempts}"))
                }
                Err(e) => return Err(format!("{name}: {e}")),
            }
        }
        report.push(name);
    }
    Ok(format!("{N} instances each: {}", report.join(", ")))
}

/// Every formula of length `len` over `p`, `q` with `¬`, `∧`, `⊕` and
/// single-variable blocks, without double negation.
fn exhaustive(max_len: usize) -> Vec<Formula> {
    let vars = [Formula::var("p"), Formula::var("q")];
    let mut all: BTreeMap<usize, Vec<Formula>> = BTreeMap::new();
    let with_negations = |base: Vec<Formula>| {
        let negated: Vec<Formula> = base.iter().cloned().map(Formula::not).collect();
        base.into_iter().chain(negated).collect::<Vec<_>>()
    };
    all.insert(1, with_negations(vars.to_vec()));
    for len in (3..=max_len).step_by(2) {
        let mut base = Vec::new();
        for l in (1..len - 1).step_by(2) {
            let r = len - 1 - l;
            for a in &all[&l] {
                for b in &all[&r] {
                    base.push(Formula::and(a.clone(), b.clone()));
                    base.push(Formula::xor(a.clone(), b.clone()));
                }
            }
        }
        for body in &all[&(len - 2)] {
            for v in ["p", "q"] {
                base.push(Formula::exists([v], body.clone()));
                base.push(Formula::forall([v], body.clone()));
            }
        }
        all.insert(len, with_negations(base));
    }
    all.into_values().flatten().collect()
}

fn exhaustive_suite() -> Outcome {
    let formulas = exhaustive(7);
    let ops = OperatorTable::new();
    let o = Oracle::new(ops.clone()).with_engine(Engine::Enumerate);
    let pq: BTreeSet<Var> = [Var::new("p"), Var::new("q")].into_iter().collect();
    let valuations = all_valuations(&pq);
    let failures: Vec<String> = formulas
        .par_iter()
        .filter_map(|phi| {
            let mc = prenex_mc(phi, &mut FreshGen::for_formula(phi));
            if !o.equivalent(phi, &mc).unwrap() {
                return Some(format!("mc not equivalent: {phi}"));
            }
            for v in &valuations {
                if evaluate_via_mc(&ops, v, phi).unwrap() != evaluate(&ops, v, phi).unwrap() {
                    return Some(format!("via mc differs on {phi} at {v}"));
                }
            }
            None
        })
        .collect();
    match failures.first() {
        None => Ok(format!("{} formulas", formulas.len())),
        Some(first) => Err(format!("{} failures; first: {first}", failures.len())),
    }
}

fn blowup_contrast() -> Outcome {
    let mut row = Vec::new();
    for k in 1..=12 {
        let phi = nested_biconditional(k);
        let naive = naive_prenex(&phi, &mut FreshGen::new()).map_err(|e| format!("k={k}: {e}"))?;
        let tr = prenex(Quantifier::Exists, &phi, &mut FreshGen::new());
        ensure(naive.length() >= 1 << k, || {
            format!("k={k}: naive length {} below 2^k", naive.length())
        })?;
        ensure(tr.length() <= 9 * phi.length(), || {
            format!("k={k}: tr length {} above 9*{}", tr.length(), phi.length())
        })?;
        row.push(format!("{}/{}", naive.length(), tr.length()));
    }
    Ok(format!("naive/tr lengths k=1..12: {}", row.join(" ")))
}

fn flat_encoding_witness() -> Outcome {
    let original = f("exists z . (exists x . (x <-> z) & ~x) <-> (exists y . (y <-> z) & y)");
    let flat =
        f("exists z x y p q . (p <-> (x <-> z) & ~x) & (q <-> ((y <-> z) <-> y)) & (p <-> q)");
    let o = Oracle::new(OperatorTable::new()).with_engine(Engine::Enumerate);
    let (a, b) = (
        o.satisfiable(&original).unwrap(),
        o.satisfiable(&flat).unwrap(),
    );
    ensure(a != b, || format!("both verdicts are {a}"))?;
    Ok(format!(
        "original satisfiable={a}, flat encoding satisfiable={b}"
    ))
}

fn qdimacs_consistent(text: &str) -> Result<(), String> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().ok_or("empty")?.split_whitespace().collect();
    let (vars, clauses): (i64, usize) = match header.as_slice() {
        ["p", "cnf", v, c] => (v.parse().unwrap(), c.parse().unwrap()),
        _ => return Err(format!("bad header {header:?}")),
    };
    let mut quantified = BTreeSet::new();
    let mut body = 0;
    for line in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let (lits, is_prefix) = match toks.first() {
            Some(&"e") | Some(&"a") => (&toks[1..], true),
            _ => (&toks[..], false),
        };
        ensure(lits.last() == Some(&"0"), || {
            format!("unterminated line {line}")
        })?;
        for l in &lits[..lits.len() - 1] {
            let l: i64 = l.parse().map_err(|_| format!("bad literal in {line}"))?;
            ensure(l != 0 && l.abs() <= vars, || {
                format!("literal {l} out of range")
            })?;
            if is_prefix {
                ensure(quantified.insert(l), || format!("{l} quantified twice"))?;
            }
        }
        if !is_prefix {
            body += 1;
        }
    }
    ensure(body == clauses, || {
        format!("header says {clauses} clauses, body has {body}")
    })
}

fn round_trips() -> Outcome {
    let internal = ParseOptions {
        allow_internal_names: true,
    };
    let failures: Vec<String> = (0..10_000u64)
        .into_par_iter()
        .filter_map(|seed| {
            let problem = Generator::seeded(GenConfig::default(), seed).problem();
            let text = qprenex::print_problem(&problem);
            match parse(&text) {
                Ok(back) if back == problem => {}
                Ok(_) => return Some(format!("seed {seed}: print/parse mismatch for {text}")),
                Err(e) => return Some(format!("seed {seed}: {e} in {text}")),
            }
            let phi = &problem.formula;
            let out = prenex(Quantifier::Exists, phi, &mut FreshGen::for_formula(phi));
            let exported = prenex_problem_text(&qprenex::Problem {
                declarations: problem.declarations.clone(),
                formula: out.clone(),
            })
            .unwrap();
            match parse_with(&exported, internal) {
                Ok(back) if back.formula == out => {}
                Ok(_) => return Some(format!("seed {seed}: prenex text mismatch")),
                Err(e) => return Some(format!("seed {seed}: prenex text: {e}")),
            }
            let qd = to_qdimacs(&out, &problem.operators(), FreeVariables::Exists).unwrap();
            qdimacs_consistent(&qd.text)
                .err()
                .map(|e| format!("seed {seed}: qdimacs {e}"))
        })
        .collect();
    match failures.first() {
        None => Ok("10000 formulas: parse/print, prenex text, qdimacs counts".into()),
        Some(first) => Err(format!("{} failures; first: {first}", failures.len())),
    }
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("metric fixtures", metric_fixtures),
        ("quantifier under xor", quantifier_under_xor),
        ("nested blocks", nested_blocks),
        ("random property suite", theorem_suite),
        ("lemma and fact suite", lemma_suite),
        ("exhaustive small formulas", exhaustive_suite),
        ("blowup contrast", blowup_contrast),
        ("unsound flat encoding", flat_encoding_witness),
        ("round trips", round_trips),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({detail}) [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
