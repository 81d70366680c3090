use std::collections::BTreeMap;

use qprenex::export::{to_qcir, to_qdimacs, FreeVariables};
use qprenex::gen::{GenConfig, Generator};
use qprenex::transform::prenex;
use qprenex::{
    substitute, Formula, FreshGen, OperatorTable, Oracle, Quantifier, Substitution, Var,
};

fn var(i: i64) -> Formula {
    let v = Formula::var(&format!("v{}", i.abs()));
    if i < 0 {
        Formula::not(v)
    } else {
        v
    }
}

fn numbers(list: &str) -> Vec<i64> {
    list.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().unwrap())
        .collect()
}

fn quantify(blocks: Vec<(Quantifier, Vec<i64>)>, matrix: Formula) -> Formula {
    blocks.into_iter().rev().fold(matrix, |body, (q, vars)| {
        let block = vars.iter().map(|i| Var::new(&format!("v{i}"))).collect();
        Formula::quant(q, block, body)
    })
}

fn read_qdimacs(text: &str) -> Formula {
    let mut blocks = Vec::new();
    let mut clauses = Vec::new();
    for line in text.lines().skip(1) {
        let mut lits = numbers(line.trim_start_matches(['e', 'a']));
        assert_eq!(lits.pop(), Some(0));
        match line.as_bytes()[0] {
            b'e' => blocks.push((Quantifier::Exists, lits)),
            b'a' => blocks.push((Quantifier::Forall, lits)),
            _ => clauses.push(
                lits.into_iter()
                    .map(var)
                    .reduce(Formula::or)
                    .unwrap_or_else(Formula::bot),
            ),
        }
    }
    quantify(blocks, Formula::conj(clauses))
}

fn read_qcir(text: &str) -> Formula {
    let mut blocks = Vec::new();
    let mut gates: BTreeMap<i64, Formula> = BTreeMap::new();
    let mut output = 0;
    let lit = |i: i64, gates: &BTreeMap<i64, Formula>| {
        let base = gates.get(&i.abs()).cloned().unwrap_or_else(|| var(i.abs()));
        if i < 0 {
            Formula::not(base)
        } else {
            base
        }
    };
    for line in text.lines().skip(1) {
        let (head, args) = line.split_once('(').unwrap();
        let args = numbers(args.trim_end_matches(')'));
        match head.trim() {
            "exists" => blocks.push((Quantifier::Exists, args)),
            "forall" => blocks.push((Quantifier::Forall, args)),
            "free" => {}
            "output" => output = args[0],
            def => {
                let (g, kind) = def.split_once(" = ").unwrap();
                let ins: Vec<Formula> = args.iter().map(|&i| lit(i, &gates)).collect();
                let f = match kind {
                    "and" => ins
                        .into_iter()
                        .reduce(Formula::and)
                        .unwrap_or_else(Formula::top),
                    "or" => ins
                        .into_iter()
                        .reduce(Formula::or)
                        .unwrap_or_else(Formula::bot),
                    "xor" => ins.into_iter().reduce(Formula::xor).unwrap(),
                    other => panic!("unexpected gate {other}"),
                };
                gates.insert(g.parse().unwrap(), f);
            }
        }
    }
    quantify(blocks, lit(output, &gates))
}

/// `phi` with its free variables bound by `q`.
fn closed(phi: &Formula, q: Quantifier) -> Formula {
    let free: Vec<Var> = phi.free_vars().into_iter().collect();
    Formula::quant(q, free.into_iter().collect(), phi.clone())
}

#[test]
fn solver_formats_decide_like_the_source() {
    let config = GenConfig {
        vars: 5,
        max_depth: 3,
        max_len: 24,
        ..GenConfig::default()
    };
    for seed in 0..300 {
        let problem = Generator::seeded(config.clone(), seed).problem();
        let ops = problem.operators();
        let phi = &problem.formula;
        let oracle = Oracle::new(ops.clone());
        let plain = Oracle::new(OperatorTable::new());
        for (q, free) in [
            (Quantifier::Exists, FreeVariables::Exists),
            (Quantifier::Forall, FreeVariables::Forall),
        ] {
            let out = prenex(q, phi, &mut FreshGen::for_formula(phi));
            let expected = oracle
                .evaluate(&Default::default(), &closed(&out, q))
                .unwrap();

            let qd = to_qdimacs(&out, &ops, free).unwrap();
            let cnf = read_qdimacs(&qd.text);
            assert!(cnf.free_vars().is_empty(), "seed {seed}");
            assert_eq!(
                plain.evaluate(&Default::default(), &cnf).unwrap(),
                expected,
                "seed {seed}: qdimacs\n{}",
                qd.text
            );

            let qc = to_qcir(&out, &ops, free).unwrap();
            let circuit = read_qcir(&qc.text);
            assert!(circuit.free_vars().is_empty(), "seed {seed}");
            assert_eq!(
                plain.evaluate(&Default::default(), &circuit).unwrap(),
                expected,
                "seed {seed}: qcir\n{}",
                qc.text
            );
        }
    }
}

#[test]
fn free_qcir_is_equivalent_after_renaming() {
    for seed in 0..200 {
        let problem = Generator::seeded(GenConfig::default(), seed).problem();
        let ops = problem.operators();
        let phi = &problem.formula;
        let out = prenex(Quantifier::Exists, phi, &mut FreshGen::for_formula(phi));
        let qc = to_qcir(&out, &ops, FreeVariables::Free).unwrap();
        // Free variables are numbered first, in sorted order.
        let back: Substitution = out
            .free_vars()
            .into_iter()
            .enumerate()
            .map(|(i, v)| (Var::new(&format!("v{}", i + 1)), Formula::Var(v)))
            .collect();
        let circuit = substitute(&read_qcir(&qc.text), &back).unwrap();
        let oracle = Oracle::new(ops).with_cap(64);
        assert!(
            oracle.equivalent(&out, &circuit).unwrap(),
            "seed {seed}\n{}",
            qc.text
        );
    }
}
