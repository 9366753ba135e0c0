//! Acceptance suite: one PASS/FAIL line per criterion. Runs as a plain
//! binary (`harness = false`) so the lines always show up in the output.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use degpart::cnf::{
    parse_dimacs, pad_literal_occurrences, sat_solve, serialize_dimacs, transform_connect, transform_occurrence_bound,
    CnfFormula, OccurrenceBound,
};
use degpart::gadgets::{build_gadget, GadgetKind};
use degpart::graph::{parse_graph, serialize_edge_list, Graph, Target};
use degpart::reductions::prepare::for_ring;
use degpart::reductions::Reduction;
use degpart::ring::{build_ring, raw_cycle_splits, ring_theorem_oracle, structured_splits};
use degpart::solvers::{exact_partition_target, Answer, Budget};
use degpart::verification::{
    check_claim, enumerate_graphs, exhaustive_formulas, formula_corpus, formulas_exact, poly_vs_exact, random_graph,
    trial_rng, verify_reduction, Claim, ClaimOptions, CorpusSpec, PolyAlgo, Report,
};

struct Outcome {
    pass: bool,
    detail: String,
    /// Set when every failing part is a documented known failure.
    known: Option<&'static str>,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into(), known: None }
}

/// Builders that fail completeness for a documented reason. Their
/// campaigns still run and the criterion line still says FAIL.
const KNOWN_BUILDER_FAILURES: &[(&str, &str)] = &[(
    "23_mindeg3",
    "23_mindeg3 answers yes on unsatisfiable formulas: all switch vertices form a valid δ≥2 side",
)];

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed <= limit
}

fn c1_gadgets() -> Outcome {
    let mut bad = Vec::new();
    for k in 3..=10 {
        for kind in [GadgetKind::Xk2, GadgetKind::Zk, GadgetKind::Wk] {
            let g = build_gadget(kind, k).unwrap();
            if g.interior_degrees().iter().any(|&d| d != k) {
                bad.push(format!("{kind}{k}"));
            }
        }
    }
    let x31 = build_gadget(GadgetKind::X31, 3).unwrap();
    if x31.interior_degrees().iter().any(|&d| d != 3) {
        bad.push("X31".into());
    }
    let y41 = build_gadget(GadgetKind::Y41, 4).unwrap();
    let mut degs = y41.interior_degrees();
    degs.sort_unstable();
    if degs != [4, 4, 4, 4, 4, 4, 5] || y41.increment() != 1 {
        bad.push(format!("Y41 {degs:?}"));
    }
    outcome(bad.is_empty(), if bad.is_empty() { "all degrees exact".to_string() } else { format!("wrong: {bad:?}") })
}

fn c2_ring() -> Outcome {
    let mut formulas = exhaustive_formulas(2, 3).unwrap();
    let exhaustive = formulas.len();
    let mut spec = CorpusSpec::random(100, 3, 6, 2024);
    spec.min_vars = 3;
    formulas.extend(formula_corpus(&spec).unwrap());
    let results: Vec<(bool, Option<bool>)> = formulas
        .par_iter()
        .map(|f| {
            let padded = for_ring(f, 1, false).unwrap();
            let ring = build_ring(&padded).unwrap();
            let agree = ring_theorem_oracle(&ring).unwrap().is_some() == sat_solve(&padded).unwrap().is_some();
            let sets = (f.num_vars() <= 2).then(|| {
                let raw: BTreeSet<_> = raw_cycle_splits(&ring).unwrap().into_iter().map(|(s, _)| s).collect();
                raw == structured_splits(&ring)
            });
            (agree, sets)
        })
        .collect();
    let agree = results.iter().filter(|r| r.0).count();
    let sets: Vec<bool> = results.iter().filter_map(|r| r.1).collect();
    let sets_ok = sets.iter().filter(|&&b| b).count();
    outcome(
        agree == results.len() && sets_ok == sets.len(),
        format!(
            "oracle agreement {agree}/{} ({exhaustive} exhaustive + 100 seeded), raw = structured {sets_ok}/{}",
            results.len(),
            sets.len()
        ),
    )
}

fn all_builders() -> Vec<Reduction> {
    vec![
        Reduction::OneK { k: 3 },
        Reduction::OneK { k: 4 },
        Reduction::OneK { k: 5 },
        Reduction::OneK { k: 6 },
        Reduction::OneKMindeg { k: 4 },
        Reduction::OneKMindeg { k: 5 },
        Reduction::K1K2 { k1: 2, k2: 2 },
        Reduction::K1K2 { k1: 2, k2: 3 },
        Reduction::K1K2 { k1: 3, k2: 3 },
        Reduction::K1K2 { k1: 3, k2: 5 },
        Reduction::Aa { a: 3 },
        Reduction::Aa { a: 4 },
        Reduction::TwoThreeMindeg3,
        Reduction::Kk1 { k: 2 },
        Reduction::Kk1 { k: 3 },
        Reduction::TwoEcConn,
        Reduction::TwoEcTwoEc,
    ]
}

fn soundness_corpus() -> Vec<CnfFormula> {
    formula_corpus(&CorpusSpec::random(500, 6, 10, 31).satisfiable()).unwrap()
}

fn c3_soundness(corpus: &[CnfFormula]) -> Outcome {
    let mut failures = Vec::new();
    for red in all_builders() {
        let bad = corpus
            .par_iter()
            .filter(|f| {
                let art = red.build_from_source(f).unwrap();
                let a = sat_solve(f).unwrap().unwrap();
                !art.witness_forward_source(&a).is_ok_and(|p| art.target.holds(&art.graph, &p))
            })
            .count();
        if bad > 0 {
            failures.push(format!("{red}: {bad}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!("{} builders x {} satisfiable formulas; failures {failures:?}", all_builders().len(), corpus.len()),
    )
}

fn campaign_line(r: &Report) -> String {
    let sat = r.counters.get("sat").copied().unwrap_or(0);
    format!(
        "{} {}/{} agree ({} sat), {} exhausted, {} disagreements",
        r.params["reduction"],
        r.agreements,
        r.agreements + r.disagreements.len(),
        sat,
        r.exhausted.len(),
        r.disagreements.len()
    )
}

fn c4_completeness() -> Outcome {
    let budget = Budget { max_nodes: u64::MAX, time_limit: Some(Duration::from_secs(120)) };
    let mixed = CorpusSpec::random(100, 3, 4, 404);
    let exact3 = CorpusSpec::random(100, 3, 4, 405).exact3();
    let runs = [
        (Reduction::K1K2 { k1: 2, k2: 2 }, &mixed),
        (Reduction::K1K2 { k1: 2, k2: 3 }, &mixed),
        (Reduction::K1K2 { k1: 3, k2: 3 }, &mixed),
        (Reduction::Aa { a: 3 }, &mixed),
        (Reduction::TwoThreeMindeg3, &mixed),
        (Reduction::TwoEcConn, &mixed),
        (Reduction::TwoEcTwoEc, &mixed),
        (Reduction::OneK { k: 3 }, &exact3),
    ];
    let mut pass = true;
    let mut only_known = true;
    let mut known = None;
    let mut lines = Vec::new();
    for (red, spec) in runs {
        let r = verify_reduction(red, spec, budget).unwrap();
        let ok = r.is_consistent()
            && r.disagreements.is_empty()
            && r.exhausted_rate() < 0.05
            && r.replay().unwrap().is_empty();
        pass &= ok;
        if !ok {
            match KNOWN_BUILDER_FAILURES.iter().find(|(name, _)| *name == red.name()) {
                Some((_, why)) => known = Some(*why),
                None => only_known = false,
            }
        }
        lines.push(format!("{}{}", if ok { "" } else { "[fail] " }, campaign_line(&r)));
    }
    Outcome { pass, detail: lines.join("; "), known: if only_known { known } else { None } }
}

fn c5_one_k_mixed() -> Outcome {
    let r = verify_reduction(Reduction::OneK { k: 3 }, &CorpusSpec::random(60, 3, 4, 505), Budget::nodes(20_000_000))
        .unwrap();
    let replay = r.replay().unwrap();
    // All eight 3-clauses on three variables: unsatisfiable with no 2-clause
    // in the source, though normalization introduces some.
    let all_eight: Vec<Vec<i64>> =
        (0..8).map(|b| (1..=3).map(|v| if b >> (v - 1) & 1 == 1 { v } else { -v }).collect()).collect();
    let refs: Vec<&[i64]> = all_eight.iter().map(Vec::as_slice).collect();
    let full = CnfFormula::from_dimacs_clauses(3, &refs).unwrap();
    let art = Reduction::OneK { k: 3 }.build_from_source(&full).unwrap();
    let full_answer = exact_partition_target(&art.graph, art.target, Budget::nodes(20_000_000)).answer;
    outcome(
        r.is_consistent() && replay.is_empty() && full_answer != Answer::Unknown,
        format!(
            "informational: {}; {} witness read-off anomalies, certificates replay {}; all-eight-clauses formula (unsat) -> {full_answer}",
            campaign_line(&r),
            r.anomalies.len(),
            if replay.is_empty() { "clean" } else { "with mismatches" }
        ),
    )
}

fn c6_poly() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for algo in PolyAlgo::ALL {
        let r = poly_vs_exact(algo, 6, 1000, 12, 606).unwrap();
        pass &= r.disagreements.is_empty() && r.is_consistent();
        parts.push(format!("{} {}/{}", algo.name(), r.agreements, r.trials));
    }
    outcome(pass, parts.join(", "))
}

fn c7_tightness() -> Outcome {
    let mut pass = true;
    let mut complete_no = 0;
    for k1 in 1..=3 {
        for k2 in k1..=7 - k1 {
            let out = exact_partition_target(&Graph::complete(k1 + k2 + 1), Target::min_degree(k1, k2), Budget::default());
            if out.answer == Answer::No {
                complete_no += 1;
            } else {
                pass = false;
            }
        }
    }
    let mut parts = vec![format!("complete graphs no {complete_no}/12")];
    for (k1, k2) in [(1, 2), (2, 2), (2, 3)] {
        let opts = ClaimOptions { max_n: 14, samples: 200, seed: 707, budget: Budget::default() };
        let r = check_claim(Claim::StiebitzTightness { k1, k2 }, &opts).unwrap();
        let yes = r.counters.get("yes").copied().unwrap_or(0);
        pass &= r.disagreements.is_empty() && r.exhausted.is_empty() && yes == 200;
        parts.push(format!("({k1},{k2}) yes {yes}/200"));
    }
    outcome(pass, parts.join(", "))
}

fn c8_structure(corpus: &[CnfFormula]) -> Outcome {
    let mut bad: Vec<String> = Vec::new();
    let mut checked = 0usize;
    let expect_min = [
        (Reduction::OneKMindeg { k: 4 }, 3),
        (Reduction::OneKMindeg { k: 5 }, 4),
        (Reduction::OneKMindeg { k: 6 }, 5),
        (Reduction::Aa { a: 3 }, 4),
        (Reduction::TwoThreeMindeg3, 3),
        (Reduction::Kk1 { k: 2 }, 3),
        (Reduction::Kk1 { k: 3 }, 4),
        (Reduction::Kk1 { k: 4 }, 5),
    ];
    for f in corpus {
        for (red, d) in expect_min {
            let art = red.build_from_source(f).unwrap();
            if art.graph.min_degree().ok() != Some(d) || art.declared_min_degree != Some(d) {
                bad.push(format!("{red} min degree"));
            }
            checked += 1;
        }
        let p = for_ring(f, 1, false).unwrap();
        let occ: usize = p.literal_counts().iter().sum();
        let base = 8 * p.num_vars() + occ + 2 * p.num_clauses();
        let conn = Reduction::TwoEcConn.build_from_source(f).unwrap();
        let ec = Reduction::TwoEcTwoEc.build_from_source(f).unwrap();
        if conn.graph.n() != base || ec.graph.n() != base + 2 * p.num_clauses() + 2 {
            bad.push(format!("vertex count {} / {} vs {base}", conn.graph.n(), ec.graph.n()));
        }
        checked += 2;
    }
    let fig = degpart::cnf::figure_formula();
    let fig_counts =
        (Reduction::TwoEcConn.build_from_source(&fig).unwrap().graph.n(), Reduction::TwoEcTwoEc.build_from_source(&fig).unwrap().graph.n());
    if fig_counts != (52, 62) {
        bad.push(format!("figure formula counts {fig_counts:?}"));
    }
    bad.sort();
    bad.dedup();
    outcome(bad.is_empty(), format!("{checked} instance checks, figure formula {fig_counts:?}, problems {bad:?}"))
}

fn transform_ok(f: &CnfFormula) -> Result<(), String> {
    let sat = sat_solve(f).unwrap().is_some();
    let same = |g: &CnfFormula| sat_solve(g).unwrap().is_some() == sat;
    let c = transform_connect(f);
    if !same(&c) || !c.is_connected_instance() {
        return Err(format!("connect on {f}"));
    }
    let three = transform_occurrence_bound(f, OccurrenceBound::Three).unwrap();
    let lits = three.literal_counts();
    if !same(&three) || three.clauses_per_variable().iter().any(|&x| x > 3) || lits.iter().any(|&x| x > 2) {
        return Err(format!("occ3 on {f}"));
    }
    let five = transform_occurrence_bound(f, OccurrenceBound::Five).unwrap();
    let lits = five.literal_counts();
    let var_ok = lits.chunks(2).all(|c| c[0] + c[1] <= 5) && lits.iter().all(|&x| x <= 3);
    if !same(&five) || !var_ok || (f.is_connected_instance() && !five.is_connected_instance()) {
        return Err(format!("occ5 on {f}"));
    }
    for t in [1, 2] {
        let p = pad_literal_occurrences(f, t);
        if !same(&p) || p.min_literal_count() < t {
            return Err(format!("pad{t} on {f}"));
        }
    }
    Ok(())
}

fn c9_transforms() -> Outcome {
    let mut count = 0usize;
    let mut errors: Vec<String> = Vec::new();
    for n in 1..=4 {
        for m in 1..=4 {
            let (c, e): (usize, Vec<String>) = formulas_exact(n, m, 3)
                .par_bridge()
                .map(|f| (1usize, transform_ok(&f).err()))
                .fold(|| (0, Vec::new()), |(c, mut e), (k, x)| {
                    e.extend(x);
                    (c + k, e)
                })
                .reduce(|| (0, Vec::new()), |a, b| (a.0 + b.0, [a.1, b.1].concat()));
            count += c;
            errors.extend(e);
        }
    }
    let larger = formula_corpus(&CorpusSpec::random(200, 12, 30, 909)).unwrap();
    for f in &larger {
        if let Err(e) = transform_ok(f) {
            errors.push(e);
        }
    }
    errors.truncate(3);
    outcome(errors.is_empty(), format!("{count} exhaustive + {} seeded formulas; first errors {errors:?}", larger.len()))
}

fn c10_claims() -> Outcome {
    let ex = ClaimOptions { max_n: 6, ..ClaimOptions::default() };
    let conn = check_claim(Claim::Conn2EcCharacterization, &ex).unwrap();
    let two = check_claim(Claim::TwoCyclesCharacterization, &ex).unwrap();
    let dbl = check_claim(Claim::DoublingConverse { max_a: 2 }, &ex).unwrap();
    let boundary = check_claim(
        Claim::Boundary { k1: 2, k2: 3, delta: 4 },
        &ClaimOptions { max_n: 12, samples: 300, seed: 1010, budget: Budget::default() },
    )
    .unwrap();
    let replay_clean = [&conn, &two, &dbl, &boundary].iter().all(|r| r.is_consistent() && r.replay().unwrap().is_empty());
    let hard = two.disagreements.is_empty() && two.exhausted.is_empty();
    let table = boundary.tables.get("answers").cloned().unwrap_or_default();
    outcome(
        hard && replay_clean,
        format!(
            "two-cycles {}/{} (hard); conn-2ec {} disagreements of {}; doubling {} disagreements of {} ({} with δ > a); boundary(2,3,δ=4) {table:?}; replay {}",
            two.agreements,
            two.trials,
            conn.disagreements.len(),
            conn.trials,
            dbl.disagreements.len(),
            dbl.trials,
            dbl.counters.get("disagreements_with_min_degree_above_a").copied().unwrap_or(0),
            if replay_clean { "clean" } else { "MISMATCH" }
        ),
    )
}

fn noisy(text: &str) -> String {
    // Comments and irregular whitespace must not matter.
    let mut out = String::from("c generated\n\n");
    for line in text.lines() {
        out.push_str("  ");
        out.push_str(&line.split_whitespace().collect::<Vec<_>>().join("   "));
        out.push_str(" \n");
    }
    out
}

fn c11_round_trips() -> Outcome {
    let mut bad = 0usize;
    let mut graphs: Vec<Graph> = (1..=5).flat_map(|n| enumerate_graphs(n, None).unwrap()).collect();
    graphs.extend((0..200).map(|i| {
        let mut rng = trial_rng(1111, i);
        random_graph(&mut rng, 1 + i % 40, 0.2)
    }));
    for g in &graphs {
        let text = serialize_edge_list(g);
        let back = parse_graph(&text).unwrap();
        if &back != g || serialize_edge_list(&back) != text || parse_graph(&noisy(&text)).unwrap() != *g {
            bad += 1;
        }
    }
    let mut formulas = exhaustive_formulas(2, 3).unwrap();
    formulas.extend(formula_corpus(&CorpusSpec::random(200, 10, 20, 1112)).unwrap());
    for f in &formulas {
        let text = serialize_dimacs(f);
        let back = parse_dimacs(&text).unwrap();
        if &back != f || serialize_dimacs(&back) != text || parse_dimacs(&noisy(&text)).unwrap() != *f {
            bad += 1;
        }
    }
    let spec = CorpusSpec::random(20, 3, 4, 1113);
    let red = Reduction::K1K2 { k1: 2, k2: 3 };
    let a = verify_reduction(red, &spec, Budget::nodes(5_000_000)).unwrap();
    let b = verify_reduction(red, &spec, Budget::nodes(5_000_000)).unwrap();
    let opts = ClaimOptions { max_n: 10, samples: 40, seed: 1114, budget: Budget::default() };
    let c = check_claim(Claim::Boundary { k1: 2, k2: 3, delta: 4 }, &opts).unwrap();
    let d = check_claim(Claim::Boundary { k1: 2, k2: 3, delta: 4 }, &opts).unwrap();
    let json_stable = Report::from_json(&a.to_json()).unwrap() == a;
    let det = a.without_timing() == b.without_timing() && c.without_timing() == d.without_timing();
    outcome(
        bad == 0 && det && json_stable,
        format!(
            "{} graphs, {} formulas, {bad} unstable; reports deterministic: {det}, JSON round trip: {json_stable}",
            graphs.len(),
            formulas.len()
        ),
    )
}

fn main() -> ExitCode {
    let only: Option<BTreeSet<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let soundness = soundness_corpus();
    type Run<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: Vec<(usize, &str, Option<Duration>, Run)> = vec![
        (1, "gadget degrees", Some(Duration::from_secs(1)), Box::new(c1_gadgets)),
        (2, "ring theorem", Some(Duration::from_secs(60)), Box::new(c2_ring)),
        (3, "reduction soundness", Some(Duration::from_secs(300)), Box::new(|| c3_soundness(&soundness))),
        (4, "reduction completeness", None, Box::new(c4_completeness)),
        (5, "1k with size-2 clauses", None, Box::new(c5_one_k_mixed)),
        (6, "polynomial vs exact", Some(Duration::from_secs(600)), Box::new(c6_poly)),
        (7, "tightness", Some(Duration::from_secs(300)), Box::new(c7_tightness)),
        (8, "constructed structure", None, Box::new(|| c8_structure(&soundness))),
        (9, "transforms", Some(Duration::from_secs(120)), Box::new(c9_transforms)),
        (10, "claim campaigns", None, Box::new(c10_claims)),
        (11, "round trips and determinism", None, Box::new(c11_round_trips)),
    ];
    let mut unexpected = Vec::new();
    for (id, name, limit, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let timely = limit.is_none_or(|l| within(elapsed, l));
        let pass = out.pass && timely;
        println!(
            "criterion {id:>2} {:<4} {name} [{:.1}s{}]: {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.map_or(String::new(), |l| format!(" / {}s", l.as_secs())),
            out.detail
        );
        if !pass {
            match out.known.filter(|_| timely) {
                Some(why) => println!("             known failure: {why}"),
                None => unexpected.push(id),
            }
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
