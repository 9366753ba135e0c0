use std::time::Instant;

use rayon::prelude::*;

use super::{formula_corpus, merge, params, Certificate, CorpusSpec, Report, Trial, VerifyError};
use crate::cnf::{sat_solve, serialize_dimacs, CnfFormula};
use crate::graph::{serialize_edge_list, Partition};
use crate::reductions::{Layout, Reduction, ReductionArtifact};
use crate::solvers::{exact_partition_target, Answer, Budget};

fn certificate(trial: usize, kind: &str, red: Reduction, f: &CnfFormula) -> Certificate {
    Certificate {
        trial,
        kind: kind.into(),
        reduction: Some(red.to_string()),
        formula: Some(serialize_dimacs(f)),
        ..Certificate::default()
    }
}

fn with_graph(mut c: Certificate, art: &ReductionArtifact, p: Option<&Partition>) -> Certificate {
    c.graph = Some(serialize_edge_list(&art.graph));
    c.target = Some(art.target);
    c.verdicts.insert("graph_matches".into(), "true".into());
    if let Some(p) = p {
        c.partition = Some(p.parts().to_vec());
        c.verdicts.insert("partition_valid".into(), art.target.holds(&art.graph, p).to_string());
    }
    c
}

/// Forward witness from a satisfying assignment, which must pass the
/// target, and its round trip back to an assignment.
fn forward_checks(trial: usize, red: Reduction, f: &CnfFormula, art: &ReductionArtifact, t: &mut Trial) -> Result<(), VerifyError> {
    let Some(a) = sat_solve(f)? else { return Ok(()) };
    let p = art
        .witness_forward_source(&a)
        .map_err(|e| VerifyError::Internal(format!("{red}, trial {trial}: forward witness failed: {e}")))?;
    if !art.target.holds(&art.graph, &p) {
        return Err(VerifyError::Internal(format!("{red}, trial {trial}: forward witness violates the target")));
    }
    t.counters.push(("forward_checked", 1));
    let round = art.witness_backward(&p);
    let exact_inverse = matches!(art.layout, Layout::Ring { .. });
    let ok = match &round {
        Ok(b) if exact_inverse => {
            let expected = art.witness_forward(b).map(|q| q == p).unwrap_or(false);
            expected && art.formula.is_satisfied_by(b)
        }
        Ok(b) => art.formula.is_satisfied_by(b),
        Err(_) => false,
    };
    if ok {
        t.counters.push(("round_trips", 1));
    } else {
        let mut c = with_graph(certificate(trial, "round_trip", red, f), art, Some(&p));
        c.verdicts.insert("sat".into(), "true".into());
        c.verdicts.insert("backward".into(), round.map_or_else(|e| e.to_string(), |_| "wrong assignment".into()));
        t.anomalies.push(c);
    }
    Ok(())
}

fn run_trial(trial: usize, red: Reduction, f: &CnfFormula, budget: Budget) -> Result<Trial, VerifyError> {
    let sat = sat_solve(f)?.is_some();
    let art = match red.build_from_source(f) {
        Ok(art) => art,
        Err(e) => {
            let mut c = certificate(trial, "build_error", red, f);
            c.verdicts.insert("sat".into(), sat.to_string());
            c.verdicts.insert("build".into(), format!("error: {e}"));
            return Ok(Trial::disagree(c));
        }
    };
    let mut t = Trial::default();
    t.counters.push((if sat { "sat" } else { "unsat" }, 1));
    forward_checks(trial, red, f, &art, &mut t)?;
    let out = exact_partition_target(&art.graph, art.target, budget);
    t.counters.push(("exact_nodes", out.stats.nodes));
    let exists = match out.answer {
        Answer::Unknown => return Ok(Trial { verdict: None, ..t }),
        Answer::Yes => true,
        Answer::No => false,
    };
    if let Some(p) = &out.witness {
        match art.witness_backward(p) {
            Ok(_) => t.counters.push(("solver_witness_read", 1)),
            Err(e) => {
                let mut c = with_graph(certificate(trial, "backward", red, f), &art, Some(p));
                c.verdicts.insert("sat".into(), sat.to_string());
                c.verdicts.insert("backward".into(), e.to_string());
                t.anomalies.push(c);
            }
        }
    }
    if exists == sat {
        t.verdict = Some(true);
    } else {
        let mut c = with_graph(certificate(trial, "decision", red, f), &art, out.witness.as_ref());
        c.verdicts.insert("sat".into(), sat.to_string());
        c.verdicts.insert("exists_partition".into(), exists.to_string());
        t.verdict = Some(false);
        t.disagreement = Some(c);
    }
    Ok(t)
}

/// Compares satisfiability of each corpus formula with the existence of a
/// target partition in the constructed graph, decided by exact search.
pub fn verify_reduction(red: Reduction, corpus: &CorpusSpec, budget: Budget) -> Result<Report, VerifyError> {
    let start = Instant::now();
    let formulas = formula_corpus(corpus)?;
    let mut report = Report::new(
        format!("verify/{}", red.name()),
        params([
            ("reduction", red.to_string()),
            ("corpus", serde_json::to_string(corpus)?),
            ("max_nodes", budget.max_nodes.to_string()),
            ("time_limit_ms", budget.time_limit.map_or("none".into(), |d| d.as_millis().to_string())),
        ]),
    );
    let trials: Vec<Trial> = formulas
        .par_iter()
        .enumerate()
        .map(|(i, f)| run_trial(i, red, f, budget))
        .collect::<Result<_, _>>()?;
    merge(&mut report, trials);
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}
