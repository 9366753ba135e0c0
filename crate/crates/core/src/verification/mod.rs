//! Empirical checking: reduction equivalence campaigns, small-graph claim
//! checks and replayable JSON reports.

mod campaigns;
mod claims;
mod corpus;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use campaigns::verify_reduction;
pub use claims::{check_claim, poly_vs_exact, Claim, ClaimOptions, PolyAlgo};
pub use corpus::{
    enumerate_graphs, exhaustive_formulas, formula_corpus, formulas_exact, random_formula, random_graph, random_graph_exact_min_degree,
    random_graph_min_degree, trial_rng, ClauseShape, CorpusSpec, ENUMERATE_MAX_N,
};

use crate::cnf::{parse_dimacs, sat_solve, CnfError};
use crate::graph::{parse_graph, Graph, GraphError, Partition, Target};
use crate::reductions::{Reduction, ReductionError};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("out of range: {0}")]
    Range(String),
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("report JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Everything needed to re-check one trial by hand: the inputs as text
/// and the verdicts computed during the campaign.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub trial: usize,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claim: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Target>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<Vec<bool>>,
    pub verdicts: BTreeMap<String, String>,
}

impl Certificate {
    fn graph(&self) -> Result<Option<Graph>, VerifyError> {
        Ok(self.graph.as_deref().map(parse_graph).transpose()?)
    }

    /// Verdicts that can be recomputed from the stored texts alone:
    /// `sat`, `partition_valid`, `graph_matches` (rebuilding the
    /// reduction) and `assignment_satisfies` (against the prepared formula).
    pub fn recompute(&self) -> Result<BTreeMap<String, String>, VerifyError> {
        let mut out = BTreeMap::new();
        let formula = self.formula.as_deref().map(parse_dimacs).transpose()?;
        let graph = self.graph()?;
        if let Some(f) = &formula {
            out.insert("sat".into(), sat_solve(f)?.is_some().to_string());
        }
        if let (Some(g), Some(t), Some(p)) = (&graph, &self.target, &self.partition) {
            out.insert("partition_valid".into(), t.holds(g, &Partition::new(p.clone())).to_string());
        }
        if let Some(g) = &graph {
            out.extend(claims::recompute_claim(self, g)?);
        }
        if let (Some(name), Some(f)) = (&self.reduction, &formula) {
            let red: Reduction = name.parse()?;
            match red.build_from_source(f) {
                Ok(art) => {
                    if let Some(g) = &graph {
                        out.insert("graph_matches".into(), (&art.graph == g).to_string());
                    }
                    if let Some(a) = &self.assignment {
                        let a = crate::cnf::Assignment::new(a.clone());
                        let ok = a.len() == art.formula.num_vars() && art.formula.is_satisfied_by(&a);
                        out.insert("assignment_satisfies".into(), ok.to_string());
                    }
                }
                Err(e) => {
                    out.insert("build".into(), format!("error: {e}"));
                }
            }
        }
        Ok(out)
    }

    /// Keys whose recomputed value differs from the stored one.
    pub fn replay(&self) -> Result<Vec<String>, VerifyError> {
        let fresh = self.recompute()?;
        Ok(fresh
            .iter()
            .filter(|(k, v)| self.verdicts.get(*k).is_some_and(|old| old != *v))
            .map(|(k, v)| format!("{k}: stored {}, recomputed {v}", self.verdicts[k]))
            .collect())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub campaign: String,
    pub params: BTreeMap<String, String>,
    pub trials: usize,
    pub agreements: usize,
    pub disagreements: Vec<Certificate>,
    /// Trials where the exact referee ran out of budget.
    pub exhausted: Vec<usize>,
    /// Findings that are not decision disagreements, such as a solver
    /// witness from which no satisfying assignment can be read.
    pub anomalies: Vec<Certificate>,
    pub counters: BTreeMap<String, u64>,
    /// Frequency tables, e.g. answers per vertex count.
    pub tables: BTreeMap<String, BTreeMap<String, u64>>,
    pub elapsed_ms: u64,
}

impl Report {
    fn new(campaign: impl Into<String>, params: BTreeMap<String, String>) -> Self {
        Report { campaign: campaign.into(), params, ..Report::default() }
    }

    pub fn is_consistent(&self) -> bool {
        self.agreements + self.disagreements.len() + self.exhausted.len() == self.trials
    }

    /// Agreements over decided trials; 1 when nothing was decided.
    pub fn agreement_rate(&self) -> f64 {
        let decided = self.agreements + self.disagreements.len();
        if decided == 0 {
            1.0
        } else {
            self.agreements as f64 / decided as f64
        }
    }

    pub fn exhausted_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.exhausted.len() as f64 / self.trials as f64
        }
    }

    pub fn without_timing(&self) -> Report {
        Report { elapsed_ms: 0, ..self.clone() }
    }

    /// Replays every certificate; returns the mismatches found.
    pub fn replay(&self) -> Result<Vec<String>, VerifyError> {
        let mut out = Vec::new();
        for c in self.disagreements.iter().chain(&self.anomalies) {
            out.extend(c.replay()?.into_iter().map(|m| format!("trial {}: {m}", c.trial)));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Report, VerifyError> {
        Ok(serde_json::from_str(text)?)
    }

    fn bump(&mut self, key: &str, by: u64) {
        *self.counters.entry(key.to_string()).or_default() += by;
    }

    fn tally(&mut self, table: &str, key: impl Into<String>) {
        *self.tables.entry(table.to_string()).or_default().entry(key.into()).or_default() += 1;
    }
}

/// Outcome of one trial before merging.
#[derive(Debug, Default)]
struct Trial {
    verdict: Option<bool>,
    disagreement: Option<Certificate>,
    anomalies: Vec<Certificate>,
    counters: Vec<(&'static str, u64)>,
    tallies: Vec<(String, String)>,
}

impl Trial {
    fn agree() -> Self {
        Trial { verdict: Some(true), ..Trial::default() }
    }

    fn exhausted() -> Self {
        Trial::default()
    }

    fn disagree(c: Certificate) -> Self {
        Trial { verdict: Some(false), disagreement: Some(c), ..Trial::default() }
    }

    fn count(mut self, key: &'static str) -> Self {
        self.counters.push((key, 1));
        self
    }
}

fn merge(report: &mut Report, trials: Vec<Trial>) {
    let base = report.trials;
    report.trials += trials.len();
    for (i, t) in trials.into_iter().enumerate() {
        match (t.verdict, t.disagreement) {
            (Some(true), _) => report.agreements += 1,
            (Some(false), Some(c)) => report.disagreements.push(c),
            (Some(false), None) => unreachable!("a disagreement carries its certificate"),
            (None, _) => report.exhausted.push(base + i),
        }
        report.anomalies.extend(t.anomalies);
        for (k, v) in t.counters {
            report.bump(k, v);
        }
        for (table, key) in t.tallies {
            report.tally(&table, key);
        }
    }
}

fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
