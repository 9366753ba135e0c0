use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::corpus::{enumerate_graphs, random_graph, random_graph_exact_min_degree, random_graph_min_degree, trial_rng};
use super::{merge, params, Certificate, Report, Trial, VerifyError, ENUMERATE_MAX_N};
use crate::graph::{serialize_edge_list, Graph, PartProperty, Partition, Target};
use crate::solvers::{
    brute_force_partition, char_two_cycles, exact_partition_target, poly_11, poly_12, poly_1k_mindegk, poly_22_mindeg3,
    poly_conn_2ec, Answer, Budget, SolveOutcome,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "claim")]
pub enum Claim {
    /// Leaf-block criterion for (connected, 2-edge-connected).
    Conn2EcCharacterization,
    /// Disjoint-cycles criterion for (connected with cycle) twice.
    TwoCyclesCharacterization,
    /// G has a (δ≥a, δ≥a)-partition iff its double has a
    /// (δ≥a+1, δ≥a+1)-partition, for a = 1..=max_a.
    DoublingConverse { max_a: usize },
    /// K_{k1+k2+1} has no partition; every graph of minimum degree
    /// k1+k2+1 has one.
    StiebitzTightness { k1: usize, k2: usize },
    /// Frequency table of (k1, k2) answers on graphs of minimum degree
    /// exactly `delta`.
    Boundary { k1: usize, k2: usize, delta: usize },
}

impl Claim {
    pub const NAMES: [&'static str; 5] = [
        "conn_2ec_characterization",
        "two_cycles_characterization",
        "doubling_converse",
        "stiebitz_tightness",
        "boundary",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Claim::Conn2EcCharacterization => Self::NAMES[0],
            Claim::TwoCyclesCharacterization => Self::NAMES[1],
            Claim::DoublingConverse { .. } => Self::NAMES[2],
            Claim::StiebitzTightness { .. } => Self::NAMES[3],
            Claim::Boundary { .. } => Self::NAMES[4],
        }
    }

    fn exhaustive_by_default(&self) -> bool {
        matches!(self, Claim::Conn2EcCharacterization | Claim::TwoCyclesCharacterization | Claim::DoublingConverse { .. })
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Claim::DoublingConverse { max_a } => write!(f, "{}(a={max_a})", self.name()),
            Claim::StiebitzTightness { k1, k2 } => write!(f, "{}(k1={k1},k2={k2})", self.name()),
            Claim::Boundary { k1, k2, delta } => write!(f, "{}(k1={k1},k2={k2},delta={delta})", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

/// `name` or `name(key=value,...)`; missing keys take defaults
/// (a=2; k1=2, k2=2 for tightness; k1=2, k2=3, delta=4 for boundary).
impl FromStr for Claim {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || VerifyError::UnknownClaim(s.to_string());
        let (name, rest) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], &s[i + 1..s.len() - 1]),
            Some(_) => return Err(bad()),
            None => (s, ""),
        };
        let mut kv = BTreeMap::new();
        for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            kv.insert(k.trim().to_string(), v.trim().parse::<usize>().map_err(|_| bad())?);
        }
        let get = |k: &str, d: usize| kv.get(k).copied().unwrap_or(d);
        let claim = match name.trim() {
            "conn_2ec_characterization" => Claim::Conn2EcCharacterization,
            "two_cycles_characterization" => Claim::TwoCyclesCharacterization,
            "doubling_converse" => Claim::DoublingConverse { max_a: get("a", 2) },
            "stiebitz_tightness" => Claim::StiebitzTightness { k1: get("k1", 2), k2: get("k2", 2) },
            "boundary" => Claim::Boundary { k1: get("k1", 2), k2: get("k2", 3), delta: get("delta", 4) },
            _ => return Err(bad()),
        };
        Ok(claim)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClaimOptions {
    pub max_n: usize,
    /// Random graphs to draw; 0 means exhaustive where the claim allows it.
    pub samples: usize,
    pub seed: u64,
    pub budget: Budget,
}

impl Default for ClaimOptions {
    fn default() -> Self {
        ClaimOptions { max_n: 6, samples: 0, seed: 0, budget: Budget::default() }
    }
}

fn conn_2ec_target() -> Target {
    Target::new(PartProperty::Connected, PartProperty::TwoEdgeConnected)
}

fn two_cycles_target() -> Target {
    Target::new(PartProperty::ConnectedWithCycle, PartProperty::ConnectedWithCycle)
}

const REPLAY_MAX_N: usize = 16;

fn decided(out: &SolveOutcome) -> Option<bool> {
    match out.answer {
        Answer::Yes => Some(true),
        Answer::No => Some(false),
        Answer::Unknown => None,
    }
}

fn claim_certificate(trial: usize, kind: &str, claim: Claim, g: &Graph, target: Target, witness: Option<&Partition>) -> Certificate {
    let mut c = Certificate {
        trial,
        kind: kind.into(),
        claim: Some(claim.to_string()),
        graph: Some(serialize_edge_list(g)),
        target: Some(target),
        partition: witness.map(|p| p.parts().to_vec()),
        ..Certificate::default()
    };
    if let Some(p) = witness {
        c.verdicts.insert("partition_valid".into(), target.holds(g, p).to_string());
    }
    c
}

/// Recomputes claim-specific verdicts of a certificate on its graph.
pub(super) fn recompute_claim(c: &Certificate, g: &Graph) -> Result<BTreeMap<String, String>, VerifyError> {
    let mut out = BTreeMap::new();
    let Some(name) = &c.claim else { return Ok(out) };
    let claim: Claim = name.parse()?;
    let brute = |g: &Graph, t: Target| (g.n() <= REPLAY_MAX_N).then(|| brute_force_partition(g, t).is_some().to_string());
    match claim {
        Claim::Conn2EcCharacterization => {
            out.insert("criterion".into(), (poly_conn_2ec(g).answer != Answer::No).to_string());
        }
        Claim::TwoCyclesCharacterization => {
            out.insert("criterion".into(), (char_two_cycles(g).answer == Answer::Yes).to_string());
        }
        Claim::DoublingConverse { .. } => {
            if let Some(a) = c.verdicts.get("a").and_then(|a| a.parse::<usize>().ok()) {
                if let Some(v) = brute(g, Target::min_degree(a, a)) {
                    out.insert("original".into(), v);
                }
                if let Some(v) = brute(&g.double_join(), Target::min_degree(a + 1, a + 1)) {
                    out.insert("doubled".into(), v);
                }
            }
            return Ok(out);
        }
        Claim::StiebitzTightness { .. } | Claim::Boundary { .. } => {}
    }
    if let Some(t) = c.target {
        if let Some(v) = brute(g, t) {
            out.insert("exists_partition".into(), v);
        }
    }
    Ok(out)
}

fn criterion_trial(trial: usize, claim: Claim, g: &Graph, budget: Budget) -> Trial {
    let (target, poly) = match claim {
        Claim::Conn2EcCharacterization => (conn_2ec_target(), poly_conn_2ec(g)),
        _ => (two_cycles_target(), char_two_cycles(g)),
    };
    let criterion = match claim {
        Claim::Conn2EcCharacterization => poly.answer != Answer::No,
        _ => poly.answer == Answer::Yes,
    };
    let truth = exact_partition_target(g, target, budget);
    let Some(exists) = decided(&truth) else { return Trial::exhausted() };
    let mut t = if criterion == exists {
        Trial::agree()
    } else {
        let mut c = claim_certificate(trial, "criterion", claim, g, target, truth.witness.as_ref());
        c.verdicts.insert("criterion".into(), criterion.to_string());
        c.verdicts.insert("exists_partition".into(), exists.to_string());
        c.verdicts.insert("method".into(), poly.method.clone());
        Trial::disagree(c)
    };
    t.tallies.push(("methods".into(), poly.method));
    if poly.answer == Answer::Unknown {
        t.counters.push(("criterion_without_witness", 1));
    }
    t
}

fn doubling_trials(trial: usize, claim: Claim, g: &Graph, max_a: usize, budget: Budget) -> Vec<Trial> {
    let doubled = g.double_join();
    (1..=max_a)
        .map(|a| {
            let lhs = exact_partition_target(g, Target::min_degree(a, a), budget);
            let rhs = exact_partition_target(&doubled, Target::min_degree(a + 1, a + 1), budget);
            let (Some(x), Some(y)) = (decided(&lhs), decided(&rhs)) else { return Trial::exhausted() };
            let hyp = g.min_degree().is_ok_and(|d| d > a);
            if x == y {
                return Trial::agree();
            }
            let mut c = claim_certificate(trial, "doubling", claim, g, Target::min_degree(a, a), lhs.witness.as_ref());
            c.verdicts.insert("a".into(), a.to_string());
            c.verdicts.insert("original".into(), x.to_string());
            c.verdicts.insert("doubled".into(), y.to_string());
            c.verdicts.insert("meets_degree_hypothesis".into(), hyp.to_string());
            let mut t = Trial::disagree(c);
            if hyp {
                t.counters.push(("disagreements_with_min_degree_above_a", 1));
            }
            t
        })
        .collect()
}

/// Graph stream for the exhaustive claims: every labelled graph on
/// 1..=max_n vertices, or `samples` random ones.
fn graph_stream(opts: &ClaimOptions) -> Result<Vec<Graph>, VerifyError> {
    if opts.samples == 0 {
        if opts.max_n > ENUMERATE_MAX_N {
            return Err(VerifyError::Range(format!("exhaustive mode needs max_n <= {ENUMERATE_MAX_N}")));
        }
        let mut out = Vec::new();
        for n in 1..=opts.max_n {
            out.extend(enumerate_graphs(n, None)?);
        }
        return Ok(out);
    }
    Ok((0..opts.samples)
        .map(|i| {
            let mut rng = trial_rng(opts.seed, i);
            let n = rng.gen_range(1..=opts.max_n.max(1));
            let p = rng.gen_range(0.15..0.85);
            random_graph(&mut rng, n, p)
        })
        .collect())
}

fn sampled_min_degree(opts: &ClaimOptions, i: usize, d: usize, exact: bool) -> Option<Graph> {
    let mut rng = trial_rng(opts.seed, i);
    if opts.max_n <= d {
        return None;
    }
    for _ in 0..64 {
        let n = rng.gen_range(d + 1..=opts.max_n);
        let p = rng.gen_range(0.1..0.7);
        let g = if exact {
            random_graph_exact_min_degree(&mut rng, n, p, d)
        } else {
            random_graph_min_degree(&mut rng, n, p, d)
        };
        if !exact || g.min_degree().ok() == Some(d) {
            return Some(g);
        }
    }
    None
}

pub fn check_claim(claim: Claim, opts: &ClaimOptions) -> Result<Report, VerifyError> {
    let start = Instant::now();
    let mut report = Report::new(
        format!("claim/{}", claim.name()),
        params([
            ("claim", claim.to_string()),
            ("max_n", opts.max_n.to_string()),
            ("samples", opts.samples.to_string()),
            ("seed", opts.seed.to_string()),
            ("mode", if opts.samples == 0 && claim.exhaustive_by_default() { "exhaustive" } else { "sampled" }.into()),
            ("max_nodes", opts.budget.max_nodes.to_string()),
        ]),
    );
    let budget = opts.budget;
    let trials: Vec<Trial> = match claim {
        Claim::Conn2EcCharacterization | Claim::TwoCyclesCharacterization => {
            let graphs = graph_stream(opts)?;
            graphs.par_iter().enumerate().map(|(i, g)| criterion_trial(i, claim, g, budget)).collect()
        }
        Claim::DoublingConverse { max_a } => {
            let graphs = graph_stream(opts)?;
            let nested: Vec<Vec<Trial>> =
                graphs.par_iter().enumerate().map(|(i, g)| doubling_trials(i, claim, g, max_a, budget)).collect();
            nested.into_iter().flatten().collect()
        }
        Claim::StiebitzTightness { k1, k2 } => {
            if k1 == 0 || k1 > k2 {
                return Err(VerifyError::Range(format!("need 1 <= k1 <= k2, got ({k1},{k2})")));
            }
            let target = Target::min_degree(k1, k2);
            let d = k1 + k2 + 1;
            let mut graphs = vec![(Graph::complete(d), false)];
            graphs.extend((0..opts.samples).filter_map(|i| sampled_min_degree(opts, i, d, false)).map(|g| (g, true)));
            graphs
                .par_iter()
                .enumerate()
                .map(|(i, (g, claimed))| {
                    let out = exact_partition_target(g, target, budget);
                    let Some(exists) = decided(&out) else { return Trial::exhausted() };
                    if exists == *claimed {
                        return Trial::agree().count(if exists { "yes" } else { "no" });
                    }
                    let mut c = claim_certificate(i, "tightness", claim, g, target, out.witness.as_ref());
                    c.verdicts.insert("claimed".into(), claimed.to_string());
                    c.verdicts.insert("exists_partition".into(), exists.to_string());
                    Trial::disagree(c)
                })
                .collect()
        }
        Claim::Boundary { k1, k2, delta } => {
            let target = Target::min_degree(k1, k2);
            let graphs: Vec<Graph> =
                (0..opts.samples).filter_map(|i| sampled_min_degree(opts, i, delta, true)).collect();
            graphs
                .par_iter()
                .enumerate()
                .map(|(i, g)| {
                    let out = exact_partition_target(g, target, budget);
                    let label = out.answer.to_string();
                    let mut t = match decided(&out) {
                        None => Trial::exhausted(),
                        Some(true) => Trial::agree(),
                        Some(false) => {
                            // Not a disagreement: no claim is made at this degree. Kept for replay.
                            let mut c = claim_certificate(i, "no_instance", claim, g, target, None);
                            c.verdicts.insert("exists_partition".into(), "false".into());
                            Trial { anomalies: vec![c], ..Trial::agree() }
                        }
                    };
                    t.tallies.push(("answers".into(), label.clone()));
                    t.tallies.push(("answers_by_n".into(), format!("n={:02}/{label}", g.n())));
                    t
                })
                .collect()
        }
    };
    merge(&mut report, trials);
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Polynomial algorithms compared against brute force.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyAlgo {
    Poly11,
    Poly12,
    Poly1k3,
    Poly22,
    TwoCycles,
}

impl PolyAlgo {
    pub const ALL: [PolyAlgo; 5] = [PolyAlgo::Poly11, PolyAlgo::Poly12, PolyAlgo::Poly1k3, PolyAlgo::Poly22, PolyAlgo::TwoCycles];

    pub fn name(self) -> &'static str {
        match self {
            PolyAlgo::Poly11 => "poly11",
            PolyAlgo::Poly12 => "poly12",
            PolyAlgo::Poly1k3 => "poly1k(k=3)",
            PolyAlgo::Poly22 => "poly22",
            PolyAlgo::TwoCycles => "two-cycles",
        }
    }

    pub fn target(self) -> Target {
        match self {
            PolyAlgo::Poly11 => Target::min_degree(1, 1),
            PolyAlgo::Poly12 => Target::min_degree(1, 2),
            PolyAlgo::Poly1k3 => Target::min_degree(1, 3),
            PolyAlgo::Poly22 => Target::min_degree(2, 2),
            PolyAlgo::TwoCycles => two_cycles_target(),
        }
    }

    /// Minimum degree the random generator guarantees for this class.
    fn min_degree(self) -> usize {
        match self {
            PolyAlgo::Poly11 => 1,
            PolyAlgo::Poly1k3 | PolyAlgo::Poly22 => 3,
            PolyAlgo::Poly12 | PolyAlgo::TwoCycles => 0,
        }
    }

    /// None when `g` is outside the algorithm's hypothesis class.
    fn run(self, g: &Graph) -> Option<SolveOutcome> {
        match self {
            PolyAlgo::Poly11 => poly_11(g).ok(),
            PolyAlgo::Poly12 => Some(poly_12(g)),
            PolyAlgo::Poly1k3 => poly_1k_mindegk(g, 3).ok(),
            PolyAlgo::Poly22 => poly_22_mindeg3(g).ok(),
            PolyAlgo::TwoCycles => Some(char_two_cycles(g)),
        }
    }
}

fn poly_trial(trial: usize, algo: PolyAlgo, g: &Graph) -> Option<Trial> {
    let out = algo.run(g)?;
    let target = algo.target();
    let truth = brute_force_partition(g, target);
    let witness_ok = out.witness.as_ref().is_none_or(|p| target.holds(g, p));
    let agrees = match out.answer {
        Answer::Yes => truth.is_some(),
        Answer::No => truth.is_none(),
        Answer::Unknown => false,
    };
    if agrees && witness_ok {
        return Some(Trial::agree());
    }
    let witness = out.witness.as_ref().or(truth.as_ref());
    let mut c = Certificate {
        trial,
        kind: if agrees { "witness" } else { "decision" }.into(),
        graph: Some(serialize_edge_list(g)),
        target: Some(target),
        partition: witness.map(|p| p.parts().to_vec()),
        ..Certificate::default()
    };
    if let Some(p) = witness {
        c.verdicts.insert("partition_valid".into(), target.holds(g, p).to_string());
    }
    c.verdicts.insert("answer".into(), out.answer.to_string());
    c.verdicts.insert("exists_partition".into(), truth.is_some().to_string());
    Some(Trial::disagree(c))
}

/// Exhaustive comparison over every labelled graph on up to `max_n`
/// vertices inside the algorithm's hypothesis class, then `samples`
/// random members of the class with up to `sample_max_n` vertices.
pub fn poly_vs_exact(algo: PolyAlgo, max_n: usize, samples: usize, sample_max_n: usize, seed: u64) -> Result<Report, VerifyError> {
    let start = Instant::now();
    if sample_max_n > REPLAY_MAX_N {
        return Err(VerifyError::Range(format!("brute-force referee needs n <= {REPLAY_MAX_N}")));
    }
    let mut report = Report::new(
        format!("poly/{}", algo.name()),
        params([
            ("algorithm", algo.name().to_string()),
            ("max_n", max_n.to_string()),
            ("samples", samples.to_string()),
            ("sample_max_n", sample_max_n.to_string()),
            ("seed", seed.to_string()),
        ]),
    );
    let mut graphs = Vec::new();
    for n in 1..=max_n {
        graphs.extend(enumerate_graphs(n, None)?);
    }
    let d = algo.min_degree();
    let lo = (d + 1).max(4).min(sample_max_n);
    graphs.extend((0..samples).map(|i| {
        let mut rng = trial_rng(seed, i);
        let n = rng.gen_range(lo..=sample_max_n);
        let p = rng.gen_range(0.1..0.6);
        random_graph_min_degree(&mut rng, n, p, d)
    }));
    let results: Vec<Option<Trial>> = graphs.par_iter().enumerate().map(|(i, g)| poly_trial(i, algo, g)).collect();
    let outside = results.iter().filter(|r| r.is_none()).count() as u64;
    merge(&mut report, results.into_iter().flatten().collect());
    report.bump("outside_hypothesis", outside);
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(max_n: usize) -> ClaimOptions {
        ClaimOptions { max_n, ..ClaimOptions::default() }
    }

    #[test]
    fn claim_names_round_trip() {
        for s in ["conn_2ec_characterization", "doubling_converse(a=3)", "stiebitz_tightness(k1=1,k2=2)", "boundary(k1=2,k2=3,delta=4)"] {
            let c: Claim = s.parse().unwrap();
            assert_eq!(c.to_string().parse::<Claim>().unwrap(), c);
        }
        assert_eq!("boundary".parse::<Claim>().unwrap(), Claim::Boundary { k1: 2, k2: 3, delta: 4 });
        assert!(matches!("nope".parse::<Claim>(), Err(VerifyError::UnknownClaim(_))));
    }

    #[test]
    fn two_cycles_exhaustive_small() {
        let r = check_claim(Claim::TwoCyclesCharacterization, &opts(5)).unwrap();
        assert!(r.is_consistent());
        assert!(r.disagreements.is_empty());
        assert_eq!(r.trials, (1..=5).map(|n| 1usize << (n * (n - 1) / 2)).sum::<usize>());
    }

    #[test]
    fn doubling_converse_finds_the_triangle() {
        // C3 has no (δ≥1,δ≥1)-partition but its double, the prism, splits
        // into two triangles.
        let r = check_claim(Claim::DoublingConverse { max_a: 1 }, &opts(3)).unwrap();
        let tri = serialize_edge_list(&Graph::complete(3));
        assert!(r.disagreements.iter().any(|c| c.graph.as_deref() == Some(tri.as_str())));
        assert!(r.replay().unwrap().is_empty());
    }

    #[test]
    fn tightness_small() {
        let o = ClaimOptions { max_n: 9, samples: 20, seed: 5, budget: Budget::default() };
        let r = check_claim(Claim::StiebitzTightness { k1: 1, k2: 2 }, &o).unwrap();
        assert!(r.disagreements.is_empty(), "{}", r.to_json());
        assert_eq!(r.counters["no"], 1);
    }

    #[test]
    fn boundary_tabulates() {
        let o = ClaimOptions { max_n: 9, samples: 15, seed: 2, budget: Budget::default() };
        let r = check_claim(Claim::Boundary { k1: 2, k2: 3, delta: 4 }, &o).unwrap();
        assert!(r.is_consistent());
        let total: u64 = r.tables["answers"].values().sum();
        assert_eq!(total as usize, r.trials);
    }

    #[test]
    fn poly_small_agreement() {
        for algo in PolyAlgo::ALL {
            let r = poly_vs_exact(algo, 5, 30, 9, 1).unwrap();
            assert!(r.disagreements.is_empty(), "{}: {}", algo.name(), r.to_json());
        }
    }
}
