//! Formula and graph corpora: seeded random generation and exhaustive
//! enumeration.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::VerifyError;
use crate::cnf::{sat_solve, CnfFormula, Lit};
use crate::graph::{Graph, GraphBuilder};

/// Generator for trial `index` of a campaign seeded with `seed`; one
/// ChaCha stream per trial, so trials can run in any order.
pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClauseShape {
    /// Three distinct variables per clause.
    Exact3,
    /// Size uniform in 1..=3 (capped by the variable count).
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub trials: usize,
    pub min_vars: usize,
    pub max_vars: usize,
    pub max_clauses: usize,
    pub seed: u64,
    pub shape: ClauseShape,
    /// Enumerate every formula within the bounds instead of sampling.
    pub exhaustive: bool,
    /// Resample until satisfiable.
    pub satisfiable_only: bool,
}

impl CorpusSpec {
    pub fn random(trials: usize, max_vars: usize, max_clauses: usize, seed: u64) -> Self {
        CorpusSpec {
            trials,
            min_vars: 1,
            max_vars,
            max_clauses,
            seed,
            shape: ClauseShape::Mixed,
            exhaustive: false,
            satisfiable_only: false,
        }
    }

    pub fn exact3(mut self) -> Self {
        self.shape = ClauseShape::Exact3;
        self.min_vars = self.min_vars.max(3);
        self
    }

    pub fn satisfiable(mut self) -> Self {
        self.satisfiable_only = true;
        self
    }

    pub fn exhaustive(max_vars: usize, max_clauses: usize) -> Self {
        CorpusSpec { exhaustive: true, ..CorpusSpec::random(0, max_vars, max_clauses, 0) }
    }
}

pub const EXHAUSTIVE_MAX_VARS: usize = 2;
pub const EXHAUSTIVE_MAX_CLAUSES: usize = 3;

pub fn random_formula(rng: &mut impl Rng, n: usize, m: usize, shape: ClauseShape) -> CnfFormula {
    let vars: Vec<usize> = (0..n).collect();
    let clauses = (0..m)
        .map(|_| {
            let size = match shape {
                ClauseShape::Exact3 => 3.min(n),
                ClauseShape::Mixed => rng.gen_range(1..=3.min(n)),
            };
            vars.choose_multiple(rng, size).map(|&var| Lit { var, positive: rng.gen_bool(0.5) }).collect()
        })
        .collect();
    CnfFormula::new(n, clauses).expect("generated clauses are in range")
}

/// The corpus for `spec`, in trial order.
pub fn formula_corpus(spec: &CorpusSpec) -> Result<Vec<CnfFormula>, VerifyError> {
    if spec.exhaustive {
        let all = exhaustive_formulas(spec.max_vars, spec.max_clauses)?;
        return Ok(if spec.satisfiable_only {
            all.into_iter().filter(|f| matches!(sat_solve(f), Ok(Some(_)))).collect()
        } else {
            all
        });
    }
    if spec.min_vars == 0 || spec.min_vars > spec.max_vars || spec.max_clauses == 0 {
        return Err(VerifyError::Range(format!(
            "need 1 <= min_vars <= max_vars and max_clauses >= 1, got {}..{} vars, {} clauses",
            spec.min_vars, spec.max_vars, spec.max_clauses
        )));
    }
    Ok((0..spec.trials)
        .map(|i| {
            let mut rng = trial_rng(spec.seed, i);
            loop {
                let n = rng.gen_range(spec.min_vars..=spec.max_vars);
                let m = rng.gen_range(1..=spec.max_clauses);
                let f = random_formula(&mut rng, n, m, spec.shape);
                if !spec.satisfiable_only || matches!(sat_solve(&f), Ok(Some(_))) {
                    break f;
                }
            }
        })
        .collect())
}

/// Every formula with `1..=max_vars` variables (all of them used) and
/// `1..=max_clauses` clauses of at most 3 literals over distinct
/// variables, taken as sorted multisets.
pub fn exhaustive_formulas(max_vars: usize, max_clauses: usize) -> Result<Vec<CnfFormula>, VerifyError> {
    if max_vars > EXHAUSTIVE_MAX_VARS + 1 || max_clauses > EXHAUSTIVE_MAX_CLAUSES + 1 {
        return Err(VerifyError::Range(format!(
            "exhaustive formulas are limited to {} variables and {} clauses",
            EXHAUSTIVE_MAX_VARS + 1,
            EXHAUSTIVE_MAX_CLAUSES + 1
        )));
    }
    let mut out = Vec::new();
    for n in 1..=max_vars {
        for m in 1..=max_clauses {
            out.extend(formulas_exact(n, m, 3));
        }
    }
    Ok(out)
}

/// Nonempty clauses over `n` variables with at most `max_size` literals,
/// no variable twice.
fn clause_pool(n: usize, max_size: usize) -> Vec<Vec<Lit>> {
    let mut pool = Vec::new();
    // Each variable absent, positive or negative.
    for code in 1..3usize.pow(n as u32) {
        let mut c = Vec::new();
        let mut x = code;
        for var in 0..n {
            match x % 3 {
                1 => c.push(Lit::pos(var)),
                2 => c.push(Lit::neg(var)),
                _ => {}
            }
            x /= 3;
        }
        if c.len() <= max_size {
            pool.push(c);
        }
    }
    pool
}

/// Lazily, every multiset of `m` clauses from the pool over exactly `n`
/// variables in which every variable occurs.
pub fn formulas_exact(n: usize, m: usize, max_size: usize) -> impl Iterator<Item = CnfFormula> {
    let pool = clause_pool(n, max_size);
    let mut idx = Some(vec![0usize; m]).filter(|_| m > 0 && !pool.is_empty());
    std::iter::from_fn(move || loop {
        let cur = idx.clone()?;
        // Advance to the next non-decreasing index tuple.
        idx = (0..m).rev().find(|&p| cur[p] + 1 < pool.len()).map(|p| {
            let mut next = cur.clone();
            next[p] += 1;
            for q in p + 1..m {
                next[q] = next[p];
            }
            next
        });
        let chosen: Vec<Vec<Lit>> = cur.iter().map(|&i| pool[i].clone()).collect();
        if (0..n).all(|v| chosen.iter().flatten().any(|l| l.var == v)) {
            return Some(CnfFormula::new(n, chosen).expect("in range"));
        }
    })
}

pub const ENUMERATE_MAX_N: usize = 7;

/// All labelled graphs on `n` vertices in edge-mask order, optionally only
/// those of minimum degree at least `min_degree`.
pub fn enumerate_graphs(n: usize, min_degree: Option<usize>) -> Result<impl Iterator<Item = Graph>, VerifyError> {
    if n > ENUMERATE_MAX_N {
        return Err(VerifyError::Range(format!("exhaustive enumeration is limited to n <= {ENUMERATE_MAX_N}, got {n}")));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let total = 1u64 << pairs.len();
    Ok((0..total).filter_map(move |mask| {
        let mut deg = vec![0usize; n];
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        if let Some(d) = min_degree {
            if deg.iter().any(|&x| x < d) {
                return None;
            }
        }
        let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
        Some(Graph::from_edges(n, edges).expect("pairs are simple"))
    }))
}

/// G(n, p).
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                b.add_edge(u, v).expect("simple");
            }
        }
    }
    b.build()
}

/// G(n, p) topped up with random edges until every degree is at least `d`.
/// Needs `n > d`.
pub fn random_graph_min_degree(rng: &mut impl Rng, n: usize, p: f64, d: usize) -> Graph {
    assert!(n > d, "minimum degree {d} needs more than {d} vertices");
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                b.add_edge(u, v).expect("simple");
            }
        }
    }
    for u in 0..n {
        while b.degree(u) < d {
            let free: Vec<usize> = (0..n).filter(|&v| v != u && !b.has_edge(u, v)).collect();
            let &v = free.choose(rng).expect("n > d leaves a free partner");
            b.add_edge(u, v).expect("simple");
        }
    }
    b.build()
}

/// Random graph with minimum degree exactly `d`: topped up to `d`, then
/// edges are dropped at one vertex while its neighbours stay above `d`.
pub fn random_graph_exact_min_degree(rng: &mut impl Rng, n: usize, p: f64, d: usize) -> Graph {
    let g = random_graph_min_degree(rng, n, p, d);
    if g.min_degree().ok() == Some(d) {
        return g;
    }
    let mut deg = g.degrees();
    let mut keep: Vec<(usize, usize)> = g.edges();
    let u = rng.gen_range(0..n);
    let mut around: Vec<usize> = g.neighbors(u).to_vec();
    around.shuffle(rng);
    for v in around {
        if deg[u] == d {
            break;
        }
        if deg[v] > d {
            keep.retain(|&e| e != (u.min(v), u.max(v)));
            deg[u] -= 1;
            deg[v] -= 1;
        }
    }
    Graph::from_edges(n, keep).expect("subset of a simple graph")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_graphs(3, None).unwrap().count(), 8);
        let k4: Vec<Graph> = enumerate_graphs(4, Some(3)).unwrap().collect();
        assert_eq!(k4, vec![Graph::complete(4)]);
        // Recount n=5, δ≥3 by filtering the unfiltered stream.
        let direct = enumerate_graphs(5, Some(3)).unwrap().count();
        let recount = enumerate_graphs(5, None).unwrap().filter(|g| g.min_degree().unwrap() >= 3).count();
        assert_eq!(direct, recount);
        assert!(enumerate_graphs(8, None).is_err());
    }

    #[test]
    fn exhaustive_formula_count() {
        // One variable: clauses {x}, {¬x}; multisets of size ≤ 3 using x.
        assert_eq!(exhaustive_formulas(1, 3).unwrap().len(), 2 + 3 + 4);
        let all = exhaustive_formulas(2, 3).unwrap();
        assert!(all.iter().all(|f| f.num_clauses() <= 3 && f.num_vars() <= 2));
        let unique: std::collections::BTreeSet<String> = all.iter().map(|f| f.to_string()).collect();
        assert_eq!(unique.len(), all.len());
        // Two variables, one clause: only the four 2-clauses use both.
        assert_eq!(formulas_exact(2, 1, 3).count(), 4);
        assert_eq!(formulas_exact(3, 1, 2).count(), 0);
    }

    #[test]
    fn corpus_is_deterministic() {
        let spec = CorpusSpec::random(20, 3, 4, 7).exact3().satisfiable();
        let a = formula_corpus(&spec).unwrap();
        assert_eq!(a, formula_corpus(&spec).unwrap());
        assert!(a.iter().all(|f| f.clauses().iter().all(|c| c.len() == 3)));
        assert!(a.iter().all(|f| sat_solve(f).unwrap().is_some()));
    }

    #[test]
    fn degree_generators() {
        let mut rng = trial_rng(3, 0);
        for n in 6..12 {
            let g = random_graph_min_degree(&mut rng, n, 0.2, 5);
            assert!(g.min_degree().unwrap() >= 5);
            let h = random_graph_exact_min_degree(&mut rng, n, 0.5, 4);
            assert!(h.min_degree().unwrap() >= 4);
        }
    }
}
