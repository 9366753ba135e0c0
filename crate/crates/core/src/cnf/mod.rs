//! CNF formulas, DIMACS I/O, a DPLL oracle and satisfiability-preserving
//! transformations.

mod sat;
mod transform;

pub use sat::{brute_force_sat, sat_solve, SatConfig};
pub use transform::{pad_literal_occurrences, transform_connect, transform_occurrence_bound, OccurrenceBound};

use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{Graph, GraphBuilder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("variable {var} out of range (formula has {n} variables)")]
    VarOutOfRange { var: usize, n: usize },
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("clause {clause} repeats literal {lit}")]
    DuplicateLiteral { clause: usize, lit: Lit },
    #[error("header declares {declared} clauses but {found} were given")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("literal {0} never occurs")]
    MissingLiteral(Lit),
    #[error("clause {clause} has {size} literals, at most {max} allowed")]
    OversizedClause { clause: usize, size: usize, max: usize },
    #[error("formula with {n} variables exceeds the solver guard of {max}")]
    SizeGuard { n: usize, max: usize },
}

/// A literal: 0-based variable index and polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Lit { var, positive: false }
    }

    /// From a signed 1-based DIMACS literal.
    pub fn from_dimacs(x: i64) -> Self {
        assert!(x != 0, "0 is not a literal");
        Lit { var: x.unsigned_abs() as usize - 1, positive: x > 0 }
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn negated(self) -> Self {
        Lit { var: self.var, positive: !self.positive }
    }

    /// Dense index: `2*var` for x, `2*var+1` for ¬x.
    pub fn index(self) -> usize {
        2 * self.var + usize::from(!self.positive)
    }

    pub fn eval(self, a: &Assignment) -> bool {
        a.value(self.var) == self.positive
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// Total truth assignment.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment(values)
    }

    pub fn all(n: usize, value: bool) -> Self {
        Assignment(vec![value; n])
    }

    /// The `index`-th of the `2^n` assignments (bit `i` is variable `i`).
    pub fn from_bits(n: usize, bits: u64) -> Self {
        Assignment((0..n).map(|i| bits >> i & 1 == 1).collect())
    }

    pub fn value(&self, var: usize) -> bool {
        self.0[var]
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn truncated(&self, n: usize) -> Assignment {
        Assignment(self.0[..n].to_vec())
    }
}

/// A CNF formula over variables `0..num_vars`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
}

/// One occurrence of a literal: clause index and position within it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub clause: usize,
    pub position: usize,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Lit>>) -> Result<Self, CnfError> {
        for (j, c) in clauses.iter().enumerate() {
            if c.is_empty() {
                return Err(CnfError::EmptyClause(j));
            }
            for (i, l) in c.iter().enumerate() {
                if l.var >= num_vars {
                    return Err(CnfError::VarOutOfRange { var: l.var + 1, n: num_vars });
                }
                if c[..i].contains(l) {
                    return Err(CnfError::DuplicateLiteral { clause: j, lit: *l });
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    /// From signed 1-based DIMACS literals.
    pub fn from_dimacs_clauses(num_vars: usize, clauses: &[&[i64]]) -> Result<Self, CnfError> {
        CnfFormula::new(num_vars, clauses.iter().map(|c| c.iter().map(|&x| Lit::from_dimacs(x)).collect()).collect())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn clause(&self, j: usize) -> &[Lit] {
        &self.clauses[j]
    }

    pub fn total_size(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }

    /// Occurrences of `lit` in clause order.
    pub fn occurrences(&self, lit: Lit) -> Vec<Occurrence> {
        let mut out = Vec::new();
        for (j, c) in self.clauses.iter().enumerate() {
            if let Some(position) = c.iter().position(|&l| l == lit) {
                out.push(Occurrence { clause: j, position });
            }
        }
        out
    }

    /// Occurrence counts indexed by [`Lit::index`].
    pub fn literal_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; 2 * self.num_vars];
        for c in &self.clauses {
            for l in c {
                counts[l.index()] += 1;
            }
        }
        counts
    }

    /// `(q_i, p_i)`: positive and negative occurrence counts per variable.
    pub fn occurrence_profile(&self) -> Vec<(usize, usize)> {
        let c = self.literal_counts();
        (0..self.num_vars).map(|i| (c[2 * i], c[2 * i + 1])).collect()
    }

    /// Number of clauses each variable appears in.
    pub fn clauses_per_variable(&self) -> Vec<usize> {
        let mut out = vec![0; self.num_vars];
        for c in &self.clauses {
            let mut vars: Vec<usize> = c.iter().map(|l| l.var).collect();
            vars.sort_unstable();
            vars.dedup();
            for v in vars {
                out[v] += 1;
            }
        }
        out
    }

    pub fn min_literal_count(&self) -> usize {
        self.literal_counts().into_iter().min().unwrap_or(0)
    }

    pub fn is_satisfied_by(&self, a: &Assignment) -> bool {
        a.len() >= self.num_vars && self.clauses.iter().all(|c| c.iter().any(|l| l.eval(a)))
    }

    /// Indices of clauses falsified by `a`.
    pub fn falsified_clauses(&self, a: &Assignment) -> Vec<usize> {
        (0..self.clauses.len()).filter(|&j| !self.clauses[j].iter().any(|l| l.eval(a))).collect()
    }

    pub fn with_clauses_appended(&self, extra_vars: usize, extra: Vec<Vec<Lit>>) -> CnfFormula {
        let mut clauses = self.clauses.clone();
        clauses.extend(extra);
        CnfFormula::new(self.num_vars + extra_vars, clauses).expect("appended clauses are well formed")
    }

    /// Hex SHA-256 of the DIMACS serialization.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(serialize_dimacs(self).as_bytes()))
    }

    /// Incidence graph B(F) without the occurrence precondition: literal
    /// vertex `Lit::index()` and clause vertex `2n + j`.
    pub fn raw_incidence_graph(&self) -> Graph {
        let n2 = 2 * self.num_vars;
        let mut b = GraphBuilder::new(n2 + self.clauses.len());
        for (j, c) in self.clauses.iter().enumerate() {
            for l in c {
                b.add_edge(l.index(), n2 + j).expect("no duplicate literals in a clause");
            }
        }
        b.build()
    }

    pub fn is_connected_instance(&self) -> bool {
        self.raw_incidence_graph().is_connected()
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let lits: Vec<String> =
                    c.iter().map(|l| format!("{}x{}", if l.positive { "" } else { "~" }, l.var + 1)).collect();
                format!("({})", lits.join(" v "))
            })
            .collect();
        write!(f, "{}", parts.join(" & "))
    }
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        let malformed = |msg: &str| CnfError::Malformed { line: line_no, msg: msg.to_string() };
        if line.starts_with('p') {
            let tok: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() || tok.len() != 4 || tok[0] != "p" || tok[1] != "cnf" {
                return Err(malformed("expected a single `p cnf <vars> <clauses>` header"));
            }
            let n = tok[2].parse().map_err(|_| malformed("bad variable count"))?;
            let m = tok[3].parse().map_err(|_| malformed("bad clause count"))?;
            header = Some((n, m));
            continue;
        }
        let (n, _) = header.ok_or_else(|| malformed("clause before header"))?;
        for tok in line.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| malformed("bad literal"))?;
            if x == 0 {
                if current.is_empty() {
                    return Err(CnfError::EmptyClause(clauses.len()));
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                let lit = Lit::from_dimacs(x);
                if lit.var >= n {
                    return Err(CnfError::VarOutOfRange { var: lit.var + 1, n });
                }
                current.push(lit);
            }
        }
    }
    let (n, m) = header.ok_or(CnfError::Malformed { line: last_line, msg: "missing header".into() })?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != m {
        return Err(CnfError::ClauseCountMismatch { declared: m, found: clauses.len() });
    }
    CnfFormula::new(n, clauses)
}

pub fn serialize_dimacs(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.num_vars, f.clauses.len());
    for c in &f.clauses {
        for l in c {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

/// B(F) with its role labels; requires every literal to occur.
pub fn incidence_graph(f: &CnfFormula) -> Result<(Graph, Vec<String>), CnfError> {
    let counts = f.literal_counts();
    if let Some(i) = counts.iter().position(|&c| c == 0) {
        let lit = Lit { var: i / 2, positive: i % 2 == 0 };
        return Err(CnfError::MissingLiteral(lit));
    }
    let mut roles: Vec<String> = (0..2 * f.num_vars)
        .map(|i| format!("lit:{}x_{}", if i % 2 == 0 { "+" } else { "-" }, i / 2 + 1))
        .collect();
    roles.extend((0..f.num_clauses()).map(|j| format!("clause:c[{}]", j + 1)));
    Ok((f.raw_incidence_graph(), roles))
}

/// The formula of the ring-graph figure:
/// (x1 ∨ x4 ∨ ¬x3) ∧ (x1 ∨ ¬x2 ∨ ¬x3) ∧ (x2 ∨ ¬x3 ∨ x4) ∧ (¬x1 ∨ x3 ∨ ¬x4).
pub fn figure_formula() -> CnfFormula {
    CnfFormula::from_dimacs_clauses(4, &[&[1, 4, -3], &[1, -2, -3], &[2, -3, 4], &[-1, 3, -4]])
        .expect("well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_unit_clauses() {
        let f = parse_dimacs("p cnf 1 2\n1 0\n-1 0").unwrap();
        assert_eq!(f.num_clauses(), 2);
        assert_eq!(f.clause(0), &[Lit::pos(0)]);
        assert_eq!(f.clause(1), &[Lit::neg(0)]);
    }

    #[test]
    fn figure_formula_profile() {
        let text = "c figure\np cnf 4 4\n1 4 -3 0\n1 -2 -3 0\n2 -3 4 0\n-1 3 -4 0\n";
        let f = parse_dimacs(text).unwrap();
        assert_eq!(f, figure_formula());
        let q: Vec<usize> = f.occurrence_profile().iter().map(|x| x.0).collect();
        let p: Vec<usize> = f.occurrence_profile().iter().map(|x| x.1).collect();
        assert_eq!(q, vec![2, 1, 1, 2]);
        assert_eq!(p, vec![1, 1, 3, 1]);
        let total: usize = f.occurrence_profile().iter().map(|(a, b)| a + b).sum();
        assert_eq!(total, f.total_size());
    }

    #[test]
    fn tautology_clause_accepted() {
        let f = parse_dimacs("p cnf 2 1\n1 -1 2 0\n").unwrap();
        assert_eq!(f.clause(0).len(), 3);
    }

    #[test]
    fn dimacs_errors() {
        assert!(matches!(parse_dimacs("p cnf 1 1\n2 0"), Err(CnfError::VarOutOfRange { .. })));
        assert!(matches!(parse_dimacs("p cnf 1 1\n0"), Err(CnfError::EmptyClause(0))));
        assert!(matches!(parse_dimacs("p dnf 1 1\n1 0"), Err(CnfError::Malformed { .. })));
        assert!(matches!(parse_dimacs("p cnf 1 2\n1 0"), Err(CnfError::ClauseCountMismatch { .. })));
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 1 0"), Err(CnfError::DuplicateLiteral { .. })));
    }

    #[test]
    fn dimacs_round_trip() {
        let f = figure_formula();
        assert_eq!(parse_dimacs(&serialize_dimacs(&f)).unwrap(), f);
    }

    #[test]
    fn incidence_graph_examples() {
        let f = CnfFormula::from_dimacs_clauses(2, &[&[1, 2], &[-1, -2]]).unwrap();
        let (b, roles) = incidence_graph(&f).unwrap();
        assert_eq!((b.n(), b.m()), (6, 4));
        assert_eq!(roles.len(), 6);
        // x1,x2 share clause 1 and ¬x1,¬x2 share clause 2: two components.
        assert_eq!(b.connected_components().len(), 2);

        let f = CnfFormula::from_dimacs_clauses(2, &[&[1, 2], &[-1, -2], &[1, -2], &[-1, 2]]).unwrap();
        assert!(incidence_graph(&f).unwrap().0.is_connected());

        let f = CnfFormula::from_dimacs_clauses(4, &[&[1, -1, 2], &[3, 4, -3], &[-2, -4]]).unwrap();
        assert!(!incidence_graph(&f).unwrap().0.is_connected());

        // The figure formula's fourth clause shares no literal with the
        // others, so B has two components.
        let (b, _) = incidence_graph(&figure_formula()).unwrap();
        assert_eq!(b.m(), 12);
        assert_eq!(b.connected_components().len(), 2);

        let f = CnfFormula::from_dimacs_clauses(1, &[&[1]]).unwrap();
        assert_eq!(incidence_graph(&f), Err(CnfError::MissingLiteral(Lit::neg(0))));
    }
}
