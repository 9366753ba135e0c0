//! Hardness constructions from CNF formulas to partition instances, with
//! witness maps in both directions.

mod builders;
pub mod prepare;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Assignment, CnfError, CnfFormula};
use crate::gadgets::GadgetError;
use crate::graph::{Graph, Partition, Target};
use crate::ring::{RingError, RingGraph};

pub use builders::{build_1k, build_1k_mindeg, build_23_mindeg3, build_2ec_2ec, build_2ec_conn, build_aa, build_k1k2, build_kk1};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error("assignment does not satisfy the encoded formula")]
    Unsatisfied,
    #[error("partition has {got} entries, graph has {want} vertices")]
    PartitionSize { got: usize, want: usize },
    #[error("reverse claim fails: {0}")]
    ReverseClaim(String),
    #[error("unknown builder `{0}`")]
    UnknownBuilder(String),
}

/// A construction together with its numeric parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "snake_case")]
pub enum Reduction {
    OneK { k: usize },
    OneKMindeg { k: usize },
    K1K2 { k1: usize, k2: usize },
    Aa { a: usize },
    TwoThreeMindeg3,
    Kk1 { k: usize },
    TwoEcConn,
    TwoEcTwoEc,
}

impl Reduction {
    pub const NAMES: [&'static str; 8] = ["1k", "1k_mindeg", "k1k2", "aa", "23_mindeg3", "kk1", "2ec_conn", "2ec_2ec"];

    pub fn name(&self) -> &'static str {
        match self {
            Reduction::OneK { .. } => "1k",
            Reduction::OneKMindeg { .. } => "1k_mindeg",
            Reduction::K1K2 { .. } => "k1k2",
            Reduction::Aa { .. } => "aa",
            Reduction::TwoThreeMindeg3 => "23_mindeg3",
            Reduction::Kk1 { .. } => "kk1",
            Reduction::TwoEcConn => "2ec_conn",
            Reduction::TwoEcTwoEc => "2ec_2ec",
        }
    }

    /// Looks a builder up by name; `k`, `k1`, `k2`, `a` fill its parameters.
    pub fn from_name(name: &str, params: &BTreeMap<String, usize>) -> Result<Self, ReductionError> {
        let get = |key: &str, default: usize| params.get(key).copied().unwrap_or(default);
        Ok(match name {
            "1k" => Reduction::OneK { k: get("k", 3) },
            "1k_mindeg" => Reduction::OneKMindeg { k: get("k", 4) },
            "k1k2" => Reduction::K1K2 { k1: get("k1", 2), k2: get("k2", 2) },
            "aa" => Reduction::Aa { a: get("a", 3) },
            "23_mindeg3" => Reduction::TwoThreeMindeg3,
            "kk1" => Reduction::Kk1 { k: get("k", 2) },
            "2ec_conn" => Reduction::TwoEcConn,
            "2ec_2ec" => Reduction::TwoEcTwoEc,
            other => return Err(ReductionError::UnknownBuilder(other.to_string())),
        })
    }

    pub fn params(&self) -> BTreeMap<String, usize> {
        let pairs: Vec<(&str, usize)> = match *self {
            Reduction::OneK { k } | Reduction::OneKMindeg { k } | Reduction::Kk1 { k } => vec![("k", k)],
            Reduction::K1K2 { k1, k2 } => vec![("k1", k1), ("k2", k2)],
            Reduction::Aa { a } => vec![("a", a)],
            _ => vec![],
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// Rewrites `f` into an equisatisfiable formula meeting this builder's
    /// preconditions. Original variables keep their indices.
    pub fn prepare(&self, f: &CnfFormula) -> Result<CnfFormula, ReductionError> {
        Ok(match *self {
            Reduction::OneK { .. } => prepare::for_one_k(f, 2)?,
            Reduction::OneKMindeg { k } => prepare::for_one_k(f, 2.max(k.saturating_sub(3)))?,
            Reduction::K1K2 { k1, .. } => {
                let g = prepare::for_ring(f, 1, true)?;
                let need = k1.saturating_sub(2 * g.num_vars()).max(1);
                prepare::at_least_clauses(&g, need)
            }
            Reduction::Aa { .. } => prepare::at_least_clauses(&prepare::for_ring(f, 2, true)?, 2),
            Reduction::TwoThreeMindeg3 | Reduction::Kk1 { .. } => prepare::for_ring(f, 2, true)?,
            Reduction::TwoEcConn | Reduction::TwoEcTwoEc => prepare::for_ring(f, 1, false)?,
        })
    }

    /// Builds from a formula that already meets the preconditions.
    pub fn build(&self, f: &CnfFormula) -> Result<ReductionArtifact, ReductionError> {
        match *self {
            Reduction::OneK { k } => build_1k(f, k),
            Reduction::OneKMindeg { k } => build_1k_mindeg(f, k),
            Reduction::K1K2 { k1, k2 } => build_k1k2(f, k1, k2),
            Reduction::Aa { a } => build_aa(f, a),
            Reduction::TwoThreeMindeg3 => build_23_mindeg3(f),
            Reduction::Kk1 { k } => build_kk1(f, k),
            Reduction::TwoEcConn => build_2ec_conn(f),
            Reduction::TwoEcTwoEc => build_2ec_2ec(f),
        }
    }

    /// `prepare` then `build`; the artifact records the source hash.
    pub fn build_from_source(&self, f: &CnfFormula) -> Result<ReductionArtifact, ReductionError> {
        let prepared = self.prepare(f)?;
        let mut art = self.build(&prepared)?;
        art.source_hash = f.content_hash();
        art.source_vars = f.num_vars();
        Ok(art)
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        let params = self.params();
        if !params.is_empty() {
            let list: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", list.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for Reduction {
    type Err = ReductionError;

    /// `name` or `name(k=3)` / `name(k1=2,k2=3)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, rest) = s.split_once('(').unwrap_or((s, ""));
        let mut params = BTreeMap::new();
        for item in rest.trim_end_matches(')').split(',').filter(|x| !x.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| ReductionError::Parameter(item.to_string()))?;
            let v = v.trim().parse().map_err(|_| ReductionError::Parameter(item.to_string()))?;
            params.insert(k.trim().to_string(), v);
        }
        Reduction::from_name(name.trim(), &params)
    }
}

/// Which part a vertex lands in under the forward witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Follow {
    /// Always this part.
    Part(u8),
    /// Same part as this base vertex (a ring or literal vertex).
    Vertex(usize),
}

/// How assignments are read from and written to the base graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Layout {
    /// Ring vertices are `0..ring_vertices`. The cycle avoiding the true
    /// paths goes to `cycle_part`; the other part contains `anchor`.
    Ring { ring_vertices: usize, cycle_part: u8, anchor: usize },
    /// `literals[i] = [v_i, v̄_i]`; false literals go to part 1.
    Literal { y: Vec<usize>, literals: Vec<[usize; 2]> },
}

#[derive(Clone, Debug)]
pub struct ReductionArtifact {
    pub reduction: Reduction,
    /// The formula actually encoded (after preparation).
    pub formula: CnfFormula,
    pub source_hash: String,
    pub source_vars: usize,
    pub graph: Graph,
    pub roles: Vec<String>,
    pub target: Target,
    pub declared_min_degree: Option<usize>,
    pub layout: Layout,
    /// Forward placement rule for each vertex of one copy.
    pub follow: Vec<Follow>,
    /// Vertices per copy; the graph is `copies` doubled copies of it.
    pub base_n: usize,
    pub copies: usize,
    pub ring: Option<RingGraph>,
}

/// JSON companion of a generated graph file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidecar {
    pub builder: String,
    pub params: BTreeMap<String, usize>,
    pub target: Target,
    pub declared_min_degree: Option<usize>,
    pub n: usize,
    pub m: usize,
    pub roles: Vec<String>,
    pub witness: WitnessMeta,
    pub source_formula_hash: String,
    pub encoded_formula_hash: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessMeta {
    pub layout: Layout,
    /// Role of a vertex that always lies in the true-side part.
    pub true_side_role: Option<String>,
    pub base_n: usize,
    pub copies: usize,
}

impl ReductionArtifact {
    pub fn sidecar(&self) -> Sidecar {
        let true_side_role = match &self.layout {
            Layout::Ring { anchor, .. } => Some(self.roles[*anchor].clone()),
            Layout::Literal { .. } => None,
        };
        Sidecar {
            builder: self.reduction.name().to_string(),
            params: self.reduction.params(),
            target: self.target,
            declared_min_degree: self.declared_min_degree,
            n: self.graph.n(),
            m: self.graph.m(),
            roles: self.roles.clone(),
            witness: WitnessMeta {
                layout: self.layout.clone(),
                true_side_role,
                base_n: self.base_n,
                copies: self.copies,
            },
            source_formula_hash: self.source_hash.clone(),
            encoded_formula_hash: self.formula.content_hash(),
        }
    }

    /// Joins each vertex to its twin in a second copy, `times` times.
    fn doubled(mut self, times: usize) -> Self {
        for _ in 0..times {
            let n = self.graph.n();
            self.graph = self.graph.double_join();
            let twins: Vec<String> = self.roles.iter().map(|r| format!("{r}@c")).collect();
            self.roles.extend(twins);
            debug_assert_eq!(self.roles.len(), 2 * n);
            self.copies *= 2;
        }
        self
    }

    /// Part of each base vertex under the forward witness for `a`.
    fn base_parts(&self, a: &Assignment) -> Vec<u8> {
        let place: Box<dyn Fn(usize) -> u8 + '_> = match &self.layout {
            Layout::Ring { ring_vertices, cycle_part, .. } => {
                let ring = self.ring.as_ref().expect("ring layout keeps its ring");
                let pair = ring.assignment_to_cycle_pair(a);
                let mut in_prime = vec![false; *ring_vertices];
                for &v in &pair.cycle_b {
                    in_prime[v] = true;
                }
                let cp = *cycle_part;
                Box::new(move |v| if in_prime[v] { cp } else { 3 - cp })
            }
            Layout::Literal { literals, .. } => {
                let mut value = BTreeMap::new();
                for (i, pair) in literals.iter().enumerate() {
                    value.insert(pair[0], a.value(i));
                    value.insert(pair[1], !a.value(i));
                }
                Box::new(move |v| if value[&v] { 2 } else { 1 })
            }
        };
        self.follow
            .iter()
            .map(|f| match *f {
                Follow::Part(p) => p,
                Follow::Vertex(v) => place(v),
            })
            .collect()
    }

    /// The explicit witness partition for a satisfying assignment of the
    /// encoded formula.
    pub fn witness_forward(&self, a: &Assignment) -> Result<Partition, ReductionError> {
        if a.len() < self.formula.num_vars() || !self.formula.is_satisfied_by(a) {
            return Err(ReductionError::Unsatisfied);
        }
        let base = self.base_parts(a);
        Ok(Partition::new(base.iter().copied().cycle().take(self.base_n * self.copies).collect()))
    }

    /// Forward witness from an assignment of the source formula, extended
    /// to the variables added by preparation.
    pub fn witness_forward_source(&self, a: &Assignment) -> Result<Partition, ReductionError> {
        let full = prepare::extend_assignment(&self.formula, a)?.ok_or(ReductionError::Unsatisfied)?;
        self.witness_forward(&full)
    }

    /// Reads an assignment of the encoded formula off a partition. Every
    /// doubled copy is tried; the first that yields a satisfying
    /// assignment wins.
    pub fn witness_backward(&self, p: &Partition) -> Result<Assignment, ReductionError> {
        let want = self.base_n * self.copies;
        if p.len() != want {
            return Err(ReductionError::PartitionSize { got: p.len(), want });
        }
        let mut last = None;
        for c in 0..self.copies {
            let parts = &p.parts()[c * self.base_n..(c + 1) * self.base_n];
            match self.read_copy(parts) {
                Ok(a) if self.formula.is_satisfied_by(&a) => return Ok(a),
                Ok(_) => last = Some("the read-off assignment falsifies a clause".to_string()),
                Err(e) => last = Some(e.to_string()),
            }
        }
        Err(ReductionError::ReverseClaim(last.unwrap_or_default()))
    }

    fn read_copy(&self, parts: &[u8]) -> Result<Assignment, ReductionError> {
        match &self.layout {
            Layout::Ring { ring_vertices, anchor, .. } => {
                let ring = self.ring.as_ref().expect("ring layout keeps its ring");
                let true_part = parts[*anchor];
                let mask: Vec<bool> = parts[..*ring_vertices].iter().map(|&x| x == true_part).collect();
                Ok(ring.mask_to_assignment(&mask)?)
            }
            Layout::Literal { literals, .. } => Ok(Assignment::new(
                literals.iter().map(|&[v, nv]| (parts[v] == 1 && parts[nv] == 1) || parts[v] == 2).collect(),
            )),
        }
    }
}
