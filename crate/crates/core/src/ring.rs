//! Ring graphs: a circular chain of K_{2,2} switches, one per variable,
//! joined by a positive and a negative occurrence path per variable.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cnf::{Assignment, CnfFormula, Lit};
use crate::graph::{CyclePair, Graph, GraphBuilder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("a ring needs at least 2 variables, got {0}")]
    TooFewVariables(usize),
    #[error("literal {lit} occurs {count} times, at least {need} required")]
    TooFewOccurrences { lit: Lit, count: usize, need: usize },
    #[error("{what} limited to {max}, got {got}")]
    SizeGuard { what: &'static str, got: usize, max: usize },
    #[error("variable {var}: {reason}")]
    NotStructured { var: usize, reason: &'static str },
    #[error("cycle pair does not split the ring into two cycles")]
    NotACyclePair,
}

/// Index of a switch vertex within `switches[i]`.
pub const A1: usize = 0;
pub const A2: usize = 1;
pub const B1: usize = 2;
pub const B2: usize = 3;

#[derive(Clone, Debug)]
pub struct RingGraph {
    pub graph: Graph,
    pub roles: Vec<String>,
    /// `[a_{i,1}, a_{i,2}, b_{i,1}, b_{i,2}]` per variable.
    pub switches: Vec<[usize; 4]>,
    /// Interior vertices of `P_{i,1}` (positive) and `P_{i,2}` (negative).
    pub paths: Vec<[Vec<usize>; 2]>,
    pub occ_sets: Vec<Vec<usize>>,
    pub squared: bool,
}

/// Side 1 is the positive path, side 2 the negative one.
fn side_index(side: usize) -> usize {
    debug_assert!(side == 1 || side == 2);
    side - 1
}

impl RingGraph {
    pub fn num_vars(&self) -> usize {
        self.switches.len()
    }

    pub fn a(&self, i: usize, side: usize) -> usize {
        self.switches[i][side_index(side)]
    }

    pub fn b(&self, i: usize, side: usize) -> usize {
        self.switches[i][2 + side_index(side)]
    }

    pub fn interior(&self, i: usize, side: usize) -> &[usize] {
        &self.paths[i][side_index(side)]
    }

    /// `P_{i,side}` including its end vertices `b_{i,side}` and `a_{i+1,side}`.
    pub fn full_path(&self, i: usize, side: usize) -> Vec<usize> {
        let mut p = vec![self.b(i, side)];
        p.extend_from_slice(self.interior(i, side));
        p.push(self.a((i + 1) % self.num_vars(), side));
        p
    }

    /// Copies the ring into a builder so that constructions can extend it.
    pub fn to_builder(&self) -> (GraphBuilder, Vec<String>) {
        let mut b = GraphBuilder::new(self.graph.n());
        for (u, v) in self.graph.edges() {
            b.add_edge(u, v).unwrap();
        }
        (b, self.roles.clone())
    }

    /// Cycle for the path choices `sides[i] ∈ {1, 2}`, as a closed vertex
    /// sequence. It owns `a_{i,sides[i−1]}` and `b_{i,sides[i]}`.
    pub fn sigma_cycle(&self, sides: &[usize]) -> Vec<usize> {
        let n = self.num_vars();
        let mut out = Vec::new();
        for i in 0..n {
            out.push(self.a(i, sides[(i + n - 1) % n]));
            out.push(self.b(i, sides[i]));
            out.extend_from_slice(self.interior(i, sides[i]));
        }
        out
    }

    /// C takes the positive path of every true variable; C′ is the rest.
    pub fn assignment_to_cycle_pair(&self, a: &Assignment) -> CyclePair {
        let sides: Vec<usize> = (0..self.num_vars()).map(|i| if a.value(i) { 1 } else { 2 }).collect();
        let other: Vec<usize> = sides.iter().map(|s| 3 - s).collect();
        CyclePair { cycle_a: self.sigma_cycle(&sides), cycle_b: self.sigma_cycle(&other) }
    }

    /// Reads the assignment off a vertex mask of the ring that must equal
    /// the vertex set of some path-respecting cycle.
    pub fn mask_to_assignment(&self, in_cycle: &[bool]) -> Result<Assignment, RingError> {
        let n = self.num_vars();
        let mut sides = Vec::with_capacity(n);
        for i in 0..n {
            let mut chosen = None;
            for side in [1, 2] {
                let full = self.full_path(i, side);
                let inner = &full[1..full.len() - 1];
                let hits = inner.iter().filter(|&&v| in_cycle[v]).count();
                if hits != 0 && hits != inner.len() {
                    return Err(RingError::NotStructured { var: i + 1, reason: "an occurrence path is split" });
                }
                if hits == inner.len() {
                    if chosen.is_some() {
                        return Err(RingError::NotStructured { var: i + 1, reason: "both occurrence paths chosen" });
                    }
                    chosen = Some(side);
                }
            }
            sides.push(chosen.ok_or(RingError::NotStructured { var: i + 1, reason: "no occurrence path chosen" })?);
        }
        let mut expected = vec![false; self.graph.n()];
        for v in self.sigma_cycle(&sides) {
            expected[v] = true;
        }
        for i in 0..n {
            if self.switches[i].iter().any(|&v| in_cycle[v] != expected[v]) {
                return Err(RingError::NotStructured { var: i + 1, reason: "switch vertices do not match the paths" });
            }
        }
        Ok(Assignment::new(sides.iter().map(|&s| s == 1).collect()))
    }

    /// Inverse of [`RingGraph::assignment_to_cycle_pair`]; `cycle_a` is
    /// the designated cycle.
    pub fn cycle_pair_to_assignment(&self, cp: &CyclePair) -> Result<Assignment, RingError> {
        if !cp.is_valid_in(&self.graph) || cp.cycle_a.len() + cp.cycle_b.len() != self.graph.n() {
            return Err(RingError::NotACyclePair);
        }
        let mut mask = vec![false; self.graph.n()];
        for &v in &cp.cycle_a {
            mask[v] = true;
        }
        self.mask_to_assignment(&mask)
    }

    pub fn hits_all_occ_sets(&self, cycle: &[usize]) -> bool {
        let mut mask = vec![false; self.graph.n()];
        for &v in cycle {
            mask[v] = true;
        }
        self.occ_sets.iter().all(|o| o.iter().any(|&v| mask[v]))
    }
}

fn check_occurrences(f: &CnfFormula, need: usize) -> Result<(), RingError> {
    if f.num_vars() < 2 {
        return Err(RingError::TooFewVariables(f.num_vars()));
    }
    for (idx, &count) in f.literal_counts().iter().enumerate() {
        if count < need {
            let lit = Lit { var: idx / 2, positive: idx % 2 == 0 };
            return Err(RingError::TooFewOccurrences { lit, count, need });
        }
    }
    Ok(())
}

/// Builds R(F). Requires at least 2 variables and every literal occurring.
pub fn build_ring(f: &CnfFormula) -> Result<RingGraph, RingError> {
    check_occurrences(f, 1)?;
    let n = f.num_vars();
    let counts = f.literal_counts();
    let mut roles = Vec::new();
    let mut switches = Vec::with_capacity(n);
    for i in 0..n {
        let base = roles.len();
        for (kind, s) in [("a", 1), ("a", 2), ("b", 1), ("b", 2)] {
            roles.push(format!("switch:{kind}[{},{s}]", i + 1));
        }
        switches.push([base, base + 1, base + 2, base + 3]);
    }
    let mut paths = Vec::with_capacity(n);
    for i in 0..n {
        let mut pair: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for (slot, sign) in [(0, '+'), (1, '-')] {
            for r in 0..counts[2 * i + slot] {
                pair[slot].push(roles.len());
                roles.push(format!("occ:{sign}x_{}[{}]", i + 1, r + 1));
            }
        }
        paths.push(pair);
    }
    let mut b = GraphBuilder::new(roles.len());
    for s in &switches {
        for a in [s[A1], s[A2]] {
            for bb in [s[B1], s[B2]] {
                b.add_edge(a, bb).unwrap();
            }
        }
    }
    for i in 0..n {
        for side in 0..2 {
            let mut prev = switches[i][2 + side];
            for &v in &paths[i][side] {
                b.add_edge(prev, v).unwrap();
                prev = v;
            }
            b.add_edge(prev, switches[(i + 1) % n][side]).unwrap();
        }
    }
    let mut seen = vec![0usize; 2 * n];
    let occ_sets = f
        .clauses()
        .iter()
        .map(|c| {
            c.iter()
                .map(|&l| {
                    let r = seen[l.index()];
                    seen[l.index()] += 1;
                    paths[l.var][usize::from(!l.positive)][r]
                })
                .collect()
        })
        .collect();
    Ok(RingGraph { graph: b.build(), roles, switches, paths, occ_sets, squared: false })
}

/// R′(F): R(F) with every occurrence path replaced by its square. Requires
/// every literal to occur at least twice.
pub fn build_ring_squared(f: &CnfFormula) -> Result<RingGraph, RingError> {
    check_occurrences(f, 2)?;
    let ring = build_ring(f)?;
    let (mut b, roles) = ring.to_builder();
    for i in 0..ring.num_vars() {
        for side in [1, 2] {
            let p = ring.full_path(i, side);
            for w in p.windows(3) {
                b.add_edge(w[0], w[2]).unwrap();
            }
        }
    }
    Ok(RingGraph { graph: b.build(), roles, squared: true, ..ring })
}

pub const STRUCTURED_MAX_VARS: usize = 20;
pub const RAW_MAX_VARS: usize = 6;

/// Structured search over the `2^n` path choices for a cycle meeting
/// every occurrence set; returns it with its complementary cycle.
pub fn ring_theorem_oracle(r: &RingGraph) -> Result<Option<CyclePair>, RingError> {
    let n = r.num_vars();
    if n > STRUCTURED_MAX_VARS {
        return Err(RingError::SizeGuard { what: "structured search variables", got: n, max: STRUCTURED_MAX_VARS });
    }
    for bits in 0..1u64 << n {
        let a = Assignment::from_bits(n, bits);
        let cp = r.assignment_to_cycle_pair(&a);
        if r.hits_all_occ_sets(&cp.cycle_a) {
            return Ok(Some(cp));
        }
    }
    Ok(None)
}

/// An unordered split of the vertex set, smaller-minimum side first.
pub type VertexSplit = (Vec<usize>, Vec<usize>);

fn normalized(mut x: Vec<usize>, mut y: Vec<usize>) -> VertexSplit {
    x.sort_unstable();
    y.sort_unstable();
    if x.first() <= y.first() {
        (x, y)
    } else {
        (y, x)
    }
}

/// Vertex splits given by the `2^n` path-respecting cycle pairs.
pub fn structured_splits(r: &RingGraph) -> BTreeSet<VertexSplit> {
    let n = r.num_vars();
    (0..1u64 << n)
        .map(|bits| {
            let cp = r.assignment_to_cycle_pair(&Assignment::from_bits(n, bits));
            normalized(cp.cycle_a, cp.cycle_b)
        })
        .collect()
}

/// Every split of V(R) into a cycle `C` and a set inducing a cycle, found
/// by enumerating the whole cycle space of the (unsquared) ring. Each
/// split is returned together with its cycle side.
pub fn raw_cycle_splits(r: &RingGraph) -> Result<Vec<(VertexSplit, Vec<usize>)>, RingError> {
    let g = &r.graph;
    let n = r.num_vars();
    if n > RAW_MAX_VARS {
        return Err(RingError::SizeGuard { what: "raw search variables", got: n, max: RAW_MAX_VARS });
    }
    let edges = g.edges();
    if edges.len() > 128 {
        return Err(RingError::SizeGuard { what: "raw search edges", got: edges.len(), max: 128 });
    }
    let edge_id = |u: usize, v: usize| edges.binary_search(&(u.min(v), u.max(v))).unwrap();
    // Fundamental cycles of a BFS tree.
    let mut parent = vec![usize::MAX; g.n()];
    let mut seen = vec![false; g.n()];
    let mut tree = vec![false; edges.len()];
    let mut order = vec![0];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &w in g.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                tree[edge_id(u, w)] = true;
                order.push(w);
            }
        }
    }
    let root_path = |mut v: usize| {
        let mut bits = 0u128;
        while parent[v] != usize::MAX {
            bits ^= 1 << edge_id(v, parent[v]);
            v = parent[v];
        }
        bits
    };
    let fundamentals: Vec<u128> = (0..edges.len())
        .filter(|&e| !tree[e])
        .map(|e| {
            let (u, v) = edges[e];
            root_path(u) ^ root_path(v) ^ (1 << e)
        })
        .collect();
    let mut out = Vec::new();
    let mut seen_splits = BTreeSet::new();
    for mask in 1u64..1 << fundamentals.len() {
        let mut bits = 0u128;
        for (i, f) in fundamentals.iter().enumerate() {
            if mask >> i & 1 == 1 {
                bits ^= f;
            }
        }
        let Some(cycle) = single_cycle(g, &edges, bits) else { continue };
        let mut in_cycle = vec![false; g.n()];
        for &v in &cycle {
            in_cycle[v] = true;
        }
        let rest: Vec<bool> = in_cycle.iter().map(|&b| !b).collect();
        let (h, ids) = g.induced(&rest);
        let is_cycle = h.n() >= 3 && h.is_connected() && (0..h.n()).all(|v| h.degree(v) == 2);
        if is_cycle {
            let split = normalized(cycle.clone(), ids);
            if seen_splits.insert(split.clone()) {
                out.push((split, cycle));
            }
        }
    }
    Ok(out)
}

/// Vertex set of the edge set `bits` if it forms one cycle.
fn single_cycle(g: &Graph, edges: &[(usize, usize)], bits: u128) -> Option<Vec<usize>> {
    let mut deg = vec![0usize; g.n()];
    let mut verts = Vec::new();
    for (e, &(u, v)) in edges.iter().enumerate() {
        if bits >> e & 1 == 1 {
            for x in [u, v] {
                deg[x] += 1;
                if deg[x] == 1 {
                    verts.push(x);
                }
            }
        }
    }
    if verts.iter().any(|&v| deg[v] != 2) {
        return None;
    }
    let mut keep = vec![false; g.n()];
    for &v in &verts {
        keep[v] = true;
    }
    // Connected 2-regular edge set: count edges equals vertices, and
    // reachability over chosen edges covers all chosen vertices.
    let mut seen = vec![false; g.n()];
    let mut stack = vec![verts[0]];
    seen[verts[0]] = true;
    let mut reached = 1;
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            let e = edges.binary_search(&(u.min(w), u.max(w))).unwrap();
            if bits >> e & 1 == 1 && !seen[w] {
                seen[w] = true;
                reached += 1;
                stack.push(w);
            }
        }
    }
    (reached == verts.len()).then_some(verts)
}

/// Raw counterpart of [`ring_theorem_oracle`]: some split whose cycle side
/// meets every occurrence set.
pub fn raw_ring_oracle(r: &RingGraph) -> Result<bool, RingError> {
    Ok(raw_cycle_splits(r)?.iter().any(|(_, c)| r.hits_all_occ_sets(c)))
}
