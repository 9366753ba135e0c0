//! Simple undirected graphs, vertex 2-partitions and the structural
//! subroutines shared by the solvers and reduction builders.

mod cycles;
mod io;
mod structure;

pub use cycles::{has_two_disjoint_cycles, two_disjoint_cycles, CyclePair};
pub use io::{parse_graph, serialize_dot, serialize_edge_list, GraphFormat};
pub use structure::{bridges_and_blocks, ear_decomposition, BlockStructure, Ear, EarDecomposition};

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    /// Ids are stored 0-based and shown 1-based, as in graph files.
    #[error("self-loop at vertex {}", .0 + 1)]
    SelfLoop(usize),
    #[error("duplicate edge {}-{}", .0 + 1, .1 + 1)]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("header declares {declared} edges but {found} were given")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("graph has no vertices")]
    Empty,
    #[error("partition covers {got} vertices, graph has {n}")]
    PartialAssignment { got: usize, n: usize },
    #[error("vertex {0} is assigned to part {1}, expected 1 or 2")]
    BadPart(usize, u8),
    #[error("graph is not 2-edge-connected")]
    NotTwoEdgeConnected,
}

/// Immutable simple undirected graph on the vertices `0..n`.
///
/// Neighbor lists are kept sorted so that equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], m: 0 }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut b = GraphBuilder::new(n);
        for (u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for (u, nb) in self.adj.iter().enumerate() {
            out.extend(nb.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> Result<usize, GraphError> {
        self.adj.iter().map(Vec::len).min().ok_or(GraphError::Empty)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Subgraph induced by `keep`; returns the graph and the map from new ids
    /// to original ids (in increasing original order).
    pub fn induced(&self, keep: &[bool]) -> (Graph, Vec<usize>) {
        let old: Vec<usize> = (0..self.n()).filter(|&v| keep[v]).collect();
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in old.iter().enumerate() {
            new_id[v] = i;
        }
        let adj = old
            .iter()
            .map(|&v| self.adj[v].iter().filter(|&&w| keep[w]).map(|&w| new_id[w]).collect())
            .collect::<Vec<Vec<usize>>>();
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        (Graph { adj, m }, old)
    }

    /// Graph with the given edge removed (no-op when absent).
    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let mut g = self.clone();
        if let Ok(i) = g.adj[u].binary_search(&v) {
            g.adj[u].remove(i);
            let j = g.adj[v].binary_search(&u).expect("symmetric adjacency");
            g.adj[v].remove(j);
            g.m -= 1;
        }
        g
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        self.components_within(&vec![true; self.n()])
    }

    /// Components of the subgraph induced by `mask`.
    pub fn components_within(&self, mask: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if !mask[s] || seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if mask[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// A single vertex counts as connected; the empty graph does not.
    pub fn is_connected(&self) -> bool {
        self.n() > 0 && self.connected_components().len() == 1
    }

    /// True if the graph contains any cycle.
    pub fn has_cycle(&self) -> bool {
        self.m + self.connected_components().len() > self.n()
    }

    /// Lexicographically least triangle, if any.
    pub fn find_triangle(&self) -> Option<[usize; 3]> {
        for a in 0..self.n() {
            for &b in self.adj[a].iter().filter(|&&b| b > a) {
                for &c in self.adj[b].iter().filter(|&&c| c > b) {
                    if self.has_edge(a, c) {
                        return Some([a, b, c]);
                    }
                }
            }
        }
        None
    }

    /// Two copies of the graph plus an edge between each pair of twins.
    /// Copy one keeps ids `0..n`, copy two uses `n..2n`.
    pub fn double_join(&self) -> Graph {
        let n = self.n();
        let mut adj = Vec::with_capacity(2 * n);
        for c in 0..2 {
            for v in 0..n {
                let mut nb: Vec<usize> = self.adj[v].iter().map(|&w| w + c * n).collect();
                nb.push(if c == 0 { v + n } else { v });
                nb.sort_unstable();
                adj.push(nb);
            }
        }
        Graph { adj, m: 2 * self.m + n }
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|nb| nb.iter().map(|&w| w + off).collect()));
        Graph { adj, m: self.m + other.m }
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n(), self.m)
    }
}

/// Incremental construction of a [`Graph`]; rejects loops and parallel edges.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    adj: Vec<BTreeSet<usize>>,
    m: usize,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder { adj: vec![BTreeSet::new(); n], m: 0 }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(BTreeSet::new());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::OutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if !self.adj[u].insert(v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.adj[v].insert(u);
        self.m += 1;
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn build(self) -> Graph {
        Graph { adj: self.adj.into_iter().map(|s| s.into_iter().collect()).collect(), m: self.m }
    }
}

/// Total assignment of vertices to part 1 or part 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<u8>);

impl Partition {
    /// Wraps raw part labels. Labels are validated against a graph by
    /// [`Partition::validate`] and [`check_partition`].
    pub fn new(parts: Vec<u8>) -> Self {
        Partition(parts)
    }

    /// Part 1 for members of `first`, part 2 otherwise.
    pub fn from_first_part(n: usize, first: &[bool]) -> Self {
        Partition((0..n).map(|v| if first[v] { 1 } else { 2 }).collect())
    }

    pub fn part(&self, v: usize) -> u8 {
        self.0[v]
    }

    pub fn parts(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Membership mask of part `side` (1 or 2).
    pub fn mask(&self, side: u8) -> Vec<bool> {
        self.0.iter().map(|&p| p == side).collect()
    }

    pub fn members(&self, side: u8) -> Vec<usize> {
        (0..self.0.len()).filter(|&v| self.0[v] == side).collect()
    }

    pub fn swapped(&self) -> Partition {
        Partition(self.0.iter().map(|&p| 3 - p).collect())
    }

    pub fn validate(&self, g: &Graph) -> Result<(), GraphError> {
        if self.0.len() != g.n() {
            return Err(GraphError::PartialAssignment { got: self.0.len(), n: g.n() });
        }
        if let Some(v) = self.0.iter().position(|&p| p != 1 && p != 2) {
            return Err(GraphError::BadPart(v, self.0[v]));
        }
        Ok(())
    }
}

/// A vertex whose in-part degree is below the requirement of its part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub vertex: usize,
    pub part: u8,
    pub in_part_degree: usize,
    pub required: usize,
}

/// Every vertex whose in-part degree is below `k1` (part 1) or `k2` (part 2).
/// An empty list means `p` is a (δ≥k1, δ≥k2)-partition.
pub fn check_partition(g: &Graph, p: &Partition, k1: usize, k2: usize) -> Result<Vec<Violation>, GraphError> {
    p.validate(g)?;
    let mut out = Vec::new();
    for v in 0..g.n() {
        let side = p.part(v);
        let d = g.neighbors(v).iter().filter(|&&w| p.part(w) == side).count();
        let required = if side == 1 { k1 } else { k2 };
        if d < required {
            out.push(Violation { vertex: v, part: side, in_part_degree: d, required });
        }
    }
    Ok(out)
}

/// Properties a part of a 2-partition can be asked to induce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartProperty {
    /// Induced minimum degree at least the given value.
    MinDegree(usize),
    /// Nonempty and connected.
    Connected,
    /// Connected, bridgeless, at least 3 vertices.
    TwoEdgeConnected,
    /// Connected and containing a cycle.
    ConnectedWithCycle,
}

impl PartProperty {
    pub fn holds(&self, g: &Graph, mask: &[bool]) -> bool {
        let (h, _) = g.induced(mask);
        match *self {
            PartProperty::MinDegree(k) => h.n() > 0 && h.min_degree().is_ok_and(|d| d >= k),
            PartProperty::Connected => h.is_connected(),
            PartProperty::TwoEdgeConnected => bridges_and_blocks(&h).is_two_edge_connected,
            PartProperty::ConnectedWithCycle => h.is_connected() && h.has_cycle(),
        }
    }

    /// Minimum degree every vertex of such a part must have inside it.
    pub fn degree_floor(&self) -> usize {
        match *self {
            PartProperty::MinDegree(k) => k,
            PartProperty::Connected => 0,
            PartProperty::TwoEdgeConnected => 2,
            PartProperty::ConnectedWithCycle => 1,
        }
    }

    /// Minimum number of vertices of such a part.
    pub fn size_floor(&self) -> usize {
        match *self {
            PartProperty::MinDegree(k) => k + 1,
            PartProperty::Connected => 1,
            PartProperty::TwoEdgeConnected | PartProperty::ConnectedWithCycle => 3,
        }
    }

    pub fn needs_connectivity(&self) -> bool {
        !matches!(self, PartProperty::MinDegree(_))
    }
}

impl fmt::Display for PartProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartProperty::MinDegree(k) => write!(f, "mindeg>={k}"),
            PartProperty::Connected => write!(f, "connected"),
            PartProperty::TwoEdgeConnected => write!(f, "2ec"),
            PartProperty::ConnectedWithCycle => write!(f, "connected+cycle"),
        }
    }
}

/// The pair of properties a 2-partition must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Target {
    pub first: PartProperty,
    pub second: PartProperty,
}

impl Target {
    pub fn min_degree(k1: usize, k2: usize) -> Self {
        Target { first: PartProperty::MinDegree(k1), second: PartProperty::MinDegree(k2) }
    }

    pub fn new(first: PartProperty, second: PartProperty) -> Self {
        Target { first, second }
    }

    pub fn property(&self, side: u8) -> PartProperty {
        if side == 1 {
            self.first
        } else {
            self.second
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.first == self.second
    }

    /// Both parts nonempty and each satisfying its property.
    pub fn holds(&self, g: &Graph, p: &Partition) -> bool {
        if p.validate(g).is_err() {
            return false;
        }
        [1u8, 2].iter().all(|&s| {
            let mask = p.mask(s);
            mask.iter().any(|&b| b) && self.property(s).holds(g, &mask)
        })
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> Graph {
        Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn builder_rejects_loops_and_duplicates() {
        let mut b = GraphBuilder::new(3);
        assert_eq!(b.add_edge(1, 1), Err(GraphError::SelfLoop(1)));
        b.add_edge(0, 1).unwrap();
        assert_eq!(b.add_edge(1, 0), Err(GraphError::DuplicateEdge(0, 1)));
        assert!(matches!(b.add_edge(0, 5), Err(GraphError::OutOfRange { .. })));
    }

    #[test]
    fn min_degree_cases() {
        assert_eq!(Graph::complete(4).min_degree(), Ok(3));
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.min_degree(), Ok(1));
        assert_eq!(Graph::empty(0).min_degree(), Err(GraphError::Empty));
    }

    #[test]
    fn check_partition_examples() {
        let g = two_triangles();
        let p = Partition::new(vec![1, 1, 1, 2, 2, 2]);
        assert!(check_partition(&g, &p, 2, 2).unwrap().is_empty());

        let k4 = Graph::complete(4);
        let p = Partition::new(vec![1, 2, 2, 2]);
        let v = check_partition(&k4, &p, 1, 2).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].vertex, 0);
        assert_eq!(v[0].in_part_degree, 0);

        let c6 = Graph::cycle(6);
        let p = Partition::new(vec![1, 2, 1, 2, 1, 2]);
        assert_eq!(check_partition(&c6, &p, 1, 1).unwrap().len(), 6);

        let short = Partition::new(vec![1, 2]);
        assert!(matches!(check_partition(&c6, &short, 1, 1), Err(GraphError::PartialAssignment { .. })));
    }

    #[test]
    fn triangles() {
        assert_eq!(Graph::complete(4).find_triangle(), Some([0, 1, 2]));
        assert_eq!(Graph::cycle(5).find_triangle(), None);
    }

    #[test]
    fn double_join_examples() {
        let prism = Graph::complete(3).double_join();
        assert_eq!(prism.n(), 6);
        assert_eq!(prism.min_degree(), Ok(3));
        let c4 = Graph::complete(2).double_join();
        assert_eq!(c4.min_degree(), Ok(2));
        assert_eq!(c4.m(), 4);
        assert_eq!(Graph::empty(1).double_join(), Graph::complete(2));
    }

    #[test]
    fn components_and_cycles() {
        let g = two_triangles();
        assert_eq!(g.connected_components(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert!(g.has_cycle());
        assert!(!Graph::path(5).has_cycle());
        assert!(Graph::empty(1).is_connected());
        assert!(!Graph::empty(0).is_connected());
    }

    #[test]
    fn part_properties() {
        let g = two_triangles();
        let p = Partition::new(vec![1, 1, 1, 2, 2, 2]);
        let t = Target::new(PartProperty::TwoEdgeConnected, PartProperty::ConnectedWithCycle);
        assert!(t.holds(&g, &p));
        let p = Partition::new(vec![1, 1, 2, 2, 2, 2]);
        assert!(!t.holds(&g, &p));
    }
}
