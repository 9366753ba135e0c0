//! Bridges, 2-edge-connected components, blocks and ear decompositions.

use serde::Serialize;

use super::{Graph, GraphError};

const UNSET: usize = usize::MAX;

/// Depth-first forest with preorder indices and low points.
struct Dfs {
    tin: Vec<usize>,
    low: Vec<usize>,
    parent: Vec<usize>,
    order: Vec<usize>,
}

impl Dfs {
    fn run(g: &Graph) -> (Dfs, Vec<Vec<(usize, usize)>>) {
        let n = g.n();
        let mut d = Dfs { tin: vec![UNSET; n], low: vec![0; n], parent: vec![UNSET; n], order: Vec::with_capacity(n) };
        let mut blocks = Vec::new();
        let mut edge_stack: Vec<(usize, usize)> = Vec::new();
        let mut next = vec![0usize; n];
        for root in 0..n {
            if d.tin[root] != UNSET {
                continue;
            }
            d.tin[root] = d.order.len();
            d.low[root] = d.tin[root];
            d.order.push(root);
            let mut stack = vec![root];
            while let Some(&u) = stack.last() {
                if next[u] < g.degree(u) {
                    let w = g.neighbors(u)[next[u]];
                    next[u] += 1;
                    if d.tin[w] == UNSET {
                        d.parent[w] = u;
                        d.tin[w] = d.order.len();
                        d.low[w] = d.tin[w];
                        d.order.push(w);
                        edge_stack.push((u, w));
                        stack.push(w);
                    } else if w != d.parent[u] && d.tin[w] < d.tin[u] {
                        d.low[u] = d.low[u].min(d.tin[w]);
                        edge_stack.push((u, w));
                    }
                } else {
                    stack.pop();
                    let p = d.parent[u];
                    if p != UNSET {
                        d.low[p] = d.low[p].min(d.low[u]);
                        if d.low[u] >= d.tin[p] {
                            let mut block = Vec::new();
                            while let Some(e) = edge_stack.pop() {
                                block.push(e);
                                if e == (p, u) {
                                    break;
                                }
                            }
                            blocks.push(block);
                        }
                    }
                }
            }
        }
        (d, blocks)
    }
}

/// Bridge / block decomposition of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockStructure {
    /// Bridges as `(u, v)` with `u < v`, sorted.
    pub bridges: Vec<(usize, usize)>,
    /// Vertex sets of the 2-edge-connected components (sorted, ordered by least vertex).
    pub two_edge_components: Vec<Vec<usize>>,
    /// Component index pairs joined by a bridge (the bridge tree).
    pub bridge_tree: Vec<(usize, usize)>,
    /// Vertex sets of the blocks; isolated vertices form one-vertex blocks.
    pub blocks: Vec<Vec<usize>>,
    pub cut_vertices: Vec<usize>,
    pub is_connected: bool,
    /// Connected, bridgeless and at least 3 vertices.
    pub is_two_edge_connected: bool,
}

impl BlockStructure {
    /// Number of cut vertices lying in each block.
    pub fn block_cut_counts(&self) -> Vec<usize> {
        let n = self.cut_vertices.iter().copied().max().map_or(0, |m| m + 1);
        let mut is_cut = vec![false; n];
        for &c in &self.cut_vertices {
            is_cut[c] = true;
        }
        self.blocks.iter().map(|b| b.iter().filter(|&&v| v < n && is_cut[v]).count()).collect()
    }

    /// Blocks that are leaves of the block-cutvertex tree of a connected
    /// graph with at least two blocks.
    pub fn leaf_blocks(&self) -> Vec<usize> {
        if self.blocks.len() < 2 {
            return Vec::new();
        }
        self.block_cut_counts().into_iter().enumerate().filter(|&(_, c)| c == 1).map(|(i, _)| i).collect()
    }
}

pub fn bridges_and_blocks(g: &Graph) -> BlockStructure {
    let n = g.n();
    let (dfs, edge_blocks) = Dfs::run(g);

    let mut bridges = Vec::new();
    for v in 0..n {
        let p = dfs.parent[v];
        if p != UNSET && dfs.low[v] > dfs.tin[p] {
            bridges.push((p.min(v), p.max(v)));
        }
    }
    bridges.sort_unstable();

    let mut comp = vec![UNSET; n];
    let mut two_edge_components = Vec::new();
    for s in 0..n {
        if comp[s] != UNSET {
            continue;
        }
        let id = two_edge_components.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            i += 1;
            for &w in g.neighbors(v) {
                if comp[w] == UNSET && bridges.binary_search(&(v.min(w), v.max(w))).is_err() {
                    comp[w] = id;
                    members.push(w);
                }
            }
        }
        members.sort_unstable();
        two_edge_components.push(members);
    }
    let bridge_tree = bridges.iter().map(|&(u, v)| (comp[u], comp[v])).collect();

    let mut blocks: Vec<Vec<usize>> = edge_blocks
        .into_iter()
        .map(|edges| {
            let mut vs: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
            vs.sort_unstable();
            vs.dedup();
            vs
        })
        .collect();
    for v in 0..n {
        if g.degree(v) == 0 {
            blocks.push(vec![v]);
        }
    }
    blocks.sort();

    let mut count = vec![0usize; n];
    for b in &blocks {
        for &v in b {
            count[v] += 1;
        }
    }
    let cut_vertices = (0..n).filter(|&v| count[v] > 1).collect();

    let is_connected = g.is_connected();
    let is_two_edge_connected = is_connected && bridges.is_empty() && n >= 3;
    BlockStructure { bridges, two_edge_components, bridge_tree, blocks, cut_vertices, is_connected, is_two_edge_connected }
}

/// One ear: a vertex sequence whose consecutive pairs are its edges. The
/// initial ear and any closed ear start and end at the same vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ear {
    pub vertices: Vec<usize>,
}

impl Ear {
    pub fn is_trivial(&self) -> bool {
        self.vertices.len() == 2
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.first() == self.vertices.last()
    }

    pub fn interior(&self) -> &[usize] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.vertices[0], *self.vertices.last().expect("ear is nonempty"))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EarDecomposition {
    pub ears: Vec<Ear>,
    /// Index of the last ear with at least one interior vertex.
    pub last_nontrivial: usize,
}

/// Chain decomposition from a depth-first search: vertices are visited in
/// preorder and, at each vertex, back edges are taken in increasing preorder
/// of their lower endpoint.
pub fn ear_decomposition(g: &Graph) -> Result<EarDecomposition, GraphError> {
    let bs = bridges_and_blocks(g);
    if !bs.is_two_edge_connected {
        return Err(GraphError::NotTwoEdgeConnected);
    }
    let (dfs, _) = Dfs::run(g);
    let n = g.n();
    let mut visited = vec![false; n];
    let mut ears = Vec::new();
    for &v in &dfs.order {
        let mut back: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| dfs.tin[w] > dfs.tin[v] && dfs.parent[w] != v)
            .collect();
        back.sort_by_key(|&w| dfs.tin[w]);
        for w in back {
            visited[v] = true;
            let mut chain = vec![v];
            let mut x = w;
            while !visited[x] {
                visited[x] = true;
                chain.push(x);
                x = dfs.parent[x];
            }
            chain.push(x);
            ears.push(Ear { vertices: chain });
        }
    }
    let covered: usize = ears.iter().map(|e| e.vertices.len() - 1).sum();
    if covered != g.m() {
        return Err(GraphError::NotTwoEdgeConnected);
    }
    let last_nontrivial = ears.iter().rposition(|e| !e.is_trivial()).expect("first ear is a cycle");
    Ok(EarDecomposition { ears, last_nontrivial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn check_ear_axioms(g: &Graph, d: &EarDecomposition) {
        let first = &d.ears[0];
        assert!(first.is_closed() && first.vertices.len() >= 4, "first ear must be a cycle");
        let mut seen: BTreeSet<usize> = first.vertices.iter().copied().collect();
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for ear in &d.ears {
            for e in ear.edges() {
                assert!(g.has_edge(e.0, e.1));
                assert!(edges.insert(e), "edge {e:?} used twice");
            }
        }
        for ear in &d.ears[1..] {
            let (a, b) = ear.endpoints();
            assert!(seen.contains(&a) && seen.contains(&b));
            for v in ear.interior() {
                assert!(seen.insert(*v), "interior vertex {v} already present");
            }
        }
        assert_eq!(edges.len(), g.m());
        assert_eq!(seen.len(), g.n());
    }

    fn theta() -> Graph {
        // 0 and 1 joined by paths 0-2-1, 0-3-4-1, 0-5-1
        Graph::from_edges(6, [(0, 2), (2, 1), (0, 3), (3, 4), (4, 1), (0, 5), (5, 1)]).unwrap()
    }

    #[test]
    fn bridges_between_triangles() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]).unwrap();
        let bs = bridges_and_blocks(&g);
        assert_eq!(bs.bridges, vec![(2, 3)]);
        assert_eq!(bs.two_edge_components.len(), 2);
        assert_eq!(bs.blocks.len(), 3);
        assert_eq!(bs.cut_vertices, vec![2, 3]);
        assert!(bs.is_connected && !bs.is_two_edge_connected);
        assert_eq!(bs.leaf_blocks().len(), 2);
    }

    #[test]
    fn k4_and_path() {
        let bs = bridges_and_blocks(&Graph::complete(4));
        assert!(bs.bridges.is_empty());
        assert_eq!(bs.blocks, vec![vec![0, 1, 2, 3]]);
        assert!(bs.is_two_edge_connected);

        let bs = bridges_and_blocks(&Graph::path(4));
        assert_eq!(bs.bridges.len(), 3);
        assert_eq!(bs.blocks.len(), 3);
        assert!(bs.blocks.iter().all(|b| b.len() == 2));
    }

    #[test]
    fn two_vertices_are_not_two_edge_connected() {
        assert!(!bridges_and_blocks(&Graph::complete(2)).is_two_edge_connected);
        assert!(!bridges_and_blocks(&Graph::empty(1)).is_two_edge_connected);
    }

    #[test]
    fn ears_of_c5() {
        let g = Graph::cycle(5);
        let d = ear_decomposition(&g).unwrap();
        assert_eq!(d.ears.len(), 1);
        assert_eq!(d.last_nontrivial, 0);
        check_ear_axioms(&g, &d);
    }

    #[test]
    fn ears_of_k4() {
        let g = Graph::complete(4);
        let d = ear_decomposition(&g).unwrap();
        check_ear_axioms(&g, &d);
        assert_eq!(d.ears.len(), 3);
        assert_eq!(d.ears[0].vertices.len(), 4, "initial triangle");
        assert_eq!(d.ears[1].interior().len(), 1);
        assert!(d.ears[2].is_trivial());
        assert_eq!(d.last_nontrivial, 1);
    }

    #[test]
    fn ears_of_theta() {
        let g = theta();
        let d = ear_decomposition(&g).unwrap();
        check_ear_axioms(&g, &d);
        assert_eq!(d.ears.len(), 2);
        assert!(!d.ears[1].is_trivial());
    }

    #[test]
    fn bowtie_has_closed_ear() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        let d = ear_decomposition(&g).unwrap();
        check_ear_axioms(&g, &d);
        assert!(d.ears[1].is_closed());
    }

    #[test]
    fn ears_reject_bridges() {
        assert_eq!(ear_decomposition(&Graph::path(4)), Err(GraphError::NotTwoEdgeConnected));
    }
}
