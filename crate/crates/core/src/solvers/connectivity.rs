//! Connectivity-flavoured partitions: (connected, 2-edge-connected) and
//! (connected with a cycle, connected with a cycle).

use std::collections::VecDeque;

use super::SolveOutcome;
use crate::graph::{bridges_and_blocks, ear_decomposition, two_disjoint_cycles, Graph, PartProperty, Partition, Target};

fn conn_2ec() -> Target {
    Target::new(PartProperty::Connected, PartProperty::TwoEdgeConnected)
}

/// Partition with `second` as part 2 and the rest as part 1.
fn split_second(n: usize, second: &[usize]) -> Partition {
    let mut parts = vec![1u8; n];
    for &v in second {
        parts[v] = 2;
    }
    Partition::new(parts)
}

fn confirmed(method: &str, g: &Graph, target: Target, p: Partition) -> SolveOutcome {
    assert!(target.holds(g, &p), "{method} produced an invalid witness");
    SolveOutcome::yes(method, p)
}

/// True iff some block on at least 3 vertices is a leaf of the
/// block-cutvertex tree.
pub fn conn_2ec_literal_criterion(g: &Graph) -> bool {
    let bs = bridges_and_blocks(g);
    bs.leaf_blocks().into_iter().any(|b| bs.blocks[b].len() >= 3)
}

/// (connected, 2-edge-connected) partition. On connected graphs that are
/// not 2-edge-connected the decision is the leaf-block criterion; its
/// method name ends in `leaf-block` and a yes without a confirmed witness
/// comes back as unknown.
pub fn poly_conn_2ec(g: &Graph) -> SolveOutcome {
    const M: &str = "conn2ec";
    let n = g.n();
    let target = conn_2ec();
    let comps = g.connected_components();
    if comps.len() > 2 || n < 4 {
        return SolveOutcome::no(M);
    }
    if comps.len() == 2 {
        for c in &comps {
            let mask: Vec<bool> = (0..n).map(|v| c.contains(&v)).collect();
            if PartProperty::TwoEdgeConnected.holds(g, &mask) {
                return confirmed(M, g, target, split_second(n, c));
            }
        }
        return SolveOutcome::no(M);
    }
    let bs = bridges_and_blocks(g);
    if !bs.is_two_edge_connected {
        const L: &str = "conn2ec/leaf-block";
        if !conn_2ec_literal_criterion(g) {
            return SolveOutcome::no(L);
        }
        let mut tree_deg = vec![0usize; bs.two_edge_components.len()];
        for &(a, b) in &bs.bridge_tree {
            tree_deg[a] += 1;
            tree_deg[b] += 1;
        }
        let mut candidates: Vec<Vec<usize>> = bs
            .two_edge_components
            .iter()
            .zip(&tree_deg)
            .filter(|(c, &d)| d == 1 && c.len() >= 3)
            .map(|(c, _)| c.clone())
            .collect();
        let cuts = &bs.cut_vertices;
        for b in bs.leaf_blocks() {
            let block = &bs.blocks[b];
            if block.len() < 3 {
                continue;
            }
            candidates.push(block.clone());
            candidates.push(block.iter().copied().filter(|v| !cuts.contains(v)).collect());
        }
        for c in candidates {
            let p = split_second(n, &c);
            if target.holds(g, &p) {
                return SolveOutcome::yes(L, p);
            }
        }
        return SolveOutcome::unknown(L);
    }
    if g.m() == n {
        // A cycle: removing any proper nonempty subset breaks 2EC.
        return SolveOutcome::no(M);
    }
    let ears = ear_decomposition(g).expect("checked 2-edge-connected");
    if ears.last_nontrivial > 0 {
        let interior = ears.ears[ears.last_nontrivial].interior().to_vec();
        let rest: Vec<usize> = (0..n).filter(|v| !interior.contains(v)).collect();
        return confirmed(M, g, target, split_second(n, &rest));
    }
    // One cycle plus chords: the chord closes a shorter cycle.
    let cycle = &ears.ears[0].vertices[..ears.ears[0].vertices.len() - 1];
    let len = cycle.len();
    let pos = |v: usize| cycle.iter().position(|&x| x == v).expect("spanning cycle");
    let (u, v) = g
        .edges()
        .into_iter()
        .find(|&(u, v)| {
            let d = pos(u).abs_diff(pos(v));
            d != 1 && d != len - 1
        })
        .expect("m > n gives a chord");
    let (i, j) = (pos(u).min(pos(v)), pos(u).max(pos(v)));
    let arc: Vec<usize> = cycle[i..=j].to_vec();
    confirmed(M, g, target, split_second(n, &arc))
}

/// (connected with a cycle, connected with a cycle): yes iff two disjoint
/// cycles exist and the graph is connected or has exactly two components,
/// each with a cycle.
pub fn char_two_cycles(g: &Graph) -> SolveOutcome {
    const M: &str = "two-cycles";
    let n = g.n();
    let target = Target::new(PartProperty::ConnectedWithCycle, PartProperty::ConnectedWithCycle);
    let comps = g.connected_components();
    if comps.len() > 2 {
        return SolveOutcome::no(M);
    }
    if comps.len() == 2 {
        let p = split_second(n, &comps[1]);
        return if target.holds(g, &p) { confirmed(M, g, target, p) } else { SolveOutcome::no(M) };
    }
    let Some(pair) = two_disjoint_cycles(g) else {
        return SolveOutcome::no(M);
    };
    // Multi-source BFS from both cycles keeps each part connected.
    let mut parts = vec![0u8; n];
    let mut queue = VecDeque::new();
    for (side, cycle) in [(1u8, &pair.cycle_a), (2u8, &pair.cycle_b)] {
        for &v in cycle {
            parts[v] = side;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        let mut nbrs = g.neighbors(u).to_vec();
        nbrs.sort_unstable();
        for w in nbrs {
            if parts[w] == 0 {
                parts[w] = parts[u];
                queue.push_back(w);
            }
        }
    }
    confirmed(M, g, target, Partition::new(parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{brute_force_partition, Answer};

    #[test]
    fn conn_2ec_examples() {
        let k4 = Graph::complete(4);
        let out = poly_conn_2ec(&k4);
        assert_eq!(out.answer, Answer::Yes);
        assert_eq!(out.witness.unwrap().members(1).len(), 1);
        assert_eq!(poly_conn_2ec(&Graph::cycle(5)).answer, Answer::No);
        let g = Graph::complete(4).disjoint_union(&Graph::path(3));
        let out = poly_conn_2ec(&g);
        assert_eq!(out.answer, Answer::Yes);
        assert_eq!(out.witness.unwrap().members(2), vec![0, 1, 2, 3]);
    }

    #[test]
    fn conn_2ec_chord_case() {
        // C6 plus the chord 0-3.
        let mut edges: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        edges.push((0, 3));
        let g = Graph::from_edges(6, edges).unwrap();
        assert_eq!(poly_conn_2ec(&g).answer, Answer::Yes);
    }

    #[test]
    fn leaf_block_divergence_is_unknown() {
        // Triangle with two pendants at one vertex: the criterion fires but
        // no partition exists.
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert!(conn_2ec_literal_criterion(&g));
        assert!(brute_force_partition(&g, conn_2ec()).is_none());
        let out = poly_conn_2ec(&g);
        assert_eq!(out.answer, Answer::Unknown);
    }

    #[test]
    fn two_cycles_examples() {
        let two_tri = Graph::complete(3).disjoint_union(&Graph::complete(3));
        let out = char_two_cycles(&two_tri);
        assert_eq!(out.answer, Answer::Yes);
        assert_eq!(out.witness.unwrap().members(1), vec![0, 1, 2]);
        assert_eq!(char_two_cycles(&Graph::complete(5)).answer, Answer::No);
        let g = Graph::complete(3).disjoint_union(&Graph::path(4));
        assert_eq!(char_two_cycles(&g).answer, Answer::No);
        let k6 = Graph::complete(6);
        assert_eq!(char_two_cycles(&k6).answer, Answer::Yes);
    }
}
