use serde::Serialize;

use crate::graph::{Graph, Partition};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfDegreeResult {
    pub partition: Partition,
    pub moves: u64,
    /// Cut size before the first move and after each move.
    pub cut_history: Vec<usize>,
}

/// Local search on the cut: while some vertex has more neighbors in its own
/// part than in the other, move the lowest such vertex. Each move raises
/// the cut, so this stops after at most `m` moves with every in-part
/// degree at most half the degree.
pub fn half_degree_partition(g: &Graph) -> HalfDegreeResult {
    let n = g.n();
    let mut side = vec![1u8; n];
    let mut cut = 0usize;
    let mut history = vec![cut];
    let inside = |side: &[u8], v: usize| g.neighbors(v).iter().filter(|&&w| side[w] == side[v]).count();
    loop {
        let Some(v) = (0..n).find(|&v| 2 * inside(&side, v) > g.degree(v)) else { break };
        let before = inside(&side, v);
        side[v] = 3 - side[v];
        cut = cut + before - (g.degree(v) - before);
        history.push(cut);
    }
    HalfDegreeResult { partition: Partition::new(side), moves: history.len() as u64 - 1, cut_history: history }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(g: &Graph) {
        let r = half_degree_partition(g);
        assert!(r.cut_history.windows(2).all(|w| w[1] > w[0]));
        for v in 0..g.n() {
            let own = g.neighbors(v).iter().filter(|&&w| r.partition.part(w) == r.partition.part(v)).count();
            assert!(own <= g.degree(v) / 2);
        }
        let cut = g.edges().iter().filter(|&&(u, v)| r.partition.part(u) != r.partition.part(v)).count();
        assert_eq!(*r.cut_history.last().unwrap(), cut);
    }

    #[test]
    fn small_examples() {
        let r = half_degree_partition(&Graph::cycle(4));
        assert_eq!(r.partition.parts()[0], r.partition.parts()[2]);
        assert_ne!(r.partition.parts()[0], r.partition.parts()[1]);
        check(&Graph::cycle(4));
        let r = half_degree_partition(&Graph::complete(4));
        assert_eq!(r.partition.members(1).len(), 2);
        check(&Graph::complete(4));
    }

    proptest! {
        #[test]
        fn invariant_on_random_graphs(n in 1usize..50, edges in prop::collection::vec((0usize..50, 0usize..50), 0..200)) {
            let edges: std::collections::BTreeSet<(usize, usize)> = edges
                .into_iter()
                .map(|(u, v)| (u % n, v % n))
                .filter(|(u, v)| u != v)
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect();
            check(&Graph::from_edges(n, edges).unwrap());
        }
    }
}
