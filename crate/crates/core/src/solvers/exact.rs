//! Branch-and-prune search over part assignments with domain propagation.

use std::collections::VecDeque;
use std::time::Instant;

use super::{Answer, Budget, SolveOutcome, Stats};
use crate::graph::{bridges_and_blocks, Graph, PartProperty, Partition, Target};

const P1: u8 = 1;
const P2: u8 = 2;
const BOTH: u8 = 3;

#[derive(Clone)]
struct State {
    /// Bit 1: may be in part 1; bit 2: may be in part 2.
    dom: Vec<u8>,
    /// `cnt[s][v]`: neighbors of `v` that may still be in part `s + 1`.
    cnt: [Vec<u32>; 2],
}

struct Search<'a> {
    g: &'a Graph,
    target: Target,
    floors: [u32; 2],
    budget: Budget,
    start: Instant,
    nodes: u64,
    exhausted: bool,
}

impl State {
    fn new(g: &Graph) -> Self {
        let deg: Vec<u32> = g.degrees().into_iter().map(|d| d as u32).collect();
        State { dom: vec![BOTH; g.n()], cnt: [deg.clone(), deg] }
    }
}

impl<'a> Search<'a> {
    /// Removes `side` from `v`'s domain; false on an empty domain.
    fn remove(&self, st: &mut State, v: usize, side: u8, queue: &mut VecDeque<usize>) -> bool {
        if st.dom[v] & side == 0 {
            return true;
        }
        st.dom[v] &= !side;
        let s = usize::from(side - 1);
        for &w in self.g.neighbors(v) {
            st.cnt[s][w] -= 1;
            queue.push_back(w);
        }
        queue.push_back(v);
        st.dom[v] != 0
    }

    fn propagate_local(&self, st: &mut State, queue: &mut VecDeque<usize>) -> bool {
        while let Some(v) = queue.pop_front() {
            for side in [P1, P2] {
                let s = usize::from(side - 1);
                // Capacity: too few neighbors can join this part.
                if st.dom[v] & side != 0 && st.cnt[s][v] < self.floors[s] && !self.remove(st, v, side, queue) {
                    return false;
                }
            }
            // Forcing: a fixed vertex with exactly enough candidates keeps them all.
            if st.dom[v] == P1 || st.dom[v] == P2 {
                let side = st.dom[v];
                let s = usize::from(side - 1);
                if self.floors[s] > 0 && st.cnt[s][v] == self.floors[s] {
                    for &w in self.g.neighbors(v) {
                        if st.dom[w] == BOTH && !self.remove(st, w, 3 - side, queue) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Part sizes and connectivity of the parts that require it. May
    /// narrow domains; returns false on a dead end.
    fn propagate_global(&self, st: &mut State, queue: &mut VecDeque<usize>) -> bool {
        for side in [P1, P2] {
            let possible: Vec<bool> = st.dom.iter().map(|&d| d & side != 0).collect();
            let count = possible.iter().filter(|&&b| b).count();
            let prop = self.target.property(side);
            if count < prop.size_floor().max(1) {
                return false;
            }
            if !prop.needs_connectivity() {
                continue;
            }
            let fixed: Vec<usize> = (0..self.g.n()).filter(|&v| st.dom[v] == side).collect();
            let Some(&anchor) = fixed.first() else { continue };
            // Region the part must live in.
            let region: Vec<bool> = if prop == PartProperty::TwoEdgeConnected {
                let (h, ids) = self.g.induced(&possible);
                let bs = bridges_and_blocks(&h);
                let mut region = vec![false; self.g.n()];
                let Some(comp) = bs.two_edge_components.iter().find(|c| c.iter().any(|&x| ids[x] == anchor)) else {
                    return false;
                };
                for &x in comp {
                    region[ids[x]] = true;
                }
                region
            } else {
                let comps = self.g.components_within(&possible);
                let comp = comps.iter().find(|c| c.contains(&anchor)).expect("anchor is possible");
                let mut region = vec![false; self.g.n()];
                for &x in comp {
                    region[x] = true;
                }
                if prop == PartProperty::ConnectedWithCycle {
                    let edges: usize = comp.iter().map(|&x| self.g.neighbors(x).iter().filter(|&&y| region[y]).count()).sum::<usize>() / 2;
                    if edges < comp.len() {
                        return false;
                    }
                }
                region
            };
            if fixed.iter().any(|&v| !region[v]) {
                return false;
            }
            if region.iter().filter(|&&b| b).count() < prop.size_floor() {
                return false;
            }
            for v in 0..self.g.n() {
                if possible[v] && !region[v] && !self.remove(st, v, side, queue) {
                    return false;
                }
            }
        }
        true
    }

    fn propagate(&self, st: &mut State, mut queue: VecDeque<usize>) -> bool {
        loop {
            if !self.propagate_local(st, &mut queue) {
                return false;
            }
            if !self.propagate_global(st, &mut queue) {
                return false;
            }
            if queue.is_empty() {
                return true;
            }
        }
    }

    fn out_of_budget(&mut self) -> bool {
        if self.nodes >= self.budget.max_nodes {
            self.exhausted = true;
        }
        if let Some(limit) = self.budget.time_limit {
            if self.nodes.is_multiple_of(256) && self.start.elapsed() > limit {
                self.exhausted = true;
            }
        }
        self.exhausted
    }

    fn dfs(&mut self, st: State, first_branch: bool) -> Option<Partition> {
        self.nodes += 1;
        if self.out_of_budget() {
            return None;
        }
        let pick = (0..self.g.n()).filter(|&v| st.dom[v] == BOTH).max_by_key(|&v| {
            let decided = self.g.neighbors(v).iter().filter(|&&w| st.dom[w] != BOTH).count();
            (decided, self.g.degree(v), std::cmp::Reverse(v))
        });
        let Some(v) = pick else {
            let p = Partition::new(st.dom.clone());
            return self.target.holds(self.g, &p).then_some(p);
        };
        let sides: &[u8] = if first_branch && self.target.is_symmetric() { &[P1] } else { &[P1, P2] };
        for &side in sides {
            let mut next = st.clone();
            let mut queue = VecDeque::new();
            if !self.remove(&mut next, v, 3 - side, &mut queue) {
                continue;
            }
            if self.propagate(&mut next, queue) {
                if let Some(p) = self.dfs(next, false) {
                    return Some(p);
                }
            }
            if self.exhausted {
                return None;
            }
        }
        None
    }
}

/// Complete search for a partition satisfying `target`. Answers
/// [`Answer::Unknown`] only when the budget runs out.
pub fn exact_partition_target(g: &Graph, target: Target, budget: Budget) -> SolveOutcome {
    let start = Instant::now();
    let floors = [target.first.degree_floor() as u32, target.second.degree_floor() as u32];
    let mut search = Search { g, target, floors, budget, start, nodes: 0, exhausted: false };
    let witness = if g.n() < 2 {
        None
    } else {
        let mut st = State::new(g);
        let queue: VecDeque<usize> = (0..g.n()).collect();
        if search.propagate(&mut st, queue) {
            search.dfs(st, true)
        } else {
            None
        }
    };
    let answer = match (&witness, search.exhausted) {
        (Some(_), _) => Answer::Yes,
        (None, true) => Answer::Unknown,
        (None, false) => Answer::No,
    };
    SolveOutcome {
        answer,
        witness,
        method: "exact".into(),
        stats: Stats { nodes: search.nodes, moves: 0, elapsed_ms: start.elapsed().as_millis() as u64 },
    }
}

/// Exact search for a (δ≥k1, δ≥k2)-partition.
pub fn exact_partition(g: &Graph, k1: usize, k2: usize, budget: Budget) -> SolveOutcome {
    exact_partition_target(g, Target::min_degree(k1, k2), budget)
}

/// Exhaustive enumeration of all `2^n` splits; test referee for tiny graphs.
pub fn brute_force_partition(g: &Graph, target: Target) -> Option<Partition> {
    assert!(g.n() <= 20, "brute force is for tiny graphs");
    (0..1u32 << g.n())
        .map(|mask| Partition::new((0..g.n()).map(|v| if mask >> v & 1 == 1 { 2 } else { 1 }).collect()))
        .find(|p| target.holds(g, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PartProperty::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn tight_complete_graphs() {
        assert_eq!(exact_partition(&Graph::complete(4), 1, 2, Budget::default()).answer, Answer::No);
        assert_eq!(exact_partition(&Graph::complete(5), 2, 2, Budget::default()).answer, Answer::No);
        let two_k4 = Graph::complete(4).disjoint_union(&Graph::complete(4));
        let out = exact_partition(&two_k4, 3, 3, Budget::default());
        assert_eq!(out.answer, Answer::Yes);
        assert!(Target::min_degree(3, 3).holds(&two_k4, out.witness.as_ref().unwrap()));
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        let g = Graph::complete(9);
        let out = exact_partition(&g, 4, 4, Budget { max_nodes: 1, time_limit: None });
        assert!(matches!(out.answer, Answer::Unknown | Answer::No));
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let targets = [
            Target::min_degree(1, 1),
            Target::min_degree(1, 2),
            Target::min_degree(2, 2),
            Target::min_degree(1, 3),
            Target::min_degree(2, 3),
            Target::new(Connected, TwoEdgeConnected),
            Target::new(TwoEdgeConnected, ConnectedWithCycle),
            Target::new(TwoEdgeConnected, TwoEdgeConnected),
            Target::new(ConnectedWithCycle, ConnectedWithCycle),
        ];
        for _ in 0..300 {
            let n = rng.gen_range(2..=9);
            let p = rng.gen_range(0.2..0.9);
            let g = random_graph(&mut rng, n, p);
            for t in targets {
                let truth = brute_force_partition(&g, t).is_some();
                let out = exact_partition_target(&g, t, Budget::default());
                assert_eq!(out.answer == Answer::Yes, truth, "{g} {t}");
                if let Some(p) = &out.witness {
                    assert!(t.holds(&g, p));
                }
            }
        }
    }
}
