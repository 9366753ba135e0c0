//! Detection and extraction of two vertex-disjoint cycles.
//!
//! The decision procedure reduces the graph to a multigraph kernel of
//! minimum degree 3 (deleting vertices of degree at most 1 and suppressing
//! vertices of degree 2). A loop created on the way settles the question
//! directly. Small kernels are decided by enumerating vertex bipartitions;
//! larger ones by the classical list of multigraphs without two disjoint
//! cycles (K5, wheels, K_{3,p} with edges inside the 3-side, and graphs
//! with a vertex whose removal leaves a forest). Extraction deletes
//! vertices and then edges while the answer stays positive, which leaves
//! exactly two disjoint cycles.

use serde::{Deserialize, Serialize};

use super::Graph;

/// Two vertex-disjoint cycles, each given as a closed vertex sequence
/// without the repeated start vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclePair {
    pub cycle_a: Vec<usize>,
    pub cycle_b: Vec<usize>,
}

impl CyclePair {
    /// True if both sequences are cycles of `g` (length ≥ 3, distinct
    /// vertices, consecutive vertices adjacent) and share no vertex.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let ok = |c: &[usize]| {
            c.len() >= 3
                && c.iter().all(|&v| v < g.n())
                && (0..c.len()).all(|i| g.has_edge(c[i], c[(i + 1) % c.len()]))
                && {
                    let mut s = c.to_vec();
                    s.sort_unstable();
                    s.windows(2).all(|w| w[0] != w[1])
                }
        };
        ok(&self.cycle_a) && ok(&self.cycle_b) && self.cycle_a.iter().all(|v| !self.cycle_b.contains(v))
    }
}

/// Loops and parallel edges allowed; used only for kernelization.
#[derive(Clone)]
struct Multigraph {
    alive: Vec<bool>,
    /// Incident edge ids per vertex (a loop appears twice).
    inc: Vec<Vec<usize>>,
    ends: Vec<(usize, usize)>,
    edge_alive: Vec<bool>,
}

impl Multigraph {
    fn from_graph(g: &Graph) -> Self {
        let mut mg = Multigraph {
            alive: vec![true; g.n()],
            inc: vec![Vec::new(); g.n()],
            ends: Vec::new(),
            edge_alive: Vec::new(),
        };
        for (u, v) in g.edges() {
            mg.add_edge(u, v);
        }
        mg
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        let id = self.ends.len();
        self.ends.push((u, v));
        self.edge_alive.push(true);
        self.inc[u].push(id);
        self.inc[v].push(id);
    }

    fn live_inc(&self, v: usize) -> Vec<usize> {
        self.inc[v].iter().copied().filter(|&e| self.edge_alive[e]).collect()
    }

    fn remove_vertex(&mut self, v: usize) {
        self.alive[v] = false;
        for &e in &self.inc[v] {
            self.edge_alive[e] = false;
        }
    }

    fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.ends[e];
        if a == v {
            b
        } else {
            a
        }
    }

    fn has_loop(&self, v: usize) -> bool {
        self.inc[v].iter().any(|&e| self.edge_alive[e] && self.ends[e].0 == self.ends[e].1)
    }

    fn vertices(&self) -> Vec<usize> {
        (0..self.alive.len()).filter(|&v| self.alive[v]).collect()
    }

    fn live_edges(&self) -> Vec<(usize, usize)> {
        (0..self.ends.len()).filter(|&e| self.edge_alive[e]).map(|e| self.ends[e]).collect()
    }

    /// Cycle detection within the vertex set `mask` (loops and parallel
    /// edges count as cycles).
    fn has_cycle_within(&self, mask: &[bool]) -> bool {
        let mut dsu: Vec<usize> = (0..self.alive.len()).collect();
        fn find(d: &mut [usize], mut x: usize) -> usize {
            while d[x] != x {
                d[x] = d[d[x]];
                x = d[x];
            }
            x
        }
        for (u, v) in self.live_edges() {
            if !mask[u] || !mask[v] {
                continue;
            }
            let (a, b) = (find(&mut dsu, u), find(&mut dsu, v));
            if a == b {
                return true;
            }
            dsu[a] = b;
        }
        false
    }

    /// Reduce to minimum degree 3. Returns `Some(answer)` when a loop
    /// decides the instance early.
    fn kernelize(&mut self) -> Option<bool> {
        loop {
            let mut changed = false;
            for v in 0..self.alive.len() {
                if !self.alive[v] {
                    continue;
                }
                if self.has_loop(v) {
                    let mut mask = self.alive.clone();
                    mask[v] = false;
                    return Some(self.has_cycle_within(&mask));
                }
                let inc = self.live_inc(v);
                match inc.len() {
                    0 | 1 => {
                        self.remove_vertex(v);
                        changed = true;
                    }
                    2 => {
                        let (a, b) = (self.other(inc[0], v), self.other(inc[1], v));
                        self.remove_vertex(v);
                        self.add_edge(a, b);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return None;
            }
        }
    }
}

const BRUTE_FORCE_KERNEL: usize = 12;

/// Decides whether `g` has two vertex-disjoint cycles.
pub fn has_two_disjoint_cycles(g: &Graph) -> bool {
    let mut mg = Multigraph::from_graph(g);
    if let Some(ans) = mg.kernelize() {
        return ans;
    }
    let verts = mg.vertices();
    if verts.len() < 4 {
        return false;
    }
    if verts.len() <= BRUTE_FORCE_KERNEL {
        return kernel_brute_force(&mg, &verts);
    }
    !in_exceptional_family(&mg, &verts)
}

fn kernel_brute_force(mg: &Multigraph, verts: &[usize]) -> bool {
    let k = verts.len();
    let n = mg.alive.len();
    // Vertex verts[0] fixed on side A; each side must hold a cycle.
    for bits in 0u32..(1 << (k - 1)) {
        let mut a = vec![false; n];
        let mut b = vec![false; n];
        a[verts[0]] = true;
        for (i, &v) in verts.iter().enumerate().skip(1) {
            if bits >> (i - 1) & 1 == 1 {
                a[v] = true;
            } else {
                b[v] = true;
            }
        }
        if mg.has_cycle_within(&a) && mg.has_cycle_within(&b) {
            return true;
        }
    }
    false
}

/// Multiplicity-aware simple view of the kernel: adjacency counts.
fn multiplicities(mg: &Multigraph, verts: &[usize]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut idx = vec![usize::MAX; mg.alive.len()];
    for (i, &v) in verts.iter().enumerate() {
        idx[v] = i;
    }
    let k = verts.len();
    let mut mult = vec![vec![0usize; k]; k];
    for (u, v) in mg.live_edges() {
        mult[idx[u]][idx[v]] += 1;
        mult[idx[v]][idx[u]] += 1;
    }
    (idx, mult)
}

fn in_exceptional_family(mg: &Multigraph, verts: &[usize]) -> bool {
    let (_, mult) = multiplicities(mg, verts);
    let k = verts.len();
    let nbrs = |v: usize, skip: usize| -> Vec<usize> { (0..k).filter(|&w| w != skip && mult[v][w] > 0).collect() };

    // A vertex meeting every cycle.
    for x in 0..k {
        let mut dsu: Vec<usize> = (0..k).collect();
        fn find(d: &mut [usize], mut a: usize) -> usize {
            while d[a] != a {
                d[a] = d[d[a]];
                a = d[a];
            }
            a
        }
        let mut forest = true;
        'outer: for u in 0..k {
            for w in u + 1..k {
                if u == x || w == x || mult[u][w] == 0 {
                    continue;
                }
                if mult[u][w] > 1 {
                    forest = false;
                    break 'outer;
                }
                let (a, b) = (find(&mut dsu, u), find(&mut dsu, w));
                if a == b {
                    forest = false;
                    break 'outer;
                }
                dsu[a] = b;
            }
        }
        if forest {
            return true;
        }
    }

    // Wheel: removing the hub leaves a simple cycle through all other vertices.
    for hub in 0..k {
        let rest_ok = (0..k).filter(|&v| v != hub).all(|v| {
            let nb = nbrs(v, hub);
            nb.len() == 2 && nb.iter().all(|&w| w == hub || mult[v][w] == 1)
        });
        if rest_ok {
            let start = if hub == 0 { 1 } else { 0 };
            let mut seen = 1;
            let (mut prev, mut cur) = (start, nbrs(start, hub)[0]);
            while cur != start {
                let nb = nbrs(cur, hub);
                let nxt = if nb[0] == prev { nb[1] } else { nb[0] };
                prev = cur;
                cur = nxt;
                seen += 1;
            }
            if seen == k - 1 {
                return true;
            }
        }
    }

    // K_{3,p} plus arbitrary edges inside the 3-side.
    let outside_shape = |s: &[usize; 3]| {
        (0..k).filter(|v| !s.contains(v)).all(|v| {
            (0..k).all(|w| if s.contains(&w) { mult[v][w] == 1 } else { mult[v][w] == 0 })
        })
    };
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                if outside_shape(&[a, b, c]) {
                    return true;
                }
            }
        }
    }
    false
}

/// Two vertex-disjoint cycles of `g`, or `None` if there are none.
pub fn two_disjoint_cycles(g: &Graph) -> Option<CyclePair> {
    if !has_two_disjoint_cycles(g) {
        return None;
    }
    let mut h = g.clone();
    let mut keep = vec![true; g.n()];
    for v in 0..g.n() {
        keep[v] = false;
        let (sub, _) = g.induced(&keep);
        if has_two_disjoint_cycles(&sub) {
            h = sub;
        } else {
            keep[v] = true;
        }
    }
    let (_, ids) = g.induced(&keep);
    for (u, v) in h.edges() {
        let smaller = h.without_edge(u, v);
        if has_two_disjoint_cycles(&smaller) {
            h = smaller;
        }
    }
    let comps: Vec<Vec<usize>> = h.connected_components().into_iter().filter(|c| c.len() > 1).collect();
    let cycles: Vec<Vec<usize>> = comps.iter().map(|c| trace_cycle(&h, c[0]).into_iter().map(|v| ids[v]).collect()).collect();
    let pair = CyclePair { cycle_a: cycles[0].clone(), cycle_b: cycles[1].clone() };
    debug_assert!(pair.is_valid_in(g));
    Some(pair)
}

fn trace_cycle(h: &Graph, start: usize) -> Vec<usize> {
    let mut out = vec![start];
    let (mut prev, mut cur) = (start, h.neighbors(start)[0]);
    while cur != start {
        out.push(cur);
        let nb = h.neighbors(cur);
        let nxt = if nb[0] == prev { nb[1] } else { nb[0] };
        prev = cur;
        cur = nxt;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subset_oracle(g: &Graph) -> bool {
        let n = g.n();
        if n < 6 {
            return false;
        }
        (0u32..(1 << n)).any(|bits| {
            let a: Vec<bool> = (0..n).map(|v| bits >> v & 1 == 1).collect();
            let b: Vec<bool> = a.iter().map(|x| !x).collect();
            g.induced(&a).0.has_cycle() && g.induced(&b).0.has_cycle()
        })
    }

    fn wheel(rim: usize) -> Graph {
        let mut edges: Vec<(usize, usize)> = (1..=rim).map(|i| (0, i)).collect();
        edges.extend((1..=rim).map(|i| (i, i % rim + 1)));
        Graph::from_edges(rim + 1, edges).unwrap()
    }

    fn k3p(p: usize, inner: &[(usize, usize)]) -> Graph {
        let mut edges: Vec<(usize, usize)> = (0..3).flat_map(|s| (3..3 + p).map(move |v| (s, v))).collect();
        edges.extend_from_slice(inner);
        Graph::from_edges(3 + p, edges).unwrap()
    }

    #[test]
    fn two_triangles() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let pair = two_disjoint_cycles(&g).unwrap();
        assert!(pair.is_valid_in(&g));
        let mut a = pair.cycle_a.clone();
        a.sort_unstable();
        assert_eq!(a, vec![0, 1, 2]);
    }

    #[test]
    fn k5_and_wheels_have_none() {
        assert!(two_disjoint_cycles(&Graph::complete(5)).is_none());
        for rim in 3..=14 {
            let g = wheel(rim);
            assert!(!has_two_disjoint_cycles(&g), "wheel with rim {rim}");
        }
        assert!(!subset_oracle(&wheel(6)));
    }

    #[test]
    fn large_exceptional_families() {
        assert!(!has_two_disjoint_cycles(&k3p(12, &[(0, 1), (1, 2), (0, 2)])));
        assert!(!has_two_disjoint_cycles(&k3p(15, &[])));
        // K6 has two disjoint triangles.
        assert!(has_two_disjoint_cycles(&Graph::complete(6)));
        // Two wheels sharing nothing.
        let g = wheel(7).disjoint_union(&wheel(7));
        let pair = two_disjoint_cycles(&g).unwrap();
        assert!(pair.is_valid_in(&g));
    }

    #[test]
    fn agrees_with_subset_oracle_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let n = rng.gen_range(4..=9);
            let p: f64 = rng.gen_range(0.2..0.8);
            let edges: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
            let g = Graph::from_edges(n, edges).unwrap();
            let expect = subset_oracle(&g);
            assert_eq!(has_two_disjoint_cycles(&g), expect, "{:?}", g.edges());
            if let Some(pair) = two_disjoint_cycles(&g) {
                assert!(pair.is_valid_in(&g));
            }
        }
    }
}
