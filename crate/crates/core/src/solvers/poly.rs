use super::{checked, exact_partition, Answer, Budget, SolveError, SolveOutcome, Stats};
use crate::graph::{two_disjoint_cycles, Graph, Partition};

fn require_min_degree(g: &Graph, method: &'static str, k: usize) -> Result<(), SolveError> {
    match g.min_degree() {
        Ok(d) if d >= k => Ok(()),
        _ => Err(SolveError::Hypothesis { method, requirement: format!("minimum degree at least {k}") }),
    }
}

fn from_mask(mask: &[bool]) -> Partition {
    Partition::from_first_part(mask.len(), mask)
}

/// (δ≥1, δ≥1) on graphs with δ ≥ 1 and n ≥ 4: yes unless the graph is a
/// star. The witness splits a spanning tree at an edge leaving at least
/// two vertices on each side.
pub fn poly_11(g: &Graph) -> Result<SolveOutcome, SolveError> {
    const M: &str = "poly11";
    require_min_degree(g, M, 1)?;
    if g.n() < 4 {
        return Err(SolveError::Hypothesis { method: M, requirement: "at least 4 vertices".into() });
    }
    let n = g.n();
    if g.m() == n - 1 && g.max_degree() == n - 1 {
        return Ok(SolveOutcome::no(M));
    }
    let comps = g.connected_components();
    if comps.len() > 1 {
        let mut first = vec![false; n];
        for &v in &comps[0] {
            first[v] = true;
        }
        return Ok(checked(M, g, 1, 1, from_mask(&first)));
    }
    // BFS tree from 0; subtree sizes in reverse BFS order.
    let mut parent = vec![usize::MAX; n];
    let mut order = vec![0];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &w in g.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                order.push(w);
            }
        }
    }
    let mut size = vec![1usize; n];
    for &v in order.iter().rev().take(n - 1) {
        size[parent[v]] += size[v];
    }
    if let Some(&cut) = order.iter().skip(1).find(|&&v| size[v] >= 2 && n - size[v] >= 2) {
        let mut first = vec![false; n];
        let mut stack = vec![cut];
        first[cut] = true;
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if parent[w] == u && !first[w] {
                    first[w] = true;
                    stack.push(w);
                }
            }
        }
        return Ok(checked(M, g, 1, 1, from_mask(&first)));
    }
    // The tree is a star but the graph is not: two leaves are adjacent.
    let tree_degree = |v: usize| order.iter().filter(|&&w| parent[w] == v).count() + usize::from(v != 0);
    let center = (0..n).find(|&v| tree_degree(v) == n - 1).expect("a spanning star has a center");
    let (u, v) = g.edges().into_iter().find(|&(u, v)| u != center && v != center).expect("not a star");
    let mut first = vec![false; n];
    first[u] = true;
    first[v] = true;
    Ok(checked(M, g, 1, 1, from_mask(&first)))
}

/// Grows `seed` (as part 1) by moving in every outside vertex with fewer
/// than `k` outside neighbors; with `pull_pendant`, a moved vertex of
/// degree 1 pulls its neighbor along. Returns part 1 if a nonempty
/// outside remains.
fn edge_seed_closure(g: &Graph, seed: (usize, usize), k: usize, pull_pendant: bool, moves: &mut u64) -> Option<Vec<bool>> {
    let n = g.n();
    let mut inside = vec![false; n];
    let mut outside_deg = g.degrees();
    let mut size = 0;
    let mut forced = vec![seed.0, seed.1];
    let mut candidates: Vec<usize> = (0..n).collect();
    loop {
        if let Some(v) = forced.pop() {
            if inside[v] {
                continue;
            }
            inside[v] = true;
            size += 1;
            *moves += 1;
            for &w in g.neighbors(v) {
                outside_deg[w] -= 1;
                candidates.push(w);
            }
            if pull_pendant && g.degree(v) == 1 {
                forced.push(g.neighbors(v)[0]);
            }
            continue;
        }
        let Some(v) = candidates.pop() else { break };
        if !inside[v] && outside_deg[v] < k {
            forced.push(v);
        }
    }
    (size < n).then_some(inside)
}

/// (δ≥1, δ≥2): try every edge as a seed of part 1 and close it under
/// "at most one neighbor outside"; a degree-1 vertex pulls its neighbor.
pub fn poly_12(g: &Graph) -> SolveOutcome {
    const M: &str = "poly12";
    let mut moves = 0;
    if g.n() == 0 || g.min_degree() == Ok(0) {
        return SolveOutcome::no(M);
    }
    for e in g.edges() {
        if let Some(inside) = edge_seed_closure(g, e, 2, true, &mut moves) {
            return checked(M, g, 1, 2, from_mask(&inside)).with_stats(Stats { moves, ..Stats::default() });
        }
    }
    SolveOutcome::no(M).with_stats(Stats { moves, ..Stats::default() })
}

/// (δ≥1, δ≥k) on graphs with δ ≥ k: edge-seeded closure under "fewer than
/// k neighbors outside".
pub fn poly_1k_mindegk(g: &Graph, k: usize) -> Result<SolveOutcome, SolveError> {
    const M: &str = "poly1k";
    if k == 0 {
        return Err(SolveError::Hypothesis { method: M, requirement: "k >= 1".into() });
    }
    require_min_degree(g, M, k)?;
    let mut moves = 0;
    for e in g.edges() {
        if let Some(inside) = edge_seed_closure(g, e, k, false, &mut moves) {
            return Ok(checked(M, g, 1, k, from_mask(&inside)).with_stats(Stats { moves, ..Stats::default() }));
        }
    }
    Ok(SolveOutcome::no(M).with_stats(Stats { moves, ..Stats::default() }))
}

/// Starting from `part` (members true), absorb vertices outside `part` and
/// `avoid` that have at least `k` neighbors in `part`.
fn absorb(g: &Graph, part: &mut [bool], avoid: &[bool], k: usize) -> u64 {
    let mut moves = 0;
    let mut changed = true;
    while changed {
        changed = false;
        for v in 0..g.n() {
            if !part[v] && !avoid[v] && g.neighbors(v).iter().filter(|&&w| part[w]).count() >= k {
                part[v] = true;
                moves += 1;
                changed = true;
            }
        }
    }
    moves
}

fn mask_of(n: usize, vs: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in vs {
        m[v] = true;
    }
    m
}

/// (δ≥2, δ≥2) on graphs with δ ≥ 3: yes iff two disjoint cycles exist.
pub fn poly_22_mindeg3(g: &Graph) -> Result<SolveOutcome, SolveError> {
    const M: &str = "poly22";
    require_min_degree(g, M, 3)?;
    let Some(pair) = two_disjoint_cycles(g) else {
        return Ok(SolveOutcome::no(M));
    };
    let mut first = mask_of(g.n(), &pair.cycle_a);
    let avoid = mask_of(g.n(), &pair.cycle_b);
    let moves = absorb(g, &mut first, &avoid, 2);
    Ok(checked(M, g, 2, 2, from_mask(&first)).with_stats(Stats { moves, ..Stats::default() }))
}

/// Part 2 grown from `core` (which must induce min degree 3) avoiding the
/// cycle `cycle`; part 1 is the rest.
fn grow_around(g: &Graph, core: &[usize], cycle: &[usize]) -> (Partition, u64) {
    let mut second = mask_of(g.n(), core);
    let avoid = mask_of(g.n(), cycle);
    let moves = absorb(g, &mut second, &avoid, 3);
    let first: Vec<bool> = second.iter().map(|&b| !b).collect();
    (from_mask(&first), moves)
}

/// Some cycle of a graph as a vertex sequence.
fn find_cycle(g: &Graph, allowed: &[bool]) -> Option<Vec<usize>> {
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    for root in 0..n {
        if !allowed[root] || depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if !allowed[w] || w == parent[u] {
                    continue;
                }
                if depth[w] == usize::MAX {
                    depth[w] = depth[u] + 1;
                    parent[w] = u;
                    stack.push(w);
                } else {
                    // Non-tree edge: walk both ends up to their meeting point.
                    let (mut x, mut y) = (u, w);
                    let mut left = vec![x];
                    let mut right = vec![y];
                    while x != y {
                        if depth[x] >= depth[y] {
                            x = parent[x];
                            left.push(x);
                        } else {
                            y = parent[y];
                            right.push(y);
                        }
                    }
                    right.pop();
                    right.reverse();
                    left.extend(right);
                    return Some(left);
                }
            }
        }
    }
    None
}

/// Tree path between `u` and `v` inside the forest `allowed`.
fn forest_path(g: &Graph, allowed: &[bool], u: usize, v: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; g.n()];
    prev[u] = u;
    let mut queue = std::collections::VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        for &w in g.neighbors(x) {
            if allowed[w] && prev[w] == usize::MAX {
                prev[w] = x;
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![v];
    let mut x = v;
    while x != u {
        x = prev[x];
        path.push(x);
    }
    path
}

/// (δ≥2, δ≥3) on graphs with δ ≥ 5, following the triangle / K4 / K5
/// case chain. Triangle-free inputs always have a partition; their
/// witness comes from exact search under `budget`.
pub fn poly_23_mindeg5(g: &Graph, budget: Budget) -> Result<SolveOutcome, SolveError> {
    const M: &str = "poly23";
    require_min_degree(g, M, 5)?;
    let n = g.n();
    let Some(tri) = g.find_triangle() else {
        let out = exact_partition(g, 2, 3, budget);
        let method = "poly23/triangle-free exact";
        return Ok(match out.answer {
            Answer::Yes => SolveOutcome { method: method.into(), ..out },
            _ => SolveOutcome::unknown(method).with_stats(out.stats),
        });
    };
    let outside_deg = |core: &[usize], v: usize| g.neighbors(v).iter().filter(|w| !core.contains(w)).count();
    // Triangle as part 1.
    let mut core: Vec<usize> = tri.to_vec();
    match (0..n).find(|v| !core.contains(v) && outside_deg(&core, *v) < 3) {
        None => return Ok(checked(M, g, 2, 3, from_mask(&mask_of(n, &core)))),
        Some(d) => core.push(d),
    }
    // K4 as part 2.
    match (0..n).find(|v| !core.contains(v) && outside_deg(&core, *v) < 2) {
        None => {
            let second = mask_of(n, &core);
            let first: Vec<bool> = second.iter().map(|&b| !b).collect();
            return Ok(checked(M, g, 2, 3, from_mask(&first)));
        }
        Some(e) => core.push(e),
    }
    let k5 = core;
    let rest: Vec<bool> = (0..n).map(|v| !k5.contains(&v)).collect();
    if let Some(cycle) = find_cycle(g, &rest) {
        let (p, moves) = grow_around(g, &k5, &cycle);
        return Ok(checked(M, g, 2, 3, p).with_stats(Stats { moves, ..Stats::default() }));
    }
    // The rest is a forest; a nontrivial tree has two leaves with a common
    // neighbor in the K5, giving a cycle disjoint from the other four.
    for comp in g.components_within(&rest) {
        if comp.len() < 2 {
            continue;
        }
        let leaves: Vec<usize> =
            comp.iter().copied().filter(|&v| g.neighbors(v).iter().filter(|&&w| rest[w]).count() == 1).collect();
        let (u, v) = (leaves[0], leaves[1]);
        let e = *k5.iter().find(|&&x| g.has_edge(u, x) && g.has_edge(v, x)).expect("leaves share a K5 neighbor");
        let mut cycle = forest_path(g, &rest, u, v);
        cycle.push(e);
        let k4: Vec<usize> = k5.iter().copied().filter(|&x| x != e).collect();
        let (p, moves) = grow_around(g, &k4, &cycle);
        return Ok(checked(M, g, 2, 3, p).with_stats(Stats { moves, ..Stats::default() }));
    }
    // The rest is an independent set joined completely to the K5.
    let indep: Vec<usize> = (0..n).filter(|&v| rest[v]).collect();
    if indep.len() >= 2 {
        let first = mask_of(n, &[k5[0], k5[1], indep[0]]);
        return Ok(checked(M, g, 2, 3, from_mask(&first)));
    }
    Ok(SolveOutcome::no(M))
}
