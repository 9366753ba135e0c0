use std::collections::VecDeque;

use super::{Follow, Layout, Reduction, ReductionArtifact, ReductionError};
use crate::cnf::CnfFormula;
use crate::gadgets::{attach_into, build_gadget, GadgetKind};
use crate::graph::{GraphBuilder, PartProperty, Target};
use crate::ring::{build_ring, build_ring_squared, RingGraph};

/// Graph under construction with a role and forward rule per vertex.
struct Ctx {
    b: GraphBuilder,
    roles: Vec<String>,
    follow: Vec<Follow>,
}

impl Ctx {
    fn new() -> Self {
        Ctx { b: GraphBuilder::new(0), roles: Vec::new(), follow: Vec::new() }
    }

    /// Starts from a ring; ring vertices follow themselves.
    fn from_ring(ring: &RingGraph) -> Self {
        let (b, roles) = ring.to_builder();
        let follow = (0..roles.len()).map(Follow::Vertex).collect();
        Ctx { b, roles, follow }
    }

    fn vertex(&mut self, role: String, follow: Follow) -> usize {
        self.roles.push(role);
        self.follow.push(follow);
        self.b.add_vertex()
    }

    /// A vertex that decides its own part.
    fn tracked(&mut self, role: String) -> usize {
        let v = self.b.n();
        self.vertex(role, Follow::Vertex(v))
    }

    fn edge(&mut self, u: usize, v: usize) {
        self.b.add_edge(u, v).expect("constructions add each edge once");
    }

    fn gadget(&mut self, kind: GadgetKind, k: usize, hosts: &[usize], follow: Follow) -> Result<(), ReductionError> {
        let g = build_gadget(kind, k)?;
        let before = self.b.n();
        let ids = attach_into(&mut self.b, &g, hosts)?;
        let host_role = self.roles[hosts[0]].clone();
        for (local, &id) in ids.iter().enumerate() {
            if id >= before {
                self.roles.push(format!("gadget:{}{}@{}:{}", kind.name(), k, host_role, g.labels[local]));
                self.follow.push(follow);
            }
        }
        Ok(())
    }

    /// Raises the degree of `host` by one with a gadget whose other
    /// vertices all have degree at least `k`.
    fn plus_one(&mut self, k: usize, host: usize, follow: Follow) -> Result<(), ReductionError> {
        match k {
            3 => self.gadget(GadgetKind::X31, 3, &[host], follow),
            4 => self.gadget(GadgetKind::Y41, 4, &[host], follow),
            _ => {
                let f = self.vertex(format!("hub@{}", self.roles[host]), follow);
                self.gadget(GadgetKind::Wk, k, &[host, f], follow)?;
                self.gadget(GadgetKind::Zk, k, &[f], follow)?;
                self.gadget(GadgetKind::Xk2, k, &[f], follow)
            }
        }
    }

    /// Same with a rise of two.
    fn plus_two(&mut self, k: usize, host: usize, follow: Follow) -> Result<(), ReductionError> {
        self.gadget(GadgetKind::Xk2, k, &[host], follow)
    }

    fn finish(
        self,
        reduction: Reduction,
        f: &CnfFormula,
        target: Target,
        declared_min_degree: Option<usize>,
        layout: Layout,
        ring: Option<RingGraph>,
    ) -> ReductionArtifact {
        let base_n = self.roles.len();
        ReductionArtifact {
            reduction,
            formula: f.clone(),
            source_hash: f.content_hash(),
            source_vars: f.num_vars(),
            graph: self.b.build(),
            roles: self.roles,
            target,
            declared_min_degree,
            layout,
            follow: self.follow,
            base_n,
            copies: 1,
            ring,
        }
    }
}

fn precondition(ok: bool, what: impl FnOnce() -> String) -> Result<(), ReductionError> {
    if ok {
        Ok(())
    } else {
        Err(ReductionError::Precondition(what()))
    }
}

fn clause_sizes(f: &CnfFormula, lo: usize, hi: usize) -> Result<(), ReductionError> {
    match f.clauses().iter().position(|c| c.len() < lo || c.len() > hi) {
        None => Ok(()),
        Some(j) => Err(ReductionError::Precondition(format!(
            "clause {} has {} literals, expected {lo}..={hi}",
            j + 1,
            f.clause(j).len()
        ))),
    }
}

fn lit_role(i: usize, positive: bool) -> String {
    format!("lit:{}x_{}", if positive { '+' } else { '-' }, i + 1)
}

fn one_k(f: &CnfFormula, k: usize, mindeg: bool) -> Result<ReductionArtifact, ReductionError> {
    if k < 3 {
        return Err(ReductionError::Parameter(format!("k = {k}, need k >= 3")));
    }
    let (n, m) = (f.num_vars(), f.num_clauses());
    clause_sizes(f, 2, 3)?;
    let counts = f.literal_counts();
    precondition(n >= 1 && m >= 2, || format!("need a variable and at least 2 clauses, got n = {n}, m = {m}"))?;
    precondition(counts.iter().all(|&c| (1..=3).contains(&c)), || "every literal must occur 1 to 3 times".into())?;
    precondition(counts.chunks(2).all(|c| c[0] + c[1] <= 5), || "a variable occurs more than 5 times".into())?;
    precondition(f.is_connected_instance(), || "incidence graph is not connected".into())?;
    if mindeg {
        precondition(m >= k - 3, || format!("need at least {} clauses", k - 3))?;
    }
    // Gadget plan: k = 3 + 2a or 4 + 2a.
    let extra_one = k.is_multiple_of(2);
    let boosts = (k - 3 - usize::from(extra_one)) / 2;
    let mut cx = Ctx::new();
    let mut y = Vec::with_capacity(n);
    let mut literals = Vec::with_capacity(n);
    for i in 0..n {
        let yi = cx.vertex(format!("y[{}]", i + 1), Follow::Part(1));
        let pair = [true, false].map(|s| cx.tracked(lit_role(i, s)));
        cx.edge(yi, pair[0]);
        cx.edge(yi, pair[1]);
        y.push(yi);
        literals.push(pair);
    }
    let mut boosted = Vec::new();
    for i in 0..n {
        for (slot, &v) in literals[i].iter().enumerate() {
            let follow = Follow::Vertex(v);
            match counts[2 * i + slot] {
                1 => cx.plus_two(k, v, follow)?,
                2 => cx.plus_one(k, v, follow)?,
                _ => {}
            }
            boosted.push((v, follow));
        }
    }
    let mut clauses = Vec::with_capacity(m);
    for (j, c) in f.clauses().iter().enumerate() {
        let cj = cx.vertex(format!("clause:c[{}]", j + 1), Follow::Part(2));
        for l in c {
            cx.edge(cj, literals[l.var][usize::from(!l.positive)]);
        }
        if c.len() == 2 {
            cx.plus_one(k, cj, Follow::Part(2))?;
        }
        clauses.push(cj);
        boosted.push((cj, Follow::Part(2)));
    }
    let z: Vec<usize> = (0..2 * m).map(|t| cx.vertex(format!("z[{}]", t + 1), Follow::Part(2))).collect();
    for t in 0..2 * m {
        cx.edge(z[t], z[(t + 1) % (2 * m)]);
    }
    for (j, &cj) in clauses.iter().enumerate() {
        cx.edge(cj, z[2 * j]);
        cx.edge(cj, z[2 * j + 1]);
    }
    boosted.extend(z.iter().map(|&v| (v, Follow::Part(2))));
    for (v, follow) in boosted {
        if extra_one {
            cx.plus_one(k, v, follow)?;
        }
        for _ in 0..boosts {
            cx.plus_two(k, v, follow)?;
        }
    }
    let reduction = if mindeg {
        for &yi in &y {
            for &c in &clauses[..k - 3] {
                cx.edge(yi, c);
            }
        }
        Reduction::OneKMindeg { k }
    } else {
        Reduction::OneK { k }
    };
    let declared = mindeg.then_some(k - 1);
    Ok(cx.finish(reduction, f, Target::min_degree(1, k), declared, Layout::Literal { y, literals }, None))
}

/// (δ≥1, δ≥k) construction. `f` must be a connected instance with clauses
/// of size 2 or 3, every literal occurring 1 to 3 times and every variable
/// at most 5 times.
pub fn build_1k(f: &CnfFormula, k: usize) -> Result<ReductionArtifact, ReductionError> {
    one_k(f, k, false)
}

/// [`build_1k`] plus edges from every `y_i` to the first `k − 3` clause
/// vertices, giving minimum degree `k − 1`.
pub fn build_1k_mindeg(f: &CnfFormula, k: usize) -> Result<ReductionArtifact, ReductionError> {
    one_k(f, k, true)
}

fn ring_layout(ring: &RingGraph, cycle_part: u8, anchor: usize) -> Layout {
    Layout::Ring { ring_vertices: ring.graph.n(), cycle_part, anchor }
}

/// (δ≥k1, δ≥k2) construction on the ring for `2 ≤ k1 ≤ k2`.
pub fn build_k1k2(f: &CnfFormula, k1: usize, k2: usize) -> Result<ReductionArtifact, ReductionError> {
    if !(2 <= k1 && k1 <= k2) {
        return Err(ReductionError::Parameter(format!("need 2 <= k1 <= k2, got ({k1}, {k2})")));
    }
    clause_sizes(f, 3, 3)?;
    let (n, m) = (f.num_vars(), f.num_clauses());
    precondition(m + 2 * n >= k1, || format!("m + 2n = {} < k1 = {k1}", m + 2 * n))?;
    let ring = build_ring(f)?;
    let mut cx = Ctx::from_ring(&ring);
    if k2 >= 3 {
        for v in 0..ring.graph.n() {
            cx.gadget(GadgetKind::Zk, k2, &[v], Follow::Vertex(v))?;
        }
    }
    let hub_side = Follow::Part(1);
    let mut spokes = Vec::new();
    for (prefix, first) in [("u", true), ("u'", false)] {
        for i in 0..n {
            let u = cx.vertex(format!("{prefix}[{}]", i + 1), hub_side);
            for side in [1, 2] {
                let s = if first { ring.a(i, side) } else { ring.b(i, side) };
                cx.edge(u, s);
            }
            if k1 >= 3 {
                cx.gadget(GadgetKind::Zk, k1, &[u], hub_side)?;
            }
            spokes.push(u);
        }
    }
    for (j, occ) in ring.occ_sets.iter().enumerate() {
        let c = cx.vertex(format!("clause:c[{}]", j + 1), hub_side);
        if k1 >= 3 {
            cx.gadget(GadgetKind::Zk, k1, &[c], hub_side)?;
        }
        for &o in occ {
            cx.edge(c, o);
        }
        spokes.push(c);
    }
    let r = cx.vertex("hub:r".into(), hub_side);
    for s in spokes {
        cx.gadget(GadgetKind::Wk, k1, &[r, s], hub_side)?;
    }
    let layout = ring_layout(&ring, 2, r);
    Ok(cx.finish(Reduction::K1K2 { k1, k2 }, f, Target::min_degree(k1, k2), None, layout, Some(ring)))
}

/// (δ≥a, δ≥a) construction at minimum degree `a + 1`: the squared ring
/// with paired clause vertices on a `2m`-cycle, doubled `a − 3` times.
pub fn build_aa(f: &CnfFormula, a: usize) -> Result<ReductionArtifact, ReductionError> {
    if a < 3 {
        return Err(ReductionError::Parameter(format!("a = {a}, need a >= 3")));
    }
    clause_sizes(f, 3, 3)?;
    let m = f.num_clauses();
    precondition(m >= 2, || "need at least 2 clauses".into())?;
    let ring = build_ring_squared(f)?;
    let mut cx = Ctx::from_ring(&ring);
    let side = Follow::Part(1);
    let mut c = Vec::with_capacity(m);
    for (j, occ) in ring.occ_sets.iter().enumerate() {
        let pair = [1, 2].map(|t| cx.vertex(format!("clause:c[{},{t}]", j + 1), side));
        for &o in occ {
            cx.edge(pair[0], o);
            cx.edge(pair[1], o);
        }
        c.push(pair);
    }
    let y: Vec<usize> = (0..2 * m).map(|t| cx.vertex(format!("y[{}]", t + 1), side)).collect();
    for t in 0..2 * m {
        cx.edge(y[t], y[(t + 1) % (2 * m)]);
    }
    for j in 0..m {
        cx.edge(y[2 * j], c[j][0]);
        cx.edge(y[2 * j], c[j][1]);
        cx.edge(y[2 * j + 1], c[j][1]);
        cx.edge(y[2 * j + 1], c[(j + 1) % m][0]);
    }
    let layout = ring_layout(&ring, 2, c[0][0]);
    let art = cx.finish(Reduction::Aa { a }, f, Target::min_degree(3, 3), Some(4), layout, Some(ring));
    let mut art = art.doubled(a - 3);
    art.target = Target::min_degree(a, a);
    art.declared_min_degree = Some(a + 1);
    Ok(art)
}

/// Tree whose internal vertices all have degree 3, over leaf pairs that
/// share a parent. Pair parents are merged first-in first-out.
fn cubic_tree(cx: &mut Ctx, pairs: &[[usize; 2]], follow: Follow) -> Vec<usize> {
    let mut internal = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for (t, pair) in pairs.iter().enumerate() {
        let p = cx.vertex(format!("tree:p[{}]", t + 1), follow);
        cx.edge(p, pair[0]);
        cx.edge(p, pair[1]);
        internal.push(p);
        queue.push_back(p);
    }
    let mut next = 0;
    while queue.len() > 2 {
        let (x, y) = (queue.pop_front().unwrap(), queue.pop_front().unwrap());
        next += 1;
        let s = cx.vertex(format!("tree:s[{next}]"), follow);
        cx.edge(s, x);
        cx.edge(s, y);
        internal.push(s);
        queue.push_back(s);
    }
    if let (Some(&x), Some(&y)) = (queue.front(), queue.back()) {
        if x != y {
            cx.edge(x, y);
        }
    }
    internal
}

/// (δ≥2, δ≥3) construction at minimum degree 3.
pub fn build_23_mindeg3(f: &CnfFormula) -> Result<ReductionArtifact, ReductionError> {
    clause_sizes(f, 3, 3)?;
    let (n, m) = (f.num_vars(), f.num_clauses());
    precondition(m >= 1, || "need at least one clause".into())?;
    precondition(f.min_literal_count() >= 2, || "every literal must occur at least twice".into())?;
    let ring = build_ring(f)?;
    let mut cx = Ctx::from_ring(&ring);
    let side = Follow::Part(2);
    let mut pairs = Vec::new();
    let mut u_pairs = Vec::new();
    for prefix in ["u", "u'"] {
        for i in 0..n {
            let pair = [1, 2].map(|t| cx.vertex(format!("{prefix}[{},{t}]", i + 1), side));
            pairs.push(pair);
            u_pairs.push(pair);
        }
    }
    let mut c_pairs = Vec::new();
    for j in 0..m {
        let pair = [1, 2].map(|t| cx.vertex(format!("clause:c[{},{t}]", j + 1), side));
        pairs.push(pair);
        c_pairs.push(pair);
    }
    let tree = cubic_tree(&mut cx, &pairs, side);
    for (j, pair) in c_pairs.iter().enumerate() {
        for &o in &ring.occ_sets[j] {
            cx.edge(pair[0], o);
            cx.edge(pair[1], o);
        }
        cx.edge(pair[0], pair[1]);
    }
    for (prefix, first) in [("w", true), ("w'", false)] {
        for i in 0..n {
            let w = [1, 2].map(|t| cx.vertex(format!("{prefix}[{},{t}]", i + 1), side));
            cx.edge(w[0], w[1]);
            for t in 0..2 {
                let s = if first { ring.a(i, t + 1) } else { ring.b(i, t + 1) };
                cx.edge(w[t], s);
            }
            let u = u_pairs[if first { i } else { n + i }];
            for &ux in &u {
                cx.edge(ux, w[0]);
                cx.edge(ux, w[1]);
            }
            cx.edge(u[0], u[1]);
        }
    }
    let layout = ring_layout(&ring, 1, tree[0]);
    Ok(cx.finish(Reduction::TwoThreeMindeg3, f, Target::min_degree(2, 3), Some(3), layout, Some(ring)))
}

/// (δ≥k, δ≥k+1) at minimum degree `k + 1`: the (2,3) construction doubled
/// `k − 2` times.
pub fn build_kk1(f: &CnfFormula, k: usize) -> Result<ReductionArtifact, ReductionError> {
    if k < 2 {
        return Err(ReductionError::Parameter(format!("k = {k}, need k >= 2")));
    }
    let mut art = build_23_mindeg3(f)?.doubled(k - 2);
    art.reduction = Reduction::Kk1 { k };
    art.target = Target::min_degree(k, k + 1);
    art.declared_min_degree = Some(k + 1);
    Ok(art)
}

struct TwoEcParts {
    cx: Ctx,
    ring: RingGraph,
    c_prime: Vec<usize>,
    primes: Vec<usize>,
    anchor: usize,
}

fn two_ec_base(f: &CnfFormula) -> Result<TwoEcParts, ReductionError> {
    clause_sizes(f, 1, 3)?;
    let n = f.num_vars();
    let ring = build_ring(f)?;
    let mut cx = Ctx::from_ring(&ring);
    let side = Follow::Part(2);
    let mut c_prime = Vec::new();
    let mut anchor = None;
    for (j, occ) in ring.occ_sets.iter().enumerate() {
        let c = cx.vertex(format!("clause:c[{}]", j + 1), side);
        for &o in occ {
            cx.edge(c, o);
        }
        let cp = cx.vertex(format!("clause:c'[{}]", j + 1), side);
        cx.edge(c, cp);
        c_prime.push(cp);
        anchor.get_or_insert(c);
    }
    let mut primes = Vec::new();
    for (name, first) in [("alpha", true), ("beta", false)] {
        for i in 0..n {
            let x = cx.vertex(format!("{name}[{}]", i + 1), side);
            for s in [1, 2] {
                cx.edge(x, if first { ring.a(i, s) } else { ring.b(i, s) });
            }
            let xp = cx.vertex(format!("{name}'[{}]", i + 1), side);
            cx.edge(x, xp);
            primes.push(xp);
            anchor.get_or_insert(x);
        }
    }
    let anchor = anchor.expect("at least two variables");
    Ok(TwoEcParts { cx, ring, c_prime, primes, anchor })
}

/// (2-edge-connected, connected with a cycle) construction.
pub fn build_2ec_conn(f: &CnfFormula) -> Result<ReductionArtifact, ReductionError> {
    let TwoEcParts { cx, ring, anchor, .. } = two_ec_base(f)?;
    let target = Target::new(PartProperty::TwoEdgeConnected, PartProperty::ConnectedWithCycle);
    let layout = ring_layout(&ring, 1, anchor);
    Ok(cx.finish(Reduction::TwoEcConn, f, target, None, layout, Some(ring)))
}

/// (2-edge-connected, 2-edge-connected) construction: the previous graph
/// closed up by the cycle `γ q_0 c''_1 q_1 … c''_m q_m γ`.
pub fn build_2ec_2ec(f: &CnfFormula) -> Result<ReductionArtifact, ReductionError> {
    precondition(f.num_clauses() >= 1, || "need at least one clause".into())?;
    let TwoEcParts { mut cx, ring, c_prime, primes, anchor } = two_ec_base(f)?;
    let side = Follow::Part(2);
    let m = c_prime.len();
    let q: Vec<usize> = (0..=m).map(|j| cx.vertex(format!("q[{j}]"), side)).collect();
    for (j, &cp) in c_prime.iter().enumerate() {
        let cpp = cx.vertex(format!("clause:c''[{}]", j + 1), side);
        cx.edge(cp, cpp);
        cx.edge(q[j], cpp);
        cx.edge(cpp, q[j + 1]);
    }
    let gamma = cx.vertex("gamma".into(), side);
    cx.edge(gamma, q[0]);
    cx.edge(gamma, q[m]);
    for p in primes {
        cx.edge(gamma, p);
    }
    let target = Target::new(PartProperty::TwoEdgeConnected, PartProperty::TwoEdgeConnected);
    let layout = ring_layout(&ring, 1, anchor);
    Ok(cx.finish(Reduction::TwoEcTwoEc, f, target, None, layout, Some(ring)))
}
