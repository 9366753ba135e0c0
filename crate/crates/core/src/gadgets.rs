//! Small fixed graphs attached at designated vertices to raise and pin
//! degrees.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphBuilder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("{kind} needs k >= {min}, got {k}")]
    ParameterOutOfRange { kind: GadgetKind, k: usize, min: usize },
    #[error("attachment map must name {expected} distinct host vertices")]
    BadIdentification { expected: usize },
    #[error("host vertex {0} out of range")]
    HostOutOfRange(usize),
    #[error("unknown gadget kind `{0}`")]
    UnknownKind(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GadgetKind {
    #[serde(rename = "x_k2")]
    Xk2,
    #[serde(rename = "x31")]
    X31,
    #[serde(rename = "y41")]
    Y41,
    #[serde(rename = "z_k")]
    Zk,
    #[serde(rename = "w_k")]
    Wk,
}

impl GadgetKind {
    pub const ALL: [GadgetKind; 5] = [GadgetKind::Xk2, GadgetKind::X31, GadgetKind::Y41, GadgetKind::Zk, GadgetKind::Wk];

    pub fn name(self) -> &'static str {
        match self {
            GadgetKind::Xk2 => "x_k2",
            GadgetKind::X31 => "x31",
            GadgetKind::Y41 => "y41",
            GadgetKind::Zk => "z_k",
            GadgetKind::Wk => "w_k",
        }
    }
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GadgetKind {
    type Err = GadgetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GadgetKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| GadgetError::UnknownKind(s.to_string()))
    }
}

/// A built gadget. Attachment vertices come first (`0`, and `1` for W_k).
#[derive(Clone, Debug)]
pub struct Gadget {
    pub kind: GadgetKind,
    pub k: usize,
    pub graph: Graph,
    pub attachments: Vec<usize>,
    /// Local name of each vertex, e.g. `x`, `hub`, `k3`.
    pub labels: Vec<String>,
}

impl Gadget {
    /// Degree added to each host by attaching this gadget.
    pub fn increment(&self) -> usize {
        self.graph.degree(self.attachments[0])
    }

    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.graph.n()).filter(|v| !self.attachments.contains(v))
    }

    /// Interior degrees in vertex order.
    pub fn interior_degrees(&self) -> Vec<usize> {
        self.interior().map(|v| self.graph.degree(v)).collect()
    }
}

fn labelled(prefix: &str, range: std::ops::Range<usize>) -> impl Iterator<Item = String> + '_ {
    range.map(move |i| format!("{prefix}{i}"))
}

pub fn build_gadget(kind: GadgetKind, k: usize) -> Result<Gadget, GadgetError> {
    let min = match kind {
        GadgetKind::Xk2 | GadgetKind::Zk => 3,
        GadgetKind::Wk => 2,
        GadgetKind::X31 | GadgetKind::Y41 => 0,
    };
    if k < min {
        return Err(GadgetError::ParameterOutOfRange { kind, k, min });
    }
    let gadget = match kind {
        GadgetKind::Xk2 => x_k2(k),
        GadgetKind::X31 => x31(),
        GadgetKind::Y41 => y41(),
        GadgetKind::Zk if k == 3 => Gadget { kind: GadgetKind::Zk, k: 3, ..x31() },
        GadgetKind::Zk => z_k(k),
        GadgetKind::Wk => w_k(k),
    };
    Ok(gadget)
}

/// K_{k+1} on `1..=k+1` with edge `1 2` subdivided by `x = 0`.
fn x_k2(k: usize) -> Gadget {
    let mut b = GraphBuilder::new(k + 2);
    for i in 1..=k + 1 {
        for j in i + 1..=k + 1 {
            if (i, j) != (1, 2) {
                b.add_edge(i, j).unwrap();
            }
        }
    }
    b.add_edge(0, 1).unwrap();
    b.add_edge(0, 2).unwrap();
    let labels = std::iter::once("x".to_string()).chain(labelled("k", 1..k + 2)).collect();
    Gadget { kind: GadgetKind::Xk2, k, graph: b.build(), attachments: vec![0], labels }
}

/// X_{3,2} plus a pendant `x'` (vertex 0) on its `x` (vertex 1).
fn x31() -> Gadget {
    let inner = x_k2(3);
    let mut b = GraphBuilder::new(6);
    for (u, v) in inner.graph.edges() {
        b.add_edge(u + 1, v + 1).unwrap();
    }
    b.add_edge(0, 1).unwrap();
    let mut labels = vec!["x'".to_string()];
    labels.extend(inner.labels);
    Gadget { kind: GadgetKind::X31, k: 3, graph: b.build(), attachments: vec![0], labels }
}

/// 5-wheel (hub 2, rim 3..=7) with chord `rim0 rim2`, a vertex `s` (1) on
/// the three rim vertices off the chord, and the pendant `y` (0) on `s`.
fn y41() -> Gadget {
    let (y, s, hub) = (0, 1, 2);
    let rim = |i: usize| 3 + i % 5;
    let mut b = GraphBuilder::new(8);
    for i in 0..5 {
        b.add_edge(hub, rim(i)).unwrap();
        b.add_edge(rim(i), rim(i + 1)).unwrap();
    }
    b.add_edge(rim(0), rim(2)).unwrap();
    for i in [1, 3, 4] {
        b.add_edge(s, rim(i)).unwrap();
    }
    b.add_edge(y, s).unwrap();
    let labels = ["y", "s", "hub"].iter().map(|s| s.to_string()).chain(labelled("rim", 0..5)).collect();
    Gadget { kind: GadgetKind::Y41, k: 4, graph: b.build(), attachments: vec![0], labels }
}

/// K_{k−2,k−1} plus a cycle on the larger side and `z` (0) on the smaller.
fn z_k(k: usize) -> Gadget {
    let a: Vec<usize> = (1..k - 1).collect();
    let c: Vec<usize> = (k - 1..2 * k - 2).collect();
    let mut b = GraphBuilder::new(2 * k - 2);
    for &u in &a {
        b.add_edge(0, u).unwrap();
        for &v in &c {
            b.add_edge(u, v).unwrap();
        }
    }
    for i in 0..c.len() {
        b.add_edge(c[i], c[(i + 1) % c.len()]).unwrap();
    }
    let labels = std::iter::once("z".to_string()).chain(labelled("a", 0..a.len())).chain(labelled("b", 0..c.len())).collect();
    Gadget { kind: GadgetKind::Zk, k, graph: b.build(), attachments: vec![0], labels }
}

/// K_{k+1} on `2..=k+2` minus `u'v'` (2, 3), plus `u u'` and `v v'`.
fn w_k(k: usize) -> Gadget {
    let mut b = GraphBuilder::new(k + 3);
    for i in 2..=k + 2 {
        for j in i + 1..=k + 2 {
            if (i, j) != (2, 3) {
                b.add_edge(i, j).unwrap();
            }
        }
    }
    b.add_edge(0, 2).unwrap();
    b.add_edge(1, 3).unwrap();
    let labels = ["u", "v", "u'", "v'"].iter().map(|s| s.to_string()).chain(labelled("w", 0..k - 1)).collect();
    Gadget { kind: GadgetKind::Wk, k, graph: b.build(), attachments: vec![0, 1], labels }
}

/// Adds a private copy of `gadget` to `b`, identifying its attachment
/// vertices with `hosts`. Returns the id of every gadget vertex in `b`.
pub fn attach_into(b: &mut GraphBuilder, gadget: &Gadget, hosts: &[usize]) -> Result<Vec<usize>, GadgetError> {
    let expected = gadget.attachments.len();
    if hosts.len() != expected || (expected == 2 && hosts[0] == hosts[1]) {
        return Err(GadgetError::BadIdentification { expected });
    }
    if let Some(&h) = hosts.iter().find(|&&h| h >= b.n()) {
        return Err(GadgetError::HostOutOfRange(h));
    }
    let ids: Vec<usize> = (0..gadget.graph.n())
        .map(|v| match gadget.attachments.iter().position(|&a| a == v) {
            Some(i) => hosts[i],
            None => b.add_vertex(),
        })
        .collect();
    for (u, v) in gadget.graph.edges() {
        // Attachment vertices are never adjacent inside a gadget, so this
        // only fails if the builder is already inconsistent.
        b.add_edge(ids[u], ids[v]).expect("fresh gadget copy cannot create a parallel edge");
    }
    Ok(ids)
}

/// Disjoint union of `host` and `gadget` with the attachment vertices
/// identified with `hosts`. Gadget interior vertices get ids `host.n()..`.
pub fn attach(host: &Graph, gadget: &Gadget, hosts: &[usize]) -> Result<(Graph, Vec<usize>), GadgetError> {
    let mut b = GraphBuilder::new(host.n());
    for (u, v) in host.edges() {
        b.add_edge(u, v).unwrap();
    }
    let ids = attach_into(&mut b, gadget, hosts)?;
    Ok((b.build(), ids))
}
