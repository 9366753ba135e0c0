//! The `p dcp` edge-list format and Graphviz export.

use std::fmt::Write as _;

use super::{Graph, GraphBuilder, GraphError, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Dot,
}

/// Parses `c` comment lines, a `p dcp <n> <m>` header and exactly `m`
/// lines `e <u> <v>` with 1-based vertex ids.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut builder: Option<(GraphBuilder, usize)> = None;
    let mut found = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let malformed = |msg: &str| GraphError::Malformed { line: line_no, msg: msg.to_string() };
        let tok: Vec<&str> = line.split_whitespace().collect();
        match tok[0] {
            "p" => {
                if builder.is_some() {
                    return Err(malformed("duplicate header"));
                }
                if tok.len() != 4 || tok[1] != "dcp" {
                    return Err(malformed("expected `p dcp <n> <m>`"));
                }
                let n = tok[2].parse::<usize>().map_err(|_| malformed("bad vertex count"))?;
                let m = tok[3].parse::<usize>().map_err(|_| malformed("bad edge count"))?;
                builder = Some((GraphBuilder::new(n), m));
            }
            "e" => {
                let (b, _) = builder.as_mut().ok_or_else(|| malformed("edge before header"))?;
                if tok.len() != 3 {
                    return Err(malformed("expected `e <u> <v>`"));
                }
                let u = tok[1].parse::<usize>().map_err(|_| malformed("bad vertex id"))?;
                let v = tok[2].parse::<usize>().map_err(|_| malformed("bad vertex id"))?;
                let n = b.n();
                for x in [u, v] {
                    if x == 0 || x > n {
                        return Err(GraphError::OutOfRange { vertex: x, n });
                    }
                }
                b.add_edge(u - 1, v - 1)?;
                found += 1;
            }
            _ => return Err(malformed("unknown line type")),
        }
    }
    let (b, declared) = builder.ok_or(GraphError::Malformed { line: 0, msg: "missing header".into() })?;
    if declared != found {
        return Err(GraphError::EdgeCountMismatch { declared, found });
    }
    Ok(b.build())
}

pub fn serialize_edge_list(g: &Graph) -> String {
    let mut out = format!("p dcp {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

const PART_COLORS: [&str; 2] = ["lightblue", "salmon"];

/// Undirected DOT. Nodes are labelled `id:role` when roles are supplied
/// (1-based ids, matching the edge-list format) and filled by part when a
/// partition is supplied.
pub fn serialize_dot(g: &Graph, roles: Option<&[String]>, partition: Option<&Partition>) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.n() {
        let label = match roles.and_then(|r| r.get(v)) {
            Some(role) => format!("{}:{}", v + 1, role),
            None => format!("{}", v + 1),
        };
        let _ = write!(out, "  {} [label=\"{}\"", v + 1, label.replace('"', "\\\""));
        if let Some(p) = partition {
            let color = PART_COLORS[usize::from(p.part(v) == 2)];
            let _ = write!(out, ", style=filled, fillcolor={color}");
        }
        out.push_str("];\n");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {} -- {};", u + 1, v + 1);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_path() {
        let g = parse_graph("p dcp 3 2\ne 1 2\ne 2 3").unwrap();
        assert_eq!(g, Graph::path(3));
    }

    #[test]
    fn rejects_self_loop() {
        assert_eq!(parse_graph("p dcp 2 1\ne 1 1"), Err(GraphError::SelfLoop(0)));
    }

    #[test]
    fn parses_k4_with_comments() {
        let text = "c complete graph\np dcp 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g, Graph::complete(4));
        assert_eq!(g.min_degree(), Ok(3));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_graph("p dcp 3 2\ne 1 2"), Err(GraphError::EdgeCountMismatch { .. })));
        assert!(matches!(parse_graph("p dcp 3 2\ne 1 2\ne 2 1"), Err(GraphError::DuplicateEdge(0, 1))));
        assert!(matches!(parse_graph("p dcp 3 1\ne 1 4"), Err(GraphError::OutOfRange { vertex: 4, .. })));
        assert!(matches!(parse_graph("p dcp 3 1\nx 1 2"), Err(GraphError::Malformed { line: 2, .. })));
        assert!(matches!(parse_graph("e 1 2"), Err(GraphError::Malformed { .. })));
    }

    #[test]
    fn edge_list_round_trip() {
        let k3 = Graph::complete(3);
        let text = serialize_edge_list(&k3);
        assert_eq!(text.lines().filter(|l| l.starts_with("e ")).count(), 3);
        assert_eq!(parse_graph(&text).unwrap(), k3);
        assert_eq!(serialize_edge_list(&Graph::empty(0)), "p dcp 0 0\n");
    }

    #[test]
    fn dot_labels_roles() {
        let roles: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let dot = serialize_dot(&Graph::complete(3), Some(&roles), None);
        for l in ["1:a", "2:b", "3:c"] {
            assert!(dot.contains(&format!("label=\"{l}\"")));
        }
        assert_eq!(dot.matches(" -- ").count(), 3);
    }
}
