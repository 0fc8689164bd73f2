//! Plain-text edge-list interchange format.
//!
//! ```text
//! # comment
//! p <n> <m>
//! <u> <v>        (m lines, 0-based endpoints)
//! l <v> <label>  (optional, any number)
//! ```
//!
//! Digraphs use the same layout with header `d <n> <m>` and one arc
//! `<from> <to>` per line.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gadgets::Digraph;
use crate::graph::{Graph, VertexId};

/// Parses the edge-list format. Vertices are numbered `0..n`.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut graph: Option<(Graph, usize)> = None;
    let mut edges_seen = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: lineno, msg };
        let mut tokens = line.split_whitespace();
        let head = tokens.next().unwrap_or_default();
        match (head, graph.as_mut()) {
            ("p", None) => {
                let n = parse_usize(tokens.next(), lineno, "vertex count")?;
                let m = parse_usize(tokens.next(), lineno, "edge count")?;
                graph = Some((Graph::new(n), m));
            }
            ("p", Some(_)) => return Err(err("duplicate header line".into())),
            (_, None) => return Err(err("expected header line 'p <n> <m>'".into())),
            ("l", Some((g, _))) => {
                let v = parse_usize(tokens.next(), lineno, "vertex")?;
                let rest = line[1..].trim_start();
                let label = rest[rest.find(char::is_whitespace).unwrap_or(rest.len())..].trim();
                if label.is_empty() {
                    return Err(err("label line without a label".into()));
                }
                if v >= g.id_bound() {
                    return Err(err(format!("label for vertex {v} out of range")));
                }
                g.set_label(VertexId::from(v), label)
                    .map_err(|e| err(e.to_string()))?;
            }
            (_, Some((g, _))) => {
                let u = parse_usize(Some(head), lineno, "endpoint")?;
                let v = parse_usize(tokens.next(), lineno, "endpoint")?;
                if tokens.next().is_some() {
                    return Err(err("trailing tokens after edge".into()));
                }
                let n = g.id_bound();
                for x in [u, v] {
                    if x >= n {
                        return Err(err(
                            Error::EndpointOutOfRange { index: x, n }.to_string(),
                        ));
                    }
                }
                g.add_edge(VertexId::from(u), VertexId::from(v))
                    .map_err(|e| err(e.to_string()))?;
                edges_seen += 1;
            }
        }
    }
    let (g, m) = graph.ok_or(Error::Parse {
        line: 0,
        msg: "missing header line 'p <n> <m>'".into(),
    })?;
    if edges_seen != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header announces {m} edges but {edges_seen} were given"),
        });
    }
    Ok(g)
}

/// Parses a digraph: header `d <n> <m>`, then `m` arcs. Loops are rejected.
pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: lineno, msg };
        let mut tokens = line.split_whitespace();
        let head = tokens.next().unwrap_or_default();
        match (head, header) {
            ("d", None) => {
                let n = parse_usize(tokens.next(), lineno, "vertex count")?;
                let m = parse_usize(tokens.next(), lineno, "arc count")?;
                header = Some((n, m));
            }
            ("d", Some(_)) => return Err(err("duplicate header line".into())),
            (_, None) => return Err(err("expected header line 'd <n> <m>'".into())),
            (_, Some((n, _))) => {
                let a = parse_usize(Some(head), lineno, "arc tail")?;
                let b = parse_usize(tokens.next(), lineno, "arc head")?;
                if tokens.next().is_some() {
                    return Err(err("trailing tokens after arc".into()));
                }
                if a == b {
                    return Err(err(format!("loop at {a}")));
                }
                for x in [a, b] {
                    if x >= n {
                        return Err(err(Error::EndpointOutOfRange { index: x, n }.to_string()));
                    }
                }
                arcs.push((a, b));
            }
        }
    }
    let (n, m) = header.ok_or(Error::Parse {
        line: 0,
        msg: "missing header line 'd <n> <m>'".into(),
    })?;
    if arcs.len() != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header announces {m} arcs but {} were given", arcs.len()),
        });
    }
    Digraph::new(n, arcs)
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid {what} '{tok}'"),
    })
}

/// Writes `g` in the edge-list format. Present vertices are renumbered
/// `0..n` in identifier order; the mapping is returned alongside the text.
pub fn write_edge_list(g: &Graph) -> (String, Vec<VertexId>) {
    let ids: Vec<VertexId> = g.vertices().collect();
    let mut local = vec![usize::MAX; g.id_bound()];
    for (i, v) in ids.iter().enumerate() {
        local[v.index()] = i;
    }
    let mut out = String::new();
    let _ = writeln!(out, "p {} {}", ids.len(), g.edge_count());
    for &(a, b) in g.edges() {
        let _ = writeln!(out, "{} {}", local[a.index()], local[b.index()]);
    }
    for &v in &ids {
        if let Some(l) = g.label(v) {
            let _ = writeln!(out, "l {} {}", local[v.index()], l);
        }
    }
    (out, ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_comments_labels_and_whitespace() {
        let text = "# a triangle\n  p 3   3\n0 1\n1\t2\n\n2 0\nl 0 apex one\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.label(VertexId(0)), Some("apex one"));
        assert_eq!(g.find_label("apex one"), Some(VertexId(0)));
    }

    #[test]
    fn digraphs() {
        let h = parse_digraph("# path\nd 3 2\n0 1\n1 2\n").unwrap();
        assert_eq!(h, Digraph::new(3, vec![(0, 1), (1, 2)]).unwrap());
        assert!(parse_digraph("d 2 1\n0 0\n").is_err());
        assert!(parse_digraph("d 2 1\n0 2\n").is_err());
        assert!(parse_digraph("d 2 2\n0 1\n").is_err());
        assert!(parse_digraph("p 2 1\n0 1\n").is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_edge_list("0 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("p 2 1\n0 5\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_edge_list("p 2 2\n0 1\n").is_err());
        assert!(parse_edge_list("p 2 1\n0 x\n").is_err());
    }

    #[test]
    fn writes_compacted_ids() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3), (1, 2)]).unwrap();
        let h = g.delete_vertices(&[VertexId(0)]).unwrap();
        let (text, ids) = write_edge_list(&h);
        assert_eq!(ids, vec![VertexId(1), VertexId(2), VertexId(3)]);
        assert_eq!(text, "p 3 2\n1 2\n0 1\n");
    }

    proptest! {
        #[test]
        fn round_trip(n in 1usize..12, raw in proptest::collection::vec((0usize..12, 0usize..12), 0..30)) {
            let edges: Vec<_> = raw.into_iter().map(|(a, b)| (a % n, b % n)).collect();
            let mut g = Graph::from_edges(n, &edges).unwrap();
            g.set_label(VertexId(0), "root").unwrap();
            let (text, _) = write_edge_list(&g);
            let back = parse_edge_list(&text).unwrap();
            prop_assert_eq!(back, g);
        }
    }
}
