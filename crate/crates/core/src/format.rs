//! Line-oriented text formats for digraphs and edge sets.
//!
//! ```text
//! # comment
//! root r
//! vertex u          # optional, for isolated vertices
//! edge e1 r a
//! ```

use std::fmt::Write as _;

use crate::graph::{GraphError, RootedDigraph};
use crate::sets::EdgeSet;

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn syntax(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Syntax {
        line,
        message: message.into(),
    }
}

pub fn parse_digraph(text: &str) -> Result<RootedDigraph, GraphError> {
    let mut root: Option<String> = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let fields: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        match fields.as_slice() {
            [] => {}
            ["root", id] => {
                if root.is_some() {
                    return Err(syntax(line_no, "root declared twice"));
                }
                root = Some((*id).to_owned());
            }
            ["vertex", id] => vertices.push((*id).to_owned()),
            ["edge", id, tail, head] => {
                edges.push(((*id).to_owned(), (*tail).to_owned(), (*head).to_owned()))
            }
            ["root", ..] => return Err(syntax(line_no, "expected `root <vertex-id>`")),
            ["vertex", ..] => return Err(syntax(line_no, "expected `vertex <vertex-id>`")),
            ["edge", ..] => {
                return Err(syntax(
                    line_no,
                    "expected `edge <edge-id> <tail-id> <head-id>`",
                ))
            }
            [keyword, ..] => {
                return Err(syntax(line_no, format!("unknown directive `{keyword}`")))
            }
        }
    }
    let root = root.ok_or(GraphError::UndeclaredRoot)?;
    RootedDigraph::new(
        &root,
        vertices.iter().map(String::as_str),
        edges
            .iter()
            .map(|(e, t, h)| (e.as_str(), t.as_str(), h.as_str())),
    )
}

/// Canonical text form: root line, isolated vertices, then edges sorted by id.
pub fn serialize_digraph(g: &RootedDigraph) -> String {
    let mut out = String::new();
    writeln!(out, "root {}", g.vertex_name(g.root())).unwrap();
    for v in g.non_root_vertices() {
        let view = g.view();
        if view.in_edges(v).next().is_none() && view.out_edges(v).next().is_none() {
            writeln!(out, "vertex {}", g.vertex_name(v)).unwrap();
        }
    }
    for e in g.edge_ids() {
        let edge = g.edge(e);
        writeln!(
            out,
            "edge {} {} {}",
            edge.name,
            g.vertex_name(edge.tail),
            g.vertex_name(edge.head)
        )
        .unwrap();
    }
    out
}

/// One edge id per line; blank lines and `#` comments are ignored.
pub fn parse_edge_set(g: &RootedDigraph, text: &str) -> Result<EdgeSet, GraphError> {
    let mut set = g.empty_edges();
    for (i, raw) in text.lines().enumerate() {
        let fields: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        match fields.as_slice() {
            [] => {}
            [id] => {
                let e = g.edge_by_name(id).map_err(|_| {
                    syntax(i + 1, format!("unknown edge `{id}`"))
                })?;
                set.insert(e);
            }
            _ => return Err(syntax(i + 1, "expected one edge id per line")),
        }
    }
    Ok(set)
}

pub fn serialize_edge_set(g: &RootedDigraph, set: &EdgeSet) -> String {
    let mut names = g.edge_names(set);
    names.sort();
    names.iter().map(|n| format!("{n}\n")).collect()
}

/// Graphviz DOT dump, with `highlight` edges drawn bold.
pub fn to_dot(g: &RootedDigraph, highlight: Option<&EdgeSet>) -> String {
    let mut out = String::from("digraph D {\n");
    writeln!(out, "  \"{}\" [shape=doublecircle];", g.vertex_name(g.root())).unwrap();
    for v in g.non_root_vertices() {
        writeln!(out, "  \"{}\";", g.vertex_name(v)).unwrap();
    }
    for e in g.edge_ids() {
        let edge = g.edge(e);
        let style = if highlight.is_some_and(|h| h.contains(e)) {
            ", style=bold"
        } else {
            ""
        };
        writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"{}];",
            g.vertex_name(edge.tail),
            g.vertex_name(edge.head),
            edge.name,
            style
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_edge() {
        let g = parse_digraph("root r\nedge e1 r v\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_name(g.edge_ids().next().unwrap()), "e1");
    }

    #[test]
    fn parses_g1_with_comments() {
        let text = "# G1\nroot r\nedge e1 r a\nedge e2 r a # parallel\n\nedge e3 a b\nedge e4 r b\n";
        let g = parse_digraph(text).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn reports_errors() {
        assert!(matches!(
            parse_digraph("root r\nedge e1 v r\n"),
            Err(GraphError::RootHasIngoingEdge { .. })
        ));
        assert_eq!(
            parse_digraph("root r\nedge e1 r\n"),
            Err(GraphError::Syntax {
                line: 2,
                message: "expected `edge <edge-id> <tail-id> <head-id>`".into()
            })
        );
        assert!(matches!(
            parse_digraph("edge e1 r v\n"),
            Err(GraphError::UndeclaredRoot)
        ));
        assert!(matches!(
            parse_digraph("root r\nedge e1 v v\n"),
            Err(GraphError::Loop(_))
        ));
        assert!(matches!(
            parse_digraph("root r\nedge e1 r v\nedge e1 r w\n"),
            Err(GraphError::DuplicateEdge(_))
        ));
        assert!(matches!(
            parse_digraph("root r\nnode x\n"),
            Err(GraphError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_digraph("root r\nroot s\n"),
            Err(GraphError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn isolated_vertices_survive_round_trip() {
        let text = "root r\nvertex u\n";
        let g = parse_digraph(text).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(serialize_digraph(&g), text);
    }

    #[test]
    fn edge_set_files() {
        let g = parse_digraph("root r\nedge e1 r a\nedge e2 r a\n").unwrap();
        let set = parse_edge_set(&g, "e2\n\ne1 # first\n").unwrap();
        assert_eq!(serialize_edge_set(&g, &set), "e1\ne2\n");
        assert!(matches!(
            parse_edge_set(&g, "e1\ne9\n"),
            Err(GraphError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn dot_mentions_every_edge() {
        let g = parse_digraph("root r\nedge e1 r a\nedge e2 a b\n").unwrap();
        let dot = to_dot(&g, Some(&g.edge_set(["e2"]).unwrap()));
        assert!(dot.contains("label=\"e1\"]"));
        assert!(dot.contains("label=\"e2\", style=bold"));
    }
}
