// SPDX-License-Identifier: Apache-2.0

//! JSON and DOT encodings for [`UndirectedGraph`] and [`Digraph`].
//!
//! Graph JSON is `{"n": 3, "edges": [[0, 1], [1, 2]]}` and digraph JSON is
//! `{"n": 3, "arcs": [[1, 0]]}`, both with 0-based ids. Output is always
//! sorted, so equal graphs serialize to identical bytes.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Digraph, GraphError, UndirectedGraph};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DigraphJson {
    pub n: usize,
    pub arcs: Vec<[usize; 2]>,
}

impl From<&UndirectedGraph> for GraphJson {
    fn from(g: &UndirectedGraph) -> Self {
        GraphJson {
            n: g.vertex_count(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for UndirectedGraph {
    type Error = GraphError;

    fn try_from(doc: GraphJson) -> Result<Self, GraphError> {
        UndirectedGraph::from_edges(doc.n, doc.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

impl From<&Digraph> for DigraphJson {
    fn from(d: &Digraph) -> Self {
        DigraphJson {
            n: d.vertex_count(),
            arcs: d.arcs().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<DigraphJson> for Digraph {
    type Error = GraphError;

    fn try_from(doc: DigraphJson) -> Result<Self, GraphError> {
        Digraph::from_arcs(doc.n, doc.arcs.into_iter().map(|[u, v]| (u, v)))
    }
}

pub fn graph_to_json(g: &UndirectedGraph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("graph JSON is always serializable")
}

pub fn graph_from_json(text: &str) -> Result<UndirectedGraph, FormatError> {
    let doc: GraphJson = serde_json::from_str(text)?;
    Ok(doc.try_into()?)
}

pub fn digraph_to_json(d: &Digraph) -> String {
    serde_json::to_string(&DigraphJson::from(d)).expect("digraph JSON is always serializable")
}

pub fn digraph_from_json(text: &str) -> Result<Digraph, FormatError> {
    let doc: DigraphJson = serde_json::from_str(text)?;
    Ok(doc.try_into()?)
}

// Graphviz "set312" has twelve fill colours.
const PALETTE_SIZE: usize = 12;

fn write_nodes(out: &mut String, n: usize, coloring: Option<&[usize]>) {
    if coloring.is_some() {
        out.push_str("  node [style=filled, colorscheme=set312];\n");
    }
    for v in 0..n {
        match coloring {
            Some(colors) => {
                let c = colors[v] % PALETTE_SIZE + 1;
                let _ = writeln!(out, "  {v} [fillcolor={c}, class={}];", colors[v]);
            }
            None => {
                let _ = writeln!(out, "  {v};");
            }
        }
    }
}

/// DOT for an undirected graph. `coloring`, when given, maps each vertex to a
/// class index and is emitted as fill colours.
pub fn graph_to_dot(g: &UndirectedGraph, coloring: Option<&[usize]>) -> String {
    let mut out = String::from("graph G {\n");
    write_nodes(&mut out, g.vertex_count(), coloring);
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

pub fn digraph_to_dot(d: &Digraph, coloring: Option<&[usize]>) -> String {
    let mut out = String::from("digraph G {\n");
    write_nodes(&mut out, d.vertex_count(), coloring);
    for (u, v) in d.arcs() {
        let _ = writeln!(out, "  {u} -> {v};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_json_deduplicates_and_sorts() {
        let g = graph_from_json(r#"{"n": 4, "edges": [[2, 1], [1, 2], [0, 3]]}"#).unwrap();
        assert_eq!(graph_to_json(&g), r#"{"n":4,"edges":[[0,3],[1,2]]}"#);
    }

    #[test]
    fn digraph_json_roundtrip() {
        let text = r#"{"n":3,"arcs":[[0,1],[2,0],[2,1]]}"#;
        let d = digraph_from_json(text).unwrap();
        assert_eq!(digraph_to_json(&d), text);
    }

    #[test]
    fn json_rejects_self_loops_and_range() {
        assert!(matches!(
            graph_from_json(r#"{"n": 2, "edges": [[1, 1]]}"#),
            Err(FormatError::Graph(GraphError::SelfLoop(1)))
        ));
        assert!(matches!(
            digraph_from_json(r#"{"n": 2, "arcs": [[0, 2]]}"#),
            Err(FormatError::Graph(GraphError::VertexOutOfRange { .. }))
        ));
        assert!(matches!(
            graph_from_json(r#"{"n": 2}"#),
            Err(FormatError::Json(_))
        ));
    }

    #[test]
    fn dot_output() {
        let g = UndirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(
            graph_to_dot(&g, None),
            "graph G {\n  0;\n  1;\n  0 -- 1;\n}\n"
        );
        let d = Digraph::from_arcs(2, [(1, 0)]).unwrap();
        let dot = digraph_to_dot(&d, Some(&[0, 13]));
        assert!(dot.starts_with("digraph G {\n"));
        assert!(dot.contains("1 [fillcolor=2, class=13];"));
        assert!(dot.contains("1 -> 0;"));
    }
}
