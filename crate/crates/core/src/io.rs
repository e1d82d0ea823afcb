//! The plain-text graph file format.
//!
//! ```text
//! # comment
//! dim 4
//! vertex 0 external
//! vertex x internal
//! edge e1 0 x weight 1
//! rotation x: e1 e2 e3
//! ```
//!
//! Weights and the dimension are exact: integers, `p/q` or finite decimals.
//! `rotation` lines give the cyclic order of edges around a vertex and are
//! only needed for planar duals.

use std::fmt::Write as _;

use thiserror::Error;

use crate::dual::{RotationError, RotationSystem};
use crate::graph::{build_graph, EdgeDecl, FeynmanGraph, GraphDescription, ValidationError, VertexDecl};
use crate::rational::{format_rational, parse_rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum GraphFileError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Rotation(#[from] RotationError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationDecl {
    pub vertex: String,
    pub edges: Vec<String>,
    pub line: usize,
}

/// Syntactic content of a graph file.
#[derive(Clone, Debug, Default)]
pub struct GraphFile {
    pub description: GraphDescription,
    pub rotations: Vec<RotationDecl>,
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut file = GraphFile::default();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| ParseError { line, message };
            let tokens: Vec<&str> = content.split_whitespace().collect();
            match tokens[0] {
                "dim" => {
                    if tokens.len() != 2 {
                        return Err(err("expected `dim <rational>`".into()));
                    }
                    if file.description.dim.is_some() {
                        return Err(err("duplicate `dim` declaration".into()));
                    }
                    let d =
                        parse_rational(tokens[1]).ok_or_else(|| err(format!("invalid rational `{}`", tokens[1])))?;
                    file.description.dim = Some((d, Some(line)));
                }
                "vertex" => {
                    let external = match tokens.as_slice() {
                        [_, _, "external"] => true,
                        [_, _, "internal"] => false,
                        _ => return Err(err("expected `vertex <name> internal|external`".into())),
                    };
                    file.description.vertices.push(VertexDecl {
                        label: tokens[1].to_string(),
                        external,
                        line: Some(line),
                    });
                }
                "edge" => {
                    let [_, name, u, v, "weight", w] = tokens.as_slice() else {
                        return Err(err("expected `edge <name> <u> <v> weight <rational>`".into()));
                    };
                    let weight = parse_rational(w).ok_or_else(|| err(format!("invalid rational `{w}`")))?;
                    file.description.edges.push(EdgeDecl {
                        name: name.to_string(),
                        u: u.to_string(),
                        v: v.to_string(),
                        weight,
                        line: Some(line),
                    });
                }
                "rotation" => {
                    let rest = content["rotation".len()..].trim();
                    let (vertex, list) = rest
                        .split_once(':')
                        .ok_or_else(|| err("expected `rotation <vertex>: <edges>`".into()))?;
                    let vertex = vertex.trim();
                    if vertex.is_empty() || vertex.contains(char::is_whitespace) {
                        return Err(err("expected `rotation <vertex>: <edges>`".into()));
                    }
                    file.rotations.push(RotationDecl {
                        vertex: vertex.to_string(),
                        edges: list.split_whitespace().map(str::to_string).collect(),
                        line,
                    });
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        Ok(file)
    }

    pub fn graph(&self) -> Result<FeynmanGraph, ValidationError> {
        build_graph(&self.description)
    }

    /// The embedding, if the file has rotation lines.
    pub fn rotation_system(&self, graph: &FeynmanGraph) -> Result<Option<RotationSystem>, RotationError> {
        if self.rotations.is_empty() {
            return Ok(None);
        }
        RotationSystem::from_decls(graph, &self.rotations).map(Some)
    }
}

/// Parses and validates a graph file, returning the embedding if present.
pub fn load_graph(text: &str) -> Result<(FeynmanGraph, Option<RotationSystem>), GraphFileError> {
    let file = GraphFile::parse(text)?;
    let graph = file.graph()?;
    let rot = file.rotation_system(&graph)?;
    Ok((graph, rot))
}

/// Writes a graph (and optionally its embedding) in the file format.
pub fn write_graph(graph: &FeynmanGraph, rot: Option<&RotationSystem>) -> String {
    let mut out = String::new();
    writeln!(out, "dim {}", format_rational(graph.dim())).unwrap();
    for v in graph.vertices() {
        let kind = if v.external { "external" } else { "internal" };
        writeln!(out, "vertex {} {kind}", v.label).unwrap();
    }
    for e in graph.edges() {
        writeln!(
            out,
            "edge {} {} {} weight {}",
            e.name,
            graph.vertices()[e.ends.0].label,
            graph.vertices()[e.ends.1].label,
            format_rational(&e.weight)
        )
        .unwrap();
    }
    if let Some(rot) = rot {
        for (v, vertex) in graph.vertices().iter().enumerate() {
            let names: Vec<&str> = rot.around(v).iter().map(|&e| graph.edges()[e].name.as_str()).collect();
            writeln!(out, "rotation {}: {}", vertex.label, names.join(" ")).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::ratio;

    #[test]
    fn parses_g4() {
        let (g, rot) = load_graph(fixtures::G4).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.internal_vertices().len(), 1);
        assert!(rot.is_some());
    }

    #[test]
    fn reports_line_numbers() {
        let err = GraphFile::parse("dim 4\nvertex 0 external\nedge e1 0\n").unwrap_err();
        assert_eq!(err.line, 3);
        let err = load_graph("dim 4\nvertex 0 external\nvertex 1 external\nedge e1 0 0 weight 1\n").unwrap_err();
        assert_eq!(err.to_string(), "line 4: self-loop: edge `e1` joins `0` to itself");
        let err = load_graph("dim 2\nvertex 0 external\n").unwrap_err();
        assert_eq!(err.to_string(), "line 1: dimension must exceed 2 (got 2)");
    }

    #[test]
    fn decimal_weights_are_exact() {
        let (g, _) = load_graph("dim 4\nvertex 0 external\nvertex x internal\nedge e 0 x weight 0.6\n").unwrap();
        assert_eq!(g.edges()[0].weight, ratio(3, 5));
    }

    #[test]
    fn fixtures_round_trip() {
        for text in fixtures::ALL {
            let (g, rot) = load_graph(text).unwrap();
            let written = write_graph(&g, rot.as_ref());
            let (g2, rot2) = load_graph(&written).unwrap();
            assert_eq!(g, g2);
            assert_eq!(rot, rot2);
            assert_eq!(written, write_graph(&g2, rot2.as_ref()));
        }
    }
}
