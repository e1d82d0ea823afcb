//! Weighted Feynman graphs with distinguished external vertices.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::poly::Poly;
use crate::rational::{format_rational, int, Rational};

/// Labels of the three external vertices of a graphical function.
pub const THREE_POINT_LABELS: [&str; 3] = ["0", "1", "z"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub label: String,
    pub external: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub ends: (usize, usize),
    pub weight: Rational,
}

impl Edge {
    pub fn is_incident(&self, v: usize) -> bool {
        self.ends.0 == v || self.ends.1 == v
    }

    pub fn other_end(&self, v: usize) -> usize {
        if self.ends.0 == v {
            self.ends.1
        } else {
            self.ends.0
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationErrorKind {
    #[error("missing `dim` declaration")]
    MissingDimension,
    #[error("dimension must exceed 2 (got {0})")]
    DimensionTooSmall(String),
    #[error("duplicate vertex label `{0}`")]
    DuplicateLabel(String),
    #[error("duplicate edge name `{0}`")]
    DuplicateEdgeName(String),
    #[error("self-loop: edge `{edge}` joins `{vertex}` to itself")]
    SelfLoop { edge: String, vertex: String },
    #[error("edge `{edge}` has unknown endpoint `{vertex}`")]
    UnknownEndpoint { edge: String, vertex: String },
}

/// A validation failure, with the source line when the graph came from a file.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct ValidationError {
    pub line: Option<usize>,
    pub kind: ValidationErrorKind,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

/// An unvalidated graph description: the syntactic content of a graph file.
#[derive(Clone, Debug, Default)]
pub struct GraphDescription {
    pub dim: Option<(Rational, Option<usize>)>,
    pub vertices: Vec<VertexDecl>,
    pub edges: Vec<EdgeDecl>,
}

#[derive(Clone, Debug)]
pub struct VertexDecl {
    pub label: String,
    pub external: bool,
    pub line: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct EdgeDecl {
    pub name: String,
    pub u: String,
    pub v: String,
    pub weight: Rational,
    pub line: Option<usize>,
}

impl GraphDescription {
    pub fn new(dim: Rational) -> Self {
        GraphDescription {
            dim: Some((dim, None)),
            ..Default::default()
        }
    }

    pub fn external(mut self, label: &str) -> Self {
        self.vertices.push(VertexDecl {
            label: label.to_string(),
            external: true,
            line: None,
        });
        self
    }

    pub fn internal(mut self, label: &str) -> Self {
        self.vertices.push(VertexDecl {
            label: label.to_string(),
            external: false,
            line: None,
        });
        self
    }

    pub fn edge(mut self, name: &str, u: &str, v: &str, weight: Rational) -> Self {
        self.edges.push(EdgeDecl {
            name: name.to_string(),
            u: u.to_string(),
            v: v.to_string(),
            weight,
            line: None,
        });
        self
    }

    pub fn build(&self) -> Result<FeynmanGraph, ValidationError> {
        build_graph(self)
    }
}

/// Validates a description. Vertex and edge ids are dense, in input order.
pub fn build_graph(desc: &GraphDescription) -> Result<FeynmanGraph, ValidationError> {
    let (dim, dim_line) = desc.dim.clone().ok_or(ValidationError {
        line: None,
        kind: ValidationErrorKind::MissingDimension,
    })?;
    if dim <= int(2) {
        return Err(ValidationError {
            line: dim_line,
            kind: ValidationErrorKind::DimensionTooSmall(format_rational(&dim)),
        });
    }
    let mut index = HashMap::new();
    let mut vertices = Vec::with_capacity(desc.vertices.len());
    for decl in &desc.vertices {
        if index.insert(decl.label.clone(), vertices.len()).is_some() {
            return Err(ValidationError {
                line: decl.line,
                kind: ValidationErrorKind::DuplicateLabel(decl.label.clone()),
            });
        }
        vertices.push(Vertex {
            label: decl.label.clone(),
            external: decl.external,
        });
    }
    let mut names = HashMap::new();
    let mut edges = Vec::with_capacity(desc.edges.len());
    for decl in &desc.edges {
        if names.insert(decl.name.clone(), ()).is_some() {
            return Err(ValidationError {
                line: decl.line,
                kind: ValidationErrorKind::DuplicateEdgeName(decl.name.clone()),
            });
        }
        let lookup = |label: &str| {
            index.get(label).copied().ok_or_else(|| ValidationError {
                line: decl.line,
                kind: ValidationErrorKind::UnknownEndpoint {
                    edge: decl.name.clone(),
                    vertex: label.to_string(),
                },
            })
        };
        let u = lookup(&decl.u)?;
        let v = lookup(&decl.v)?;
        if u == v {
            return Err(ValidationError {
                line: decl.line,
                kind: ValidationErrorKind::SelfLoop {
                    edge: decl.name.clone(),
                    vertex: decl.u.clone(),
                },
            });
        }
        edges.push(Edge {
            name: decl.name.clone(),
            ends: (u, v),
            weight: decl.weight.clone(),
        });
    }
    Ok(FeynmanGraph { vertices, edges, dim })
}

/// A validated Feynman graph: multigraph without self-loops, exact edge
/// weights and a rational dimension `d > 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeynmanGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    dim: Rational,
}

impl FeynmanGraph {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dim(&self) -> &Rational {
        &self.dim
    }

    /// `lambda = (d - 2) / 2`.
    pub fn lambda(&self) -> Rational {
        (&self.dim - int(2)) / int(2)
    }

    /// `d / 2`.
    pub fn half_dim(&self) -> Rational {
        &self.dim / int(2)
    }

    pub fn internal_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| !self.vertices[v].external)
            .collect()
    }

    pub fn external_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.vertices[v].external)
            .collect()
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].is_incident(v))
            .collect()
    }

    /// `lambda * nu_e`.
    pub fn scaled_weight(&self, e: usize) -> Rational {
        self.lambda() * &self.edges[e].weight
    }

    /// Ids of the vertices labelled `0`, `1`, `z`, if the external vertices
    /// are exactly those three.
    pub fn three_point_ids(&self) -> Option<[usize; 3]> {
        let ext = self.external_vertices();
        if ext.len() != 3 {
            return None;
        }
        let mut ids = [0; 3];
        for (slot, label) in ids.iter_mut().zip(THREE_POINT_LABELS) {
            let v = self.vertex_by_label(label)?;
            if !self.vertices[v].external {
                return None;
            }
            *slot = v;
        }
        Some(ids)
    }

    /// Same graph with new weights and dimension.
    pub fn with_weights(&self, dim: Rational, weights: Vec<Rational>) -> Result<Self, ValidationError> {
        assert_eq!(weights.len(), self.edges.len());
        if dim <= int(2) {
            return Err(ValidationError {
                line: None,
                kind: ValidationErrorKind::DimensionTooSmall(format_rational(&dim)),
            });
        }
        let edges = self
            .edges
            .iter()
            .zip(weights)
            .map(|(e, weight)| Edge { weight, ..e.clone() })
            .collect();
        Ok(FeynmanGraph {
            vertices: self.vertices.clone(),
            edges,
            dim,
        })
    }

    /// Adds an edge; used to attach the `{0,1}` edge suggested for duality.
    pub fn with_extra_edge(&self, name: &str, u: usize, v: usize, weight: Rational) -> Result<Self, ValidationError> {
        let mut desc = self.description();
        desc.edges.push(EdgeDecl {
            name: name.to_string(),
            u: self.vertices[u].label.clone(),
            v: self.vertices[v].label.clone(),
            weight,
            line: None,
        });
        build_graph(&desc)
    }

    pub fn description(&self) -> GraphDescription {
        GraphDescription {
            dim: Some((self.dim.clone(), None)),
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexDecl {
                    label: v.label.clone(),
                    external: v.external,
                    line: None,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDecl {
                    name: e.name.clone(),
                    u: self.vertices[e.ends.0].label.clone(),
                    v: self.vertices[e.ends.1].label.clone(),
                    weight: e.weight.clone(),
                    line: None,
                })
                .collect(),
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                if e.is_incident(v) {
                    let w = e.other_end(v);
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Text for a polynomial in this graph's variables: edge variables are
    /// `a1..aE` by edge index and distances use the external labels.
    pub fn format_poly(&self, p: &Poly) -> String {
        p.format_with(&|e| format!("a{}", e + 1), &|s| {
            let (i, j) = s.endpoints();
            let (li, lj) = (&self.vertices[i].label, &self.vertices[j].label);
            if li.chars().count() == 1 && lj.chars().count() == 1 {
                format!("s{li}{lj}")
            } else {
                format!("s_{li}_{lj}")
            }
        })
    }

    pub fn laplace_matrix(&self) -> LaplaceMatrix {
        LaplaceMatrix::new(self)
    }

    /// Number of induced subgraphs scanned by [`Self::uv_subgraphs`].
    pub fn uv_subgraph_count(&self) -> u64 {
        let i = self.internal_vertices().len() as u32;
        let x = self.external_vertices().len() as u64;
        let all = 1u64 << i;
        (all - 1 - i as u64) + x * (all - 1)
    }

    /// Every induced subgraph on a vertex set of at least two vertices that
    /// contains at most one external vertex. The count grows as `2^V_int`.
    pub fn uv_subgraphs(&self) -> impl Iterator<Item = Subgraph<'_>> + '_ {
        let internal = self.internal_vertices();
        let external = self.external_vertices();
        let n = internal.len();
        assert!(n < 63, "too many internal vertices to enumerate");
        let choices: Vec<Option<usize>> = std::iter::once(None).chain(external.into_iter().map(Some)).collect();
        choices.into_iter().flat_map(move |ext| {
            let internal = internal.clone();
            (1u64..(1u64 << n)).filter_map(move |mask| {
                let mut set: Vec<usize> = (0..n).filter(|&k| mask >> k & 1 == 1).map(|k| internal[k]).collect();
                if let Some(x) = ext {
                    set.push(x);
                }
                (set.len() >= 2).then(|| self.induced_subgraph(&set))
            })
        })
    }

    /// For each nonempty set `S` of internal vertices, the subgraph whose
    /// edges are all edges incident to `S`.
    pub fn ir_subgraphs(&self) -> impl Iterator<Item = Subgraph<'_>> + '_ {
        let internal = self.internal_vertices();
        let n = internal.len();
        assert!(n < 63, "too many internal vertices to enumerate");
        (1u64..(1u64 << n)).map(move |mask| {
            let set: Vec<usize> = (0..n).filter(|&k| mask >> k & 1 == 1).map(|k| internal[k]).collect();
            self.star_subgraph(&set)
        })
    }

    pub fn induced_subgraph(&self, vertex_set: &[usize]) -> Subgraph<'_> {
        let mut vertices = vertex_set.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        let edges = (0..self.edges.len())
            .filter(|&e| {
                let (u, v) = self.edges[e].ends;
                vertices.binary_search(&u).is_ok() && vertices.binary_search(&v).is_ok()
            })
            .collect();
        Subgraph {
            graph: self,
            vertices,
            edges,
        }
    }

    pub fn star_subgraph(&self, centers: &[usize]) -> Subgraph<'_> {
        let edges: Vec<usize> = (0..self.edges.len())
            .filter(|&e| centers.iter().any(|&v| self.edges[e].is_incident(v)))
            .collect();
        let mut vertices = centers.to_vec();
        for &e in &edges {
            vertices.push(self.edges[e].ends.0);
            vertices.push(self.edges[e].ends.1);
        }
        vertices.sort_unstable();
        vertices.dedup();
        Subgraph {
            graph: self,
            vertices,
            edges,
        }
    }

    /// Subgraph given by an edge set; its vertices are the endpoints.
    pub fn edge_subgraph(&self, edges: &[usize]) -> Subgraph<'_> {
        let mut edges = edges.to_vec();
        edges.sort_unstable();
        edges.dedup();
        let mut vertices: Vec<usize> = edges
            .iter()
            .flat_map(|&e| [self.edges[e].ends.0, self.edges[e].ends.1])
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        Subgraph {
            graph: self,
            vertices,
            edges,
        }
    }
}

/// A subgraph `g` of a graph: a vertex set and an edge set between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph<'g> {
    graph: &'g FeynmanGraph,
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl<'g> Subgraph<'g> {
    pub fn graph(&self) -> &'g FeynmanGraph {
        self.graph
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    /// `V_g`.
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn external_count(&self) -> usize {
        self.vertices
            .iter()
            .filter(|&&v| self.graph.vertices[v].external)
            .count()
    }

    /// Internal vertices of the graph whose incident edges all lie in `g`.
    pub fn g_internal_vertices(&self) -> Vec<usize> {
        self.vertices
            .iter()
            .copied()
            .filter(|&v| !self.graph.vertices[v].external)
            .filter(|&v| {
                self.graph
                    .incident_edges(v)
                    .iter()
                    .all(|e| self.edges.binary_search(e).is_ok())
            })
            .collect()
    }

    /// `nu_g`, the sum of the edge weights.
    pub fn weight(&self) -> Rational {
        self.edges
            .iter()
            .fold(Rational::zero(), |acc, &e| acc + &self.graph.edges[e].weight)
    }

    /// Human-readable descriptor: vertex labels and edge names.
    pub fn describe(&self) -> String {
        let vs: Vec<&str> = self
            .vertices
            .iter()
            .map(|&v| self.graph.vertices[v].label.as_str())
            .collect();
        let es: Vec<&str> = self.edges.iter().map(|&e| self.graph.edges[e].name.as_str()).collect();
        format!("{{{}}} [{}]", vs.join(","), es.join(","))
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.len() <= 1 {
            return true;
        }
        let mut seen = vec![self.vertices[0]];
        let mut stack = vec![self.vertices[0]];
        while let Some(v) = stack.pop() {
            for &e in &self.edges {
                let edge = &self.graph.edges[e];
                if edge.is_incident(v) {
                    let w = edge.other_end(v);
                    if !seen.contains(&w) {
                        seen.push(w);
                        stack.push(w);
                    }
                }
            }
        }
        seen.len() == self.vertices.len()
    }
}

/// The symmetric Laplace matrix with entries in the edge variables. Rows and
/// columns are ordered internal vertices first, then external, each in id order.
#[derive(Clone, Debug)]
pub struct LaplaceMatrix {
    order: Vec<usize>,
    internal_len: usize,
    entries: Vec<Vec<Poly>>,
}

impl LaplaceMatrix {
    fn new(g: &FeynmanGraph) -> Self {
        let n = g.edge_count();
        let mut order = g.internal_vertices();
        let internal_len = order.len();
        order.extend(g.external_vertices());
        let mut position = vec![0; g.vertex_count()];
        for (k, &v) in order.iter().enumerate() {
            position[v] = k;
        }
        let size = order.len();
        let mut entries = vec![vec![Poly::zero(n); size]; size];
        for (e, edge) in g.edges().iter().enumerate() {
            let a = Poly::var(n, e);
            let (pu, pv) = (position[edge.ends.0], position[edge.ends.1]);
            entries[pu][pu] = &entries[pu][pu] + &a;
            entries[pv][pv] = &entries[pv][pv] + &a;
            entries[pu][pv] = &entries[pu][pv] - &a;
            entries[pv][pu] = &entries[pv][pu] - &a;
        }
        LaplaceMatrix {
            order,
            internal_len,
            entries,
        }
    }

    /// Vertex ids in row order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn size(&self) -> usize {
        self.order.len()
    }

    /// Entry `L_{uv}` by vertex ids.
    pub fn entry(&self, u: usize, v: usize) -> &Poly {
        let pu = self.order.iter().position(|&x| x == u).expect("vertex in matrix");
        let pv = self.order.iter().position(|&x| x == v).expect("vertex in matrix");
        &self.entries[pu][pv]
    }

    fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Vec<Vec<Poly>> {
        rows.map(|r| self.entries[r][cols.clone()].to_vec()).collect()
    }

    /// `L^ii`, rows and columns indexed by internal vertices.
    pub fn internal_block(&self) -> Vec<Vec<Poly>> {
        self.block(0..self.internal_len, 0..self.internal_len)
    }

    /// `L^ie`.
    pub fn internal_external_block(&self) -> Vec<Vec<Poly>> {
        self.block(0..self.internal_len, self.internal_len..self.size())
    }

    /// `L^ei`.
    pub fn external_internal_block(&self) -> Vec<Vec<Poly>> {
        self.block(self.internal_len..self.size(), 0..self.internal_len)
    }

    /// `L^ee`.
    pub fn external_block(&self) -> Vec<Vec<Poly>> {
        self.block(self.internal_len..self.size(), self.internal_len..self.size())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size()).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::ratio;

    fn unit() -> Rational {
        crate::rational::int(1)
    }

    #[test]
    fn g4_has_one_internal_vertex() {
        let g = fixtures::g4();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.internal_vertices().len(), 1);
        assert_eq!(g.three_point_ids(), Some([0, 1, 2]));
    }

    #[test]
    fn rejects_self_loops() {
        let err = GraphDescription::new(int(4))
            .external("0")
            .external("1")
            .edge("e1", "0", "0", unit())
            .build()
            .unwrap_err();
        assert!(err.to_string().contains("self-loop"), "{err}");
    }

    #[test]
    fn rejects_dimension_two() {
        let err = GraphDescription::new(int(2)).external("0").build().unwrap_err();
        assert!(err.to_string().contains("dimension must exceed 2"), "{err}");
        assert!(GraphDescription::new(ratio(5, 2)).external("0").build().is_ok());
    }

    #[test]
    fn rejects_duplicates_and_unknown_endpoints() {
        let dup = GraphDescription::new(int(4)).external("0").internal("0").build();
        assert!(matches!(dup.unwrap_err().kind, ValidationErrorKind::DuplicateLabel(_)));
        let unknown = GraphDescription::new(int(4))
            .external("0")
            .edge("e1", "0", "q", unit())
            .build();
        assert!(matches!(
            unknown.unwrap_err().kind,
            ValidationErrorKind::UnknownEndpoint { .. }
        ));
    }

    #[test]
    fn g4_internal_block() {
        let g = fixtures::g4();
        let l = g.laplace_matrix();
        let ii = l.internal_block();
        assert_eq!(ii.len(), 1);
        assert_eq!(ii[0][0].to_string(), "a1+a2+a3");
        assert!(l.is_symmetric());
    }

    #[test]
    fn externals_only_gives_empty_internal_block() {
        let g = GraphDescription::new(int(4))
            .external("0")
            .external("1")
            .edge("e1", "0", "1", unit())
            .build()
            .unwrap();
        assert!(g.laplace_matrix().internal_block().is_empty());
        assert_eq!(g.uv_subgraphs().count(), 0);
        assert_eq!(g.ir_subgraphs().count(), 0);
    }

    #[test]
    fn parallel_edges_sum_in_the_laplacian() {
        let g = GraphDescription::new(int(4))
            .external("0")
            .internal("u")
            .edge("e", "u", "0", unit())
            .edge("f", "u", "0", unit())
            .build()
            .unwrap();
        let l = g.laplace_matrix();
        assert_eq!(l.entry(1, 0).to_string(), "-a1-a2");
        assert_eq!(l.entry(1, 1).to_string(), "a1+a2");
    }

    #[test]
    fn laplacian_columns_sum_to_zero() {
        for g in [fixtures::g4(), fixtures::h7(), fixtures::g7()] {
            let l = g.laplace_matrix();
            for &v in l.order() {
                let mut sum = Poly::zero(g.edge_count());
                for &u in l.order() {
                    sum = &sum + l.entry(u, v);
                }
                assert!(sum.is_zero());
            }
            assert!(l.is_symmetric());
        }
    }

    #[test]
    fn g4_uv_subgraphs_are_the_three_edges() {
        let g = fixtures::g4();
        let subs: Vec<_> = g.uv_subgraphs().collect();
        assert_eq!(subs.len(), 3);
        for s in &subs {
            assert_eq!(s.vertex_count(), 2);
            assert_eq!(s.edges().len(), 1);
        }
        assert_eq!(g.uv_subgraph_count(), 3);
    }

    #[test]
    fn g7_uv_count_matches_binomial_formula() {
        let g = fixtures::g7();
        // (2^4 - 1 - 4) internal sets plus 3 * (2^4 - 1) one-external extensions
        assert_eq!(g.uv_subgraphs().count(), 11 + 45);
        assert_eq!(g.uv_subgraph_count(), 56);
    }

    #[test]
    fn g4_has_a_single_ir_subgraph() {
        let g = fixtures::g4();
        let subs: Vec<_> = g.ir_subgraphs().collect();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].edges(), &[0, 1, 2]);
        assert_eq!(subs[0].g_internal_vertices().len(), 1);
    }

    #[test]
    fn path_ir_subgraphs() {
        let g = GraphDescription::new(int(4))
            .external("0")
            .external("1")
            .internal("a")
            .internal("b")
            .edge("e1", "0", "a", unit())
            .edge("e2", "a", "b", unit())
            .edge("e3", "b", "1", unit())
            .build()
            .unwrap();
        let sizes: Vec<usize> = g.ir_subgraphs().map(|s| s.edges().len()).collect();
        assert_eq!(sizes, vec![2, 2, 3]);
        let internals: Vec<usize> = g.ir_subgraphs().map(|s| s.g_internal_vertices().len()).collect();
        assert_eq!(internals, vec![1, 1, 2]);
    }

    #[test]
    fn ir_subgraphs_are_closed() {
        for g in [fixtures::g4(), fixtures::g7(), fixtures::h7(), fixtures::h4()] {
            for s in g.ir_subgraphs() {
                let gi = s.g_internal_vertices();
                for &e in s.edges() {
                    assert!(gi.iter().any(|&v| g.edges()[e].is_incident(v)));
                }
                for &v in &gi {
                    for e in g.incident_edges(v) {
                        assert!(s.edges().contains(&e));
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let g = fixtures::h7();
        let a: Vec<_> = g.uv_subgraphs().map(|s| s.edges().to_vec()).collect();
        let b: Vec<_> = g.uv_subgraphs().map(|s| s.edges().to_vec()).collect();
        assert_eq!(a, b);
    }
}
