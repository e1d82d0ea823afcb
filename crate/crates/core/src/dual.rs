//! Planar duals of graphs with external vertices 0, 1, z.
//!
//! An embedding is given as a rotation system: the cyclic order of edges
//! around every vertex. Faces are traced by leaving each vertex along the
//! edge that follows the arriving edge in that vertex's rotation.
//!
//! The dual is built from `G_v`, the graph with an apex `v` joined to 0, 1
//! and z inside a face containing all three. Faces of `G_v` become vertices;
//! the face between the apex edges to 1 and z becomes the external vertex 0,
//! the face between those to 0 and z becomes 1, and the face between those
//! to 0 and 1 becomes z. The triangle dual to the apex edges is dropped.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::convergence::{check_convergence, superficial_degree};
use crate::evaluator::{evaluate_graph, gamma, Estimate, EvalError, EvalOptions, ExternalData, SamplerConfig};
use crate::forest::{cremona_transform, dual_forest_polynomial, phi_tilde, spanning_forests, VertexPartition};
use crate::graph::{FeynmanGraph, GraphDescription, ValidationError, THREE_POINT_LABELS};
use crate::io::RotationDecl;
use crate::rational::{format_rational, int, to_f64, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RotationError {
    #[error("line {line}: unknown vertex `{vertex}` in rotation")]
    UnknownVertex { line: usize, vertex: String },
    #[error("line {line}: second rotation for vertex `{vertex}`")]
    DuplicateVertex { line: usize, vertex: String },
    #[error("line {line}: unknown edge `{edge}` in rotation")]
    UnknownEdge { line: usize, edge: String },
    #[error("line {line}: edge `{edge}` is not incident to `{vertex}`")]
    NotIncident { line: usize, edge: String, vertex: String },
    #[error("line {line}: edge `{edge}` listed twice around `{vertex}`")]
    Repeated { line: usize, edge: String, vertex: String },
    #[error("rotation of `{vertex}` misses edge `{edge}`")]
    Missing { vertex: String, edge: String },
}

/// Cyclic order of incident edge ids around every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationSystem {
    rot: Vec<Vec<usize>>,
}

impl RotationSystem {
    /// Vertices of degree at most two may be omitted: their cyclic order is unique.
    pub fn from_decls(g: &FeynmanGraph, decls: &[RotationDecl]) -> Result<Self, RotationError> {
        let mut rot: Vec<Option<Vec<usize>>> = vec![None; g.vertex_count()];
        for decl in decls {
            let v = g
                .vertex_by_label(&decl.vertex)
                .ok_or_else(|| RotationError::UnknownVertex {
                    line: decl.line,
                    vertex: decl.vertex.clone(),
                })?;
            if rot[v].is_some() {
                return Err(RotationError::DuplicateVertex {
                    line: decl.line,
                    vertex: decl.vertex.clone(),
                });
            }
            let mut order = Vec::new();
            for name in &decl.edges {
                let e = g.edge_by_name(name).ok_or_else(|| RotationError::UnknownEdge {
                    line: decl.line,
                    edge: name.clone(),
                })?;
                if !g.edges()[e].is_incident(v) {
                    return Err(RotationError::NotIncident {
                        line: decl.line,
                        edge: name.clone(),
                        vertex: decl.vertex.clone(),
                    });
                }
                if order.contains(&e) {
                    return Err(RotationError::Repeated {
                        line: decl.line,
                        edge: name.clone(),
                        vertex: decl.vertex.clone(),
                    });
                }
                order.push(e);
            }
            rot[v] = Some(order);
        }
        let rot = rot
            .into_iter()
            .enumerate()
            .map(|(v, order)| {
                let incident = g.incident_edges(v);
                match order {
                    Some(order) => match incident.iter().find(|e| !order.contains(e)) {
                        Some(&e) => Err(RotationError::Missing {
                            vertex: g.vertices()[v].label.clone(),
                            edge: g.edges()[e].name.clone(),
                        }),
                        None => Ok(order),
                    },
                    None if incident.len() <= 2 => Ok(incident),
                    None => Err(RotationError::Missing {
                        vertex: g.vertices()[v].label.clone(),
                        edge: g.edges()[incident[0]].name.clone(),
                    }),
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(RotationSystem { rot })
    }

    pub fn around(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.rot.len()
    }
}

#[derive(Debug, Error, Clone)]
pub enum DualError {
    #[error("planar duals need exactly the external vertices 0, 1, z")]
    NotThreePoint,
    #[error("not externally planar with this embedding")]
    NotExternallyPlanar,
    #[error("edge `{0}` is a bridge of the apex graph; its dual would be a self-loop")]
    Bridge(String),
    #[error("M_G = {m} differs from d/2 = {half_dim}; add edge 0–1 with weight {hint}")]
    DegreeMismatch { m: String, half_dim: String, hint: String },
    #[error("duality needs positive weights; edge `{0}` has weight <= 0")]
    NonPositiveWeight(String),
    #[error("graph is not convergent")]
    Divergent,
    #[error("2-forest {forest:?} has no dual partner for split {split}")]
    BijectionFailure { split: String, forest: Vec<String> },
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Evaluation(#[from] EvalError),
}

/// A dart is an edge with a direction: `(edge, side)` leaves `ends.side`.
type Dart = (usize, usize);

fn dart_tail(ends: &[(usize, usize)], (e, side): Dart) -> usize {
    if side == 0 {
        ends[e].0
    } else {
        ends[e].1
    }
}

/// Faces as cyclic dart sequences, in order of their smallest dart.
fn trace_faces(ends: &[(usize, usize)], rot: &[Vec<usize>]) -> Vec<Vec<Dart>> {
    let mut position: HashMap<Dart, usize> = HashMap::new();
    for (v, order) in rot.iter().enumerate() {
        for (k, &e) in order.iter().enumerate() {
            let side = if ends[e].0 == v { 0 } else { 1 };
            position.insert((e, side), k);
        }
    }
    let mut visited = vec![[false; 2]; ends.len()];
    let mut faces = Vec::new();
    for e in 0..ends.len() {
        for side in 0..2 {
            if visited[e][side] {
                continue;
            }
            let mut face = Vec::new();
            let mut dart = (e, side);
            while !visited[dart.0][dart.1] {
                visited[dart.0][dart.1] = true;
                face.push(dart);
                let arrive = (dart.0, 1 - dart.1);
                let w = dart_tail(ends, arrive);
                let order = &rot[w];
                let next = order[(position[&arrive] + 1) % order.len()];
                let next_side = if ends[next].0 == w { 0 } else { 1 };
                dart = (next, next_side);
            }
            faces.push(face);
        }
    }
    faces
}

fn is_connected(vertex_count: usize, ends: &[(usize, usize)]) -> bool {
    if vertex_count == 0 {
        return true;
    }
    let mut adj = vec![Vec::new(); vertex_count];
    for &(u, v) in ends {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; vertex_count];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !std::mem::replace(&mut seen[w], true) {
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn fresh_name(taken: impl Fn(&str) -> bool, base: String) -> String {
    let mut name = base;
    while taken(&name) {
        name.push('\'');
    }
    name
}

/// `G` with the apex joined to 0, 1, z, and an embedding extending the input.
#[derive(Clone, Debug)]
pub struct ApexAugmentation {
    pub graph: FeynmanGraph,
    pub rotation: RotationSystem,
    pub apex: usize,
    /// Apex edges to 0, 1, z in that order.
    pub apex_edges: [usize; 3],
    pub faces: Vec<Vec<Dart>>,
}

impl ApexAugmentation {
    /// `V - E + F` of the embedded apex graph.
    pub fn euler_characteristic(&self) -> i64 {
        self.graph.vertex_count() as i64 - self.graph.edge_count() as i64 + self.faces.len() as i64
    }
}

/// Inserts the apex edges into corners of 0, 1 and z and keeps the first
/// choice whose traced faces satisfy Euler's formula.
pub fn augment_apex(g: &FeynmanGraph, rot: &RotationSystem) -> Result<ApexAugmentation, DualError> {
    let ids = g.three_point_ids().ok_or(DualError::NotThreePoint)?;
    if g.external_vertices().len() != 3 {
        return Err(DualError::NotThreePoint);
    }
    let apex_label = fresh_name(|l| g.vertex_by_label(l).is_some(), "v".into());
    let mut desc: GraphDescription = g.description().internal(&apex_label);
    let mut names = Vec::new();
    for label in THREE_POINT_LABELS {
        let name = fresh_name(
            |n| g.edge_by_name(n).is_some() || names.iter().any(|m: &String| m == n),
            format!("{apex_label}{label}"),
        );
        desc = desc.edge(&name, label, &apex_label, int(0));
        names.push(name);
    }
    let gv = desc.build()?;
    let apex = g.vertex_count();
    let base = g.edge_count();
    let apex_edges = [base, base + 1, base + 2];
    let ends: Vec<(usize, usize)> = gv.edges().iter().map(|e| e.ends).collect();
    if !is_connected(gv.vertex_count(), &ends) {
        return Err(DualError::NotExternallyPlanar);
    }

    let corners: Vec<usize> = ids.iter().map(|&w| rot.around(w).len().max(1)).collect();
    for c0 in 0..corners[0] {
        for c1 in 0..corners[1] {
            for cz in 0..corners[2] {
                for apex_order in [[0, 1, 2], [0, 2, 1]] {
                    let mut r: Vec<Vec<usize>> = (0..g.vertex_count()).map(|v| rot.around(v).to_vec()).collect();
                    for (k, (&w, c)) in ids.iter().zip([c0, c1, cz]).enumerate() {
                        let at = if r[w].is_empty() { 0 } else { c + 1 };
                        r[w].insert(at, apex_edges[k]);
                    }
                    r.push(apex_order.iter().map(|&k| apex_edges[k]).collect());
                    let faces = trace_faces(&ends, &r);
                    let euler = gv.vertex_count() as i64 - gv.edge_count() as i64 + faces.len() as i64;
                    if euler == 2 {
                        return Ok(ApexAugmentation {
                            graph: gv,
                            rotation: RotationSystem { rot: r },
                            apex,
                            apex_edges,
                            faces,
                        });
                    }
                }
            }
        }
    }
    Err(DualError::NotExternallyPlanar)
}

/// A planar dual together with the data it was built from. Edge `k` of the
/// dual is the dual of edge `k` of the original graph.
#[derive(Clone, Debug)]
pub struct DualResult {
    pub dual: FeynmanGraph,
    pub rotation: RotationSystem,
    pub augmented: ApexAugmentation,
    /// Faces of `G_v` that become the dual's 0, 1 and z.
    pub external_faces: [usize; 3],
    /// Dual vertex of every face of `G_v` (`None` for the face dual to the apex).
    pub face_vertex: Vec<Option<usize>>,
}

impl DualResult {
    /// `(e, e*)` edge name pairs.
    pub fn edge_pairs(&self, g: &FeynmanGraph) -> Vec<(String, String)> {
        g.edges()
            .iter()
            .zip(self.dual.edges())
            .map(|(e, d)| (e.name.clone(), d.name.clone()))
            .collect()
    }
}

fn dual_edge_name(name: &str) -> String {
    match name.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{name}*"),
    }
}

pub fn planar_dual(g: &FeynmanGraph, rot: &RotationSystem) -> Result<DualResult, DualError> {
    let aug = augment_apex(g, rot)?;
    let gv = &aug.graph;
    let mut face_of: HashMap<Dart, usize> = HashMap::new();
    for (f, face) in aug.faces.iter().enumerate() {
        for &d in face {
            face_of.insert(d, f);
        }
    }
    let side_at = |e: usize, v: usize| if gv.edges()[e].ends.0 == v { 0 } else { 1 };

    // the corner at the apex following apex edge `a` lies in the face of the
    // dart leaving the apex along the next apex edge
    let apex_rot = aug.rotation.around(aug.apex);
    let mut external_faces = [usize::MAX; 3];
    for k in 0..3 {
        let a = apex_rot[k];
        let b = apex_rot[(k + 1) % 3];
        let face = face_of[&(b, side_at(b, aug.apex))];
        let missing = (0..3)
            .find(|&m| aug.apex_edges[m] != a && aug.apex_edges[m] != b)
            .expect("three apex edges");
        external_faces[missing] = face;
    }
    if external_faces[0] == external_faces[1]
        || external_faces[0] == external_faces[2]
        || external_faces[1] == external_faces[2]
    {
        return Err(DualError::NotExternallyPlanar);
    }

    // the remaining faces become internal vertices; a face touching the apex
    // only through the triangle does not exist since every apex corner is external
    let mut face_vertex: Vec<Option<usize>> = vec![None; aug.faces.len()];
    for (k, &f) in external_faces.iter().enumerate() {
        face_vertex[f] = Some(k);
    }
    let mut desc = GraphDescription::new(g.dim().clone());
    for label in THREE_POINT_LABELS {
        desc = desc.external(label);
    }
    let mut next = 3;
    for (f, slot) in face_vertex.iter_mut().enumerate() {
        if slot.is_none() {
            *slot = Some(next);
            next += 1;
            desc = desc.internal(&format!("f{}", f + 1));
        }
    }
    let labels: Vec<String> = THREE_POINT_LABELS
        .iter()
        .map(|s| s.to_string())
        .chain(
            (0..aug.faces.len())
                .filter(|f| !external_faces.contains(f))
                .map(|f| format!("f{}", f + 1)),
        )
        .collect();

    let lambda = g.lambda();
    let half = g.half_dim();
    for (e, edge) in g.edges().iter().enumerate() {
        let left = face_of[&(e, 0)];
        let right = face_of[&(e, 1)];
        if left == right {
            return Err(DualError::Bridge(edge.name.clone()));
        }
        let weight = (&half - &lambda * &edge.weight) / &lambda;
        let (u, v) = (face_vertex[left].unwrap(), face_vertex[right].unwrap());
        desc = desc.edge(&dual_edge_name(&edge.name), &labels[u], &labels[v], weight);
    }
    let dual = desc.build()?;

    // rotation around a dual vertex: edges in the order of its face boundary
    let mut rot_dual = vec![Vec::new(); dual.vertex_count()];
    for (f, face) in aug.faces.iter().enumerate() {
        let v = face_vertex[f].unwrap();
        rot_dual[v] = face.iter().map(|&(e, _)| e).filter(|&e| e < g.edge_count()).collect();
    }
    Ok(DualResult {
        dual,
        rotation: RotationSystem { rot: rot_dual },
        augmented: aug,
        external_faces,
        face_vertex,
    })
}

/// Whether two graphs agree up to renaming of internal vertices and edges,
/// with external labels, dimension and weights fixed.
pub fn labeled_isomorphic(a: &FeynmanGraph, b: &FeynmanGraph) -> bool {
    if a.dim() != b.dim() || a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let (ea, eb) = (a.external_vertices(), b.external_vertices());
    if ea.len() != eb.len() {
        return false;
    }
    let mut map = vec![usize::MAX; a.vertex_count()];
    for &v in &ea {
        match b.vertex_by_label(&a.vertices()[v].label) {
            Some(w) if b.vertices()[w].external => map[v] = w,
            _ => return false,
        }
    }
    let target = edge_multiset(b, &(0..b.vertex_count()).collect::<Vec<_>>());
    let degree = |g: &FeynmanGraph, v: usize| g.incident_edges(v).len();
    let ia = a.internal_vertices();
    let ib = b.internal_vertices();
    let mut used = vec![false; b.vertex_count()];
    fn search(
        k: usize,
        ia: &[usize],
        ib: &[usize],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ok: &dyn Fn(usize, usize) -> bool,
        done: &dyn Fn(&[usize]) -> bool,
    ) -> bool {
        if k == ia.len() {
            return done(map);
        }
        for &w in ib {
            if used[w] || !ok(ia[k], w) {
                continue;
            }
            used[w] = true;
            map[ia[k]] = w;
            if search(k + 1, ia, ib, map, used, ok, done) {
                return true;
            }
            used[w] = false;
        }
        map[ia[k]] = usize::MAX;
        false
    }
    let ok = |v: usize, w: usize| degree(a, v) == degree(b, w);
    let done = |m: &[usize]| edge_multiset(a, m) == target;
    search(0, &ia, &ib, &mut map, &mut used, &ok, &done)
}

fn edge_multiset(g: &FeynmanGraph, map: &[usize]) -> Vec<(usize, usize, Rational)> {
    let mut edges: Vec<_> = g
        .edges()
        .iter()
        .map(|e| {
            let (u, v) = (map[e.ends.0], map[e.ends.1]);
            (u.min(v), u.max(v), e.weight.clone())
        })
        .collect();
    edges.sort();
    edges
}

/// The dual of the dual (with the induced embedding) is the original graph.
pub fn involution_check(g: &FeynmanGraph, rot: &RotationSystem) -> Result<bool, DualError> {
    let first = planar_dual(g, rot)?;
    let second = planar_dual(&first.dual, &first.rotation)?;
    Ok(labeled_isomorphic(&second.dual, g))
}

/// A split `{i, j}, {k}` of the three external vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Split {
    pub joined: [&'static str; 2],
    pub alone: &'static str,
}

pub const SPLITS: [Split; 3] = [
    Split {
        joined: ["0", "1"],
        alone: "z",
    },
    Split {
        joined: ["0", "z"],
        alone: "1",
    },
    Split {
        joined: ["1", "z"],
        alone: "0",
    },
];

impl Split {
    pub fn name(&self) -> String {
        format!("{}{},{}", self.joined[0], self.joined[1], self.alone)
    }

    fn partition(&self, g: &FeynmanGraph) -> VertexPartition {
        let id = |l: &str| g.vertex_by_label(l).expect("three-point graph");
        VertexPartition::new(
            g,
            vec![vec![id(self.joined[0]), id(self.joined[1])], vec![id(self.alone)]],
        )
        .expect("distinct labels")
    }
}

/// A forest of `G` and the dual forest it maps to, as edge indices.
pub type ForestPair = (Vec<usize>, Vec<usize>);

/// Pairs every 2-forest `F` of `G` for the split with `{e* : e not in F}`
/// and checks that this is a bijection onto the 2-forests of the dual.
pub fn two_forest_bijection(
    g: &FeynmanGraph,
    rot: &RotationSystem,
    split: Split,
) -> Result<Vec<ForestPair>, DualError> {
    let d = planar_dual(g, rot)?;
    forest_pairing(g, &d.dual, split)
}

fn forest_pairing(g: &FeynmanGraph, dual: &FeynmanGraph, split: Split) -> Result<Vec<ForestPair>, DualError> {
    let ours = spanning_forests(g, &split.partition(g)).forests;
    let theirs = spanning_forests(dual, &split.partition(dual)).forests;
    let mut pairs = Vec::with_capacity(ours.len());
    for f in ours {
        let image: Vec<usize> = (0..g.edge_count()).filter(|e| !f.contains(e)).collect();
        if theirs.binary_search(&image).is_err() {
            return Err(DualError::BijectionFailure {
                split: split.name(),
                forest: f.iter().map(|&e| g.edges()[e].name.clone()).collect(),
            });
        }
        pairs.push((f, image));
    }
    // complementation is injective, so equal counts make it onto
    if pairs.len() != theirs.len() {
        return Err(DualError::BijectionFailure {
            split: split.name(),
            forest: Vec::new(),
        });
    }
    Ok(pairs)
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitCheck {
    pub split: String,
    pub identity_holds: bool,
    pub forests: usize,
    pub dual_forests: usize,
    pub bijection: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactLayers {
    pub dual_superficial_degree: String,
    pub dual_degree_is_half_dim: bool,
    pub weights_sum_to_half_dim: bool,
    pub dual_weights_positive: bool,
    pub splits: Vec<SplitCheck>,
    pub phi_identity: bool,
}

impl ExactLayers {
    pub fn all_hold(&self) -> bool {
        self.dual_degree_is_half_dim
            && self.weights_sum_to_half_dim
            && self.dual_weights_positive
            && self.phi_identity
            && self.splits.iter().all(|s| s.identity_holds && s.bijection)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericLayer {
    pub estimate: Estimate,
    pub dual_estimate: Estimate,
    /// `prod_e Gamma(lambda nu_e) / Gamma(lambda nu_e*)`.
    pub gamma_ratio: f64,
    pub difference: f64,
    pub combined_stderr: f64,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub exact: ExactLayers,
    pub numeric: Option<NumericLayer>,
}

/// Positive weights, `M_G = d/2` and convergence.
pub fn duality_preconditions(g: &FeynmanGraph) -> Result<(), DualError> {
    if let Some(e) = g.edges().iter().find(|e| e.weight <= int(0)) {
        return Err(DualError::NonPositiveWeight(e.name.clone()));
    }
    let m = superficial_degree(g);
    let half = g.half_dim();
    if m != half {
        let hint = (&half - &m) / g.lambda();
        return Err(DualError::DegreeMismatch {
            m: format_rational(&m),
            half_dim: format_rational(&half),
            hint: format_rational(&hint),
        });
    }
    if !check_convergence(g).is_convergent() {
        return Err(DualError::Divergent);
    }
    Ok(())
}

/// Degree, weight and polynomial identities between `G` and its dual.
pub fn exact_layers(g: &FeynmanGraph, d: &DualResult) -> Result<ExactLayers, DualError> {
    let dual = &d.dual;
    let m_dual = superficial_degree(dual);
    let half = g.half_dim();
    let lambda = g.lambda();
    let weights_sum_to_half_dim = (0..g.edge_count()).all(|e| g.scaled_weight(e) + dual.scaled_weight(e) == half);
    let dual_weights_positive = dual.edges().iter().all(|e| e.weight > int(0));
    let _ = lambda;

    let mut splits = Vec::new();
    for split in SPLITS {
        let ours = dual_forest_polynomial(g, &split.partition(g));
        let theirs = dual_forest_polynomial(dual, &split.partition(dual));
        let degree = theirs.homogeneous_degree().ok().flatten().unwrap_or(0);
        let identity_holds = cremona_transform(&theirs, degree).map(|p| p == ours).unwrap_or(false);
        let pairing = forest_pairing(g, dual, split);
        splits.push(SplitCheck {
            split: split.name(),
            identity_holds,
            forests: spanning_forests(g, &split.partition(g)).forests.len(),
            dual_forests: spanning_forests(dual, &split.partition(dual)).forests.len(),
            bijection: pairing.is_ok(),
        });
    }

    // distance symbols of the dual refer to its own vertex ids
    let relabel: BTreeMap<usize, usize> = dual
        .external_vertices()
        .into_iter()
        .map(|v| {
            (
                v,
                g.vertex_by_label(&dual.vertices()[v].label)
                    .expect("three-point labels"),
            )
        })
        .collect();
    let phi_dual = phi_tilde(dual);
    let degree = phi_dual.homogeneous_degree().ok().flatten().unwrap_or(0);
    let phi_identity = cremona_transform(&phi_dual, degree)
        .map(|p| {
            p.map_distance_symbols(|s| {
                let (a, b) = s.endpoints();
                crate::poly::DistanceSymbol::new(relabel[&a], relabel[&b])
            }) == phi_tilde(g)
        })
        .unwrap_or(false);

    Ok(ExactLayers {
        dual_superficial_degree: format_rational(&m_dual),
        dual_degree_is_half_dim: m_dual == half,
        weights_sum_to_half_dim,
        dual_weights_positive,
        splits,
        phi_identity,
    })
}

/// `prod_e Gamma(lambda nu_e) / Gamma(lambda nu_e*)`.
pub fn gamma_ratio(g: &FeynmanGraph, dual: &FeynmanGraph) -> f64 {
    (0..g.edge_count())
        .map(|e| gamma(to_f64(&g.scaled_weight(e))) / gamma(to_f64(&dual.scaled_weight(e))))
        .product()
}

/// Exact layers, and with a sampler configuration also the numeric
/// comparison `f_{G*} = f_G * prod Gamma(lambda nu_e) / Gamma(lambda nu_e*)`.
pub fn verify_duality_theorem(
    g: &FeynmanGraph,
    rot: &RotationSystem,
    z: Complex64,
    cfg: Option<&SamplerConfig>,
) -> Result<DualityReport, DualError> {
    duality_preconditions(g)?;
    let d = planar_dual(g, rot)?;
    let exact = exact_layers(g, &d)?;
    let numeric = match cfg {
        None => None,
        Some(cfg) => {
            let x = ExternalData::z(z)?;
            let opts = EvalOptions::default();
            let estimate = evaluate_graph(g, &x, cfg, &opts)?;
            let dual_cfg = SamplerConfig {
                seed: cfg.seed.wrapping_add(1),
                ..cfg.clone()
            };
            let dual_estimate = evaluate_graph(&d.dual, &x, &dual_cfg, &opts)?;
            let ratio = gamma_ratio(g, &d.dual);
            let difference = dual_estimate.value - ratio * estimate.value;
            let combined_stderr = dual_estimate.stderr.hypot(ratio * estimate.stderr);
            Some(NumericLayer {
                agrees: difference.abs() <= 3.0 * combined_stderr,
                estimate,
                dual_estimate,
                gamma_ratio: ratio,
                difference,
                combined_stderr,
            })
        }
    };
    Ok(DualityReport { exact, numeric })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::io::load_graph;

    #[test]
    fn g4_apex_graph_is_planar() {
        let (g, rot) = fixtures::embedded(fixtures::G4);
        let aug = augment_apex(&g, &rot).unwrap();
        assert_eq!(aug.graph.vertex_count(), 5);
        assert_eq!(aug.graph.edge_count(), 6);
        assert_eq!(aug.faces.len(), 3);
        assert_eq!(aug.euler_characteristic(), 2);
    }

    #[test]
    fn h7_apex_graph_is_planar() {
        let (g, rot) = fixtures::embedded(fixtures::H7);
        let aug = augment_apex(&g, &rot).unwrap();
        assert_eq!(aug.euler_characteristic(), 2);
        assert_eq!(aug.faces.len(), 7);
    }

    #[test]
    fn g4_dual_is_a_triangle() {
        let (g, rot) = fixtures::embedded(fixtures::G4);
        let d = planar_dual(&g, &rot).unwrap();
        assert_eq!(d.dual.edge_count(), 3);
        assert!(d.dual.internal_vertices().is_empty());
        assert!(involution_check(&g, &rot).unwrap());
    }

    #[test]
    fn h4_is_self_dual() {
        let (g, rot) = fixtures::embedded(fixtures::H4);
        let d = planar_dual(&g, &rot).unwrap();
        assert!(labeled_isomorphic(&d.dual, &g));
        assert!(involution_check(&g, &rot).unwrap());
        for (e, edge) in d.dual.edges().iter().enumerate() {
            assert_eq!(edge.weight, int(1), "{e}");
        }
    }

    #[test]
    fn h7_dual_has_unit_weights_and_involutes() {
        let (g, rot) = fixtures::embedded(fixtures::H7);
        let d = planar_dual(&g, &rot).unwrap();
        assert_eq!(d.dual.edge_count(), 10);
        assert!(d.dual.edges().iter().all(|e| e.weight == int(1)));
        assert!(involution_check(&g, &rot).unwrap());
        assert_eq!(d.edge_pairs(&g)[0], ("e1".to_string(), "e1*".to_string()));
    }

    #[test]
    fn exact_layers_hold_on_h4_and_h7() {
        for text in [fixtures::H4, fixtures::H7] {
            let (g, rot) = fixtures::embedded(text);
            let report = verify_duality_theorem(&g, &rot, Complex64::i(), None).unwrap();
            assert!(report.exact.all_hold(), "{:?}", report.exact);
        }
    }

    #[test]
    fn g4_needs_an_extra_edge() {
        let (g, rot) = fixtures::embedded(fixtures::G4);
        let err = verify_duality_theorem(&g, &rot, Complex64::i(), None).unwrap_err();
        assert_eq!(
            err.to_string(),
            "M_G = 1 differs from d/2 = 2; add edge 0–1 with weight 1"
        );
    }

    #[test]
    fn z_inside_an_inner_face_is_rejected() {
        // 0 - a - 1 - b - 0 cycle with z attached to a from inside, plus a chord
        // a - b drawn on the other side: z sits in a face without 0 and 1
        let text = "dim 4
vertex 0 external
vertex 1 external
vertex z external
vertex a internal
vertex b internal
edge p 0 a weight 1
edge q a 1 weight 1
edge r 1 b weight 1
edge s b 0 weight 1
edge t a b weight 1
edge u z a weight 1
rotation 0: s p
rotation 1: q r
rotation a: p t u q
rotation b: r t s
";
        let (g, rot) = load_graph(text).unwrap();
        let err = augment_apex(&g, &rot.unwrap()).unwrap_err();
        assert!(matches!(err, DualError::NotExternallyPlanar));
    }

    #[test]
    fn rotation_errors() {
        let base = "dim 4\nvertex 0 external\nvertex 1 external\nvertex z external\nvertex x internal\n\
                    edge e1 0 x weight 1\nedge e2 1 x weight 1\nedge e3 z x weight 1\n";
        let missing = format!("{base}rotation x: e1 e2\n");
        assert!(matches!(
            load_graph(&missing),
            Err(crate::io::GraphFileError::Rotation(RotationError::Missing { .. }))
        ));
        let foreign = format!("{base}rotation 0: e2\n");
        let err = load_graph(&foreign).unwrap_err();
        assert_eq!(err.to_string(), "line 9: edge `e2` is not incident to `0`");
        let unlisted = format!("{base}rotation 0: e1\n");
        assert!(matches!(
            load_graph(&unlisted),
            Err(crate::io::GraphFileError::Rotation(RotationError::Missing { .. }))
        ));
    }

    #[test]
    fn h7_forest_bijection() {
        let (g, rot) = fixtures::embedded(fixtures::H7);
        for split in SPLITS {
            let pairs = two_forest_bijection(&g, &rot, split).unwrap();
            assert!(!pairs.is_empty());
        }
    }

    #[test]
    fn isomorphism_distinguishes_weights() {
        let g = fixtures::g4();
        let other = g.with_weights(int(4), vec![int(2), int(1), int(1)]).unwrap();
        assert!(!labeled_isomorphic(&g, &other));
        assert!(labeled_isomorphic(&g, &g));
    }
}
