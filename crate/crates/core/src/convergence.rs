//! Power counting: ultraviolet and infrared convergence, superficial degree.

use serde::Serialize;

use crate::graph::{FeynmanGraph, Subgraph};
use crate::rational::{int, serialize_text, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Convergent,
    UvDivergent,
    IrDivergent,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    #[serde(rename = "UV")]
    Uv,
    #[serde(rename = "IR")]
    Ir,
}

/// One power-counting inequality. UV: `lhs < rhs`; IR: `lhs > rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub side: Side,
    pub subgraph: String,
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    #[serde(serialize_with = "serialize_text")]
    pub lhs: Rational,
    #[serde(serialize_with = "serialize_text")]
    pub rhs: Rational,
    /// `lhs - rhs`.
    #[serde(serialize_with = "serialize_text")]
    pub margin: Rational,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergenceReport {
    pub verdict: Verdict,
    #[serde(serialize_with = "serialize_text")]
    pub superficial_degree: Rational,
    pub uv_count: usize,
    pub ir_count: usize,
    pub conditions: Vec<Condition>,
}

impl ConvergenceReport {
    pub fn is_convergent(&self) -> bool {
        self.verdict == Verdict::Convergent
    }

    pub fn failures(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.pass)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    /// Skip disconnected induced subgraphs in the UV scan.
    pub connected_uv_only: bool,
}

fn condition(side: Side, g: &Subgraph<'_>, lhs: Rational, rhs: Rational) -> Condition {
    let margin = &lhs - &rhs;
    let pass = match side {
        Side::Uv => margin < int(0),
        Side::Ir => margin > int(0),
    };
    let graph = g.graph();
    Condition {
        side,
        subgraph: g.describe(),
        vertices: g
            .vertices()
            .iter()
            .map(|&v| graph.vertices()[v].label.clone())
            .collect(),
        edges: g.edges().iter().map(|&e| graph.edges()[e].name.clone()).collect(),
        lhs,
        rhs,
        margin,
        pass,
    }
}

pub fn check_convergence(g: &FeynmanGraph) -> ConvergenceReport {
    check_convergence_with(g, CheckOptions::default())
}

/// Checks `lambda nu_g < (d/2)(V_g - 1)` on every induced subgraph with at
/// most one external vertex and `lambda nu_g > (d/2) V_g^int` on every star
/// of a nonempty set of internal vertices.
pub fn check_convergence_with(g: &FeynmanGraph, options: CheckOptions) -> ConvergenceReport {
    let lambda = g.lambda();
    let half = g.half_dim();
    let mut conditions = Vec::new();
    for sub in g.uv_subgraphs() {
        if options.connected_uv_only && !sub.is_connected() {
            continue;
        }
        let rhs = &half * int(sub.vertex_count() as i64 - 1);
        conditions.push(condition(Side::Uv, &sub, &lambda * sub.weight(), rhs));
    }
    let uv_count = conditions.len();
    for sub in g.ir_subgraphs() {
        let rhs = &half * int(sub.g_internal_vertices().len() as i64);
        conditions.push(condition(Side::Ir, &sub, &lambda * sub.weight(), rhs));
    }
    let ir_count = conditions.len() - uv_count;
    let uv_ok = conditions[..uv_count].iter().all(|c| c.pass);
    let ir_ok = conditions[uv_count..].iter().all(|c| c.pass);
    let verdict = match (uv_ok, ir_ok) {
        (true, true) => Verdict::Convergent,
        (false, true) => Verdict::UvDivergent,
        (true, false) => Verdict::IrDivergent,
        (false, false) => Verdict::Both,
    };
    ConvergenceReport {
        verdict,
        superficial_degree: superficial_degree(g),
        uv_count,
        ir_count,
        conditions,
    }
}

/// `M_G = lambda nu_G - (d/2) V^int`.
pub fn superficial_degree(g: &FeynmanGraph) -> Rational {
    let total: Rational = (0..g.edge_count()).map(|e| g.scaled_weight(e)).sum();
    total - g.half_dim() * int(g.internal_vertices().len() as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum MBound {
    NotApplicable {
        reason: String,
    },
    Applies {
        #[serde(serialize_with = "serialize_text")]
        lower: Rational,
        #[serde(serialize_with = "serialize_text")]
        upper: Rational,
        #[serde(serialize_with = "serialize_text")]
        superficial_degree: Rational,
        holds: bool,
    },
}

/// `0 < M_G < lambda * min_v sum_{w != v} nu_w` over external vertices, with
/// `nu_w` the weight at `w`. Only stated for graphs without edges between
/// external vertices.
pub fn m_bound_check(g: &FeynmanGraph) -> MBound {
    let external = g.external_vertices();
    if let Some(e) = g
        .edges()
        .iter()
        .find(|e| g.vertices()[e.ends.0].external && g.vertices()[e.ends.1].external)
    {
        return MBound::NotApplicable {
            reason: format!("edge `{}` joins two external vertices", e.name),
        };
    }
    if external.len() < 2 {
        return MBound::NotApplicable {
            reason: "fewer than two external vertices".into(),
        };
    }
    let at = |w: usize| -> Rational {
        g.incident_edges(w)
            .into_iter()
            .map(|e| g.edges()[e].weight.clone())
            .sum()
    };
    let weights: Vec<Rational> = external.iter().map(|&w| at(w)).collect();
    let total: Rational = weights.iter().sum();
    let upper = weights
        .iter()
        .map(|w| g.lambda() * (&total - w))
        .min()
        .expect("at least two external vertices");
    let m = superficial_degree(g);
    let holds = m > int(0) && m < upper;
    MBound::Applies {
        lower: int(0),
        upper,
        superficial_degree: m,
        holds,
    }
}
