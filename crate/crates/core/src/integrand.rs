//! Projective parametric integrands: the dual representation (forest
//! polynomials `Phi~`, `Psi~` with optional derivatives) and the direct one
//! (their Cremona transforms `Phi`, `Psi`).

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::convergence::{check_convergence, superficial_degree, ConvergenceReport};
use crate::forest::{cremona_transform, phi_tilde, psi_tilde};
use crate::graph::{FeynmanGraph, ValidationError};
use crate::poly::{DistanceSymbol, Monomial, Poly, PolyError};
use crate::rational::{floor, format_rational, int, to_f64, Rational};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    #[default]
    Dual,
    Direct,
}

impl std::str::FromStr for Representation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dual" => Ok(Representation::Dual),
            "direct" => Ok(Representation::Direct),
            other => Err(format!("unknown representation `{other}` (expected dual or direct)")),
        }
    }
}

#[derive(Debug, Error, Clone)]
pub enum IntegrandError {
    #[error("graph is divergent: {} condition(s) fail", .0.failures().count())]
    Divergent(Box<ConvergenceReport>),
    #[error("edge `{edge}`: n + lambda nu = {value} must be positive")]
    InvalidN { edge: String, value: String },
    #[error("expected {expected} derivative orders, got {got}")]
    NLength { expected: usize, got: usize },
    #[error("edge `{0}` has non-positive weight; use the dual representation")]
    NonPositiveWeight(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("graph polynomials vanish identically")]
    Degenerate,
    #[error("superficial degree {0} is a pole of Gamma; no parametric representation")]
    GammaPole(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Default derivative orders: `0` where `lambda nu_e > 0`, otherwise the
/// smallest `n_e` with `n_e + lambda nu_e > 0`.
pub fn choose_n(g: &FeynmanGraph) -> Vec<u32> {
    (0..g.edge_count())
        .map(|e| {
            let w = g.scaled_weight(e);
            if w > int(0) {
                0
            } else {
                let n: i64 = (floor(&-w) + 1u32).try_into().expect("derivative order fits");
                n as u32
            }
        })
        .collect()
}

pub fn validate_n(g: &FeynmanGraph, n: &[u32]) -> Result<(), IntegrandError> {
    if n.len() != g.edge_count() {
        return Err(IntegrandError::NLength {
            expected: g.edge_count(),
            got: n.len(),
        });
    }
    for (e, &k) in n.iter().enumerate() {
        let value = int(k as i64) + g.scaled_weight(e);
        if value <= int(0) {
            return Err(IntegrandError::InvalidN {
                edge: g.edges()[e].name.clone(),
                value: format_rational(&value),
            });
        }
    }
    Ok(())
}

/// [`choose_n`] with named overrides such as `("e1", 1)`.
pub fn n_with_overrides(g: &FeynmanGraph, overrides: &[(String, u32)]) -> Result<Vec<u32>, IntegrandError> {
    let mut n = choose_n(g);
    for (name, k) in overrides {
        let e = g
            .edge_by_name(name)
            .ok_or_else(|| IntegrandError::UnknownEdge(name.clone()))?;
        n[e] = *k;
    }
    validate_n(g, &n)?;
    Ok(n)
}

/// `sign * Gamma(M) / prod Gamma(g_e) * integral of prod a_e^{mu_e} N / (Phi^A Psi^B)`
/// over projective space.
#[derive(Clone, Debug)]
pub struct ParametricIntegrand {
    pub graph: FeynmanGraph,
    pub representation: Representation,
    pub n: Vec<u32>,
    pub mu: Vec<Rational>,
    pub phi: Poly,
    pub psi: Poly,
    pub phi_exponent: Rational,
    pub psi_exponent: Rational,
    pub numerator: Poly,
    /// `(-1)^{sum n}` is negative.
    pub negative: bool,
    pub superficial_degree: Rational,
    pub gamma_denominator: Vec<Rational>,
}

fn require_gamma_finite(m: &Rational) -> Result<(), IntegrandError> {
    if m.is_integer() && *m <= int(0) {
        Err(IntegrandError::GammaPole(format_rational(m)))
    } else {
        Ok(())
    }
}

fn require_convergent(g: &FeynmanGraph) -> Result<(), IntegrandError> {
    let report = check_convergence(g);
    if report.is_convergent() {
        Ok(())
    } else {
        Err(IntegrandError::Divergent(Box::new(report)))
    }
}

/// Applies `prod_e d^{n_e}/d a_e^{n_e}` to `1/(Phi~^M Psi~^{d/2-M})`, keeping one
/// common denominator whose exponents rise by one per derivative.
pub fn build_dual_integrand(g: &FeynmanGraph, n: &[u32]) -> Result<ParametricIntegrand, IntegrandError> {
    require_convergent(g)?;
    validate_n(g, n)?;
    let phi = phi_tilde(g);
    let psi = psi_tilde(g);
    if phi.is_zero() || psi.is_zero() {
        return Err(IntegrandError::Degenerate);
    }
    let m = superficial_degree(g);
    require_gamma_finite(&m)?;
    let mut a = m.clone();
    let mut b = g.half_dim() - &m;
    let mut numerator = Poly::one(g.edge_count());
    let phi_psi = &phi * &psi;
    for (e, &k) in n.iter().enumerate() {
        let (dphi, dpsi) = (phi.partial_derivative(e), psi.partial_derivative(e));
        for _ in 0..k {
            let lead = &numerator.partial_derivative(e) * &phi_psi;
            let from_phi = (&(&numerator * &dphi) * &psi).scale(&a);
            let from_psi = (&(&numerator * &phi) * &dpsi).scale(&b);
            numerator = &(&lead - &from_phi) - &from_psi;
            a += int(1);
            b += int(1);
        }
    }
    if numerator.is_zero() {
        return Err(IntegrandError::Degenerate);
    }
    let total: u32 = n.iter().sum();
    Ok(ParametricIntegrand {
        mu: (0..g.edge_count())
            .map(|e| int(n[e] as i64) + g.scaled_weight(e) - int(1))
            .collect(),
        gamma_denominator: (0..g.edge_count())
            .map(|e| int(n[e] as i64) + g.scaled_weight(e))
            .collect(),
        graph: g.clone(),
        representation: Representation::Dual,
        n: n.to_vec(),
        phi,
        psi,
        phi_exponent: a,
        psi_exponent: b,
        numerator,
        negative: total % 2 == 1,
        superficial_degree: m,
    })
}

/// `Gamma(M)/prod Gamma(lambda nu_e) * integral of prod a^{d/2 - lambda nu_e - 1} / (Phi^M Psi^{d/2-M})`.
pub fn build_direct_integrand(g: &FeynmanGraph) -> Result<ParametricIntegrand, IntegrandError> {
    if let Some(e) = g.edges().iter().find(|e| e.weight <= int(0)) {
        return Err(IntegrandError::NonPositiveWeight(e.name.clone()));
    }
    require_convergent(g)?;
    let phi_t = phi_tilde(g);
    let psi_t = psi_tilde(g);
    if phi_t.is_zero() || psi_t.is_zero() {
        return Err(IntegrandError::Degenerate);
    }
    let degree = |p: &Poly| p.homogeneous_degree().ok().flatten().ok_or(IntegrandError::Degenerate);
    let phi = cremona_transform(&phi_t, degree(&phi_t)?).map_err(|_| IntegrandError::Degenerate)?;
    let psi = cremona_transform(&psi_t, degree(&psi_t)?).map_err(|_| IntegrandError::Degenerate)?;
    let m = superficial_degree(g);
    require_gamma_finite(&m)?;
    let half = g.half_dim();
    Ok(ParametricIntegrand {
        mu: (0..g.edge_count())
            .map(|e| &half - g.scaled_weight(e) - int(1))
            .collect(),
        gamma_denominator: (0..g.edge_count()).map(|e| g.scaled_weight(e)).collect(),
        graph: g.clone(),
        representation: Representation::Direct,
        n: vec![0; g.edge_count()],
        phi,
        psi,
        phi_exponent: m.clone(),
        psi_exponent: &half - &m,
        numerator: Poly::one(g.edge_count()),
        negative: false,
        superficial_degree: m,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegrandDump {
    pub representation: Representation,
    pub sign: i32,
    pub gamma_numerator: String,
    pub gamma_denominator: Vec<String>,
    pub prefactor: f64,
    pub phi_exponent: String,
    pub psi_exponent: String,
    pub mu: Vec<String>,
    pub n: Vec<u32>,
    pub phi: String,
    pub psi: String,
    pub numerator: String,
}

impl ParametricIntegrand {
    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// `(-1)^{sum n} Gamma(M) / prod Gamma(g_e)` in floating point.
    pub fn prefactor(&self) -> f64 {
        use crate::evaluator::{gamma, ln_gamma};
        let m = to_f64(&self.superficial_degree);
        let mut log = ln_gamma(m);
        for g in &self.gamma_denominator {
            log -= ln_gamma(to_f64(g));
        }
        // denominators are positive; only Gamma(M) can be negative
        let mut sign = gamma(m).signum();
        if self.negative {
            sign = -sign;
        }
        sign * log.exp()
    }

    /// `deg N + sum (mu_e + 1) - A deg Phi - B deg Psi`; zero for a projective integrand.
    pub fn homogeneity_defect(&self) -> Result<Rational, IntegrandError> {
        let deg = |p: &Poly| -> Result<Rational, IntegrandError> {
            Ok(int(p.homogeneous_degree()?.ok_or(IntegrandError::Degenerate)? as i64))
        };
        let mu: Rational = self.mu.iter().map(|m| m + int(1)).sum();
        Ok(deg(&self.numerator)? + mu - &self.phi_exponent * deg(&self.phi)? - &self.psi_exponent * deg(&self.psi)?)
    }

    /// Pointwise value with monomial weights; the sign and gamma factor are in [`Self::prefactor`].
    /// Evaluates the polynomials term by term.
    pub fn eval(&self, alpha: &[f64], s: &BTreeMap<DistanceSymbol, f64>) -> Result<f64, IntegrandError> {
        let num = self.numerator.eval_f64(alpha, s)?;
        let phi = self.phi.eval_f64(alpha, s)?;
        let psi = self.psi.eval_f64(alpha, s)?;
        let mut log = -to_f64(&self.phi_exponent) * phi.ln() - to_f64(&self.psi_exponent) * psi.ln();
        for (a, mu) in alpha.iter().zip(&self.mu) {
            log += to_f64(mu) * a.ln();
        }
        Ok(num * log.exp())
    }

    /// Graphs whose `n = 0` dual integrand is the term `a^m` of the numerator:
    /// dimension `d + 4 sum n`, scaled weights `lambda nu_e + n_e + m_e`.
    pub fn lifted_monomial_graphs(&self) -> Result<Vec<(Monomial, FeynmanGraph)>, ValidationError> {
        let g = &self.graph;
        let total: u32 = self.n.iter().sum();
        let dim = g.dim() + int(4 * total as i64);
        let lambda = (&dim - int(2)) / int(2);
        self.numerator
            .terms()
            .map(|(m, _)| {
                let weights = (0..g.edge_count())
                    .map(|e| (g.scaled_weight(e) + int(self.n[e] as i64) + int(m.exponents()[e] as i64)) / &lambda)
                    .collect();
                Ok((m.clone(), g.with_weights(dim.clone(), weights)?))
            })
            .collect()
    }

    pub fn dump(&self) -> IntegrandDump {
        let g = &self.graph;
        IntegrandDump {
            representation: self.representation,
            sign: if self.negative { -1 } else { 1 },
            gamma_numerator: format_rational(&self.superficial_degree),
            gamma_denominator: self.gamma_denominator.iter().map(format_rational).collect(),
            prefactor: self.prefactor(),
            phi_exponent: format_rational(&self.phi_exponent),
            psi_exponent: format_rational(&self.psi_exponent),
            mu: self.mu.iter().map(format_rational).collect(),
            n: self.n.clone(),
            phi: g.format_poly(&self.phi),
            psi: g.format_poly(&self.psi),
            numerator: g.format_poly(&self.numerator),
        }
    }
}

/// An integrand restricted to the chart `a_{e0} = 1`, with the other
/// variables on the unit cube through `a = (t/(1-t))^w`.
#[derive(Clone, Debug)]
pub struct ChartedIntegrand {
    pub integrand: ParametricIntegrand,
    pub chart: usize,
    /// Exponent `w` of the cube map; `1` is the plain map `t/(1-t)`.
    pub warp: f64,
}

pub const DEFAULT_WARP: f64 = 3.0;

pub fn fix_chart(integrand: ParametricIntegrand, chart: usize) -> Result<ChartedIntegrand, IntegrandError> {
    if chart >= integrand.edge_count() {
        return Err(IntegrandError::UnknownEdge(format!("#{}", chart + 1)));
    }
    Ok(ChartedIntegrand {
        integrand,
        chart,
        warp: DEFAULT_WARP,
    })
}

impl ChartedIntegrand {
    pub fn with_warp(mut self, warp: f64) -> Self {
        assert!(warp > 0.0, "warp exponent must be positive");
        self.warp = warp;
        self
    }

    /// Number of cube coordinates, `E - 1`.
    pub fn dimension(&self) -> usize {
        self.integrand.edge_count() - 1
    }

    /// Edge variables for a cube point and the log of the Jacobian.
    pub fn alpha_from_cube(&self, t: &[f64], alpha: &mut [f64], log_alpha: &mut [f64]) -> f64 {
        let mut log_jacobian = 0.0;
        let mut k = 0;
        for e in 0..alpha.len() {
            if e == self.chart {
                alpha[e] = 1.0;
                log_alpha[e] = 0.0;
                continue;
            }
            let x = t[k];
            k += 1;
            // a = (x/(1-x))^w, da/dx = w a / (x (1-x))
            let l = self.warp * (x.ln() - (-x).ln_1p());
            log_alpha[e] = l;
            alpha[e] = l.exp();
            log_jacobian += self.warp.ln() + l - x.ln() - (-x).ln_1p();
        }
        log_jacobian
    }

    /// The cube integrand (Jacobian included, gamma factor excluded),
    /// evaluating polynomials term by term.
    pub fn eval_cube(&self, t: &[f64], s: &BTreeMap<DistanceSymbol, f64>) -> Result<f64, IntegrandError> {
        let e = self.integrand.edge_count();
        let (mut alpha, mut log_alpha) = (vec![0.0; e], vec![0.0; e]);
        let log_j = self.alpha_from_cube(t, &mut alpha, &mut log_alpha);
        Ok(self.integrand.eval(&alpha, s)? * log_j.exp())
    }
}
