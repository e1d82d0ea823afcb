//! Graphical functions: exact graph polynomials, power counting, parametric
//! integrands, Monte Carlo evaluation and planar duality for Feynman graphs
//! with external vertices in position space.

pub mod convergence;
pub mod corpus;
pub mod dual;
pub mod evaluator;
pub mod fixtures;
pub mod forest;
pub mod graph;
pub mod integrand;
pub mod io;
pub mod poly;
pub mod rational;

pub use convergence::{check_convergence, superficial_degree, ConvergenceReport, Verdict};
pub use dual::{planar_dual, DualResult, RotationSystem};
pub use evaluator::{evaluate_gf, evaluate_graph, Estimate, EvalOptions, ExternalData, SamplerConfig, SamplerKind};
pub use forest::{dual_forest_polynomial, phi_tilde, psi_tilde, VertexPartition};
pub use graph::FeynmanGraph;
pub use integrand::{build_direct_integrand, build_dual_integrand, fix_chart, Representation};
pub use io::load_graph;
pub use poly::Poly;
