//! Monte Carlo evaluation of charted integrands, reference oracles and the
//! `z <-> conj(z)` symmetry check.
//!
//! Samples are split into shards of [`SHARD_SIZE`]; shard `k` draws from
//! the ChaCha8 stream `k` of the master seed. Per-shard statistics are merged
//! in shard order, so serial and parallel runs give identical bits.

mod network;
mod special;
mod xspace;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::forest::three_point_distances;
use crate::graph::FeynmanGraph;
use crate::integrand::{
    build_direct_integrand, build_dual_integrand, choose_n, fix_chart, ChartedIntegrand, IntegrandError, Representation,
};
use crate::poly::{CompiledPoly, DistanceSymbol};
use crate::rational::to_f64;

pub use network::{Network, Scratch};
pub use special::{beta, bloch_wigner, gamma, ln_gamma};
pub use xspace::xspace_oracle;

pub const SHARD_SIZE: u64 = 1 << 16;

#[derive(Debug, Error, Clone)]
pub enum EvalError {
    #[error("z must avoid {{0,1}}")]
    InvalidZ,
    #[error("distance {0} must be positive and finite")]
    NonPositiveDistance(String),
    #[error("missing distance for the pair {0}")]
    MissingDistance(String),
    #[error("z mode needs external vertices labelled exactly 0, 1, z")]
    NotThreePoint,
    #[error("{0}")]
    Refused(String),
    #[error("at least one sample is required")]
    NoSamples,
    #[error(transparent)]
    Integrand(#[from] IntegrandError),
}

/// External positions: `0, 1, z` in the plane, or squared distances by label pair.
#[derive(Clone, Debug, PartialEq)]
pub enum ExternalData {
    Z(Complex64),
    Distances(BTreeMap<(String, String), f64>),
}

impl ExternalData {
    pub fn z(z: Complex64) -> Result<Self, EvalError> {
        if !z.is_finite() || z == Complex64::new(0.0, 0.0) || z == Complex64::new(1.0, 0.0) {
            return Err(EvalError::InvalidZ);
        }
        Ok(ExternalData::Z(z))
    }

    pub fn distances(pairs: BTreeMap<(String, String), f64>) -> Result<Self, EvalError> {
        for ((a, b), &v) in &pairs {
            if !(v > 0.0 && v.is_finite()) {
                return Err(EvalError::NonPositiveDistance(format!("s_{a}_{b}")));
            }
        }
        Ok(ExternalData::Distances(pairs))
    }

    /// Values for the distance symbols of `g`.
    pub fn bind(&self, g: &FeynmanGraph) -> Result<BTreeMap<DistanceSymbol, f64>, EvalError> {
        match self {
            ExternalData::Z(z) => {
                let ids = g.three_point_ids().ok_or(EvalError::NotThreePoint)?;
                Ok(three_point_distances(ids, *z))
            }
            ExternalData::Distances(pairs) => {
                let ext = g.external_vertices();
                let mut out = BTreeMap::new();
                for (k, &i) in ext.iter().enumerate() {
                    for &j in &ext[k + 1..] {
                        let (a, b) = (&g.vertices()[i].label, &g.vertices()[j].label);
                        let v = pairs
                            .get(&(a.clone(), b.clone()))
                            .or_else(|| pairs.get(&(b.clone(), a.clone())))
                            .ok_or_else(|| EvalError::MissingDistance(format!("{a},{b}")))?;
                        out.insert(DistanceSymbol::new(i, j), *v);
                    }
                }
                Ok(out)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    #[default]
    Plain,
    /// Randomly shifted Halton points.
    LowDiscrepancy,
}

impl std::str::FromStr for SamplerKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plain" => Ok(SamplerKind::Plain),
            "low-discrepancy" | "halton" => Ok(SamplerKind::LowDiscrepancy),
            other => Err(format!("unknown sampler `{other}` (expected plain or low-discrepancy)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub samples: u64,
    pub seed: u64,
    pub sampler: SamplerKind,
    /// Spread shards over the rayon pool; the result does not depend on it.
    pub parallel: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            samples: 1_000_000,
            seed: 0,
            sampler: SamplerKind::Plain,
            parallel: true,
        }
    }
}

/// Number of randomly shifted replicates of the Halton sequence.
pub const REPLICATES: u64 = 16;
pub const REJECTION_WARNING: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub sampler: SamplerKind,
    pub rejected: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Running mean and squared deviations (Welford), mergeable.
#[derive(Clone, Copy, Debug, Default)]
struct Stats {
    n: u64,
    mean: f64,
    m2: f64,
    rejected: u64,
}

impl Stats {
    fn push(&mut self, x: f64) {
        if !x.is_finite() {
            self.rejected += 1;
            return;
        }
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Stats) -> Stats {
        if self.n == 0 {
            return Stats {
                rejected: self.rejected + other.rejected,
                ..other
            };
        }
        if other.n == 0 {
            return Stats {
                rejected: self.rejected + other.rejected,
                ..self
            };
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        Stats {
            n,
            mean: self.mean + delta * other.n as f64 / n as f64,
            m2: self.m2 + other.m2 + delta * delta * (self.n as f64 * other.n as f64 / n as f64),
            rejected: self.rejected + other.rejected,
        }
    }

    fn stderr(&self) -> f64 {
        if self.n < 2 {
            return f64::INFINITY;
        }
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }
}

/// Uniform on the open interval (0, 1).
#[inline]
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Runs `work` over shard indices and merges the results in order.
fn sharded<T: Send>(count: u64, parallel: bool, work: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    if parallel {
        (0..count).into_par_iter().map(work).collect()
    } else {
        (0..count).map(work).collect()
    }
}

/// Plain Monte Carlo mean of `f` over the `dim`-cube. `f` receives a point
/// and a per-shard state built by `init`.
pub fn plain_cube<S>(
    dim: usize,
    cfg: &SamplerConfig,
    init: impl Fn() -> S + Sync + Send,
    f: impl Fn(&[f64], &mut S) -> f64 + Sync + Send,
) -> (f64, f64, u64) {
    let shards = cfg.samples.div_ceil(SHARD_SIZE);
    let parts = sharded(shards, cfg.parallel, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(k);
        let mut state = init();
        let mut point = vec![0.0; dim];
        let mut stats = Stats::default();
        let count = SHARD_SIZE.min(cfg.samples - k * SHARD_SIZE);
        for _ in 0..count {
            for x in point.iter_mut() {
                *x = open_unit(&mut rng);
            }
            stats.push(f(&point, &mut state));
        }
        stats
    });
    let total = parts.into_iter().fold(Stats::default(), Stats::merge);
    (total.mean, total.stderr(), total.rejected)
}

fn primes(count: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(count);
    let mut p = 2;
    while out.len() < count {
        if out.iter().take_while(|&&q| q * q <= p).all(|&q| p % q != 0) {
            out.push(p);
        }
        p += 1;
    }
    out
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    r
}

/// Halton points with [`REPLICATES`] independent random shifts; the error is
/// the spread of the replicate means.
pub fn halton_cube<S>(
    dim: usize,
    cfg: &SamplerConfig,
    init: impl Fn() -> S + Sync + Send,
    f: impl Fn(&[f64], &mut S) -> f64 + Sync + Send,
) -> (f64, f64, u64) {
    let bases = primes(dim);
    let per = cfg.samples.div_ceil(REPLICATES);
    let mut shift_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let shifts: Vec<Vec<f64>> = (0..REPLICATES)
        .map(|_| (0..dim).map(|_| open_unit(&mut shift_rng)).collect())
        .collect();
    let chunks = per.div_ceil(SHARD_SIZE);
    let parts = sharded(REPLICATES * chunks, cfg.parallel, |job| {
        let (r, c) = (job / chunks, job % chunks);
        let shift = &shifts[r as usize];
        let mut state = init();
        let mut point = vec![0.0; dim];
        let mut stats = Stats::default();
        let start = c * SHARD_SIZE;
        for i in start..(start + SHARD_SIZE).min(per) {
            for (k, x) in point.iter_mut().enumerate() {
                let mut v = radical_inverse(i + 1, bases[k]) + shift[k];
                if v >= 1.0 {
                    v -= 1.0;
                }
                *x = v.max(f64::MIN_POSITIVE);
            }
            stats.push(f(&point, &mut state));
        }
        stats
    });
    let mut means = Vec::with_capacity(REPLICATES as usize);
    let mut rejected = 0;
    for r in 0..REPLICATES as usize {
        let chunk = &parts[r * chunks as usize..(r + 1) * chunks as usize];
        let s = chunk.iter().copied().fold(Stats::default(), Stats::merge);
        rejected += s.rejected;
        means.push(s.mean);
    }
    let mut outer = Stats::default();
    for m in &means {
        outer.push(*m);
    }
    (outer.mean, outer.stderr(), rejected)
}

enum Numerator {
    Constant(f64),
    Compiled(CompiledPoly),
}

/// A charted integrand with external data substituted, ready for sampling.
pub struct BoundIntegrand<'a> {
    charted: &'a ChartedIntegrand,
    network: Network,
    numerator: Numerator,
    mu: Vec<f64>,
    phi_exponent: f64,
    psi_exponent: f64,
    direct: bool,
}

/// Per-thread buffers for [`BoundIntegrand::eval`].
#[derive(Default)]
pub struct Buffers {
    alpha: Vec<f64>,
    log_alpha: Vec<f64>,
    conductance: Vec<f64>,
    scratch: Scratch,
}

impl<'a> BoundIntegrand<'a> {
    pub fn new(charted: &'a ChartedIntegrand, s: &BTreeMap<DistanceSymbol, f64>) -> Result<Self, EvalError> {
        let i = &charted.integrand;
        let numerator = match i.numerator.terms().next() {
            Some((m, c)) if i.numerator.len() == 1 && m.total_degree() == 0 => {
                Numerator::Constant(c.eval_f64(s).map_err(IntegrandError::from)?)
            }
            _ => Numerator::Compiled(CompiledPoly::new(&i.numerator, s).map_err(IntegrandError::from)?),
        };
        Ok(BoundIntegrand {
            charted,
            network: Network::new(&i.graph, s),
            numerator,
            mu: i.mu.iter().map(to_f64).collect(),
            phi_exponent: to_f64(&i.phi_exponent),
            psi_exponent: to_f64(&i.psi_exponent),
            direct: i.representation == Representation::Direct,
        })
    }

    pub fn buffers(&self) -> Buffers {
        let e = self.mu.len();
        Buffers {
            alpha: vec![0.0; e],
            log_alpha: vec![0.0; e],
            conductance: vec![0.0; e],
            scratch: Scratch::default(),
        }
    }

    /// Cube integrand including the Jacobian, excluding the signed gamma prefactor.
    pub fn eval(&self, t: &[f64], b: &mut Buffers) -> f64 {
        let log_j = self.charted.alpha_from_cube(t, &mut b.alpha, &mut b.log_alpha);
        let (log_phi, log_psi) = if self.direct {
            for (c, a) in b.conductance.iter_mut().zip(&b.alpha) {
                *c = 1.0 / a;
            }
            let (lphi, lpsi) = self.network.log_polynomials(&b.conductance, &mut b.scratch);
            let log_prod: f64 = b.log_alpha.iter().sum();
            (lphi + log_prod, lpsi + log_prod)
        } else {
            self.network.log_polynomials(&b.alpha, &mut b.scratch)
        };
        let num = match &self.numerator {
            Numerator::Constant(c) => *c,
            Numerator::Compiled(p) => p.eval(&b.alpha),
        };
        let mut log = log_j - self.phi_exponent * log_phi - self.psi_exponent * log_psi;
        for (mu, la) in self.mu.iter().zip(&b.log_alpha) {
            log += mu * la;
        }
        num * log.exp()
    }
}

fn finish(mean: f64, stderr: f64, rejected: u64, prefactor: f64, cfg: &SamplerConfig) -> Estimate {
    let fraction = rejected as f64 / cfg.samples as f64;
    Estimate {
        value: prefactor * mean,
        stderr: prefactor.abs() * stderr,
        samples: cfg.samples,
        seed: cfg.seed,
        sampler: cfg.sampler,
        rejected,
        warning: (fraction > REJECTION_WARNING).then(|| {
            format!(
                "{rejected} of {} samples were not finite and were rejected",
                cfg.samples
            )
        }),
    }
}

/// Monte Carlo estimate of `prefactor * integral over the cube`.
pub fn evaluate_gf(ci: &ChartedIntegrand, x: &ExternalData, cfg: &SamplerConfig) -> Result<Estimate, EvalError> {
    if cfg.samples == 0 {
        return Err(EvalError::NoSamples);
    }
    let s = x.bind(&ci.integrand.graph)?;
    let bound = BoundIntegrand::new(ci, &s)?;
    let prefactor = ci.integrand.prefactor();
    let dim = ci.dimension();
    if dim == 0 {
        let value = bound.eval(&[], &mut bound.buffers());
        let mut e = finish(value, 0.0, 0, prefactor, cfg);
        e.samples = 1;
        return Ok(e);
    }
    let f = |t: &[f64], b: &mut Buffers| bound.eval(t, b);
    let init = || bound.buffers();
    let (mean, stderr, rejected) = match cfg.sampler {
        SamplerKind::Plain => plain_cube(dim, cfg, init, f),
        SamplerKind::LowDiscrepancy => halton_cube(dim, cfg, init, f),
    };
    Ok(finish(mean, stderr, rejected, prefactor, cfg))
}

#[derive(Clone, Debug, Default)]
pub struct EvalOptions {
    pub representation: Representation,
    /// Chart edge; the first edge by default.
    pub chart: Option<usize>,
    /// Derivative orders for the dual representation; [`choose_n`] by default.
    pub n: Option<Vec<u32>>,
    /// Exponent of the cube map; [`crate::integrand::DEFAULT_WARP`] by default.
    pub warp: Option<f64>,
}

pub fn charted_integrand(g: &FeynmanGraph, opts: &EvalOptions) -> Result<ChartedIntegrand, IntegrandError> {
    let integrand = match opts.representation {
        Representation::Dual => {
            let n = opts.n.clone().unwrap_or_else(|| choose_n(g));
            build_dual_integrand(g, &n)?
        }
        Representation::Direct => build_direct_integrand(g)?,
    };
    let charted = fix_chart(integrand, opts.chart.unwrap_or(0))?;
    Ok(match opts.warp {
        Some(w) => charted.with_warp(w),
        None => charted,
    })
}

/// Builds, charts and evaluates the integrand of `g`.
pub fn evaluate_graph(
    g: &FeynmanGraph,
    x: &ExternalData,
    cfg: &SamplerConfig,
    opts: &EvalOptions,
) -> Result<Estimate, EvalError> {
    let ci = charted_integrand(g, opts)?;
    evaluate_gf(&ci, x, cfg)
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub z: [f64; 2],
    pub estimate: Estimate,
    pub conjugate: Estimate,
    pub difference: f64,
    pub combined_stderr: f64,
    pub symmetric: bool,
    pub positive: bool,
}

impl SymmetryReport {
    pub fn holds(&self) -> bool {
        self.symmetric && self.positive
    }
}

/// `f(z) = f(conj z)` within three combined standard errors, and both
/// estimates positive by more than three standard errors. The conjugate
/// point uses seed `seed + 1`.
pub fn verify_g_symmetries(
    g: &FeynmanGraph,
    z: Complex64,
    cfg: &SamplerConfig,
    opts: &EvalOptions,
) -> Result<SymmetryReport, EvalError> {
    let ci = charted_integrand(g, opts)?;
    let estimate = evaluate_gf(&ci, &ExternalData::z(z)?, cfg)?;
    let conj_cfg = SamplerConfig {
        seed: cfg.seed.wrapping_add(1),
        ..cfg.clone()
    };
    let conjugate = evaluate_gf(&ci, &ExternalData::z(z.conj())?, &conj_cfg)?;
    let difference = estimate.value - conjugate.value;
    let combined_stderr = estimate.stderr.hypot(conjugate.stderr);
    Ok(SymmetryReport {
        z: [z.re, z.im],
        symmetric: difference.abs() <= 3.0 * combined_stderr,
        positive: estimate.value > 3.0 * estimate.stderr && conjugate.value > 3.0 * conjugate.stderr,
        estimate,
        conjugate,
        difference,
        combined_stderr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cfg(samples: u64, seed: u64) -> SamplerConfig {
        SamplerConfig {
            samples,
            seed,
            ..SamplerConfig::default()
        }
    }

    #[test]
    fn z_validation() {
        assert!(matches!(
            ExternalData::z(Complex64::new(1.0, 0.0)),
            Err(EvalError::InvalidZ)
        ));
        assert!(matches!(
            ExternalData::z(Complex64::new(0.0, 0.0)),
            Err(EvalError::InvalidZ)
        ));
        assert_eq!(EvalError::InvalidZ.to_string(), "z must avoid {0,1}");
    }

    #[test]
    fn general_distances_bind_by_label() {
        let g = fixtures::g4();
        let pairs = BTreeMap::from([
            (("0".to_string(), "1".to_string()), 1.0),
            (("z".to_string(), "0".to_string()), 2.0),
            (("1".to_string(), "z".to_string()), 3.0),
        ]);
        let s = ExternalData::distances(pairs).unwrap().bind(&g).unwrap();
        assert_eq!(s.values().copied().collect::<Vec<_>>(), vec![1.0, 2.0, 3.0]);
        let missing = BTreeMap::from([(("0".to_string(), "1".to_string()), 1.0)]);
        assert!(ExternalData::distances(missing).unwrap().bind(&g).is_err());
        let negative = BTreeMap::from([(("0".to_string(), "1".to_string()), -1.0)]);
        assert!(ExternalData::distances(negative).is_err());
    }

    #[test]
    fn bound_matches_term_by_term_evaluation() {
        let g = fixtures::g4();
        let x = ExternalData::z(Complex64::new(0.2, 0.9)).unwrap();
        let s = x.bind(&g).unwrap();
        for opts in [
            EvalOptions::default(),
            EvalOptions {
                n: Some(vec![1, 0, 2]),
                ..EvalOptions::default()
            },
            EvalOptions {
                representation: Representation::Direct,
                chart: Some(2),
                warp: Some(1.0),
                ..EvalOptions::default()
            },
        ] {
            let ci = charted_integrand(&g, &opts).unwrap();
            let bound = BoundIntegrand::new(&ci, &s).unwrap();
            let mut b = bound.buffers();
            for t in [[0.3, 0.6], [0.01, 0.99], [0.5, 0.5]] {
                let fast = bound.eval(&t, &mut b);
                let slow = ci.eval_cube(&t, &s).unwrap();
                assert!((fast - slow).abs() <= 1e-11 * slow.abs(), "{fast} vs {slow}");
            }
        }
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let g = fixtures::g4();
        let x = ExternalData::z(Complex64::i()).unwrap();
        let opts = EvalOptions::default();
        let a = evaluate_graph(&g, &x, &cfg(200_000, 7), &opts).unwrap();
        let b = evaluate_graph(&g, &x, &cfg(200_000, 7), &opts).unwrap();
        let serial = SamplerConfig {
            parallel: false,
            ..cfg(200_000, 7)
        };
        let c = evaluate_graph(&g, &x, &serial, &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.value.to_bits(), c.value.to_bits());
        assert_eq!(a.stderr.to_bits(), c.stderr.to_bits());
        let d = evaluate_graph(&g, &x, &cfg(200_000, 8), &opts).unwrap();
        assert_ne!(a.value, d.value);
    }

    #[test]
    fn g4_at_i_small_budget() {
        let g = fixtures::g4();
        let x = ExternalData::z(Complex64::i()).unwrap();
        let e = evaluate_graph(&g, &x, &cfg(400_000, 1), &EvalOptions::default()).unwrap();
        let exact = 2.0 * bloch_wigner(Complex64::i());
        assert!((e.value - exact).abs() < 4.0 * e.stderr, "{e:?}");
        assert!(e.stderr < 0.01);
        assert_eq!(e.rejected, 0);
    }

    #[test]
    fn g4_halton() {
        let g = fixtures::g4();
        let x = ExternalData::z(Complex64::new(0.5, 0.75)).unwrap();
        let c = SamplerConfig {
            sampler: SamplerKind::LowDiscrepancy,
            ..cfg(320_000, 3)
        };
        let e = evaluate_graph(&g, &x, &c, &EvalOptions::default()).unwrap();
        let z = Complex64::new(0.5, 0.75);
        let exact = 2.0 * bloch_wigner(z) / z.im;
        assert!((e.value - exact).abs() < 4.0 * e.stderr, "{e:?} vs {exact}");
    }

    #[test]
    fn single_edge_is_exact() {
        let g = crate::graph::GraphDescription::new(crate::rational::int(4))
            .external("0")
            .external("1")
            .external("z")
            .edge("e1", "0", "1", crate::rational::int(1))
            .build()
            .unwrap();
        let x = ExternalData::z(Complex64::i()).unwrap();
        // no internal vertices: the integral is the propagator 1/|x_0 - x_1|^2 = 1
        let e = evaluate_graph(&g, &x, &cfg(10, 0), &EvalOptions::default()).unwrap();
        assert_eq!((e.value, e.stderr, e.samples), (1.0, 0.0, 1));
    }

    #[test]
    fn estimate_json_fields() {
        let e = finish(1.0, 0.5, 0, 2.0, &cfg(100, 3));
        let json = serde_json::to_value(&e).unwrap();
        assert_eq!(json["value"], 2.0);
        assert_eq!(json["stderr"], 1.0);
        assert_eq!(json["sampler"], "plain");
        assert!(json.get("warning").is_none());
    }

    #[test]
    fn rejection_warning() {
        let e = finish(1.0, 0.5, 1, 1.0, &cfg(100, 3));
        assert!(e.warning.is_some());
    }

    #[test]
    fn welford_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|k| ((k * 37) % 101) as f64 / 7.0).collect();
        let mut whole = Stats::default();
        xs.iter().for_each(|&x| whole.push(x));
        let (mut a, mut b) = (Stats::default(), Stats::default());
        xs[..300].iter().for_each(|&x| a.push(x));
        xs[300..].iter().for_each(|&x| b.push(x));
        let merged = a.merge(b);
        assert!((merged.mean - whole.mean).abs() < 1e-12);
        assert!((merged.m2 - whole.m2).abs() < 1e-8 * whole.m2);
    }

    #[test]
    fn odd_derivative_count_keeps_the_sign() {
        let g = fixtures::g4();
        let opts = EvalOptions {
            n: Some(vec![1, 0, 0]),
            ..EvalOptions::default()
        };
        let e = evaluate_graph(&g, &ExternalData::z(Complex64::i()).unwrap(), &cfg(200_000, 5), &opts).unwrap();
        let exact = 2.0 * bloch_wigner(Complex64::i());
        assert!((e.value - exact).abs() < 4.0 * e.stderr, "{e:?}");
        let neg = evaluate_graph(
            &fixtures::g4_negative(),
            &ExternalData::z(Complex64::i()).unwrap(),
            &cfg(200_000, 6),
            &EvalOptions::default(),
        )
        .unwrap();
        assert!(neg.value > 3.0 * neg.stderr, "{neg:?}");
    }

    #[test]
    fn negative_superficial_degree() {
        // |x_0 - x_1| = 1, so the extra edge leaves the value unchanged
        let mut desc = fixtures::g4().description();
        desc = desc.edge("e4", "0", "1", crate::rational::ratio(-3, 2));
        let g = desc.build().unwrap();
        let e = evaluate_graph(
            &g,
            &ExternalData::z(Complex64::i()).unwrap(),
            &cfg(200_000, 7),
            &EvalOptions::default(),
        )
        .unwrap();
        let exact = 2.0 * bloch_wigner(Complex64::i());
        assert!((e.value - exact).abs() < 4.0 * e.stderr, "{e:?}");
    }
}
