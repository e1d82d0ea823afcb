//! Brute-force position-space integration, used to cross-check the
//! parametric route on small graphs.
//!
//! Each internal vertex is drawn from an equal mixture of radial densities
//! `r^{-a} (1+r)^{-(T-a)}` centred at its neighbours, with `a` matching the
//! propagator singularity there and `T` below the decay of the integrand.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, StandardNormal};

use super::{finish, ln_gamma, sharded, Estimate, EvalError, SamplerConfig, Stats, SHARD_SIZE};
use crate::convergence::check_convergence;
use crate::graph::FeynmanGraph;
use crate::integrand::IntegrandError;
use crate::rational::{int, to_f64};

#[derive(Clone, Copy, Debug)]
enum Anchor {
    Fixed(usize),
    Sampled(usize),
}

struct Component {
    anchor: Anchor,
    a: f64,
    radius: Beta<f64>,
    log_norm: f64,
}

struct VertexPlan {
    components: Vec<Component>,
    tail: f64,
}

fn refuse(message: &str) -> EvalError {
    EvalError::Refused(format!("x-space oracle: {message}"))
}

/// Monte Carlo estimate of
/// `prod_v int d^d x_v / pi^{d/2} prod_e |x_u - x_w|^{-2 lambda nu_e}`
/// with `x_0 = 0`, `x_1 = 1`, `x_z = z`.
pub fn xspace_oracle(g: &FeynmanGraph, z: Complex64, cfg: &SamplerConfig) -> Result<Estimate, EvalError> {
    let ids = g.three_point_ids().ok_or(EvalError::NotThreePoint)?;
    let internal = g.internal_vertices();
    if internal.len() > 2 {
        return Err(refuse("at most two internal vertices"));
    }
    let dim = g.dim();
    if *dim != int(4) && *dim != int(6) {
        return Err(refuse("the dimension must be 4 or 6"));
    }
    let report = check_convergence(g);
    if !report.is_convergent() {
        return Err(EvalError::Integrand(IntegrandError::Divergent(Box::new(report))));
    }
    if cfg.samples == 0 {
        return Err(EvalError::NoSamples);
    }
    let d = to_f64(dim);
    let dn = d as usize;

    let mut fixed = vec![vec![0.0; dn]; g.vertex_count()];
    fixed[ids[1]][0] = 1.0;
    fixed[ids[2]][0] = z.re;
    fixed[ids[2]][1] = z.im;
    let slot = |v: usize| internal.iter().position(|&w| w == v);

    let log_sphere = (2.0f64).ln() + 0.5 * d * std::f64::consts::PI.ln() - ln_gamma(d / 2.0);
    let mut plans = Vec::new();
    for (k, &v) in internal.iter().enumerate() {
        let total: f64 = g.incident_edges(v).iter().map(|&e| to_f64(&g.scaled_weight(e))).sum();
        if 2.0 * total <= d {
            return Err(refuse("vertex weight too small for a radial proposal"));
        }
        let tail = d + 0.5 * (2.0 * total - d).min(1.0);
        let mut anchors: Vec<(Anchor, f64)> = Vec::new();
        for e in g.incident_edges(v) {
            let w = g.edges()[e].other_end(v);
            let anchor = match slot(w) {
                Some(j) if j < k => Anchor::Sampled(j),
                Some(_) => continue,
                None => Anchor::Fixed(w),
            };
            let a = 2.0 * to_f64(&g.scaled_weight(e));
            match anchors.iter_mut().find(|(x, _)| same(*x, anchor)) {
                Some(entry) => entry.1 += a,
                None => anchors.push((anchor, a)),
            }
        }
        if anchors.is_empty() {
            anchors.push((Anchor::Fixed(ids[0]), 0.0));
        }
        let components = anchors
            .into_iter()
            .map(|(anchor, a)| {
                let a = a.clamp(0.0, d - 0.5);
                Component {
                    anchor,
                    a,
                    radius: Beta::new(d - a, tail - d).expect("positive shape parameters"),
                    log_norm: log_sphere + ln_gamma(d - a) + ln_gamma(tail - d) - ln_gamma(tail - a),
                }
            })
            .collect();
        plans.push(VertexPlan { components, tail });
    }

    let edges: Vec<(usize, usize, f64)> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| (edge.ends.0, edge.ends.1, to_f64(&g.scaled_weight(e))))
        .collect();
    let log_measure = internal.len() as f64 * 0.5 * d * std::f64::consts::PI.ln();

    let shards = cfg.samples.div_ceil(SHARD_SIZE);
    let parts = sharded(shards, cfg.parallel, |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(s);
        let mut pos = fixed.clone();
        let mut stats = Stats::default();
        let count = SHARD_SIZE.min(cfg.samples - s * SHARD_SIZE);
        for _ in 0..count {
            let mut log_q = 0.0;
            for (k, plan) in plans.iter().enumerate() {
                let c = &plan.components[rng.random_range(0..plan.components.len())];
                let centre = anchor_point(c.anchor, &pos, &internal);
                let u: f64 = c.radius.sample(&mut rng);
                let r = u / (1.0 - u);
                let mut dir: Vec<f64> = (0..dn).map(|_| StandardNormal.sample(&mut rng)).collect();
                let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
                for (x, c0) in dir.iter_mut().zip(&centre) {
                    *x = c0 + r * *x / norm;
                }
                pos[internal[k]] = dir;
                let x = &pos[internal[k]];
                let density: f64 = plan
                    .components
                    .iter()
                    .map(|c| {
                        let rr = distance(x, &anchor_point(c.anchor, &pos, &internal));
                        (-c.a * rr.ln() - (plan.tail - c.a) * rr.ln_1p() - c.log_norm).exp()
                    })
                    .sum::<f64>()
                    / plan.components.len() as f64;
                log_q += density.ln();
            }
            let mut log_f = -log_measure - log_q;
            for &(u, v, w) in &edges {
                log_f -= 2.0 * w * distance(&pos[u], &pos[v]).ln();
            }
            stats.push(log_f.exp());
        }
        stats
    });
    let total = parts.into_iter().fold(Stats::default(), Stats::merge);
    Ok(finish(total.mean, total.stderr(), total.rejected, 1.0, cfg))
}

fn same(a: Anchor, b: Anchor) -> bool {
    match (a, b) {
        (Anchor::Fixed(x), Anchor::Fixed(y)) | (Anchor::Sampled(x), Anchor::Sampled(y)) => x == y,
        _ => false,
    }
}

fn anchor_point(anchor: Anchor, pos: &[Vec<f64>], internal: &[usize]) -> Vec<f64> {
    match anchor {
        Anchor::Fixed(v) => pos[v].clone(),
        Anchor::Sampled(j) => pos[internal[j]].clone(),
    }
}

fn distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::{bloch_wigner, gamma};
    use crate::fixtures;

    fn cfg(samples: u64) -> SamplerConfig {
        SamplerConfig {
            samples,
            seed: 11,
            ..SamplerConfig::default()
        }
    }

    #[test]
    fn bubble_matches_closed_form() {
        let e = xspace_oracle(&fixtures::bubble(), Complex64::new(0.3, 2.0), &cfg(400_000)).unwrap();
        let exact = gamma(0.75).powi(2) * gamma(0.5) / (gamma(1.25).powi(2) * gamma(1.5));
        assert!((e.value - exact).abs() < 4.0 * e.stderr, "{e:?} vs {exact}");
    }

    #[test]
    fn g4_matches_bloch_wigner() {
        let e = xspace_oracle(&fixtures::g4(), Complex64::i(), &cfg(400_000)).unwrap();
        let exact = 2.0 * bloch_wigner(Complex64::i());
        assert!((e.value - exact).abs() < 4.0 * e.stderr, "{e:?} vs {exact}");
    }

    #[test]
    fn refusals() {
        assert!(matches!(
            xspace_oracle(&fixtures::g7(), Complex64::i(), &cfg(10)),
            Err(EvalError::Refused(_))
        ));
        let odd = fixtures::g4()
            .with_weights(int(5), vec![int(1), int(1), int(1)])
            .unwrap();
        assert!(matches!(
            xspace_oracle(&odd, Complex64::i(), &cfg(10)),
            Err(EvalError::Refused(_))
        ));
        let divergent = fixtures::g4()
            .with_weights(int(4), vec![int(2), int(1), int(1)])
            .unwrap();
        assert!(matches!(
            xspace_oracle(&divergent, Complex64::i(), &cfg(10)),
            Err(EvalError::Integrand(IntegrandError::Divergent(_)))
        ));
    }
}
