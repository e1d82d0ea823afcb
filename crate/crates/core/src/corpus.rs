//! Seeded random graphs for property tests and the acceptance suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convergence::check_convergence;
use crate::graph::{FeynmanGraph, GraphDescription, THREE_POINT_LABELS};
use crate::rational::{int, ratio, Rational};

#[derive(Clone, Debug)]
pub struct CorpusOptions {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub min_external: usize,
    pub max_external: usize,
    pub allow_parallel: bool,
    /// Candidate edge weights, drawn uniformly.
    pub weights: Vec<Rational>,
    pub dim: Rational,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions {
            max_vertices: 8,
            max_edges: 12,
            min_external: 1,
            max_external: 3,
            allow_parallel: true,
            weights: vec![int(1)],
            dim: int(4),
        }
    }
}

/// A connected graph: a random spanning tree plus random extra edges.
pub fn random_graph(rng: &mut impl Rng, opts: &CorpusOptions) -> FeynmanGraph {
    let n_ext = rng.random_range(opts.min_external..=opts.max_external);
    let n_vertices = rng.random_range(n_ext.max(2)..=opts.max_vertices);
    let labels: Vec<String> = (0..n_vertices)
        .map(|v| match v {
            v if v < n_ext => THREE_POINT_LABELS[v].to_string(),
            v => format!("v{}", v - n_ext + 1),
        })
        .collect();
    let mut desc = GraphDescription::new(opts.dim.clone());
    for (v, label) in labels.iter().enumerate() {
        desc = if v < n_ext {
            desc.external(label)
        } else {
            desc.internal(label)
        };
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut order: Vec<usize> = (0..n_vertices).collect();
    for k in (1..n_vertices).rev() {
        order.swap(k, rng.random_range(0..=k));
    }
    for k in 1..n_vertices {
        let parent = order[rng.random_range(0..k)];
        pairs.push((parent, order[k]));
    }
    let max_edges = opts.max_edges.max(n_vertices - 1);
    let extra = rng.random_range(0..=max_edges - (n_vertices - 1));
    let mut attempts = 0;
    while pairs.len() < n_vertices - 1 + extra && attempts < 100 {
        attempts += 1;
        let u = rng.random_range(0..n_vertices);
        let v = rng.random_range(0..n_vertices);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if !opts.allow_parallel && pairs.iter().any(|&(a, b)| (a.min(b), a.max(b)) == key) {
            continue;
        }
        pairs.push((u, v));
    }
    for (k, (u, v)) in pairs.into_iter().enumerate() {
        let w = opts.weights[rng.random_range(0..opts.weights.len())].clone();
        desc = desc.edge(&format!("e{}", k + 1), &labels[u], &labels[v], w);
    }
    desc.build().expect("generated graphs are valid")
}

/// `count` random connected graphs from a seed.
pub fn random_corpus(seed: u64, count: usize, opts: &CorpusOptions) -> Vec<FeynmanGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_graph(&mut rng, opts)).collect()
}

/// Random convergent graphs satisfying `keep`, by rejection.
pub fn convergent_corpus(
    seed: u64,
    count: usize,
    opts: &CorpusOptions,
    keep: impl Fn(&FeynmanGraph) -> bool,
) -> Vec<FeynmanGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut tries = 0usize;
    while out.len() < count {
        tries += 1;
        assert!(tries < 1_000_000, "no convergent graphs found with these options");
        let g = random_graph(&mut rng, opts);
        if keep(&g) && check_convergence(&g).is_convergent() {
            out.push(g);
        }
    }
    out
}

/// Small convergent three-point graphs in `d = 4` with weights in quarter steps.
pub fn three_point_options(max_vertices: usize, max_edges: usize) -> CorpusOptions {
    CorpusOptions {
        max_vertices,
        max_edges,
        min_external: 3,
        max_external: 3,
        allow_parallel: true,
        weights: (2..=6).map(|k| ratio(k, 4)).collect(),
        dim: int(4),
    }
}

/// Like [`three_point_options`] but with weights down to `-1`.
pub fn mixed_sign_options(max_vertices: usize, max_edges: usize) -> CorpusOptions {
    CorpusOptions {
        weights: vec![ratio(-1, 1), ratio(-1, 2), int(0), ratio(1, 2), int(1), ratio(3, 2)],
        ..three_point_options(max_vertices, max_edges)
    }
}
