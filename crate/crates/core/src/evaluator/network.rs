//! Floating-point evaluation of `Psi~` and `Phi~` by eliminating internal
//! vertices one at a time (star-mesh transform).
//!
//! With conductance `a_e` on every edge, eliminating an internal vertex `v`
//! of total conductance `C_v` multiplies `Psi~` by `C_v` and adds
//! `c_{va} c_{vb} / C_v` between its neighbours. After all internal vertices
//! are gone, the conductance between external `i` and `j` is
//! `Psi~^{ij,(k)} / Psi~`. Every step adds positive numbers, so no
//! cancellation occurs.

use std::collections::BTreeMap;

use crate::graph::FeynmanGraph;
use crate::poly::DistanceSymbol;

#[derive(Clone, Debug)]
pub struct Network {
    vertex_count: usize,
    ends: Vec<(usize, usize)>,
    internal: Vec<usize>,
    /// `(i, j, s_ij)` over pairs of external vertices.
    distances: Vec<(usize, usize, f64)>,
}

/// Reusable buffers for [`Network::log_polynomials`].
#[derive(Clone, Debug, Default)]
pub struct Scratch {
    conductance: Vec<f64>,
    alive: Vec<bool>,
}

impl Network {
    /// Missing distance pairs are taken as zero.
    pub fn new(g: &FeynmanGraph, s: &BTreeMap<DistanceSymbol, f64>) -> Self {
        let ext = g.external_vertices();
        let mut distances = Vec::new();
        for (k, &i) in ext.iter().enumerate() {
            for &j in &ext[k + 1..] {
                if let Some(&v) = s.get(&DistanceSymbol::new(i, j)) {
                    distances.push((i, j, v));
                }
            }
        }
        Network {
            vertex_count: g.vertex_count(),
            ends: g.edges().iter().map(|e| e.ends).collect(),
            internal: g.internal_vertices(),
            distances,
        }
    }

    /// `(ln Phi~, ln Psi~)` at conductances `c`.
    pub fn log_polynomials(&self, c: &[f64], scratch: &mut Scratch) -> (f64, f64) {
        let n = self.vertex_count;
        scratch.conductance.clear();
        scratch.conductance.resize(n * n, 0.0);
        scratch.alive.clear();
        scratch.alive.resize(n, true);
        let m = &mut scratch.conductance;
        for (&(u, v), &x) in self.ends.iter().zip(c) {
            m[u * n + v] += x;
            m[v * n + u] += x;
        }
        let mut log_psi = 0.0;
        for &v in &self.internal {
            scratch.alive[v] = false;
            let alive = &scratch.alive;
            let total: f64 = (0..n).filter(|&w| alive[w]).map(|w| m[v * n + w]).sum();
            log_psi += total.ln();
            for a in 0..n {
                let ca = m[v * n + a];
                if !alive[a] || ca == 0.0 {
                    continue;
                }
                for b in a + 1..n {
                    let cb = m[v * n + b];
                    if alive[b] && cb != 0.0 {
                        let add = ca * cb / total;
                        m[a * n + b] += add;
                        m[b * n + a] += add;
                    }
                }
            }
        }
        let ratio: f64 = self.distances.iter().map(|&(i, j, s)| s * m[i * n + j]).sum();
        (log_psi + ratio.ln(), log_psi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::forest::{phi_tilde, psi_tilde, three_point_distances};
    use num_complex::Complex64;

    #[test]
    fn matches_polynomials_on_fixtures() {
        for g in [
            fixtures::g4(),
            fixtures::h4(),
            fixtures::g7(),
            fixtures::h7(),
            fixtures::bubble(),
        ] {
            let s = three_point_distances(g.three_point_ids().unwrap(), Complex64::new(0.4, 1.3));
            let net = Network::new(&g, &s);
            let (phi, psi) = (phi_tilde(&g), psi_tilde(&g));
            let mut scratch = Scratch::default();
            for k in 0..5 {
                let alpha: Vec<f64> = (0..g.edge_count())
                    .map(|e| 0.1 + ((e * 7 + k * 3) % 11) as f64 * 0.37)
                    .collect();
                let (lphi, lpsi) = net.log_polynomials(&alpha, &mut scratch);
                let want_phi = phi.eval_f64(&alpha, &s).unwrap();
                let want_psi = psi.eval_f64(&alpha, &s).unwrap();
                assert!((lphi.exp() / want_phi - 1.0).abs() < 1e-12);
                assert!((lpsi.exp() / want_psi - 1.0).abs() < 1e-12);
            }
        }
    }
}
