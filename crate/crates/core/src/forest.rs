//! Spanning forest polynomials and the matrix-tree cross-check.

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::graph::FeynmanGraph;
use crate::poly::{DistancePoly, DistanceSymbol, Monomial, Poly};
use crate::rational::{int, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("a partition needs at least one block")]
    NoBlocks,
    #[error("empty block in partition")]
    EmptyBlock,
    #[error("vertex `{0}` appears in two blocks")]
    Overlap(String),
    #[error("unknown vertex label `{0}` in partition")]
    UnknownLabel(String),
    #[error("vertex `{0}` is not external")]
    NotExternal(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForestError {
    #[error("cremona transform needs a homogeneous polynomial")]
    NotHomogeneous,
    #[error("cremona transform expects degree {expected}, polynomial has degree {actual}")]
    DegreeMismatch { expected: u32, actual: u32 },
    #[error("cremona transform needs a multilinear polynomial")]
    NotMultilinear,
    #[error("graph disconnects external components: the forest polynomial vanishes")]
    Disconnected,
    #[error("vertex `{0}` is not internal")]
    NotInternal(String),
}

/// Disjoint blocks of vertices; block `t` must lie in tree `t` of a forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    blocks: Vec<Vec<usize>>,
}

impl VertexPartition {
    /// Blocks may contain any vertices (internal ones are needed for entries
    /// of the inverse Laplacian).
    pub fn new(g: &FeynmanGraph, blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        if blocks.is_empty() {
            return Err(PartitionError::NoBlocks);
        }
        let mut seen = vec![false; g.vertex_count()];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(PartitionError::EmptyBlock);
            }
            block.sort_unstable();
            for &v in block.iter() {
                if std::mem::replace(&mut seen[v], true) {
                    return Err(PartitionError::Overlap(g.vertices()[v].label.clone()));
                }
            }
        }
        Ok(VertexPartition { blocks })
    }

    /// A partition of external vertices only.
    pub fn external(g: &FeynmanGraph, blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        for &v in blocks.iter().flatten() {
            if !g.vertices()[v].external {
                return Err(PartitionError::NotExternal(g.vertices()[v].label.clone()));
            }
        }
        Self::new(g, blocks)
    }

    /// Every external vertex in its own block.
    pub fn singletons(g: &FeynmanGraph) -> Self {
        VertexPartition {
            blocks: g.external_vertices().into_iter().map(|v| vec![v]).collect(),
        }
    }

    /// `{i, j}` joined, all other external vertices as singletons.
    pub fn joined_pair(g: &FeynmanGraph, i: usize, j: usize) -> Self {
        let mut blocks = vec![vec![i.min(j), i.max(j)]];
        blocks.extend(
            g.external_vertices()
                .into_iter()
                .filter(|&k| k != i && k != j)
                .map(|k| vec![k]),
        );
        VertexPartition { blocks }
    }

    /// Parses `01,z` or `0,1,z`: blocks separated by commas. A block is a
    /// single label, `+`-separated labels, or a run of one-character labels.
    pub fn parse(g: &FeynmanGraph, text: &str) -> Result<Self, PartitionError> {
        let lookup = |label: &str| {
            g.vertex_by_label(label)
                .ok_or_else(|| PartitionError::UnknownLabel(label.to_string()))
        };
        let mut blocks = Vec::new();
        for block in text.split(',') {
            let block = block.trim();
            let members: Vec<usize> = if block.contains('+') {
                block.split('+').map(|l| lookup(l.trim())).collect::<Result<_, _>>()?
            } else if let Some(v) = g.vertex_by_label(block) {
                vec![v]
            } else {
                block
                    .chars()
                    .map(|c| lookup(&c.to_string()))
                    .collect::<Result<_, _>>()?
            };
            blocks.push(members);
        }
        Self::external(g, blocks)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn describe(&self, g: &FeynmanGraph) -> String {
        let short = g.vertices().iter().all(|v| v.label.chars().count() == 1);
        let sep = if short { "" } else { "+" };
        self.blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&v| g.vertices()[v].label.as_str())
                    .collect::<Vec<_>>()
                    .join(sep)
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Union-find with undo, for backtracking.
struct RollbackUnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    block: Vec<Option<usize>>,
    history: Vec<(usize, usize, Option<usize>)>,
}

impl RollbackUnionFind {
    fn new(n: usize, partition: &VertexPartition) -> Self {
        let mut block = vec![None; n];
        for (t, b) in partition.blocks().iter().enumerate() {
            for &v in b {
                block[v] = Some(t);
            }
        }
        RollbackUnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            block,
            history: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Joins the components of `a` and `b` unless that closes a cycle or
    /// puts two different blocks into one tree.
    fn try_union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if let (Some(x), Some(y)) = (self.block[ra], self.block[rb]) {
            if x != y {
                return false;
            }
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.history.push((rb, ra, self.block[ra]));
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        if self.block[ra].is_none() {
            self.block[ra] = self.block[rb];
        }
        true
    }

    fn rollback(&mut self) {
        let (child, root, old_block) = self.history.pop().expect("rollback without union");
        self.parent[child] = child;
        self.size[root] -= self.size[child];
        self.block[root] = old_block;
    }
}

/// All spanning forests compatible with a partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestFamily {
    pub partition: VertexPartition,
    /// Each forest as a sorted list of edge ids; the list is sorted.
    pub forests: Vec<Vec<usize>>,
}

/// Spanning forests with exactly one tree per block, block `t` inside tree
/// `t`, covering every vertex. Exhaustive backtracking over the edges.
pub fn spanning_forests(g: &FeynmanGraph, p: &VertexPartition) -> ForestFamily {
    let n_vertices = g.vertex_count();
    // n trees on V vertices have V - n edges; with that many edges and no
    // two blocks joined, every tree holds exactly one whole block
    let target = n_vertices - p.blocks().len();
    let mut uf = RollbackUnionFind::new(n_vertices, p);
    let mut forests = Vec::new();
    let mut chosen = Vec::new();
    backtrack(g, 0, target, &mut uf, &mut chosen, &mut forests);
    forests.sort();
    ForestFamily {
        partition: p.clone(),
        forests,
    }
}

fn backtrack(
    g: &FeynmanGraph,
    next: usize,
    target: usize,
    uf: &mut RollbackUnionFind,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if chosen.len() == target {
        out.push(chosen.clone());
        return;
    }
    let remaining = g.edge_count() - next;
    if remaining < target - chosen.len() {
        return;
    }
    let (u, v) = g.edges()[next].ends;
    if uf.try_union(u, v) {
        chosen.push(next);
        backtrack(g, next + 1, target, uf, chosen, out);
        chosen.pop();
        uf.rollback();
    }
    backtrack(g, next + 1, target, uf, chosen, out);
}

/// Sum over compatible spanning forests of the product of their edge variables.
pub fn dual_forest_polynomial(g: &FeynmanGraph, p: &VertexPartition) -> Poly {
    let family = spanning_forests(g, p);
    let mut out = Poly::zero(g.edge_count());
    for f in &family.forests {
        out = &out + &Poly::product_of(g.edge_count(), f);
    }
    out
}

/// The dual forest polynomial for the partition into external singletons.
pub fn psi_tilde(g: &FeynmanGraph) -> Poly {
    dual_forest_polynomial(g, &VertexPartition::singletons(g))
}

/// `sum_{i<j} s_ij * Psi~^{ij,(k)}` over pairs of external vertices, with
/// the distances kept symbolic.
pub fn phi_tilde(g: &FeynmanGraph) -> Poly {
    let ext = g.external_vertices();
    let mut out = Poly::zero(g.edge_count());
    for (a, &i) in ext.iter().enumerate() {
        for &j in &ext[a + 1..] {
            let forests = dual_forest_polynomial(g, &VertexPartition::joined_pair(g, i, j));
            out = &out + &forests.scale_by(&DistancePoly::symbol(DistanceSymbol::new(i, j)));
        }
    }
    out
}

/// Distances for the external points `x_0 = 0`, `x_1 = 1`, `x_z = z`:
/// `s_01 = 1`, `s_0z = |z|^2`, `s_1z = |1 - z|^2`.
pub fn three_point_distances(ids: [usize; 3], z: Complex64) -> BTreeMap<DistanceSymbol, f64> {
    let [v0, v1, vz] = ids;
    BTreeMap::from([
        (DistanceSymbol::new(v0, v1), 1.0),
        (DistanceSymbol::new(v0, vz), z.norm_sqr()),
        (DistanceSymbol::new(v1, vz), (Complex64::new(1.0, 0.0) - z).norm_sqr()),
    ])
}

/// Exact variant of [`three_point_distances`] for `z = re + i im` with rational parts.
pub fn three_point_distances_exact(
    ids: [usize; 3],
    re: &Rational,
    im: &Rational,
) -> BTreeMap<DistanceSymbol, Rational> {
    let [v0, v1, vz] = ids;
    let one_minus = int(1) - re;
    BTreeMap::from([
        (DistanceSymbol::new(v0, v1), int(1)),
        (DistanceSymbol::new(v0, vz), re * re + im * im),
        (DistanceSymbol::new(v1, vz), &one_minus * &one_minus + im * im),
    ])
}

/// `(prod_e a_e) * p(1/a)`: maps every exponent vector `m` to `1 - m`.
/// The input must be multilinear and homogeneous of degree `degree`.
pub fn cremona_transform(p: &Poly, degree: u32) -> Result<Poly, ForestError> {
    if p.is_zero() {
        return Ok(p.clone());
    }
    let actual = p
        .homogeneous_degree()
        .expect("nonzero")
        .ok_or(ForestError::NotHomogeneous)?;
    if actual != degree {
        return Err(ForestError::DegreeMismatch {
            expected: degree,
            actual,
        });
    }
    if !p.is_multilinear() {
        return Err(ForestError::NotMultilinear);
    }
    Ok(p.map_monomials(|m| Monomial::new(m.exponents().iter().map(|&k| 1 - k).collect())))
}

/// Determinant by fraction-free (Bareiss) elimination; every division is exact.
pub fn bareiss_determinant(mut m: Vec<Vec<Poly>>, nvars: usize) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(nvars);
    }
    let mut negate = false;
    let mut prev = Poly::one(nvars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Poly::zero(nvars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

/// `det(L^ii)`, which equals [`psi_tilde`] by the matrix-tree theorem.
pub fn psi_via_determinant(g: &FeynmanGraph) -> Poly {
    bareiss_determinant(g.laplace_matrix().internal_block(), g.edge_count())
}

/// Cofactor `C_{wv}` of `L^ii`, i.e. `det(L^ii) * (L^ii)^{-1}_{vw}`.
pub fn laplacian_cofactor(g: &FeynmanGraph, v: usize, w: usize) -> Poly {
    let internal = g.internal_vertices();
    let pv = internal.iter().position(|&x| x == v).expect("internal vertex");
    let pw = internal.iter().position(|&x| x == w).expect("internal vertex");
    let block = g.laplace_matrix().internal_block();
    let minor: Vec<Vec<Poly>> = block
        .iter()
        .enumerate()
        .filter(|&(r, _)| r != pw)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|&(c, _)| c != pv)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect();
    let det = bareiss_determinant(minor, g.edge_count());
    if (pv + pw) % 2 == 1 {
        -&det
    } else {
        det
    }
}

/// `(L^ii)^{-1}_{vw}` as `(numerator, denominator)` with denominator `Psi~`
/// and numerator the forest polynomial with `{v, w}` joined and the
/// external vertices as singletons.
pub fn laplacian_inverse_entry(g: &FeynmanGraph, v: usize, w: usize) -> Result<(Poly, Poly), ForestError> {
    for x in [v, w] {
        if g.vertices()[x].external {
            return Err(ForestError::NotInternal(g.vertices()[x].label.clone()));
        }
    }
    let psi = psi_tilde(g);
    if psi.is_zero() {
        return Err(ForestError::Disconnected);
    }
    let mut blocks = vec![if v == w { vec![v] } else { vec![v, w] }];
    blocks.extend(g.external_vertices().into_iter().map(|k| vec![k]));
    let p = VertexPartition::new(g, blocks).expect("distinct vertices");
    Ok((dual_forest_polynomial(g, &p), psi))
}
