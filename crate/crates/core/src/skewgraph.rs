//! Sign matrices, their commutation graphs, and the switching moves.
//!
//! Vertices are labeled `1..=n` in every public signature. Vertex `1` and
//! vertex `n` play distinguished roles downstream, so no relabeling ever
//! happens implicitly.

use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::f2linalg::F2Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignError {
    #[error("sign matrix is empty")]
    Empty,
    #[error("NotSquare at row {row}: {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("EntryNotPlusMinusOne at ({row},{col}): {value}")]
    EntryNotPlusMinusOne { row: usize, col: usize, value: i64 },
    #[error("DiagonalNotOne at ({index},{index})")]
    DiagonalNotOne { index: usize },
    #[error("NotSymmetric at ({row},{col})")]
    NotSymmetric { row: usize, col: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph needs at least one vertex")]
    NoVertices,
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {vertex}")]
    Loop { vertex: usize },
    #[error("relative switching needs distinct vertices (got {vertex} twice)")]
    SameVertex { vertex: usize },
    #[error("normal form needs at least one vertex")]
    EmptyNormalForm,
    #[error("vertex {vertex} has degree {degree}; not a disjoint union of edges and points")]
    NotNormalForm { vertex: usize, degree: usize },
}

/// Symmetric `n x n` matrix of ±1 with unit diagonal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    n: usize,
    entries: Vec<i8>,
}

impl SignMatrix {
    /// Validates a raw integer matrix. Checks run in the order: shape,
    /// entry values, diagonal, symmetry, and report the first offending
    /// position (1-based, row-major) of the first failing check.
    pub fn validate(raw: &[Vec<i64>]) -> Result<Self, SignError> {
        let n = raw.len();
        if n == 0 {
            return Err(SignError::Empty);
        }
        for (i, row) in raw.iter().enumerate() {
            if row.len() != n {
                return Err(SignError::NotSquare {
                    row: i + 1,
                    len: row.len(),
                    expected: n,
                });
            }
        }
        for (i, row) in raw.iter().enumerate() {
            for (j, &value) in row.iter().enumerate() {
                if value != 1 && value != -1 {
                    return Err(SignError::EntryNotPlusMinusOne {
                        row: i + 1,
                        col: j + 1,
                        value,
                    });
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| raw[i][i] != 1) {
            return Err(SignError::DiagonalNotOne { index: i + 1 });
        }
        let mut pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        if let Some((i, j)) = pairs.find(|&(i, j)| raw[i][j] != raw[j][i]) {
            return Err(SignError::NotSymmetric {
                row: i + 1,
                col: j + 1,
            });
        }
        let entries = raw.iter().flatten().map(|&v| v as i8).collect();
        Ok(Self { n, entries })
    }

    /// All variables pairwise commuting.
    pub fn commutative(n: usize) -> Result<Self, SignError> {
        if n == 0 {
            return Err(SignError::Empty);
        }
        Ok(Self {
            n,
            entries: vec![1; n * n],
        })
    }

    /// All distinct variables pairwise anticommuting.
    pub fn anticommutative(n: usize) -> Result<Self, SignError> {
        let mut eps = Self::commutative(n)?;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    eps.entries[i * n + j] = -1;
                }
            }
        }
        Ok(eps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `ε_{ij}` for 1-based `i`, `j`. Panics when out of range.
    pub fn get(&self, i: usize, j: usize) -> i8 {
        assert!(
            (1..=self.n).contains(&i) && (1..=self.n).contains(&j),
            "sign index ({i},{j}) out of range 1..={}",
            self.n
        );
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.entries
            .chunks(self.n)
            .map(|row| row.iter().map(|&v| v as i64).collect())
            .collect()
    }

    /// Relabels variables: new variable `i` is old variable `perm[i-1]`,
    /// so `ε'_{ij} = ε_{perm(i) perm(j)}`. `perm` must be a bijection on `1..=n`.
    pub fn relabel(&self, perm: &[usize]) -> Option<SignMatrix> {
        let n = self.n;
        if perm.len() != n {
            return None;
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p == 0 || p > n || std::mem::replace(&mut seen[p - 1], true) {
                return None;
            }
        }
        let mut entries = vec![1; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = self.get(perm[i], perm[j]);
            }
        }
        Some(SignMatrix { n, entries })
    }
}

impl fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// Simple undirected graph on vertices `1..=n`, one adjacency bitset per vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        Ok(Self {
            adj: vec![FixedBitSet::with_capacity(n); n],
        })
    }

    /// Builds a graph from 1-based edges. Repeated edges collapse; loops are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for &(a, b) in edges {
            g.check(a)?;
            g.check(b)?;
            if a == b {
                return Err(GraphError::Loop { vertex: a });
            }
            g.adj[a - 1].insert(b - 1);
            g.adj[b - 1].insert(a - 1);
        }
        Ok(g)
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for v in 0..n {
            g.adj[v].insert_range(..);
            g.adj[v].set(v, false);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    fn check(&self, v: usize) -> Result<usize, GraphError> {
        if v == 0 || v > self.n() {
            return Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            });
        }
        Ok(v - 1)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> Result<bool, GraphError> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        Ok(self.adj[a].contains(b))
    }

    /// Edges as sorted pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.adj.iter().enumerate() {
            out.extend(row.ones().filter(|&j| j > i).map(|j| (i + 1, j + 1)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    /// `N_G(v)`, increasing.
    pub fn neighborhood(&self, v: usize) -> Result<Vec<usize>, GraphError> {
        let v = self.check(v)?;
        Ok(self.adj[v].ones().map(|u| u + 1).collect())
    }

    pub fn degree(&self, v: usize) -> Result<usize, GraphError> {
        let v = self.check(v)?;
        Ok(self.adj[v].count_ones(..))
    }

    pub fn is_isolated_vertex(&self, v: usize) -> Result<bool, GraphError> {
        Ok(self.degree(v)? == 0)
    }

    /// `vw` is an edge with `N(v) = {w}` and `N(w) = {v}`.
    pub fn is_isolated_edge(&self, v: usize, w: usize) -> Result<bool, GraphError> {
        Ok(self.neighborhood(v)? == [w] && self.neighborhood(w)? == [v])
    }

    fn set_neighborhood(&mut self, v: usize, new: FixedBitSet) {
        for u in 0..self.n() {
            if u != v {
                self.adj[u].set(v, new.contains(u));
            }
        }
        self.adj[v] = new;
    }

    /// Switching at `v`: `v` is joined to exactly the vertices it was not
    /// joined to (itself excluded); edges away from `v` are untouched.
    pub fn switch(&self, v: usize) -> Result<Graph, GraphError> {
        let v = self.check(v)?;
        let mut next = self.adj[v].clone();
        next.toggle_range(..);
        next.set(v, false);
        let mut g = self.clone();
        g.set_neighborhood(v, next);
        Ok(g)
    }

    /// Relative switching of `v` with respect to `w`. The new neighbors of
    /// `v` are `{u ∈ N(w) \ N(v)} ∪ {u ∈ N(v) \ N(w)}` with `u ≠ v`; edges
    /// away from `v` are untouched. `w` itself is never in `N(w)`, so it ends
    /// up adjacent to `v` exactly when it already was.
    pub fn relative_switch(&self, v: usize, w: usize) -> Result<Graph, GraphError> {
        let (vi, wi) = (self.check(v)?, self.check(w)?);
        if vi == wi {
            return Err(GraphError::SameVertex { vertex: v });
        }
        let (nv, nw) = (&self.adj[vi], &self.adj[wi]);
        let mut next = FixedBitSet::with_capacity(self.n());
        next.extend(nw.difference(nv).filter(|&u| u != vi));
        next.extend(nv.difference(nw).filter(|&u| u != vi));
        let mut g = self.clone();
        g.set_neighborhood(vi, next);
        Ok(g)
    }

    /// Induced subgraph on vertices `1..=m`.
    pub fn prefix(&self, m: usize) -> Result<Graph, GraphError> {
        if m == 0 {
            return Err(GraphError::NoVertices);
        }
        self.check(m)?;
        let edges: Vec<_> = self.edges().into_iter().filter(|&(_, b)| b <= m).collect();
        Graph::from_edges(m, &edges)
    }

    /// Δ(G): the mod-2 adjacency matrix bordered by an all-ones last row and
    /// column with a zero corner; size `(n+1) x (n+1)`.
    pub fn delta(&self) -> F2Matrix {
        let n = self.n();
        let mut m = F2Matrix::zeros(n + 1, n + 1).expect("n >= 1");
        for (i, j) in self.edges() {
            m.set(i, j, true).expect("in range");
            m.set(j, i, true).expect("in range");
        }
        for i in 1..=n {
            m.set(i, n + 1, true).expect("in range");
            m.set(n + 1, i, true).expect("in range");
        }
        m
    }

    /// Commutation graph of `ε`: edge `ij` iff `ε_{ij} = +1`, `i ≠ j`.
    pub fn from_signs(eps: &SignMatrix) -> Graph {
        let n = eps.n();
        let mut g = Graph::empty(n).expect("sign matrices are non-empty");
        for i in 1..=n {
            for j in i + 1..=n {
                if eps.get(i, j) == 1 {
                    g.adj[i - 1].insert(j - 1);
                    g.adj[j - 1].insert(i - 1);
                }
            }
        }
        g
    }

    /// Inverse of [`Graph::from_signs`].
    pub fn to_signs(&self) -> SignMatrix {
        let n = self.n();
        let mut entries = vec![-1i8; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
            for j in self.adj[i].ones() {
                entries[i * n + j] = 1;
            }
        }
        SignMatrix { n, entries }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges())
    }
}

pub fn graph_from_signs(eps: &SignMatrix) -> Graph {
    Graph::from_signs(eps)
}

pub fn signs_from_graph(g: &Graph) -> SignMatrix {
    g.to_signs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexRole {
    Isolated,
    EdgeEndpoint { partner: usize },
}

/// A graph of maximum degree one: `alpha` isolated edges plus `beta` isolated vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormShape {
    pub alpha: usize,
    pub beta: usize,
    /// `roles[v-1]` is the role of vertex `v`.
    pub roles: Vec<VertexRole>,
}

impl NormalFormShape {
    pub fn role(&self, v: usize) -> Option<VertexRole> {
        v.checked_sub(1).and_then(|i| self.roles.get(i)).copied()
    }
}

/// Canonical `G(alpha, beta)`: edges `(2i-1, 2i)` for `i = 1..=alpha`, then
/// `beta` isolated vertices.
pub fn make_normal_form(alpha: usize, beta: usize) -> Result<Graph, GraphError> {
    if 2 * alpha + beta == 0 {
        return Err(GraphError::EmptyNormalForm);
    }
    let edges: Vec<_> = (1..=alpha).map(|i| (2 * i - 1, 2 * i)).collect();
    Graph::from_edges(2 * alpha + beta, &edges)
}

/// Recognizes a disjoint union of isolated edges and isolated vertices.
/// Fails with the first vertex of degree at least two.
pub fn recognize_normal_form(g: &Graph) -> Result<NormalFormShape, GraphError> {
    let mut roles = Vec::with_capacity(g.n());
    let (mut alpha, mut beta) = (0, 0);
    for v in 1..=g.n() {
        let nbrs = g.neighborhood(v)?;
        match nbrs.as_slice() {
            [] => {
                beta += 1;
                roles.push(VertexRole::Isolated);
            }
            [w] => {
                // Degree of the partner is checked when the scan reaches it.
                if *w > v {
                    alpha += 1;
                }
                roles.push(VertexRole::EdgeEndpoint { partner: *w });
            }
            more => {
                return Err(GraphError::NotNormalForm {
                    vertex: v,
                    degree: more.len(),
                })
            }
        }
    }
    Ok(NormalFormShape { alpha, beta, roles })
}
