//! Reduction of a commutation graph to a disjoint union of isolated edges
//! and isolated vertices.
//!
//! Phase one switches at every neighbor of vertex 1 so that vertex 1 becomes
//! isolated. Phase two proceeds by induction on the vertex count: once the
//! induced subgraph on `1..m-1` is in normal form, the edges at vertex `m`
//! are cleared by relative switchings in three batches, leaving `m` either
//! isolated or paired with one formerly isolated vertex. Every move is
//! recorded against the full vertex set so the trace replays on the
//! original graph.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::skewgraph::{
    recognize_normal_form, Graph, GraphError, NormalFormShape, SignMatrix, VertexRole,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("reduction needs at least 2 vertices (got {n})")]
    TooFewVertices { n: usize },
    #[error("vertex 1 is not isolated; run the switching phase first")]
    VertexOneNotIsolated,
    #[error("relative switch ({v} <- {w}) violates v in 2..={n}, w in 2..={max_w}", max_w = n - 1)]
    IllegalStep { v: usize, w: usize, n: usize },
    #[error(
        "induced subgraph on 1..={m} is not in normal form after clearing vertex {m}: {source}"
    )]
    NotReduced { m: usize, source: GraphError },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum StepKind {
    #[serde(rename = "switch")]
    Switch { v: usize },
    #[serde(rename = "rswitch")]
    RelativeSwitch { v: usize, w: usize },
}

impl StepKind {
    pub fn apply(&self, g: &Graph) -> Result<Graph, GraphError> {
        match *self {
            StepKind::Switch { v } => g.switch(v),
            StepKind::RelativeSwitch { v, w } => g.relative_switch(v, w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub kind: StepKind,
    pub graph_after: Graph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NStatus {
    IsolatedVertex,
    IsolatedEdgeEndpoint { partner: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub original: Graph,
    pub trace: Vec<ReductionStep>,
    pub final_graph: Graph,
    pub shape: NormalFormShape,
    pub n_status: NStatus,
}

fn push(trace: &mut Vec<ReductionStep>, g: &mut Graph, kind: StepKind) -> Result<(), GraphError> {
    *g = kind.apply(g)?;
    trace.push(ReductionStep {
        kind,
        graph_after: g.clone(),
    });
    Ok(())
}

/// Switches at each neighbor of vertex 1, in increasing order.
pub fn isolate_vertex_one(g: &Graph) -> (Graph, Vec<ReductionStep>) {
    let mut cur = g.clone();
    let mut trace = Vec::new();
    for u in g.neighborhood(1).expect("vertex 1 always exists") {
        push(&mut trace, &mut cur, StepKind::Switch { v: u }).expect("neighbor is in range");
    }
    (cur, trace)
}

/// Relative-switching phase. Requires vertex 1 isolated; returns the final
/// graph and the steps taken. Every step `v <- w` has `v` in `2..=n` and
/// `w` in `2..=n-1`, checked as it is emitted.
pub fn reduce_to_normal_form(g: &Graph) -> Result<(Graph, Vec<ReductionStep>), ReductionError> {
    let n = g.n();
    if n < 2 {
        return Err(ReductionError::TooFewVertices { n });
    }
    if !g.is_isolated_vertex(1)? {
        return Err(ReductionError::VertexOneNotIsolated);
    }
    let mut cur = g.clone();
    let mut trace = Vec::new();
    let mut rswitch = |cur: &mut Graph, v: usize, w: usize| -> Result<(), ReductionError> {
        if !(2..=n).contains(&v) || !(2..n).contains(&w) || v == w {
            return Err(ReductionError::IllegalStep { v, w, n });
        }
        debug_assert!(cur.is_isolated_vertex(1).unwrap_or(false));
        push(&mut trace, cur, StepKind::RelativeSwitch { v, w })?;
        Ok(())
    };

    // The induced subgraph on {1, 2} is empty because vertex 1 is isolated.
    for m in 3..=n {
        let below = recognize_normal_form(&cur.prefix(m - 1)?)
            .map_err(|source| ReductionError::NotReduced { m: m - 1, source })?;
        let nbrs: Vec<usize> = cur
            .neighborhood(m)?
            .into_iter()
            .filter(|&u| u < m)
            .collect();

        // Neighbors of m split by their role in the normal form below m:
        // edges with one endpoint joined to m, edges with both joined, and
        // isolated vertices joined to m.
        let mut single = Vec::new();
        let mut pairs = Vec::new();
        let mut points = Vec::new();
        for &u in &nbrs {
            match below.role(u).expect("u < m") {
                VertexRole::Isolated => points.push(u),
                VertexRole::EdgeEndpoint { partner } if nbrs.contains(&partner) => {
                    if u < partner {
                        pairs.push((u, partner));
                    }
                }
                VertexRole::EdgeEndpoint { partner } => single.push((u, partner)),
            }
        }

        // N(partner) restricted below m is {u}: toggles the edge m-u off.
        for &(_, partner) in &single {
            rswitch(&mut cur, m, partner)?;
        }
        // Larger endpoint first removes the smaller one, then vice versa.
        for &(a, b) in &pairs {
            rswitch(&mut cur, m, b)?;
            rswitch(&mut cur, m, a)?;
        }
        // Each further isolated neighbor shares N = {m} with the first one.
        if let Some((&first, rest)) = points.split_first() {
            for &u in rest {
                rswitch(&mut cur, u, first)?;
            }
        }
    }
    recognize_normal_form(&cur).map_err(|source| ReductionError::NotReduced { m: n, source })?;
    Ok((cur, trace))
}

/// Both phases on the commutation graph of `eps`.
pub fn full_reduction(eps: &SignMatrix) -> Result<ReductionReport, ReductionError> {
    reduce_graph(&Graph::from_signs(eps))
}

pub fn reduce_graph(original: &Graph) -> Result<ReductionReport, ReductionError> {
    let n = original.n();
    if n < 2 {
        return Err(ReductionError::TooFewVertices { n });
    }
    let (isolated, mut trace) = isolate_vertex_one(original);
    let (final_graph, rest) = reduce_to_normal_form(&isolated)?;
    trace.extend(rest);
    let shape = recognize_normal_form(&final_graph)
        .map_err(|source| ReductionError::NotReduced { m: n, source })?;
    let n_status = match shape.role(n).expect("n in range") {
        VertexRole::Isolated => NStatus::IsolatedVertex,
        VertexRole::EdgeEndpoint { partner } => NStatus::IsolatedEdgeEndpoint { partner },
    };
    Ok(ReductionReport {
        original: original.clone(),
        trace,
        final_graph,
        shape,
        n_status,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {index}: {kind:?} does not reproduce the recorded graph")]
    Mismatch { index: usize, kind: StepKind },
    #[error("step {index}: {kind:?} is not a legal move ({reason})")]
    Illegal {
        index: usize,
        kind: StepKind,
        reason: &'static str,
    },
    #[error("step {index}: nullity of Delta changed from {before} to {after}")]
    NullityChanged {
        index: usize,
        before: usize,
        after: usize,
    },
    #[error("step {index}: condition (L) changed from {before} to {after}")]
    ConditionLChanged {
        index: usize,
        before: bool,
        after: bool,
    },
    #[error("final graph disagrees with the last step")]
    FinalMismatch,
    #[error("final graph is not in normal form or shape is stale")]
    BadShape,
    #[error("vertex 1 is not isolated in the final graph")]
    VertexOneNotIsolated,
    #[error("beta - 1 = {beta_minus_one} but nullity of Delta is {nullity}")]
    BetaNullity {
        beta_minus_one: usize,
        nullity: usize,
    },
    #[error("n_status {recorded:?} disagrees with the final graph")]
    NStatus { recorded: NStatus },
    #[error("trace length {len} exceeds n^2 = {bound}")]
    TooLong { len: usize, bound: usize },
}

/// Condition (L) on Δ(G): column n lies in the span of the other columns.
pub fn condition_l(g: &Graph) -> bool {
    g.delta()
        .column_in_span(g.n())
        .expect("column n exists")
        .is_some()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplaySummary {
    pub steps: usize,
    pub nullity: usize,
    pub condition_l: bool,
}

impl ReductionReport {
    pub fn alpha(&self) -> usize {
        self.shape.alpha
    }

    pub fn beta(&self) -> usize {
        self.shape.beta
    }

    /// Replays the trace from `original`, checking each recorded graph, the
    /// side conditions of every relative switch, and that the nullity and
    /// condition-(L) status of Δ stay fixed at every step.
    pub fn replay(&self) -> Result<ReplaySummary, ReplayError> {
        let n = self.original.n();
        let start = self.original.delta();
        let nullity = start.nullity();
        let cond = condition_l(&self.original);
        let mut cur = self.original.clone();
        for (index, step) in self.trace.iter().enumerate() {
            let kind = step.kind;
            if let StepKind::RelativeSwitch { v, w } = kind {
                let reason = if !cur.is_isolated_vertex(1).unwrap_or(false) {
                    Some("vertex 1 not isolated")
                } else if v == 1 || v > n {
                    Some("v outside 2..=n")
                } else if w <= 1 || w >= n {
                    Some("w outside 2..=n-1")
                } else if v == w {
                    Some("v equals w")
                } else {
                    None
                };
                if let Some(reason) = reason {
                    return Err(ReplayError::Illegal {
                        index,
                        kind,
                        reason,
                    });
                }
            }
            let next = kind
                .apply(&cur)
                .map_err(|_| ReplayError::Mismatch { index, kind })?;
            if next != step.graph_after {
                return Err(ReplayError::Mismatch { index, kind });
            }
            let after = next.delta().nullity();
            if after != nullity {
                return Err(ReplayError::NullityChanged {
                    index,
                    before: nullity,
                    after,
                });
            }
            let after_l = condition_l(&next);
            if after_l != cond {
                return Err(ReplayError::ConditionLChanged {
                    index,
                    before: cond,
                    after: after_l,
                });
            }
            cur = next;
        }
        if cur != self.final_graph {
            return Err(ReplayError::FinalMismatch);
        }
        match recognize_normal_form(&cur) {
            Ok(shape) if shape == self.shape => {}
            _ => return Err(ReplayError::BadShape),
        }
        if !cur.is_isolated_vertex(1).unwrap_or(false) {
            return Err(ReplayError::VertexOneNotIsolated);
        }
        if self.shape.beta == 0 || self.shape.beta - 1 != nullity {
            return Err(ReplayError::BetaNullity {
                beta_minus_one: self.shape.beta.saturating_sub(1),
                nullity,
            });
        }
        let expected = match self.shape.role(n) {
            Some(VertexRole::Isolated) => NStatus::IsolatedVertex,
            Some(VertexRole::EdgeEndpoint { partner }) => NStatus::IsolatedEdgeEndpoint { partner },
            None => return Err(ReplayError::BadShape),
        };
        if expected != self.n_status {
            return Err(ReplayError::NStatus {
                recorded: self.n_status,
            });
        }
        if self.trace.len() > n * n {
            return Err(ReplayError::TooLong {
                len: self.trace.len(),
                bound: n * n,
            });
        }
        Ok(ReplaySummary {
            steps: self.trace.len(),
            nullity,
            condition_l: cond,
        })
    }

    pub fn to_json(&self) -> ReductionJson {
        let (n_status, n_partner) = match self.n_status {
            NStatus::IsolatedVertex => ("isolated_vertex".to_string(), None),
            NStatus::IsolatedEdgeEndpoint { partner } => {
                ("isolated_edge_endpoint".to_string(), Some(partner))
            }
        };
        ReductionJson {
            n: self.original.n(),
            original_edges: self.original.edges(),
            alpha: self.shape.alpha,
            beta: self.shape.beta,
            n_status,
            n_partner,
            final_edges: self.final_graph.edges(),
            trace: self.trace.iter().map(|s| s.kind).collect(),
        }
    }
}

/// Wire form of a [`ReductionReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionJson {
    pub n: usize,
    pub original_edges: Vec<(usize, usize)>,
    pub alpha: usize,
    pub beta: usize,
    pub n_status: String,
    pub n_partner: Option<usize>,
    pub final_edges: Vec<(usize, usize)>,
    pub trace: Vec<StepKind>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionJsonError {
    #[error("bad graph in report: {0}")]
    Graph(#[from] GraphError),
    #[error("unknown n_status {0:?}")]
    UnknownStatus(String),
    #[error("report fields disagree with the replayed trace")]
    Inconsistent,
    #[error(transparent)]
    Replay(#[from] ReplayError),
}

impl ReductionJson {
    /// Rebuilds the full report by replaying the recorded moves, then checks
    /// every summary field against the result.
    pub fn to_report(&self) -> Result<ReductionReport, ReductionJsonError> {
        let original = Graph::from_edges(self.n, &self.original_edges)?;
        let mut cur = original.clone();
        let mut trace = Vec::with_capacity(self.trace.len());
        for &kind in &self.trace {
            cur = kind.apply(&cur)?;
            trace.push(ReductionStep {
                kind,
                graph_after: cur.clone(),
            });
        }
        let n_status = match (self.n_status.as_str(), self.n_partner) {
            ("isolated_vertex", None) => NStatus::IsolatedVertex,
            ("isolated_edge_endpoint", Some(partner)) => NStatus::IsolatedEdgeEndpoint { partner },
            _ => return Err(ReductionJsonError::UnknownStatus(self.n_status.clone())),
        };
        let shape = recognize_normal_form(&cur)?;
        if cur.edges() != self.final_edges || shape.alpha != self.alpha || shape.beta != self.beta {
            return Err(ReductionJsonError::Inconsistent);
        }
        let report = ReductionReport {
            original,
            trace,
            final_graph: cur,
            shape,
            n_status,
        };
        report.replay()?;
        Ok(report)
    }
}
