//! Exhaustive and sampled sweeps over sign matrices.
//!
//! The sign matrices on `n` variables are indexed by `0..2^{n(n-1)/2}`: bit
//! `k` of the index is the `k`-th pair `i < j` in row-major order, set for
//! `ε_ij = +1`. Sweeps fan out over a worker pool and merge into a tally
//! that does not depend on scheduling.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{agreement_check_with, classify, RouteRegistry, Variant};
use crate::skewgraph::{Graph, SignMatrix};

/// Largest `n` swept exhaustively without `force`.
pub const EXHAUSTIVE_LIMIT: usize = 8;
const KEPT_FAILURES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("exhaustive sweep at n = {n} means 2^{pairs} inputs; pass --force to run it anyway")]
    Infeasible { n: usize, pairs: usize },
    #[error("exhaustive sweeps are limited to n(n-1)/2 < 64 (n = {0})")]
    TooLarge(usize),
    #[error("{variant} needs n >= {min} (got {n})")]
    TooSmall {
        variant: Variant,
        n: usize,
        min: usize,
    },
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub fn sign_matrix_from_index(n: usize, index: u64) -> SignMatrix {
    let mut edges = Vec::new();
    let mut k = 0;
    for i in 1..=n {
        for j in i + 1..=n {
            if index >> k & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, &edges)
        .expect("valid edges")
        .to_signs()
}

pub fn random_sign_matrix<R: Rng>(n: usize, rng: &mut R) -> SignMatrix {
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.gen::<bool>() {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges)
        .expect("valid edges")
        .to_signs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    Exhaustive { force: bool },
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepConfig {
    pub variant: Variant,
    /// Run every route and the oracle, not just the matrix route.
    pub verify: bool,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepFailure {
    /// Index (exhaustive) or sample number (sampled).
    pub index: u64,
    pub signs: Vec<Vec<i64>>,
    pub failures: Vec<String>,
}

/// Per-`n` tally of a sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub n: usize,
    pub variant: Option<Variant>,
    pub mode: String,
    pub inputs: u64,
    pub by_case: BTreeMap<String, u64>,
    pub by_r: BTreeMap<usize, u64>,
    /// `(case, r) -> count`, keyed `"case/r"`.
    pub by_case_and_r: BTreeMap<String, u64>,
    pub verified: Option<u64>,
    pub failed: u64,
    pub failures: Vec<SweepFailure>,
}

#[derive(Default)]
struct Tally {
    inputs: u64,
    by_case: BTreeMap<String, u64>,
    by_r: BTreeMap<usize, u64>,
    by_case_and_r: BTreeMap<String, u64>,
    passed: u64,
    failed: u64,
    failures: Vec<SweepFailure>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.inputs += other.inputs;
        for (k, v) in other.by_case {
            *self.by_case.entry(k).or_default() += v;
        }
        for (k, v) in other.by_r {
            *self.by_r.entry(k).or_default() += v;
        }
        for (k, v) in other.by_case_and_r {
            *self.by_case_and_r.entry(k).or_default() += v;
        }
        self.passed += other.passed;
        self.failed += other.failed;
        self.failures.extend(other.failures);
        self.failures.sort_by_key(|f| f.index);
        self.failures.truncate(KEPT_FAILURES);
        self
    }
}

fn examine(registry: &RouteRegistry, cfg: &SweepConfig, index: u64, eps: &SignMatrix) -> Tally {
    let mut t = Tally {
        inputs: 1,
        ..Tally::default()
    };
    let mut problems = Vec::new();
    match classify(eps, cfg.variant) {
        Ok(c) => {
            let case = c.case_kind.as_str().to_string();
            *t.by_case_and_r
                .entry(format!("{case}/{}", c.r))
                .or_default() += 1;
            *t.by_case.entry(case).or_default() += 1;
            *t.by_r.entry(c.r).or_default() += 1;
        }
        Err(e) => problems.push(e.to_string()),
    }
    if cfg.verify {
        let report = agreement_check_with(registry, eps, cfg.variant, true);
        problems.extend(report.failures);
    }
    if problems.is_empty() {
        t.passed = 1;
    } else {
        t.failed = 1;
        t.failures.push(SweepFailure {
            index,
            signs: eps.to_rows(),
            failures: problems,
        });
    }
    t
}

/// The guards [`run_sweep`] applies, without doing any work; lets callers
/// reject a whole range of `n` up front.
pub fn check_sweep(n: usize, sweep: Sweep, variant: Variant) -> Result<(), HarnessError> {
    let min = variant.min_n();
    if n < min {
        return Err(HarnessError::TooSmall { variant, n, min });
    }
    if let Sweep::Exhaustive { force } = sweep {
        let pairs = pair_count(n);
        if pairs >= 64 {
            return Err(HarnessError::TooLarge(n));
        }
        if n > EXHAUSTIVE_LIMIT && !force {
            return Err(HarnessError::Infeasible { n, pairs });
        }
    }
    Ok(())
}

/// Sweeps all (or a seeded sample of) sign matrices on `n` variables.
pub fn run_sweep(
    registry: &RouteRegistry,
    n: usize,
    sweep: Sweep,
    cfg: SweepConfig,
) -> Result<SweepSummary, HarnessError> {
    check_sweep(n, sweep, cfg.variant)?;
    let pairs = pair_count(n);
    let work = || -> Tally {
        match sweep {
            Sweep::Exhaustive { .. } => (0..1u64 << pairs)
                .into_par_iter()
                .map(|i| examine(registry, &cfg, i, &sign_matrix_from_index(n, i)))
                .reduce(Tally::default, Tally::merge),
            Sweep::Sampled { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let inputs: Vec<SignMatrix> = (0..count)
                    .map(|_| random_sign_matrix(n, &mut rng))
                    .collect();
                inputs
                    .par_iter()
                    .enumerate()
                    .map(|(i, eps)| examine(registry, &cfg, i as u64, eps))
                    .reduce(Tally::default, Tally::merge)
            }
        }
    };
    let mode = match sweep {
        Sweep::Exhaustive { .. } => "exhaustive".to_string(),
        Sweep::Sampled { count, seed } => format!("sampled(count={count},seed={seed})"),
    };
    let tally = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| HarnessError::Pool(e.to_string()))?
            .install(work),
        None => work(),
    };
    Ok(SweepSummary {
        n,
        variant: Some(cfg.variant),
        mode,
        inputs: tally.inputs,
        by_case: tally.by_case,
        by_r: tally.by_r,
        by_case_and_r: tally.by_case_and_r,
        verified: cfg.verify.then_some(tally.passed),
        failed: tally.failed,
        failures: tally.failures,
    })
}
