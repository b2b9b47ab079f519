//! Classification verdicts and the routes that compute them.
//!
//! A [`Route`] turns a sign matrix into a [`Classification`]. Routes are
//! registered by name in a [`RouteRegistry`]; the default registry holds
//! the `matrix` route (rank and span tests on Δ) and the `reduction` route
//! (switching down to a normal form). Both must agree on every input, and
//! [`agreement_check`] runs all registered routes plus the twisted-algebra
//! oracle side by side.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oracle::{verify_against_classification, OracleReport};
use crate::reduction::{full_reduction, NStatus, ReductionError};
use crate::skewgraph::{Graph, SignMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    /// Relation `x_1^2 + ... + x_n^2`.
    #[serde(rename = "a1")]
    A1,
    /// Relation `x_1^2 + ... + x_{n-1}^2`; `x_n` is distinguished.
    #[serde(rename = "a-infinity")]
    AInfinity,
}

impl Variant {
    pub fn min_n(self) -> usize {
        match self {
            Variant::A1 => 1,
            Variant::AInfinity => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::A1 => "a1",
            Variant::AInfinity => "a-infinity",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKind {
    /// `D^b(mod k^{2^r})`
    SemisimplePower,
    /// `D^b(mod Λ^{2^{r-1}})`, Λ = k[a]/(a²)
    LambdaPower,
    /// `D^b(mod Γ^{2^r})`, Γ the two-vertex algebra with `ab = ba = 0`
    GammaPower,
}

impl CaseKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseKind::SemisimplePower => "semisimple_power",
            CaseKind::LambdaPower => "lambda_power",
            CaseKind::GammaPower => "gamma_power",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Self::SemisimplePower, Self::LambdaPower, Self::GammaPower]
            .into_iter()
            .find(|c| c.as_str() == s)
    }

    /// Exponent `e` with factor count `2^e`, or `None` when undefined (Λ with r = 0).
    pub fn factor_exponent(self, r: usize) -> Option<usize> {
        match self {
            CaseKind::SemisimplePower | CaseKind::GammaPower => Some(r),
            CaseKind::LambdaPower => r.checked_sub(1),
        }
    }

    fn base(self, notation: Notation) -> &'static str {
        match (self, notation) {
            (CaseKind::SemisimplePower, _) => "k",
            (CaseKind::LambdaPower, Notation::Ascii) => "Lambda",
            (CaseKind::LambdaPower, Notation::Unicode) => "Λ",
            (CaseKind::GammaPower, Notation::Ascii) => "Gamma",
            (CaseKind::GammaPower, Notation::Unicode) => "Γ",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CmType {
    /// Finitely many indecomposable non-projective graded MCM modules.
    Finite(BigUint),
    CountablyInfinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Notation {
    #[default]
    Ascii,
    Unicode,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Classification {
    pub variant: Variant,
    pub case_kind: CaseKind,
    /// Nullity of Δ_ε over F₂.
    pub r: usize,
    pub factor_count: BigUint,
    pub cm_type: CmType,
    pub isolated_singularity: bool,
}

fn pow2(e: usize) -> BigUint {
    BigUint::from(1u8) << e
}

impl Classification {
    /// Assembles a verdict from the case and `r`; everything else follows.
    pub fn new(variant: Variant, case_kind: CaseKind, r: usize) -> Result<Self, ClassifyError> {
        let exponent = case_kind
            .factor_exponent(r)
            .ok_or(ClassifyError::Inconsistent("lambda_power requires r >= 1"))?;
        let (cm_type, isolated_singularity) = match (variant, case_kind) {
            (Variant::A1, CaseKind::SemisimplePower) => (CmType::Finite(pow2(r)), true),
            (Variant::AInfinity, CaseKind::LambdaPower | CaseKind::GammaPower) => {
                (CmType::CountablyInfinite, false)
            }
            _ => {
                return Err(ClassifyError::Inconsistent(
                    "case kind does not fit the variant",
                ))
            }
        };
        Ok(Self {
            variant,
            case_kind,
            r,
            factor_count: pow2(exponent),
            cm_type,
            isolated_singularity,
        })
    }

    /// e.g. `D^b(mod Gamma^2)`; the exponent is omitted when the factor count is 1.
    pub fn category(&self, notation: Notation) -> String {
        let base = self.case_kind.base(notation);
        if self.factor_count == BigUint::from(1u8) {
            format!("D^b(mod {base})")
        } else {
            format!("D^b(mod {base}^{})", self.factor_count)
        }
    }

    /// Same case, `r`, and factor count.
    pub fn same_verdict(&self, other: &Classification) -> bool {
        self.variant == other.variant
            && self.case_kind == other.case_kind
            && self.r == other.r
            && self.factor_count == other.factor_count
    }

    pub fn to_json(&self) -> ClassificationJson {
        let (cm_type, indecomposables) = match &self.cm_type {
            CmType::Finite(count) => ("finite".to_string(), Some(count.to_string())),
            CmType::CountablyInfinite => ("countably_infinite".to_string(), None),
        };
        ClassificationJson {
            variant: self.variant,
            case: self.case_kind.as_str().to_string(),
            r: self.r,
            factor_count: self.factor_count.to_string(),
            category: self.category(Notation::Ascii),
            cm_type,
            indecomposables,
            isolated_singularity: self.isolated_singularity,
        }
    }
}

/// Wire form of a [`Classification`]. Counts are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationJson {
    pub variant: Variant,
    pub case: String,
    pub r: usize,
    pub factor_count: String,
    pub category: String,
    pub cm_type: String,
    pub indecomposables: Option<String>,
    pub isolated_singularity: bool,
}

impl ClassificationJson {
    /// Parses back into a [`Classification`], rejecting any field that does
    /// not follow from `variant`, `case` and `r`.
    pub fn validate(&self) -> Result<Classification, ClassifyError> {
        let case = CaseKind::parse(&self.case)
            .ok_or(ClassifyError::Inconsistent("unknown case string"))?;
        let c = Classification::new(self.variant, case, self.r)?;
        if c.to_json() != *self {
            return Err(ClassifyError::Inconsistent(
                "derived fields disagree with variant, case and r",
            ));
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("{variant} needs n >= {min} variables (got {n})")]
    TooFewVariables {
        variant: Variant,
        n: usize,
        min: usize,
    },
    #[error("route {route:?} does not handle the {variant} variant")]
    UnsupportedVariant {
        route: &'static str,
        variant: Variant,
    },
    #[error("unknown route {0:?}")]
    UnknownRoute(String),
    #[error("route {0:?} is already registered")]
    DuplicateRoute(&'static str),
    #[error("inconsistent classification: {0}")]
    Inconsistent(&'static str),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

fn require_n(eps: &SignMatrix, variant: Variant) -> Result<(), ClassifyError> {
    if eps.n() < variant.min_n() {
        return Err(ClassifyError::TooFewVariables {
            variant,
            n: eps.n(),
            min: variant.min_n(),
        });
    }
    Ok(())
}

/// Δ_ε, its nullity, and whether column n is spanned by the others.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaInvariants {
    pub nullity: usize,
    pub condition_l: bool,
}

pub fn delta_invariants(eps: &SignMatrix) -> DeltaInvariants {
    let delta = Graph::from_signs(eps).delta();
    DeltaInvariants {
        nullity: delta.nullity(),
        condition_l: delta
            .column_in_span(eps.n())
            .expect("column n exists")
            .is_some(),
    }
}

/// A∞ verdict from Δ_ε alone: r is its nullity; Λ-power when column n is
/// in the span of the other columns, Γ-power otherwise.
pub fn classify_a_infinity(eps: &SignMatrix) -> Result<Classification, ClassifyError> {
    require_n(eps, Variant::AInfinity)?;
    let inv = delta_invariants(eps);
    let case = if inv.condition_l {
        CaseKind::LambdaPower
    } else {
        CaseKind::GammaPower
    };
    Classification::new(Variant::AInfinity, case, inv.nullity)
}

/// A∞ verdict from the reduced normal form `G(α, β)`: r = β − 1; Λ-power
/// when vertex n ends isolated (2^{β−2} copies), Γ-power when it ends on an
/// isolated edge (2^{β−1} copies).
pub fn classify_a_infinity_via_reduction(
    eps: &SignMatrix,
) -> Result<Classification, ClassifyError> {
    require_n(eps, Variant::AInfinity)?;
    let report = full_reduction(eps)?;
    let beta = report.beta();
    let r = beta.checked_sub(1).ok_or(ClassifyError::Inconsistent(
        "normal form without isolated vertices",
    ))?;
    let case = match report.n_status {
        NStatus::IsolatedVertex => CaseKind::LambdaPower,
        NStatus::IsolatedEdgeEndpoint { .. } => CaseKind::GammaPower,
    };
    Classification::new(Variant::AInfinity, case, r)
}

/// A₁ verdict: `D^b(mod k^{2^r})` with r the nullity of Δ_ε.
pub fn classify_a1(eps: &SignMatrix) -> Result<Classification, ClassifyError> {
    require_n(eps, Variant::A1)?;
    Classification::new(
        Variant::A1,
        CaseKind::SemisimplePower,
        delta_invariants(eps).nullity,
    )
}

pub fn classify(eps: &SignMatrix, variant: Variant) -> Result<Classification, ClassifyError> {
    match variant {
        Variant::A1 => classify_a1(eps),
        Variant::AInfinity => classify_a_infinity(eps),
    }
}

/// One way of computing a [`Classification`].
pub trait Route: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn supports(&self, variant: Variant) -> bool;
    fn classify(&self, eps: &SignMatrix, variant: Variant)
        -> Result<Classification, ClassifyError>;
}

/// Rank and span tests on Δ_ε.
#[derive(Debug, Default, Clone, Copy)]
pub struct MatrixRoute;

impl Route for MatrixRoute {
    fn name(&self) -> &'static str {
        "matrix"
    }

    fn summary(&self) -> &'static str {
        "nullity of Delta and span test on column n"
    }

    fn supports(&self, _variant: Variant) -> bool {
        true
    }

    fn classify(
        &self,
        eps: &SignMatrix,
        variant: Variant,
    ) -> Result<Classification, ClassifyError> {
        classify(eps, variant)
    }
}

/// Switching and relative switching down to `G(α, β)`.
#[derive(Debug, Default, Clone, Copy)]
pub struct ReductionRoute;

impl Route for ReductionRoute {
    fn name(&self) -> &'static str {
        "reduction"
    }

    fn summary(&self) -> &'static str {
        "reduce the graph to isolated edges and points, read off beta and vertex n"
    }

    fn supports(&self, variant: Variant) -> bool {
        variant == Variant::AInfinity
    }

    fn classify(
        &self,
        eps: &SignMatrix,
        variant: Variant,
    ) -> Result<Classification, ClassifyError> {
        if !self.supports(variant) {
            return Err(ClassifyError::UnsupportedVariant {
                route: self.name(),
                variant,
            });
        }
        classify_a_infinity_via_reduction(eps)
    }
}

/// Routes by name, in registration order.
pub struct RouteRegistry {
    routes: Vec<Box<dyn Route>>,
}

impl RouteRegistry {
    pub fn empty() -> Self {
        Self { routes: Vec::new() }
    }

    pub fn register(&mut self, route: Box<dyn Route>) -> Result<(), ClassifyError> {
        if self.get(route.name()).is_some() {
            return Err(ClassifyError::DuplicateRoute(route.name()));
        }
        self.routes.push(route);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&dyn Route> {
        self.routes
            .iter()
            .find(|r| r.name() == name)
            .map(|r| r.as_ref())
    }

    pub fn require(&self, name: &str) -> Result<&dyn Route, ClassifyError> {
        self.get(name)
            .ok_or_else(|| ClassifyError::UnknownRoute(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.routes.iter().map(|r| r.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Route> {
        self.routes.iter().map(|r| r.as_ref())
    }

    pub fn for_variant(&self, variant: Variant) -> impl Iterator<Item = &dyn Route> {
        self.iter().filter(move |r| r.supports(variant))
    }
}

impl Default for RouteRegistry {
    fn default() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(MatrixRoute)).expect("fresh registry");
        reg.register(Box::new(ReductionRoute))
            .expect("fresh registry");
        reg
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteVerdict {
    pub route: String,
    pub classification: Option<ClassificationJson>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub n: usize,
    pub variant: Variant,
    pub routes: Vec<RouteVerdict>,
    pub oracle: Option<OracleReport>,
    pub agree: bool,
    pub failures: Vec<String>,
}

/// Runs every registered route that supports `variant`, and optionally the
/// oracle against the first successful verdict. Disagreements land in
/// `failures`; this never panics on a valid sign matrix.
pub fn agreement_check_with(
    registry: &RouteRegistry,
    eps: &SignMatrix,
    variant: Variant,
    with_oracle: bool,
) -> AgreementReport {
    let mut failures = Vec::new();
    let mut routes = Vec::new();
    let mut verdicts: Vec<(&'static str, Classification)> = Vec::new();
    for route in registry.for_variant(variant) {
        match route.classify(eps, variant) {
            Ok(c) => {
                routes.push(RouteVerdict {
                    route: route.name().to_string(),
                    classification: Some(c.to_json()),
                    error: None,
                });
                verdicts.push((route.name(), c));
            }
            Err(e) => {
                failures.push(format!("route {}: {e}", route.name()));
                routes.push(RouteVerdict {
                    route: route.name().to_string(),
                    classification: None,
                    error: Some(e.to_string()),
                });
            }
        }
    }
    if let Some((first_name, first)) = verdicts.first() {
        for (name, c) in &verdicts[1..] {
            if !c.same_verdict(first) {
                failures.push(format!(
                    "route {name} gives {} r={} while {first_name} gives {} r={}",
                    c.category(Notation::Ascii),
                    c.r,
                    first.category(Notation::Ascii),
                    first.r
                ));
            }
        }
    } else if failures.is_empty() {
        failures.push(format!("no registered route handles {variant}"));
    }
    let oracle = match (with_oracle, verdicts.first()) {
        (true, Some((_, c))) => {
            let report = verify_against_classification(eps, c);
            failures.extend(report.failures.iter().map(|f| format!("oracle: {f}")));
            Some(report)
        }
        _ => None,
    };
    AgreementReport {
        n: eps.n(),
        variant,
        routes,
        oracle,
        agree: failures.is_empty(),
        failures,
    }
}

/// [`agreement_check_with`] on the default registry, A∞ variant, oracle on.
pub fn agreement_check(eps: &SignMatrix) -> AgreementReport {
    agreement_check_with(&RouteRegistry::default(), eps, Variant::AInfinity, true)
}
