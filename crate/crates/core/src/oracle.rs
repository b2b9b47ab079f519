//! The finite-dimensional algebra `C(A_ε)` as a sign-twisted monomial algebra.
//!
//! Generators `t_2, ..., t_n` satisfy `t_i t_j = c_ij t_j t_i` with
//! `c_ij = -ε_{1i} ε_{ij} ε_{1j}`, and `t_ℓ² = 1` for `ℓ < n` (the square
//! roots that normalize these squares are taken as already adjoined). For
//! the A∞ variant `t_n² = 0`; for A₁ `t_n² = 1`. The monomials `t_S`, `S ⊆
//! {2..n}`, form a basis, and every structure constant lies in {0, ±1}, so
//! dimension, radical and block count are pure sign combinatorics.
//!
//! Over an algebraically closed field of characteristic ≠ 2 the quotient by
//! the ideal `(t_n)` is a twisted group algebra of an elementary abelian
//! 2-group. It is split semisimple, and its number of blocks equals the
//! dimension of its center, which is spanned by the central monomials.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{CaseKind, Classification, Variant};
use crate::f2linalg::F2Matrix;
use crate::skewgraph::{Graph, SignMatrix};

/// Largest `n` representable: `n - 1 = 63` generator bits.
pub const MAX_N: usize = 64;
/// Largest generator count for which monomials are enumerated one by one.
pub const MAX_ENUMERATED_GENERATORS: usize = 22;
const EXHAUSTIVE_ASSOCIATIVITY_N: usize = 6;
const SAMPLED_TRIPLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("C(A) needs n >= 2 (got {0})")]
    TooFewVariables(usize),
    #[error("n = {0} exceeds the supported maximum {MAX_N}")]
    TooManyVariables(usize),
    #[error("the radical of the A1 algebra is zero; ask for the a-infinity variant")]
    WrongVariant,
    #[error("{count} monomials is too many to enumerate")]
    TooLargeToEnumerate { count: u128 },
    #[error("radical check failed: {0}")]
    RadicalCheck(String),
}

/// `t_S` for `S ⊆ {2..n}`; generator `t_i` is bit `i - 2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn generator(i: usize) -> Monomial {
        assert!((2..=MAX_N).contains(&i), "generator index {i} out of range");
        Monomial(1 << (i - 2))
    }

    pub fn from_vars(vars: &[usize]) -> Monomial {
        Monomial(
            vars.iter()
                .fold(0, |acc, &i| acc | Monomial::generator(i).0),
        )
    }

    /// Variable indices in increasing order.
    pub fn vars(self) -> Vec<usize> {
        (0..64)
            .filter(|b| self.0 >> b & 1 == 1)
            .map(|b| b + 2)
            .collect()
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & Monomial::generator(i).0 != 0
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{:?}", self.vars())
    }
}

/// `C(A_ε)` presented by generators and sign-twisted commutation relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedAlgebra {
    n: usize,
    variant: Variant,
    /// `anti[a]` has bit `b` set iff `t_{a+2}` and `t_{b+2}` anticommute.
    anti: Vec<u64>,
}

pub fn build_c_algebra(eps: &SignMatrix, variant: Variant) -> Result<TwistedAlgebra, OracleError> {
    TwistedAlgebra::new(eps, variant)
}

impl TwistedAlgebra {
    pub fn new(eps: &SignMatrix, variant: Variant) -> Result<Self, OracleError> {
        let n = eps.n();
        if n < 2 {
            return Err(OracleError::TooFewVariables(n));
        }
        if n > MAX_N {
            return Err(OracleError::TooManyVariables(n));
        }
        let mut anti = vec![0u64; n - 1];
        for i in 2..=n {
            for j in 2..=n {
                if i != j && -eps.get(1, i) * eps.get(i, j) * eps.get(1, j) == -1 {
                    anti[i - 2] |= 1 << (j - 2);
                }
            }
        }
        Ok(Self { n, variant, anti })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn generator_count(&self) -> usize {
        self.n - 1
    }

    /// `c_ij` with `t_i t_j = c_ij t_j t_i`, for distinct `i, j` in `2..=n`.
    pub fn commutation_sign(&self, i: usize, j: usize) -> i8 {
        assert!(i != j && (2..=self.n).contains(&i) && (2..=self.n).contains(&j));
        if self.anti[i - 2] >> (j - 2) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    /// `t_ℓ²` as a scalar.
    pub fn square(&self, l: usize) -> i8 {
        if l == self.n && self.variant == Variant::AInfinity {
            0
        } else {
            1
        }
    }

    pub fn dimension(&self) -> u64 {
        1u64 << self.generator_count()
    }

    fn full_mask(&self) -> u64 {
        u64::MAX >> (64 - self.generator_count())
    }

    /// `t_S · t_T = σ t_{S △ T}`, or `None` when the product vanishes.
    ///
    /// Writing both words in increasing order, each generator `b` of `T`
    /// moves left past the generators of `S` larger than `b`, picking up
    /// `c_{ab}` for each; a generator common to both then meets its twin
    /// and squares out.
    pub fn multiply(&self, s: Monomial, t: Monomial) -> Option<(i8, Monomial)> {
        let mut negative = false;
        let mut rest = t.0;
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let above = s.0 & !((2u64 << b) - 1);
            negative ^= (above & self.anti[b]).count_ones() & 1 == 1;
        }
        let common = s.0 & t.0;
        let mut c = common;
        while c != 0 {
            let b = c.trailing_zeros() as usize;
            c &= c - 1;
            match self.square(b + 2) {
                0 => return None,
                -1 => negative = !negative,
                _ => {}
            }
        }
        Some((if negative { -1 } else { 1 }, Monomial(s.0 ^ t.0)))
    }

    /// Checks `(ab)c = a(bc)` on every triple for `n ≤ 6`, on a seeded sample
    /// of triples otherwise, plus `t_∅` as a two-sided identity.
    pub fn associativity_selfcheck(&self, seed: u64) -> bool {
        let assoc = |a: Monomial, b: Monomial, c: Monomial| {
            let left = self
                .multiply(a, b)
                .and_then(|(s1, ab)| self.multiply(ab, c).map(|(s2, m)| (s1 * s2, m)));
            let right = self
                .multiply(b, c)
                .and_then(|(s1, bc)| self.multiply(a, bc).map(|(s2, m)| (s1 * s2, m)));
            left == right
        };
        let unit = |a: Monomial| {
            self.multiply(Monomial::ONE, a) == Some((1, a))
                && self.multiply(a, Monomial::ONE) == Some((1, a))
        };
        if self.n <= EXHAUSTIVE_ASSOCIATIVITY_N {
            let all: Vec<Monomial> = (0..self.dimension()).map(Monomial).collect();
            all.iter().all(|&a| unit(a))
                && all
                    .iter()
                    .all(|&a| all.iter().all(|&b| all.iter().all(|&c| assoc(a, b, c))))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mask = self.full_mask();
            (0..SAMPLED_TRIPLES).all(|_| {
                let mut pick = || Monomial(rng.gen::<u64>() & mask);
                let (a, b, c) = (pick(), pick(), pick());
                unit(a) && assoc(a, b, c)
            })
        }
    }

    fn nilpotent_bit(&self) -> u64 {
        1 << (self.n - 2)
    }

    /// Dimension of the radical: `2^{n-2}` for A∞ (monomials containing
    /// `t_n`), zero for A₁.
    pub fn radical_dimension(&self) -> u64 {
        match self.variant {
            Variant::AInfinity => self.dimension() / 2,
            Variant::A1 => 0,
        }
    }

    /// The monomials spanning the radical `(t_n)`. Verifies that the span is
    /// closed under multiplication by every generator on either side and
    /// squares to zero.
    pub fn radical_monomials(&self) -> Result<Vec<Monomial>, OracleError> {
        if self.variant != Variant::AInfinity {
            return Err(OracleError::WrongVariant);
        }
        self.guard_enumeration(self.generator_count())?;
        let nil = self.nilpotent_bit();
        let rad: Vec<Monomial> = (0..self.dimension())
            .filter(|m| m & nil != 0)
            .map(Monomial)
            .collect();
        for &m in &rad {
            for i in 2..=self.n {
                let g = Monomial::generator(i);
                for prod in [self.multiply(g, m), self.multiply(m, g)]
                    .into_iter()
                    .flatten()
                {
                    if prod.1 .0 & nil == 0 {
                        return Err(OracleError::RadicalCheck(format!(
                            "{g:?} * {m:?} leaves the ideal"
                        )));
                    }
                }
            }
        }
        // Any two radical monomials share t_n, so their product must vanish.
        // Checked against the multiplication table on a bounded slice.
        for &a in rad.iter().take(64) {
            for &b in rad.iter().take(64) {
                if self.multiply(a, b).is_some() {
                    return Err(OracleError::RadicalCheck(format!(
                        "{a:?} * {b:?} is nonzero"
                    )));
                }
            }
        }
        Ok(rad)
    }

    /// Monomials outside the radical square to ±1 and are therefore units.
    pub fn non_radical_monomials_invertible(&self) -> Result<bool, OracleError> {
        let gens = self.semisimple_generators();
        self.guard_enumeration(gens)?;
        Ok((0..1u64 << gens).all(|m| {
            matches!(
                self.multiply(Monomial(m), Monomial(m)),
                Some((_, Monomial(0)))
            )
        }))
    }

    /// Generator bits spanning the semisimple quotient: all of them for A₁,
    /// all but `t_n` for A∞.
    pub fn semisimple_generators(&self) -> usize {
        match self.variant {
            Variant::A1 => self.generator_count(),
            Variant::AInfinity => self.generator_count() - 1,
        }
    }

    fn guard_enumeration(&self, gens: usize) -> Result<(), OracleError> {
        if gens > MAX_ENUMERATED_GENERATORS {
            return Err(OracleError::TooLargeToEnumerate {
                count: 1u128 << gens,
            });
        }
        Ok(())
    }

    fn is_central_in_quotient(&self, m: Monomial, gens: usize) -> bool {
        (0..gens).all(|b| {
            let g = Monomial(1 << b);
            match (self.multiply(g, m), self.multiply(m, g)) {
                (Some(left), Some(right)) => left == right,
                (l, r) => l.is_none() && r.is_none(),
            }
        })
    }

    /// Number of blocks of the semisimple quotient, by counting central
    /// monomials one at a time.
    pub fn block_count(&self) -> Result<u64, OracleError> {
        let gens = self.semisimple_generators();
        self.guard_enumeration(gens)?;
        Ok((0..1u64 << gens)
            .filter(|&m| self.is_central_in_quotient(Monomial(m), gens))
            .count() as u64)
    }

    /// `log2` of the block count, from the kernel of the F₂ commutation
    /// form on the quotient's generators. Works for every supported `n`.
    pub fn block_count_log2(&self) -> usize {
        let gens = self.semisimple_generators();
        if gens == 0 {
            return 0;
        }
        let mut form = F2Matrix::zeros(gens, gens).expect("gens >= 1");
        for a in 0..gens {
            for b in 0..gens {
                if self.anti[a] >> b & 1 == 1 {
                    form.set(a + 1, b + 1, true).expect("in range");
                }
            }
        }
        form.nullity()
    }
}

/// Wire form of an oracle run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub dim: u64,
    pub radical_dim: u64,
    pub block_count: String,
    pub semisimple: bool,
    pub consistent: bool,
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
}

fn block_count_string(alg: &TwistedAlgebra) -> (usize, String) {
    let log2 = alg.block_count_log2();
    match alg.block_count() {
        Ok(count) => (log2, count.to_string()),
        Err(_) => (log2, (num_bigint::BigUint::from(1u8) << log2).to_string()),
    }
}

/// Checks a classification against `C(A_ε)`: dimension `2^{n-1}`; for A∞ a
/// nonzero radical and `2^{r-1}` blocks (Λ-power) or `2^{r+1}` blocks
/// (Γ-power); for A₁ zero radical and `2^r` blocks; and equal block counts
/// after switching `ε` at any single vertex.
pub fn verify_against_classification(eps: &SignMatrix, cls: &Classification) -> OracleReport {
    let mut failures = Vec::new();
    let mut warnings = Vec::new();
    let alg = match TwistedAlgebra::new(eps, cls.variant) {
        Ok(a) => a,
        Err(e) => {
            return OracleReport {
                dim: 0,
                radical_dim: 0,
                block_count: "0".into(),
                semisimple: false,
                consistent: false,
                failures: vec![e.to_string()],
                warnings,
            }
        }
    };
    let n = eps.n();
    let dim = alg.dimension();
    if dim != 1u64 << (n - 1) {
        failures.push(format!("dimension {dim} != 2^(n-1)"));
    }

    let radical_dim = match cls.variant {
        Variant::AInfinity => match alg.radical_monomials() {
            Ok(rad) => rad.len() as u64,
            Err(OracleError::TooLargeToEnumerate { .. }) => alg.radical_dimension(),
            Err(e) => {
                failures.push(e.to_string());
                alg.radical_dimension()
            }
        },
        Variant::A1 => 0,
    };
    if !matches!(
        alg.non_radical_monomials_invertible(),
        Ok(true) | Err(OracleError::TooLargeToEnumerate { .. })
    ) {
        failures.push("a monomial outside the radical is not a unit".into());
    }
    let semisimple = radical_dim == 0;

    let (log2, block_count) = block_count_string(&alg);
    if block_count != (num_bigint::BigUint::from(1u8) << log2).to_string() {
        failures.push(format!(
            "central-monomial count {block_count} disagrees with 2^{log2} from the commutation form"
        ));
    }

    let expected_log2 = match (cls.variant, cls.case_kind) {
        (Variant::A1, CaseKind::SemisimplePower) => Some(cls.r),
        (Variant::AInfinity, CaseKind::LambdaPower) => cls.r.checked_sub(1),
        (Variant::AInfinity, CaseKind::GammaPower) => Some(cls.r + 1),
        _ => None,
    };
    match expected_log2 {
        Some(e) if e == log2 => {}
        Some(e) => failures.push(format!(
            "block count 2^{log2} but {} with r={} needs 2^{e}",
            cls.case_kind.as_str(),
            cls.r
        )),
        None => failures.push("classification has an impossible case for its variant".into()),
    }
    match cls.variant {
        Variant::AInfinity if semisimple => {
            failures.push("A-infinity algebra came out semisimple".into())
        }
        Variant::AInfinity if radical_dim != 1u64 << (n - 2) => {
            failures.push(format!("radical dimension {radical_dim} != 2^(n-2)"))
        }
        Variant::A1 if !semisimple => failures.push("A1 algebra has a radical".into()),
        _ => {}
    }
    if cls.isolated_singularity != semisimple {
        failures.push(format!(
            "isolated_singularity={} but semisimple={semisimple}",
            cls.isolated_singularity
        ));
    }

    let g = Graph::from_signs(eps);
    for v in 1..=n {
        let switched = g.switch(v).expect("v in range").to_signs();
        let other = TwistedAlgebra::new(&switched, cls.variant).expect("same n");
        let other_log2 = other.block_count_log2();
        if other_log2 != log2 {
            failures.push(format!(
                "switching at {v} changes the block count from 2^{log2} to 2^{other_log2}"
            ));
        }
    }

    // Equal block sizes force (quotient generators - log2 blocks) even.
    if (alg.semisimple_generators() - log2) % 2 != 0 {
        warnings.push(format!(
            "{} quotient generators with 2^{log2} blocks cannot have equal square block sizes",
            alg.semisimple_generators()
        ));
    }

    OracleReport {
        dim,
        radical_dim,
        block_count,
        semisimple,
        consistent: failures.is_empty(),
        failures,
        warnings,
    }
}
