//! Stable categories of graded maximal Cohen-Macaulay modules over skew
//! graded (A₁) and (A∞) hypersurface singularities, computed from the sign
//! matrix ε of the underlying (±1)-skew polynomial ring.
//!
//! Three independent routes produce or check the same answer:
//!
//! * [`classify`]: the nullity `r` of the bordered adjacency matrix Δ_ε over
//!   F₂, and whether its column `n` is spanned by the others;
//! * [`reduction`]: switching and relative switching of the commutation
//!   graph down to isolated edges and isolated vertices;
//! * [`oracle`]: the algebra `C(A_ε)` built from generators and relations,
//!   with its radical and block count read off combinatorially.
//!
//! ```
//! use skewcm::classify::{classify_a_infinity, CaseKind, Notation};
//! use skewcm::skewgraph::SignMatrix;
//!
//! let eps = SignMatrix::validate(&[
//!     vec![1, 1, -1, 1],
//!     vec![1, 1, 1, 1],
//!     vec![-1, 1, 1, -1],
//!     vec![1, 1, -1, 1],
//! ])
//! .unwrap();
//! let c = classify_a_infinity(&eps).unwrap();
//! assert_eq!(c.case_kind, CaseKind::GammaPower);
//! assert_eq!(c.category(Notation::Ascii), "D^b(mod Gamma^2)");
//! ```

pub mod classify;
pub mod f2linalg;
pub mod harness;
pub mod io;
pub mod oracle;
pub mod reduction;
pub mod skewgraph;

pub use classify::{Classification, Route, RouteRegistry, Variant};
pub use f2linalg::F2Matrix;
pub use skewgraph::{Graph, SignMatrix};
