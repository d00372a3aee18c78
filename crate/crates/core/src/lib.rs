//! Finite-dimensional hypercomplex number systems (HNS).
//!
//! An HNS is described by the structure constants `gamma[i][j][k]` of its
//! Cayley table: `e_i * e_j = sum_k gamma[i][j][k] e_k`. Numbers are kept in
//! list form (a vector of coefficients) and rendered to or parsed from the
//! natural form `a_1*e1 + ... + a_n*en`. Coefficients and structure
//! constants are exact [`Scalar`]s (rationals, multivariate polynomials and
//! ratios of polynomials) or binary64 floats for numeric work.
//!
//! Modules:
//!
//! * [`scalar`]: the commutative coefficient ring.
//! * [`algebra`]: [`AlgebraDef`], validation and Cayley table rendering.
//! * [`hcnumber`]: list and natural representations and conversions.
//! * [`ops`]: addition, multiplication, unit, conjugate, norm, division,
//!   square roots and quadratic equations.
//! * [`transforms`]: basis permutation and change, direct sums, doubling,
//!   tensor products and isomorphism equation systems.
//! * [`registry`]: the persistent named collection of algebras.
//! * [`rotation`]: quaternion rotation of 3-vectors.
//! * [`eval`]: the expression language used by the `hcns eval` command.

pub mod algebra;
pub mod error;
pub mod eval;
pub mod hcnumber;
pub mod linalg;
pub mod ops;
pub mod registry;
pub mod rotation;
pub mod scalar;
pub mod syntax;
pub mod transforms;

pub use algebra::{AlgebraDef, CayleyCell, Finding, Validation};
pub use error::{Error, Result};
pub use hcnumber::{HNumber, NaturalForm};
pub use ops::Side;
pub use registry::Registry;
pub use scalar::{Poly, Scalar, Symbol};
