//! Finite-field hypergeometric functions with exact cyclotomic arithmetic.
//!
//! The crate builds `F_q` for odd prime powers `q`, evaluates Gauss and
//! Jacobi sums, the finite-field `2F1` and the pseudo-hypergeometric `F*`
//! exactly in `Q(zeta_{p(q-1)})` (or in double precision), and sweeps a
//! family of transformation identities over every admissible parameter
//! tuple. [`classical`] checks the companion polynomial identity over `Q`.

pub mod backend;
pub mod characters;
pub mod classical;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod hypergeometric;
pub mod input;
pub mod sums;
pub mod verify;
