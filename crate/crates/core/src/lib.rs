//! Exact machinery for monomial points on affine varieties over rational
//! function fields F_q(T).
//!
//! A monomial point substitutes a power of T for every variable:
//! X_i = T^{e_i} with integer exponents e = (e_1, ..., e_M). The crate turns
//! questions about such points into integer linear algebra and finite
//! residue computations, all exact:
//!
//! - [`ffpoly`]: arithmetic over F_q, dense and Laurent polynomials in T,
//!   sparse multivariate polynomials in T and X_1..X_M, window polynomials
//!   (T^{ab}-1)/(T^a-1), pole-aware divisibility, factorization, and
//!   multiplicative orders in residue rings.
//! - [`zsolve`]: integer linear systems A·E = b; a quasi-diagonal normal
//!   form with explicit transformation records, congruence-to-exact solution
//!   lifting, and full solution sets as lattice cosets.
//! - [`partition`]: zero-sum partitions of a polynomial's term list and the
//!   equivalence between window divisibility and residue-homogeneous
//!   partition witnesses.
//! - [`lifting`]: the engine that recovers exact monomial solutions from
//!   divisibility data, enumerates all monomial points of a system, and
//!   linearizes systems through a monomial (Veronese) change of variables.
//! - [`adele`]: finite-level closure data; residue solutions modulo products
//!   of prime powers, projections of exact solution families, density
//!   (stabilization) checks, and iterated-Frobenius limits at a place.
//! - [`corpus`]: small bundled instances used by the test suite and the CLI.
//!
//! Everything is deterministic: no randomness outside fixed-seed internal
//! generators, no platform-dependent iteration orders.

// The integer and finite-field matrix kernels walk several arrays under one
// index; explicit index loops keep the row/column bookkeeping legible there.
#![allow(clippy::needless_range_loop)]

pub mod adele;
pub mod corpus;
mod error;
pub mod ffpoly;
pub mod lifting;
pub mod partition;
pub mod zsolve;

pub use error::{Error, Result};
