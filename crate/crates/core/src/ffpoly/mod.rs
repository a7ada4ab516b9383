//! Exact arithmetic layer: finite fields, dense/Laurent/multivariate
//! polynomials, window polynomials, divisibility, factorization, orders.
//!
//! - [`Field`], [`Fq`]: F_q with q = p^d <= 2^16, elements as canonical indices.
//! - [`DensePoly`]: F_q[T] with full ring operations.
//! - [`LaurentPoly`], [`laurent_divides`]: F_q[T, T^{-1}] and the pole-aware
//!   divisibility convention.
//! - [`MultiPoly`]: sparse F_q[T][X_1..X_M] with monomial specialization.
//! - [`gab_poly`]: the window polynomial (T^{ab}-1)/(T^a-1).
//! - [`factorize`], [`is_irreducible`], [`mult_order`]: factorization into
//!   monic irreducibles and multiplicative orders of T in residue rings.

mod dense;
mod factor;
mod field;
mod laurent;
mod multi;

pub use dense::{gab_poly, DensePoly};
pub use factor::{factorize, is_irreducible, mult_order, Factorization};
pub use field::{Field, Fq, MAX_ORDER};
pub use laurent::{laurent_divides, LaurentPoly};
pub use multi::{system_shape, MultiPoly};
