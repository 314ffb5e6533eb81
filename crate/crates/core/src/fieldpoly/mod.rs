//! Exact coefficient fields and sparse multivariate polynomials.
//!
//! Two fields are provided: prime fields `Z/pZ` for odd primes `p < 2^31`
//! and the rationals with arbitrary-precision integers. Monomials are kept in
//! graded reverse lexicographic order, which every Gröbner computation in the
//! crate relies on.

mod field;
mod poly;
mod squarefree;
mod univariate;

pub use field::{is_prime, parse_rational, Field, FieldSpec, PrimeField, Rationals};
pub use poly::{Monomial, MultiPoly};
pub use squarefree::squarefree_probabilistic;
pub use univariate::UniPoly;

/// Evaluates `f` at a point.
pub fn poly_eval<F: Field>(f: &MultiPoly<F>, point: &[F::Elem]) -> crate::Result<F::Elem> {
    f.eval(point)
}
