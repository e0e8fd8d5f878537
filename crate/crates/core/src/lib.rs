//! Number-theoretic machinery for deciding whether a prime `p` is
//! *non-trivial* for an imaginary quadratic field `K = Q(sqrt(-d))`, i.e.
//! whether the cyclotomic Iwasawa invariant satisfies `lambda_p(K) > 1`.
//!
//! The same question is answered by several independent routes, and most of
//! this crate exists so that the routes can be run against each other:
//!
//! - [`gaussfact`]: Gauss factorials and 1-exceptional primes (direct
//!   products, Fermat-quotient sums, exact Bernoulli values).
//! - [`jacobi`]: Jacobi sums modulo `p^2` through the Teichmüller character,
//!   plus a Cornacchia/Gold oracle for class-number-one fields.
//! - [`specialnums`]: Bernoulli, Euler and Glaisher numbers, exact and
//!   modulo `p^2`.
//! - [`quadfields`]: field descriptors, characters and class numbers.
//! - [`pell`]: primes of the form `(gamma^q + gamma^-q)/4`, `gamma = 2 + sqrt 3`.
//! - [`modmath`]: residues modulo prime powers, quotients, sieving and
//!   probable-prime tests.
//! - [`verify`]: the cross-module invariant suite.
//!
//! Residue arithmetic is generic over the machine word ([`modmath::ModWord`])
//! and the special-number recurrences are generic over the coefficient ring
//! ([`modmath::Scalar`]); the aliases below fix the concrete types used
//! everywhere else.

pub mod error;
pub mod gaussfact;
pub mod jacobi;
pub mod modmath;
pub mod pell;
pub mod quadfields;
pub mod scan;
pub mod specialnums;
pub mod verify;

pub use error::{Error, Result};

/// Residue modulo a prime power held in a `u64` (products through `u128`).
pub type Residue = modmath::ResidueOf<u64>;
/// Residue with a 32-bit word, for moduli below `2^32`.
pub type Residue32 = modmath::ResidueOf<u32>;
/// Prime-power modulus for [`Residue`].
pub type PrimePower = modmath::PrimePowerOf<u64>;
/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type ExactRational = num_rational::BigRational;
/// Arbitrary-precision signed integer.
pub type ExactInt = num_bigint::BigInt;
