//! Exact arithmetic for the superelliptic quotients `y^{ℓ^N} = x^r (δ − x)^s`
//! of twisted Fermat curves `X^{ℓ^N} + Y^{ℓ^N} = δ`.
//!
//! The crate is organized bottom-up:
//! - [`params`]: curve parameter validation, per-level quotient data, CM types
//! - [`field`]: finite fields `F_{p^n}`, ℓ-power multiplicative characters, embeddings
//! - [`cyclotomic`]: exact arithmetic in `Z[ζ_{ℓ^m}]`, Jacobi sums, Galois action
//! - [`count`]: brute-force and character-sum point counts
//! - [`lpoly`]: L-polynomials at good primes, with a zeta-series oracle and Weil checks
//! - [`padic`]: fixed-precision ℓ-adic numbers, Teichmüller decomposition,
//!   Hilbert-symbol conductor exponents
//! - [`fleck`]: alternating binomial sums, the function `J(n, f)`, Hilbert-symbol
//!   residues, and the related congruence checkers
//! - [`rootnum`]: local/global root numbers, global conductors, and the
//!   numerical verifier for the residue conjecture

pub mod params;
pub mod field;
pub mod cyclotomic;
pub mod count;
pub mod lpoly;
pub mod padic;
pub mod fleck;
pub mod rootnum;

pub use params::CurveParams;
