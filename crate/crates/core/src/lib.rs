//! Exact polynomial reduction of hypergeometric terms modulo difference
//! spaces, integral telescoping certificates, and super-congruence checks
//! built on top of them.
//!
//! The crate is organised bottom-up:
//!
//! - [`polycore`]: exact rationals, dense univariate polynomials, power bases.
//! - [`diffspace`]: analysis of a ratio pair `(a, b)`, reduction modulo the
//!   difference space `S_{a,b}` and certificate verification.
//! - [`symred`]: symmetry- and integrality-preserving reductions for terms of
//!   the form `(±1)^k ((α)_k / k!)^r`.
//! - [`hyperseries`]: exact term values, partial sums and Euler numbers.
//! - [`congruence`]: residues modulo prime powers and the congruence checks.
//! - [`cli`]: the `hyperred` command line front end.

pub mod cli;
pub mod congruence;
pub mod diffspace;
mod error;
pub mod hyperseries;
pub mod polycore;
pub mod symred;

pub use error::{Error, Result};
pub use polycore::{Degree, Parity, Poly, PowerBasisPoly, Rat};
