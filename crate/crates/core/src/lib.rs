//! Exact, desk-scale implementations of constructive reductions between
//! satisfiability, orthogonal-vectors, monotone-separation, threshold-circuit,
//! and algebraic clique-counting problems, together with the certificate
//! formats and verifiers that accompany them.
//!
//! Everything here is deterministic and exact: brute-force oracles sit next
//! to the structured algorithms they validate, field arithmetic is integer
//! arithmetic modulo a prime, and every wire format round-trips.

pub mod bits;
pub mod cert;
pub mod clique;
pub mod cnf;
pub mod error;
pub mod field;
pub mod gen;
pub mod matrix;
pub mod monotone;
pub mod ov;
pub mod regime;
pub mod tensor;
pub mod threshold;

pub use error::{Error, Result};
