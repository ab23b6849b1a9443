//! Computational laboratory for algebras of frequently hypercyclic vectors.
//!
//! The crate is organised by subsystem:
//!
//! - [`seqspace`]: finitely supported complex sequences, ℓ_p / c₀ / Taylor norms,
//!   Hadamard products, roots and the shift operators (λB, B_w, D, F).
//! - [`density`]: natural, logarithmic, log^m and dyadic densities on index sets,
//!   plus the linear-growth bound for sets of positive lower density.
//! - [`famgen`]: dyadic classes I(l,m), blocks B(l,r), the families A(l,m) and
//!   exact big-integer certification of their gap conditions.
//! - [`fhcbuild`]: the A-hypercyclic vector construction with orbit-error
//!   certificates, the necessity targets and the power-combination identity.
//! - [`nogo`]: obstruction checkers for powers of frequently hypercyclic vectors.
//! - [`algprod`]: φ-products, the commutative variant, the × product, monomial
//!   formula and algebraic-independence witnesses.

pub mod algprod;
pub mod bignat;
pub mod density;
pub mod error;
pub mod famgen;
pub mod fhcbuild;
pub mod logcomplex;
pub mod nogo;
pub mod pairing;
pub mod seqspace;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Crate version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
