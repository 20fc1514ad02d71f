//! Exact combinatorics of semi-infinite wedge modules over the integer
//! lattice: charged 01-patterns and their partial order, quantum Chevalley
//! actions with Laurent-polynomial coefficients, the category-O weight
//! dictionary with translation and truncation class formulas, the defect
//! statistic, and the tail-convention duality — all with exact integer
//! arithmetic and exhaustively verifiable on finite windows.
//!
//! Organization:
//!
//! * [`lattice`] — ε-basis weights, simple roots, dominance, and the
//!   level-dependent quadratic form.
//! * [`indexset`] — shapes, patterns (limit 01-matrices stored as finite
//!   exception data), windows, weights, blocks, the partial order,
//!   truncation ideals, and the defect.
//! * [`laurent`] — exact integer Laurent polynomials in one variable.
//! * [`fock`] — vectors over pattern bases, the quantum raising/lowering/
//!   Cartan actions, divided powers, vacuum reduction paths, the q = 1
//!   specialization, and the relation verifier.
//! * [`category_o`] — integral weights, parities, ρ, dominance cones, the
//!   weight↔pattern dictionary, Verma-class translation formulas, and
//!   level truncation.
//! * [`superdual`] — the tail-convention identification and its
//!   verification as a poset isomorphism and classical intertwiner.
//! * [`json`] — canonical (byte-stable) JSON encoding of all public types.
//! * [`report`], [`shard`], [`suite`] — verification plumbing: check
//!   reports, deterministic work sharding, and the composite suite.

pub mod category_o;
pub mod error;
pub mod fock;
pub mod indexset;
pub mod json;
pub mod lattice;
pub mod laurent;
pub mod report;
pub mod shard;
pub mod suite;
pub mod superdual;

pub use error::{Error, Result};
