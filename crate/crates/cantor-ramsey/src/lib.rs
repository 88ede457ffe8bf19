//! The oscillation invariant `i` on finite binary words, the onto Ramsey
//! coloring of the eventually-zero points of Cantor space it induces,
//! decidable evaluators for a family of concrete Borel relations,
//! enumerators for the code families of their antichain bases, and a
//! finite-depth Cantor-scheme embedding that preserves the coloring.
//!
//! Modules, bottom-up:
//!
//! - [`words`]: words, Q-words, `≤_l`, eventually periodic points.
//! - [`oscillation`]: the invariant `i`, its table, `osc`, and the checker
//!   for `i`-preserving substitution tables.
//! - [`coloring`]: the coloring `c`, witness pairs and cycles, `ℝ_β`, `R_D`.
//! - [`relations`]: relation specs, evaluation, profiles, acyclicity.
//! - [`antichains`]: code tuples, family enumeration, the catalog.
//! - [`embed`]: the embedding scheme and its verification.
//! - [`cli`]: the command-line front end.

pub mod antichains;
pub mod cli;
pub mod coloring;
pub mod embed;
pub mod error;
pub mod oscillation;
pub mod relations;
pub mod words;

pub use error::{Error, Result};
