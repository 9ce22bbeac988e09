//! qchar: an exact symbolic engine for characteristic classes of homological
//! vector fields on purely odd domains.
//!
//! The crate computes, over exact rationals:
//! - cohomology of a directed decorated graph complex, with evaluation of
//!   graphs against concrete homological fields (`graphs`),
//! - the transgression between odd-power words and powers of the curvature
//!   generator in a small cyclic differential algebra (`cyclic_words`),
//! - a seven-letter covariant bicomplex with contracting homotopies and
//!   solver-checked exact representatives (`bicomplex`),
//! - Chevalley-Eilenberg models of Lie algebras: adjoint-string cocycles,
//!   modular classes, exactness certificates, jet expansions (`qmanifolds`).
//!
//! The `qchar` binary exposes these as subcommands; see the README.

pub mod bicomplex;
pub mod cli;
pub mod cyclic_words;
pub mod error;
pub mod graphs;
pub mod linalg;
pub mod qmanifolds;
pub mod rational;
pub mod sampling;
pub mod superalg;
