//! Exact decision procedure for quasi-alternating Montesinos links.
//!
//! A Montesinos link `M(e; t1, ..., tp)` in standard form is classified
//! by four arithmetic conditions on `e` and the tangle fractions
//! ([`classify`]). Every verdict can be re-derived independently
//! ([`verify`]) from two obstructions computed on the negative definite
//! star-shaped plumbing bounded by the double branched cover:
//!
//! * Laufer's algorithm ([`laufer`]) decides whether the plumbing is a
//!   rational surface singularity, which for these graphs is equivalent
//!   to the double branched cover being an L-space;
//! * an exhaustive search for embeddings of the intersection lattice into
//!   the negative diagonal lattice ([`lattice`]) looks for an embedding
//!   whose transpose is surjective, which must exist whenever the
//!   reflected link bounds a negative definite filling with vanishing
//!   first homology.
//!
//! All arithmetic is exact. Rationals and determinants use arbitrary
//! precision integers; plumbing weights and embedding coordinates are
//! machine integers with overflow reported as an error.

pub mod arith;
pub mod classifier;
pub mod error;
pub mod laufer;
pub mod lattice;
pub mod matrix;
pub mod montesinos;
pub mod plumbing;

pub use num_bigint::BigInt;

pub use arith::{cf_eval, cf_expand, prefix_r, ContinuedFraction, Rational};
pub use classifier::{
    classify, enumerate_family, enumerate_family_with_arity, explain, explain_with, verify,
    verify_with, Branch, Condition, Evidence, Family, Report, Status, Verdict, VerifyOptions,
};
pub use error::{Error, Result};
pub use laufer::{is_lspace, laufer_run, LauferConfig, LauferResult, LauferVerdict, SelectionPolicy};
pub use lattice::{
    enumerate_embeddings, minor_check, qa_lattice_obstruction, rigidity_check, support_set,
    transpose_surjective, truncate_legs, Embedding, Embeddings, Obstruction, SearchOptions,
    SearchStats, SupportSet,
};
pub use matrix::IntegerMatrix;
pub use montesinos::{MontesinosLink, StandardForm};
pub use plumbing::{build_graph, PlumbingGraph};
