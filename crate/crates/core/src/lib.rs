//! Exact computation with q-matroids over prime fields.
//!
//! The crate enumerates the subspace lattice of F_q^n in a fixed total order,
//! represents q-matroids by dense rank tables, builds one-dimensional
//! extensions from modular cut selectors, and classifies q-matroids up to
//! GL(n, q)-isomorphism via canonical (lexicographically minimal) encodings.

pub mod ambient;
pub mod brute;
pub mod classify;
pub mod encoding;
pub mod error;
pub mod extension;
pub mod field;
pub mod group;
pub mod qmatroid;
pub mod steiner;
pub mod subspace;

pub use ambient::{gaussian_binomial, grassmannian, new_points, AmbientSpace};
pub use brute::{brute_force_classify, brute_force_extensions};
pub use classify::{classify, classify_full, ClassTable, ClassifyOptions, Provenance};
pub use encoding::Encoding;
pub use error::{Error, Result};
pub use extension::{
    is_modular_cut, minimal_members, modular_cuts, selector_of, trivial_extension, Extender, ModularCut, Selector,
};
pub use field::PrimeField;
pub use group::{
    automorphism_order, canonical_check, canonical_form, gl_order, is_canonical, is_isomorphic, transform,
    CanonicalCheck, GroupElement,
};
pub use qmatroid::{FlatFamily, QMatroid};
pub use steiner::{
    fano_scan, intersection_points, is_q_steiner, matroid_from_steiner, residual_candidate, ResidualReport,
    SteinerSystem,
};
pub use subspace::Subspace;
