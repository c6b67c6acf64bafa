//! Symbolic engine for a deformed boson algebra with lattice-discretized
//! momentum labels and for its inhomogeneous invariance quantum group.
//!
//! The crate builds two finitely-presented *-algebras for a lattice of `n`
//! momentum points:
//!
//! - the oscillator algebra generated by `a(p)`, `ad(p)` with the deformed
//!   exchange relation `a(p)*ad(p') = g(p,p')*ad(p')*a(p) + delta(p,p')`,
//!   where `g(p,p') = q` on the diagonal and `1` elsewhere;
//! - the transformation algebra generated by `al(p,k)`, `b(p,k)`, `f(p)` and
//!   their starred partners, subject to the exchange relations that make the
//!   inhomogeneous linear transformation of `a`, `ad` an invariance of the
//!   oscillator relations.
//!
//! All coefficients live in the Laurent ring `Q[q, q^-1]` with exact rational
//! arithmetic, relations are oriented into a terminating rewrite system, and
//! every claimed identity (invariance, coproduct homomorphism property,
//! coassociativity, counit, star closure, classical limit, two-parameter
//! identification of the homogeneous block, antipode at `n = 1`) is checked by
//! reducing its defect to normal form and asserting that the residue is zero.

pub mod algebra;
pub mod cli;
pub mod hopf;
pub mod relations;
pub mod rewrite;
pub mod scalar;
pub mod verify;

pub use algebra::{
    AlgebraError, AlphabetClass, Element, Generator, Kind, Lattice, TensorElement, Word,
};
pub use relations::{
    build_group_rules, build_oscillator_rules, check_g_compatibility, g,
    glpq_identification_report, star_closure_defects, GlpqReport, RelationFamily, RewriteSystem,
    RuleInfo,
};
pub use rewrite::{is_zero_mod, is_zero_mod_tensor, normal_order, normal_order_tensor};
pub use scalar::{LaurentScalar, Rational, ScalarError};
