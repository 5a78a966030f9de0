//! Finite biquandles, virtual biquandles, and coloring invariants of
//! virtual links presented as braid words or Gauss codes.
//!
//! The crate is organised around a handful of small modules:
//!
//! - [`algebra`]: operator tables over a finite carrier, the axiom checker,
//!   the derived `VR` operator, and named families (swap, linear, Wada).
//! - [`braid`]: virtual braid words, closure bookkeeping, closure-preserving
//!   moves, and conversion of braid closures to Gauss codes.
//! - [`coloring`]: the two actions of the virtual braid group on tuples of
//!   carrier elements and exhaustive fixed-point (coloring) counts.
//! - [`gauss`]: semiarc graphs of Gauss codes and the constraint solver that
//!   counts colorings using only classical crossings.
//! - [`terms`]: the free virtual biquandle as a term algebra, symbolic braid
//!   actions, presentations, and homomorphism counting.
//! - [`enumeration`]: exhaustive search for all (virtual) biquandles of a
//!   given small size, with canonical keys for isomorphism de-duplication.

pub mod algebra;
pub mod braid;
pub mod coloring;
pub mod enumeration;
pub mod gauss;
pub mod terms;

pub use algebra::{
    derive_vr, invert_operator, is_homomorphism, linear_biquandle, swap_operator,
    validate_biquandle, validate_virtual, wada_from_group, AxiomReport, Biquandle, OperatorTable,
    VirtualBiquandle,
};
pub use braid::{BraidWord, GaussCode, Generator};
pub use coloring::{ColoringResult, RepKind};
