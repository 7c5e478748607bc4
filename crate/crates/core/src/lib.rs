//! Finite-field k-plane transforms and empirical certification of their
//! L^p → L^r mapping properties.
//!
//! The crate is organised bottom-up:
//!
//! - [`field`]: arithmetic in F_q, the absolute trace and the canonical
//!   additive character χ.
//! - [`geometry`]: points and affine flats of F_q^d, enumeration of the
//!   families Π_k, affine spans and the H/Θ split of hyperplanes.
//! - [`transforms`]: the k-plane transform with its adjoint, and the
//!   geometric and character-sum decompositions of the Radon transform.
//! - [`measures`]: norms under the normalized counting and surface measures.
//! - [`verifier`]: exponent-region geometry, witness families, incidence
//!   counters, the hyperplane lemma bounds and operator-norm searches.
//! - [`cli`]: the `ffradon` command-line front end and its report format.
//!
//! See `examples/` for one runnable program per capability.

pub mod cli;
pub mod error;
pub mod field;
pub mod geometry;
pub mod measures;
pub mod transforms;
pub mod verifier;

pub use error::{Error, Result};
pub use field::{ArithOp, Elem, FieldCtx};
pub use geometry::{Flat, HyperplaneDual, HyperplaneKind, Point, Space};
pub use measures::{lp_norm, lr_norm_planes, norm_ratio, restricted_norm_indicator, Exponent};
pub use transforms::{CharParts, GridFunction, PlaneFamily, PlaneFunction, RadonFamily};
