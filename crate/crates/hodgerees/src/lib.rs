//! Tri-filtered linear algebra for mixed Hodge structures.
//!
//! This crate computes the splitting level α of a mixed Hodge structure — the
//! second Chern character (up to sign) of the Rees bundle attached to its
//! weight and Hodge filtrations — together with everything needed to state
//! and check that identity as executable mathematics:
//!
//! * [`scalar`], [`linalg`] — exact Q(i) and complex-double backends beneath a
//!   canonical (RREF) subspace algebra;
//! * [`filtration`] — decreasing filtrations by jump data, graded and
//!   multigraded dimensions, simultaneous bigradings, opposedness;
//! * [`rees`] — Chern characters of Rees bundles over the projective plane
//!   and its one-point blow-up;
//! * [`mhs`] — mixed Hodge structures, validation, Hodge numbers, the
//!   canonical bigrading, α, and the operations (twist, dual, sum, tensor,
//!   extension) whose laws the test suite verifies;
//! * [`sample`], [`verify`] — seeded random instances and the property suite;
//! * [`theta`], [`curves`] — period matrices of punctured/identified rational
//!   and elliptic curves and the α₁ they determine.
//!
//! The core is generic over the [`scalar::Scalar`] backend; the aliases below
//! fix the two concrete instantiations used throughout.

pub mod curves;
pub mod filtration;
pub mod linalg;
pub mod mhs;
pub mod rees;
pub mod sample;
pub mod scalar;
pub mod theta;
pub mod verify;

pub use scalar::{rank_tolerance, set_rank_tolerance, GaussianRational, Scalar, DEFAULT_RANK_TOLERANCE};

/// Complex double-precision scalar.
pub type C64 = num_complex::Complex64;

/// Exact matrices over Q(i).
pub type MatrixQi = linalg::Matrix<GaussianRational>;
/// Floating complex matrices.
pub type MatrixC64 = linalg::Matrix<C64>;
/// Exact subspaces of Q(i)^n.
pub type SubspaceQi = linalg::Subspace<GaussianRational>;
/// Floating subspaces of C^n.
pub type SubspaceC64 = linalg::Subspace<C64>;
/// Exact decreasing filtrations.
pub type FiltrationQi = filtration::Filtration<GaussianRational>;
/// Floating decreasing filtrations.
pub type FiltrationC64 = filtration::Filtration<C64>;
/// Exact mixed Hodge structures.
pub type MhsQi = mhs::MixedHodgeStructure<GaussianRational>;
/// Floating mixed Hodge structures.
pub type MhsC64 = mhs::MixedHodgeStructure<C64>;
