//! blockframe: operator factorization and frame theory over finite direct
//! sums of complex matrix blocks.
//!
//! The coefficient algebra is M_{k_1}(ℂ) ⊕ … ⊕ M_{k_r}(ℂ) with one
//! C*-seminorm per block; modules are the free modules Aⁿ. On top of that
//! the crate provides Moore–Penrose inverses, Douglas-type factorization,
//! range-sum identities, order/seminorm equivalences, frames and K-frames,
//! atomic systems, and K-frame sums — each paired with verification
//! predicates that report residuals and witnesses.
//!
//! The core is generic over the real scalar (`f32`/`f64`) through the
//! [`scalar::Real`] trait; the aliases below fix `f64`, which is what the
//! CLI and the verification suites use.

pub mod algebra;
pub mod error;
pub mod factorization;
pub mod frame_sums;
pub mod frames;
pub mod hilbert;
pub mod io;
pub mod linalg;
pub mod oracles;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod verify;

pub use algebra::{AlgebraDescriptor, AlgebraElement, SeminormVector};
pub use error::{Error, Result};
pub use hilbert::{ModuleOperator, ModuleSpace, ModuleVector, OperatorNorms};
pub use report::{Verdict, VerificationReport};
pub use scalar::Real;

/// Algebra element over `f64`.
pub type Element = AlgebraElement<f64>;
/// Module vector over `f64`.
pub type Vector = ModuleVector<f64>;
/// Module operator over `f64`.
pub type Operator = ModuleOperator<f64>;
/// Frame system over `f64`.
pub type Frame = frames::FrameSystem<f64>;
/// Seminorm values over `f64`.
pub type Seminorms = SeminormVector<f64>;
