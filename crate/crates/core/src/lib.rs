//! Analysis of discrete vector-valued Gabor systems on the nonuniform
//! translation set Λ = {0, r/N} + 2ℤ.
//!
//! Signals are finitely supported maps Λ → ℂ^S. Because Λ ⊂ (1/N)ℤ,
//! every Fourier transform in sight is a trigonometric (Laurent)
//! polynomial over the spectral domain Ω = [0, 1/2) ∪ [N/2, (N+1)/2),
//! and inner products, norms and the frame-characterization integrals
//! are computed in closed form. Frame and Bessel verdicts come from the
//! translate-matrix characterization evaluated over a ξ grid, with a
//! brute-force energy oracle cross-checking every estimate.
//!
//! Modules:
//! - [`lambda`]: the index set, exact point arithmetic, sampling grids.
//! - [`sequences`]: the signal type with shift/modulation operators.
//! - [`transform`]: the exact Fourier transform and Ω-side integrals.
//! - [`gabor`]: systems, analysis/synthesis/frame operators, oracles.
//! - [`bounds`]: Bessel/frame verdicts and grid bound estimates.
//! - [`perturb`]: stability certification for perturbed windows.
//! - [`reductions`]: arithmetic-mean, row and entry reductions.
//! - [`demos`]: built-in reference systems.

pub mod bounds;
pub mod demos;
pub mod gabor;
pub mod lambda;
pub mod linalg;
pub mod perturb;
pub mod phase;
pub mod reductions;
pub mod sequences;
pub mod transform;

pub use bounds::{FrameReport, Verdict};
pub use gabor::{CoefficientMap, GaborSpec};
pub use lambda::{LambdaParams, LambdaPoint, XiGrid};
pub use sequences::NuSequence;
pub use transform::{LaurentPoly, LaurentVector};
