//! Pseudospectral toolkit for the cubic Dirac equation with a long-range
//! Hartree coupling on a periodic box.
//!
//! The crate evolves small-amplitude spinor fields
//!
//! ```text
//! (∂_t + Σ_j α^j ∂_j + iβ) ψ = i c₁ (|x|⁻¹ ∗ |ψ|²) ψ,      c₁ = g²/4π,
//! ```
//!
//! by an exactly mass-conserving split-step scheme, and measures the
//! quantitative structure of its solutions: projection algebra of the Dirac
//! symbol, dispersive sup-norm decay, spinorial null products, resonance
//! functions, and the logarithmic phase correction that governs long-time
//! profile convergence.
//!
//! All numerical kernels are generic over the floating scalar through
//! [`scalar::Scalar`]; concrete `f64` aliases live at the crate root.

pub mod dirac;
pub mod error;
pub mod fft;
pub mod field;
pub mod fit;
pub mod grid;
pub mod hartree;
pub mod integrator;
pub mod io;
pub mod propagator;
pub mod resonance;
pub mod scalar;
pub mod scattering;

pub use error::Error;
pub use scalar::Scalar;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Default double-precision instantiations.
pub type Grid64 = grid::FourierGrid<f64>;
pub type ScalarField64 = field::ScalarField<f64>;
pub type SpinorField64 = field::SpinorField<f64>;
pub type RunConfig64 = integrator::RunConfig<f64>;
pub type Trajectory64 = integrator::Trajectory<f64>;
pub type PhaseTable64 = scattering::PhaseTable<f64>;
