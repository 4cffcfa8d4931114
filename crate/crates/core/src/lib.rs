//! Collective dynamics, Markovian/non-Markovian regime structure and
//! entanglement of two two-level atoms coupled through the surface-plasmon
//! mode of a paired μ-negative / ε-negative metamaterial interface.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: ₂F₁ on the negative real axis, Bessel J₀/J₁/J₂, branch-safe
//!   complex square root.
//! * [`materials`]: Lorentz dispersion of the two slabs, effective medium,
//!   plasma resonance and reflection coefficients.
//! * [`coupling`]: atom–plasmon coupling Ω₀, interaction function U and the
//!   collective couplings Ωs, Ωa.
//! * [`greens`]: imaginary parts of the layered-medium Green tensor, both in
//!   closed form and by k∥ quadrature, and the memory kernel rebuilt from them.
//! * [`dynamics`]: closed-form amplitudes of the collective modes, atom and
//!   image amplitudes, regime classification, off-resonant approximation.
//! * [`oracle`]: two independent numerical solvers (fixed-step RK4 on the
//!   four-amplitude system, and a direct Volterra memory-integral solver).
//! * [`observables`]: populations, concurrence, decay-rate fits and spectral
//!   diagnostics.
//!
//! Unless stated otherwise rates are angular frequencies in an arbitrary but
//! consistent unit (usually γ = 1) and times are in the reciprocal unit.

pub mod coupling;
pub mod dynamics;
pub mod error;
pub mod greens;
pub mod materials;
pub mod observables;
pub mod oracle;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};

/// Library version, recorded in output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use num_complex::Complex64;
