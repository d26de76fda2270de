//! Numerics for the two-level model with parabolic detuning
//! `Δ(t) = αt + βt²/2`: an exact integrator, regime-local Airy /
//! parabolic-cylinder / Bessel approximations, the three-segment
//! connection with its amplitude-phase tail, and the integral identities
//! those approximations are built from.

pub mod approx;
pub mod connect;
pub mod dynamics;
pub mod heun;
pub mod identities;
pub mod model;
pub mod ode;
pub mod quad;
pub mod scalar;
pub mod specfun;

pub use num_complex::Complex;

/// Real scalar used by the physics layers.
pub type Real = f64;
/// Complex scalar used by the physics layers.
pub type C64 = Complex<f64>;

pub use model::ModelParams;
