//! Analysis of the asymmetric Duffing–Van der Pol oscillator
//!
//! ```text
//! x'' - x + x^3 = eps * [ (p1 + p2 x - x^2) x' + p3 sin(p4 t) ]
//! ```
//!
//! The crate is split along the lines of the analysis:
//!
//! * [`elliptic`] — complete elliptic integrals, nome, Jacobi functions.
//! * [`geometry`] — the integrable figure-eight system: levels, orbits, ω, I.
//! * [`autonomous`] — generating functions, cycle census, bifurcation lines.
//! * [`resonance`] — resonance levels, pendulum reduction, zone classification.
//! * [`melnikov`] — the homoclinic Melnikov function and its tangency lines.
//! * [`flow`] — numerical integration, Poincaré map, manifolds, splitting.
//!
//! Everything is a pure function of its inputs; no global mutable state.

pub mod autonomous;
pub mod elliptic;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod melnikov;
pub mod params;
pub mod quadrature;
pub mod resonance;
pub mod roots;

pub use error::{Error, Result};
pub use params::Params;
