//! Direct numerics: integration of the forced oscillator, the stroboscopic
//! map, its saddle and invariant manifolds, separatrix splitting, and the
//! detection of autonomous separatrix connections.

mod dop853_tables;

pub mod connection;
pub mod field;
pub mod manifold;
pub mod map;
pub mod ode;
pub mod saddle;
pub mod splitting;
pub mod tangency;

pub use connection::{autonomous_connection, ConnectionKind, ConnectionReport};
pub use field::{ForcedField, State, Variant};
pub use manifold::{grow_manifold, Branch, ManifoldBranch};
pub use map::StroboscopicMap;
pub use ode::Tolerance;
pub use saddle::{find_saddle, SaddleFixedPoint};
pub use splitting::{phase_splitting, SplittingProfile, SplittingVerdict};
