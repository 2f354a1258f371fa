//! Collectives of stateless automata on n-dimensional lattice environments.
//!
//! A *collective* is a finite set of single-state Mealy automata ("elementary
//! bodies"), each sitting on an arc of a direction-regular lattice graph.
//! Every tick each automaton reads the occupancy counts of the arcs meeting
//! its head vertex and outputs the direction it will travel next; an automaton
//! whose intersecting arcs are all empty must keep going straight. On top of
//! this discrete dynamics the crate provides:
//!
//! * exact-rational kinematics for bodies (average coordinate, spatial
//!   velocity, external-state change detection, periodicity certificates,
//!   proper-time assignment),
//! * an exact reference-frame algebra (the actual-direction basis `M`,
//!   diagonal boosts `Λ`, frame maps `L = M·Λ·M⁻¹`) with the relativity-like
//!   consequences that fall out of it (velocity addition, reciprocity,
//!   rod-length measurement),
//! * affine isomorphism of bodies: own-frame snapshots, bijection search with
//!   proper-time alignment, and translation-invariant internal-state keys,
//! * a scenario-driven CLI with CSV/JSONL trace export and 1-D spacetime
//!   diagrams.
//!
//! Everything on the analysis side is computed over arbitrary-precision
//! rationals; floating point appears only in the optional Euclidean embedding
//! used for export.
//!
//! ```
//! use collective::environment::{Environment, Topology};
//! use collective::frames::{build_basis, lambda_from_motion, MotionParams};
//! use collective::ratio::rat;
//!
//! let env = Environment::standard(1, Topology::Infinite).unwrap();
//! let basis = build_basis(env.dirset()).unwrap();
//! let motion = MotionParams::new(vec![rat(4, 5)], rat(3, 5));
//! let boost = lambda_from_motion(&basis, &motion).unwrap();
//! assert_eq!(boost.entries()[0], rat(7, 3));
//! assert_eq!(boost.entries()[1], rat(1, 1));
//! ```

pub mod automata;
pub mod bodies;
pub mod diagram;
pub mod engine;
pub mod environment;
pub mod export;
pub mod frames;
pub mod isomorphism;
pub mod linalg;
pub mod ratio;
pub mod scenario;

#[cfg(test)]
pub(crate) mod testkit;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid direction set: {0}")]
    InvalidDirectionSet(String),
    #[error("invalid torus basis: {0}")]
    InvalidTorusBasis(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid rational '{0}'")]
    InvalidRational(String),
    #[error("degenerate frame (zero proper-time velocity)")]
    DegenerateFrame,
    #[error("motion outside admissible cone: boost entry {0} is not positive")]
    OutsideCone(String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("time {0} outside recorded horizon")]
    OutOfHorizon(String),
    #[error("unknown member id {0}")]
    UnknownMember(u32),
    #[error("body '{0}' is not periodic within the recorded horizon")]
    NotPeriodic(String),
    #[error("proper time per period must be positive, got {0}")]
    NonPositiveProperTime(String),
    #[error("worldline parallel to the slice (w-degenerate)")]
    WorldlineParallel,
    #[error("scenario error at {field}: {message}")]
    Scenario { field: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Shorthand result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn scenario(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Scenario { field: field.into(), message: message.into() }
    }
}
