//! Analysis of one-particle reduced-density-matrix spectra against
//! spin-adapted generalized Pauli constraints (GPCs).
//!
//! The crate is organized in modules that build on each other:
//!
//! * [`catalog`]: constraint tables and the spin-adapted Pauli constraints.
//! * [`geometry`]: exact residuals, membership and l1 distances via an exact
//!   rational simplex.
//! * [`qparam`]: the spin-adapted Q-parameter from intersection tables.
//! * [`truncation`]: bounds on boundary distances of truncated spectra.
//! * [`selection`]: weight lattices, multiplicities and selection rules.
//! * [`sandbox`]: small exact many-fermion states, 1RDMs and the pinning flow.

pub mod catalog;
pub mod constraint;
pub mod error;
pub mod geometry;
pub mod qparam;
pub mod rational;
pub mod sandbox;
pub mod selection;
pub mod setting;
pub mod truncation;

pub use catalog::{builtin_catalog, ConstraintCatalog};
pub use constraint::{normalize_inequality, LinearConstraint, Relation, Sense};
pub use error::{Error, Result};
pub use geometry::{OccupationVector, Polytope};
pub use rational::Q;
pub use setting::{Setting, SettingKey};
