//! Exact symbolic engine for Poisson brackets with prescribed Casimir
//! functions.
//!
//! The crate constructs Poisson bivectors on even- and odd-dimensional
//! coordinate charts from an almost symplectic (resp. almost cosymplectic)
//! structure, a list of prescribed Casimir functions and a compatible
//! 2-form, and verifies every checkable claim — Jacobi identity, Casimir
//! annihilation, rank bounds, star/codifferential identities — in exact
//! rational-function arithmetic. No floating point is involved anywhere.
//!
//! Layering, bottom up:
//! - [`scalar`]: multivariate rational functions over ℚ (the coefficient
//!   field), with derivatives and decidable zero testing.
//! - [`exterior`]: sparse grade-homogeneous forms and multivector fields
//!   with wedge, pairing, both interior products and the exterior
//!   derivative.
//! - [`volume`]: the volume-form duality, the divergence-type operator it
//!   induces, the Schouten bracket (three independent routes) and the
//!   Poisson condition.
//! - [`symplectic`] / [`cosymplectic`]: the star operator, effective-form
//!   calculus and the even/odd bracket constructions with prescribed
//!   Casimirs.
//! - [`dirac`], [`nonholonomic`], [`fixtures`]: worked structures used as
//!   exact regression instances.
//!
//! With the default `parallel` feature, coordinate-triple Jacobi sweeps and
//! bracket-table generation fan out over a thread pool; disabling the
//! feature yields a fully sequential build with identical results.

pub mod chart;
pub mod cosymplectic;
pub mod dirac;
pub mod error;
pub mod even;
pub mod exterior;
pub mod fixtures;
pub mod linalg;
pub mod nonholonomic;
pub(crate) mod par;
pub mod random;
pub mod report;
pub mod scalar;
pub mod suite;
pub mod symplectic;
pub mod volume;

pub use chart::Chart;
pub use cosymplectic::{AlmostCosymplectic, OddProblem};
pub use error::{Error, Result};
pub use even::{EvenProblem, PoissonCandidate};
pub use symplectic::AlmostSymplectic;
pub use exterior::{Form, Multivector};
pub use scalar::Scalar;
pub use volume::VolumeStructure;
