//! Algebraic and numerical machinery for nonhyperbolic toral automorphisms.
//!
//! An integer polynomial `f` (or an integer matrix via its characteristic
//! polynomial) defines an automorphism of a compact connected abelian group.
//! This crate decides the classical dynamical trichotomies for such systems
//! and, in the torus case, builds the geometry of the central (isometric)
//! directions and runs the quantitative experiments that go with it:
//!
//! - [`poly`], [`sturm`], [`cyclotomic`], [`irreducible`]: exact integer and
//!   rational polynomial arithmetic — resultants, Sturm chains, cyclotomic
//!   polynomials, irreducibility certificates.
//! - [`classify`]: the five verdicts (irreducible, ergodic, expansive,
//!   totally irreducible, algebraic unit) plus place counts.
//! - [`embedding`]: companion matrix, certified unit-circle eigendata, a real
//!   basis of the central subspace and its projections.
//! - [`torus`]: orbits, central-leaf translations and R-separated sets.
//! - [`harmonic`]: characters, oscillatory integrals, energy integrals and
//!   Cesàro character averages.
//! - [`measures`]: weighted point measures, empirical leaf-mass profiles,
//!   the finiteness diagnostic, the center-of-mass map and the τ map.
//! - [`density`]: partitions of unity, Fourier data for the (R, K) recipe and
//!   the ε-density experiment for truncated inverse-orbit unions.
//!
//! The crate is `no_std`-compatible (with `alloc`) when built without the
//! default `std` feature; all floating-point transcendentals are routed
//! through `libm` so results do not depend on the feature set.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod classify;
pub mod cyclotomic;
pub mod density;
pub mod embedding;
pub mod error;
pub mod harmonic;
pub mod irreducible;
pub mod math;
pub mod matrix;
pub mod measures;
pub mod poly;
mod precision;
pub mod rng;
pub mod roots;
pub mod sturm;
pub mod torus;

pub use classify::ClassificationReport;
pub use embedding::CentralFrame;
pub use error::{Error, Result};
pub use matrix::IntMatrix;
pub use poly::IntPolynomial;

/// Crate version, embedded in every machine-readable report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
