//! Mean-element perturbation theories for a J2-type perturbed Keplerian toy
//! model, derived with Lie transforms for vectorial flows.
//!
//! The symbolic layer ([`series`], [`lie`]) is exact and generic over an
//! [`Exact`] scalar field; the numerical layer ([`propagator`],
//! [`error_analysis`]) is generic over a [`Real`] float type. The aliases
//! below fix the usual instantiations.

pub mod error;
pub mod error_analysis;
pub mod lie;
pub mod propagator;
pub mod reference;
pub mod scalar;
pub mod series;
pub mod toy_model;

pub use error::{Error, Result};
pub use lie::{Frame, Theory};
pub use scalar::{Exact, Real};
pub use toy_model::Element;

/// Arbitrary-precision rational used for all symbolic work.
pub type Rational = num_rational::BigRational;

/// Poisson series with exact rational coefficients.
pub type Series = series::PoissonSeries<Rational>;

pub type OrbitalElements = toy_model::OrbitalElements<f64>;
pub type PhysicalConstants = toy_model::PhysicalConstants<f64>;

/// A derived theory with exact coefficients.
pub type Artifacts = lie::TheoryArtifacts<Rational>;
