//! Exact computations with weight-one Koszul cohomology of curves.

pub mod binary;
pub mod constructors;
pub mod error;
pub mod io;
pub mod jobs;
pub mod koszul;
pub mod linalg;
pub mod models;
pub mod multilinear;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Fp, Scalar};

/// Exact rational scalars used throughout the public surface.
pub type Rat = num_rational::BigRational;

pub type RatMultTable = models::MultTable<Rat>;
pub type RatClass = multilinear::KoszulClass<Rat>;
pub type RatSkewMap = multilinear::SkewMap<Rat>;

pub type F5 = Fp<5>;
pub type F7 = Fp<7>;
pub type F11 = Fp<11>;
