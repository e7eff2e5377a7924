//! Numerical toolkit for model spaces of finite Blaschke products.
//!
//! For a finite Blaschke product `Θ` of degree `n` the model space
//! `K_Θ = H² ⊖ ΘH²` is `n`-dimensional, so truncated Toeplitz operators,
//! Sedlock algebras `B^a_Θ` and the spatial unitaries between model spaces
//! are all finite matrices. This crate builds those matrices in an explicit
//! orthonormal (Takenaka–Malmquist) basis and decides when two Sedlock
//! algebras are spatially isomorphic.
//!
//! Module map:
//!
//! - [`moebius`]: disk automorphisms and extended-plane parameters
//! - [`blaschke`]: finite Blaschke products, level sets, Clark measures
//! - [`modelspace`]: orthonormal basis, kernels and the conjugation `C`
//! - [`tto`]: truncated Toeplitz matrices, symbols, Nehari distance
//! - [`sedlock`]: generators, algebras, commutants, idempotents
//! - [`unitaries`]: Crofoot, composition and sharp unitaries
//! - [`isodecider`]: the spatial-isomorphism decision procedure
//! - [`pick`]: Pick-space model of co-analytic algebras
//! - [`verify`]: the invariant suite behind `ttolab verify`
//! - [`cli`]: the `ttolab` command-line front end

pub mod blaschke;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod isodecider;
pub mod linalg;
pub mod modelspace;
pub mod moebius;
pub mod optimize;
pub mod pick;
pub mod poly;
pub mod sedlock;
pub mod tto;
pub mod unitaries;
pub mod verify;

pub use num_complex::Complex64 as C64;

pub use blaschke::{ClarkMeasure, FiniteBlaschkeProduct, KappaInvariant};
pub use error::{Error, Result};
pub use modelspace::{ConjugationMatrix, ModelSpace, ModelVector};
pub use moebius::{DiskPoint, ExtendedParameter, MoebiusAutomorphism, UnimodularConstant};
pub use sedlock::SedlockAlgebra;
pub use tto::{BasisTag, BoundarySymbol, OperatorMatrix};
pub use unitaries::{SpatialUnitary, UnitaryKind};

/// Imaginary unit.
pub const I: C64 = C64::new(0.0, 1.0);
