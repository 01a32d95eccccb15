//! Exact computation of Ehrhart polynomials of lattice simplices.
//!
//! The engine assembles the polynomial from a closed formula over the face
//! lattice of the simplex: for every face, the dual cone spanned by the
//! inward facet normals contributes a finite-group character sum of
//! hyperbolic-cotangent series, weighted by normalized face volumes. All
//! arithmetic is exact (big integers, big rationals, cyclotomic fields); the
//! `oracle` module provides an independent brute-force counting reference
//! that the formula is calibrated and verified against.
//!
//! Module map:
//! - [`intlat`]: exact integer/rational lattice linear algebra (HNF, SNF,
//!   saturation, normalized volumes);
//! - [`simplex`]: simplices, faces, inward primitive facet normals;
//! - [`conegrp`]: the finite abelian group attached to a simplicial cone and
//!   its character angles;
//! - [`cycser`]: cyclotomic scalars and truncated power series kernels;
//! - [`ehrhart`]: the coefficient assembly, convention profiles and the
//!   calibration harness;
//! - [`oracle`]: brute-force lattice point counts, exact interpolation,
//!   Dedekind sums and reciprocity checks.

pub mod conegrp;
pub mod cycser;
pub mod ehrhart;
pub mod error;
pub mod intlat;
pub mod oracle;
pub mod simplex;

pub use error::{Error, Result};
pub use intlat::Rational;
