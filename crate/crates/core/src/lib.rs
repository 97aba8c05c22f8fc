//! Fixed points of the C*-action on wild Higgs bundles over the plane.
//!
//! The crate computes, for coprime `(K, N)`:
//!
//! - the cyclic K-partitions of N labelling the fixed points, their exact
//!   parabolic weights and regulated L² norm μ ([`combinatorics`]);
//! - the matching W-algebra minimal-model highest weights and effective
//!   central charges, with an exact check of `μ = (K - 1 - c_eff)/12`
//!   ([`walgebra`]);
//! - numerical solutions of the radial cyclic affine Toda system attached to
//!   each fixed point, with μ recovered by quadrature ([`toda`]);
//! - exact polynomial-matrix algebra for the Hitchin base, the Hitchin
//!   section and the local model form near the irregular singularity
//!   ([`hitchin`]).

pub mod combinatorics;
pub mod error;
pub mod hitchin;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod toda;
pub mod walgebra;

pub use combinatorics::{enumerate_cyclic_partitions, fixed_point, CyclicPartition, FixedPointData};
pub use error::{Error, Result};
pub use rational::{Rational, RationalMatrix, RationalVector};

/// Version tag written into every JSON document.
pub const SCHEMA: &str = "toda-fixed-points/1";
