//! Exact computation of dimensionally reduced twisted Čech cohomology for
//! principal torus bundles, together with the groupoid-cochain constructions
//! that feed it.
//!
//! Everything here is exact: integers are arbitrary precision, the circle
//! group is `ℚ/ℤ` with reduced rational representatives, and cohomology
//! groups come out of integer Smith normal form. There is no floating point
//! anywhere in the crate.
//!
//! The main pipeline:
//!
//! 1. [`nerve`] builds the finite nerve of a cover and its sparse cochains.
//! 2. [`twist`] validates an integer Euler 2-cocycle `F`, derives the
//!    Steenrod correction cochain `C(F)`, and implements the cup products
//!    `∪₁` and `∪₂` against them.
//! 3. [`complex`] assembles the three-column (and two-column) twisted
//!    complexes with differential `D_F` as sparse integer matrices.
//! 4. [`homology`] extracts cohomology groups, coboundary witnesses,
//!    Bockstein maps and long-exact-sequence certificates from those
//!    matrices.
//! 5. [`tu_groupoid`] provides finite transformation groupoids, presimplicial
//!    covers and the Tu-Čech differential with brute-force low-degree
//!    cohomology.
//! 6. [`brauer_formulas`] evaluates the standard-setup cocycle machinery:
//!    integer `m`-data, the Mackey pairing, the surjectivity 2-cocycle and
//!    the lift-independence vanishing computation.

pub mod brauer_formulas;
pub mod coefficients;
pub mod complex;
pub mod fixtures;
pub mod homology;
pub mod json;
pub mod nerve;
pub mod tu_groupoid;
pub mod twist;

pub use coefficients::{Circle, CoefficientRing, UpperTriValue, VectorValue};
pub use complex::{DimRedCochain, DimRedComplex};
pub use homology::{CohomologyGroup, IntMat, MatrixComplex, SmithDecomposition};
pub use nerve::{Cochain, Nerve, Simplex, VertexId};
pub use twist::TwistCocycle;
