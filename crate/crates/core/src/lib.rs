//! Totally twisted odd Khovanov complexes for marked link diagrams.
//!
//! The crate builds, over the polynomial ring `Z[x_1..x_m]` (one variable per
//! mark), the cube-of-resolutions complex whose horizontal differential is the
//! sign-corrected odd Khovanov differential and whose vertical differential is
//! left multiplication by the weighted circle classes. On top of that it
//! provides exact homology computations (Smith normal form over `Z`, ranks
//! over `Q` after evaluation), chain-level Gaussian elimination, the
//! spanning-tree complex obtained by cancelling the vertical differentials,
//! and executable checks for the structural theorems the construction obeys
//! (mark slides, face classification parity, Reidemeister invariance of the
//! homology).

pub mod algebra;
pub mod corpus;
pub mod cube;
pub mod diagram;
pub mod error;
pub mod homology;
pub mod spantree;
pub mod verify;

pub use algebra::{ExtElement, IntMatrix, Poly, RatMatrix};
pub use cube::{FaceType, TwistedComplex};
pub use diagram::{Crossing, MarkedDiagram, Resolution, TaitGraph};
pub use error::{Error, Result};
pub use homology::{GradedComplex, HomologyResult};
pub use spantree::{Evaluation, SpanningTreeComplex};
