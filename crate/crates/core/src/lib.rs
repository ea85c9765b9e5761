//! Dirichlet domains and geodesic covers of finitely generated Fuchsian groups.
//!
//! Group elements act on the upper half-plane as Möbius maps. The crate builds
//! Dirichlet polygons, enumerates group elements by displacement, and
//! constructs and verifies finite geodesic covers: sets of group elements
//! that realize the quotient distance between any two points of the domain.

pub mod cover;
pub mod dirichlet;
pub mod enumeration;
pub mod error;
pub mod io;
pub mod isometry;
pub mod surface;
pub mod svg;

pub use enumeration::{ArithmeticMode, Certificate, GroupBall, GroupPresentation, Word};
pub use error::{Error, Result};
pub use isometry::{dist, BoundaryPoint, Isometry, UhpPoint};
