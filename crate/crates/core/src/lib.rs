//! Exact-arithmetic incidence geometry.
//!
//! Points, lines and flats over the rationals or the Gaussian rationals,
//! rich-line enumeration, polynomial partitioning with exact cell-visit
//! counts, detectors for hyperplane concentration, and a harness that checks
//! the "many rich lines force a populated hyperplane" dichotomy on concrete
//! configurations.

pub mod concentrate;
pub mod embed;
mod error;
pub mod geom;
pub mod harness;
pub mod incidence;
pub mod linalg;
pub mod partition;
pub mod scalar;

pub use error::{Error, Result};
pub use geom::{affine_hull, incident, line_through, orthogonal_complement, Flat, Line, Point};
pub use scalar::{Field, FieldKind, GaussianRational, Rational, UPoly};
