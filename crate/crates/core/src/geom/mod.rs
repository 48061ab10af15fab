//! Exact convex geometry: polygons in the torus chart and polytopes in
//! `(x, v, s)` space.
//!
//! Coordinates are sheared: a point `(x, v)` stands for the physical point
//! `(x, v·√3)`. Areas and volumes are reported in these v-units; the
//! physical value is `√3` times larger.

mod poly2;
mod polytope3;
mod projective;

pub use poly2::{Point2, Poly2};
pub use polytope3::{hull3, HalfSpace3, Point3, Polytope3};
pub use projective::{Affine2, Projective3};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("constraint has a zero normal")]
    ZeroNormal,
    #[error("polygon needs at least three non-collinear vertices")]
    DegeneratePolygon,
    #[error("hull needs at least four distinct points, got {0}")]
    TooFewPoints(usize),
    #[error("map is singular")]
    Singular,
    #[error("projective map changes sign of the homogeneous weight on the input")]
    ProjectiveWeight,
}

use crate::exactnum::Scalar;
use std::cmp::Ordering;

pub(crate) fn cmp<S: Scalar>(a: &S, b: &S) -> Ordering {
    a.partial_cmp(b).expect("scalar comparison is total")
}

pub(crate) fn sign<S: Scalar>(a: &S) -> Ordering {
    cmp(a, &S::zero())
}
