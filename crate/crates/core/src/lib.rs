//! Exact simulation of the tetrahedral twist family of polytope exchange
//! transformations, together with its renormalization machinery.

pub mod bundle;
pub mod exactnum;
pub mod geom;
pub mod pet;
pub mod renorm;
pub mod torus;
pub mod verify;

pub use exactnum::{Rat, Scalar, Surd};

pub type Point2 = geom::Point2<Rat>;
pub type Poly2 = geom::Poly2<Rat>;
pub type Point3 = geom::Point3<Rat>;
pub type Polytope3 = geom::Polytope3<Rat>;
pub type HalfSpace3 = geom::HalfSpace3<Rat>;
pub type ConcretePet = pet::ConcretePet<Rat>;
pub type SymbolicPet = pet::SymbolicPet<Rat>;
