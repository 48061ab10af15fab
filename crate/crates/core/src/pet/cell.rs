use super::{PetError, TransVec};
use crate::exactnum::Scalar;
use crate::geom::{Poly2, Polytope3};
use std::fmt::Debug;

/// Translation data attached to a piece.
pub trait Shift: Clone + Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
}

/// Numeric planar translation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Offset<S> {
    pub dx: S,
    pub dv: S,
}

impl<S: Scalar> Offset<S> {
    pub fn new(dx: S, dv: S) -> Self {
        Offset { dx, dv }
    }
}

impl<S: Scalar> Shift for Offset<S> {
    fn zero() -> Self {
        Offset {
            dx: S::zero(),
            dv: S::zero(),
        }
    }
    fn plus(&self, o: &Self) -> Self {
        Offset {
            dx: self.dx.clone() + o.dx.clone(),
            dv: self.dv.clone() + o.dv.clone(),
        }
    }
    fn neg(&self) -> Self {
        Offset {
            dx: -self.dx.clone(),
            dv: -self.dv.clone(),
        }
    }
}

impl Shift for TransVec {
    fn zero() -> Self {
        TransVec::ZERO
    }
    fn plus(&self, o: &Self) -> Self {
        TransVec::plus(self, o)
    }
    fn neg(&self) -> Self {
        TransVec::neg(self)
    }
}

/// A convex cell the piecewise-translation engine can refine.
pub trait Cell: Clone + Debug + PartialEq + Send + Sync {
    type S: Scalar;
    /// Parameter value or interval the cell lives over.
    type Fiber: Clone + Debug + PartialEq + Send + Sync;
    type Shift: Shift;

    fn meet(&self, o: &Self) -> Option<Self>;
    fn minus(&self, o: &Self) -> Vec<Self>;
    fn fuse(&self, o: &Self) -> Option<Self>;
    /// The union of interior-disjoint cells when it is convex.
    fn union_all(cells: &[Self]) -> Option<Self>;
    /// Meets `o` in a common facet of positive measure.
    fn touches(&self, o: &Self) -> bool;
    fn shifted(&self, t: &Self::Shift) -> Self;
    /// Area or volume in v-units.
    fn size(&self) -> Self::S;
    fn lift(p: &Poly2<Self::S>, f: &Self::Fiber) -> Self;
    fn shift_of(t: &TransVec, f: &Self::Fiber) -> Self::Shift;
    fn check_fiber(f: &Self::Fiber) -> Result<(), PetError>;
}

impl<S: Scalar> Cell for Poly2<S> {
    type S = S;
    type Fiber = S;
    type Shift = Offset<S>;

    fn meet(&self, o: &Self) -> Option<Self> {
        self.intersect(o)
    }
    fn minus(&self, o: &Self) -> Vec<Self> {
        self.subtract(o)
    }
    fn fuse(&self, o: &Self) -> Option<Self> {
        self.convex_union(o)
    }
    fn union_all(cells: &[Self]) -> Option<Self> {
        Poly2::union_if_convex(cells)
    }
    fn touches(&self, o: &Self) -> bool {
        self.shares_edge(o)
    }
    fn shifted(&self, t: &Offset<S>) -> Self {
        self.translate(&t.dx, &t.dv)
    }
    fn size(&self) -> S {
        self.area()
    }
    fn lift(p: &Poly2<S>, _: &S) -> Self {
        p.clone()
    }
    fn shift_of(t: &TransVec, s: &S) -> Offset<S> {
        t.eval(s)
    }
    fn check_fiber(s: &S) -> Result<(), PetError> {
        if *s < S::zero() || *s > S::one() {
            return Err(PetError::ParameterOutOfRange);
        }
        Ok(())
    }
}

impl<S: Scalar> Cell for Polytope3<S> {
    type S = S;
    type Fiber = (S, S);
    type Shift = TransVec;

    fn meet(&self, o: &Self) -> Option<Self> {
        self.intersect(o)
    }
    fn minus(&self, o: &Self) -> Vec<Self> {
        self.subtract(o)
    }
    fn fuse(&self, o: &Self) -> Option<Self> {
        self.convex_union(o)
    }
    fn union_all(cells: &[Self]) -> Option<Self> {
        Polytope3::union_if_convex(cells)
    }
    fn touches(&self, o: &Self) -> bool {
        self.shares_facet(o)
    }
    fn shifted(&self, t: &TransVec) -> Self {
        let h = S::half();
        self.shear_translate(
            &S::from_int(t.a),
            &(S::from_int(t.b) * h.clone()),
            &S::from_int(t.c),
            &(S::from_int(t.d) * h),
        )
    }
    fn size(&self) -> S {
        self.volume()
    }
    fn lift(p: &Poly2<S>, f: &(S, S)) -> Self {
        Polytope3::prism(p, f.0.clone(), f.1.clone())
    }
    fn shift_of(t: &TransVec, _: &(S, S)) -> TransVec {
        *t
    }
    fn check_fiber(f: &(S, S)) -> Result<(), PetError> {
        if f.0 >= f.1 {
            return Err(PetError::EmptyInterval);
        }
        if f.0 < S::zero() || f.1 > S::one() {
            return Err(PetError::ParameterOutOfRange);
        }
        Ok(())
    }
}
