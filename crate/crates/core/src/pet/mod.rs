//! Piecewise translations of the torus, either at a fixed parameter
//! (planar cells) or over a parameter interval (cells in `(x, v, s)` space).
//!
//! Both flavours share one engine: cells are convex, every piece carries
//! its translation, and every image lands back in the fundamental
//! parallelogram, so composing maps is plain intersection in the chart.

mod cell;
mod orbit;

pub use cell::{Cell, Offset, Shift};
pub use orbit::{PeriodicTile, Tiling};

use crate::exactnum::Scalar;
use crate::geom::{Poly2, Polytope3};
use crate::torus::{build_triangles, fundamental_domain};
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PetError {
    #[error("point lies on a piece boundary where the map is undefined")]
    BoundaryHit,
    #[error("some piece does not return within {0} steps")]
    ReturnBoundExceeded(usize),
    #[error("orbit is not periodic within {0} steps")]
    NotPeriodicWithin(usize),
    #[error("parameter interval is empty")]
    EmptyInterval,
    #[error("parameter must lie in [0, 1]")]
    ParameterOutOfRange,
    #[error("map index must be 0, 1 or 2")]
    BadIndex,
    #[error("connected continuity domain is not convex")]
    NonConvexDomain,
}

/// Translation `(A + B·s/2, C + D·s/2)` in v-units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TransVec {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl TransVec {
    pub const ZERO: TransVec = TransVec {
        a: 0,
        b: 0,
        c: 0,
        d: 0,
    };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        TransVec { a, b, c, d }
    }

    /// The lattice vector `m·(2, 0) + n·(1, -1)`.
    pub fn lattice(m: i64, n: i64) -> Self {
        TransVec::new(2 * m + n, 0, -n, 0)
    }

    pub fn eval<S: Scalar>(&self, s: &S) -> Offset<S> {
        let h = s.clone() * S::half();
        Offset {
            dx: S::from_int(self.a) + S::from_int(self.b) * h.clone(),
            dv: S::from_int(self.c) + S::from_int(self.d) * h,
        }
    }

    pub fn plus(&self, o: &Self) -> Self {
        TransVec::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }

    pub fn neg(&self) -> Self {
        TransVec::new(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn is_lattice(&self) -> bool {
        self.b == 0 && self.d == 0 && (self.a + self.c) % 2 == 0
    }
}

impl fmt::Display for TransVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}

/// Direction `ω_i` scaled by two, so that `s·ω_i` is a [`TransVec`].
fn omega(i: usize) -> TransVec {
    match i {
        0 => TransVec::new(0, 2, 0, 0),
        1 => TransVec::new(0, -1, 0, 1),
        _ => TransVec::new(0, -1, 0, -1),
    }
}

/// One convex piece of a piecewise translation.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece<C: Cell> {
    pub dom: C,
    pub shift: C::Shift,
    /// Number of base steps folded into this piece (return time for first returns).
    pub time: u32,
    /// Itinerary through the continuity classes of the underlying maps.
    pub word: Vec<u32>,
}

impl<C: Cell> Piece<C> {
    pub fn image(&self) -> C {
        self.dom.shifted(&self.shift)
    }
}

/// A piecewise translation over a fixed fibre (a parameter value or interval).
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseMap<C: Cell> {
    pub fiber: C::Fiber,
    pub pieces: Vec<Piece<C>>,
}

/// Piecewise translation of the torus at one parameter value.
pub type ConcretePet<S> = PiecewiseMap<Poly2<S>>;
/// Piecewise translation over a parameter interval, with translations affine in `s`.
pub type SymbolicPet<S> = PiecewiseMap<Polytope3<S>>;

impl<C: Cell> PiecewiseMap<C> {
    pub fn identity(fiber: C::Fiber) -> Self {
        let dom = C::lift(&fundamental_domain(), &fiber);
        PiecewiseMap {
            fiber,
            pieces: vec![Piece {
                dom,
                shift: C::Shift::zero(),
                time: 0,
                word: Vec::new(),
            }],
        }
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn domain_measure(&self) -> C::S {
        self.pieces
            .iter()
            .fold(C::S::zero(), |a, p| a + p.dom.size())
    }

    pub fn images(&self) -> Vec<C> {
        self.pieces.iter().map(Piece::image).collect()
    }

    /// `other` after `self`: pieces of `self` refined by preimages of the
    /// pieces of `other`.
    pub fn then(&self, other: &Self) -> Self {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            let img = p.image();
            let back = p.shift.neg();
            for q in &other.pieces {
                if let Some(m) = img.meet(&q.dom) {
                    pieces.push(Piece {
                        dom: m.shifted(&back),
                        shift: p.shift.plus(&q.shift),
                        time: p.time + q.time,
                        word: [p.word.as_slice(), q.word.as_slice()].concat(),
                    });
                }
            }
        }
        PiecewiseMap {
            fiber: self.fiber.clone(),
            pieces,
        }
    }

    /// Fuses pieces with equal translation and time whose union is convex.
    pub fn merged(&self) -> Self {
        PiecewiseMap {
            fiber: self.fiber.clone(),
            pieces: merge_pieces(self.pieces.clone()),
        }
    }

    /// First return to `region`, whose parts must be interior-disjoint and
    /// lie in the fundamental chart.
    ///
    /// Each output piece carries the accumulated translation and its return
    /// time. Parts of the propagated front that share translation and time
    /// are fused after every step, so the result consists of the continuity
    /// pieces of the return map cut only where the region or the chart cuts.
    pub fn first_return(&self, region: &[C], max_steps: usize) -> Result<Self, PetError> {
        let mut front: Vec<Piece<C>> = Vec::new();
        for r in region {
            for p in &self.pieces {
                if let Some(m) = r.meet(&p.dom) {
                    front.push(Piece {
                        dom: m.shifted(&p.shift),
                        shift: p.shift.clone(),
                        time: p.time.max(1),
                        word: p.word.clone(),
                    });
                }
            }
        }
        let mut done: Vec<Piece<C>> = Vec::new();
        let mut steps = 1;
        while !front.is_empty() {
            if steps > max_steps {
                return Err(PetError::ReturnBoundExceeded(max_steps));
            }
            let mut next = Vec::new();
            for cur in merge_pieces(front) {
                let back = cur.shift.neg();
                let mut rest = vec![cur.dom.clone()];
                for r in region {
                    let mut keep = Vec::new();
                    for piece in rest {
                        if let Some(m) = piece.meet(r) {
                            done.push(Piece {
                                dom: m.shifted(&back),
                                shift: cur.shift.clone(),
                                time: cur.time,
                                word: cur.word.clone(),
                            });
                            keep.extend(piece.minus(r));
                        } else {
                            keep.push(piece);
                        }
                    }
                    rest = keep;
                }
                for piece in rest {
                    for p in &self.pieces {
                        if let Some(m) = piece.meet(&p.dom) {
                            next.push(Piece {
                                dom: m.shifted(&p.shift),
                                shift: cur.shift.plus(&p.shift),
                                time: cur.time + p.time.max(1),
                                word: [cur.word.as_slice(), p.word.as_slice()].concat(),
                            });
                        }
                    }
                }
            }
            front = next;
            steps += 1;
        }
        Ok(PiecewiseMap {
            fiber: self.fiber.clone(),
            pieces: merge_pieces(done),
        })
    }

    /// Checks that domains and images each tile `expected` measure without overlap.
    pub fn check_exchange(&self, expected: &C::S) -> bool {
        let imgs = self.images();
        let doms: Vec<C> = self.pieces.iter().map(|p| p.dom.clone()).collect();
        let total = |v: &[C]| v.iter().fold(C::S::zero(), |a, c| a + c.size());
        total(&doms) == *expected
            && total(&imgs) == *expected
            && pairwise_disjoint(&doms)
            && pairwise_disjoint(&imgs)
    }
}

/// A maximal continuity domain: the parts of a map sharing one itinerary
/// that are connected across chart seams, reassembled into one convex body.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain<C: Cell> {
    /// The domain in the universal cover, anchored at its first part.
    pub body: C,
    /// Translation of the body (the anchor part's chart translation).
    pub shift: C::Shift,
    pub time: u32,
    pub word: Vec<u32>,
    /// Chart parts with their translations.
    pub parts: Vec<Piece<C>>,
}

impl<C: Cell> PiecewiseMap<C> {
    /// Groups the chart pieces into maximal continuity domains.
    ///
    /// Two pieces belong together when they carry the same itinerary and
    /// some lattice translate of one shares a facet with the other.
    pub fn domains(&self) -> Result<Vec<Domain<C>>, PetError> {
        let lattice: Vec<C::Shift> = (-1..=1)
            .flat_map(|m| (-1..=1).map(move |n| (m, n)))
            .map(|(m, n)| C::shift_of(&TransVec::lattice(m, n), &self.fiber))
            .collect();
        let mut groups: Vec<(u32, &Vec<u32>, Vec<usize>)> = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            match groups.iter_mut().find(|g| g.0 == p.time && *g.1 == p.word) {
                Some(g) => g.2.push(i),
                None => groups.push((p.time, &p.word, vec![i])),
            }
        }
        let mut out = Vec::new();
        for (time, word, idx) in groups {
            let mut placed: Vec<Option<C::Shift>> = vec![None; idx.len()];
            for start in 0..idx.len() {
                if placed[start].is_some() {
                    continue;
                }
                placed[start] = Some(C::Shift::zero());
                let mut comp = vec![start];
                let mut k = 0;
                while k < comp.len() {
                    let a = comp[k];
                    let off_a = placed[a].clone().expect("placed");
                    let cell_a = self.pieces[idx[a]].dom.shifted(&off_a);
                    for b in 0..idx.len() {
                        if placed[b].is_some() {
                            continue;
                        }
                        for lam in &lattice {
                            let off_b = off_a.plus(lam);
                            if cell_a.touches(&self.pieces[idx[b]].dom.shifted(&off_b)) {
                                placed[b] = Some(off_b);
                                comp.push(b);
                                break;
                            }
                        }
                    }
                    k += 1;
                }
                let cells: Vec<C> = comp
                    .iter()
                    .map(|&c| {
                        self.pieces[idx[c]]
                            .dom
                            .shifted(placed[c].as_ref().expect("placed"))
                    })
                    .collect();
                let body = C::union_all(&cells).ok_or(PetError::NonConvexDomain)?;
                let anchor = &self.pieces[idx[start]];
                out.push(Domain {
                    body,
                    shift: anchor.shift.clone(),
                    time,
                    word: word.clone(),
                    parts: comp.iter().map(|&c| self.pieces[idx[c]].clone()).collect(),
                });
            }
        }
        Ok(out)
    }
}

pub(crate) fn pairwise_disjoint<C: Cell>(cells: &[C]) -> bool {
    (0..cells.len()).all(|i| (i + 1..cells.len()).all(|j| cells[i].meet(&cells[j]).is_none()))
}

/// Greedy fusion of same-key pieces until no two can be fused.
pub(crate) fn merge_pieces<C: Cell>(pieces: Vec<Piece<C>>) -> Vec<Piece<C>> {
    type Group<C> = (<C as Cell>::Shift, u32, Vec<u32>, Vec<C>);
    let mut groups: Vec<Group<C>> = Vec::new();
    for p in pieces {
        match groups
            .iter_mut()
            .find(|g| g.0 == p.shift && g.1 == p.time && g.2 == p.word)
        {
            Some(g) => g.3.push(p.dom),
            None => groups.push((p.shift, p.time, p.word, vec![p.dom])),
        }
    }
    let mut out = Vec::new();
    for (shift, time, word, mut cells) in groups {
        let mut changed = true;
        while changed {
            changed = false;
            'scan: for i in 0..cells.len() {
                for j in i + 1..cells.len() {
                    if let Some(u) = cells[i].fuse(&cells[j]) {
                        cells.swap_remove(j);
                        cells[i] = u;
                        changed = true;
                        break 'scan;
                    }
                }
            }
        }
        out.extend(cells.into_iter().map(|dom| Piece {
            dom,
            shift: shift.clone(),
            time,
            word: word.clone(),
        }));
    }
    out
}

fn base_regions<S: Scalar>(i: usize) -> Vec<(Poly2<S>, bool)> {
    // σ = +1 on every A_α with α ≠ 3 - i and on ι(A_{3-i})
    let t = build_triangles::<S>();
    let k = 3 - i;
    let mut out = Vec::new();
    for a in 0..4 {
        out.push((t.a[a].clone(), a != k));
        out.push((t.ia[a].clone(), a == k));
    }
    out
}

/// One of the three base maps `f̃_i`.
pub fn base_map<C: Cell>(i: usize, fiber: C::Fiber) -> Result<PiecewiseMap<C>, PetError> {
    if i > 2 {
        return Err(PetError::BadIndex);
    }
    C::check_fiber(&fiber)?;
    let f = C::lift(&fundamental_domain(), &fiber);
    // with a vanishing step the two sign classes are one continuity class
    let trivial = C::shift_of(&omega(i), &fiber) == C::Shift::zero();
    let mut pieces = Vec::new();
    for (tri, plus) in base_regions::<C::S>(i) {
        let w = if plus { omega(i) } else { omega(i).neg() };
        let dom = C::lift(&tri, &fiber);
        let img = dom.shifted(&C::shift_of(&w, &fiber));
        for m in -1..=1 {
            for n in -1..=1 {
                let lam = TransVec::lattice(m, n);
                if let Some(part) = img.meet(&f.shifted(&C::shift_of(&lam, &fiber))) {
                    let t = w.plus(&lam.neg());
                    let back = C::shift_of(&w.neg(), &fiber);
                    pieces.push(Piece {
                        dom: part.shifted(&back),
                        shift: C::shift_of(&t, &fiber),
                        time: 1,
                        word: vec![if trivial {
                            0
                        } else {
                            u32::from(!plus) * 9 + (3 * (m + 1) + (n + 1)) as u32
                        }],
                    });
                }
            }
        }
    }
    Ok(PiecewiseMap {
        fiber,
        pieces: merge_pieces(pieces),
    })
}

/// The tetrahedral PET `f̃_2 ∘ f̃_1 ∘ f̃_0`.
pub fn tetra_pet<C: Cell>(fiber: C::Fiber) -> Result<PiecewiseMap<C>, PetError> {
    let f0 = base_map::<C>(0, fiber.clone())?;
    let f1 = base_map::<C>(1, fiber.clone())?;
    let f2 = base_map::<C>(2, fiber)?;
    let mut g = f0.then(&f1).merged().then(&f2).merged();
    // one symbol per sign pattern of the three steps
    for p in &mut g.pieces {
        p.time = 1;
        p.word = vec![p.word.iter().fold(0, |acc, b| 18 * acc + b)];
    }
    Ok(g.merged())
}

impl<S: Scalar> SymbolicPet<S> {
    /// The `s`-slice as a planar map.
    pub fn instantiate(&self, s: &S) -> ConcretePet<S> {
        let pieces = self
            .pieces
            .iter()
            .filter_map(|p| {
                p.dom.slice_at_s(s).map(|dom| Piece {
                    dom,
                    shift: p.shift.eval(s),
                    time: p.time,
                    word: p.word.clone(),
                })
            })
            .collect();
        PiecewiseMap {
            fiber: s.clone(),
            pieces,
        }
    }
}

impl<S: Scalar> ConcretePet<S> {
    /// Equality as maps up to measure zero: domains cover the same area and
    /// wherever two domains overlap the translations agree.
    pub fn agrees_with(&self, o: &Self) -> Result<(), (usize, usize)> {
        let mut covered = S::zero();
        for (i, p) in self.pieces.iter().enumerate() {
            for (j, q) in o.pieces.iter().enumerate() {
                if let Some(m) = p.dom.intersect(&q.dom) {
                    if p.shift != q.shift {
                        return Err((i, j));
                    }
                    covered = covered + m.area();
                }
            }
        }
        if covered == self.domain_measure() && covered == o.domain_measure() {
            Ok(())
        } else {
            Err((usize::MAX, usize::MAX))
        }
    }
}

#[cfg(test)]
mod tests;
