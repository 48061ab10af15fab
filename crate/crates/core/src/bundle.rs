//! The parameter bundle: the map `F(x, v, s) = (f̃_s(x, v), s)` over an
//! interval, its maximal continuity domains on the spaces `X`, `Y` and `Z`,
//! their classification, and the conjugating maps `φ`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{fmt_rat, int, rat, Rat};
use crate::geom::{Affine2, GeomError, HalfSpace3, Projective3};
use crate::pet::{tetra_pet, Cell, Offset, PetError, Piece, PiecewiseMap, TransVec};
use crate::renorm::{renorm_r, RenormError};
use crate::torus::{
    build_triangles, build_y, fundamental_domain, hexagon_bundle, TorusError, Y_PIECE_NAMES,
};
use crate::{ConcretePet, Point3, Poly2, Polytope3, SymbolicPet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BundleError {
    #[error(transparent)]
    Pet(#[from] PetError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Renorm(#[from] RenormError),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error("interval {0} lies outside the range where the map is defined ({1})")]
    OutsideRegime(String, &'static str),
    #[error("chopped body is empty")]
    EmptyChop,
}

/// Which fibre bundle a domain lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    X,
    Y,
    Z,
}

impl FromStr for Space {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "X" | "x" => Ok(Space::X),
            "Y" | "y" => Ok(Space::Y),
            "Z" | "z" => Ok(Space::Z),
            _ => Err(format!("unknown space {s:?}, expected X, Y or Z")),
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Space::X => "X",
            Space::Y => "Y",
            Space::Z => "Z",
        };
        f.write_str(c)
    }
}

/// A closed parameter interval with rational ends.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Result<Self, BundleError> {
        if lo >= hi {
            return Err(PetError::EmptyInterval.into());
        }
        Ok(Interval { lo, hi })
    }

    pub fn fiber(&self) -> (Rat, Rat) {
        (self.lo.clone(), self.hi.clone())
    }

    pub fn contains(&self, o: &Interval) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", fmt_rat(&self.lo), fmt_rat(&self.hi))
    }
}

impl FromStr for Interval {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| format!("interval {s:?} is not of the form p/q:r/t"))?;
        let lo = crate::exactnum::parse_rat(a).map_err(|e| e.to_string())?;
        let hi = crate::exactnum::parse_rat(b).map_err(|e| e.to_string())?;
        Interval::new(lo, hi).map_err(|e| e.to_string())
    }
}

/// `F` over `I`.
pub fn bundle_f(iv: &Interval) -> Result<SymbolicPet, BundleError> {
    Ok(tetra_pet::<Polytope3>(iv.fiber())?)
}

/// The six pieces of `Y` over `I`, in the order of [`Y_PIECE_NAMES`].
pub fn y_pieces(iv: &Interval) -> Vec<Polytope3> {
    let tr = build_triangles::<Rat>();
    let fib = iv.fiber();
    let a1 = Polytope3::lift(&tr.a[1], &fib);
    let a3 = Polytope3::lift(&tr.a[3], &fib);
    let h = hexagon_bundle(&iv.lo, &iv.hi);
    let r = Projective3::point_reflection();
    let flip = |p: &Polytope3| p.map(&r).expect("point reflection is affine");
    let (ia1, ia3, ih) = (flip(&a1), flip(&a3), flip(&h));
    vec![a1, a3, h, ia1, ia3, ih]
}

/// Parameters where `s/(1-2s)` has integer part 2, so `R(s) = s/(1-2s) - 2`.
pub fn z_regime() -> Interval {
    Interval {
        lo: rat(12, 29),
        hi: rat(5, 12),
    }
}

fn row(a: i64, b: i64, c: i64, d: i64) -> [Rat; 4] {
    [int(a), int(b), int(c), int(d)]
}

/// `(x, v, s) ↦ (φ_s(x, v), R(s))` on the `k`-th piece, as a projective map
/// of `(x, v, s, 1)` with weight `1 - 2s`.
pub fn phi_projective(k: usize) -> Projective3<Rat> {
    let s_row = row(0, 0, 5, -2);
    let w_row = row(0, 0, -2, 1);
    let (xr, vr) = match k {
        0 => (row(1, 0, 2, 0), row(0, 1, 0, 0)),
        3 => (row(1, 0, -2, 0), row(0, 1, 0, 0)),
        1 | 4 => (row(1, 0, 0, 0), row(0, 1, 0, 0)),
        2 => (row(1, 0, -1, 1), row(0, 1, -3, 1)),
        5 => (row(1, 0, 1, -1), row(0, 1, 3, -1)),
        _ => panic!("piece index {k} out of range"),
    };
    Projective3::new([xr, vr, s_row, w_row]).expect("weight row is non-trivial")
}

fn check_z_regime(iv: &Interval) -> Result<(), BundleError> {
    if !z_regime().contains(iv) {
        return Err(BundleError::OutsideRegime(
            iv.to_string(),
            "Z needs 12/29 <= s <= 5/12",
        ));
    }
    Ok(())
}

/// `R(s) = s/(1-2s) - 2`, valid on [`z_regime`].
pub fn regime_r(s: &Rat) -> Rat {
    s / (Rat::one() - s * int(2)) - int(2)
}

/// The six pieces of `Z = φ⁻¹(Y)` over `I ⊂ [12/29, 5/12]`.
pub fn z_pieces(iv: &Interval) -> Result<Vec<Polytope3>, BundleError> {
    check_z_regime(iv)?;
    let t = Interval::new(regime_r(&iv.lo), regime_r(&iv.hi))?;
    y_pieces(&t)
        .iter()
        .enumerate()
        .map(|(k, y)| Ok(y.map(&phi_projective(k).inverse())?))
        .collect()
}

/// A maximal domain of `F` (space `X`) or of a first return of `F` to one
/// piece (spaces `Y`, `Z`).
#[derive(Clone, Debug, PartialEq)]
pub struct MaxDomain {
    pub body: Polytope3,
    pub space: Space,
    /// Index of the `Y`/`Z` piece the domain returns to; 0 for `X`.
    pub piece: usize,
    pub transvec: TransVec,
    pub return_time: u32,
    pub word: Vec<u32>,
    /// Chart pieces the body was assembled from, each with its own translation.
    pub parts: Vec<(Polytope3, TransVec)>,
}

impl MaxDomain {
    pub fn image(&self) -> Polytope3 {
        self.body.shifted(&self.transvec)
    }

    pub fn piece_name(&self) -> &'static str {
        match self.space {
            Space::X => "X",
            _ => Y_PIECE_NAMES[self.piece],
        }
    }

    /// Number of vertices on the plane `s = s0`.
    pub fn contact(&self, s0: &Rat) -> usize {
        contact(&self.body, s0)
    }
}

pub fn contact(body: &Polytope3, s0: &Rat) -> usize {
    body.verts().iter().filter(|p| p.s == *s0).count()
}

fn cmp_bodies(a: &Polytope3, b: &Polytope3) -> Ordering {
    let (va, vb) = (a.verts(), b.verts());
    for (p, q) in va.iter().zip(vb) {
        match p.lex_cmp(q) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    va.len().cmp(&vb.len())
}

fn sort_domains(v: &mut [MaxDomain]) {
    v.sort_by(|a, b| {
        a.piece
            .cmp(&b.piece)
            .then_with(|| cmp_bodies(&a.body, &b.body))
    });
}

fn collect(
    map: &SymbolicPet,
    space: Space,
    piece: usize,
    out: &mut Vec<MaxDomain>,
) -> Result<(), BundleError> {
    for d in map.domains()? {
        out.push(MaxDomain {
            body: d.body,
            space,
            piece,
            transvec: d.shift,
            return_time: d.time,
            word: d.word,
            parts: d.parts.into_iter().map(|p| (p.dom, p.shift)).collect(),
        });
    }
    Ok(())
}

/// The regions whose first returns define the domains of `space` over `I`.
pub fn space_pieces(space: Space, iv: &Interval) -> Result<Vec<Polytope3>, BundleError> {
    match space {
        Space::X => Ok(vec![Polytope3::lift(&fundamental_domain(), &iv.fiber())]),
        Space::Y => Ok(y_pieces(iv)),
        Space::Z => z_pieces(iv),
    }
}

/// Maximal domains of `space` over `I`, sorted canonically.
///
/// For `Y` and `Z` every piece is treated on its own: the domains are those
/// of the first return of `F` to that piece.
pub fn maximal_domains(
    space: Space,
    iv: &Interval,
    max_steps: usize,
) -> Result<Vec<MaxDomain>, BundleError> {
    let g = bundle_f(iv)?;
    let mut out = Vec::new();
    match space {
        Space::X => collect(&g, space, 0, &mut out)?,
        _ => {
            for (k, piece) in space_pieces(space, iv)?.iter().enumerate() {
                let ret = g.first_return(std::slice::from_ref(piece), max_steps)?;
                collect(&ret, space, k, &mut out)?;
            }
        }
    }
    sort_domains(&mut out);
    Ok(out)
}

/// How a domain sits in its parameter interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainClass {
    /// Vertices on both end planes of the interval.
    Permanent,
    /// Vertices on the lower end plane and on the resident top plane, and nothing above it.
    Resident,
    /// The highest vertices span less than a facet; carries their `s`.
    NewlyAppeared(Rat),
    Other,
}

/// The planes a classification is measured against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPlanes {
    pub lo: Rat,
    pub hi: Rat,
    pub resident_top: Rat,
}

impl ClassPlanes {
    pub fn new(iv: &Interval, resident_top: Rat) -> Self {
        ClassPlanes {
            lo: iv.lo.clone(),
            hi: iv.hi.clone(),
            resident_top,
        }
    }
}

pub fn classify_domain(body: &Polytope3, planes: &ClassPlanes) -> DomainClass {
    let (bottom, top) = body.s_range();
    if bottom == planes.lo && top == planes.hi {
        return DomainClass::Permanent;
    }
    if bottom == planes.lo && top == planes.resident_top {
        return DomainClass::Resident;
    }
    if contact(body, &top) < 3 {
        return DomainClass::NewlyAppeared(top);
    }
    DomainClass::Other
}

/// Restriction of a domain to `s ∈ J`; translation and return time are kept.
pub fn chop(d: &MaxDomain, j: &Interval) -> Result<MaxDomain, BundleError> {
    let body = d
        .body
        .clip(&HalfSpace3::s_at_least(j.lo.clone()))
        .and_then(|b| b.clip(&HalfSpace3::s_at_most(j.hi.clone())))
        .ok_or(BundleError::EmptyChop)?;
    let parts = d
        .parts
        .iter()
        .filter_map(|(p, t)| {
            p.clip(&HalfSpace3::s_at_least(j.lo.clone()))
                .and_then(|b| b.clip(&HalfSpace3::s_at_most(j.hi.clone())))
                .map(|b| (b, *t))
        })
        .collect();
    Ok(MaxDomain {
        body,
        parts,
        ..d.clone()
    })
}

/// How the domains over `J` arise from the domains over a longer interval
/// `deep ⊃ J` whose top end is the resident plane.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ancestry {
    /// Chops of domains that reach both ends of `deep`.
    pub primary: Vec<usize>,
    /// Chops of other domains of `deep` that reach above `J`.
    pub chopped_other: Vec<usize>,
    /// Domains of `deep` that stay at or below the top of `J`.
    pub born_inside: Vec<usize>,
    /// Not a chop of anything over `deep`.
    pub unmatched: Vec<usize>,
}

/// Sorts the domains over `j` by what they are chopped from.
///
/// A domain of `deep` reaching both of its end planes is the finite
/// stand-in for a resident polyhedron: the resident lower plane is a limit
/// that no finite interval reaches, so `deep.lo` is taken far enough below
/// `j.lo` that the set of such domains no longer changes.
pub fn ancestry(
    doms: &[MaxDomain],
    j: &Interval,
    deep_doms: &[MaxDomain],
    deep: &Interval,
) -> Ancestry {
    let planes = ClassPlanes::new(deep, deep.hi.clone());
    let mut out = Ancestry::default();
    for (i, d) in doms.iter().enumerate() {
        let parent = deep_doms.iter().find(|big| {
            big.piece == d.piece
                && big.return_time == d.return_time
                && big.body.bbox_overlaps(&d.body)
                && chop(big, j).map(|c| c.body == d.body).unwrap_or(false)
        });
        match parent {
            Some(big) if classify_domain(&big.body, &planes) == DomainClass::Permanent => {
                out.primary.push(i)
            }
            Some(big) if big.body.s_range().1 > j.hi => out.chopped_other.push(i),
            Some(_) => out.born_inside.push(i),
            None => out.unmatched.push(i),
        }
    }
    out
}

/// The planar similarity `φ_s` on each of the six pieces, mapping `Z_s` onto `Y_t`, `t = R(s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiSim {
    pub s: Rat,
    pub t: Rat,
    pub c: Rat,
    pub maps: [Affine2<Rat>; 6],
}

/// `φ_s` for `0 < s < 1/2`. The hexagon cases recentre at the reflected
/// corner, so they carry the `v`-offsets with the sign that makes `φ_s(Z_s)`
/// land on `H_t`.
pub fn phi_sim(s: &Rat) -> Result<PhiSim, BundleError> {
    let h = rat(1, 2);
    if *s <= Rat::zero() || *s >= h {
        return Err(BundleError::OutsideRegime(
            fmt_rat(s),
            "similarity needs 0 < s < 1/2",
        ));
    }
    let one = Rat::one();
    let c = (&one - s * int(2)).recip();
    let t = renorm_r(s)?;
    let hx = &c * (&one + s) * &h - (&one + &t) * &h;
    let hv = -&c * (&one - s) * &h + (&one - &t) * &h;
    let a1 = &c - &one;
    let sc = |dx: Rat, dv: Rat| Affine2::scaling(c.clone(), dx, dv);
    let maps = [
        sc(a1.clone(), Rat::zero()),
        sc(Rat::zero(), Rat::zero()),
        sc(hx.clone(), hv.clone()),
        sc(-a1, Rat::zero()),
        sc(Rat::zero(), Rat::zero()),
        sc(-hx, -hv),
    ];
    Ok(PhiSim {
        s: s.clone(),
        t,
        c,
        maps,
    })
}

impl PhiSim {
    /// The pieces of `Z_s`.
    pub fn z_pieces(&self) -> Result<Vec<Poly2>, BundleError> {
        let y = build_y(&self.t)?;
        y.iter()
            .zip(&self.maps)
            .map(|(p, m)| Ok(m.inverse()?.map_poly(p)))
            .collect()
    }

    /// Pulls a map on the `k`-th piece of `Y_t` back to `Z_s`: domains by
    /// `φ⁻¹`, translations divided by `c`.
    pub fn pull_back(&self, k: usize, m: &ConcretePet) -> Result<ConcretePet, BundleError> {
        let inv = self.maps[k].inverse()?;
        let pieces = m
            .pieces
            .iter()
            .map(|p| Piece {
                dom: inv.map_poly(&p.dom),
                shift: Offset::new(&p.shift.dx / &self.c, &p.shift.dv / &self.c),
                time: p.time,
                word: p.word.clone(),
            })
            .collect();
        Ok(PiecewiseMap {
            fiber: self.s.clone(),
            pieces,
        })
    }
}

/// `(x, v, s) ↦ (φ_s(x, v), R(s))` at a single point of [`z_regime`].
pub fn phi_bundle(k: usize, p: &Point3) -> Result<Point3, BundleError> {
    let iv = Interval {
        lo: p.s.clone(),
        hi: p.s.clone(),
    };
    check_z_regime(&iv)?;
    Ok(phi_projective(k)
        .apply(p)
        .ok_or(GeomError::ProjectiveWeight)?)
}

/// The half swap `φ_s` for `s ≥ 1/2`: `+(1/2, -1/2)` on `v ≥ 0`, `+(-1/2, 1/2)` below.
pub fn phi_half() -> ConcretePet {
    let h = rat(1, 2);
    let f = fundamental_domain::<Rat>();
    let upper = f
        .clip(&Rat::zero(), &-Rat::one(), &Rat::zero())
        .ok()
        .flatten()
        .expect("upper half");
    let lower = f
        .clip(&Rat::zero(), &Rat::one(), &Rat::zero())
        .ok()
        .flatten()
        .expect("lower half");
    let piece = |dom: Poly2, dx: Rat, dv: Rat, w: u32| Piece {
        dom,
        shift: Offset::new(dx, dv),
        time: 1,
        word: vec![w],
    };
    PiecewiseMap {
        fiber: h.clone(),
        pieces: vec![
            piece(upper, h.clone(), -h.clone(), 0),
            piece(lower, -h.clone(), h, 1),
        ],
    }
}

/// The half swap at a point, with `v = 0` sent up.
pub fn phi_half_point(p: &crate::Point2) -> crate::Point2 {
    let h = rat(1, 2);
    if p.v >= Rat::zero() {
        p.add(&h, &-h.clone())
    } else {
        p.add(&-h.clone(), &h)
    }
}

/// The involution `(x, v, s) ↦ (φ(x, v), 1 - s)` on the two half-bundles.
pub fn phi_half_3d(upper: bool) -> Projective3<Rat> {
    let h = rat(1, 2);
    let (dx, dv) = if upper {
        (h.clone(), -h)
    } else {
        (-h.clone(), h)
    };
    let z = Rat::zero;
    let o = Rat::one;
    Projective3::new([
        [o(), z(), z(), dx],
        [z(), o(), z(), dv],
        [z(), z(), -o(), o()],
        [z(), z(), z(), o()],
    ])
    .expect("affine")
}

/// Splits a body at `v = 0` and applies the half-swap involution to each side.
pub fn phi_half_body(body: &Polytope3) -> Vec<Polytope3> {
    let z = Rat::zero;
    let o = Rat::one;
    let mut out = Vec::new();
    let up = HalfSpace3::vertical(z(), -o(), z());
    let down = HalfSpace3::vertical(z(), o(), z());
    if let Some(b) = body.clip(&up) {
        out.push(b.map(&phi_half_3d(true)).expect("affine"));
    }
    if let Some(b) = body.clip(&down) {
        out.push(b.map(&phi_half_3d(false)).expect("affine"));
    }
    out
}

/// Total volume of a list of bodies.
pub fn total_volume<'a>(bodies: impl IntoIterator<Item = &'a Polytope3>) -> Rat {
    bodies.into_iter().fold(Rat::zero(), |a, b| a + b.volume())
}
