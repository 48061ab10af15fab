use std::cmp::Ordering;
use std::fmt;

use super::poly2::orient;
use super::{cmp, sign, GeomError, Point2, Poly2, Projective3};
use crate::exactnum::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point3<S> {
    pub x: S,
    pub v: S,
    pub s: S,
}

impl<S: Scalar> Point3<S> {
    pub fn new(x: S, v: S, s: S) -> Self {
        Point3 { x, v, s }
    }

    pub fn lex_cmp(&self, o: &Self) -> Ordering {
        cmp(&self.x, &o.x)
            .then_with(|| cmp(&self.v, &o.v))
            .then_with(|| cmp(&self.s, &o.s))
    }

    fn coords(&self) -> [&S; 3] {
        [&self.x, &self.v, &self.s]
    }

    fn sub(&self, o: &Self) -> [S; 3] {
        [
            self.x.clone() - o.x.clone(),
            self.v.clone() - o.v.clone(),
            self.s.clone() - o.s.clone(),
        ]
    }

    pub fn xv(&self) -> Point2<S> {
        Point2::new(self.x.clone(), self.v.clone())
    }
}

impl<S: fmt::Display> fmt::Display for Point3<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.v, self.s)
    }
}

fn cross<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> [S; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

fn dot<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> S {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

fn det3<S: Scalar>(a: &[S; 3], b: &[S; 3], c: &[S; 3]) -> S {
    dot(a, &cross(b, c))
}

/// The constraint `normal · p <= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfSpace3<S> {
    pub normal: [S; 3],
    pub offset: S,
}

impl<S: Scalar> HalfSpace3<S> {
    pub fn new(normal: [S; 3], offset: S) -> Result<Self, GeomError> {
        if normal.iter().all(Zero::is_zero) {
            return Err(GeomError::ZeroNormal);
        }
        Ok(HalfSpace3 { normal, offset }.normalized())
    }

    /// `s <= s0`.
    pub fn s_at_most(s0: S) -> Self {
        HalfSpace3 {
            normal: [S::zero(), S::zero(), S::one()],
            offset: s0,
        }
    }

    /// `s >= s0`.
    pub fn s_at_least(s0: S) -> Self {
        HalfSpace3 {
            normal: [S::zero(), S::zero(), -S::one()],
            offset: -s0,
        }
    }

    /// Lifts the planar constraint `a·x + b·v <= c` to a vertical half-space.
    pub fn vertical(a: S, b: S, c: S) -> Self {
        HalfSpace3 {
            normal: [a, b, S::zero()],
            offset: c,
        }
        .normalized()
    }

    /// `normal · p - offset`: negative inside, zero on the plane.
    pub fn eval(&self, p: &Point3<S>) -> S {
        let c = p.coords();
        self.normal[0].clone() * c[0].clone()
            + self.normal[1].clone() * c[1].clone()
            + self.normal[2].clone() * c[2].clone()
            - self.offset.clone()
    }

    /// The complementary closed half-space.
    pub fn flipped(&self) -> Self {
        HalfSpace3 {
            normal: [
                -self.normal[0].clone(),
                -self.normal[1].clone(),
                -self.normal[2].clone(),
            ],
            offset: -self.offset.clone(),
        }
    }

    /// Scales so the first non-zero normal entry has absolute value one.
    fn normalized(self) -> Self {
        let lead = self
            .normal
            .iter()
            .find(|c| !c.is_zero())
            .expect("non-zero normal")
            .abs();
        HalfSpace3 {
            normal: [
                self.normal[0].clone() / lead.clone(),
                self.normal[1].clone() / lead.clone(),
                self.normal[2].clone() / lead.clone(),
            ],
            offset: self.offset / lead,
        }
    }
}

use num_traits::Zero;

/// Convex polytope in `(x, v, s)` space, stored as vertices plus supporting
/// facet planes with exact vertex/facet incidence.
///
/// Vertices are sorted lexicographically, so two polytopes are equal exactly
/// when their vertex lists are equal.
#[derive(Clone, Debug)]
pub struct Polytope3<S> {
    verts: Vec<Point3<S>>,
    planes: Vec<HalfSpace3<S>>,
    incid: Vec<Vec<u32>>,
    lo: [S; 3],
    hi: [S; 3],
    flat: bool,
}

impl<S: Scalar> PartialEq for Polytope3<S> {
    fn eq(&self, o: &Self) -> bool {
        self.flat == o.flat && self.verts == o.verts
    }
}

fn common_count(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn bounds<S: Scalar>(verts: &[Point3<S>]) -> ([S; 3], [S; 3]) {
    let f = &verts[0];
    let mut lo = [f.x.clone(), f.v.clone(), f.s.clone()];
    let mut hi = lo.clone();
    for p in &verts[1..] {
        for (k, c) in p.coords().into_iter().enumerate() {
            if *c < lo[k] {
                lo[k] = c.clone();
            }
            if *c > hi[k] {
                hi[k] = c.clone();
            }
        }
    }
    (lo, hi)
}

impl<S: Scalar> Polytope3<S> {
    /// Assembles from candidate vertices and supporting planes. Vertices that
    /// are not extreme and planes that are not facets are dropped.
    fn assemble(verts: Vec<Point3<S>>, planes: Vec<HalfSpace3<S>>) -> Self {
        let incid: Vec<Vec<u32>> = verts
            .iter()
            .map(|p| {
                (0..planes.len() as u32)
                    .filter(|&k| planes[k as usize].eval(p).is_zero())
                    .collect()
            })
            .collect();
        Self::assemble_with_incidence(verts, planes, incid)
    }

    fn assemble_with_incidence(
        verts: Vec<Point3<S>>,
        planes: Vec<HalfSpace3<S>>,
        incid: Vec<Vec<u32>>,
    ) -> Self {
        // extreme vertices have three incident planes with independent normals
        let keep_vert: Vec<bool> = incid
            .iter()
            .map(|inc| {
                if inc.len() < 3 {
                    return false;
                }
                if inc.len() == 3 {
                    let n = |k: u32| &planes[k as usize].normal;
                    return !det3(n(inc[0]), n(inc[1]), n(inc[2])).is_zero();
                }
                normals_span_space(inc.iter().map(|&k| &planes[k as usize].normal))
            })
            .collect();
        let verts_k: Vec<(Point3<S>, Vec<u32>)> = verts
            .into_iter()
            .zip(incid)
            .zip(keep_vert)
            .filter(|(_, k)| *k)
            .map(|(vi, _)| vi)
            .collect();
        // facets are planes touching three non-collinear kept vertices
        let mut on_plane: Vec<Vec<usize>> = vec![Vec::new(); planes.len()];
        for (vi, (_, inc)) in verts_k.iter().enumerate() {
            for &k in inc {
                on_plane[k as usize].push(vi);
            }
        }
        let mut remap = vec![u32::MAX; planes.len()];
        let mut new_planes = Vec::new();
        for (k, idx) in on_plane.iter().enumerate() {
            if idx.len() >= 3 && !collinear(idx.iter().map(|&i| &verts_k[i].0)) {
                remap[k] = new_planes.len() as u32;
                new_planes.push(planes[k].clone());
            }
        }
        let mut pairs: Vec<(Point3<S>, Vec<u32>)> = verts_k
            .into_iter()
            .map(|(p, inc)| {
                let mut ni: Vec<u32> = inc
                    .iter()
                    .map(|&k| remap[k as usize])
                    .filter(|&k| k != u32::MAX)
                    .collect();
                ni.sort_unstable();
                (p, ni)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.lex_cmp(&b.0));
        let (verts, incid): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        let (lo, hi) = bounds(&verts);
        Polytope3 {
            verts,
            planes: new_planes,
            incid,
            lo,
            hi,
            flat: false,
        }
    }

    /// Axis-aligned box `lo <= p <= hi`.
    pub fn axis_box(lo: [S; 3], hi: [S; 3]) -> Self {
        let mut verts = Vec::new();
        for mask in 0..8 {
            let pick = |k: usize| {
                if mask & (1 << k) != 0 {
                    hi[k].clone()
                } else {
                    lo[k].clone()
                }
            };
            verts.push(Point3::new(pick(0), pick(1), pick(2)));
        }
        let mut planes = Vec::new();
        for k in 0..3 {
            let mut n = [S::zero(), S::zero(), S::zero()];
            n[k] = S::one();
            planes.push(HalfSpace3 {
                normal: n.clone(),
                offset: hi[k].clone(),
            });
            n[k] = -S::one();
            planes.push(HalfSpace3 {
                normal: n,
                offset: -lo[k].clone(),
            });
        }
        Self::assemble(verts, planes)
    }

    /// `poly × [s0, s1]`.
    pub fn prism(poly: &Poly2<S>, s0: S, s1: S) -> Self {
        assert!(s0 < s1, "prism needs s0 < s1");
        let mut verts = Vec::new();
        for p in poly.verts() {
            verts.push(Point3::new(p.x.clone(), p.v.clone(), s0.clone()));
            verts.push(Point3::new(p.x.clone(), p.v.clone(), s1.clone()));
        }
        let mut planes: Vec<HalfSpace3<S>> = poly
            .halfplanes()
            .into_iter()
            .map(|(a, b, c)| HalfSpace3::vertical(a, b, c))
            .collect();
        planes.push(HalfSpace3::s_at_most(s1));
        planes.push(HalfSpace3::s_at_least(s0));
        Self::assemble(verts, planes)
    }

    /// Bounded intersection of half-spaces, clipped from the box `[lo, hi]`.
    pub fn from_halfspaces(hs: &[HalfSpace3<S>], lo: [S; 3], hi: [S; 3]) -> Option<Self> {
        let mut cur = Self::axis_box(lo, hi);
        for h in hs {
            cur = cur.clip(h)?;
        }
        Some(cur)
    }

    pub fn verts(&self) -> &[Point3<S>] {
        &self.verts
    }

    pub fn planes(&self) -> &[HalfSpace3<S>] {
        &self.planes
    }

    pub fn is_flat(&self) -> bool {
        self.flat
    }

    pub fn bbox(&self) -> (&[S; 3], &[S; 3]) {
        (&self.lo, &self.hi)
    }

    /// Smallest and largest parameter coordinate.
    pub fn s_range(&self) -> (S, S) {
        (self.lo[2].clone(), self.hi[2].clone())
    }

    /// `true` when the open boxes overlap.
    pub fn bbox_overlaps(&self, o: &Self) -> bool {
        (0..3).all(|k| self.lo[k] < o.hi[k] && o.lo[k] < self.hi[k])
    }

    /// `self ∩ h`; `None` iff the result has zero volume.
    pub fn clip(&self, h: &HalfSpace3<S>) -> Option<Self> {
        if self.flat {
            return None;
        }
        let vals: Vec<S> = self.verts.iter().map(|p| h.eval(p)).collect();
        let signs: Vec<Ordering> = vals.iter().map(sign).collect();
        if signs.iter().all(|s| *s != Ordering::Greater) {
            return Some(self.clone());
        }
        if signs.iter().all(|s| *s != Ordering::Less) {
            return None;
        }
        let new_k = self.planes.len() as u32;
        let mut verts = Vec::new();
        let mut incid = Vec::new();
        for (i, p) in self.verts.iter().enumerate() {
            match signs[i] {
                Ordering::Less => {
                    verts.push(p.clone());
                    incid.push(self.incid[i].clone());
                }
                Ordering::Equal => {
                    verts.push(p.clone());
                    let mut inc = self.incid[i].clone();
                    inc.push(new_k);
                    incid.push(inc);
                }
                Ordering::Greater => {}
            }
        }
        for i in 0..self.verts.len() {
            if signs[i] != Ordering::Less {
                continue;
            }
            for j in 0..self.verts.len() {
                if signs[j] != Ordering::Greater {
                    continue;
                }
                if common_count(&self.incid[i], &self.incid[j]) < 2 {
                    continue;
                }
                let (p, q) = (&self.verts[i], &self.verts[j]);
                let t = vals[i].clone() / (vals[i].clone() - vals[j].clone());
                let d = q.sub(p);
                verts.push(Point3::new(
                    p.x.clone() + t.clone() * d[0].clone(),
                    p.v.clone() + t.clone() * d[1].clone(),
                    p.s.clone() + t * d[2].clone(),
                ));
                let mut inc: Vec<u32> = self.incid[i]
                    .iter()
                    .filter(|k| self.incid[j].binary_search(k).is_ok())
                    .copied()
                    .collect();
                inc.push(new_k);
                incid.push(inc);
            }
        }
        let mut planes = self.planes.clone();
        planes.push(h.clone());
        Some(Self::assemble_with_incidence(verts, planes, incid))
    }

    /// Exact intersection; `None` iff it has zero volume.
    pub fn intersect(&self, o: &Self) -> Option<Self> {
        if !self.bbox_overlaps(o) {
            return None;
        }
        let mut cur = self.clone();
        for h in &o.planes {
            cur = cur.clip(h)?;
        }
        Some(cur)
    }

    /// `self` minus `o` as interior-disjoint convex pieces.
    pub fn subtract(&self, o: &Self) -> Vec<Self> {
        if !self.bbox_overlaps(o) {
            return vec![self.clone()];
        }
        let mut out = Vec::new();
        let mut rest = Some(self.clone());
        for h in &o.planes {
            let Some(r) = rest.take() else { break };
            if let Some(piece) = r.clip(&h.flipped()) {
                out.push(piece);
            }
            rest = r.clip(h);
        }
        out
    }

    /// The union of two interior-disjoint polytopes when it is convex.
    pub fn convex_union(&self, o: &Self) -> Option<Self> {
        if (0..3).any(|k| self.hi[k] < o.lo[k] || o.hi[k] < self.lo[k]) {
            return None;
        }
        Self::union_if_convex(&[self.clone(), o.clone()])
    }

    /// The union of interior-disjoint polytopes when it is convex.
    ///
    /// A convex union has every facet on a facet plane of one of the parts.
    pub fn union_if_convex(parts: &[Self]) -> Option<Self> {
        let first = parts.first()?;
        let mut lo = first.lo.clone();
        let mut hi = first.hi.clone();
        for p in &parts[1..] {
            for k in 0..3 {
                if p.lo[k] < lo[k] {
                    lo[k] = p.lo[k].clone();
                }
                if p.hi[k] > hi[k] {
                    hi[k] = p.hi[k].clone();
                }
            }
        }
        let mut keep: Vec<HalfSpace3<S>> = Vec::new();
        for h in parts.iter().flat_map(|p| p.planes.iter()) {
            if keep.contains(h) {
                continue;
            }
            if parts
                .iter()
                .flat_map(|p| p.verts.iter())
                .all(|q| sign(&h.eval(q)) != Ordering::Greater)
            {
                keep.push(h.clone());
            }
        }
        let cur = Self::from_halfspaces(&keep, lo, hi)?;
        let total = parts.iter().fold(S::zero(), |acc, p| acc + p.volume());
        (cur.volume() == total).then_some(cur)
    }

    /// `true` when the two polytopes meet along a polygon of positive area.
    pub fn shares_facet(&self, o: &Self) -> bool {
        if (0..3).any(|k| self.hi[k] < o.lo[k] || o.hi[k] < self.lo[k]) {
            return false;
        }
        for (k, h) in self.planes.iter().enumerate() {
            let f = h.flipped();
            let Some(l) = o.planes.iter().position(|g| *g == f) else {
                continue;
            };
            let drop = (0..3)
                .max_by(|&a, &b| cmp(&h.normal[a].abs(), &h.normal[b].abs()))
                .expect("axes");
            let proj = |p: &Point3<S>| {
                let c = p.coords();
                let (u, w) = match drop {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                Point2::new(c[u].clone(), c[w].clone())
            };
            let a: Vec<Point2<S>> = self
                .face_cycle(k)
                .into_iter()
                .map(|i| proj(&self.verts[i]))
                .collect();
            let b: Vec<Point2<S>> = o
                .face_cycle(l)
                .into_iter()
                .map(|i| proj(&o.verts[i]))
                .collect();
            if let (Ok(a), Ok(b)) = (Poly2::hull(&a), Poly2::hull(&b)) {
                if a.intersect(&b).is_some() {
                    return true;
                }
            }
        }
        false
    }

    pub fn contains_point(&self, p: &Point3<S>) -> bool {
        self.planes
            .iter()
            .all(|h| sign(&h.eval(p)) != Ordering::Greater)
    }

    pub fn contains_point_strict(&self, p: &Point3<S>) -> bool {
        self.planes
            .iter()
            .all(|h| sign(&h.eval(p)) == Ordering::Less)
    }

    /// Closed containment of `o` in `self`.
    pub fn contains(&self, o: &Self) -> bool {
        o.verts.iter().all(|p| self.contains_point(p))
    }

    /// Interior point (vertex average).
    pub fn centroid(&self) -> Point3<S> {
        let n = S::from_int(self.verts.len() as i64);
        let mut acc = [S::zero(), S::zero(), S::zero()];
        for p in &self.verts {
            for (k, c) in p.coords().into_iter().enumerate() {
                acc[k] = acc[k].clone() + c.clone();
            }
        }
        let [x, v, s] = acc;
        Point3::new(x / n.clone(), v / n.clone(), s / n)
    }

    /// Each facet as a counter-clockwise (seen from outside) cycle of vertex indices.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        (0..self.planes.len()).map(|k| self.face_cycle(k)).collect()
    }

    fn face_cycle(&self, k: usize) -> Vec<usize> {
        let idx: Vec<usize> = (0..self.verts.len())
            .filter(|&i| self.incid[i].binary_search(&(k as u32)).is_ok())
            .collect();
        let n = &self.planes[k].normal;
        // drop the coordinate with the largest |normal| component
        let drop = (0..3)
            .max_by(|&a, &b| cmp(&n[a].abs(), &n[b].abs()))
            .expect("three axes");
        let proj = |p: &Point3<S>| {
            let c = p.coords();
            let (u, w): (usize, usize) = match drop {
                0 => (1, 2),
                1 => (2, 0),
                _ => (0, 1),
            };
            Point2::new(c[u].clone(), c[w].clone())
        };
        let mut pts: Vec<(Point2<S>, usize)> =
            idx.iter().map(|&i| (proj(&self.verts[i]), i)).collect();
        pts.sort_by(|a, b| a.0.lex_cmp(&b.0));
        let chain = |it: &mut dyn Iterator<Item = &(Point2<S>, usize)>| {
            let mut h: Vec<(Point2<S>, usize)> = Vec::new();
            for p in it {
                while h.len() >= 2
                    && sign(&orient(&h[h.len() - 2].0, &h[h.len() - 1].0, &p.0))
                        != Ordering::Greater
                {
                    h.pop();
                }
                h.push(p.clone());
            }
            h.pop();
            h
        };
        let mut ring = chain(&mut pts.iter());
        ring.extend(chain(&mut pts.iter().rev()));
        let mut cyc: Vec<usize> = ring.into_iter().map(|(_, i)| i).collect();
        // projected orientation flips with the sign of the dropped component
        if sign(&n[drop]) == Ordering::Less {
            cyc.reverse();
        }
        cyc
    }

    /// Exact volume in v-units (fan triangulation from the first vertex).
    pub fn volume(&self) -> S {
        if self.flat || self.verts.is_empty() {
            return S::zero();
        }
        let apex = &self.verts[0];
        let mut six = S::zero();
        for k in 0..self.planes.len() {
            if self.incid[0].binary_search(&(k as u32)).is_ok() {
                continue;
            }
            let cyc = self.face_cycle(k);
            let a = self.verts[cyc[0]].sub(apex);
            for w in cyc[1..].windows(2) {
                let b = self.verts[w[0]].sub(apex);
                let c = self.verts[w[1]].sub(apex);
                six = six + det3(&a, &b, &c).abs();
            }
        }
        six / S::from_int(6)
    }

    /// Cross-section at `s = s0`; `None` when it has zero area.
    pub fn slice_at_s(&self, s0: &S) -> Option<Poly2<S>> {
        if self.flat || *s0 <= self.lo[2] || *s0 >= self.hi[2] {
            return None;
        }
        let mut pts = Vec::new();
        for (i, p) in self.verts.iter().enumerate() {
            match cmp(&p.s, s0) {
                Ordering::Equal => pts.push(p.xv()),
                Ordering::Less => {
                    for (j, q) in self.verts.iter().enumerate() {
                        if q.s > *s0 && common_count(&self.incid[i], &self.incid[j]) >= 2 {
                            let t = (s0.clone() - p.s.clone()) / (q.s.clone() - p.s.clone());
                            pts.push(Point2::new(
                                p.x.clone() + t.clone() * (q.x.clone() - p.x.clone()),
                                p.v.clone() + t * (q.v.clone() - p.v.clone()),
                            ));
                        }
                    }
                }
                Ordering::Greater => {}
            }
        }
        Poly2::hull(&pts).ok()
    }

    /// Image under a projective map whose weight is positive on `self`.
    pub fn map(&self, f: &Projective3<S>) -> Result<Self, GeomError> {
        let mut verts = Vec::with_capacity(self.verts.len());
        for p in &self.verts {
            if sign(&f.weight(p)) != Ordering::Greater {
                return Err(GeomError::ProjectiveWeight);
            }
            verts.push(f.apply(p).expect("positive weight"));
        }
        let planes: Vec<HalfSpace3<S>> = self.planes.iter().map(|h| f.push_halfspace(h)).collect();
        let incid = self.incid.clone();
        let mut out = Self::assemble_with_incidence(verts, planes, incid);
        out.flat = self.flat;
        Ok(out)
    }

    /// Translation by an `s`-affine vector: `(x, v, s) ↦ (x + a + b·s, v + c + d·s, s)`.
    pub fn shear_translate(&self, a: &S, b: &S, c: &S, d: &S) -> Self {
        self.map(&Projective3::shear_translation(
            a.clone(),
            b.clone(),
            c.clone(),
            d.clone(),
        ))
        .expect("affine maps have unit weight")
    }
}

fn normals_span_space<'a, S: Scalar + 'a>(ns: impl Iterator<Item = &'a [S; 3]>) -> bool {
    let ns: Vec<&[S; 3]> = ns.collect();
    for i in 0..ns.len() {
        for j in i + 1..ns.len() {
            let c = cross(ns[i], ns[j]);
            if c.iter().all(Zero::is_zero) {
                continue;
            }
            if ns[j + 1..].iter().any(|n| !dot(&c, n).is_zero()) {
                return true;
            }
        }
    }
    false
}

fn collinear<'a, S: Scalar + 'a>(pts: impl Iterator<Item = &'a Point3<S>>) -> bool {
    let pts: Vec<&Point3<S>> = pts.collect();
    let a = pts[0];
    let Some(b) = pts.iter().find(|p| **p != a) else {
        return true;
    };
    let ab = b.sub(a);
    pts.iter()
        .all(|p| cross(&ab, &p.sub(a)).iter().all(Zero::is_zero))
}

impl<S: Scalar + fmt::Display> fmt::Display for Polytope3<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.verts.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Exact convex hull. Coplanar input gives a flat polytope of volume zero.
///
/// Facets are found by testing every supporting triple, which is cheap for
/// the handful of vertices certificate polytopes carry.
pub fn hull3<S: Scalar>(points: &[Point3<S>]) -> Result<Polytope3<S>, GeomError> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.lex_cmp(b));
    pts.dedup();
    if pts.len() < 4 {
        return Err(GeomError::TooFewPoints(pts.len()));
    }
    let n = pts.len();
    let mut planes: Vec<HalfSpace3<S>> = Vec::new();
    let mut any_normal = false;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let nrm = cross(&pts[j].sub(&pts[i]), &pts[k].sub(&pts[i]));
                if nrm.iter().all(Zero::is_zero) {
                    continue;
                }
                any_normal = true;
                let off = dot(
                    &nrm,
                    &[pts[i].x.clone(), pts[i].v.clone(), pts[i].s.clone()],
                );
                let h = HalfSpace3 {
                    normal: nrm,
                    offset: off,
                };
                let signs: Vec<Ordering> = pts.iter().map(|p| sign(&h.eval(p))).collect();
                let h = if signs.iter().all(|s| *s != Ordering::Greater) {
                    h
                } else if signs.iter().all(|s| *s != Ordering::Less) {
                    h.flipped()
                } else {
                    continue;
                };
                if signs.iter().all(|s| *s == Ordering::Equal) {
                    continue;
                }
                let h = h.normalized();
                if !planes.contains(&h) {
                    planes.push(h);
                }
            }
        }
    }
    if planes.is_empty() {
        // coplanar or collinear input
        let extreme = if any_normal {
            flat_extremes(&pts)
        } else {
            collinear_extremes(&pts)
        };
        let (lo, hi) = bounds(&extreme);
        return Ok(Polytope3 {
            incid: vec![Vec::new(); extreme.len()],
            verts: extreme,
            planes: Vec::new(),
            lo,
            hi,
            flat: true,
        });
    }
    Ok(Polytope3::assemble(pts, planes))
}

fn collinear_extremes<S: Scalar>(pts: &[Point3<S>]) -> Vec<Point3<S>> {
    // sorted input: the ends of the segment
    vec![pts[0].clone(), pts[pts.len() - 1].clone()]
}

fn flat_extremes<S: Scalar>(pts: &[Point3<S>]) -> Vec<Point3<S>> {
    let a = &pts[0];
    let nrm = pts
        .iter()
        .flat_map(|b| pts.iter().map(move |c| cross(&b.sub(a), &c.sub(a))))
        .find(|c| !c.iter().all(Zero::is_zero))
        .expect("not collinear");
    let drop = (0..3)
        .max_by(|&x, &y| cmp(&nrm[x].abs(), &nrm[y].abs()))
        .expect("axes");
    let proj = |p: &Point3<S>| {
        let c = p.coords();
        let keep: Vec<usize> = (0..3).filter(|&k| k != drop).collect();
        Point2::new(c[keep[0]].clone(), c[keep[1]].clone())
    };
    let poly =
        Poly2::hull(&pts.iter().map(proj).collect::<Vec<_>>()).expect("non-degenerate plane");
    let mut out: Vec<Point3<S>> = pts
        .iter()
        .filter(|p| poly.verts().contains(&proj(p)))
        .cloned()
        .collect();
    out.sort_by(|a, b| a.lex_cmp(b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat, Rat};
    use num_traits::Signed;

    fn p3(x: Rat, v: Rat, s: Rat) -> Point3<Rat> {
        Point3::new(x, v, s)
    }

    fn a0_prism() -> Polytope3<Rat> {
        let a0 = Poly2::new(vec![
            Point2::new(int(-1), int(0)),
            Point2::new(rat(-1, 2), rat(1, 2)),
            Point2::new(int(0), int(0)),
        ])
        .unwrap();
        Polytope3::prism(&a0, int(0), int(1))
    }

    /// The tetrahedron listed first among the non-primary domains over [7/17, 5/12].
    pub(crate) fn p0_vertices() -> Vec<Point3<Rat>> {
        vec![
            p3(rat(-1, 8), rat(1, 24), rat(5, 12)),
            p3(rat(-1, 6), int(0), rat(5, 12)),
            p3(rat(-2, 17), rat(1, 17), rat(7, 17)),
            p3(rat(-3, 17), rat(1, 17), rat(7, 17)),
        ]
    }

    fn tetra_det_volume(v: &[Point3<Rat>]) -> Rat {
        det3(&v[1].sub(&v[0]), &v[2].sub(&v[0]), &v[3].sub(&v[0])).abs() / int(6)
    }

    #[test]
    fn prism_volume_and_slices() {
        let pr = a0_prism();
        assert_eq!(pr.volume(), rat(1, 4));
        assert_eq!(pr.faces().len(), 5);
        let sl = pr.slice_at_s(&rat(1, 3)).unwrap();
        assert_eq!(sl.area(), rat(1, 4));
        assert!(pr.slice_at_s(&int(2)).is_none());
        let cut = pr.clip(&HalfSpace3::s_at_most(rat(1, 2))).unwrap();
        let want = Polytope3::prism(&sl, int(0), rat(1, 2));
        assert_eq!(cut, want);
        assert_eq!(cut.volume(), rat(1, 8));
    }

    #[test]
    fn p0_tetrahedron() {
        let vs = p0_vertices();
        let t = hull3(&vs).unwrap();
        assert_eq!(t.verts().len(), 4);
        assert_eq!(t.faces().len(), 4);
        let oracle = tetra_det_volume(&vs);
        assert_eq!(t.volume(), oracle);
        assert!(t.clip(&HalfSpace3::s_at_most(rat(2, 5))).is_none());
        assert!(t.slice_at_s(&rat(5, 12)).is_none());
        assert!(t.slice_at_s(&rat(207, 500)).is_some());
    }

    #[test]
    fn hull_absorbs_interior_points() {
        let mut pts = Vec::new();
        for m in 0..8 {
            let c = |k: i64| if m & (1 << k) != 0 { int(1) } else { int(0) };
            pts.push(p3(c(0), c(1), c(2)));
        }
        pts.push(p3(rat(1, 2), rat(1, 2), rat(1, 2)));
        // a point in the middle of a face is not extreme either
        pts.push(p3(rat(1, 2), rat(1, 2), int(1)));
        let h = hull3(&pts).unwrap();
        assert_eq!(h.verts().len(), 8);
        assert_eq!(h.planes().len(), 6);
        assert_eq!(h.volume(), int(1));
    }

    #[test]
    fn coplanar_hull_is_flat() {
        let pts = vec![
            p3(int(0), int(0), int(0)),
            p3(int(1), int(0), int(0)),
            p3(int(0), int(1), int(0)),
            p3(int(1), int(1), int(0)),
            p3(rat(1, 2), rat(1, 2), int(0)),
        ];
        let h = hull3(&pts).unwrap();
        assert!(h.is_flat());
        assert_eq!(h.verts().len(), 4);
        assert_eq!(h.volume(), int(0));
        assert_eq!(hull3(&pts[..3]).unwrap_err(), GeomError::TooFewPoints(3));
    }

    #[test]
    fn inactive_and_zero_normal_constraints() {
        let pr = a0_prism();
        for h in pr.planes() {
            assert_eq!(pr.clip(h).unwrap(), pr);
        }
        assert_eq!(
            HalfSpace3::new([int(0), int(0), int(0)], int(1)).unwrap_err(),
            GeomError::ZeroNormal
        );
    }

    #[test]
    fn volume_additive_under_cut() {
        let t = hull3(&p0_vertices()).unwrap();
        let h = HalfSpace3::new([int(3), int(-5), int(7)], rat(2, 1) + rat(1, 10)).unwrap();
        let a = t.clip(&h).map(|p| p.volume()).unwrap_or_else(|| int(0));
        let b = t
            .clip(&h.flipped())
            .map(|p| p.volume())
            .unwrap_or_else(|| int(0));
        assert_eq!(a + b, t.volume());
    }
}
