use std::cmp::Ordering;
use std::fmt;

use super::{cmp, sign, GeomError};
use crate::exactnum::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2<S> {
    pub x: S,
    pub v: S,
}

impl<S: Scalar> Point2<S> {
    pub fn new(x: S, v: S) -> Self {
        Point2 { x, v }
    }

    pub fn origin() -> Self {
        Point2 {
            x: S::zero(),
            v: S::zero(),
        }
    }

    pub fn add(&self, dx: &S, dv: &S) -> Self {
        Point2 {
            x: self.x.clone() + dx.clone(),
            v: self.v.clone() + dv.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Point2 {
            x: self.x.clone() - o.x.clone(),
            v: self.v.clone() - o.v.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        Point2 {
            x: -self.x.clone(),
            v: -self.v.clone(),
        }
    }

    pub fn lex_cmp(&self, o: &Self) -> Ordering {
        cmp(&self.x, &o.x).then_with(|| cmp(&self.v, &o.v))
    }
}

impl<S: fmt::Display> fmt::Display for Point2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.v)
    }
}

/// Twice the signed area of the triangle `a b c`.
pub(crate) fn orient<S: Scalar>(a: &Point2<S>, b: &Point2<S>, c: &Point2<S>) -> S {
    (b.x.clone() - a.x.clone()) * (c.v.clone() - a.v.clone())
        - (b.v.clone() - a.v.clone()) * (c.x.clone() - a.x.clone())
}

/// Strictly convex polygon, counter-clockwise, least vertex first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly2<S> {
    verts: Vec<Point2<S>>,
}

impl<S: Scalar> Poly2<S> {
    /// Builds a polygon from the vertices of a convex polygon listed in cyclic
    /// order (either orientation). Repeated and collinear vertices are dropped.
    pub fn new(verts: Vec<Point2<S>>) -> Result<Self, GeomError> {
        let mut vs = verts;
        vs.dedup();
        while vs.len() > 1 && vs.first() == vs.last() {
            vs.pop();
        }
        if vs.len() < 3 {
            return Err(GeomError::DegeneratePolygon);
        }
        let area2 = shoelace2(&vs);
        match sign(&area2) {
            Ordering::Equal => return Err(GeomError::DegeneratePolygon),
            Ordering::Less => vs.reverse(),
            Ordering::Greater => {}
        }
        Self::canonical(vs).ok_or(GeomError::DegeneratePolygon)
    }

    /// Convex hull of an arbitrary point set.
    pub fn hull(points: &[Point2<S>]) -> Result<Self, GeomError> {
        let mut pts: Vec<Point2<S>> = points.to_vec();
        pts.sort_by(|a, b| a.lex_cmp(b));
        pts.dedup();
        if pts.len() < 3 {
            return Err(GeomError::DegeneratePolygon);
        }
        let mut lower: Vec<Point2<S>> = Vec::new();
        for p in &pts {
            while lower.len() >= 2
                && sign(&orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p))
                    != Ordering::Greater
            {
                lower.pop();
            }
            lower.push(p.clone());
        }
        let mut upper: Vec<Point2<S>> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2
                && sign(&orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p))
                    != Ordering::Greater
            {
                upper.pop();
            }
            upper.push(p.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Self::new(lower)
    }

    fn canonical(mut vs: Vec<Point2<S>>) -> Option<Self> {
        // drop collinear vertices; vs is counter-clockwise
        loop {
            let n = vs.len();
            if n < 3 {
                return None;
            }
            let bad = (0..n).find(|&i| {
                let a = &vs[(i + n - 1) % n];
                let b = &vs[i];
                let c = &vs[(i + 1) % n];
                sign(&orient(a, b, c)) != Ordering::Greater
            });
            match bad {
                Some(i) => {
                    vs.remove(i);
                }
                None => break,
            }
        }
        let first = (0..vs.len())
            .min_by(|&i, &j| vs[i].lex_cmp(&vs[j]))
            .expect("non-empty");
        vs.rotate_left(first);
        Some(Poly2 { verts: vs })
    }

    pub fn verts(&self) -> &[Point2<S>] {
        &self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    /// Shoelace area in v-units.
    pub fn area(&self) -> S {
        shoelace2(&self.verts) / S::from_int(2)
    }

    /// Edge constraints `a·x + b·v <= c` whose intersection is the polygon.
    pub fn halfplanes(&self) -> Vec<(S, S, S)> {
        let n = self.verts.len();
        (0..n)
            .map(|i| {
                let p = &self.verts[i];
                let q = &self.verts[(i + 1) % n];
                // interior is to the left of p -> q
                let a = q.v.clone() - p.v.clone();
                let b = p.x.clone() - q.x.clone();
                let c = a.clone() * p.x.clone() + b.clone() * p.v.clone();
                (a, b, c)
            })
            .collect()
    }

    /// `self ∩ {a·x + b·v <= c}`, or `None` when the result has zero area.
    pub fn clip(&self, a: &S, b: &S, c: &S) -> Result<Option<Self>, GeomError> {
        if a.is_zero() && b.is_zero() {
            return Err(GeomError::ZeroNormal);
        }
        let vals: Vec<S> = self
            .verts
            .iter()
            .map(|p| a.clone() * p.x.clone() + b.clone() * p.v.clone() - c.clone())
            .collect();
        if vals.iter().all(|d| sign(d) != Ordering::Greater) {
            return Ok(Some(self.clone()));
        }
        if vals.iter().all(|d| sign(d) != Ordering::Less) {
            return Ok(None);
        }
        let n = self.verts.len();
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let j = (i + 1) % n;
            let (p, q) = (&self.verts[i], &self.verts[j]);
            let (dp, dq) = (&vals[i], &vals[j]);
            if sign(dp) != Ordering::Greater {
                out.push(p.clone());
            }
            if (sign(dp) == Ordering::Less && sign(dq) == Ordering::Greater)
                || (sign(dp) == Ordering::Greater && sign(dq) == Ordering::Less)
            {
                let t = dp.clone() / (dp.clone() - dq.clone());
                out.push(Point2 {
                    x: p.x.clone() + t.clone() * (q.x.clone() - p.x.clone()),
                    v: p.v.clone() + t * (q.v.clone() - p.v.clone()),
                });
            }
        }
        Ok(Poly2::new(out).ok())
    }

    /// Exact convex intersection; `None` iff it has zero area.
    pub fn intersect(&self, other: &Self) -> Option<Self> {
        if !self.bbox_overlaps(other) {
            return None;
        }
        let mut cur = self.clone();
        for (a, b, c) in other.halfplanes() {
            cur = cur.clip(&a, &b, &c).expect("edge normal is non-zero")?;
        }
        Some(cur)
    }

    fn bbox(&self) -> (S, S, S, S) {
        let mut it = self.verts.iter();
        let f = it.next().expect("non-empty");
        let (mut x0, mut x1, mut v0, mut v1) = (f.x.clone(), f.x.clone(), f.v.clone(), f.v.clone());
        for p in it {
            if p.x < x0 {
                x0 = p.x.clone();
            }
            if p.x > x1 {
                x1 = p.x.clone();
            }
            if p.v < v0 {
                v0 = p.v.clone();
            }
            if p.v > v1 {
                v1 = p.v.clone();
            }
        }
        (x0, x1, v0, v1)
    }

    pub(crate) fn bbox_overlaps(&self, o: &Self) -> bool {
        let (ax0, ax1, av0, av1) = self.bbox();
        let (bx0, bx1, bv0, bv1) = o.bbox();
        ax0 < bx1 && bx0 < ax1 && av0 < bv1 && bv0 < av1
    }

    pub fn translate(&self, dx: &S, dv: &S) -> Self {
        Poly2 {
            verts: self.verts.iter().map(|p| p.add(dx, dv)).collect(),
        }
    }

    /// Point reflection through the origin.
    pub fn negate(&self) -> Self {
        let vs: Vec<_> = self.verts.iter().map(Point2::neg).collect();
        Self::canonical(vs).expect("negation preserves shape")
    }

    /// Vertex average; strictly inside.
    pub fn centroid(&self) -> Point2<S> {
        let n = S::from_int(self.verts.len() as i64);
        let (sx, sv) = self.verts.iter().fold((S::zero(), S::zero()), |(x, v), p| {
            (x + p.x.clone(), v + p.v.clone())
        });
        Point2 {
            x: sx / n.clone(),
            v: sv / n,
        }
    }

    /// Interior test (boundary excluded).
    pub fn contains_strict(&self, p: &Point2<S>) -> bool {
        let n = self.verts.len();
        (0..n).all(|i| {
            sign(&orient(&self.verts[i], &self.verts[(i + 1) % n], p)) == Ordering::Greater
        })
    }

    /// Closed containment.
    pub fn contains(&self, p: &Point2<S>) -> bool {
        let n = self.verts.len();
        (0..n).all(|i| sign(&orient(&self.verts[i], &self.verts[(i + 1) % n], p)) != Ordering::Less)
    }

    /// `true` when `p` lies on the boundary.
    pub fn on_boundary(&self, p: &Point2<S>) -> bool {
        self.contains(p) && !self.contains_strict(p)
    }

    pub fn contains_poly(&self, o: &Self) -> bool {
        o.verts.iter().all(|p| self.contains(p))
    }

    /// Maps every vertex; the map must be an affine bijection.
    pub fn map_points(&self, f: impl Fn(&Point2<S>) -> Point2<S>) -> Self {
        Poly2::new(self.verts.iter().map(f).collect()).expect("affine bijection keeps polygons")
    }

    /// The union of two interior-disjoint polygons when it is convex.
    pub fn convex_union(&self, o: &Self) -> Option<Self> {
        let (ax0, ax1, av0, av1) = self.bbox();
        let (bx0, bx1, bv0, bv1) = o.bbox();
        if ax1 < bx0 || bx1 < ax0 || av1 < bv0 || bv1 < av0 {
            return None;
        }
        Self::union_if_convex(&[self.clone(), o.clone()])
    }

    /// The union of interior-disjoint polygons when it is convex.
    ///
    /// Every edge of a convex union lies on an edge line of one of the parts,
    /// so the union is the intersection of those edge half-planes that hold
    /// for all parts, provided the areas add up.
    pub fn union_if_convex(parts: &[Self]) -> Option<Self> {
        let first = parts.first()?;
        let (mut x0, mut x1, mut v0, mut v1) = first.bbox();
        for p in &parts[1..] {
            let (a0, a1, b0, b1) = p.bbox();
            if a0 < x0 {
                x0 = a0;
            }
            if a1 > x1 {
                x1 = a1;
            }
            if b0 < v0 {
                v0 = b0;
            }
            if b1 > v1 {
                v1 = b1;
            }
        }
        let mut cur = Poly2::new(vec![
            Point2::new(x0.clone(), v0.clone()),
            Point2::new(x1.clone(), v0),
            Point2::new(x1, v1.clone()),
            Point2::new(x0, v1),
        ])
        .ok()?;
        let holds = |a: &S, b: &S, c: &S| {
            parts
                .iter()
                .flat_map(|p| p.verts.iter())
                .all(|q| a.clone() * q.x.clone() + b.clone() * q.v.clone() <= *c)
        };
        for p in parts {
            for (a, b, c) in p.halfplanes() {
                if holds(&a, &b, &c) {
                    cur = cur.clip(&a, &b, &c).expect("non-zero")?;
                }
            }
        }
        let total = parts.iter().fold(S::zero(), |acc, p| acc + p.area());
        (cur.area() == total).then_some(cur)
    }

    /// `true` when the two polygons meet along a segment of positive length.
    pub fn shares_edge(&self, o: &Self) -> bool {
        let (ax0, ax1, av0, av1) = self.bbox();
        let (bx0, bx1, bv0, bv1) = o.bbox();
        if ax1 < bx0 || bx1 < ax0 || av1 < bv0 || bv1 < av0 {
            return false;
        }
        let n = self.verts.len();
        let m = o.verts.len();
        for i in 0..n {
            let (p, q) = (&self.verts[i], &self.verts[(i + 1) % n]);
            for j in 0..m {
                let (r, t) = (&o.verts[j], &o.verts[(j + 1) % m]);
                if !orient(p, q, r).is_zero() || !orient(p, q, t).is_zero() {
                    continue;
                }
                // parametrize along p -> q; the neighbour runs the other way
                let d = q.sub(p);
                let along = |z: &Point2<S>| {
                    let w = z.sub(p);
                    w.x * d.x.clone() + w.v * d.v.clone()
                };
                let len = along(q);
                let (lo, hi) = (along(t), along(r));
                let lo = if lo > S::zero() { lo } else { S::zero() };
                let hi = if hi < len { hi } else { len };
                if lo < hi {
                    return true;
                }
            }
        }
        false
    }

    /// `self` minus the convex polygon `o`, as disjoint convex pieces.
    pub fn subtract(&self, o: &Self) -> Vec<Self> {
        if self.intersect(o).is_none() {
            return vec![self.clone()];
        }
        let mut out = Vec::new();
        let mut rest = Some(self.clone());
        for (a, b, c) in o.halfplanes() {
            let Some(r) = rest.take() else { break };
            let outside = r
                .clip(&-a.clone(), &-b.clone(), &-c.clone())
                .expect("non-zero");
            if let Some(piece) = outside {
                out.push(piece);
            }
            rest = r.clip(&a, &b, &c).expect("non-zero");
        }
        out
    }
}

fn shoelace2<S: Scalar>(vs: &[Point2<S>]) -> S {
    let n = vs.len();
    (0..n).fold(S::zero(), |acc, i| {
        let p = &vs[i];
        let q = &vs[(i + 1) % n];
        acc + p.x.clone() * q.v.clone() - q.x.clone() * p.v.clone()
    })
}

impl<S: Scalar + fmt::Display> fmt::Display for Poly2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.verts.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
