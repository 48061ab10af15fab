use super::{GeomError, HalfSpace3, Point2, Point3, Poly2};
use crate::exactnum::Scalar;

/// Planar affine map `p ↦ M·p + t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Affine2<S> {
    pub m: [[S; 2]; 2],
    pub t: [S; 2],
}

impl<S: Scalar> Affine2<S> {
    pub fn identity() -> Self {
        Self::translation(S::zero(), S::zero())
    }

    pub fn translation(dx: S, dv: S) -> Self {
        Affine2 {
            m: [[S::one(), S::zero()], [S::zero(), S::one()]],
            t: [dx, dv],
        }
    }

    /// `p ↦ c·p + t`.
    pub fn scaling(c: S, dx: S, dv: S) -> Self {
        Affine2 {
            m: [[c.clone(), S::zero()], [S::zero(), c]],
            t: [dx, dv],
        }
    }

    pub fn apply(&self, p: &Point2<S>) -> Point2<S> {
        Point2::new(
            self.m[0][0].clone() * p.x.clone()
                + self.m[0][1].clone() * p.v.clone()
                + self.t[0].clone(),
            self.m[1][0].clone() * p.x.clone()
                + self.m[1][1].clone() * p.v.clone()
                + self.t[1].clone(),
        )
    }

    pub fn det(&self) -> S {
        self.m[0][0].clone() * self.m[1][1].clone() - self.m[0][1].clone() * self.m[1][0].clone()
    }

    pub fn inverse(&self) -> Result<Self, GeomError> {
        let d = self.det();
        if d.is_zero() {
            return Err(GeomError::Singular);
        }
        let m = [
            [
                self.m[1][1].clone() / d.clone(),
                -self.m[0][1].clone() / d.clone(),
            ],
            [-self.m[1][0].clone() / d.clone(), self.m[0][0].clone() / d],
        ];
        let t = [
            -(m[0][0].clone() * self.t[0].clone() + m[0][1].clone() * self.t[1].clone()),
            -(m[1][0].clone() * self.t[0].clone() + m[1][1].clone() * self.t[1].clone()),
        ];
        Ok(Affine2 { m, t })
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Self) -> Self {
        let mut m = [[S::zero(), S::zero()], [S::zero(), S::zero()]];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.m[i][0].clone() * o.m[0][j].clone()
                    + self.m[i][1].clone() * o.m[1][j].clone();
            }
        }
        let q = self.apply(&Point2::new(o.t[0].clone(), o.t[1].clone()));
        Affine2 { m, t: [q.x, q.v] }
    }

    pub fn map_poly(&self, p: &Poly2<S>) -> Poly2<S> {
        p.map_points(|q| self.apply(q))
    }
}

/// Projective map of `(x, v, s)` space in homogeneous coordinates.
///
/// Affine maps are the special case with last row `(0, 0, 0, 1)`. The
/// renormalization similarity lifted to the parameter bundle is genuinely
/// projective because its scale factor depends on `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct Projective3<S> {
    m: [[S; 4]; 4],
    inv: [[S; 4]; 4],
}

fn invert4<S: Scalar>(m: &[[S; 4]; 4]) -> Option<[[S; 4]; 4]> {
    let mut a: Vec<Vec<S>> = m.iter().map(|r| r.to_vec()).collect();
    let mut inv: Vec<Vec<S>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| if i == j { S::one() } else { S::zero() })
                .collect()
        })
        .collect();
    for col in 0..4 {
        let piv = (col..4).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for j in 0..4 {
            a[col][j] = a[col][j].clone() / p.clone();
            inv[col][j] = inv[col][j].clone() / p.clone();
        }
        for r in 0..4 {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..4 {
                    a[r][j] = a[r][j].clone() - f.clone() * a[col][j].clone();
                    inv[r][j] = inv[r][j].clone() - f.clone() * inv[col][j].clone();
                }
            }
        }
    }
    let mut out: [[S; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| S::zero()));
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = inv[i][j].clone();
        }
    }
    Some(out)
}

impl<S: Scalar> Projective3<S> {
    pub fn new(m: [[S; 4]; 4]) -> Result<Self, GeomError> {
        let inv = invert4(&m).ok_or(GeomError::Singular)?;
        Ok(Projective3 { m, inv })
    }

    pub fn identity() -> Self {
        let m = std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { S::one() } else { S::zero() })
        });
        Projective3 { inv: m.clone(), m }
    }

    /// `(x, v, s) ↦ (x + a + b·s, v + c + d·s, s)`.
    pub fn shear_translation(a: S, b: S, c: S, d: S) -> Self {
        let z = S::zero;
        let o = S::one;
        let m = [
            [o(), z(), b.clone(), a.clone()],
            [z(), o(), d.clone(), c.clone()],
            [z(), z(), o(), z()],
            [z(), z(), z(), o()],
        ];
        let inv = [
            [o(), z(), -b, -a],
            [z(), o(), -d, -c],
            [z(), z(), o(), z()],
            [z(), z(), z(), o()],
        ];
        Projective3 { m, inv }
    }

    /// `(x, v, s) ↦ (-x, -v, s)`.
    pub fn point_reflection() -> Self {
        let z = S::zero;
        let o = S::one;
        let m = [
            [-o(), z(), z(), z()],
            [z(), -o(), z(), z()],
            [z(), z(), o(), z()],
            [z(), z(), z(), o()],
        ];
        Projective3 { inv: m.clone(), m }
    }

    pub fn matrix(&self) -> &[[S; 4]; 4] {
        &self.m
    }

    pub fn inverse(&self) -> Self {
        Projective3 {
            m: self.inv.clone(),
            inv: self.m.clone(),
        }
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Self) -> Self {
        let mul = |a: &[[S; 4]; 4], b: &[[S; 4]; 4]| -> [[S; 4]; 4] {
            std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    (0..4).fold(S::zero(), |acc, k| acc + a[i][k].clone() * b[k][j].clone())
                })
            })
        };
        Projective3 {
            m: mul(&self.m, &o.m),
            inv: mul(&o.inv, &self.inv),
        }
    }

    fn hom(&self, p: &Point3<S>, k: usize) -> S {
        self.m[k][0].clone() * p.x.clone()
            + self.m[k][1].clone() * p.v.clone()
            + self.m[k][2].clone() * p.s.clone()
            + self.m[k][3].clone()
    }

    /// Homogeneous weight of the image of `p`.
    pub fn weight(&self, p: &Point3<S>) -> S {
        self.hom(p, 3)
    }

    /// `None` when `p` maps to infinity.
    pub fn apply(&self, p: &Point3<S>) -> Option<Point3<S>> {
        let w = self.weight(p);
        if w.is_zero() {
            return None;
        }
        Some(Point3::new(
            self.hom(p, 0) / w.clone(),
            self.hom(p, 1) / w.clone(),
            self.hom(p, 2) / w,
        ))
    }

    /// Image of a half-space, valid where the weight is positive.
    pub fn push_halfspace(&self, h: &HalfSpace3<S>) -> HalfSpace3<S> {
        let row = [
            h.normal[0].clone(),
            h.normal[1].clone(),
            h.normal[2].clone(),
            -h.offset.clone(),
        ];
        let r: [S; 4] = std::array::from_fn(|j| {
            (0..4).fold(S::zero(), |acc, i| {
                acc + row[i].clone() * self.inv[i][j].clone()
            })
        });
        let [a, b, c, d] = r;
        HalfSpace3::new([a, b, c], -d).expect("invertible map keeps normals non-zero")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat, Rat};
    use crate::geom::{hull3, Polytope3};

    #[test]
    fn affine2_inverse_roundtrip() {
        let f = Affine2::scaling(rat(35, 6), int(1), rat(-1, 3));
        let g = f.inverse().unwrap();
        let p = Point2::new(rat(2, 7), rat(-5, 11));
        assert_eq!(g.apply(&f.apply(&p)), p);
        assert_eq!(f.compose(&g), Affine2::identity());
    }

    #[test]
    fn projective_image_matches_vertex_images() {
        // x' = (x+1)/(1-2s) - 1, v' = v/(1-2s), s' = (5s-2)/(1-2s)
        let m: [[Rat; 4]; 4] = [
            [int(1), int(0), int(2), int(0)],
            [int(0), int(1), int(0), int(0)],
            [int(0), int(0), int(5), int(-2)],
            [int(0), int(0), int(-2), int(1)],
        ];
        let f = Projective3::new(m).unwrap();
        let pts = vec![
            Point3::new(rat(-1, 8), rat(1, 24), rat(5, 12)),
            Point3::new(rat(-1, 6), int(0), rat(5, 12)),
            Point3::new(rat(-2, 17), rat(1, 17), rat(7, 17)),
            Point3::new(rat(-3, 17), rat(1, 17), rat(7, 17)),
        ];
        let t = hull3(&pts).unwrap();
        let img = t.map(&f).unwrap();
        let direct: Vec<_> = pts.iter().map(|p| f.apply(p).unwrap()).collect();
        assert_eq!(img, hull3(&direct).unwrap());
        for h in img.planes() {
            assert!(img.verts().iter().all(|p| h.eval(p) <= int(0)));
        }
        let back = img.map(&f.inverse()).unwrap();
        assert_eq!(back, t);
        let _: &Polytope3<Rat> = &back;
    }
}
