//! The fixed stage: lattice, fundamental parallelogram, the eight unit
//! triangles, the double-cover projection, the involution and the
//! renormalization windows `H_s` and `Y_s`.

use crate::exactnum::Scalar;
use crate::geom::{HalfSpace3, Point2, Poly2, Polytope3};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorusError {
    #[error("parameter must lie in (0, 1/2)")]
    ParameterOutOfRange,
    #[error("pieces of Y_s overlap")]
    Overlap,
}

fn pt<S: Scalar>(x: (i64, i64), v: (i64, i64)) -> Point2<S> {
    Point2::new(S::from_frac(x.0, x.1), S::from_frac(v.0, v.1))
}

/// Lattice generators `(2, 0)` and `(1, -1)` in v-coordinates.
pub fn lattice_generators<S: Scalar>() -> [Point2<S>; 2] {
    [pt((2, 1), (0, 1)), pt((1, 1), (-1, 1))]
}

/// The fundamental parallelogram with corners `±(-3/2, 1/2)`, `±(1/2, 1/2)`.
pub fn fundamental_domain<S: Scalar>() -> Poly2<S> {
    Poly2::new(vec![
        pt((-1, 2), (-1, 2)),
        pt((3, 2), (-1, 2)),
        pt((1, 2), (1, 2)),
        pt((-3, 2), (1, 2)),
    ])
    .expect("parallelogram")
}

/// Representative in the fundamental parallelogram, which is
/// `{-1/2 <= v < 1/2, -1 <= x + v < 1}` (lower and left edges included).
pub fn reduce_mod<S: Scalar>(p: &Point2<S>) -> Point2<S> {
    // (-1, 1) shifts v by one and keeps x + v
    let k = (p.v.clone() + S::half()).floor_val();
    let x = p.x.clone() + k.clone();
    let v = p.v.clone() - k;
    let m = ((x.clone() + v.clone() + S::one()) / S::from_int(2)).floor_val();
    Point2::new(x - m * S::from_int(2), v)
}

/// Integer lattice coordinates `(a, b)` with `p = a·(2,0) + b·(1,-1)`, if `p ∈ Λ`.
pub fn lattice_coords<S: Scalar>(p: &Point2<S>) -> Option<(i64, i64)> {
    let b = -p.v.clone();
    let a2 = p.x.clone() - b.clone();
    let a = a2 / S::from_int(2);
    if a.floor_val() != a || b.floor_val() != b {
        return None;
    }
    Some((a.to_i64()?, b.to_i64()?))
}

/// The double-cover projection: identity on `v >= x`, point reflection otherwise.
pub fn project_pi<S: Scalar>(p: &Point2<S>) -> Point2<S> {
    if p.v >= p.x {
        p.clone()
    } else {
        p.neg()
    }
}

/// Point reflection about the origin, reduced to the fundamental domain.
pub fn iota<S: Scalar>(p: &Point2<S>) -> Point2<S> {
    reduce_mod(&p.neg())
}

/// The four faces of the tetrahedron and their images under the involution.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangleSet<S> {
    pub a: [Poly2<S>; 4],
    pub ia: [Poly2<S>; 4],
}

impl<S: Scalar> TriangleSet<S> {
    /// All eight triangles, `A_0..A_3` then `ι(A_0)..ι(A_3)`.
    pub fn all(&self) -> Vec<&Poly2<S>> {
        self.a.iter().chain(self.ia.iter()).collect()
    }
}

pub fn build_triangles<S: Scalar>() -> TriangleSet<S> {
    let a1 = pt((-1, 1), (0, 1));
    let a2 = pt((-1, 2), (1, 2));
    let a3 = pt((0, 1), (0, 1));
    let tri = |p: &Point2<S>, q: &Point2<S>, r: Point2<S>| {
        Poly2::new(vec![p.clone(), q.clone(), r]).expect("unit triangle")
    };
    let a = [
        tri(&a1, &a2, a3.clone()),
        tri(&a1, &a2, pt((-3, 2), (1, 2))),
        tri(&a2, &a3, pt((1, 2), (1, 2))),
        tri(&a1, &a3, pt((-1, 2), (-1, 2))),
    ];
    let ia = [a[0].negate(), a[1].negate(), a[2].negate(), a[3].negate()];
    TriangleSet { a, ia }
}

/// Hexagon `H_s` for `0 < s < 1/2`.
pub fn build_hexagon<S: Scalar>(s: &S) -> Result<Poly2<S>, TorusError> {
    if *s <= S::zero() || *s >= S::half() {
        return Err(TorusError::ParameterOutOfRange);
    }
    Ok(hexagon_closed(s))
}

/// `H_s` for `s` in the closed range `[0, 1/2]`; degenerate edges collapse.
pub(crate) fn hexagon_closed<S: Scalar>(s: &S) -> Poly2<S> {
    let h = S::half();
    let one = S::one();
    let s = s.clone();
    let w = (one.clone() - s.clone()) * h.clone();
    Poly2::new(vec![
        Point2::origin(),
        Point2::new(w.clone(), w.clone()),
        Point2::new(h.clone() - s.clone(), h.clone()),
        Point2::new(-h.clone(), h.clone()),
        Point2::new(-(one + s.clone()) * h, w),
        Point2::new(-s, S::zero()),
    ])
    .expect("hexagon")
}

/// Reflection `ς_s` about the vertical line `x = -s/2`.
pub fn varsigma<S: Scalar>(s: &S, p: &Point2<S>) -> Point2<S> {
    Point2::new(-s.clone() - p.x.clone(), p.v.clone())
}

/// The half-space description of `H_s` lifted over the parameter:
/// `0 <= v <= 1/2`, `0 <= v - x <= 1`, `-s <= x + v <= 1 - s`.
pub fn hexagon_halfspaces<S: Scalar>() -> Vec<HalfSpace3<S>> {
    let z = S::zero;
    let o = S::one;
    vec![
        HalfSpace3::vertical(z(), -o(), z()),
        HalfSpace3::vertical(z(), o(), S::half()),
        HalfSpace3::vertical(o(), -o(), z()),
        HalfSpace3::vertical(-o(), o(), o()),
        HalfSpace3::new([o(), o(), o()], o()).expect("non-zero"),
        HalfSpace3::new([-o(), -o(), -o()], z()).expect("non-zero"),
    ]
}

/// The bundle `{(x, v, s) : (x, v) ∈ H_s, s ∈ [s0, s1]}`.
pub fn hexagon_bundle<S: Scalar>(s0: &S, s1: &S) -> Polytope3<S> {
    let mut hs = hexagon_halfspaces();
    hs.push(HalfSpace3::s_at_least(s0.clone()));
    hs.push(HalfSpace3::s_at_most(s1.clone()));
    let two = S::from_int(2);
    Polytope3::from_halfspaces(
        &hs,
        [-two.clone(), -two.clone(), -two.clone()],
        [two.clone(), two.clone(), two],
    )
    .expect("hexagon bundle has volume")
}

/// Names of the six pieces of `Y_s`, in the order [`build_y`] returns them.
pub const Y_PIECE_NAMES: [&str; 6] = ["A1", "A3", "H", "iA1", "iA3", "iH"];

/// `Y_s = A_1 ∪ A_3 ∪ H_s ∪ ι(A_1 ∪ A_3 ∪ H_s)` as six interior-disjoint pieces.
pub fn build_y<S: Scalar>(s: &S) -> Result<Vec<Poly2<S>>, TorusError> {
    let t = build_triangles::<S>();
    let h = build_hexagon(s)?;
    let pieces = vec![
        t.a[1].clone(),
        t.a[3].clone(),
        h.clone(),
        t.ia[1].clone(),
        t.ia[3].clone(),
        h.negate(),
    ];
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            if pieces[i].intersect(&pieces[j]).is_some() {
                return Err(TorusError::Overlap);
            }
        }
    }
    Ok(pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat, Rat};

    fn p(x: Rat, v: Rat) -> Point2<Rat> {
        Point2::new(x, v)
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_mod(&p(int(0), int(0))), p(int(0), int(0)));
        assert_eq!(reduce_mod(&p(int(2), int(0))), p(int(0), int(0)));
        // lower edge is part of the domain, so this point is already reduced;
        // its translate by (-1, 1) sits on the excluded upper edge
        assert_eq!(reduce_mod(&p(int(1), rat(-1, 2))), p(int(1), rat(-1, 2)));
        assert_eq!(reduce_mod(&p(int(0), rat(1, 2))), p(int(1), rat(-1, 2)));
        assert_eq!(
            reduce_mod(&p(rat(7, 3), rat(5, 4))),
            p(rat(-2, 3), rat(1, 4))
        );
    }

    #[test]
    fn reduce_agrees_with_translate_enumeration() {
        let f = fundamental_domain::<Rat>();
        let [g1, g2] = lattice_generators::<Rat>();
        for (x, v) in [
            (rat(13, 7), rat(-9, 5)),
            (rat(-31, 6), rat(2, 9)),
            (rat(5, 3), rat(11, 3)),
        ] {
            let q = p(x, v);
            let r = reduce_mod(&q);
            let mut hits = Vec::new();
            for a in -6..=6 {
                for b in -6..=6 {
                    let c = q.add(
                        &(int(a) * &g1.x + int(b) * &g2.x),
                        &(int(a) * &g1.v + int(b) * &g2.v),
                    );
                    if f.contains_strict(&c) {
                        hits.push(c);
                    }
                }
            }
            assert_eq!(hits, vec![r]);
        }
    }

    #[test]
    fn triangles() {
        let t = build_triangles::<Rat>();
        assert_eq!(
            t.a[0].verts(),
            &[
                p(int(-1), int(0)),
                p(int(0), int(0)),
                p(rat(-1, 2), rat(1, 2))
            ]
        );
        assert!(t.a[1].verts().contains(&p(rat(-3, 2), rat(1, 2))));
        let all = t.all();
        let total = all.iter().fold(int(0), |acc, q| acc + q.area());
        assert_eq!(total, int(2));
        for (i, a) in all.iter().enumerate() {
            assert_eq!(a.area(), rat(1, 4));
            for b in &all[i + 1..] {
                assert!(a.intersect(b).is_none());
            }
        }
        let f = fundamental_domain::<Rat>();
        assert!(all.iter().all(|a| f.contains_poly(a)));
    }

    #[test]
    fn reflection_oracle_for_a1() {
        // reflect a_3 = (0,0) across the line through a_1 and a_2 in physical coordinates
        let (ax, ay) = (-1.0f64, 0.0f64);
        let (bx, by) = (-0.5f64, 3f64.sqrt() / 2.0);
        let (dx, dy) = (bx - ax, by - ay);
        let t = ((0.0 - ax) * dx + (0.0 - ay) * dy) / (dx * dx + dy * dy);
        let (fx, fy) = (ax + t * dx, ay + t * dy);
        let (rx, ry) = (2.0 * fx, 2.0 * fy);
        assert!((rx + 1.5).abs() < 1e-12 && (ry / 3f64.sqrt() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn projection_examples() {
        assert_eq!(
            project_pi(&p(rat(-1, 2), rat(1, 4))),
            p(rat(-1, 2), rat(1, 4))
        );
        assert_eq!(project_pi(&p(rat(1, 4), int(0))), p(rat(-1, 4), int(0)));
        assert_eq!(project_pi(&p(int(0), int(0))), p(int(0), int(0)));
    }

    #[test]
    fn hexagon_at_five_twelfths() {
        let h = build_hexagon(&rat(5, 12)).unwrap();
        let want = Poly2::new(vec![
            p(int(0), int(0)),
            p(rat(7, 24), rat(7, 24)),
            p(rat(1, 12), rat(1, 2)),
            p(rat(-1, 2), rat(1, 2)),
            p(rat(-17, 24), rat(7, 24)),
            p(rat(-5, 12), int(0)),
        ])
        .unwrap();
        assert_eq!(h, want);
        assert_eq!(
            varsigma(&rat(5, 12), &p(int(0), int(0))),
            p(rat(-5, 12), int(0))
        );
        assert_eq!(
            build_hexagon(&rat(1, 2)),
            Err(TorusError::ParameterOutOfRange)
        );
        assert_eq!(build_hexagon(&int(0)), Err(TorusError::ParameterOutOfRange));
        // at s = 0 the two short edges collapse and the hexagon becomes A_2
        assert_eq!(hexagon_closed(&int(0)), build_triangles::<Rat>().a[2]);
    }

    #[test]
    fn hexagon_symmetric_and_bundle_slices() {
        let b = hexagon_bundle(&rat(7, 17), &rat(5, 12));
        for k in 1..100 {
            let s = rat(k, 200);
            let h = build_hexagon(&s).unwrap();
            let mirrored = h.map_points(|q| varsigma(&s, q));
            assert_eq!(mirrored, h);
        }
        for s in [rat(71, 171), rat(207, 500)] {
            assert_eq!(b.slice_at_s(&s).unwrap(), build_hexagon(&s).unwrap());
        }
    }

    #[test]
    fn y_pieces() {
        let s = rat(5, 12);
        let y = build_y(&s).unwrap();
        assert_eq!(y.len(), 6);
        let total = y.iter().fold(int(0), |acc, q| acc + q.area());
        let h = build_hexagon(&s).unwrap();
        assert_eq!(total, int(2) * (rat(1, 2) + h.area()));
    }
}
