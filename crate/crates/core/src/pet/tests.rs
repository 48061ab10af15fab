use super::*;
use crate::exactnum::{int, rat, Rat};
use crate::geom::Point2;
use crate::torus::reduce_mod;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Direct formula for one base map: sign from the triangle holding `p`.
fn oracle_base(i: usize, s: &Rat, p: &Point2<Rat>) -> Option<Point2<Rat>> {
    let t = crate::torus::build_triangles::<Rat>();
    let k = 3 - i;
    let mut sigma = None;
    for a in 0..4 {
        if t.a[a].contains_strict(p) {
            sigma = Some(if a != k { 1 } else { -1 });
        }
        if t.ia[a].contains_strict(p) {
            sigma = Some(if a == k { 1 } else { -1 });
        }
    }
    let sg = int(sigma?);
    let (wx, wv) = match i {
        0 => (int(1), int(0)),
        1 => (rat(-1, 2), rat(1, 2)),
        _ => (rat(-1, 2), rat(-1, 2)),
    };
    Some(reduce_mod(&p.add(&(sg.clone() * s * wx), &(sg * s * wv))))
}

fn oracle_tetra(s: &Rat, p: &Point2<Rat>) -> Option<Point2<Rat>> {
    let q = oracle_base(0, s, &reduce_mod(p))?;
    let q = oracle_base(1, s, &q)?;
    oracle_base(2, s, &q)
}

fn random_point(rng: &mut ChaCha8Rng) -> Point2<Rat> {
    let d = 10007;
    reduce_mod(&Point2::new(
        rat(rng.gen_range(-2 * d..2 * d), d),
        rat(rng.gen_range(-d..d), d),
    ))
}

#[test]
fn base_map_examples() {
    let s = rat(1, 4);
    let f0 = base_map::<Poly2<Rat>>(0, s.clone()).unwrap();
    let p = Point2::new(rat(-3, 4), rat(1, 4));
    assert_eq!(f0.apply(&p).unwrap(), Point2::new(rat(-1, 2), rat(1, 4)));
    // a point of A_3 moves left
    let q = Point2::new(rat(-1, 4), rat(-1, 8));
    assert_eq!(f0.apply(&q).unwrap(), Point2::new(rat(-1, 2), rat(-1, 8)));
    assert_eq!(
        f0.apply(&Point2::new(rat(1, 3), int(0))),
        Err(PetError::BoundaryHit)
    );
    assert!(base_map::<Poly2<Rat>>(3, s).is_err());
    assert!(base_map::<Polytope3<Rat>>(0, (rat(1, 2), rat(1, 2))).is_err());
}

#[test]
fn zero_parameter_is_identity() {
    let f = tetra_pet::<Poly2<Rat>>(int(0)).unwrap();
    assert!(f.pieces.iter().all(|p| p.shift == Offset::zero()));
    assert_eq!(f.len(), 1);
    assert_eq!(f.pieces[0].dom, fundamental_domain());
}

#[test]
fn base_maps_are_exchanges() {
    for s in [rat(1, 4), rat(5, 13), rat(4, 5), int(1)] {
        for i in 0..3 {
            let f = base_map::<Poly2<Rat>>(i, s.clone()).unwrap();
            assert!(f.check_exchange(&int(2)), "i={i} s={s}");
        }
    }
}

#[test]
fn tetra_matches_pointwise_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for s in [rat(5, 13), rat(4, 13), rat(68, 157), rat(4, 5), rat(29, 70)] {
        let f = tetra_pet::<Poly2<Rat>>(s.clone()).unwrap();
        assert!(f.check_exchange(&int(2)));
        let mut checked = 0;
        while checked < 200 {
            let p = random_point(&mut rng);
            let (Some(want), Ok(got)) = (oracle_tetra(&s, &p), f.apply(&p)) else {
                continue;
            };
            assert_eq!(got, want, "s={s} p={p}");
            checked += 1;
        }
    }
}

#[test]
fn five_thirteenths_example_point() {
    let s = rat(5, 13);
    let f = tetra_pet::<Poly2<Rat>>(s.clone()).unwrap();
    let p = Point2::new(rat(-1, 2), rat(1, 4));
    assert_eq!(f.apply(&p).unwrap(), oracle_tetra(&s, &p).unwrap());
}

#[test]
fn composition_is_associative() {
    let s = rat(3, 7);
    let b: Vec<ConcretePet<Rat>> = (0..3).map(|i| base_map(i, s.clone()).unwrap()).collect();
    let left = b[0].then(&b[1]).then(&b[2]);
    let right = b[0].then(&b[1].then(&b[2]));
    assert_eq!(left.agrees_with(&right), Ok(()));
    let id = ConcretePet::identity(s.clone());
    assert_eq!(left.then(&id).agrees_with(&left), Ok(()));
}

#[test]
fn symbolic_slices_match_planar() {
    let g = tetra_pet::<Polytope3<Rat>>((int(0), int(1))).unwrap();
    let mut worst_b = 0;
    let mut worst_d = 0;
    for p in &g.pieces {
        worst_b = worst_b.max(p.shift.b.abs());
        worst_d = worst_d.max(p.shift.d.abs());
    }
    // ω_0 contributes ±2 to B; ω_1, ω_2 contribute ±1 each
    assert!(worst_b <= 4 && worst_d <= 2, "B {worst_b} D {worst_d}");
    for s in [rat(5, 13), rat(4, 13), rat(68, 157), rat(3, 5), rat(1, 7)] {
        let planar = tetra_pet::<Poly2<Rat>>(s.clone()).unwrap();
        let sliced = g.instantiate(&s);
        assert_eq!(sliced.agrees_with(&planar), Ok(()), "s={s}");
    }
}

#[test]
fn first_return_on_whole_torus_is_the_map() {
    let s = rat(5, 13);
    let f = tetra_pet::<Poly2<Rat>>(s).unwrap();
    let r = f.first_return(&[fundamental_domain()], 10).unwrap();
    assert_eq!(r.agrees_with(&f), Ok(()));
    assert!(r.pieces.iter().all(|p| p.time == 1));
}

#[test]
fn first_return_to_y_keeps_area() {
    let s = rat(5, 12);
    let f = tetra_pet::<Poly2<Rat>>(s.clone()).unwrap();
    let y = crate::torus::build_y(&s).unwrap();
    let r = f.first_return(&y, 1 << 16).unwrap();
    let area = y.iter().fold(int(0), |a, q| a + q.area());
    assert!(r.check_exchange(&area));
    let again = r.first_return(&y, 4).unwrap();
    assert_eq!(again.agrees_with(&r), Ok(()));
}

#[test]
fn periodic_tiles_have_uniform_period() {
    let s = rat(4, 13);
    let f = tetra_pet::<Poly2<Rat>>(s).unwrap();
    let t = f.periodic_tiling(40, 1 << 12);
    assert!(!t.tiles.is_empty());
    for (i, a) in t.tiles.iter().enumerate() {
        for b in &t.tiles[i + 1..] {
            assert!(a.tile.intersect(&b.tile).is_none());
        }
        // points just inside each vertex share the period
        let c = a.tile.centroid();
        for v in a.tile.verts() {
            let q = Point2::new(
                (v.x.clone() * int(99) + c.x.clone()) / int(100),
                (v.v.clone() * int(99) + c.v.clone()) / int(100),
            );
            let mut cur = reduce_mod(&q);
            let start = cur.clone();
            let mut n = 0;
            loop {
                cur = f.apply(&cur).unwrap();
                n += 1;
                if cur == start {
                    break;
                }
            }
            assert_eq!(n, a.period);
        }
    }
    assert!(t.coverage <= int(1));
}

#[test]
fn periodic_orbit_is_invariant() {
    let f = tetra_pet::<Poly2<Rat>>(rat(5, 13)).unwrap();
    let t = f.periodic_tiling(60, 1 << 12);
    let seed = t
        .tiles
        .iter()
        .find(|t| t.period > 1)
        .unwrap()
        .tile
        .centroid();
    let orbit = f.periodic_orbit(&seed, 1 << 12).unwrap();
    // a translation cannot carry a convex tile onto itself
    assert_eq!(orbit.len(), orbit[0].period);
    for (i, a) in orbit.iter().enumerate() {
        assert_eq!(a.period, orbit[0].period);
        assert_eq!(a.tile.area(), orbit[0].tile.area());
        for b in &orbit[i + 1..] {
            assert!(a.tile.intersect(&b.tile).is_none());
        }
        // the map carries each tile onto another tile of the orbit
        let img = f.apply(&a.tile.centroid()).unwrap();
        assert!(orbit.iter().any(|b| b.tile.centroid() == img));
    }
}
