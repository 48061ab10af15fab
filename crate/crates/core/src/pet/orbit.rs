//! Point dynamics at a fixed parameter: orbits, periodic tiles, tilings.

use super::{ConcretePet, Offset, PetError};
use crate::exactnum::Scalar;
use crate::geom::{Point2, Poly2};
use crate::torus::{fundamental_domain, reduce_mod};

/// A maximal periodic tile and the period of its points.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicTile<S> {
    pub period: usize,
    pub tile: Poly2<S>,
}

/// Result of a greedy periodic cover.
#[derive(Clone, Debug, PartialEq)]
pub struct Tiling<S> {
    pub tiles: Vec<PeriodicTile<S>>,
    /// Covered area over the torus area.
    pub coverage: S,
    /// Holes left when the budget ran out or no periodic seed was found.
    pub uncovered: Vec<Poly2<S>>,
}

impl<S: Scalar> ConcretePet<S> {
    fn locate(&self, p: &Point2<S>) -> Result<usize, PetError> {
        self.pieces
            .iter()
            .position(|q| q.dom.contains_strict(p))
            .ok_or(PetError::BoundaryHit)
    }

    fn step(&self, p: &Point2<S>, k: usize) -> Point2<S> {
        let Offset { dx, dv } = &self.pieces[k].shift;
        reduce_mod(&p.add(dx, dv))
    }

    /// Image of `p`, which must be interior to a piece after reduction.
    pub fn apply(&self, p: &Point2<S>) -> Result<Point2<S>, PetError> {
        let q = reduce_mod(p);
        let k = self.locate(&q)?;
        Ok(self.step(&q, k))
    }

    /// Follows the itinerary of `p` until it closes, intersecting the cells
    /// met along the way.
    pub fn periodic_tile(&self, p: &Point2<S>, n_max: usize) -> Result<PeriodicTile<S>, PetError> {
        self.tile_and_path(p, n_max).map(|(t, _)| t)
    }

    /// The tile through `p` together with the pieces its orbit visits.
    fn tile_and_path(
        &self,
        p: &Point2<S>,
        n_max: usize,
    ) -> Result<(PeriodicTile<S>, Vec<usize>), PetError> {
        let start = reduce_mod(p);
        let mut k = self.locate(&start)?;
        let mut cell = self.pieces[k].dom.clone();
        let mut cur = start.clone();
        let mut path = Vec::new();
        for n in 1..=n_max {
            path.push(k);
            let piece = &self.pieces[k];
            cell = cell.translate(&piece.shift.dx, &piece.shift.dv);
            cur = cur.add(&piece.shift.dx, &piece.shift.dv);
            if cur == start {
                return Ok((
                    PeriodicTile {
                        period: n,
                        tile: cell,
                    },
                    path,
                ));
            }
            k = self.locate(&cur)?;
            cell = cell
                .intersect(&self.pieces[k].dom)
                .ok_or(PetError::BoundaryHit)?;
        }
        Err(PetError::NotPeriodicWithin(n_max))
    }

    /// The tile through `p` and its distinct images under the map, all of
    /// the same period.
    pub fn periodic_orbit(
        &self,
        p: &Point2<S>,
        n_max: usize,
    ) -> Result<Vec<PeriodicTile<S>>, PetError> {
        let (t, path) = self.tile_and_path(p, n_max)?;
        let mut out = vec![t.clone()];
        let mut cur = t.tile;
        for &k in &path[..path.len() - 1] {
            let sh = &self.pieces[k].shift;
            cur = cur.translate(&sh.dx, &sh.dv);
            if !out.iter().any(|o| o.tile == cur) {
                out.push(PeriodicTile {
                    period: t.period,
                    tile: cur.clone(),
                });
            }
        }
        Ok(out)
    }

    /// Greedy periodic cover seeded at interior points of the uncovered holes.
    ///
    /// Each seed contributes its whole orbit of tiles. At most `budget` tiles
    /// are produced. Holes whose seeds are aperiodic within `n_max` steps
    /// are set aside and reported as uncovered.
    pub fn periodic_tiling(&self, budget: usize, n_max: usize) -> Tiling<S> {
        let mut holes: Vec<Poly2<S>> = self.pieces.iter().map(|p| p.dom.clone()).collect();
        let mut stuck = Vec::new();
        let mut tiles: Vec<PeriodicTile<S>> = Vec::new();
        while tiles.len() < budget {
            let Some(h) = holes.pop() else { break };
            match seed_orbit(self, &h, n_max) {
                Some(orbit) => {
                    holes.push(h);
                    for t in orbit.into_iter().take(budget - tiles.len()) {
                        let mut rest = Vec::new();
                        for g in holes.drain(..) {
                            rest.extend(g.subtract(&t.tile));
                        }
                        holes = rest;
                        tiles.push(t);
                    }
                }
                None => stuck.push(h),
            }
        }
        holes.extend(stuck);
        let covered = tiles.iter().fold(S::zero(), |a, t| a + t.tile.area());
        let total = fundamental_domain::<S>().area();
        Tiling {
            tiles,
            coverage: covered / total,
            uncovered: holes,
        }
    }
}

/// Tries a few interior points of the hole: the centroid, then points pulled
/// towards each vertex.
fn seed_orbit<S: Scalar>(
    f: &ConcretePet<S>,
    h: &Poly2<S>,
    n_max: usize,
) -> Option<Vec<PeriodicTile<S>>> {
    let c = h.centroid();
    let mut seeds = vec![c.clone()];
    for w in [2i64, 5] {
        for v in h.verts() {
            let t = S::from_frac(1, w);
            seeds.push(Point2::new(
                c.x.clone() + t.clone() * (v.x.clone() - c.x.clone()),
                c.v.clone() + t * (v.v.clone() - c.v.clone()),
            ));
        }
    }
    for p in seeds {
        match f.periodic_orbit(&p, n_max) {
            Ok(t) => return Some(t),
            Err(PetError::BoundaryHit) => continue,
            Err(_) => return None,
        }
    }
    None
}
