//! Deterministic instance generators shared by the integration tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_index::lattice_geometry::mixed_volume;
use toric_index::subspaces::LatticeIndex;
use toric_index::{LatticePoint, LatticePolytope, MonomialSubspace};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` distinct points with coordinates in `lo..=hi`.
pub fn random_points(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64, count: usize) -> Vec<LatticePoint> {
    let side = (hi - lo + 1) as usize;
    let total = side.pow(n as u32);
    let mut cells: Vec<usize> = (0..total).collect();
    cells.shuffle(rng);
    cells[..count.min(total)]
        .iter()
        .map(|&c| {
            let mut rest = c;
            let coords: Vec<i64> = (0..n)
                .map(|_| {
                    let x = (rest % side) as i64 + lo;
                    rest /= side;
                    x
                })
                .collect();
            LatticePoint::from_i64s(&coords)
        })
        .collect()
}

pub fn random_support(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64, min_pts: usize, max_pts: usize) -> MonomialSubspace {
    let count = rng.gen_range(min_pts..=max_pts);
    MonomialSubspace::new(random_points(rng, n, lo, hi, count)).unwrap()
}

/// A support with a full-dimensional Newton polytope.
pub fn random_full_support(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64, min_pts: usize, max_pts: usize) -> MonomialSubspace {
    loop {
        let s = random_support(rng, n, lo, hi, min_pts.max(n + 1), max_pts);
        if s.newton_polytope().is_full_dimensional() {
            return s;
        }
    }
}

pub fn random_polytope(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64, max_pts: usize) -> LatticePolytope {
    random_support(rng, n, lo, hi, 1, max_pts).newton_polytope()
}

pub fn random_full_polytope(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64, max_pts: usize) -> LatticePolytope {
    random_full_support(rng, n, lo, hi, n + 1, max_pts).newton_polytope()
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub supports: Vec<MonomialSubspace>,
    pub mixed_volume: BigInt,
}

impl Instance {
    pub fn dim(&self) -> usize {
        self.supports.len()
    }

    pub fn polytopes(&self) -> Vec<LatticePolytope> {
        self.supports.iter().map(|s| s.newton_polytope()).collect()
    }
}

fn instances(seed: u64, n: usize, hi: i64, min_pts: usize, max_pts: usize, max_mv: i64, count: usize) -> Vec<Instance> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let supports: Vec<MonomialSubspace> =
            (0..n).map(|_| random_full_support(&mut r, n, 0, hi, min_pts, max_pts)).collect();
        let polys: Vec<LatticePolytope> = supports.iter().map(|s| s.newton_polytope()).collect();
        let mv = mixed_volume(&polys).unwrap();
        if mv >= BigInt::from(1) && mv <= BigInt::from(max_mv) {
            out.push(Instance {
                supports,
                mixed_volume: mv,
            });
        }
    }
    out
}

/// 30 pairs in `[0, 3]^2` with at most 5 points each and mixed volume at most 8.
pub fn corpus_pairs() -> Vec<Instance> {
    instances(0x5EED_0002, 2, 3, 3, 5, 8, 30)
}

/// 5 triples in `[0, 2]^3` with mixed volume at most 6.
pub fn corpus_triples() -> Vec<Instance> {
    instances(0x5EED_0003, 3, 2, 4, 5, 6, 5)
}

pub fn corpus() -> Vec<Instance> {
    let mut c = corpus_pairs();
    c.extend(corpus_triples());
    c
}

/// Lattice indices of every support and of all the supports together.
pub fn lattice_indices(supports: &[MonomialSubspace]) -> Vec<BigInt> {
    let mut joint: Vec<LatticePoint> = Vec::new();
    let mut out = Vec::new();
    for s in supports {
        let a0 = &s.support()[0];
        joint.extend(s.support().iter().map(|a| a - a0));
        if let LatticeIndex::Finite(d) = s.kodaira_lattice_index() {
            out.push(d);
        }
    }
    if let LatticeIndex::Finite(d) = MonomialSubspace::new(joint).unwrap().kodaira_lattice_index() {
        out.push(d);
    }
    out
}
