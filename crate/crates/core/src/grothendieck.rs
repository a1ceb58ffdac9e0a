//! Virtual polytopes: formal quotients `P+ / P-` of Newton polytopes.
//!
//! Two pairs are equal when `P+ + Q- = Q+ + P-`. No reduction to a minimal
//! representative is attempted, so classes may carry common summands.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice_geometry::{factorial, LatticePoint, LatticePolytope};
use crate::subspaces::MonomialSubspace;

#[derive(Clone, Debug)]
pub struct VirtualClass {
    plus: LatticePolytope,
    minus: LatticePolytope,
}

impl fmt::Display for VirtualClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] - [{}]", self.plus, self.minus)
    }
}

impl PartialEq for VirtualClass {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other).unwrap_or(false)
    }
}

impl VirtualClass {
    pub fn new(plus: LatticePolytope, minus: LatticePolytope) -> Result<Self> {
        if plus.dim() != minus.dim() {
            return Err(Error::DimensionMismatch {
                expected: plus.dim(),
                found: minus.dim(),
            });
        }
        Ok(VirtualClass { plus, minus })
    }

    /// The class `[P] - [0]` of an honest polytope.
    pub fn from_polytope(plus: LatticePolytope) -> Self {
        let minus = LatticePolytope::point(LatticePoint::origin(plus.dim()));
        VirtualClass { plus, minus }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_polytope(LatticePolytope::point(LatticePoint::origin(n)))
    }

    /// Image of `L` under the natural map to the group.
    pub fn class_of(l: &MonomialSubspace) -> Self {
        Self::from_polytope(l.newton_polytope())
    }

    pub fn dim(&self) -> usize {
        self.plus.dim()
    }

    pub fn plus(&self) -> &LatticePolytope {
        &self.plus
    }

    pub fn minus(&self) -> &LatticePolytope {
        &self.minus
    }

    fn check_dim(&self, other: &VirtualClass) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &VirtualClass) -> Result<VirtualClass> {
        self.check_dim(other)?;
        Ok(VirtualClass {
            plus: self.plus.minkowski_sum(&other.plus)?,
            minus: self.minus.minkowski_sum(&other.minus)?,
        })
    }

    pub fn inverse(&self) -> VirtualClass {
        VirtualClass {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }

    /// Cross test `P+ + Q- = Q+ + P-`.
    pub fn equals(&self, other: &VirtualClass) -> Result<bool> {
        self.check_dim(other)?;
        let lhs = self.plus.minkowski_sum(&other.minus)?;
        let rhs = other.plus.minkowski_sum(&self.minus)?;
        Ok(lhs == rhs)
    }

    /// True when the minus part is a single point, i.e. the class comes from
    /// a polytope (up to translation).
    pub fn is_effective_representative(&self) -> bool {
        self.minus.vertices().len() == 1
    }
}

/// Multilinear extension of the mixed volume to `n` virtual classes:
/// the signed sum over all `2^n` choices of plus/minus parts.
pub fn index(classes: &[VirtualClass]) -> Result<BigInt> {
    let n = classes.first().map(|c| c.dim()).ok_or(Error::Arity { expected: 1, found: 0 })?;
    if classes.len() != n {
        return Err(Error::Arity {
            expected: n,
            found: classes.len(),
        });
    }
    if let Some(c) = classes.iter().find(|c| c.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.dim(),
        });
    }
    // Expanding each mixed volume by inclusion-exclusion, every partial sum
    // over a proper subset cancels against the free signs outside it; only
    // the full sums `sum_i (plus_i or minus_i)` survive.
    let mut level: Vec<(LatticePolytope, bool)> = vec![(classes[0].plus.clone(), false), (classes[0].minus.clone(), true)];
    for c in &classes[1..] {
        level = level
            .par_iter()
            .flat_map_iter(|(s, odd)| [(s, &c.plus, *odd), (s, &c.minus, !*odd)])
            .map(|(s, p, odd)| Ok((s.minkowski_sum(p)?, odd)))
            .collect::<Result<_>>()?;
    }
    let mut total = BigInt::zero();
    for (s, odd) in &level {
        let v = s.euclidean_volume().normalized;
        if *odd {
            total -= v;
        } else {
            total += v;
        }
    }
    let (q, rem) = total.div_rem(&factorial(n));
    if !rem.is_zero() {
        return Err(Error::InvariantBreach(format!("signed volume sum {total} is not divisible by {n}!")));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::lattice_geometry::mixed_volume;

    fn poly(points: &[&[i64]]) -> LatticePolytope {
        LatticePolytope::from_i64s(points).unwrap()
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn class_examples() {
        let unit = VirtualClass::class_of(&MonomialSubspace::unit(2));
        assert!(unit.equals(&VirtualClass::identity(2)).unwrap());
        let l = MonomialSubspace::from_i64s(&[&[0], &[1]]).unwrap();
        let prod = VirtualClass::class_of(&l.product(&l).unwrap());
        let mult = VirtualClass::class_of(&l).multiply(&VirtualClass::class_of(&l)).unwrap();
        assert_eq!(prod, mult);
        let m = MonomialSubspace::from_i64s(&[&[0, 0], &[3, 0], &[0, 3], &[1, 1]]).unwrap();
        assert_eq!(VirtualClass::class_of(&m), VirtualClass::class_of(&m.completion()));
    }

    #[test]
    fn group_examples() {
        let tri = LatticePolytope::unit_simplex(2);
        let sq = LatticePolytope::unit_cube(2);
        let c = VirtualClass::new(sq.clone(), tri.clone()).unwrap();
        assert!(c.multiply(&c.inverse()).unwrap().equals(&VirtualClass::identity(2)).unwrap());
        let r = poly(&[&[0, 0], &[2, 1], &[-1, 3]]);
        let cancelled = VirtualClass::new(sq.minkowski_sum(&r).unwrap(), r).unwrap();
        assert!(cancelled.equals(&VirtualClass::from_polytope(sq.clone())).unwrap());
        assert!(!VirtualClass::from_polytope(tri).equals(&VirtualClass::from_polytope(sq)).unwrap());
        let other_dim = VirtualClass::identity(3);
        assert!(matches!(c.equals(&other_dim), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn index_examples() {
        let tri = LatticePolytope::unit_simplex(2);
        let sq = LatticePolytope::unit_cube(2);
        let ct = VirtualClass::from_polytope(tri.clone());
        let cs = VirtualClass::from_polytope(sq.clone());
        assert_eq!(index(&[ct.clone(), ct.clone()]).unwrap(), big(1));
        // (square + triangle, triangle) equals the square; expansion:
        // MV(sq+tri, sq) - MV(tri, sq) = (2 + 2) - 2 = 2
        let cs2 = VirtualClass::new(sq.minkowski_sum(&tri).unwrap(), tri.clone()).unwrap();
        assert_eq!(index(&[cs.clone(), cs.clone()]).unwrap(), big(2));
        assert_eq!(index(&[cs.clone(), cs2.clone()]).unwrap(), big(2));
        assert_eq!(index(&[cs2.clone(), cs2]).unwrap(), big(2));
        // MV(square, tri) - MV(tri, tri) = 2 - 1
        let diff = VirtualClass::new(sq, tri).unwrap();
        assert_eq!(index(&[diff.clone(), ct]).unwrap(), big(1));
        assert!(matches!(index(&[diff]), Err(Error::Arity { .. })));
    }

    #[test]
    fn index_can_be_negative() {
        let tri = LatticePolytope::unit_simplex(2);
        let sq = LatticePolytope::unit_cube(2);
        let neg = VirtualClass::new(tri.clone(), sq).unwrap();
        assert_eq!(index(&[neg, VirtualClass::from_polytope(tri)]).unwrap(), big(-1));
    }

    fn arb_poly() -> impl Strategy<Value = LatticePolytope> {
        prop::collection::vec((-3i64..=3, -3i64..=3), 1..=5).prop_map(|v| {
            let pts: Vec<LatticePoint> = v.iter().map(|&(x, y)| LatticePoint::from_i64s(&[x, y])).collect();
            LatticePolytope::convex_hull(&pts).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn index_is_well_defined_on_classes(p in arb_poly(), q in arb_poly(), r in arb_poly(), s in arb_poly(), t in arb_poly()) {
            let c = VirtualClass::new(p.clone(), q.clone()).unwrap();
            let bulked = VirtualClass::new(p.minkowski_sum(&r).unwrap(), q.minkowski_sum(&r).unwrap()).unwrap();
            prop_assert!(c.equals(&bulked).unwrap());
            let companion = VirtualClass::new(s, t).unwrap();
            prop_assert_eq!(index(&[c.clone(), companion.clone()]).unwrap(), index(&[bulked, companion.clone()]).unwrap());
            prop_assert_eq!(index(&[c.clone(), companion.clone()]).unwrap(), index(&[companion, c]).unwrap());
        }

        #[test]
        fn group_laws(p in arb_poly(), q in arb_poly(), r in arb_poly(), s in arb_poly()) {
            let a = VirtualClass::new(p, q).unwrap();
            let b = VirtualClass::new(r, s).unwrap();
            prop_assert!(a.multiply(&b).unwrap().equals(&b.multiply(&a).unwrap()).unwrap());
            prop_assert!(a.multiply(&VirtualClass::identity(2)).unwrap().equals(&a).unwrap());
            prop_assert!(a.multiply(&a.inverse()).unwrap().equals(&VirtualClass::identity(2)).unwrap());
        }

        #[test]
        fn index_restricts_to_mixed_volume(p in arb_poly(), q in arb_poly()) {
            let classes = [VirtualClass::from_polytope(p.clone()), VirtualClass::from_polytope(q.clone())];
            prop_assert_eq!(index(&classes).unwrap(), mixed_volume(&[p, q]).unwrap());
        }
    }
}
