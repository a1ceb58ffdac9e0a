//! Monomial subspaces `L = span{x^a : a in A}` and their semigroup.
//!
//! Products are sumsets of supports, the completion is the set of lattice
//! points of the Newton polytope, and two subspaces are equivalent exactly
//! when their Newton polytopes coincide.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice_geometry::{linalg, mixed_volume, LatticePoint, LatticePolytope};

pub const DEFAULT_Q_MAX: u32 = 12;
pub const DEFAULT_K_MAX: u32 = 6;

/// A nonzero monomial subspace, stored by its sorted, deduplicated support.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialSubspace {
    dim: usize,
    support: Vec<LatticePoint>,
}

impl fmt::Display for MonomialSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, a) in self.support.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "x^{a}")?;
        }
        write!(f, "}}")
    }
}

/// Proof that `x^b` is integral over `L`: `q * b` is the sum of the `q`
/// listed support elements, so `(x^b)^q` lies in `L^q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityCertificate {
    pub exponent: LatticePoint,
    pub degree: u32,
    pub summands: Vec<LatticePoint>,
}

impl IntegralityCertificate {
    /// Re-checks the decomposition by addition.
    pub fn verify(&self, l: &MonomialSubspace) -> bool {
        if self.degree == 0 || self.summands.len() != self.degree as usize {
            return false;
        }
        if !self.summands.iter().all(|s| l.support.binary_search(s).is_ok()) {
            return false;
        }
        let total = self
            .summands
            .iter()
            .fold(LatticePoint::origin(l.dim), |acc, s| &acc + s);
        total == self.exponent.scale(&BigInt::from(self.degree))
    }
}

/// Lattice index of the difference lattice of a support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    /// The differences do not span `Z^n`; the image of the Kodaira map has
    /// dimension below `n`.
    Infinite,
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(d) => write!(f, "{d}"),
            LatticeIndex::Infinite => write!(f, "infinite"),
        }
    }
}

/// `index = d * deg_Y`, with `index` the self-intersection and `d` the
/// mapping degree of the Kodaira map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeDecomposition {
    pub index: BigInt,
    pub lattice_index: LatticeIndex,
    pub degree: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessSearch {
    /// `L * N = M * N` holds for this `N`.
    Found { witness: MonomialSubspace, power: u32 },
    /// No witness among the candidates tried; says nothing about equivalence.
    Inconclusive { k_max: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub equivalent: bool,
    pub witness: Option<WitnessSearch>,
}

impl MonomialSubspace {
    pub fn new(support: Vec<LatticePoint>) -> Result<Self> {
        let dim = support.first().ok_or(Error::Empty("subspace support"))?.dim();
        if dim == 0 {
            return Err(Error::InvalidArgument("ambient dimension must be at least 1".into()));
        }
        if let Some(p) = support.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        let mut support = support;
        support.sort();
        support.dedup();
        Ok(MonomialSubspace { dim, support })
    }

    pub fn from_i64s(points: &[&[i64]]) -> Result<Self> {
        Self::new(points.iter().map(|p| LatticePoint::from_i64s(p)).collect())
    }

    /// The subspace spanned by the constant function 1.
    pub fn unit(n: usize) -> Self {
        MonomialSubspace {
            dim: n,
            support: vec![LatticePoint::origin(n)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> &[LatticePoint] {
        &self.support
    }

    /// Dimension of `L` as a vector space.
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, b: &LatticePoint) -> bool {
        self.support.binary_search(b).is_ok()
    }

    pub fn is_subspace_of(&self, other: &MonomialSubspace) -> bool {
        self.dim == other.dim && self.support.iter().all(|a| other.contains(a))
    }

    pub fn newton_polytope(&self) -> LatticePolytope {
        LatticePolytope::convex_hull(&self.support).expect("validated support")
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if self.dim != found {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }

    /// `LM`: the support is the sumset of the supports.
    pub fn product(&self, other: &MonomialSubspace) -> Result<MonomialSubspace> {
        self.check_dim(other.dim)?;
        let support = self
            .support
            .iter()
            .flat_map(|a| other.support.iter().map(move |b| a + b))
            .collect();
        Ok(MonomialSubspace::new(support).expect("nonempty sumset"))
    }

    /// `L^k`; `L^0` is the unit.
    pub fn power(&self, k: u32) -> MonomialSubspace {
        (0..k).fold(MonomialSubspace::unit(self.dim), |acc, _| {
            acc.product(self).expect("same dimension")
        })
    }

    /// The completion: every lattice point of the Newton polytope.
    pub fn completion(&self) -> MonomialSubspace {
        MonomialSubspace {
            dim: self.dim,
            support: self.newton_polytope().lattice_points(),
        }
    }

    /// Searches `q = 1..=q_max` for a decomposition of `q * b` into `q`
    /// support elements.
    pub fn is_integral(&self, b: &LatticePoint, q_max: u32) -> Result<Option<IntegralityCertificate>> {
        self.check_dim(b.dim())?;
        if q_max == 0 {
            return Err(Error::InvalidArgument("q_max must be positive".into()));
        }
        // Outside the Newton polytope no multiple of b is a q-fold sum.
        if !self.newton_polytope().contains(b) {
            return Ok(None);
        }
        // levels[q-1] maps each point of the q-fold sumset to (predecessor in
        // the (q-1)-fold sumset, support element added).
        let mut levels: Vec<BTreeMap<LatticePoint, (LatticePoint, usize)>> = Vec::new();
        let origin = LatticePoint::origin(self.dim);
        for q in 1..=q_max {
            let mut next = BTreeMap::new();
            match levels.last() {
                None => {
                    for (i, a) in self.support.iter().enumerate() {
                        next.insert(a.clone(), (origin.clone(), i));
                    }
                }
                Some(prev) => {
                    for s in prev.keys() {
                        for (i, a) in self.support.iter().enumerate() {
                            next.entry(s + a).or_insert_with(|| (s.clone(), i));
                        }
                    }
                }
            }
            levels.push(next);
            let target = b.scale(&BigInt::from(q));
            if levels[q as usize - 1].contains_key(&target) {
                let mut summands = Vec::with_capacity(q as usize);
                let mut cur = target;
                for level in levels.iter().rev() {
                    let (prev, i) = level[&cur].clone();
                    summands.push(self.support[i].clone());
                    cur = prev;
                }
                summands.sort();
                return Ok(Some(IntegralityCertificate {
                    exponent: b.clone(),
                    degree: q,
                    summands,
                }));
            }
        }
        Ok(None)
    }

    /// `L ~ M` iff the Newton polytopes agree.
    pub fn equivalent(&self, other: &MonomialSubspace) -> Result<bool> {
        self.check_dim(other.dim)?;
        Ok(self.newton_polytope() == other.newton_polytope())
    }

    /// Like [`equivalent`](Self::equivalent), and when true also searches for
    /// `N` with `LN = MN` among `N = completion((LM)^k)`, `k = 1..=k_max`.
    pub fn equivalent_with_witness(&self, other: &MonomialSubspace, k_max: u32) -> Result<Equivalence> {
        if !self.equivalent(other)? {
            return Ok(Equivalence {
                equivalent: false,
                witness: None,
            });
        }
        let lm = self.product(other)?;
        let mut witness = WitnessSearch::Inconclusive { k_max };
        for k in 1..=k_max {
            let n = lm.power(k).completion();
            if self.product(&n)? == other.product(&n)? {
                witness = WitnessSearch::Found { witness: n, power: k };
                break;
            }
        }
        Ok(Equivalence {
            equivalent: true,
            witness: Some(witness),
        })
    }

    /// `[Z^n : Λ]` for `Λ` generated by `a - a_0`, `a` in the support.
    pub fn kodaira_lattice_index(&self) -> LatticeIndex {
        let a0 = &self.support[0];
        let gens: Vec<Vec<BigInt>> = self.support[1..].iter().map(|a| (a - a0).into_coords()).collect();
        match linalg::lattice_index(&gens, self.dim) {
            Some(d) => LatticeIndex::Finite(d),
            None => LatticeIndex::Infinite,
        }
    }

    pub fn degree_decomposition(&self) -> Result<DegreeDecomposition> {
        let p = self.newton_polytope();
        let index = mixed_volume(&vec![p; self.dim])?;
        let lattice_index = self.kodaira_lattice_index();
        let degree = match &lattice_index {
            LatticeIndex::Finite(d) => {
                let deg = BigRational::new(index.clone(), d.clone());
                if !deg.is_integer() || !deg.is_positive() {
                    return Err(Error::InvariantBreach(format!(
                        "self-intersection {index} is not a positive multiple of the lattice index {d}"
                    )));
                }
                deg
            }
            LatticeIndex::Infinite => {
                if !index.is_zero() {
                    return Err(Error::InvariantBreach(format!(
                        "degenerate support has nonzero self-intersection {index}"
                    )));
                }
                BigRational::zero()
            }
        };
        Ok(DegreeDecomposition {
            index,
            lattice_index,
            degree,
        })
    }
}

impl LatticeIndex {
    pub fn is_one(&self) -> bool {
        matches!(self, LatticeIndex::Finite(d) if d.is_one())
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn sub(points: &[&[i64]]) -> MonomialSubspace {
        MonomialSubspace::from_i64s(points).unwrap()
    }

    fn pt(c: &[i64]) -> LatticePoint {
        LatticePoint::from_i64s(c)
    }

    #[test]
    fn product_examples() {
        assert_eq!(sub(&[&[0], &[1]]).product(&sub(&[&[0], &[1]])).unwrap(), sub(&[&[0], &[1], &[2]]));
        let l = sub(&[&[1, 2], &[3, -1]]);
        assert_eq!(l.product(&MonomialSubspace::unit(2)).unwrap(), l);
        assert_eq!(
            sub(&[&[0, 0], &[1, 0]]).product(&sub(&[&[0, 0], &[0, 1]])).unwrap(),
            sub(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])
        );
        assert!(matches!(
            sub(&[&[0]]).product(&sub(&[&[0, 0]])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(MonomialSubspace::new(vec![]), Err(Error::Empty(_))));
        assert!(matches!(
            MonomialSubspace::new(vec![pt(&[0]), pt(&[0, 1])]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(sub(&[&[2], &[0], &[2]]).support(), &[pt(&[0]), pt(&[2])]);
    }

    #[test]
    fn completion_examples() {
        assert_eq!(sub(&[&[0], &[3]]).completion(), sub(&[&[0], &[1], &[2], &[3]]));
        assert_eq!(
            sub(&[&[0, 0], &[2, 0], &[0, 2]]).completion(),
            sub(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1], &[1, 1], &[0, 2]])
        );
        let single = sub(&[&[3, 4]]);
        assert_eq!(single.completion(), single);
    }

    #[test]
    fn integrality_examples() {
        let c = sub(&[&[0], &[2]]).is_integral(&pt(&[1]), 12).unwrap().unwrap();
        assert_eq!(c.degree, 2);
        assert_eq!(c.summands, vec![pt(&[0]), pt(&[2])]);
        let l = sub(&[&[0, 0], &[2, 0], &[0, 2]]);
        let c = l.is_integral(&pt(&[1, 0]), 12).unwrap().unwrap();
        assert_eq!(c.degree, 2);
        assert!(c.verify(&l));
        assert_eq!(sub(&[&[0], &[2]]).is_integral(&pt(&[4]), 50).unwrap(), None);
        assert!(sub(&[&[0], &[2]]).is_integral(&pt(&[4, 0]), 5).is_err());
        // members of L are integral with q = 1
        assert_eq!(l.is_integral(&pt(&[2, 0]), 1).unwrap().unwrap().degree, 1);
        // a forged certificate does not verify
        let bad = IntegralityCertificate {
            exponent: pt(&[1, 1]),
            degree: 2,
            summands: vec![pt(&[0, 0]), pt(&[2, 0])],
        };
        assert!(!bad.verify(&l));
    }

    #[test]
    fn equivalence_examples() {
        let l = sub(&[&[0], &[2]]);
        let m = sub(&[&[0], &[1], &[2]]);
        assert!(l.equivalent(&m).unwrap());
        let n = sub(&[&[0], &[1]]);
        assert_eq!(l.product(&n).unwrap(), sub(&[&[0], &[1], &[2], &[3]]));
        assert_eq!(m.product(&n).unwrap(), sub(&[&[0], &[1], &[2], &[3]]));
        let found = l.equivalent_with_witness(&m, DEFAULT_K_MAX).unwrap();
        match found.witness {
            Some(WitnessSearch::Found { witness, .. }) => {
                assert_eq!(l.product(&witness).unwrap(), m.product(&witness).unwrap());
            }
            other => panic!("expected a witness, got {other:?}"),
        }
        assert!(!sub(&[&[0], &[1]]).equivalent(&sub(&[&[0], &[2]])).unwrap());
        let no = sub(&[&[0], &[1]]).equivalent_with_witness(&sub(&[&[0], &[2]]), 3).unwrap();
        assert_eq!(no, Equivalence { equivalent: false, witness: None });
    }

    #[test]
    fn certificate_beyond_default_bound() {
        // (-1,2) = (8(-2,3) + 4(0,0) + (3,2)) / 13
        let l = sub(&[&[-2, 3], &[0, 0], &[3, 2]]);
        assert_eq!(l.is_integral(&pt(&[-1, 2]), DEFAULT_Q_MAX).unwrap(), None);
        assert_eq!(l.is_integral(&pt(&[-1, 2]), 13).unwrap().unwrap().degree, 13);
    }

    #[test]
    fn kodaira_index_examples() {
        assert_eq!(
            sub(&[&[0, 0], &[1, 0], &[0, 1]]).kodaira_lattice_index(),
            LatticeIndex::Finite(BigInt::from(1))
        );
        assert_eq!(
            sub(&[&[0, 0], &[2, 0], &[0, 2]]).kodaira_lattice_index(),
            LatticeIndex::Finite(BigInt::from(4))
        );
        assert_eq!(sub(&[&[0, 0], &[1, 1]]).kodaira_lattice_index(), LatticeIndex::Infinite);
        assert_eq!(sub(&[&[5]]).kodaira_lattice_index(), LatticeIndex::Infinite);
    }

    #[test]
    fn degree_decomposition_examples() {
        let int = |x: i64| BigRational::from_integer(BigInt::from(x));
        let d = sub(&[&[0, 0], &[2, 0], &[0, 2]]).degree_decomposition().unwrap();
        assert_eq!(d.index, BigInt::from(4));
        assert_eq!(d.lattice_index, LatticeIndex::Finite(BigInt::from(4)));
        assert_eq!(d.degree, int(1));
        let d = sub(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).degree_decomposition().unwrap();
        assert_eq!((d.index, d.lattice_index, d.degree), (BigInt::from(2), LatticeIndex::Finite(BigInt::from(1)), int(2)));
        let d = sub(&[&[0, 0], &[1, 1]]).degree_decomposition().unwrap();
        assert_eq!((d.index, d.lattice_index, d.degree), (BigInt::from(0), LatticeIndex::Infinite, int(0)));
    }

    fn arb_sub(n: usize) -> impl Strategy<Value = MonomialSubspace> {
        prop::collection::vec(prop::collection::vec(-2i64..=3, n), 1..=5)
            .prop_map(|v| MonomialSubspace::new(v.iter().map(|c| LatticePoint::from_i64s(c)).collect()).unwrap())
    }

    fn arb_pair() -> impl Strategy<Value = (MonomialSubspace, MonomialSubspace, MonomialSubspace)> {
        (1usize..=2).prop_flat_map(|n| (arb_sub(n), arb_sub(n), arb_sub(n)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn semigroup_laws((l, m, n) in arb_pair()) {
            prop_assert_eq!(l.product(&m).unwrap(), m.product(&l).unwrap());
            prop_assert_eq!(l.product(&m).unwrap().product(&n).unwrap(), l.product(&m.product(&n).unwrap()).unwrap());
            let cube = l.power(3);
            let sumset = l.product(&l).unwrap().product(&l).unwrap();
            prop_assert_eq!(cube, sumset);
        }

        #[test]
        fn completion_laws((l, m, _n) in arb_pair()) {
            let c = l.completion();
            prop_assert!(l.is_subspace_of(&c));
            prop_assert_eq!(c.completion(), c.clone());
            prop_assert!(l.equivalent(&c).unwrap());
            prop_assert_eq!(l.newton_polytope(), c.newton_polytope());
            if l.equivalent(&m).unwrap() {
                prop_assert!(m.is_subspace_of(&c));
            }
            // barycentric denominators can exceed the default bound on random input
            for b in c.support() {
                let cert = l.is_integral(b, 60).unwrap();
                prop_assert!(cert.as_ref().map(|c| c.verify(&l)).unwrap_or(false), "no certificate for {}", b);
            }
        }

        #[test]
        fn equivalence_is_a_congruence((l, n, extra) in arb_pair()) {
            // a subspace equivalent to l: vertices plus an arbitrary subset of the completion
            let c = l.completion();
            let mut pts: Vec<LatticePoint> = l.newton_polytope().vertices().to_vec();
            pts.extend(c.support().iter().zip(extra.support().iter().cycle()).filter(|(_, e)| e.coords()[0] > BigInt::zero()).map(|(a, _)| a.clone()));
            let m = MonomialSubspace::new(pts).unwrap();
            prop_assert!(l.equivalent(&m).unwrap());
            prop_assert!(l.product(&n).unwrap().equivalent(&m.product(&n).unwrap()).unwrap());
        }
    }
}
