//! Projective toric models, Cartier divisors and b-divisors.
//!
//! A model is the normal fan of a full-dimensional lattice polytope, its
//! *base*. A Cartier divisor on it is an integral piecewise-linear function
//! given by one functional `a_σ` per maximal cone, `h(u) = <a_σ, u>` for
//! `u ∈ σ`. Support functions take minima, `h_P(u) = min_{a ∈ P} <a, u>`,
//! and sections of `h` are the `b` with `<b, u> >= h(u)`.
//!
//! A b-divisor is a divisor up to pull-back: two representatives are equal
//! when they agree after pulling both back to a common refinement.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grothendieck::{self, VirtualClass};
use crate::lattice_geometry::linalg::rank;
use crate::lattice_geometry::{
    bounding_box, box_points, mixed_volume, refines, vertex_cone_generators, LatticePoint, LatticePolytope,
    FAN_MAX_DIM,
};
use crate::subspaces::MonomialSubspace;

/// A maximal cone of a model: the normal cone of the base at `vertex`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub vertex: LatticePoint,
    /// Primitive ray generators, sorted.
    pub rays: Vec<LatticePoint>,
}

/// Two adjacent maximal cones and the rays of their common facet.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Wall {
    left: usize,
    right: usize,
    shared: Vec<LatticePoint>,
}

#[derive(Clone, Debug)]
pub struct ToricModel {
    base: LatticePolytope,
    cones: Vec<Cone>,
    walls: Vec<Wall>,
}

impl PartialEq for ToricModel {
    /// Fan equality, not equality of bases.
    fn eq(&self, other: &Self) -> bool {
        self.same_fan(other).unwrap_or(false)
    }
}

fn rows(points: &[LatticePoint]) -> Vec<Vec<BigInt>> {
    points.iter().map(|p| p.coords().to_vec()).collect()
}

impl ToricModel {
    /// The normal fan of `base`.
    pub fn new(base: LatticePolytope) -> Result<Self> {
        if base.dim() > FAN_MAX_DIM {
            return Err(Error::DimensionCap {
                dim: base.dim(),
                max: FAN_MAX_DIM,
            });
        }
        if !base.is_full_dimensional() {
            return Err(Error::NotFullDimensional);
        }
        let n = base.dim();
        let cones: Vec<Cone> = (0..base.vertices().len())
            .map(|i| {
                let mut rays = vertex_cone_generators(&base, i);
                rays.sort();
                Cone {
                    vertex: base.vertices()[i].clone(),
                    rays,
                }
            })
            .collect();
        let mut walls = Vec::new();
        for i in 0..cones.len() {
            for j in i + 1..cones.len() {
                let shared: Vec<LatticePoint> =
                    cones[i].rays.iter().filter(|r| cones[j].rays.contains(r)).cloned().collect();
                if rank(&rows(&shared), n) + 1 == n {
                    walls.push(Wall {
                        left: i,
                        right: j,
                        shared,
                    });
                }
            }
        }
        let model = ToricModel { base, cones, walls };
        model.validate()?;
        Ok(model)
    }

    /// Checks that every primitive direction in `{-2..2}^n` lies in some
    /// cone and that each wall sits between exactly its two cones.
    fn validate(&self) -> Result<()> {
        let n = self.dim();
        let lo = vec![BigInt::from(-2); n];
        let hi = vec![BigInt::from(2); n];
        for u in box_points(&lo, &hi) {
            let g = u.coords().iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if u.is_zero() || g != BigInt::from(1) {
                continue;
            }
            if !(0..self.cones.len()).any(|i| self.cone_contains(i, &u)) {
                return Err(Error::InvariantBreach(format!("direction {u} lies in no cone")));
            }
        }
        for w in &self.walls {
            let u = sum(&w.shared, n);
            let holders: Vec<usize> = (0..self.cones.len()).filter(|&i| self.cone_contains(i, &u)).collect();
            if holders != [w.left, w.right] {
                return Err(Error::InvariantBreach(format!(
                    "wall through {u} is shared by cones {holders:?}"
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn base(&self) -> &LatticePolytope {
        &self.base
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    /// All ray generators of the fan, sorted.
    pub fn rays(&self) -> Vec<LatticePoint> {
        let mut rays: Vec<LatticePoint> = self.cones.iter().flat_map(|c| c.rays.iter().cloned()).collect();
        rays.sort();
        rays.dedup();
        rays
    }

    /// Membership in the cone at vertex `v`: `<a - v, u> >= 0` for all vertices `a`.
    pub fn cone_contains(&self, cone: usize, u: &LatticePoint) -> bool {
        let v = &self.cones[cone].vertex;
        self.base.vertices().iter().all(|a| !(a - v).dot(u).is_negative())
    }

    fn check_dim(&self, other: &ToricModel) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// Mutual refinement.
    pub fn same_fan(&self, other: &ToricModel) -> Result<bool> {
        Ok(dominates(self, other)? && dominates(other, self)?)
    }

    /// For each cone of `self`, the cone of `other` with the same rays.
    fn align(&self, other: &ToricModel) -> Result<Vec<usize>> {
        self.check_dim(other)?;
        if self.cones.len() != other.cones.len() {
            return Err(Error::ModelMismatch);
        }
        self.cones
            .iter()
            .map(|c| other.cones.iter().position(|d| d.rays == c.rays).ok_or(Error::ModelMismatch))
            .collect()
    }
}

fn sum(points: &[LatticePoint], n: usize) -> LatticePoint {
    points.iter().fold(LatticePoint::origin(n), |acc, p| &acc + p)
}

/// Does the fan of `finer` refine the fan of `coarser`?
pub fn dominates(finer: &ToricModel, coarser: &ToricModel) -> Result<bool> {
    finer.check_dim(coarser)?;
    refines(&finer.base, &coarser.base)
}

/// The model of the Minkowski sum of the bases, which dominates both.
pub fn common_refinement(m1: &ToricModel, m2: &ToricModel) -> Result<ToricModel> {
    m1.check_dim(m2)?;
    let m = ToricModel::new(m1.base.minkowski_sum(&m2.base)?)?;
    if !dominates(&m, m1)? || !dominates(&m, m2)? {
        return Err(Error::InvariantBreach(
            "Minkowski sum model fails to dominate a summand".into(),
        ));
    }
    Ok(m)
}

/// An integral piecewise-linear function on the fan of a model.
#[derive(Clone, Debug)]
pub struct ToricDivisor {
    model: ToricModel,
    /// `functionals[i]` is `a_σ` for `model.cones()[i]`.
    functionals: Vec<LatticePoint>,
}

impl PartialEq for ToricDivisor {
    /// Same fan and same local data.
    fn eq(&self, other: &Self) -> bool {
        self.same_local_data(other).unwrap_or(false)
    }
}

impl fmt::Display for ToricDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "divisor on {}:", self.model.base)?;
        for (c, a) in self.model.cones.iter().zip(&self.functionals) {
            write!(f, " {}->{}", c.vertex, a)?;
        }
        Ok(())
    }
}

impl ToricDivisor {
    /// Validates that neighbouring functionals agree on shared rays.
    pub fn new(model: ToricModel, functionals: Vec<LatticePoint>) -> Result<Self> {
        if functionals.len() != model.cones.len() {
            return Err(Error::Arity {
                expected: model.cones.len(),
                found: functionals.len(),
            });
        }
        if let Some(a) = functionals.iter().find(|a| a.dim() != model.dim()) {
            return Err(Error::DimensionMismatch {
                expected: model.dim(),
                found: a.dim(),
            });
        }
        for i in 0..model.cones.len() {
            for j in i + 1..model.cones.len() {
                for r in model.cones[i].rays.iter().filter(|r| model.cones[j].rays.contains(r)) {
                    if functionals[i].dot(r) != functionals[j].dot(r) {
                        return Err(Error::InvalidDivisor(format!(
                            "functionals {} and {} disagree on the ray {r}",
                            functionals[i], functionals[j]
                        )));
                    }
                }
            }
        }
        Ok(ToricDivisor { model, functionals })
    }

    /// The support function of the model's own base.
    pub fn of_base(model: &ToricModel) -> Self {
        ToricDivisor {
            model: model.clone(),
            functionals: model.cones.iter().map(|c| c.vertex.clone()).collect(),
        }
    }

    /// The divisor of the monomial `x^a`: one functional everywhere.
    pub fn principal(model: &ToricModel, a: LatticePoint) -> Result<Self> {
        if a.dim() != model.dim() {
            return Err(Error::DimensionMismatch {
                expected: model.dim(),
                found: a.dim(),
            });
        }
        Ok(ToricDivisor {
            model: model.clone(),
            functionals: vec![a; model.cones.len()],
        })
    }

    pub fn zero(model: &ToricModel) -> Self {
        Self::principal(model, LatticePoint::origin(model.dim())).expect("matching dimension")
    }

    pub fn model(&self) -> &ToricModel {
        &self.model
    }

    pub fn functionals(&self) -> &[LatticePoint] {
        &self.functionals
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    pub fn is_principal(&self) -> bool {
        self.functionals.windows(2).all(|w| w[0] == w[1])
    }

    /// `h(u)` for any direction.
    pub fn value_at(&self, u: &LatticePoint) -> Result<BigInt> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.dim(),
            });
        }
        let i = (0..self.model.cones.len())
            .find(|&i| self.model.cone_contains(i, u))
            .ok_or_else(|| Error::InvariantBreach(format!("direction {u} lies in no cone")))?;
        Ok(self.functionals[i].dot(u))
    }

    fn zip_with(&self, other: &ToricDivisor, f: impl Fn(&LatticePoint, &LatticePoint) -> LatticePoint) -> Result<Self> {
        let map = self.model.align(&other.model)?;
        Ok(ToricDivisor {
            model: self.model.clone(),
            functionals: self
                .functionals
                .iter()
                .zip(&map)
                .map(|(a, &j)| f(a, &other.functionals[j]))
                .collect(),
        })
    }

    /// Sum of divisors on the same fan.
    pub fn add(&self, other: &ToricDivisor) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ToricDivisor) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        ToricDivisor {
            model: self.model.clone(),
            functionals: self.functionals.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        ToricDivisor {
            model: self.model.clone(),
            functionals: self.functionals.iter().map(|a| a.scale(k)).collect(),
        }
    }

    /// Equality of local data cone by cone; the fans must agree.
    pub fn same_local_data(&self, other: &ToricDivisor) -> Result<bool> {
        let map = self.model.align(&other.model)?;
        Ok(self.functionals.iter().zip(&map).all(|(a, &j)| *a == other.functionals[j]))
    }

    /// For each wall `(σ_v, σ_w)` and each ray `ρ` of `σ_w` off the wall,
    /// `<a_v - a_w, ρ>` together with `<v - w, ρ>` (and the mirrored pair).
    fn wall_slacks(&self) -> Vec<(BigInt, BigInt)> {
        let m = &self.model;
        let mut out = Vec::new();
        for w in &m.walls {
            for (v, x) in [(w.left, w.right), (w.right, w.left)] {
                let da = &self.functionals[v] - &self.functionals[x];
                let dq = &m.cones[v].vertex - &m.cones[x].vertex;
                for r in m.cones[x].rays.iter().filter(|r| !w.shared.contains(r)) {
                    out.push((da.dot(r), dq.dot(r)));
                }
            }
        }
        out
    }

    /// Strict convexity across every wall of the fan (very ampleness).
    pub fn is_strictly_convex(&self) -> bool {
        self.wall_slacks().iter().all(|(t, _)| t.is_positive())
    }

    /// `D(L(D)) = D` on this model: the sections span a polytope whose
    /// divisor has the same fan and the same local data.
    pub fn reproduced_by_sections(&self) -> Result<bool> {
        let Some(sections) = subspace_of_divisor(self)? else {
            return Ok(false);
        };
        let p = sections.newton_polytope();
        if !p.is_full_dimensional() {
            return Ok(false);
        }
        let d = ToricDivisor::of_base(&ToricModel::new(p)?);
        if !d.model.same_fan(&self.model)? {
            return Ok(false);
        }
        d.same_local_data(self)
    }
}

/// Re-reads `d` on a dominating model: each fine cone takes the functional
/// of the coarse cone containing it.
pub fn pullback(d: &ToricDivisor, target: &ToricModel) -> Result<ToricDivisor> {
    if !dominates(target, &d.model)? {
        return Err(Error::NotDominating);
    }
    let n = target.dim();
    let functionals = target
        .cones
        .par_iter()
        .map(|c| {
            let inner = sum(&c.rays, n);
            (0..d.model.cones.len())
                .find(|&i| d.model.cone_contains(i, &inner))
                .map(|i| d.functionals[i].clone())
                .ok_or_else(|| Error::InvariantBreach(format!("fine cone at {} fits no coarse cone", c.vertex)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ToricDivisor {
        model: target.clone(),
        functionals,
    })
}

/// The divisor of `L`: the support function of its Newton polytope on the
/// polytope's own normal fan.
pub fn divisor_of_subspace(l: &MonomialSubspace) -> Result<ToricDivisor> {
    if l.dim() > FAN_MAX_DIM {
        return Err(Error::DimensionCap {
            dim: l.dim(),
            max: FAN_MAX_DIM,
        });
    }
    let p = l.newton_polytope();
    if !p.is_full_dimensional() {
        return Err(Error::DegenerateNewtonPolytope);
    }
    let d = ToricDivisor::of_base(&ToricModel::new(p)?);
    if !d.is_strictly_convex() {
        return Err(Error::InvariantBreach(format!("support function of {} is not strictly convex", d.model.base)));
    }
    Ok(d)
}

/// Global sections: all `b` with `<b, ρ> >= h(ρ)` on every ray. `None` is
/// the zero subspace.
pub fn subspace_of_divisor(d: &ToricDivisor) -> Result<Option<MonomialSubspace>> {
    let rays = d.model.rays();
    let bounds: Vec<BigInt> = rays.iter().map(|r| d.value_at(r)).collect::<Result<_>>()?;
    // Sections satisfy <b, u> >= min_σ <a_σ, u> everywhere, so they lie in
    // the hull of the functionals.
    let (lo, hi) = bounding_box(&d.functionals);
    let support: Vec<LatticePoint> = box_points(&lo, &hi)
        .filter(|b| rays.iter().zip(&bounds).all(|(r, h)| b.dot(r) >= *h))
        .collect();
    if support.is_empty() {
        return Ok(None);
    }
    MonomialSubspace::new(support).map(Some)
}

/// The splitting `D = D_plus - D_minus` with `D_minus = m D_Q`, `Q` the base.
#[derive(Clone, Debug, PartialEq)]
pub struct VeryAmpleSplit {
    pub plus: ToricDivisor,
    pub minus: ToricDivisor,
    pub multiplier: BigInt,
}

impl VeryAmpleSplit {
    /// The virtual polytope `[conv a(D_plus)] - [m Q]`.
    pub fn virtual_class(&self) -> Result<VirtualClass> {
        let plus = LatticePolytope::convex_hull(&self.plus.functionals)?;
        let minus = LatticePolytope::convex_hull(&self.minus.functionals)?;
        VirtualClass::new(plus, minus)
    }
}

/// A b-divisor: a Cartier divisor on some model, up to pull-back.
#[derive(Clone, Debug)]
pub struct BDivisor {
    representative: ToricDivisor,
}

impl PartialEq for BDivisor {
    fn eq(&self, other: &Self) -> bool {
        bdiv_equal(self, other).unwrap_or(false)
    }
}

impl From<ToricDivisor> for BDivisor {
    fn from(representative: ToricDivisor) -> Self {
        BDivisor { representative }
    }
}

impl BDivisor {
    pub fn of_subspace(l: &MonomialSubspace) -> Result<Self> {
        divisor_of_subspace(l).map(Self::from)
    }

    pub fn representative(&self) -> &ToricDivisor {
        &self.representative
    }

    pub fn dim(&self) -> usize {
        self.representative.dim()
    }

    pub fn add(&self, other: &BDivisor) -> Result<BDivisor> {
        let m = common_refinement(&self.representative.model, &other.representative.model)?;
        let a = pullback(&self.representative, &m)?;
        let b = pullback(&other.representative, &m)?;
        a.add(&b).map(Self::from)
    }

    pub fn neg(&self) -> BDivisor {
        self.representative.neg().into()
    }
}

pub fn bdiv_equal(b1: &BDivisor, b2: &BDivisor) -> Result<bool> {
    let m = common_refinement(&b1.representative.model, &b2.representative.model)?;
    pullback(&b1.representative, &m)?.same_local_data(&pullback(&b2.representative, &m)?)
}

/// Splits the representative into two strictly convex divisors on its model.
pub fn decompose_very_ample(b: &BDivisor) -> Result<VeryAmpleSplit> {
    let d = &b.representative;
    let dq = ToricDivisor::of_base(&d.model);
    // need t + m s > 0 for every wall slack (t, s), where s > 0
    let mut m = BigInt::zero();
    for (t, s) in d.wall_slacks() {
        if !s.is_positive() {
            return Err(Error::InvariantBreach(format!(
                "base of {} is not strictly convex on its own fan",
                d.model.base
            )));
        }
        if !t.is_positive() {
            let need = (-t).div_floor(&s) + 1;
            if need > m {
                m = need;
            }
        }
    }
    let minus = if m.is_zero() { ToricDivisor::zero(&d.model) } else { dq.scale(&m) };
    let plus = d.add(&minus)?;
    if !plus.is_strictly_convex() || (!m.is_zero() && !minus.is_strictly_convex()) {
        return Err(Error::InvariantBreach(format!("multiplier {m} does not make {d} very ample")));
    }
    Ok(VeryAmpleSplit {
        plus,
        minus,
        multiplier: m,
    })
}

/// Intersection number of `n` b-divisors in dimension `n`, computed on a
/// common refinement of all their models.
pub fn bdiv_index(bs: &[BDivisor]) -> Result<BigInt> {
    let n = bs.first().ok_or(Error::Arity { expected: 1, found: 0 })?.dim();
    if bs.len() != n {
        return Err(Error::Arity {
            expected: n,
            found: bs.len(),
        });
    }
    if let Some(b) = bs.iter().find(|b| b.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.dim(),
        });
    }
    let mut model = bs[0].representative.model.clone();
    for b in &bs[1..] {
        if !dominates(&model, &b.representative.model)? {
            model = common_refinement(&model, &b.representative.model)?;
        }
    }
    let classes = bs
        .iter()
        .map(|b| {
            let pulled = BDivisor::from(pullback(&b.representative, &model)?);
            decompose_very_ample(&pulled)?.virtual_class()
        })
        .collect::<Result<Vec<_>>>()?;
    grothendieck::index(&classes)
}

/// Outcome of the subspace / b-divisor round trip for one subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundtripReport {
    /// `L ⊂ F(G(L)) ⊂ completion(L)` and `F(G(L)) ~ L`.
    pub sections_equivalent: bool,
    pub bdiv_index: BigInt,
    pub mixed_volume: BigInt,
}

impl RoundtripReport {
    pub fn holds(&self) -> bool {
        self.sections_equivalent && self.bdiv_index == self.mixed_volume
    }
}

/// Sends `L` to its b-divisor and back, and compares the b-divisor index of
/// `(L, companions...)` with the mixed volume of the Newton polytopes.
pub fn isomorphism_roundtrip(l: &MonomialSubspace, companions: &[MonomialSubspace]) -> Result<RoundtripReport> {
    let n = l.dim();
    if companions.len() + 1 != n {
        return Err(Error::Arity {
            expected: n - 1,
            found: companions.len(),
        });
    }
    let g = BDivisor::of_subspace(l)?;
    let sections_equivalent = match subspace_of_divisor(g.representative())? {
        Some(f) => l.is_subspace_of(&f) && f.is_subspace_of(&l.completion()) && f.equivalent(l)?,
        None => false,
    };
    let mut all = vec![l.clone()];
    all.extend_from_slice(companions);
    let bs = all.iter().map(BDivisor::of_subspace).collect::<Result<Vec<_>>>()?;
    let polys: Vec<LatticePolytope> = all.iter().map(|s| s.newton_polytope()).collect();
    Ok(RoundtripReport {
        sections_equivalent,
        bdiv_index: bdiv_index(&bs)?,
        mixed_volume: mixed_volume(&polys)?,
    })
}
