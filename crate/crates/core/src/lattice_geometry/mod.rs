//! Exact lattice-polytope geometry.
//!
//! Everything here is integer or rational arithmetic on [`BigInt`]; there is
//! no floating point. Polytopes are immutable once built.

mod fan;
mod hull;
pub mod linalg;
mod volume;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use hull::HalfSpace;

pub use fan::{refines, vertex_cone_generators, FAN_MAX_DIM};
pub(crate) use volume::factorial;
pub use volume::mixed_volume;

/// A point of `Z^n`, the exponent of a Laurent monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint(Vec<BigInt>);

impl LatticePoint {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticePoint(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        LatticePoint(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn origin(n: usize) -> Self {
        LatticePoint(vec![BigInt::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![BigInt::zero(); n];
        v[i] = BigInt::from(1);
        LatticePoint(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn dot(&self, other: &LatticePoint) -> BigInt {
        linalg::dot(&self.0, &other.0)
    }

    pub fn scale(&self, k: &BigInt) -> LatticePoint {
        LatticePoint(self.0.iter().map(|x| x * k).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: &LatticePoint) -> LatticePoint {
        assert_eq!(self.dim(), rhs.dim());
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: &LatticePoint) -> LatticePoint {
        assert_eq!(self.dim(), rhs.dim());
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| -a).collect())
    }
}

/// Facet inequality `normal . x >= offset` with a primitive inner normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Facet {
    pub normal: LatticePoint,
    pub offset: BigInt,
}

/// Exact volume: `value` is Euclidean, `normalized = n! * value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeValue {
    pub value: BigRational,
    pub normalized: BigInt,
}

/// Convex hull of finitely many lattice points, stored by its vertices.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<LatticePoint>,
    /// Ambient facets; empty unless full-dimensional.
    facets: Vec<Facet>,
    // Relative description used for membership of lower-dimensional hulls.
    pivots: Vec<usize>,
    rel_facets: Vec<HalfSpace>,
    affine_basis: Vec<Vec<BigInt>>,
    /// `r!` times the relative volume, `r` the affine dimension.
    rel_det_sum: BigInt,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for LatticePolytope {}

impl std::hash::Hash for LatticePolytope {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        self.vertices.hash(state);
    }
}

impl LatticePolytope {
    /// Convex hull of a nonempty point set.
    pub fn convex_hull(points: &[LatticePoint]) -> Result<Self> {
        let first = points.first().ok_or(Error::Empty("convex hull of no points"))?;
        let n = first.dim();
        if n == 0 {
            return Err(Error::InvalidArgument("ambient dimension must be at least 1".into()));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.dim(),
            });
        }
        Ok(Self::hull_unchecked(points.iter().map(|p| p.0.clone()).collect(), n))
    }

    fn hull_unchecked(points: Vec<Vec<BigInt>>, n: usize) -> Self {
        let data = hull::hull(points, n);
        let r = data.pivots.len();
        let vertices: Vec<LatticePoint> = data
            .vertices
            .iter()
            .map(|&i| LatticePoint(data.points[i].clone()))
            .collect();
        let facets = if r == n {
            data.rel_facets
                .iter()
                .map(|h| Facet {
                    normal: LatticePoint(h.normal.clone()),
                    offset: h.offset.clone(),
                })
                .collect()
        } else {
            Vec::new()
        };
        let affine_basis = vertices[1..]
            .iter()
            .map(|v| (v - &vertices[0]).0)
            .filter(|d| d.iter().any(|x| !x.is_zero()))
            .collect();
        LatticePolytope {
            dim: n,
            vertices,
            facets,
            pivots: data.pivots,
            rel_facets: data.rel_facets,
            affine_basis,
            rel_det_sum: data.det_sum,
        }
    }

    /// Convenience constructor from small integer coordinates.
    pub fn from_i64s(points: &[&[i64]]) -> Result<Self> {
        let pts: Vec<LatticePoint> = points.iter().map(|p| LatticePoint::from_i64s(p)).collect();
        Self::convex_hull(&pts)
    }

    pub fn point(p: LatticePoint) -> Self {
        let n = p.dim();
        Self::hull_unchecked(vec![p.0], n)
    }

    /// The unit simplex `conv(0, e_1, ..., e_n)`.
    pub fn unit_simplex(n: usize) -> Self {
        let mut pts = vec![LatticePoint::origin(n).0];
        pts.extend((0..n).map(|i| LatticePoint::unit(n, i).0));
        Self::hull_unchecked(pts, n)
    }

    /// The unit cube `[0,1]^n`.
    pub fn unit_cube(n: usize) -> Self {
        let pts = (0..1u64 << n)
            .map(|mask| {
                (0..n)
                    .map(|i| BigInt::from((mask >> i) & 1))
                    .collect::<Vec<_>>()
            })
            .collect();
        Self::hull_unchecked(pts, n)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// Facets with primitive inner normals; populated for full-dimensional
    /// polytopes only.
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn affine_dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim() == self.dim
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim != other {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other,
            });
        }
        Ok(())
    }

    /// Minkowski sum, the hull of all pairwise vertex sums.
    pub fn minkowski_sum(&self, other: &LatticePolytope) -> Result<LatticePolytope> {
        self.check_dim(other.dim)?;
        let pts = self
            .vertices
            .iter()
            .flat_map(|a| other.vertices.iter().map(move |b| (a + b).0))
            .collect();
        Ok(Self::hull_unchecked(pts, self.dim))
    }

    pub fn translate(&self, t: &LatticePoint) -> Result<LatticePolytope> {
        self.check_dim(t.dim())?;
        Ok(self.map_vertices(|v| v + t))
    }

    /// `k * P` for a non-negative integer `k`; `0 * P` is the origin.
    pub fn dilate(&self, k: u64) -> LatticePolytope {
        let k = BigInt::from(k);
        self.map_vertices(|v| v.scale(&k))
    }

    fn map_vertices(&self, f: impl Fn(&LatticePoint) -> LatticePoint) -> LatticePolytope {
        Self::hull_unchecked(self.vertices.iter().map(|v| f(v).0).collect(), self.dim)
    }

    /// Exact membership test.
    pub fn contains(&self, p: &LatticePoint) -> bool {
        if p.dim() != self.dim {
            return false;
        }
        let r = self.affine_dim();
        if r == 0 {
            return *p == self.vertices[0];
        }
        if r < self.dim {
            let mut rows = self.affine_basis.clone();
            rows.push((p - &self.vertices[0]).0);
            if linalg::rank(&rows, self.dim) != r {
                return false;
            }
        }
        let proj: Vec<BigInt> = self.pivots.iter().map(|&c| p.0[c].clone()).collect();
        self.rel_facets.iter().all(|h| !h.slack(&proj).is_negative())
    }

    /// True when every vertex of `other` lies in `self`.
    pub fn contains_polytope(&self, other: &LatticePolytope) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }

    /// Bounding box `(lo, hi)` of the vertices.
    pub fn bounding_box(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        bounding_box(&self.vertices)
    }

    /// All lattice points in `P`, in lexicographic order.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let (lo, hi) = self.bounding_box();
        box_points(&lo, &hi).filter(|p| self.contains(p)).collect()
    }

    pub fn euclidean_volume(&self) -> VolumeValue {
        volume::euclidean_volume(self)
    }

    /// Minimum of `<a, u>` over `P` together with the face where it is attained.
    pub fn support_data(&self, u: &LatticePoint) -> Result<(BigInt, LatticePolytope)> {
        self.check_dim(u.dim())?;
        if u.is_zero() {
            return Err(Error::ZeroVector);
        }
        let vals: Vec<BigInt> = self.vertices.iter().map(|v| v.dot(u)).collect();
        let min = vals.iter().min().expect("nonempty").clone();
        let face: Vec<Vec<BigInt>> = self
            .vertices
            .iter()
            .zip(&vals)
            .filter(|(_, x)| **x == min)
            .map(|(v, _)| v.0.clone())
            .collect();
        Ok((min, Self::hull_unchecked(face, self.dim)))
    }

    /// `h_P(u) = min_{a in P} <a, u>`, defined for every `u` including zero.
    pub fn support_value(&self, u: &LatticePoint) -> BigInt {
        self.vertices.iter().map(|v| v.dot(u)).min().expect("nonempty")
    }

    pub(crate) fn rel_det_sum(&self) -> &BigInt {
        &self.rel_det_sum
    }
}

impl fmt::Display for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn bounding_box(points: &[LatticePoint]) -> (Vec<BigInt>, Vec<BigInt>) {
    let n = points[0].dim();
    let mut lo = points[0].0.clone();
    let mut hi = points[0].0.clone();
    for p in &points[1..] {
        for i in 0..n {
            if p.0[i] < lo[i] {
                lo[i] = p.0[i].clone();
            }
            if p.0[i] > hi[i] {
                hi[i] = p.0[i].clone();
            }
        }
    }
    (lo, hi)
}

/// Lexicographic scan of the integer box `[lo, hi]`.
pub(crate) fn box_points<'a>(lo: &'a [BigInt], hi: &'a [BigInt]) -> impl Iterator<Item = LatticePoint> + 'a {
    let mut cur: Option<Vec<BigInt>> = if lo.iter().zip(hi).all(|(l, h)| l <= h) {
        Some(lo.to_vec())
    } else {
        None
    };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if next[i] < hi[i] {
                next[i] += 1;
                for j in i + 1..next.len() {
                    next[j] = lo[j].clone();
                }
                cur = Some(next);
                break;
            }
        }
        Some(LatticePoint(out))
    })
}

#[cfg(test)]
mod tests;
