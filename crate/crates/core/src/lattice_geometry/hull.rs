//! Beneath-beyond convex hull with a placing triangulation.
//!
//! Points are placed farthest from the centroid first. The first affinely
//! independent points (greedily, in that order) form the initial simplex; every later
//! point that sees part of the current boundary is coned over the visible
//! boundary facets. The simplices produced this way triangulate the hull, so
//! the absolute determinants sum to `r!` times its volume.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::linalg::{cofactor_normal, dot, pivot_columns, primitive, rank};

/// Hyperplane `normal . x >= offset` valid on the hull.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct HalfSpace {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
}

impl HalfSpace {
    pub fn slack(&self, x: &[BigInt]) -> BigInt {
        dot(&self.normal, x) - &self.offset
    }
}

#[derive(Clone, Debug)]
pub(crate) struct HullData {
    /// Indices (into the deduplicated, sorted input) of the extreme points.
    pub vertices: Vec<usize>,
    pub points: Vec<Vec<BigInt>>,
    /// Coordinates used for the relative description; `pivots.len()` is the
    /// affine dimension.
    pub pivots: Vec<usize>,
    /// Facets in the projected coordinates, primitive normals, sorted.
    pub rel_facets: Vec<HalfSpace>,
    /// `r!` times the `r`-dimensional volume of the projected hull.
    pub det_sum: BigInt,
}

struct SimplexFacet {
    idx: Vec<usize>,
    plane: HalfSpace,
    /// The plane in machine integers when it fits.
    small: Option<(Vec<i128>, i128)>,
}

impl SimplexFacet {
    /// Slack of `p`, computed in machine integers when nothing overflows.
    fn slack(&self, p: &[BigInt], small_p: Option<&[i128]>) -> BigInt {
        match self.small_slack(small_p) {
            Some(s) => BigInt::from(s),
            None => self.plane.slack(p),
        }
    }

    fn small_slack(&self, small_p: Option<&[i128]>) -> Option<i128> {
        let (normal, offset) = self.small.as_ref()?;
        normal
            .iter()
            .zip(small_p?)
            .try_fold(0i128, |acc, (a, b)| acc.checked_add(a.checked_mul(*b)?))?
            .checked_sub(*offset)
    }
}

fn to_small(v: &[BigInt]) -> Option<Vec<i128>> {
    v.iter().map(|x| i128::try_from(x).ok()).collect()
}

pub(crate) fn hull(mut points: Vec<Vec<BigInt>>, n: usize) -> HullData {
    points.sort();
    points.dedup();
    assert!(!points.is_empty());
    let diffs: Vec<Vec<BigInt>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    let pivots = pivot_columns(&diffs, n);
    let r = pivots.len();
    if r == 0 {
        return HullData {
            vertices: vec![0],
            points,
            pivots,
            rel_facets: Vec::new(),
            det_sum: BigInt::zero(),
        };
    }
    let proj: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| pivots.iter().map(|&c| p[c].clone()).collect())
        .collect();

    let (boundary, det_sum) = place(&proj, r);

    let rel_facets: Vec<HalfSpace> = boundary
        .iter()
        .map(|f| {
            let (normal, g) = primitive(&f.plane.normal);
            HalfSpace {
                normal,
                offset: &f.plane.offset / g,
            }
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let on_boundary: BTreeSet<usize> = boundary.iter().flat_map(|f| f.idx.iter().copied()).collect();
    let vertices = on_boundary
        .into_iter()
        .filter(|&i| {
            let tight: Vec<Vec<BigInt>> = rel_facets
                .iter()
                .filter(|h| h.slack(&proj[i]).is_zero())
                .map(|h| h.normal.clone())
                .collect();
            rank(&tight, r) == r
        })
        .collect();

    HullData {
        vertices,
        points,
        pivots,
        rel_facets,
        det_sum,
    }
}

fn diff(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Guaranteed vertices first (lexicographic minimizers of small integer
/// functionals), then the rest farthest from the centroid first, ties in
/// input order. Early points are mostly vertices, so later interior points
/// are rejected without any new facets.
fn placing_order(pts: &[Vec<BigInt>], r: usize) -> Vec<usize> {
    let count = BigInt::from(pts.len());
    let mut total = vec![BigInt::zero(); r];
    for p in pts {
        for (t, x) in total.iter_mut().zip(p) {
            *t += x;
        }
    }
    let spread: Vec<BigInt> = pts
        .iter()
        .map(|p| p.iter().zip(&total).map(|(x, t)| x * &count - t).map(|d| &d * &d).sum())
        .collect();
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| spread[b].cmp(&spread[a]).then(a.cmp(&b)));

    let mut seeds: BTreeSet<usize> = BTreeSet::new();
    let small: Option<Vec<Vec<i128>>> = pts.iter().map(|p| to_small(p)).collect();
    if let Some(small) = small {
        let reach: i128 = match r {
            1..=3 => 3,
            4 => 1,
            _ => 0,
        };
        for u in directions(r, reach) {
            let value = |p: &[i128]| p.iter().zip(&u).try_fold(0i128, |acc, (x, c)| acc.checked_add(x.checked_mul(*c)?));
            let mut best: Option<(i128, usize)> = None;
            for (i, p) in small.iter().enumerate() {
                let Some(v) = value(p) else {
                    best = None;
                    break;
                };
                // points are sorted, so the first minimizer is the lexicographic one
                if best.is_none_or(|(b, _)| v < b) {
                    best = Some((v, i));
                }
            }
            if let Some((_, i)) = best {
                seeds.insert(i);
            }
        }
    }
    let mut out: Vec<usize> = order.iter().copied().filter(|i| seeds.contains(i)).collect();
    out.extend(order.into_iter().filter(|i| !seeds.contains(i)));
    out
}

/// Nonzero vectors in `{-reach..reach}^r` plus the signed unit vectors.
fn directions(r: usize, reach: i128) -> Vec<Vec<i128>> {
    let mut out: Vec<Vec<i128>> = (0..r)
        .flat_map(|k| {
            [1, -1].map(|s| {
                let mut e = vec![0; r];
                e[k] = s;
                e
            })
        })
        .collect();
    if reach == 0 {
        return out;
    }
    let side = (2 * reach + 1) as usize;
    for code in 0..side.pow(r as u32) {
        let mut rest = code;
        let u: Vec<i128> = (0..r)
            .map(|_| {
                let c = (rest % side) as i128 - reach;
                rest /= side;
                c
            })
            .collect();
        if u.iter().any(|&c| c != 0) {
            out.push(u);
        }
    }
    out
}

fn place(pts: &[Vec<BigInt>], r: usize) -> (Vec<SimplexFacet>, BigInt) {
    let order = placing_order(pts, r);
    let mut chosen = vec![order[0]];
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for &i in &order[1..] {
        if chosen.len() == r + 1 {
            break;
        }
        rows.push(diff(&pts[i], &pts[chosen[0]]));
        if rank(&rows, r) == rows.len() {
            chosen.push(i);
        } else {
            rows.pop();
        }
    }
    assert_eq!(chosen.len(), r + 1, "projected points must be full-dimensional");
    // facet index lists stay sorted so that ridges compare as keys
    chosen.sort_unstable();

    // Interior witness: (r + 1) times the barycentre of the initial simplex.
    let weight = BigInt::from(r as u64 + 1);
    let mut centre = vec![BigInt::zero(); r];
    for &i in &chosen {
        for (c, x) in centre.iter_mut().zip(&pts[i]) {
            *c += x;
        }
    }

    let make_facet = |idx: Vec<usize>| -> SimplexFacet {
        let base = &pts[idx[0]];
        let d: Vec<Vec<BigInt>> = idx[1..].iter().map(|&k| diff(&pts[k], base)).collect();
        let mut normal = cofactor_normal(&d, r);
        let mut offset = dot(&normal, base);
        let side = dot(&normal, &centre) - &weight * &offset;
        debug_assert!(!side.is_zero());
        if side.is_negative() {
            normal.iter_mut().for_each(|x| *x = -&*x);
            offset = -offset;
        }
        let small = to_small(&normal).zip(i128::try_from(&offset).ok());
        SimplexFacet {
            idx,
            plane: HalfSpace { normal, offset },
            small,
        }
    };

    let mut facets: Vec<SimplexFacet> = (0..=r)
        .map(|skip| {
            let idx: Vec<usize> = chosen
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &i)| i)
                .collect();
            make_facet(idx)
        })
        .collect();
    let mut det_sum = facets[0].plane.slack(&pts[chosen[0]]).abs();

    let small_pts: Vec<Option<Vec<i128>>> = pts.iter().map(|p| to_small(p)).collect();
    let placed: BTreeSet<usize> = chosen.iter().copied().collect();
    for &i in &order {
        let p = &pts[i];
        let small_p = small_pts[i].as_deref();
        if facets.iter().all(|f| f.small_slack(small_p).is_some_and(|s| s >= 0)) {
            continue;
        }
        if placed.contains(&i) {
            continue;
        }
        let mut visible = Vec::new();
        let mut hidden = Vec::new();
        for f in facets.drain(..) {
            let s = f.slack(p, small_p);
            if s.is_negative() {
                det_sum -= s;
                visible.push(f);
            } else {
                hidden.push(f);
            }
        }
        facets = hidden;
        if visible.is_empty() {
            continue;
        }
        let mut ridges: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for f in &visible {
            for skip in 0..f.idx.len() {
                let mut ridge = f.idx.clone();
                ridge.remove(skip);
                *ridges.entry(ridge).or_default() += 1;
            }
        }
        for (mut ridge, count) in ridges {
            if count == 1 {
                ridge.push(i);
                ridge.sort_unstable();
                facets.push(make_facet(ridge));
            }
        }
    }
    (facets, det_sum)
}
