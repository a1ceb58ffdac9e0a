use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;

fn poly(points: &[&[i64]]) -> LatticePolytope {
    LatticePolytope::from_i64s(points).unwrap()
}

fn pt(c: &[i64]) -> LatticePoint {
    LatticePoint::from_i64s(c)
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

/// Independent 2-D oracle: Andrew's monotone chain on i64 plus the shoelace
/// formula, returning (hull vertices, twice the area).
fn oracle_hull_2d(points: &[(i64, i64)]) -> (Vec<(i64, i64)>, i64) {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return (pts, 0);
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    let mut hull = lower;
    hull.extend(upper);
    let twice_area: i64 = (0..hull.len())
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum::<i64>()
        .abs();
    let mut sorted = hull.clone();
    sorted.sort();
    (sorted, twice_area)
}

fn to_pairs(p: &LatticePolytope) -> Vec<(i64, i64)> {
    p.vertices()
        .iter()
        .map(|v| {
            let c: Vec<i64> = v.coords().iter().map(|x| x.try_into().unwrap()).collect();
            (c[0], c[1])
        })
        .collect()
}

#[test]
fn hull_of_a_point() {
    let p = poly(&[&[0, 0]]);
    assert_eq!(p.vertices(), &[pt(&[0, 0])]);
    assert_eq!(p.euclidean_volume().normalized, big(0));
    assert_eq!(p.affine_dim(), 0);
}

#[test]
fn edge_midpoint_is_not_extreme() {
    let p = poly(&[&[0, 0], &[2, 0], &[0, 2], &[1, 1]]);
    assert_eq!(p.vertices(), &[pt(&[0, 0]), pt(&[0, 2]), pt(&[2, 0])]);
    assert_eq!(p.facets().len(), 3);
}

#[test]
fn one_dimensional_hull() {
    let p = poly(&[&[0], &[1], &[2], &[3]]);
    assert_eq!(p.vertices(), &[pt(&[0]), pt(&[3])]);
    assert_eq!(p.euclidean_volume().normalized, big(3));
}

#[test]
fn dimension_mismatch_is_rejected() {
    let err = LatticePolytope::convex_hull(&[pt(&[0, 0]), pt(&[1])]).unwrap_err();
    assert!(matches!(err, Error::DimensionMismatch { .. }));
    assert!(matches!(LatticePolytope::convex_hull(&[]), Err(Error::Empty(_))));
}

#[test]
fn collinear_points_in_the_plane() {
    let p = poly(&[&[0, 0], &[1, 1], &[2, 2], &[3, 3]]);
    assert_eq!(p.vertices(), &[pt(&[0, 0]), pt(&[3, 3])]);
    assert_eq!(p.affine_dim(), 1);
    assert!(p.facets().is_empty());
    assert!(p.contains(&pt(&[2, 2])));
    assert!(!p.contains(&pt(&[2, 1])));
    assert!(!p.contains(&pt(&[4, 4])));
}

#[test]
fn square_with_points_on_edges() {
    let p = poly(&[&[0, 0], &[0, 2], &[1, 0], &[2, 0], &[2, 2], &[1, 1], &[2, 1]]);
    assert_eq!(p.vertices(), &[pt(&[0, 0]), pt(&[0, 2]), pt(&[2, 0]), pt(&[2, 2])]);
    assert_eq!(p.euclidean_volume().normalized, big(8));
}

#[test]
fn minkowski_examples() {
    let sq = LatticePolytope::unit_cube(2);
    let tri = LatticePolytope::unit_simplex(2);
    let translated = sq.minkowski_sum(&LatticePolytope::point(pt(&[3, -1]))).unwrap();
    assert_eq!(translated, sq.translate(&pt(&[3, -1])).unwrap());

    let e1 = poly(&[&[0, 0], &[1, 0]]);
    let e2 = poly(&[&[0, 0], &[0, 1]]);
    assert_eq!(e1.minkowski_sum(&e2).unwrap(), sq);

    let pent = sq.minkowski_sum(&tri).unwrap();
    assert_eq!(pent, poly(&[&[0, 0], &[2, 0], &[2, 1], &[1, 2], &[0, 2]]));
    // shoelace oracle: twice the area of the pentagon is 7
    let (_, twice) = oracle_hull_2d(&[(0, 0), (2, 0), (2, 1), (1, 2), (0, 2)]);
    assert_eq!(twice, 7);
    assert_eq!(pent.euclidean_volume().value, BigRational::new(big(7), big(2)));
}

#[test]
fn lattice_point_examples() {
    assert_eq!(poly(&[&[0], &[3]]).lattice_points(), vec![pt(&[0]), pt(&[1]), pt(&[2]), pt(&[3])]);
    let tri = poly(&[&[0, 0], &[2, 0], &[0, 2]]);
    assert_eq!(
        tri.lattice_points(),
        vec![pt(&[0, 0]), pt(&[0, 1]), pt(&[0, 2]), pt(&[1, 0]), pt(&[1, 1]), pt(&[2, 0])]
    );
    assert_eq!(LatticePolytope::point(pt(&[4, 5])).lattice_points(), vec![pt(&[4, 5])]);
}

#[test]
fn volume_examples() {
    for n in 1..=4 {
        let v = LatticePolytope::unit_simplex(n).euclidean_volume();
        assert_eq!(v.normalized, big(1));
        assert_eq!(v.value, BigRational::new(big(1), volume::factorial(n)));
    }
    let sq = LatticePolytope::unit_cube(2).euclidean_volume();
    assert_eq!(sq.value, BigRational::from_integer(big(1)));
    assert_eq!(sq.normalized, big(2));
    assert_eq!(poly(&[&[0, 0], &[1, 3]]).euclidean_volume().normalized, big(0));
    assert_eq!(LatticePolytope::unit_cube(3).euclidean_volume().normalized, big(6));
}

#[test]
fn mixed_volume_examples() {
    let tri = LatticePolytope::unit_simplex(2);
    let sq = LatticePolytope::unit_cube(2);
    assert_eq!(mixed_volume(&[tri.clone(), tri.clone()]).unwrap(), big(1));
    for (a, b) in [(1, 1), (2, 3), (4, 1)] {
        let s1 = poly(&[&[0, 0], &[a, 0]]);
        let s2 = poly(&[&[0, 0], &[0, b]]);
        assert_eq!(mixed_volume(&[s1, s2]).unwrap(), big(a * b));
    }
    assert_eq!(mixed_volume(&[sq.clone(), tri.clone()]).unwrap(), big(2));
    assert_eq!(mixed_volume(&[sq.clone(), sq.clone()]).unwrap(), big(2));
    let t3 = LatticePolytope::unit_simplex(3);
    assert_eq!(mixed_volume(&[t3.clone(), t3.clone(), t3.clone()]).unwrap(), big(1));
    let c3 = LatticePolytope::unit_cube(3);
    assert_eq!(mixed_volume(&[c3.clone(), c3.clone(), c3]).unwrap(), big(6));
}

#[test]
fn mixed_volume_with_a_point_argument_is_zero() {
    let sq = LatticePolytope::unit_cube(2);
    let p = LatticePolytope::point(pt(&[5, 7]));
    assert_eq!(mixed_volume(&[sq, p]).unwrap(), big(0));
}

#[test]
fn mixed_volume_arity() {
    let sq = LatticePolytope::unit_cube(2);
    assert!(matches!(mixed_volume(&[sq.clone()]), Err(Error::Arity { .. })));
    assert!(matches!(mixed_volume(&[sq.clone(), sq.clone(), sq]), Err(Error::Arity { .. })));
}

#[test]
fn refinement_examples() {
    let tri = LatticePolytope::unit_simplex(2);
    let sq = LatticePolytope::unit_cube(2);
    assert!(refines(&sq, &sq).unwrap());
    assert!(refines(&tri, &tri).unwrap());
    let sum = tri.minkowski_sum(&sq).unwrap();
    assert!(refines(&sum, &tri).unwrap());
    assert!(refines(&sum, &sq).unwrap());
    // the triangle's cone at (1,0) is spanned by (-1,-1) and (0,1); it meets
    // the square's cones at (1,0) and (1,1) in their interiors
    assert!(!refines(&tri, &sq).unwrap());
    assert!(!refines(&sq, &tri).unwrap());
    assert!(matches!(refines(&poly(&[&[0, 0], &[1, 1]]), &sq), Err(Error::NotFullDimensional)));
    let c4 = LatticePolytope::unit_cube(4);
    assert!(matches!(refines(&c4, &c4), Err(Error::DimensionCap { .. })));
}

#[test]
fn support_data_examples() {
    let tri = LatticePolytope::unit_simplex(2);
    let (v, face) = tri.support_data(&pt(&[1, 1])).unwrap();
    assert_eq!(v, big(0));
    assert_eq!(face.vertices(), &[pt(&[0, 0])]);
    let (v, face) = tri.support_data(&pt(&[-1, 0])).unwrap();
    assert_eq!(v, big(-1));
    assert_eq!(face.vertices(), &[pt(&[1, 0])]);
    let (v, face) = tri.support_data(&pt(&[0, 1])).unwrap();
    assert_eq!(v, big(0));
    assert_eq!(face.vertices(), &[pt(&[0, 0]), pt(&[1, 0])]);
    assert!(matches!(tri.support_data(&pt(&[0, 0])), Err(Error::ZeroVector)));
}

#[test]
fn facets_are_tight_at_vertices() {
    let p = poly(&[&[0, 0, 0], &[2, 0, 0], &[0, 3, 0], &[0, 0, 1], &[1, 1, 1], &[2, 2, 0]]);
    for v in p.vertices() {
        let tight = p.facets().iter().filter(|f| v.dot(&f.normal) == f.offset).count();
        assert!(tight >= 3);
        assert!(p.facets().iter().all(|f| v.dot(&f.normal) >= f.offset));
    }
}

fn arb_points(n: usize, max: usize) -> impl Strategy<Value = Vec<LatticePoint>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, n), 1..=max)
        .prop_map(|v| v.iter().map(|c| LatticePoint::from_i64s(c)).collect())
}

fn arb_poly(n: usize) -> impl Strategy<Value = LatticePolytope> {
    arb_points(n, 6).prop_map(|p| LatticePolytope::convex_hull(&p).unwrap())
}

fn arb_dim_triple() -> impl Strategy<Value = (LatticePolytope, LatticePolytope, LatticePolytope)> {
    (1usize..=3).prop_flat_map(|n| (arb_poly(n), arb_poly(n), arb_poly(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_matches_2d_oracle(pts in prop::collection::vec((-6i64..=6, -6i64..=6), 1..12)) {
        let lp: Vec<LatticePoint> = pts.iter().map(|&(x, y)| pt(&[x, y])).collect();
        let p = LatticePolytope::convex_hull(&lp).unwrap();
        let (verts, twice) = oracle_hull_2d(&pts);
        prop_assert_eq!(p.euclidean_volume().normalized, big(twice));
        if twice > 0 {
            prop_assert_eq!(to_pairs(&p), verts);
        }
        for q in &lp {
            prop_assert!(p.contains(q));
        }
    }

    #[test]
    fn minkowski_semigroup_laws((p, q, r) in arb_dim_triple()) {
        let pq = p.minkowski_sum(&q).unwrap();
        prop_assert_eq!(&pq, &q.minkowski_sum(&p).unwrap());
        prop_assert_eq!(pq.minkowski_sum(&r).unwrap(), p.minkowski_sum(&q.minkowski_sum(&r).unwrap()).unwrap());
        let pr = p.minkowski_sum(&r).unwrap();
        let qr = q.minkowski_sum(&r).unwrap();
        prop_assert_eq!(pr == qr, p == q);
    }

    #[test]
    fn mixed_volume_symmetric_and_multilinear((p, q, r) in arb_dim_triple(), s in arb_points(3, 5)) {
        let n = p.dim();
        let extra: Vec<LatticePolytope> = (0..n.saturating_sub(2))
            .map(|_| LatticePolytope::convex_hull(&s.iter().map(|x| LatticePoint::new(x.coords()[..n].to_vec())).collect::<Vec<_>>()).unwrap())
            .collect();
        let args = |first: &LatticePolytope, second: &LatticePolytope| -> Vec<LatticePolytope> {
            let mut v = vec![first.clone()];
            if n >= 2 { v.push(second.clone()); }
            v.extend(extra.iter().cloned());
            v
        };
        let pq = p.minkowski_sum(&q).unwrap();
        let lhs = mixed_volume(&args(&pq, &r)).unwrap();
        let rhs = mixed_volume(&args(&p, &r)).unwrap() + mixed_volume(&args(&q, &r)).unwrap();
        prop_assert_eq!(lhs, rhs);
        if n >= 2 {
            let mut swapped = args(&p, &r);
            swapped.swap(0, 1);
            prop_assert_eq!(mixed_volume(&args(&p, &r)).unwrap(), mixed_volume(&swapped).unwrap());
        }
        let diag = vec![p.clone(); n];
        prop_assert_eq!(mixed_volume(&diag).unwrap(), p.euclidean_volume().normalized);
    }

    #[test]
    fn mixed_volume_monotone((p, q, r) in arb_dim_triple()) {
        let n = p.dim();
        let big_p = p.minkowski_sum(&q).unwrap();
        let small: Vec<LatticePolytope> = (0..n).map(|i| if i == 0 { p.clone() } else { r.clone() }).collect();
        let large: Vec<LatticePolytope> = (0..n).map(|i| if i == 0 { big_p.clone() } else { r.minkowski_sum(&q).unwrap() }).collect();
        let shift = q.vertices()[0].clone();
        prop_assert!(big_p.contains_polytope(&p.translate(&shift).unwrap()));
        // containment after translation; mixed volume is translation invariant
        prop_assert!(mixed_volume(&small).unwrap() <= mixed_volume(&large).unwrap());
    }

    #[test]
    fn volume_translation_and_dilation(p in (1usize..=3).prop_flat_map(arb_poly), k in 0u64..4, t in prop::collection::vec(-5i64..5, 3)) {
        let n = p.dim();
        let shift = LatticePoint::from_i64s(&t[..n]);
        let moved = p.translate(&shift).unwrap();
        prop_assert_eq!(moved.vertices().len(), p.vertices().len());
        prop_assert_eq!(moved.facets().iter().map(|f| f.normal.clone()).collect::<Vec<_>>(),
                        p.facets().iter().map(|f| f.normal.clone()).collect::<Vec<_>>());
        prop_assert_eq!(moved.euclidean_volume(), p.euclidean_volume());
        let scaled = p.dilate(k).euclidean_volume().normalized;
        prop_assert_eq!(scaled, p.euclidean_volume().normalized * BigInt::from(k).pow(n as u32));
    }

    #[test]
    fn sum_refines_summands(p in arb_poly(2), q in arb_poly(2)) {
        prop_assume!(p.is_full_dimensional() && q.is_full_dimensional());
        let s = p.minkowski_sum(&q).unwrap();
        prop_assert!(refines(&s, &p).unwrap());
        prop_assert!(refines(&s, &q).unwrap());
        prop_assert!(refines(&p, &p).unwrap());
    }

    #[test]
    fn sum_refines_summands_3d(p in arb_poly(3), q in arb_poly(3)) {
        prop_assume!(p.is_full_dimensional() && q.is_full_dimensional());
        let s = p.minkowski_sum(&q).unwrap();
        prop_assert!(refines(&s, &p).unwrap());
        prop_assert!(refines(&s, &q).unwrap());
    }

    #[test]
    fn lattice_points_match_membership(p in arb_poly(2)) {
        let pts = p.lattice_points();
        let (lo, hi) = p.bounding_box();
        for x in box_points(&lo, &hi) {
            prop_assert_eq!(pts.contains(&x), p.contains(&x));
        }
        for v in p.vertices() {
            prop_assert!(pts.contains(v));
        }
    }

    #[test]
    fn support_translation_covariance(p in arb_poly(2), t in (-5i64..5, -5i64..5), u in (-3i64..3, -3i64..3)) {
        let u = pt(&[u.0, u.1]);
        prop_assume!(!u.is_zero());
        let shift = pt(&[t.0, t.1]);
        let (v0, f0) = p.support_data(&u).unwrap();
        let (v1, f1) = p.translate(&shift).unwrap().support_data(&u).unwrap();
        prop_assert_eq!(v1, v0 + shift.dot(&u));
        prop_assert_eq!(f1, f0.translate(&shift).unwrap());
    }
}
