//! Exact integer linear algebra on small dense matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Row-echelon reduction without division; returns the pivot columns in
/// increasing order. The number of pivots is the rank.
pub fn pivot_columns(rows: &[Vec<BigInt>], ncols: usize) -> Vec<usize> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            let g = a[r][c].clone();
            for j in c..ncols {
                let v = &a[i][j] * &g - &a[r][j] * &f;
                a[i][j] = v;
            }
            normalize_row(&mut a[i]);
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<BigInt>], ncols: usize) -> usize {
    pivot_columns(rows, ncols).len()
}

fn normalize_row(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Coefficients `c` with `c . x = det[d_1; ...; d_{r-1}; x]` for the given
/// `r - 1` difference rows in dimension `r`.
pub fn cofactor_normal(diffs: &[Vec<BigInt>], r: usize) -> Vec<BigInt> {
    debug_assert_eq!(diffs.len() + 1, r);
    (0..r)
        .map(|i| {
            let mut m: Vec<Vec<BigInt>> = diffs.to_vec();
            let mut e = vec![BigInt::zero(); r];
            e[i] = BigInt::one();
            m.push(e);
            det(&m)
        })
        .collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Divides a vector by the gcd of its entries. Returns the gcd as well.
pub fn primitive(v: &[BigInt]) -> (Vec<BigInt>, BigInt) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return (v.to_vec(), g);
    }
    (v.iter().map(|x| x / &g).collect(), g)
}

/// Index of the subgroup of `Z^n` generated by `gens`, or `None` when the
/// generators do not have full rank.
///
/// Computed by integer row reduction to Hermite form: the index is the
/// product of the absolute pivot entries.
pub fn lattice_index(gens: &[Vec<BigInt>], n: usize) -> Option<BigInt> {
    let mut a: Vec<Vec<BigInt>> = gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut index = BigInt::one();
    let mut r = 0;
    for c in 0..n {
        // Euclid on column c among rows r.. until a single nonzero entry remains.
        loop {
            let nonzero: Vec<usize> = (r..a.len()).filter(|&i| !a[i][c].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let &p = nonzero
                .iter()
                .min_by(|&&i, &&j| a[i][c].abs().cmp(&a[j][c].abs()))
                .expect("nonempty");
            for &i in &nonzero {
                if i == p {
                    continue;
                }
                let q = a[i][c].div_floor(&a[p][c]);
                for j in c..n {
                    let v = &a[i][j] - &q * &a[p][j];
                    a[i][j] = v;
                }
            }
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            return None;
        };
        a.swap(r, p);
        index *= a[r][c].abs();
        r += 1;
    }
    Some(index)
}
