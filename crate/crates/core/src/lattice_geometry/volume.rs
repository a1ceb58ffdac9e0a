use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::{LatticePolytope, VolumeValue};
use crate::error::{Error, Result};

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * k)
}

pub(super) fn euclidean_volume(p: &LatticePolytope) -> VolumeValue {
    let normalized = if p.is_full_dimensional() {
        p.rel_det_sum().clone()
    } else {
        BigInt::zero()
    };
    VolumeValue {
        value: BigRational::new(normalized.clone(), factorial(p.dim())),
        normalized,
    }
}

/// Mixed volume of `n` polytopes in `R^n`, normalised so that
/// `MV(P, ..., P) = n! vol(P)`.
///
/// Inclusion-exclusion over the `2^n - 1` partial Minkowski sums:
/// `MV = sum_S (-1)^(n - |S|) vol(sum_{i in S} P_i)`.
pub fn mixed_volume(polys: &[LatticePolytope]) -> Result<BigInt> {
    let n = polys.first().map(|p| p.dim()).ok_or(Error::Arity { expected: 1, found: 0 })?;
    if polys.len() != n {
        return Err(Error::Arity {
            expected: n,
            found: polys.len(),
        });
    }
    if let Some(p) = polys.iter().find(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.dim(),
        });
    }

    // Partial sums are built level by level: each mask extends the mask
    // without its highest bit, which always belongs to the previous level.
    let full = 1usize << n;
    let mut sums: Vec<Option<LatticePolytope>> = vec![None; full];
    let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for mask in 1..full {
        by_level[mask.count_ones() as usize].push(mask);
    }
    for (i, p) in polys.iter().enumerate() {
        sums[1 << i] = Some(p.clone());
    }
    for level in by_level.iter().skip(2) {
        let built: Vec<(usize, LatticePolytope)> = level
            .par_iter()
            .map(|&mask| {
                let top = usize::BITS - 1 - mask.leading_zeros();
                let rest = mask & !(1 << top);
                let base = sums[rest].as_ref().expect("previous level");
                let s = base.minkowski_sum(&polys[top as usize]).expect("dimensions checked");
                (mask, s)
            })
            .collect();
        for (mask, s) in built {
            sums[mask] = Some(s);
        }
    }

    let mut total = BigRational::zero();
    for (mask, s) in sums.iter().enumerate().skip(1) {
        let vol = s.as_ref().expect("all masks built").euclidean_volume().value;
        if (n - mask.count_ones() as usize) % 2 == 0 {
            total += vol;
        } else {
            total -= vol;
        }
    }
    if !total.is_integer() || total.is_negative() {
        return Err(Error::InvariantBreach(format!(
            "mixed volume inclusion-exclusion produced {total}, expected a non-negative integer"
        )));
    }
    Ok(total.to_integer())
}
