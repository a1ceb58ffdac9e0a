//! The intersection ring of `P^{N_0} x ... x P^{N_k}`:
//! `Z[h_0, ..., h_k] / (h_i^{N_i + 1})`, with `h_i` the pulled-back
//! hyperplane class of the `i`-th factor, and the Segre pull-back
//! `P^a x P^b -> P^{ab + a + b}`, which sends `h` to `h_i + h_j`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Signature `(N_0, ..., N_k)` of a product of projective spaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiProjRing {
    dims: Vec<u32>,
}

/// A truncated integer polynomial in the hyperplane classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowElement {
    dims: Vec<u32>,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MultiProjRing {
    pub fn new(dims: Vec<u32>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Empty("ring signature"));
        }
        Ok(MultiProjRing { dims })
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    /// `sum N_i`, the degree of the top monomial.
    pub fn dimension(&self) -> u32 {
        self.dims.iter().sum()
    }

    pub fn zero(&self) -> ChowElement {
        ChowElement {
            dims: self.dims.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(&self, c: BigInt) -> ChowElement {
        self.monomial(vec![0; self.dims.len()], c).expect("constant monomial")
    }

    pub fn one(&self) -> ChowElement {
        self.constant(BigInt::one())
    }

    /// `c * prod h_i^{e_i}`, zero if some `e_i > N_i`.
    pub fn monomial(&self, exps: Vec<u32>, c: BigInt) -> Result<ChowElement> {
        if exps.len() != self.dims.len() {
            return Err(Error::SignatureMismatch);
        }
        let mut out = self.zero();
        if !c.is_zero() && exps.iter().zip(&self.dims).all(|(e, n)| e <= n) {
            out.terms.insert(exps, c);
        }
        Ok(out)
    }

    pub fn hyperplane(&self, i: usize) -> Result<ChowElement> {
        if i >= self.dims.len() {
            return Err(Error::InvalidArgument(format!("factor {i} out of range")));
        }
        let mut e = vec![0; self.dims.len()];
        e[i] = 1;
        self.monomial(e, BigInt::one())
    }

    /// Every nonzero monomial `prod h_i^{e_i}` with `e_i <= N_i`, in
    /// lexicographic order of exponents.
    pub fn monomials(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for &n in &self.dims {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u32>| {
                    (0..=n).map(move |e| {
                        let mut p = prefix.clone();
                        p.push(e);
                        p
                    })
                })
                .collect();
        }
        out
    }
}

impl ChowElement {
    pub fn ring(&self) -> MultiProjRing {
        MultiProjRing { dims: self.dims.clone() }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &ChowElement) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::SignatureMismatch);
        }
        Ok(())
    }

    fn accumulate(&mut self, exps: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &ChowElement) -> Result<ChowElement> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> ChowElement {
        ChowElement {
            dims: self.dims.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &ChowElement) -> Result<ChowElement> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> ChowElement {
        let mut out = self.ring().zero();
        for (e, c) in &self.terms {
            out.accumulate(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &ChowElement) -> Result<ChowElement> {
        self.check(other)?;
        let mut out = self.ring().zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                if e.iter().zip(&self.dims).all(|(x, n)| x <= n) {
                    out.accumulate(e, c1 * c2);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> ChowElement {
        (0..k).fold(self.ring().one(), |acc, _| acc.mul(self).expect("same ring"))
    }

    /// Coefficient of `h_0^{N_0} ... h_k^{N_k}`.
    pub fn top_degree(&self) -> BigInt {
        self.terms.get(&self.dims).cloned().unwrap_or_default()
    }
}

impl fmt::Display for ChowElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { format!("h{i}") } else { format!("h{i}^{x}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{c}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Pulls back along the Segre embedding in factor `merged`, whose dimension
/// must be `ab + a + b`. The result lives in the ring where that factor is
/// replaced by `P^a x P^b`, placed at `merged` and `merged + 1`.
pub fn segre_pullback(x: &ChowElement, merged: usize, split: (u32, u32)) -> Result<ChowElement> {
    let (a, b) = split;
    if merged >= x.dims.len() || x.dims[merged] != a * b + a + b {
        return Err(Error::SignatureMismatch);
    }
    let mut dims = x.dims.clone();
    dims.splice(merged..=merged, [a, b]);
    let target = MultiProjRing { dims };
    let mut out = target.zero();
    for (e, c) in &x.terms {
        // h^k -> (h_i + h_j)^k = sum_s C(k, s) h_i^s h_j^{k-s}
        let k = e[merged];
        for s in 0..=k {
            if s > a || k - s > b {
                continue;
            }
            let mut exps = e.clone();
            exps.splice(merged..=merged, [s, k - s]);
            out.accumulate(exps, c * binomial(k, s));
        }
    }
    Ok(out)
}

/// Tally of the exhaustive Segre splitting check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SplittingReport {
    pub max_total: u32,
    pub signatures: u64,
    pub identities: u64,
    pub failures: Vec<String>,
}

impl SplittingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.identities > 0
    }
}

/// All signatures `(N_0, ..., N_k)` with every `N_i >= 1` and `sum N_i <= max_total`.
pub fn signatures(max_total: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u32>> = vec![vec![]];
    while let Some(prefix) = stack.pop() {
        let used: u32 = prefix.iter().sum();
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        for n in 1..=max_total.saturating_sub(used) {
            let mut p = prefix.clone();
            p.push(n);
            stack.push(p);
        }
    }
    out.sort();
    out
}

/// For every split signature `(.., a, b, ..)` with total at most
/// `max_total`, checks against the merged ring `(.., ab + a + b, ..)`:
///
/// - `segre(h^k m) = (h_i + h_j)^k m` for every monomial `m` in the
///   untouched classes and every `k`, including the truncated powers;
/// - multiplicativity on pairs of such monomials;
/// - `<Y segre(h H)> = <Y h_i H> + <Y h_j H>` for every monomial `Y` of
///   the split ring and every monomial `H` in the untouched classes.
pub fn verify_splitting(max_total: u32) -> SplittingReport {
    let mut report = SplittingReport {
        max_total,
        ..Default::default()
    };
    for sig in signatures(max_total) {
        if sig.len() < 2 {
            continue;
        }
        for pos in 0..sig.len() - 1 {
            let (a, b) = (sig[pos], sig[pos + 1]);
            report.signatures += 1;
            let split = MultiProjRing { dims: sig.clone() };
            let mut mdims = sig.clone();
            mdims.splice(pos..=pos + 1, [a * b + a + b]);
            let merged = MultiProjRing { dims: mdims.clone() };
            let hi = split.hyperplane(pos).expect("in range");
            let hj = split.hyperplane(pos + 1).expect("in range");
            let hsum = hi.add(&hj).expect("same ring");

            // (h_i + h_j)^{a+b+1} already vanishes and a + b + 1 <= ab + a + b
            let kmax = a + b + 1;
            let mut merged_monos: Vec<(Vec<u32>, u32)> = Vec::new();
            for m in merged.monomials() {
                if m[pos] == 0 {
                    for k in 0..=kmax {
                        merged_monos.push((m.clone(), k));
                    }
                }
            }
            let lift = |m: &Vec<u32>, k: u32| -> ChowElement {
                let mut e = m.clone();
                e[pos] = k;
                merged.monomial(e, BigInt::one()).expect("signature")
            };
            let untouched = |m: &Vec<u32>| -> ChowElement {
                let mut e = m.clone();
                e.splice(pos..=pos, [0, 0]);
                split.monomial(e, BigInt::one()).expect("signature")
            };
            for (m, k) in &merged_monos {
                let lhs = segre_pullback(&lift(m, *k), pos, (a, b)).expect("signature");
                let rhs = hsum.pow(*k).mul(&untouched(m)).expect("same ring");
                report.identities += 1;
                if lhs != rhs {
                    report.failures.push(format!("{sig:?} at {pos}: segre(h^{k} {m:?}) = {lhs}, expected {rhs}"));
                }
            }
            // multiplicativity on a sparse grid of pairs
            for (x, kx) in merged_monos.iter().step_by(3) {
                for (y, ky) in merged_monos.iter().step_by(5) {
                    let xy = lift(x, *kx).mul(&lift(y, *ky)).expect("same ring");
                    let lhs = segre_pullback(&xy, pos, (a, b)).expect("signature");
                    let rhs = segre_pullback(&lift(x, *kx), pos, (a, b))
                        .and_then(|p| p.mul(&segre_pullback(&lift(y, *ky), pos, (a, b))?))
                        .expect("signature");
                    report.identities += 1;
                    if lhs != rhs {
                        report.failures.push(format!("{sig:?} at {pos}: segre not multiplicative on {x:?}, {y:?}"));
                    }
                }
            }
            // top-degree splitting
            let h_monos: Vec<&Vec<u32>> = merged_monos.iter().filter(|(_, k)| *k == 0).map(|(m, _)| m).collect();
            for ymono in split.monomials() {
                let y = split.monomial(ymono.clone(), BigInt::one()).expect("signature");
                for h in &h_monos {
                    let big_h = untouched(h);
                    let lhs = y
                        .mul(&segre_pullback(&lift(h, 1), pos, (a, b)).expect("signature"))
                        .expect("same ring")
                        .top_degree();
                    let ri = y.mul(&hi).and_then(|z| z.mul(&big_h)).expect("same ring").top_degree();
                    let rj = y.mul(&hj).and_then(|z| z.mul(&big_h)).expect("same ring").top_degree();
                    report.identities += 1;
                    if lhs != &ri + &rj {
                        report.failures.push(format!("{sig:?} at {pos}: top degree {lhs} != {ri} + {rj} for Y = {ymono:?}"));
                    }
                }
            }
        }
    }
    report
}
