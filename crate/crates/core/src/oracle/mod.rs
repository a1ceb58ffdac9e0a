//! Brute-force root counting over finite fields.
//!
//! A sparse system with coefficients in `F_p` is evaluated at every point of
//! the torus `(F_{p^K}^*)^n`. Points are addressed by discrete logarithms, so
//! a monomial is a single index shift and sums go through Zech logarithms.
//! Nothing here shares code with the mixed-volume engine apart from the
//! final comparison.

mod field;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice_geometry::{mixed_volume, LatticePoint, LatticePolytope};
use crate::subspaces::MonomialSubspace;

pub use field::{is_prime, FiniteField, MAX_CHARACTERISTIC, MAX_DEGREE, MAX_ORDER};

/// Largest torus `(q - 1)^n` that will be enumerated.
pub const ENUMERATION_CAP: u128 = 100_000_000;

pub fn make_field(p: u32, k: u32) -> Result<FiniteField> {
    FiniteField::new(p, k)
}

/// `n` Laurent polynomials over `F_p`, one per support, all coefficients nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseSystem {
    dim: usize,
    p: u32,
    seed: u64,
    equations: Vec<Vec<(LatticePoint, u32)>>,
}

impl SparseSystem {
    /// Builds a system from explicit coefficients (residues mod `p`).
    pub fn from_terms(p: u32, equations: Vec<Vec<(LatticePoint, u32)>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let n = equations.len();
        if n == 0 {
            return Err(Error::Arity { expected: 1, found: 0 });
        }
        for eq in &equations {
            if eq.is_empty() {
                return Err(Error::Empty("equation with no terms"));
            }
            for (a, c) in eq {
                if a.dim() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: a.dim(),
                    });
                }
                if c % p == 0 {
                    return Err(Error::InvalidArgument("coefficients must be nonzero mod p".into()));
                }
            }
        }
        Ok(SparseSystem {
            dim: n,
            p,
            seed: 0,
            equations,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn equations(&self) -> &[Vec<(LatticePoint, u32)>] {
        &self.equations
    }

    fn dump(&self) -> String {
        let mut s = format!("system over F_{} (seed {}):", self.p, self.seed);
        for (i, eq) in self.equations.iter().enumerate() {
            let _ = write!(s, "\n  f{} =", i + 1);
            for (a, c) in eq {
                let _ = write!(s, " + {c}*x^{a}");
            }
        }
        s
    }
}

fn check_supports(supports: &[MonomialSubspace]) -> Result<usize> {
    let n = supports.len();
    if n == 0 {
        return Err(Error::Arity { expected: 1, found: 0 });
    }
    if let Some(s) = supports.iter().find(|s| s.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s.dim(),
        });
    }
    Ok(n)
}

/// Draws every coefficient uniformly from `F_p \ {0}` with a seeded ChaCha
/// stream, equation by equation, support in sorted order.
pub fn sample_system(supports: &[MonomialSubspace], p: u32, seed: u64) -> Result<SparseSystem> {
    let n = check_supports(supports)?;
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let equations = supports
        .iter()
        .map(|s| s.support().iter().map(|a| (a.clone(), rng.gen_range(1..p))).collect())
        .collect();
    Ok(SparseSystem {
        dim: n,
        p,
        seed,
        equations,
    })
}

/// One equation prepared for log-domain evaluation.
struct LogEquation {
    /// `log(c_j)` for each term.
    coef_logs: Vec<u32>,
    /// `exps[j][i]`: exponent of `x_i` in term `j`, reduced mod `q - 1`.
    exps: Vec<Vec<u32>>,
    /// The same exponents reduced mod `p`, as prime-field elements.
    exps_mod_p: Vec<Vec<u32>>,
}

struct Evaluator<'a> {
    field: &'a FiniteField,
    qm1: u32,
    zech: &'a [u32],
    eqs: Vec<LogEquation>,
    n: usize,
}

/// Zeros found in one enumeration, split by whether the Jacobian vanishes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TorusCount {
    pub zeros: u64,
    /// Zeros where the toric Jacobian `det(x_k df_i/dx_k)` is zero.
    pub singular: u64,
}

impl std::ops::Add for TorusCount {
    type Output = TorusCount;
    fn add(self, rhs: TorusCount) -> TorusCount {
        TorusCount {
            zeros: self.zeros + rhs.zeros,
            singular: self.singular + rhs.singular,
        }
    }
}

impl Evaluator<'_> {
    /// Whether the sum of the terms with the given logs is zero.
    #[inline]
    fn vanishes(&self, logs: &[u32]) -> bool {
        let mut acc = logs[0];
        let mut zero = false;
        for &t in &logs[1..] {
            if zero {
                acc = t;
                zero = false;
                continue;
            }
            let d = if t >= acc { t - acc } else { t + self.qm1 - acc };
            let z = self.zech[d as usize];
            if z == field::ZECH_ZERO {
                zero = true;
            } else {
                acc += z;
                if acc >= self.qm1 {
                    acc -= self.qm1;
                }
            }
        }
        zero
    }

    fn term_log(&self, eq: &LogEquation, j: usize, point: &[u32]) -> u32 {
        let mut l = eq.coef_logs[j] as u64;
        for (i, &e) in point.iter().enumerate() {
            l += eq.exps[j][i] as u64 * e as u64;
        }
        (l % self.qm1 as u64) as u32
    }

    /// Counts zeros with `x_0 = g^e0`, scanning the remaining coordinates.
    fn count_slice(&self, e0: u32) -> TorusCount {
        let n = self.n;
        let mut point = vec![0u32; n];
        point[0] = e0;
        let first = &self.eqs[0];
        let nt = first.coef_logs.len();
        let mut logs: Vec<u32> = (0..nt).map(|j| self.term_log(first, j, &point)).collect();
        let mut scratch: Vec<u32> = Vec::new();
        let mut count = TorusCount::default();
        loop {
            if self.vanishes(&logs) && self.rest_vanish(&point, &mut scratch) {
                count.zeros += 1;
                if self.jacobian_vanishes(&point) {
                    count.singular += 1;
                }
            }
            // odometer over coordinates 1..n, updating the first equation's logs
            let mut i = n;
            loop {
                i -= 1;
                if i == 0 {
                    return count;
                }
                point[i] += 1;
                for (j, l) in logs.iter_mut().enumerate() {
                    *l += first.exps[j][i];
                    if *l >= self.qm1 {
                        *l -= self.qm1;
                    }
                }
                if point[i] < self.qm1 {
                    break;
                }
                // wrapped: exps * (q - 1) == 0, so the logs are back where they started
                point[i] = 0;
            }
        }
    }

    fn rest_vanish(&self, point: &[u32], scratch: &mut Vec<u32>) -> bool {
        self.eqs[1..].iter().all(|eq| {
            scratch.clear();
            scratch.extend((0..eq.coef_logs.len()).map(|j| self.term_log(eq, j, point)));
            self.vanishes(scratch)
        })
    }

    /// `det(sum_j a_jk c_j x^{a_j})_{i,k}` at the point, by elimination.
    fn jacobian_vanishes(&self, point: &[u32]) -> bool {
        let f = self.field;
        let n = self.n;
        let mut m: Vec<Vec<u32>> = self
            .eqs
            .iter()
            .map(|eq| {
                let mut row = vec![0u32; n];
                for j in 0..eq.coef_logs.len() {
                    let value = f.exp(self.term_log(eq, j, point) as u64);
                    for (k, r) in row.iter_mut().enumerate() {
                        *r = f.add(*r, f.mul(eq.exps_mod_p[j][k], value));
                    }
                }
                row
            })
            .collect();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| m[r][c] != 0) else {
                return true;
            };
            m.swap(c, piv);
            let inv = f.inv(m[c][c]).expect("nonzero pivot");
            for r in c + 1..n {
                let factor = f.mul(m[r][c], inv);
                if factor == 0 {
                    continue;
                }
                for k in c..n {
                    let v = f.sub(m[r][k], f.mul(factor, m[c][k]));
                    m[r][k] = v;
                }
            }
        }
        false
    }
}

/// Enumerates `(F^*)^n` for the given field, which must have the system's
/// characteristic, and classifies every common zero as regular or singular.
pub fn count_in_field(system: &SparseSystem, field: &FiniteField) -> Result<TorusCount> {
    if field.characteristic() != system.p {
        return Err(Error::InvalidArgument(format!(
            "system over F_{} evaluated in a field of characteristic {}",
            system.p,
            field.characteristic()
        )));
    }
    let qm1 = field.order() - 1;
    let points = (qm1 as u128).pow(system.dim as u32);
    if points > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            points,
            cap: ENUMERATION_CAP,
        });
    }
    let reduce = |c: &BigInt, m: u32| -> u32 {
        let m = BigInt::from(m);
        let r = ((c % &m) + &m) % &m;
        r.to_u32().expect("reduced below the modulus")
    };
    let eqs = system
        .equations
        .iter()
        .map(|eq| LogEquation {
            coef_logs: eq.iter().map(|(_, c)| field.log(*c).expect("nonzero coefficient")).collect(),
            exps: eq.iter().map(|(a, _)| a.coords().iter().map(|c| reduce(c, qm1)).collect()).collect(),
            exps_mod_p: eq.iter().map(|(a, _)| a.coords().iter().map(|c| reduce(c, system.p)).collect()).collect(),
        })
        .collect();
    let ev = Evaluator {
        field,
        qm1,
        zech: field.zech_table(),
        eqs,
        n: system.dim,
    };
    Ok((0..qm1)
        .into_par_iter()
        .map(|e0| ev.count_slice(e0))
        .reduce(TorusCount::default, |a, b| a + b))
}

/// Number of common zeros in the torus over `F_{p^K}`.
pub fn count_torus_solutions(system: &SparseSystem, k: u32) -> Result<u64> {
    let field = make_field(system.p, k)?;
    Ok(count_in_field(system, &field)?.zeros)
}

/// Solution counts of seeded random systems with the given supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub supports: Vec<MonomialSubspace>,
    pub p: u32,
    pub k_max: u32,
    pub trials: u32,
    pub seed: u64,
    /// Maximum over regular trials of the count over `F_{p^K}`, keyed by `K`.
    pub per_extension: BTreeMap<u32, u64>,
    /// `per_trial[t][K - 1]`: torus zeros of trial `t` over `F_{p^K}`.
    pub per_trial: Vec<Vec<u64>>,
    /// Trials with a zero where the Jacobian vanishes. Such a system may have
    /// a positive-dimensional solution set, so its counts are not compared
    /// with the mixed volume and do not enter the maximum.
    pub degenerate_trials: Vec<u32>,
    pub generic_count: u64,
    pub mv_reference: BigInt,
}

impl CountReport {
    pub fn saturated(&self) -> bool {
        BigInt::from(self.generic_count) == self.mv_reference
    }
}

/// Seed of trial `t` in a run seeded with `seed`.
pub fn trial_seed(seed: u64, t: u32) -> u64 {
    seed.wrapping_add(t as u64)
}

/// Runs `trials` seeded systems, counting over `F_{p^K}` for `K = 1..=k_max`.
///
/// For a trial whose zeros are all nonsingular every zero is isolated, so its
/// count is bounded by the mixed volume of the support hulls; exceeding it is
/// an invariant breach carrying the offending system.
pub fn generic_count(supports: &[MonomialSubspace], p: u32, trials: u32, k_max: u32, seed: u64) -> Result<CountReport> {
    let n = check_supports(supports)?;
    if trials == 0 || k_max == 0 {
        return Err(Error::InvalidArgument("trials and k_max must be positive".into()));
    }
    let fields: Vec<FiniteField> = (1..=k_max).map(|k| make_field(p, k)).collect::<Result<_>>()?;
    for f in &fields {
        let points = ((f.order() - 1) as u128).pow(n as u32);
        if points > ENUMERATION_CAP {
            return Err(Error::EnumerationCap {
                points,
                cap: ENUMERATION_CAP,
            });
        }
    }
    let hulls: Vec<LatticePolytope> = supports.iter().map(|s| s.newton_polytope()).collect();
    let mv = mixed_volume(&hulls)?;

    let mut per_trial = Vec::with_capacity(trials as usize);
    let mut degenerate_trials = Vec::new();
    for t in 0..trials {
        let system = sample_system(supports, p, trial_seed(seed, t))?;
        let counts: Vec<TorusCount> = fields.iter().map(|f| count_in_field(&system, f)).collect::<Result<_>>()?;
        if counts.iter().any(|c| c.singular > 0) {
            degenerate_trials.push(t);
        } else if let Some((k, c)) = counts.iter().enumerate().find(|(_, c)| BigInt::from(c.zeros) > mv) {
            return Err(Error::InvariantBreach(format!(
                "{} nonsingular torus solutions over F_{} exceed the mixed volume {mv}\n{}",
                c.zeros,
                fields[k].order(),
                system.dump()
            )));
        }
        per_trial.push(counts.iter().map(|c| c.zeros).collect::<Vec<u64>>());
    }
    let per_extension: BTreeMap<u32, u64> = (1..=k_max)
        .map(|k| {
            let best = (0..trials)
                .filter(|t| !degenerate_trials.contains(t))
                .map(|t| per_trial[t as usize][k as usize - 1])
                .max()
                .unwrap_or(0);
            (k, best)
        })
        .collect();
    let generic_count = per_extension.values().copied().max().unwrap_or(0);
    Ok(CountReport {
        supports: supports.to_vec(),
        p,
        k_max,
        trials,
        seed,
        per_extension,
        per_trial,
        degenerate_trials,
        generic_count,
        mv_reference: mv,
    })
}

/// Three generic counts for `(A'A'', A_2..)`, `(A', A_2..)`, `(A'', A_2..)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiAdditivityReport {
    pub product: CountReport,
    pub first: CountReport,
    pub second: CountReport,
    /// `MV(P' + P'', ...) = MV(P', ...) + MV(P'', ...)`.
    pub mv_identity: bool,
    /// All three generic counts reached their mixed volumes.
    pub saturated: bool,
    /// The count identity, checked only when saturated.
    pub count_identity: Option<bool>,
}

pub fn verify_multiadditivity(
    first_a: &MonomialSubspace,
    first_b: &MonomialSubspace,
    rest: &[MonomialSubspace],
    p: u32,
    trials: u32,
    k_max: u32,
    seed: u64,
) -> Result<MultiAdditivityReport> {
    let with_first = |f: MonomialSubspace| -> Vec<MonomialSubspace> {
        let mut v = vec![f];
        v.extend(rest.iter().cloned());
        v
    };
    let product = first_a.product(first_b)?;
    let product = generic_count(&with_first(product), p, trials, k_max, seed)?;
    let first = generic_count(&with_first(first_a.clone()), p, trials, k_max, seed)?;
    let second = generic_count(&with_first(first_b.clone()), p, trials, k_max, seed)?;
    let mv_identity = product.mv_reference == &first.mv_reference + &second.mv_reference;
    let saturated = product.saturated() && first.saturated() && second.saturated();
    let count_identity = saturated.then(|| product.generic_count == first.generic_count + second.generic_count);
    Ok(MultiAdditivityReport {
        product,
        first,
        second,
        mv_identity,
        saturated,
        count_identity,
    })
}
