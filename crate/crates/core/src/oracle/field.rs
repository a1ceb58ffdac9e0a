//! Small finite fields `F_{p^K}` with log/antilog and Zech tables.
//!
//! An element is encoded as the integer `sum c_i p^i` where `c_0 + c_1 t +
//! ... + c_{K-1} t^{K-1}` is its residue modulo the defining polynomial.
//! Prime-field elements are therefore encoded by themselves.

use crate::error::{Error, Result};

pub const MAX_CHARACTERISTIC: u32 = 101;
pub const MAX_DEGREE: u32 = 6;
pub const MAX_ORDER: u64 = 100_000;

/// Marker for "the logarithm of zero" in the Zech table.
const NO_LOG: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    k: u32,
    /// Monic modulus, coefficients from degree 0 to degree `k`.
    modulus: Vec<u32>,
    q: u32,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn digits(mut x: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo the monic polynomial `m` over `F_p`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let p64 = p as u64;
    while r.len() > dm {
        let lead = r.pop().expect("nonempty") % p64;
        if lead != 0 {
            let base = r.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                r[base + i] = (r[base + i] + (p64 - lead) * c as u64) % p64;
            }
        }
    }
    r.iter().map(|&x| (x % p64) as u32).collect()
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    out.into_iter().map(|x| x as u32).collect()
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let k = m.len() as u32 - 1;
    for d in 1..=k / 2 {
        for tail in 0..p.pow(d) {
            let mut f = digits(tail, p, d);
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    /// Builds `F_{p^K}` from the lexicographically least monic irreducible
    /// polynomial of degree `K`, comparing coefficient lists from `t^{K-1}`
    /// down to `t^0`.
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p > MAX_CHARACTERISTIC {
            return Err(Error::FieldCap(format!("characteristic {p} > {MAX_CHARACTERISTIC}")));
        }
        if k == 0 || k > MAX_DEGREE {
            return Err(Error::FieldCap(format!("extension degree {k} outside 1..={MAX_DEGREE}")));
        }
        let order = (p as u64).pow(k);
        if order > MAX_ORDER {
            return Err(Error::FieldCap(format!("field order {order} > {MAX_ORDER}")));
        }
        let q = order as u32;
        let modulus = (0..q)
            .map(|tail| {
                let mut m = digits(tail, p, k);
                m.push(1);
                m
            })
            .find(|m| is_irreducible(m, p))
            .ok_or_else(|| Error::InvariantBreach(format!("no irreducible polynomial of degree {k} over F_{p}")))?;

        let mul = |a: u32, b: u32| -> u32 {
            let prod = poly_mul(&digits(a, p, k), &digits(b, p, k), p);
            encode(&poly_rem(&prod, &modulus, p), p)
        };
        let pow = |mut a: u32, mut e: u64| -> u32 {
            let mut acc = 1;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul(acc, a);
                }
                a = mul(a, a);
                e >>= 1;
            }
            acc
        };

        let group = (q - 1) as u64;
        let factors = prime_factors(group);
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&r| pow(g, group / r) != 1))
            .ok_or_else(|| Error::InvariantBreach(format!("F_{q} has no primitive element")))?;

        // Group order spot check by direct polynomial exponentiation.
        let step = (q / 17).max(1);
        for x in (1..q).step_by(step as usize) {
            if pow(x, group) != 1 {
                return Err(Error::InvariantBreach(format!("x^{group} != 1 for x = {x} in F_{q}")));
            }
        }

        let mut exp = Vec::with_capacity(group as usize);
        let mut log = vec![NO_LOG; q as usize];
        let mut x = 1u32;
        for i in 0..group as u32 {
            if log[x as usize] != NO_LOG {
                return Err(Error::InvariantBreach(format!("generator {generator} has order {i}")));
            }
            exp.push(x);
            log[x as usize] = i;
            x = mul(x, generator);
        }

        let mut field = FiniteField {
            p,
            k,
            modulus,
            q,
            generator,
            exp,
            log,
            zech: Vec::new(),
        };
        field.zech = (0..group as u32)
            .map(|i| {
                let s = field.add(1, field.exp[i as usize]);
                field.log[s as usize]
            })
            .collect();
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let mut out = 0;
        let mut place = 1;
        let mut a = a;
        for _ in 0..self.k {
            let d = (self.p - a % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q as u64 - 1);
        self.exp[e as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let l = (self.log[a as usize] as u128 * e as u128) % (self.q as u128 - 1);
        self.exp[l as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let qm1 = self.q - 1;
        Some(self.exp[((qm1 - self.log[a as usize]) % qm1) as usize])
    }

    /// Discrete log to the base [`generator`](Self::generator); `None` for 0.
    pub fn log(&self, a: u32) -> Option<u32> {
        match self.log[a as usize] {
            NO_LOG => None,
            l => Some(l),
        }
    }

    pub fn exp(&self, e: u64) -> u32 {
        self.exp[(e % (self.q as u64 - 1)) as usize]
    }

    /// `Z(i) = log(1 + g^i)`, or `None` when `1 + g^i = 0`.
    pub(crate) fn zech_table(&self) -> &[u32] {
        &self.zech
    }
}

pub(crate) const ZECH_ZERO: u32 = NO_LOG;
