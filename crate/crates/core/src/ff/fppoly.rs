use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;

use crate::arith::nt;
use crate::arith::render::render_unsigned;

/// Dense polynomial over F_p with `u64` coefficients in [0, p).
///
/// Binary operations panic when the primes differ; callers convert from
/// [`crate::arith::ZMPoly`], which reports mismatches as errors.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

#[inline]
fn addp(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

#[inline]
fn mulp(a: u64, b: u64, p: u64) -> u64 {
    if p <= u32::MAX as u64 {
        (a * b) % p
    } else {
        nt::mul_mod(a, b, p)
    }
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn from_i64s(p: u64, coeffs: &[i64]) -> Self {
        FpPoly::new(
            p,
            coeffs
                .iter()
                .map(|&c| c.rem_euclid(p as i64) as u64)
                .collect(),
        )
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        FpPoly::new(p, vec![c])
    }

    pub fn one(p: u64) -> Self {
        FpPoly::constant(p, 1)
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn monomial(p: u64, c: u64, deg: usize) -> Self {
        let mut v = vec![0; deg + 1];
        v[deg] = c;
        FpPoly::new(p, v)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    fn same(&self, other: &FpPoly) {
        assert_eq!(self.p, other.p, "F_p polynomials over different primes");
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        self.same(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let p = self.p;
        FpPoly::new(
            p,
            (0..n)
                .map(|i| addp(self.coeff(i), other.coeff(i), p))
                .collect(),
        )
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        self.same(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let p = self.p;
        FpPoly::new(
            p,
            (0..n)
                .map(|i| {
                    let (a, b) = (self.coeff(i), other.coeff(i));
                    if a >= b {
                        a - b
                    } else {
                        p - (b - a)
                    }
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> FpPoly {
        FpPoly::zero(self.p).sub(self)
    }

    pub fn scale(&self, c: u64) -> FpPoly {
        let p = self.p;
        FpPoly::new(p, self.coeffs.iter().map(|&a| mulp(a, c % p, p)).collect())
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        self.same(other);
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        if p <= u32::MAX as u64 {
            let mut acc = vec![0u128; len];
            for (i, &a) in self.coeffs.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in other.coeffs.iter().enumerate() {
                    acc[i + j] += (a * b) as u128;
                }
            }
            return FpPoly::new(p, acc.into_iter().map(|s| (s % p as u128) as u64).collect());
        }
        let mut acc = vec![0u64; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = addp(acc[i + j], nt::mul_mod(a, b, p), p);
            }
        }
        FpPoly::new(p, acc)
    }

    /// Division with remainder; panics on a zero divisor.
    pub fn divrem(&self, divisor: &FpPoly) -> (FpPoly, FpPoly) {
        self.same(divisor);
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let p = self.p;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (FpPoly::zero(p), self.clone());
        }
        let inv = nt::inv_mod(divisor.lead(), p).expect("nonzero lead is invertible");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = mulp(rem[i + dd], inv, p);
            rem[i + dd] = 0;
            if c == 0 {
                continue;
            }
            quot[i] = c;
            for (j, &d) in divisor.coeffs[..dd].iter().enumerate() {
                if d != 0 {
                    let t = mulp(c, d, p);
                    let r = rem[i + j];
                    rem[i + j] = if r >= t { r - t } else { p - (t - r) };
                }
            }
        }
        rem.truncate(dd);
        (FpPoly::new(p, quot), FpPoly::new(p, rem))
    }

    pub fn rem(&self, divisor: &FpPoly) -> FpPoly {
        self.divrem(divisor).1
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(nt::inv_mod(self.lead(), self.p).unwrap())
    }

    /// Monic gcd (zero when both inputs vanish).
    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, u, v)` with `g` the monic gcd and `g = u*self + v*other`.
    pub fn xgcd(&self, other: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
        let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = nt::inv_mod(r0.lead(), p).unwrap();
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> FpPoly {
        let p = self.p;
        FpPoly::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mulp(c, i as u64 % p, p))
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| addp(mulp(acc, x % p, p), c, p))
    }

    /// self^e mod `m`.
    pub fn pow_mod(&self, e: &BigUint, m: &FpPoly) -> FpPoly {
        let mut base = self.rem(m);
        let mut acc = FpPoly::one(self.p).rem(m);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
            if i + 1 < bits {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn pow_mod_u64(&self, e: u64, m: &FpPoly) -> FpPoly {
        self.pow_mod(&BigUint::from(e), m)
    }

    pub fn pow(&self, e: u32) -> FpPoly {
        let mut acc = FpPoly::one(self.p);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `self(inner)` reduced mod `m`.
    pub fn compose_mod(&self, inner: &FpPoly, m: &FpPoly) -> FpPoly {
        let mut acc = FpPoly::zero(self.p);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&FpPoly::constant(self.p, c)).rem(m);
        }
        acc
    }

    /// Canonical order: by degree, then by the coefficient tuple read from
    /// the top coefficient down, so the constant term is least significant.
    pub fn canonical_cmp(&self, other: &FpPoly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_unsigned(&self.coeffs))
    }
}
