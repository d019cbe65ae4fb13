use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use super::modulus::Modulus;
use super::render::{render_signed, render_unsigned};
use crate::error::{Error, Result};
use crate::ff::FpPoly;

/// Dense polynomial over Z/M with M = p^N; coefficients are least
/// nonnegative residues and trailing zeros are stripped.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZMPoly {
    modulus: Arc<Modulus>,
    coeffs: Vec<BigUint>,
}

#[inline]
fn mulm(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        (a * b) % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

fn to_small(v: &[BigUint]) -> Vec<u64> {
    v.iter()
        .map(|c| c.to_u64().expect("small residue"))
        .collect()
}

fn from_small(v: Vec<u64>) -> Vec<BigUint> {
    v.into_iter().map(BigUint::from).collect()
}

fn strip(mut v: Vec<BigUint>) -> Vec<BigUint> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

impl ZMPoly {
    /// Builds a polynomial, reducing every coefficient into [0, M).
    pub fn new(modulus: &Arc<Modulus>, coeffs: Vec<BigUint>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| modulus.reduce(&c)).collect();
        ZMPoly {
            modulus: Arc::clone(modulus),
            coeffs: strip(coeffs),
        }
    }

    /// Like [`ZMPoly::new`] but for coefficients already in [0, M).
    pub(crate) fn from_reduced(modulus: &Arc<Modulus>, coeffs: Vec<BigUint>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c < modulus.value()));
        ZMPoly {
            modulus: Arc::clone(modulus),
            coeffs: strip(coeffs),
        }
    }

    pub fn from_signed(modulus: &Arc<Modulus>, coeffs: &[BigInt]) -> Self {
        let coeffs = coeffs.iter().map(|c| modulus.reduce_signed(c)).collect();
        ZMPoly::from_reduced(modulus, coeffs)
    }

    pub fn from_i64s(modulus: &Arc<Modulus>, coeffs: &[i64]) -> Self {
        let coeffs = coeffs.iter().map(|&c| modulus.from_i64(c)).collect();
        ZMPoly::from_reduced(modulus, coeffs)
    }

    /// Reinterprets the digits of an F_p polynomial in Z/M.
    pub fn from_fp(modulus: &Arc<Modulus>, f: &FpPoly) -> Result<Self> {
        if f.prime() != modulus.prime() {
            return Err(Error::DifferentPrime(f.prime(), modulus.prime()));
        }
        Ok(ZMPoly::from_reduced(
            modulus,
            f.coeffs().iter().map(|&c| BigUint::from(c)).collect(),
        ))
    }

    pub fn zero(modulus: &Arc<Modulus>) -> Self {
        ZMPoly {
            modulus: Arc::clone(modulus),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(modulus: &Arc<Modulus>, c: BigUint) -> Self {
        ZMPoly::new(modulus, vec![c])
    }

    pub fn one(modulus: &Arc<Modulus>) -> Self {
        ZMPoly::constant(modulus, BigUint::one())
    }

    pub fn x(modulus: &Arc<Modulus>) -> Self {
        ZMPoly::from_i64s(modulus, &[0, 1])
    }

    pub fn modulus(&self) -> &Arc<Modulus> {
        &self.modulus
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigUint {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Coefficients padded with zeros to exactly `len` entries.
    pub fn padded(&self, len: usize) -> Vec<BigUint> {
        let mut v = self.coeffs.clone();
        v.resize(len.max(v.len()), BigUint::zero());
        v
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn lead(&self) -> Option<&BigUint> {
        self.coeffs.last()
    }

    fn check_same(&self, other: &ZMPoly) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.to_string(),
                right: other.modulus.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ZMPoly) -> Result<ZMPoly> {
        self.check_same(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let m = &self.modulus;
        let v = (0..n)
            .map(|i| m.add(&self.coeff(i), &other.coeff(i)))
            .collect();
        Ok(ZMPoly::from_reduced(m, v))
    }

    pub fn sub(&self, other: &ZMPoly) -> Result<ZMPoly> {
        self.check_same(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let m = &self.modulus;
        let v = (0..n)
            .map(|i| m.sub(&self.coeff(i), &other.coeff(i)))
            .collect();
        Ok(ZMPoly::from_reduced(m, v))
    }

    pub fn neg(&self) -> ZMPoly {
        let m = &self.modulus;
        ZMPoly::from_reduced(m, self.coeffs.iter().map(|c| m.neg(c)).collect())
    }

    pub fn scale(&self, c: &BigUint) -> ZMPoly {
        let m = &self.modulus;
        let c = m.reduce(c);
        ZMPoly::from_reduced(m, self.coeffs.iter().map(|a| m.mul(a, &c)).collect())
    }

    pub fn mul(&self, other: &ZMPoly) -> Result<ZMPoly> {
        self.check_same(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(ZMPoly::zero(&self.modulus));
        }
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(m) = self.modulus.small() {
            let (a, b) = (to_small(&self.coeffs), to_small(&other.coeffs));
            let out = if m <= u32::MAX as u64 {
                let mut acc = vec![0u128; len];
                for (i, &x) in a.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in b.iter().enumerate() {
                        acc[i + j] += (x * y) as u128;
                    }
                }
                acc.into_iter().map(|s| (s % m as u128) as u64).collect()
            } else {
                let mut acc = vec![0u64; len];
                for (i, &x) in a.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in b.iter().enumerate() {
                        let s = acc[i + j] + mulm(x, y, m);
                        acc[i + j] = if s >= m { s - m } else { s };
                    }
                }
                acc
            };
            return Ok(ZMPoly::from_reduced(&self.modulus, from_small(out)));
        }
        let mut acc = vec![BigUint::zero(); len];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                acc[i + j] += x * y;
            }
        }
        Ok(ZMPoly::new(&self.modulus, acc))
    }

    /// Division with remainder; the divisor's leading coefficient must be a
    /// unit mod M.
    pub fn divrem(&self, divisor: &ZMPoly) -> Result<(ZMPoly, ZMPoly)> {
        self.check_same(divisor)?;
        let lead = divisor.lead().ok_or(Error::ZeroPolynomial)?;
        let m = &self.modulus;
        let lead_inv = m
            .inv(lead)
            .ok_or_else(|| Error::NonUnitLeading(lead.to_string()))?;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((ZMPoly::zero(m), self.clone()));
        }
        let qlen = self.coeffs.len() - dd;
        if let Some(mm) = m.small() {
            let mut rem = to_small(&self.coeffs);
            let d = to_small(&divisor.coeffs);
            let li = lead_inv.to_u64().unwrap();
            let mut quot = vec![0u64; qlen];
            for i in (0..qlen).rev() {
                let c = mulm(rem[i + dd], li, mm);
                rem[i + dd] = 0;
                if c == 0 {
                    continue;
                }
                quot[i] = c;
                for (j, &dj) in d[..dd].iter().enumerate() {
                    if dj != 0 {
                        let t = mulm(c, dj, mm);
                        let r = rem[i + j];
                        rem[i + j] = if r >= t { r - t } else { r + mm - t };
                    }
                }
            }
            rem.truncate(dd);
            return Ok((
                ZMPoly::from_reduced(m, from_small(quot)),
                ZMPoly::from_reduced(m, from_small(rem)),
            ));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigUint::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = m.mul(&rem[i + dd], &lead_inv);
            rem[i + dd] = BigUint::zero();
            if c.is_zero() {
                continue;
            }
            for (j, dj) in divisor.coeffs[..dd].iter().enumerate() {
                if !dj.is_zero() {
                    rem[i + j] = m.sub(&rem[i + j], &m.mul(&c, dj));
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((ZMPoly::from_reduced(m, quot), ZMPoly::from_reduced(m, rem)))
    }

    pub fn rem(&self, divisor: &ZMPoly) -> Result<ZMPoly> {
        Ok(self.divrem(divisor)?.1)
    }

    pub fn monic(&self) -> Result<ZMPoly> {
        let lead = self.lead().ok_or(Error::ZeroPolynomial)?;
        let inv = self
            .modulus
            .inv(lead)
            .ok_or_else(|| Error::NonUnitLeading(lead.to_string()))?;
        Ok(self.scale(&inv))
    }

    pub fn eval(&self, x: &BigUint) -> BigUint {
        let m = &self.modulus;
        self.coeffs
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, c| m.add(&m.mul(&acc, x), c))
    }

    pub fn derivative(&self) -> ZMPoly {
        let m = &self.modulus;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| m.mul(c, &m.reduce(&BigUint::from(i))))
            .collect();
        ZMPoly::from_reduced(m, v)
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &ZMPoly) -> Result<ZMPoly> {
        self.check_same(inner)?;
        let mut acc = ZMPoly::zero(&self.modulus);
        for c in self.coeffs.iter().rev() {
            acc = acc
                .mul(inner)?
                .add(&ZMPoly::constant(&self.modulus, c.clone()))?;
        }
        Ok(acc)
    }

    /// self^e mod `modulus_poly`.
    pub fn pow_mod(&self, e: &BigUint, modulus_poly: &ZMPoly) -> Result<ZMPoly> {
        let mut base = self.rem(modulus_poly)?;
        let mut acc = ZMPoly::one(&self.modulus).rem(modulus_poly)?;
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = acc.mul(&base)?.rem(modulus_poly)?;
            }
            if i + 1 < e.bits() {
                base = base.mul(&base)?.rem(modulus_poly)?;
            }
        }
        Ok(acc)
    }

    /// Reduction to a lower precision p^e, e <= N.
    pub fn reduce_precision(&self, exponent: u32) -> Result<ZMPoly> {
        if exponent > self.modulus.exponent() {
            return Err(Error::input(format!(
                "cannot reduce from {} to a higher precision {}^{}",
                self.modulus,
                self.modulus.prime(),
                exponent
            )));
        }
        let target = self.modulus.with_exponent(exponent)?;
        Ok(ZMPoly::new(&target, self.coeffs.clone()))
    }

    /// Reinterprets each coefficient's least residue mod p in a new
    /// modulus of the same prime; degree and digits are preserved.
    pub fn lift_coeffs(&self, new_modulus: &Arc<Modulus>) -> Result<ZMPoly> {
        if new_modulus.prime() != self.modulus.prime() {
            return Err(Error::DifferentPrime(
                self.modulus.prime(),
                new_modulus.prime(),
            ));
        }
        let p = BigUint::from(self.modulus.prime());
        Ok(ZMPoly::from_reduced(
            new_modulus,
            self.coeffs.iter().map(|c| c % &p).collect(),
        ))
    }

    /// Same least nonnegative representatives read in another modulus of
    /// the same prime (reduced when the new modulus is smaller).
    pub fn reinterpret(&self, new_modulus: &Arc<Modulus>) -> Result<ZMPoly> {
        if new_modulus.prime() != self.modulus.prime() {
            return Err(Error::DifferentPrime(
                self.modulus.prime(),
                new_modulus.prime(),
            ));
        }
        Ok(ZMPoly::new(new_modulus, self.coeffs.clone()))
    }

    /// Reduction mod p.
    pub fn to_fp(&self) -> FpPoly {
        let p = self.modulus.prime();
        let pb = BigUint::from(p);
        FpPoly::new(
            p,
            self.coeffs
                .iter()
                .map(|c| (c % &pb).to_u64().unwrap())
                .collect(),
        )
    }

    pub fn render_balanced(&self) -> String {
        let v: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| self.modulus.balanced(c))
            .collect();
        render_signed(&v)
    }
}

impl fmt::Display for ZMPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_unsigned(&self.coeffs))
    }
}
