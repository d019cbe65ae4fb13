//! The ring (Z/p^n)[t]/(H) for a monic H that is irreducible mod p.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::arith::{Modulus, ZMPoly};
use crate::error::{Error, Result};
use crate::ff::FpPoly;

#[derive(Clone, Debug)]
pub struct AuxRing {
    modulus: Arc<Modulus>,
    h: ZMPoly,
    d: usize,
}

impl AuxRing {
    /// H's digits read mod p^n.
    pub fn new(modulus: &Arc<Modulus>, h: &FpPoly) -> Result<Self> {
        let h = ZMPoly::from_fp(modulus, h)?;
        Self::from_poly(h)
    }

    pub fn from_poly(h: ZMPoly) -> Result<Self> {
        if !h.is_monic() {
            return Err(Error::input(format!("{h} is not monic")));
        }
        let d = h.degree().unwrap_or(0);
        Ok(AuxRing {
            modulus: h.modulus().clone(),
            h,
            d,
        })
    }

    pub fn modulus(&self) -> &Arc<Modulus> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn defining_poly(&self) -> &ZMPoly {
        &self.h
    }

    pub fn zero(&self) -> ZMPoly {
        ZMPoly::zero(&self.modulus)
    }

    pub fn one(&self) -> ZMPoly {
        ZMPoly::one(&self.modulus).rem(&self.h).expect("monic")
    }

    pub fn scalar(&self, c: &BigUint) -> ZMPoly {
        ZMPoly::constant(&self.modulus, c.clone())
    }

    /// Element with the given digits read mod p^n.
    pub fn from_fp(&self, a: &FpPoly) -> Result<ZMPoly> {
        ZMPoly::from_fp(&self.modulus, a)?.rem(&self.h)
    }

    pub fn reduce(&self, a: &ZMPoly) -> Result<ZMPoly> {
        a.rem(&self.h)
    }

    pub fn add(&self, a: &ZMPoly, b: &ZMPoly) -> Result<ZMPoly> {
        a.add(b)
    }

    pub fn sub(&self, a: &ZMPoly, b: &ZMPoly) -> Result<ZMPoly> {
        a.sub(b)
    }

    pub fn mul(&self, a: &ZMPoly, b: &ZMPoly) -> Result<ZMPoly> {
        a.mul(b)?.rem(&self.h)
    }

    pub fn pow(&self, a: &ZMPoly, e: &BigUint) -> Result<ZMPoly> {
        a.pow_mod(e, &self.h)
    }

    /// Coordinates on 1, t, ..., t^(d-1).
    pub fn coords(&self, a: &ZMPoly) -> Vec<BigUint> {
        a.padded(self.d)
    }

    pub fn is_scalar(&self, a: &ZMPoly) -> bool {
        a.degree().unwrap_or(0) == 0
    }

    pub fn residue(&self, a: &ZMPoly) -> FpPoly {
        a.to_fp()
    }

    /// Inverse of a unit: inverse mod p by the extended gcd, then Newton
    /// steps v <- v (2 - a v).
    pub fn inv(&self, a: &ZMPoly) -> Result<ZMPoly> {
        let p = self.modulus.prime();
        let (g, u, _) = a.to_fp().xgcd(&self.h.to_fp());
        if !g.is_one() {
            return Err(Error::ZeroDivisor(p));
        }
        let mut v = self.from_fp(&u)?;
        let two = self.scalar(&BigUint::from(2u32));
        let mut prec = 1;
        while prec < self.modulus.exponent() {
            v = self.mul(&v, &two.sub(&self.mul(a, &v)?)?)?;
            prec *= 2;
        }
        if !self.mul(a, &v)?.sub(&self.one())?.is_zero() {
            return Err(Error::internal("Newton inverse did not converge"));
        }
        Ok(v)
    }

    /// The Teichmueller representative of the residue class of `a`: the
    /// fixed point of y -> y^(p^d) reached from any lift.
    pub fn teichmuller(&self, a: &ZMPoly) -> Result<ZMPoly> {
        let q = crate::arith::nt::big_pow(self.modulus.prime(), self.d as u32);
        let mut y = self.reduce(a)?;
        for _ in 0..=self.modulus.exponent() {
            let next = self.pow(&y, &q)?;
            if next == y {
                return Ok(y);
            }
            y = next;
        }
        Err(Error::internal("Teichmueller iteration did not stabilize"))
    }

    /// Evaluates a polynomial with coefficients in Z/p^n at `a`.
    pub fn eval(&self, f: &ZMPoly, a: &ZMPoly) -> Result<ZMPoly> {
        let mut acc = self.zero();
        for c in f.coeffs().iter().rev() {
            acc = self.mul(&acc, a)?.add(&self.scalar(c))?;
        }
        Ok(acc)
    }

    pub fn is_zero(&self, a: &ZMPoly) -> bool {
        a.is_zero() || a.coeffs().iter().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teichmuller_is_a_root_of_unity() {
        let m = Modulus::new(3, 4).unwrap();
        let ring = AuxRing::new(&m, &FpPoly::from_i64s(3, &[2, 2, 1])).unwrap();
        let t = ring.from_fp(&FpPoly::x(3)).unwrap();
        let w = ring.teichmuller(&t).unwrap();
        assert_eq!(w.to_fp(), t.to_fp());
        // order divides 3^2 - 1 = 8
        assert_eq!(ring.pow(&w, &BigUint::from(8u32)).unwrap(), ring.one());
    }

    #[test]
    fn inverse_of_one_plus_nilpotent() {
        let m = Modulus::new(5, 6).unwrap();
        let ring = AuxRing::new(&m, &FpPoly::from_i64s(5, &[2, 0, 1])).unwrap();
        let w = ZMPoly::from_i64s(&m, &[3, 7]);
        let u = ring.one().add(&w.scale(&BigUint::from(5u32))).unwrap();
        let v = ring.inv(&u).unwrap();
        assert_eq!(ring.mul(&u, &v).unwrap(), ring.one());
        // geometric series sum_{i<6} (-5w)^i
        let mut acc = ring.one();
        let mut term = ring.one();
        let step = w.scale(&BigUint::from(5u32)).neg();
        for _ in 1..6 {
            term = ring.mul(&term, &step).unwrap();
            acc = acc.add(&term).unwrap();
        }
        assert_eq!(acc, v);
        assert!(matches!(
            ring.inv(&ZMPoly::from_i64s(&m, &[5])),
            Err(Error::ZeroDivisor(5))
        ));
    }
}
