use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::nt;
use crate::error::{Error, Result};

/// Residues below this bound take the `u64`/`u128` fast paths.
const SMALL_LIMIT: u64 = 1 << 63;

/// The ring Z/p^e with p prime.
#[derive(Clone)]
pub struct Modulus {
    prime: u64,
    exponent: u32,
    value: BigUint,
    small: Option<u64>,
}

impl PartialEq for Modulus {
    fn eq(&self, other: &Self) -> bool {
        self.prime == other.prime && self.exponent == other.exponent
    }
}
impl Eq for Modulus {}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.prime, self.exponent)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 1 {
            write!(f, "{}", self.prime)
        } else {
            write!(f, "{}^{}", self.prime, self.exponent)
        }
    }
}

impl Modulus {
    pub fn new(prime: u64, exponent: u32) -> Result<Arc<Modulus>> {
        if !nt::is_prime(prime) {
            return Err(Error::NotPrime(prime.to_string()));
        }
        if exponent == 0 {
            return Err(Error::input("modulus exponent must be at least 1"));
        }
        let value = nt::big_pow(prime, exponent);
        let small = value.to_u64().filter(|&v| v < SMALL_LIMIT);
        Ok(Arc::new(Modulus {
            prime,
            exponent,
            value,
            small,
        }))
    }

    /// Recognizes M = p^e for a 64-bit prime p.
    pub fn from_value(m: &BigUint) -> Result<Arc<Modulus>> {
        if m <= &BigUint::one() {
            return Err(Error::NotPrimePower(m.to_string()));
        }
        let bits = m.bits() as u32;
        for e in (1..=bits).rev() {
            let root = m.nth_root(e);
            if let Some(p) = root.to_u64() {
                if p >= 2 && nt::big_pow(p, e) == *m && nt::is_prime(p) {
                    return Modulus::new(p, e);
                }
            }
        }
        Err(Error::NotPrimePower(m.to_string()))
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn small(&self) -> Option<u64> {
        self.small
    }

    pub fn is_prime_field(&self) -> bool {
        self.exponent == 1
    }

    pub fn with_exponent(&self, exponent: u32) -> Result<Arc<Modulus>> {
        Modulus::new(self.prime, exponent)
    }

    pub fn reduce(&self, x: &BigUint) -> BigUint {
        x % &self.value
    }

    pub fn reduce_signed(&self, x: &BigInt) -> BigUint {
        let m = BigInt::from_biguint(Sign::Plus, self.value.clone());
        x.mod_floor(&m)
            .to_biguint()
            .expect("nonnegative after mod_floor")
    }

    pub fn from_i64(&self, x: i64) -> BigUint {
        self.reduce_signed(&BigInt::from(x))
    }

    pub fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.value {
            s - &self.value
        } else {
            s
        }
    }

    pub fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            &self.value - (b - a)
        }
    }

    pub fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.value - a
        }
    }

    pub fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if let Some(m) = self.small {
            let (a, b) = (a.to_u64().unwrap(), b.to_u64().unwrap());
            return BigUint::from(nt::mul_mod(a, b, m));
        }
        (a * b) % &self.value
    }

    pub fn pow(&self, a: &BigUint, e: &BigUint) -> BigUint {
        a.modpow(e, &self.value)
    }

    /// A residue is a unit iff it is not divisible by p.
    pub fn is_unit(&self, a: &BigUint) -> bool {
        !(a % self.prime).is_zero()
    }

    pub fn inv(&self, a: &BigUint) -> Option<BigUint> {
        if !self.is_unit(a) {
            return None;
        }
        if let Some(m) = self.small {
            return nt::inv_mod(a.to_u64().unwrap(), m).map(BigUint::from);
        }
        let a = BigInt::from_biguint(Sign::Plus, a.clone());
        let m = BigInt::from_biguint(Sign::Plus, self.value.clone());
        let e = a.extended_gcd(&m);
        Some(e.x.mod_floor(&m).to_biguint().unwrap())
    }

    /// Balanced representative in (-M/2, M/2].
    pub fn balanced(&self, a: &BigUint) -> BigInt {
        let half = &self.value >> 1u32;
        if a > &half {
            BigInt::from_biguint(Sign::Plus, a.clone())
                - BigInt::from_biguint(Sign::Plus, self.value.clone())
        } else {
            BigInt::from_biguint(Sign::Plus, a.clone())
        }
    }
}
