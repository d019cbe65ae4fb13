use num_bigint::BigUint;

use super::fppoly::FpPoly;
use crate::error::{Error, Result};

/// Irreducibility over F_p by the distinct-degree criterion: a polynomial of
/// degree d is irreducible iff gcd(x^(p^i) - x, f) = 1 for all i <= d/2.
///
/// Deliberately independent of [`super::factor_modp`] so the two can be
/// cross-checked.
pub fn is_irreducible_modp(f: &FpPoly) -> Result<bool> {
    let d = match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::ConstantPolynomial),
        Some(d) => d,
    };
    if d == 1 {
        return Ok(true);
    }
    let p = f.prime();
    let f = f.monic();
    if f.coeff(0) == 0 {
        return Ok(false);
    }
    let pb = BigUint::from(p);
    let x = FpPoly::x(p);
    let mut h = x.clone();
    for _ in 1..=d / 2 {
        h = h.pow_mod(&pb, &f);
        if !h.sub(&x).gcd(&f).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_cases() {
        assert!(is_irreducible_modp(&FpPoly::from_i64s(3, &[2, 2, 2, 1])).unwrap());
        assert!(!is_irreducible_modp(&FpPoly::from_i64s(5, &[-1, 0, 1])).unwrap());
        assert!(is_irreducible_modp(&FpPoly::from_i64s(2, &[1, 1, 0, 1])).unwrap());
        assert!(!is_irreducible_modp(&FpPoly::from_i64s(2, &[1, 0, 1, 0, 1])).unwrap());
        assert_eq!(
            is_irreducible_modp(&FpPoly::constant(5, 3)),
            Err(Error::ConstantPolynomial)
        );
    }

    #[test]
    fn brute_force_cubic_mod_two_has_no_root() {
        let f = FpPoly::from_i64s(2, &[1, 1, 0, 1]);
        assert!((0..2).all(|x| f.eval(x) != 0));
    }
}
