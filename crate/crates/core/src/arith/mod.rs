//! Exact integer and polynomial arithmetic over Z and Z/p^N.

pub mod linalg;
mod modulus;
pub mod nt;
pub mod render;
mod zmpoly;
mod zpoly;

pub use modulus::Modulus;
pub use zmpoly::ZMPoly;
pub use zpoly::ZPoly;

use crate::error::{Error, Result};

/// Extended gcd over F_p: returns `(g, u, v)` with `g` monic (or zero) and
/// `g = u*a + v*b`.
pub fn poly_xgcd_modp(a: &ZMPoly, b: &ZMPoly) -> Result<(ZMPoly, ZMPoly, ZMPoly)> {
    let m = a.modulus();
    if m != b.modulus() {
        return Err(Error::ModulusMismatch {
            left: m.to_string(),
            right: b.modulus().to_string(),
        });
    }
    if !m.is_prime_field() {
        return Err(Error::CompositeModulus(m.value().to_string()));
    }
    let (g, u, v) = a.to_fp().xgcd(&b.to_fp());
    Ok((
        ZMPoly::from_fp(m, &g)?,
        ZMPoly::from_fp(m, &u)?,
        ZMPoly::from_fp(m, &v)?,
    ))
}
