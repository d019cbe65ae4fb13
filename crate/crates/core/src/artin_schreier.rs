//! The r = p branch: the tower generated by f(x, y) = x^p - 1 - y (x + ... + x^(p-1)).

use crate::arith::{nt, Modulus, ZMPoly};
use crate::error::{Error, Result};
use crate::ff::{is_irreducible_modp, FpPoly};

/// One level of the tower over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerLevel {
    pub p: u64,
    pub k: u32,
    /// Minimal polynomial of the level-k generator, degree p^k.
    pub g: FpPoly,
    /// The level-(k-1) generator as a polynomial in the level-k one, reduced
    /// mod `g`. For k = 0 this is the constant 1.
    pub previous: FpPoly,
}

/// x^p - 1 and x + x^2 + ... + x^(p-1); the relation reads A(x) = y S(x).
fn relation_parts(p: u64) -> (FpPoly, FpPoly) {
    let mut a = vec![0u64; p as usize + 1];
    a[0] = p - 1;
    a[p as usize] = 1;
    let s: Vec<u64> = (0..p).map(|i| u64::from(i > 0)).collect();
    (FpPoly::new(p, a), FpPoly::new(p, s))
}

/// Levels 0..=k of the tower.
pub fn as_tower(p: u64, k: u32) -> Result<Vec<TowerLevel>> {
    if !nt::is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let (a, s) = relation_parts(p);
    let mut levels = vec![TowerLevel {
        p,
        k: 0,
        g: FpPoly::from_i64s(p, &[-1, 1]),
        previous: FpPoly::one(p),
    }];
    for level in 1..=k {
        let prev = &levels.last().unwrap().g;
        // S^d * g_{k-1}(A/S), the resultant in y up to sign
        let d = prev.degree().unwrap();
        let mut a_pows = vec![FpPoly::one(p)];
        let mut s_pows = vec![FpPoly::one(p)];
        for _ in 0..d {
            a_pows.push(a_pows.last().unwrap().mul(&a));
            s_pows.push(s_pows.last().unwrap().mul(&s));
        }
        let mut g = FpPoly::zero(p);
        for (i, &c) in prev.coeffs().iter().enumerate() {
            if c != 0 {
                g = g.add(&a_pows[i].mul(&s_pows[d - i]).scale(c));
            }
        }
        let want = (d as u64) * p;
        if g.degree() != Some(want as usize) || !g.is_monic() {
            return Err(Error::internal(format!(
                "tower level {level} has the wrong degree"
            )));
        }
        if !is_irreducible_modp(&g)? {
            return Err(Error::internal(format!("tower level {level} is reducible")));
        }
        let x = FpPoly::x(p);
        let num = a.compose_mod(&x, &g);
        let den = s.compose_mod(&x, &g);
        let (one, inv, _) = den.xgcd(&g);
        if !one.is_one() {
            return Err(Error::internal("tower denominator is not a unit"));
        }
        let previous = num.mul(&inv).rem(&g);
        levels.push(TowerLevel {
            p,
            k: level,
            g,
            previous,
        });
    }
    Ok(levels)
}

pub fn as_tower_minpoly(p: u64, k: u32) -> Result<TowerLevel> {
    Ok(as_tower(p, k)?.pop().unwrap())
}

/// Generators alpha_0..alpha_k of every level written in F_p[x]/(g_k),
/// with alpha_k = x.
pub fn embedded_generators(levels: &[TowerLevel]) -> Vec<FpPoly> {
    let top = levels.last().expect("nonempty tower");
    let p = top.p;
    let gk = &top.g;
    let mut out = vec![FpPoly::x(p).rem(gk)];
    for j in (1..levels.len()).rev() {
        // alpha_{j-1} is the image of levels[j].previous under x -> alpha_j
        let cur = out.last().unwrap();
        out.push(levels[j].previous.compose_mod(cur, gk));
    }
    out.reverse();
    out
}

/// Defining polynomial of GR(p^n, p^k): g_k with its digits read mod p^n.
pub fn galois_ring_p_tower(p: u64, n: u32, k: u32) -> Result<ZMPoly> {
    let m = Modulus::new(p, n)?;
    if k == 0 {
        return Ok(ZMPoly::from_i64s(&m, &[-1, 1]));
    }
    ZMPoly::from_fp(&m, &as_tower_minpoly(p, k)?.g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_three() {
        assert_eq!(
            as_tower_minpoly(3, 1).unwrap().g.to_string(),
            "x^3+2x^2+2x+2"
        );
        assert_eq!(
            as_tower_minpoly(3, 2).unwrap().g.to_string(),
            "x^9+2x^8+x^7+x^5+x^3+2x+2"
        );
        assert_eq!(
            as_tower_minpoly(3, 3).unwrap().g.to_string(),
            "x^27+2x^26+2x^24+x^23+2x^22+2x^21+2x^18+x^16+x^15+2x^14+2x^13+2x^12+x^10+2x^9+x^8+x^7+x^6+2x^5+x^3+x^2+2x+2"
        );
    }

    #[test]
    fn first_level_by_hand() {
        // x^3 - 1 - x - x^2 mod 3
        assert_eq!(
            as_tower_minpoly(3, 1).unwrap().g,
            FpPoly::from_i64s(3, &[-1, -1, -1, 1])
        );
        assert_eq!(as_tower_minpoly(2, 1).unwrap().g.to_string(), "x^2+x+1");
    }

    #[test]
    fn lifted_digits() {
        assert_eq!(
            galois_ring_p_tower(3, 2, 1).unwrap().to_string(),
            "x^3+2x^2+2x+2"
        );
        assert_eq!(
            galois_ring_p_tower(3, 2, 1).unwrap().modulus().to_string(),
            "3^2"
        );
        assert_eq!(galois_ring_p_tower(5, 3, 0).unwrap().to_string(), "x+124");
        let k3 = as_tower_minpoly(3, 3).unwrap().g.to_string();
        for n in 1..5 {
            assert_eq!(galois_ring_p_tower(3, n, 3).unwrap().to_string(), k3);
        }
    }

    #[test]
    fn tower_relations_hold() {
        for (p, k) in [(2u64, 4u32), (3, 3), (5, 2), (7, 1)] {
            let levels = as_tower(p, k).unwrap();
            let gens = embedded_generators(&levels);
            let top = &levels.last().unwrap().g;
            let (a, s) = relation_parts(p);
            for j in 0..=k as usize {
                assert_eq!(levels[j].g.degree().unwrap() as u64, p.pow(j as u32));
                assert!(
                    levels[j].g.compose_mod(&gens[j], top).is_zero(),
                    "p={p} j={j}"
                );
                if j > 0 {
                    // f(alpha_j, alpha_{j-1}) = 0
                    let lhs = a.compose_mod(&gens[j], top);
                    let rhs = gens[j - 1].mul(&s.compose_mod(&gens[j], top)).rem(top);
                    assert_eq!(lhs, rhs);
                }
            }
            assert!(gens[0].is_one());
        }
    }
}
