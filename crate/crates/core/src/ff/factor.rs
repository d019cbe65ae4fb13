//! Factorization over F_p: squarefree decomposition, distinct-degree
//! splitting and Cantor-Zassenhaus equal-degree splitting.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fppoly::FpPoly;
use crate::error::{Error, Result};

/// Seed of the pseudorandom stream used by equal-degree splitting unless the
/// caller overrides it. Recorded in every model's provenance.
pub const DEFAULT_SEED: u64 = 0x5eed_0f_6a10;

/// `unit * prod(factor^multiplicity)` with monic irreducible factors sorted
/// in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u64,
    pub factors: Vec<(FpPoly, usize)>,
}

impl Factorization {
    pub fn expand(&self, p: u64) -> FpPoly {
        self.factors
            .iter()
            .fold(FpPoly::constant(p, self.unit), |acc, (g, e)| {
                acc.mul(&g.pow(*e as u32))
            })
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

/// p-th root of a polynomial whose derivative vanishes.
fn pth_root(f: &FpPoly) -> FpPoly {
    let p = f.prime() as usize;
    FpPoly::new(f.prime(), f.coeffs().iter().step_by(p).copied().collect())
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, e)` with the
/// `g` squarefree, pairwise coprime and `f = prod g^e`.
pub fn squarefree_decomposition(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.prime();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = f.derivative();
    let mut c = f.gcd(&d);
    let mut w = f.divrem(&c).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.divrem(&y).0;
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.divrem(&w).0;
    }
    if !c.is_one() {
        let root = pth_root(&c);
        for (g, e) in squarefree_decomposition(&root) {
            out.push((g, e * p as usize));
        }
    }
    out
}

/// Splits a monic squarefree polynomial into `(product of all irreducible
/// factors of degree d, d)` pairs.
pub fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.prime();
    let pb = BigUint::from(p);
    let x = FpPoly::x(p);
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut i = 0;
    while rest.degree().unwrap_or(0) >= 2 * (i + 1) {
        i += 1;
        h = h.pow_mod(&pb, &rest);
        let g = h.sub(&x).gcd(&rest);
        if !g.is_one() {
            rest = rest.divrem(&g).0;
            h = h.rem(&rest);
            out.push((g, i));
        }
    }
    if let Some(deg) = rest.degree().filter(|&deg| deg > 0) {
        out.push((rest, deg));
    }
    out
}

fn random_poly(p: u64, deg: usize, rng: &mut ChaCha8Rng) -> FpPoly {
    FpPoly::new(p, (0..deg).map(|_| rng.gen_range(0..p)).collect())
}

/// Equal-degree splitting of a monic squarefree product of irreducibles of
/// degree `d`.
pub fn equal_degree(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let p = f.prime();
    let n = f.degree().expect("nonzero");
    if n == d {
        return vec![f.clone()];
    }
    let one = FpPoly::one(p);
    loop {
        let a = random_poly(p, n, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace map F_{2^d} -> F_2
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (num_traits::pow(BigUint::from(p), d) - BigUint::one()) >> 1u32;
            a.pow_mod(&e, f).sub(&one)
        };
        let g = b.gcd(f);
        if g.degree().is_some_and(|deg| deg > 0 && deg < n) {
            let h = f.divrem(&g).0;
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}

/// Full factorization over F_p with a deterministic splitting stream.
pub fn factor_modp_seeded(f: &FpPoly, seed: u64) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p = f.prime();
    let unit = f.lead();
    let monic = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (sqf, mult) in squarefree_decomposition(&monic) {
        for (block, d) in distinct_degree(&sqf) {
            for g in equal_degree(&block, d, &mut rng) {
                factors.push((g, mult));
            }
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    debug_assert_eq!(
        Factorization {
            unit,
            factors: factors.clone()
        }
        .expand(p),
        *f
    );
    Ok(Factorization { unit, factors })
}

pub fn factor_modp(f: &FpPoly) -> Result<Factorization> {
    factor_modp_seeded(f, DEFAULT_SEED)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_two_base_polynomial_mod_seven() {
        let f = FpPoly::from_i64s(7, &[1, 10, 5, -10, 0, 1]);
        let fac = factor_modp(&f).unwrap();
        let got: Vec<(String, usize)> = fac
            .factors
            .iter()
            .map(|(g, e)| (g.to_string(), *e))
            .collect();
        assert_eq!(
            got,
            vec![
                ("x+2".to_string(), 1),
                ("x+4".to_string(), 2),
                ("x+5".to_string(), 1),
                ("x+6".to_string(), 1)
            ]
        );
        assert!(!fac.is_squarefree());
    }

    #[test]
    fn cubic_splits_mod_seventeen() {
        let f = FpPoly::from_i64s(17, &[1, -3, 0, 1]);
        let fac = factor_modp(&f).unwrap();
        let got: Vec<String> = fac.factors.iter().map(|(g, _)| g.to_string()).collect();
        assert_eq!(got, vec!["x+3", "x+4", "x+10"]);
    }

    #[test]
    fn monomial_square_mod_two() {
        let f = FpPoly::from_i64s(2, &[0, 0, 1]);
        let fac = factor_modp(&f).unwrap();
        assert_eq!(fac.factors, vec![(FpPoly::x(2), 2)]);
    }

    #[test]
    fn pth_powers_are_recovered() {
        // (x^2+x+1)^2 * (x+1)^3 over F_2 and (x+1)^3 * x over F_3
        let a = FpPoly::from_i64s(2, &[1, 1, 1])
            .pow(2)
            .mul(&FpPoly::from_i64s(2, &[1, 1]).pow(3));
        let fac = factor_modp(&a).unwrap();
        assert_eq!(fac.expand(2), a);
        assert_eq!(fac.factors.len(), 2);
        let b = FpPoly::from_i64s(3, &[1, 1]).pow(3).mul(&FpPoly::x(3));
        let fac = factor_modp(&b).unwrap();
        assert_eq!(
            fac.factors,
            vec![(FpPoly::x(3), 1), (FpPoly::from_i64s(3, &[1, 1]), 3)]
        );
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(factor_modp(&FpPoly::zero(5)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn non_monic_unit_is_kept() {
        let f = FpPoly::from_i64s(5, &[3, 0, 3]);
        let fac = factor_modp(&f).unwrap();
        assert_eq!(fac.unit, 3);
        assert_eq!(fac.expand(5), f);
    }
}
