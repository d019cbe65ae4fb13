//! Quadratic Hensel lifting of simple roots and coprime factorizations from
//! F_p[x] to (Z/p^N)[x].

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{Modulus, ZMPoly, ZPoly};
use crate::error::{Error, Result};
use crate::ff::{factor_modp, FpPoly};

/// Bezout cofactors `s*g + t*h = 1` at one precision of a two-factor lift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CofactorStep {
    pub precision: u32,
    pub s: Vec<String>,
    pub t: Vec<String>,
}

/// One split of the lifting tree: factors `[lo, mid)` against `[mid, hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRecord {
    pub lo: usize,
    pub mid: usize,
    pub hi: usize,
    pub steps: Vec<CofactorStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftCertificate {
    pub p: u64,
    pub source_precision: u32,
    pub target_precision: u32,
    /// Input factors mod p, coefficients lowest degree first.
    pub source: Vec<Vec<u64>>,
    /// Lifted factors mod p^N as decimal strings.
    pub lifted: Vec<Vec<String>>,
    pub splits: Vec<SplitRecord>,
}

fn digits(f: &ZMPoly) -> Vec<String> {
    f.coeffs().iter().map(ToString::to_string).collect()
}

impl LiftCertificate {
    /// Re-checks the product congruence and the reductions mod p.
    pub fn verify(&self, f: &ZMPoly) -> Result<bool> {
        let m = f.modulus();
        if m.prime() != self.p || m.exponent() != self.target_precision {
            return Ok(false);
        }
        let parse = |v: &Vec<String>| -> Result<ZMPoly> {
            let coeffs = v
                .iter()
                .map(|c| {
                    c.parse::<BigUint>()
                        .map_err(|_| Error::input(format!("bad coefficient {c}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ZMPoly::new(m, coeffs))
        };
        let mut prod = ZMPoly::one(m);
        for (src, lifted) in self.source.iter().zip(&self.lifted) {
            let g = parse(lifted)?;
            if g.to_fp() != FpPoly::new(self.p, src.clone()) {
                return Ok(false);
            }
            prod = prod.mul(&g)?;
        }
        Ok(self.source.len() == self.lifted.len() && prod == *f)
    }
}

/// Factor pair (g, h) with Bezout cofactors (s, t).
struct Pair {
    g: ZMPoly,
    h: ZMPoly,
    s: ZMPoly,
    t: ZMPoly,
}

fn lift_pair(
    f: &ZMPoly,
    g: &FpPoly,
    h: &FpPoly,
    steps: &mut Vec<CofactorStep>,
) -> Result<(ZMPoly, ZMPoly)> {
    let target = f.modulus().clone();
    let p = target.prime();
    let (one, s0, t0) = g.xgcd(h);
    if !one.is_one() {
        return Err(Error::NotCoprime {
            p,
            detail: format!("gcd({g}, {h}) = {one}"),
        });
    }
    let mp = Modulus::new(p, 1)?;
    let mut pair = Pair {
        g: ZMPoly::from_fp(&mp, g)?,
        h: ZMPoly::from_fp(&mp, h)?,
        s: ZMPoly::from_fp(&mp, &s0)?,
        t: ZMPoly::from_fp(&mp, &t0)?,
    };
    steps.push(CofactorStep {
        precision: 1,
        s: digits(&pair.s),
        t: digits(&pair.t),
    });
    let mut e = 1;
    while e < target.exponent() {
        e = (2 * e).min(target.exponent());
        let m = target.with_exponent(e)?;
        pair = hensel_step(&f.reduce_precision(e)?, &pair, &m)?;
        steps.push(CofactorStep {
            precision: e,
            s: digits(&pair.s),
            t: digits(&pair.t),
        });
    }
    Ok((pair.g, pair.h))
}

/// Quadratic Hensel step (von zur Gathen and Gerhard, Algorithm 15.10):
/// carries the factorization and the Bezout relation to the modulus `m`,
/// which is at most the square of the current one.
fn hensel_step(f: &ZMPoly, pr: &Pair, m: &Arc<Modulus>) -> Result<Pair> {
    let g = pr.g.reinterpret(m)?;
    let h = pr.h.reinterpret(m)?;
    let s = pr.s.reinterpret(m)?;
    let t = pr.t.reinterpret(m)?;
    let one = ZMPoly::one(m);
    let e = f.sub(&g.mul(&h)?)?;
    let (q, r) = s.mul(&e)?.divrem(&h)?;
    let g1 = g.add(&t.mul(&e)?)?.add(&q.mul(&g)?)?;
    let h1 = h.add(&r)?;
    let b = s.mul(&g1)?.add(&t.mul(&h1)?)?.sub(&one)?;
    let (c, d) = s.mul(&b)?.divrem(&h1)?;
    let s1 = s.sub(&d)?;
    let t1 = t.sub(&t.mul(&b)?)?.sub(&c.mul(&g1)?)?;
    if g1.mul(&h1)? != *f {
        return Err(Error::internal("Hensel step lost the factorization"));
    }
    Ok(Pair {
        g: g1,
        h: h1,
        s: s1,
        t: t1,
    })
}

/// Lifts pairwise coprime monic factors of `f mod p` to monic factors of `f`
/// over the modulus of `f`.
pub fn hensel_lift_factors(
    f: &ZMPoly,
    factors: &[FpPoly],
) -> Result<(Vec<ZMPoly>, LiftCertificate)> {
    let m = f.modulus();
    let p = m.prime();
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let fbar = f.to_fp();
    if !f.is_monic() {
        return Err(Error::input(format!("{f} is not monic")));
    }
    if factors.is_empty() {
        return Err(Error::input("no factors given"));
    }
    for g in factors {
        if g.prime() != p {
            return Err(Error::DifferentPrime(g.prime(), p));
        }
        if !g.is_monic() {
            return Err(Error::input(format!("factor {g} is not monic")));
        }
    }
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            let g = factors[i].gcd(&factors[j]);
            if !g.is_one() {
                return Err(Error::NotCoprime {
                    p,
                    detail: format!(
                        "factors {} and {} share {g}; a repeated factor cannot be lifted",
                        factors[i], factors[j]
                    ),
                });
            }
        }
    }
    let prod = factors.iter().fold(FpPoly::one(p), |a, g| a.mul(g));
    if prod != fbar {
        return Err(Error::ProductMismatch(p));
    }
    let mut lifted = vec![ZMPoly::zero(m); factors.len()];
    let mut splits = Vec::new();
    lift_range(f, factors, 0, factors.len(), &mut lifted, &mut splits)?;
    let cert = LiftCertificate {
        p,
        source_precision: 1,
        target_precision: m.exponent(),
        source: factors.iter().map(|g| g.coeffs().to_vec()).collect(),
        lifted: lifted.iter().map(digits).collect(),
        splits,
    };
    Ok((lifted, cert))
}

fn lift_range(
    f: &ZMPoly,
    factors: &[FpPoly],
    lo: usize,
    hi: usize,
    out: &mut [ZMPoly],
    splits: &mut Vec<SplitRecord>,
) -> Result<()> {
    if hi - lo == 1 {
        out[lo] = f.clone();
        return Ok(());
    }
    let mid = (lo + hi) / 2;
    let p = f.modulus().prime();
    let prod = |a: usize, b: usize| factors[a..b].iter().fold(FpPoly::one(p), |x, g| x.mul(g));
    let mut steps = Vec::new();
    let (g, h) = lift_pair(f, &prod(lo, mid), &prod(mid, hi), &mut steps)?;
    splits.push(SplitRecord { lo, mid, hi, steps });
    lift_range(&g, factors, lo, mid, out, splits)?;
    lift_range(&h, factors, mid, hi, out, splits)
}

/// Newton lifting of a simple root `a0` of `f mod p` to the modulus of `f`.
pub fn hensel_lift_root(f: &ZMPoly, a0: u64) -> Result<BigUint> {
    let m = f.modulus();
    let p = m.prime();
    let a0 = BigUint::from(a0 % p);
    let pb = BigUint::from(p);
    if !(f.eval(&a0) % &pb).is_zero() {
        return Err(Error::input(format!("{a0} is not a root of {f} mod {p}")));
    }
    let df = f.derivative();
    if (df.eval(&a0) % &pb).is_zero() {
        return Err(Error::NonSimpleRoot {
            root: a0.to_string(),
            p,
        });
    }
    let mut a = a0;
    let mut e = 1;
    loop {
        let fa = f.eval(&a);
        if fa.is_zero() {
            return Ok(a);
        }
        if e >= m.exponent() {
            return Err(Error::internal("Newton iteration did not converge"));
        }
        e = (2 * e).min(m.exponent());
        let inv = m
            .inv(&df.eval(&a))
            .ok_or_else(|| Error::internal("derivative became a non-unit"))?;
        a = m.sub(&a, &m.mul(&fa, &inv));
    }
}

/// Factorization of `f` into basic irreducible monic factors mod p^N, in the
/// canonical order of their reductions.
pub fn padic_factorization(f: &ZPoly, p: u64, precision: u32) -> Result<Vec<ZMPoly>> {
    let m = Modulus::new(p, precision)?;
    let fm = f.reduce(&m);
    let fac = factor_modp(&fm.to_fp())?;
    if !fac.is_squarefree() {
        let repeated: Vec<String> = fac
            .factors
            .iter()
            .filter(|(_, e)| *e > 1)
            .map(|(g, e)| format!("({g})^{e}"))
            .collect();
        return Err(Error::NotSquarefree {
            p,
            diagnostic: format!(
                "factor {} appears with multiplicity > 1; plain lifting needs a squarefree reduction",
                repeated.join(", ")
            ),
        });
    }
    let factors: Vec<FpPoly> = fac.factors.into_iter().map(|(g, _)| g).collect();
    Ok(hensel_lift_factors(&fm, &factors)?.0)
}
