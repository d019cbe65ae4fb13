//! Explicit extensions F_{p^d} = F_p[t]/(H).

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::factor::{factor_modp, DEFAULT_SEED};
use super::fppoly::FpPoly;
use super::irreducible::is_irreducible_modp;
use crate::arith::nt;
use crate::error::{Error, Result};

/// An element of an [`FFExt`], stored as its reduced representative of
/// degree < d. Arithmetic goes through the parent field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FFElement {
    poly: FpPoly,
}

impl FFElement {
    pub fn poly(&self) -> &FpPoly {
        &self.poly
    }

    /// Coordinates `c_0..c_{d-1}`.
    pub fn digits(&self, d: usize) -> Vec<u64> {
        (0..d).map(|i| self.poly.coeff(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Order by the index `sum c_i p^i`.
    pub fn index_cmp(&self, other: &FFElement) -> Ordering {
        self.poly.canonical_cmp(&other.poly)
    }

    /// The prime-field value, when the element lies in F_p.
    pub fn as_prime_field(&self) -> Option<u64> {
        match self.poly.degree() {
            None => Some(0),
            Some(0) => Some(self.poly.coeff(0)),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FFExt {
    p: u64,
    d: usize,
    modulus: FpPoly,
}

impl FFExt {
    /// Field with the given monic irreducible modulus; irreducibility is
    /// checked.
    pub fn new(modulus: FpPoly) -> Result<Self> {
        if !modulus.is_monic() {
            return Err(Error::input(format!("modulus {modulus} is not monic")));
        }
        if !is_irreducible_modp(&modulus)? {
            return Err(Error::input(format!(
                "modulus {modulus} is reducible mod {}",
                modulus.prime()
            )));
        }
        Ok(Self::new_unchecked(modulus))
    }

    pub(crate) fn new_unchecked(modulus: FpPoly) -> Self {
        FFExt {
            p: modulus.prime(),
            d: modulus.degree().unwrap_or(0),
            modulus,
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }

    fn m(&self) -> &FpPoly {
        &self.modulus
    }

    /// Number of elements p^d.
    pub fn size(&self) -> BigUint {
        nt::big_pow(self.p, self.d as u32)
    }

    pub fn element(&self, poly: &FpPoly) -> FFElement {
        assert_eq!(poly.prime(), self.p);
        FFElement {
            poly: poly.rem(self.m()),
        }
    }

    pub fn from_digits(&self, digits: &[u64]) -> FFElement {
        self.element(&FpPoly::new(self.p, digits.to_vec()))
    }

    pub fn scalar(&self, c: u64) -> FFElement {
        self.element(&FpPoly::constant(self.p, c))
    }

    pub fn zero(&self) -> FFElement {
        self.scalar(0)
    }

    pub fn one(&self) -> FFElement {
        self.scalar(1)
    }

    /// The class of t.
    pub fn generator(&self) -> FFElement {
        self.element(&FpPoly::x(self.p))
    }

    pub fn add(&self, a: &FFElement, b: &FFElement) -> FFElement {
        FFElement {
            poly: a.poly.add(&b.poly),
        }
    }

    pub fn sub(&self, a: &FFElement, b: &FFElement) -> FFElement {
        FFElement {
            poly: a.poly.sub(&b.poly),
        }
    }

    pub fn neg(&self, a: &FFElement) -> FFElement {
        FFElement { poly: a.poly.neg() }
    }

    pub fn mul(&self, a: &FFElement, b: &FFElement) -> FFElement {
        FFElement {
            poly: a.poly.mul(&b.poly).rem(self.m()),
        }
    }

    pub fn pow(&self, a: &FFElement, e: &BigUint) -> FFElement {
        FFElement {
            poly: a.poly.pow_mod(e, self.m()),
        }
    }

    pub fn pow_u64(&self, a: &FFElement, e: u64) -> FFElement {
        self.pow(a, &BigUint::from(e))
    }

    pub fn inv(&self, a: &FFElement) -> Result<FFElement> {
        if a.is_zero() {
            return Err(Error::ZeroDivisor(self.p));
        }
        let (_, u, _) = a.poly.xgcd(self.m());
        Ok(self.element(&u))
    }

    /// Evaluates an F_p polynomial at `a`.
    pub fn eval(&self, f: &FpPoly, a: &FFElement) -> FFElement {
        FFElement {
            poly: f.compose_mod(&a.poly, self.m()),
        }
    }

    /// All elements in index order, starting from zero.
    pub fn elements(&self) -> impl Iterator<Item = FFElement> + '_ {
        let p = self.p;
        let d = self.d;
        let mut digits = vec![0u64; d];
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let e = self.from_digits(&digits);
            done = !increment(&mut digits, p);
            Some(e)
        })
    }

    /// Multiplicative order of a nonzero element whose order divides `bound`.
    pub fn order_dividing(&self, a: &FFElement, bound: u64) -> u64 {
        let one = self.one();
        let mut n = bound;
        for q in nt::distinct_prime_factors(bound) {
            while n.is_multiple_of(q) && self.pow_u64(a, n / q) == one {
                n /= q;
            }
        }
        n
    }
}

/// Advances a little-endian digit counter; false once it wraps around.
fn increment(digits: &mut [u64], p: u64) -> bool {
    for c in digits.iter_mut() {
        *c += 1;
        if *c < p {
            return true;
        }
        *c = 0;
    }
    false
}

/// Monic polynomials of degree `d` over F_p in index order.
pub fn monic_polynomials(p: u64, d: usize) -> impl Iterator<Item = FpPoly> {
    let mut digits = vec![0u64; d];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut c = digits.clone();
        c.push(1);
        done = !increment(&mut digits, p);
        Some(FpPoly::new(p, c))
    })
}

/// F_{p^d} presented by the smallest monic irreducible of degree d.
pub fn canonical_extension(p: u64, d: usize) -> Result<FFExt> {
    if !nt::is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if d == 0 {
        return Err(Error::input("extension degree must be at least 1"));
    }
    for f in monic_polynomials(p, d) {
        if is_irreducible_modp(&f)? {
            return Ok(FFExt::new_unchecked(f));
        }
    }
    Err(Error::internal(format!(
        "no irreducible polynomial of degree {d} mod {p}"
    )))
}

/// The first element of exact order `order`, scanning x = 1, 2, ... in
/// index order and testing y = x^((p^d - 1)/order).
pub fn element_of_order(ext: &FFExt, order: u64) -> Result<FFElement> {
    let q1 = ext.size() - BigUint::one();
    if order == 0 || !(&q1 % order).is_zero() {
        return Err(Error::OrderDoesNotDivide {
            order,
            group_order: q1.to_string(),
        });
    }
    let e = &q1 / order;
    let one = ext.one();
    for x in ext.elements().skip(1) {
        let y = ext.pow(&x, &e);
        if nt::distinct_prime_factors(order)
            .iter()
            .all(|&q| ext.pow_u64(&y, order / q) != one)
        {
            return Ok(y);
        }
    }
    Err(Error::internal(format!(
        "no element of order {order} found"
    )))
}

type ExtPoly = Vec<FFElement>;

struct PolyOps<'a> {
    k: &'a FFExt,
}

impl PolyOps<'_> {
    fn trim(&self, mut a: ExtPoly) -> ExtPoly {
        while a.last().is_some_and(FFElement::is_zero) {
            a.pop();
        }
        a
    }

    fn add(&self, a: &ExtPoly, b: &ExtPoly) -> ExtPoly {
        let n = a.len().max(b.len());
        let z = self.k.zero();
        self.trim(
            (0..n)
                .map(|i| self.k.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    fn sub(&self, a: &ExtPoly, b: &ExtPoly) -> ExtPoly {
        let n = a.len().max(b.len());
        let z = self.k.zero();
        self.trim(
            (0..n)
                .map(|i| self.k.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    fn mul(&self, a: &ExtPoly, b: &ExtPoly) -> ExtPoly {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![self.k.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.k.add(&out[i + j], &self.k.mul(x, y));
            }
        }
        self.trim(out)
    }

    fn divrem(&self, a: &ExtPoly, b: &ExtPoly) -> (ExtPoly, ExtPoly) {
        let db = b.len() - 1;
        if a.len() <= db {
            return (vec![], a.clone());
        }
        let inv = self.k.inv(&b[db]).expect("nonzero lead");
        let mut r = a.clone();
        let mut q = vec![self.k.zero(); a.len() - db];
        for i in (0..q.len()).rev() {
            let c = self.k.mul(&r[i + db], &inv);
            for (j, y) in b.iter().enumerate() {
                r[i + j] = self.k.sub(&r[i + j], &self.k.mul(&c, y));
            }
            q[i] = c;
        }
        r.truncate(db);
        (self.trim(q), self.trim(r))
    }

    fn monic(&self, a: &ExtPoly) -> ExtPoly {
        let inv = self.k.inv(a.last().expect("nonzero")).unwrap();
        a.iter().map(|c| self.k.mul(c, &inv)).collect()
    }

    fn gcd(&self, a: &ExtPoly, b: &ExtPoly) -> ExtPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = self.divrem(&a, &b).1;
            a = std::mem::replace(&mut b, r);
        }
        self.monic(&a)
    }

    fn mulmod(&self, a: &ExtPoly, b: &ExtPoly, m: &ExtPoly) -> ExtPoly {
        self.divrem(&self.mul(a, b), m).1
    }

    fn powmod(&self, a: &ExtPoly, e: &BigUint, m: &ExtPoly) -> ExtPoly {
        let mut acc = vec![self.k.one()];
        let mut base = self.divrem(a, m).1;
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = self.mulmod(&acc, &base, m);
            }
            base = self.mulmod(&base, &base, m);
        }
        self.divrem(&acc, m).1
    }

    /// Splits a monic polynomial that is a product of distinct linear
    /// factors over the field into its roots.
    fn split_linear(&self, f: &ExtPoly, rng: &mut ChaCha8Rng, out: &mut Vec<FFElement>) {
        let n = f.len() - 1;
        if n == 0 {
            return;
        }
        if n == 1 {
            out.push(self.k.neg(&f[0]));
            return;
        }
        let p = self.k.prime();
        let d = self.k.degree();
        let q = self.k.size();
        loop {
            let a: FFElement = self
                .k
                .from_digits(&(0..d).map(|_| rng.gen_range(0..p)).collect::<Vec<_>>());
            let b: FFElement = self
                .k
                .from_digits(&(0..d).map(|_| rng.gen_range(0..p)).collect::<Vec<_>>());
            let lin = vec![b, a];
            let h = if p == 2 {
                // absolute trace of (a x + b) mod f
                let mut t = self.divrem(&lin, f).1;
                let mut acc = t.clone();
                for _ in 1..d {
                    t = self.mulmod(&t, &t, f);
                    acc = self.add(&acc, &t);
                }
                acc
            } else {
                let e = (&q - BigUint::one()) >> 1u32;
                self.sub(&self.powmod(&lin, &e, f), &vec![self.k.one()])
            };
            if h.is_empty() {
                continue;
            }
            let g = self.gcd(&h, f);
            let dg = g.len() - 1;
            if dg > 0 && dg < n {
                let other = self.divrem(f, &g).0;
                self.split_linear(&g, rng, out);
                self.split_linear(&other, rng, out);
                return;
            }
        }
    }
}

/// All roots of `f` in `ext`, sorted by index.
pub fn roots_in_field(f: &FpPoly, ext: &FFExt) -> Result<Vec<FFElement>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = ext.degree();
    let fac = factor_modp(f)?;
    let ops = PolyOps { k: ext };
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut out = Vec::new();
    for (g, _) in fac.factors {
        let e = g.degree().unwrap();
        if !d.is_multiple_of(e) {
            continue;
        }
        let lifted: ExtPoly = g.coeffs().iter().map(|&c| ext.scalar(c)).collect();
        let mut roots = Vec::new();
        ops.split_linear(&lifted, &mut rng, &mut roots);
        out.extend(roots);
    }
    for r in &out {
        if !ext.eval(f, r).is_zero() {
            return Err(Error::internal("root check failed"));
        }
    }
    out.sort_by(FFElement::index_cmp);
    Ok(out)
}
