//! Cyclotomic side: levels, the torsion group acting on roots of unity,
//! Gauss periods, their minimal polynomials over Z and the residue
//! descriptors of the primes above p.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{nt, ZPoly};
use crate::error::{Error, Result};
use crate::ff::{canonical_extension, element_of_order, FFElement, FFExt};

/// r for odd r, 4 for r = 2.
pub fn bold(r: u64) -> u64 {
    if r == 2 {
        4
    } else {
        r
    }
}

fn pow_u64(b: u64, e: u32) -> Result<u64> {
    b.checked_pow(e).ok_or_else(|| Error::ResourceCap {
        what: "root of unity order".into(),
        value: u64::MAX,
        cap: u64::MAX,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelData {
    pub p: u64,
    pub r: u64,
    pub bold_r: u64,
    /// Exact r-adic valuation of (p^phi(bold_r) - 1) / (bold_r^2 / r).
    pub l: u32,
}

impl LevelData {
    /// bold_r * r^k, the order of the roots of unity at level k.
    pub fn root_order(&self, k: u32) -> Result<u64> {
        Ok(self.bold_r * pow_u64(self.r, k)?)
    }
}

pub fn level(p: u64, r: u64) -> Result<LevelData> {
    if !nt::is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if !nt::is_prime(r) {
        return Err(Error::NotPrime(r.to_string()));
    }
    if p == r {
        return Err(Error::input(format!(
            "r = p = {p} is handled by the Artin-Schreier tower"
        )));
    }
    let br = bold(r);
    let phi = nt::euler_phi(br) as u32;
    let num = nt::big_pow(p, phi) - 1u32;
    let den = num_bigint::BigUint::from(br * br / r);
    debug_assert!((&num % &den).is_zero());
    let l = nt::valuation(&(num / den), r);
    Ok(LevelData {
        p,
        r,
        bold_r: br,
        l,
    })
}

/// Exponents of the torsion subgroup inside (Z/M)^*, sorted.
pub fn delta_exponents(r: u64, modulus: u64) -> Result<Vec<u64>> {
    let br = bold(r);
    let mut q = modulus;
    if !q.is_multiple_of(br) {
        return Err(Error::input(format!(
            "{modulus} is not {br} times a power of {r}"
        )));
    }
    q /= br;
    while q.is_multiple_of(r) {
        q /= r;
    }
    if q != 1 {
        return Err(Error::input(format!(
            "{modulus} is not {br} times a power of {r}"
        )));
    }
    if r == 2 {
        return Ok(vec![1, modulus - 1]);
    }
    Ok((1..modulus)
        .filter(|&a| nt::gcd(a, modulus) == 1 && nt::pow_mod(a, r - 1, modulus) == 1)
        .collect())
}

/// The exponent set of eta_{r,k,i}: {e (1 + i bold_r r^(k-1)) mod M_k}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussPeriodSymbolic {
    pub r: u64,
    pub k: u32,
    pub i: u64,
    pub root_order: u64,
    pub exponents: Vec<u64>,
}

pub fn gauss_period(r: u64, k: u32, i: u64) -> Result<GaussPeriodSymbolic> {
    let br = bold(r);
    let m = br * pow_u64(r, k)?;
    let shift = if k == 0 {
        1
    } else {
        (1 + i * br * pow_u64(r, k - 1)?) % m
    };
    let mut exponents: Vec<u64> = delta_exponents(r, m)?
        .into_iter()
        .map(|e| nt::mul_mod(e, shift, m))
        .collect();
    exponents.sort_unstable();
    Ok(GaussPeriodSymbolic {
        r,
        k,
        i,
        root_order: m,
        exponents,
    })
}

/// Minimal polynomial over Z of eta_{r,k,0}, degree r^k.
///
/// Works in Z[C_M] = Z[x]/(x^M - 1): the product over the conjugates
/// 1 + t*bold_r (t < r^k) is formed there and each coefficient is reduced
/// modulo the M-th cyclotomic polynomial, where it must become an integer.
pub fn gauss_period_minpoly_exact(r: u64, k: u32, degree_cap: u64) -> Result<ZPoly> {
    if !nt::is_prime(r) {
        return Err(Error::NotPrime(r.to_string()));
    }
    let br = bold(r);
    if k == 0 {
        let mu = if r == 2 { 0 } else { -1 };
        return Ok(ZPoly::from_i64s(&[-mu, 1]));
    }
    let deg = pow_u64(r, k)?;
    if deg > degree_cap {
        return Err(Error::ResourceCap {
            what: "Gauss period degree".into(),
            value: deg,
            cap: degree_cap,
        });
    }
    let m = br * deg;
    let mu = m as usize;
    let delta = delta_exponents(r, m)?;
    // coefficients of the running product, lowest X-degree first
    let mut prod: Vec<Vec<BigInt>> = vec![unit_vector(mu, 0)];
    for t in 0..deg {
        let u = 1 + t * br;
        let shifts: Vec<usize> = delta
            .iter()
            .map(|&e| nt::mul_mod(e, u, m) as usize)
            .collect();
        let mut next: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); mu]; prod.len() + 1];
        for (j, c) in prod.iter().enumerate() {
            for (idx, v) in c.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                next[j + 1][idx] += v;
                for &s in &shifts {
                    let pos = (idx + s) % mu;
                    next[j][pos] -= v;
                }
            }
        }
        prod = next;
    }
    let h = mu / r as usize;
    let mut coeffs = Vec::with_capacity(prod.len());
    for mut c in prod {
        // x^((r-1)h) = -(1 + x^h + ... + x^((r-2)h)) modulo Phi_M
        for s in 0..h {
            let top = std::mem::take(&mut c[(r as usize - 1) * h + s]);
            if top.is_zero() {
                continue;
            }
            for i in 0..r as usize - 1 {
                c[i * h + s] -= &top;
            }
        }
        if c.iter().skip(1).any(|v| !v.is_zero()) {
            return Err(Error::internal(format!(
                "Gauss period product for r={r}, k={k} has a non-integral coefficient"
            )));
        }
        coeffs.push(std::mem::take(&mut c[0]));
    }
    Ok(ZPoly::new(coeffs))
}

fn unit_vector(len: usize, at: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); len];
    v[at] = BigInt::one();
    v
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Closed form for r = 3: the minimal polynomial of eta_{3,k+1,0} is
/// 1 + sum_n (-1)^n N/(N-n) C(N-n, n) x^(N-2n) with N = 3^(k+1).
pub fn gauss_period_minpoly_r3_formula(k: u32) -> ZPoly {
    let n_total = 3u64.pow(k + 1);
    let mut coeffs = vec![BigInt::zero(); n_total as usize + 1];
    coeffs[0] += 1;
    for n in 0..=n_total / 2 {
        let c = BigInt::from(n_total) * binomial(n_total - n, n) / BigInt::from(n_total - n);
        let c = if n % 2 == 1 { -c } else { c };
        coeffs[(n_total - 2 * n) as usize] += c;
    }
    ZPoly::new(coeffs)
}

/// Residues (a_j) of the Gauss periods eta_{r,K,i}, 1 <= K <= l, 0 <= i < r,
/// at one prime above p; entry j = i + (K-1) r.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IdealDescriptor(pub Vec<u64>);

/// The roots of unity of order M_L in `ext`, as powers of a fixed one.
pub struct RootTable<'a> {
    ext: &'a FFExt,
    order: u64,
    powers: Vec<FFElement>,
}

impl<'a> RootTable<'a> {
    pub fn new(ext: &'a FFExt, order: u64) -> Result<Self> {
        let w = element_of_order(ext, order)?;
        let mut powers = Vec::with_capacity(order as usize);
        let mut acc = ext.one();
        for _ in 0..order {
            powers.push(acc.clone());
            acc = ext.mul(&acc, &w);
        }
        Ok(RootTable { ext, order, powers })
    }

    pub fn power(&self, e: u64) -> &FFElement {
        &self.powers[(e % self.order) as usize]
    }

    /// Exponents j with w^j a primitive root.
    pub fn primitive_exponents(&self) -> impl Iterator<Item = u64> + '_ {
        (1..self.order).filter(|&j| nt::gcd(j, self.order) == 1)
    }

    /// Residue of eta_{r,K,i} when zeta_{M_L} is sent to w^j.
    pub fn period_residue(
        &self,
        r: u64,
        top: u32,
        j: u64,
        level_k: u32,
        i: u64,
    ) -> Result<FFElement> {
        let g = gauss_period(r, level_k, i)?;
        let scale = pow_u64(r, top - level_k)?;
        let m = self.order;
        let mut acc = self.ext.zero();
        for &e in &g.exponents {
            let exp = nt::mul_mod(nt::mul_mod(e, scale, m), j % m, m);
            acc = self.ext.add(&acc, self.power(exp));
        }
        Ok(acc)
    }

    /// Descriptor of the prime determined by zeta_{M_L} -> w^j.
    pub fn descriptor(&self, ld: &LevelData, top: u32, j: u64) -> Result<IdealDescriptor> {
        let mut a = Vec::with_capacity((ld.l as u64 * ld.r) as usize);
        for level_k in 1..=ld.l {
            for i in 0..ld.r {
                let v = self.period_residue(ld.r, top, j, level_k, i)?;
                let c = v.as_prime_field().ok_or_else(|| {
                    Error::internal(format!(
                        "residue of eta_({},{level_k},{i}) is not in the prime field",
                        ld.r
                    ))
                })?;
                a.push(c);
            }
        }
        Ok(IdealDescriptor(a))
    }

    /// Primitive roots grouped by the descriptor they realize.
    pub fn by_descriptor(
        &self,
        ld: &LevelData,
        top: u32,
    ) -> Result<BTreeMap<IdealDescriptor, Vec<u64>>> {
        let mut map: BTreeMap<IdealDescriptor, Vec<u64>> = BTreeMap::new();
        for j in self.primitive_exponents() {
            map.entry(self.descriptor(ld, top, j)?).or_default().push(j);
        }
        Ok(map)
    }

    pub fn ext(&self) -> &FFExt {
        self.ext
    }
}

/// Degree of the residue field at level L: ord_{M_L}(p).
pub fn residue_degree(ld: &LevelData, top: u32) -> Result<u64> {
    Ok(nt::multiplicative_order(
        ld.p % ld.root_order(top)?,
        ld.root_order(top)?,
    ))
}

pub fn enumerate_ideal_descriptors(p: u64, r: u64) -> Result<Vec<IdealDescriptor>> {
    let ld = level(p, r)?;
    let d = residue_degree(&ld, ld.l)?;
    let ext = canonical_extension(p, d as usize)?;
    let table = RootTable::new(&ext, ld.root_order(ld.l)?)?;
    let found: Vec<IdealDescriptor> = table.by_descriptor(&ld, ld.l)?.into_keys().collect();
    let expected = pow_u64(r, ld.l)?;
    if found.len() as u64 != expected {
        return Err(Error::internal(format!(
            "found {} primes above {p} instead of {expected}",
            found.len()
        )));
    }
    Ok(found)
}

/// The standard prime together with the root of unity pinned for it.
#[derive(Clone, Debug)]
pub struct StandardIdeal {
    pub level: LevelData,
    pub descriptor: IdealDescriptor,
    pub ext: FFExt,
    pub omega: FFElement,
}

/// Lexicographically smallest descriptor; the pinned root is the first
/// realizing it in element index order.
pub fn select_standard_ideal(p: u64, r: u64) -> Result<StandardIdeal> {
    let ld = level(p, r)?;
    let d = residue_degree(&ld, ld.l)?;
    let ext = canonical_extension(p, d as usize)?;
    let (descriptor, omega) = {
        let table = RootTable::new(&ext, ld.root_order(ld.l)?)?;
        let (desc, js) = table
            .by_descriptor(&ld, ld.l)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::internal("no primes found"))?;
        (desc, smallest(&table, &js))
    };
    Ok(StandardIdeal {
        level: ld,
        descriptor,
        ext,
        omega,
    })
}

/// The candidate of smallest index among w^j for the given j.
pub fn smallest(table: &RootTable<'_>, js: &[u64]) -> FFElement {
    js.iter()
        .map(|&j| table.power(j).clone())
        .min_by(FFElement::index_cmp)
        .expect("nonempty candidate list")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{factor_modp, FpPoly};

    #[test]
    fn levels() {
        assert_eq!(level(17, 3).unwrap().l, 1);
        assert_eq!(level(7, 5).unwrap().l, 1);
        assert_eq!(level(2, 3).unwrap().l, 0);
        assert_eq!(level(7, 2).unwrap().l, 1);
        assert_eq!(level(17, 2).unwrap().l, 2);
        assert_eq!(level(3, 2).unwrap().l, 0);
        assert_eq!(level(17, 2).unwrap().bold_r, 4);
        assert!(level(3, 3).is_err());
    }

    #[test]
    fn level_by_direct_valuation() {
        // (17^2 - 1)/3 = 96 = 3 * 32 and (7^4 - 1)/5 = 480 = 5 * 96
        assert_eq!(96 % 3, 0);
        assert_ne!(96 % 9, 0);
        assert_eq!(480 % 5, 0);
        assert_ne!(480 % 25, 0);
    }

    #[test]
    fn torsion_exponents() {
        assert_eq!(delta_exponents(3, 9).unwrap(), vec![1, 8]);
        assert_eq!(delta_exponents(5, 25).unwrap(), vec![1, 7, 18, 24]);
        assert_eq!(delta_exponents(2, 4).unwrap(), vec![1, 3]);
        assert_eq!(delta_exponents(2, 32).unwrap(), vec![1, 31]);
        assert!(delta_exponents(3, 12).is_err());
        for (r, m) in [(3u64, 27u64), (5, 125), (7, 49)] {
            assert_eq!(delta_exponents(r, m).unwrap().len() as u64, r - 1);
        }
    }

    #[test]
    fn period_orbits_match_written_expansions() {
        // eta_{5,1,j} uses exponents 1+5j, 7+10j and their negatives mod 25
        for j in 0..5u64 {
            let g = gauss_period(5, 1, j).unwrap();
            let mut want = vec![
                (1 + 5 * j) % 25,
                (7 + 10 * j) % 25,
                25 - (1 + 5 * j) % 25,
                25 - (7 + 10 * j) % 25,
            ];
            want.sort_unstable();
            assert_eq!(g.exponents, want);
            assert_eq!(g.exponents.len(), 4);
        }
    }

    #[test]
    fn exact_minimal_polynomials() {
        assert_eq!(
            gauss_period_minpoly_exact(3, 1, 243).unwrap().to_string(),
            "x^3-3x+1"
        );
        assert_eq!(
            gauss_period_minpoly_exact(5, 1, 243).unwrap().to_string(),
            "x^5-10x^3+5x^2+10x+1"
        );
        assert_eq!(
            gauss_period_minpoly_exact(2, 1, 243).unwrap().to_string(),
            "x^2-2"
        );
        assert_eq!(
            gauss_period_minpoly_exact(3, 0, 243).unwrap().to_string(),
            "x+1"
        );
        assert!(matches!(
            gauss_period_minpoly_exact(3, 6, 243),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn sqrt_two_by_hand() {
        // (x - (z + z^7))(x - (z^3 + z^5)) in Z[z]/(z^4 + 1): the sum of the
        // roots is z + z^3 + z^5 + z^7 = 0 and the product is
        // z^4 + z^6 + z^10 + z^12 = -1 - z^2 + z^2 - 1 = -2
        let f = gauss_period_minpoly_exact(2, 1, 243).unwrap();
        assert_eq!(f, ZPoly::from_i64s(&[-2, 0, 1]));
    }

    #[test]
    fn closed_form_agrees_with_exact_route() {
        for k in 0..3 {
            assert_eq!(
                gauss_period_minpoly_r3_formula(k),
                gauss_period_minpoly_exact(3, k + 1, 243).unwrap()
            );
        }
        assert_eq!(gauss_period_minpoly_r3_formula(0).to_string(), "x^3-3x+1");
    }

    #[test]
    fn exact_output_is_squarefree_over_q() {
        for (r, k) in [(3u64, 2u32), (5, 1), (2, 3), (7, 1)] {
            let f = gauss_period_minpoly_exact(r, k, 243).unwrap();
            assert!(f.is_monic());
            // squarefree mod a prime not dividing the discriminant implies
            // squarefree over Q; use a large prime
            let fp = FpPoly::new(
                1_000_003,
                f.reduce(&crate::arith::Modulus::new(1_000_003, 1).unwrap())
                    .coeffs()
                    .iter()
                    .map(|c| c.try_into().unwrap())
                    .collect(),
            );
            assert!(fp.gcd(&fp.derivative()).is_one(), "r={r} k={k}");
        }
    }

    #[test]
    fn splitting_into_equal_degrees() {
        for (r, p, k) in [
            (3u64, 17u64, 0u32),
            (3, 17, 1),
            (3, 17, 2),
            (5, 7, 1),
            (3, 2, 1),
            (3, 2, 2),
        ] {
            let ld = level(p, r).unwrap();
            let f = gauss_period_minpoly_exact(r, ld.l + k, 243).unwrap();
            let m = crate::arith::Modulus::new(p, 1).unwrap();
            let fac = factor_modp(&f.reduce(&m).to_fp()).unwrap();
            assert_eq!(fac.factors.len() as u64, r.pow(ld.l), "r={r} p={p} k={k}");
            for (g, e) in &fac.factors {
                assert_eq!(*e, 1);
                assert_eq!(g.degree().unwrap() as u64, r.pow(k));
            }
        }
    }

    #[test]
    fn seventeen_three_descriptors() {
        let d = enumerate_ideal_descriptors(17, 3).unwrap();
        assert_eq!(
            d,
            vec![
                IdealDescriptor(vec![7, 14, 13]),
                IdealDescriptor(vec![13, 7, 14]),
                IdealDescriptor(vec![14, 13, 7])
            ]
        );
        let s = select_standard_ideal(17, 3).unwrap();
        assert_eq!(s.descriptor, IdealDescriptor(vec![7, 14, 13]));
    }

    #[test]
    fn seven_five_descriptors() {
        let d = enumerate_ideal_descriptors(7, 5).unwrap();
        let want: Vec<IdealDescriptor> = [
            [1, 3, 5, 2, 3],
            [2, 3, 1, 3, 5],
            [3, 1, 3, 5, 2],
            [3, 5, 2, 3, 1],
            [5, 2, 3, 1, 3],
        ]
        .iter()
        .map(|v| IdealDescriptor(v.to_vec()))
        .collect();
        assert_eq!(d, want);
    }

    #[test]
    fn empty_descriptor_when_level_is_zero() {
        assert_eq!(
            enumerate_ideal_descriptors(2, 3).unwrap(),
            vec![IdealDescriptor(vec![])]
        );
        assert_eq!(
            select_standard_ideal(2, 3).unwrap().descriptor,
            IdealDescriptor(vec![])
        );
    }

    #[test]
    fn level_one_entries_are_the_roots_mod_p() {
        let d = enumerate_ideal_descriptors(17, 3).unwrap();
        let mut entries: Vec<u64> = d.iter().map(|x| x.0[0]).collect();
        entries.sort_unstable();
        let f = gauss_period_minpoly_exact(3, 1, 243).unwrap();
        let m = crate::arith::Modulus::new(17, 1).unwrap();
        let fp = f.reduce(&m).to_fp();
        let roots: Vec<u64> = (0..17).filter(|&x| fp.eval(x) == 0).collect();
        assert_eq!(entries, roots);
    }
}
