//! Standard models of GR(p^n, m): prime-power components, their tensor
//! product on the eps basis, element arithmetic and verification.

mod aux;
mod component;
mod model;
mod verify;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub use aux::AuxRing;
pub use component::{
    defining_polynomial, omega_candidates, p_part_model, prime_power_model, GaussSetup,
    PrimePowerOptions, RouteBStatus,
};
pub use model::{
    ComponentProvenance, ExplicitModel, ModelJson, Provenance, ProvenanceJson, RingElement,
};
pub use verify::{verify_model, Check, VerificationReport};

use crate::arith::linalg::{independent_mod_p, solve_columns};
use crate::arith::{nt, Modulus, ZMPoly};
use crate::config::Config;
use crate::error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// "0" or the reduced fraction t/m.
pub(crate) fn label(t: u64, m: u64) -> String {
    if t == 0 {
        return "0".into();
    }
    let g = nt::gcd(t, m);
    format!("{}/{}", t / g, m / g)
}

/// The radix digits of s = i/m: c_{r,k} in [0, r) with sum c_{r,k}/r^k = s mod 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonIndex {
    /// s as a reduced pair (numerator, denominator), 0 as (0, 1).
    pub s: (u64, u64),
    pub digits: BTreeMap<(u64, u32), u64>,
}

pub fn epsilon_digits(i: u64, m: u64) -> Result<EpsilonIndex> {
    if m == 0 || i >= m {
        return Err(Error::input(format!("{i}/{m} is not in [0, 1)")));
    }
    let mut digits = BTreeMap::new();
    for (r, e) in nt::factorize(m) {
        let q = r.pow(e);
        let inv = nt::inv_mod((m / q) % q, q).expect("coprime cofactor");
        let ic = nt::mul_mod(i % q, inv, q);
        for j in 1..=e {
            let c = (ic / r.pow(e - j)) % r;
            if c != 0 {
                digits.insert((r, j), c);
            }
        }
    }
    let g = nt::gcd(i, m);
    Ok(EpsilonIndex {
        s: if i == 0 { (0, 1) } else { (i / g, m / g) },
        digits,
    })
}

/// The rank-one model of Z/p^n.
pub fn trivial_model(p: u64, n: u32, config: &Config) -> Result<ExplicitModel> {
    let modulus = Modulus::new(p, n)?;
    ExplicitModel::new(
        &modulus,
        vec!["0".into()],
        vec![BigUint::one()],
        Some(ZMPoly::from_i64s(&modulus, &[-1, 1])),
        Some(vec![BigUint::one()]),
        Provenance {
            route: "trivial".into(),
            r_components: vec![],
            seed: config.seed,
            version: VERSION.into(),
        },
    )
}

/// Tensor product of models of pairwise coprime ranks on the eps basis:
/// basis index i of the product corresponds to i*(m/m_c)^(-1) mod m_c in
/// component c.
pub fn tensor_compose(components: &[ExplicitModel], config: &Config) -> Result<ExplicitModel> {
    let first = components
        .first()
        .ok_or_else(|| Error::input("no components to compose"))?;
    if components.len() == 1 {
        return Ok(first.clone());
    }
    let modulus = first.modulus().clone();
    for c in components {
        if c.modulus() != &modulus {
            return Err(Error::ModulusMismatch {
                left: modulus.to_string(),
                right: c.modulus().to_string(),
            });
        }
    }
    let ranks: Vec<u64> = components.iter().map(|c| c.rank() as u64).collect();
    for a in 0..ranks.len() {
        for b in a + 1..ranks.len() {
            if nt::gcd(ranks[a], ranks[b]) != 1 {
                return Err(Error::input(format!(
                    "ranks {} and {} are not coprime",
                    ranks[a], ranks[b]
                )));
            }
        }
    }
    let m: u64 = ranks.iter().product();
    let mu = m as usize;
    let cofactor_inv: Vec<u64> = ranks
        .iter()
        .map(|&q| nt::inv_mod((m / q) % q, q).unwrap_or(0))
        .collect();
    let split: Vec<Vec<usize>> = (0..m)
        .map(|i| {
            ranks
                .iter()
                .zip(&cofactor_inv)
                .map(|(&q, &v)| nt::mul_mod(i % q, v, q) as usize)
                .collect()
        })
        .collect();
    let mut constants = vec![BigUint::zero(); mu * mu * mu];
    for i in 0..mu {
        for j in i..mu {
            for k in 0..mu {
                let mut acc = BigUint::one();
                for (c, comp) in components.iter().enumerate() {
                    let a = comp.constant(split[i][c], split[j][c], split[k][c]);
                    if a.is_zero() {
                        acc = BigUint::zero();
                        break;
                    }
                    acc = modulus.mul(&acc, a);
                }
                constants[(i * mu + j) * mu + k] = acc.clone();
                constants[(j * mu + i) * mu + k] = acc;
            }
        }
    }
    let provenance = Provenance {
        route: "tensor".into(),
        r_components: components
            .iter()
            .flat_map(|c| c.provenance().r_components.clone())
            .collect(),
        seed: config.seed,
        version: VERSION.into(),
    };
    let basis: Vec<String> = (0..m).map(|t| label(t, m)).collect();
    let bare = ExplicitModel::new(
        &modulus,
        basis.clone(),
        constants.clone(),
        None,
        None,
        provenance.clone(),
    )?;
    // embedded component generators
    let gens: Vec<RingElement> = components
        .iter()
        .zip(&ranks)
        .map(|(c, &q)| {
            let g = c
                .generator()
                .unwrap_or_else(|| c.basis_element(1.min(c.rank() - 1)));
            let mut v = bare.zero();
            for (idx, coord) in g.coords.iter().enumerate() {
                v.coords[(idx as u64 * (m / q) % m) as usize] = coord.clone();
            }
            v
        })
        .collect();
    for t in 0..8u64 {
        let mut gamma = bare.zero();
        for (idx, g) in gens.iter().enumerate() {
            let w = BigUint::from(t + 1).pow(idx as u32);
            gamma = bare.add(&gamma, &bare.scale(g, &w));
        }
        if let Some(f) = power_basis_poly(&bare, &gamma)? {
            return ExplicitModel::new(
                &modulus,
                basis,
                constants,
                Some(f),
                Some(gamma.coords),
                provenance,
            );
        }
    }
    let mut provenance = provenance;
    provenance.route = "tensor (constants only: no primitive element found)".into();
    ExplicitModel::new(&modulus, basis, constants, None, None, provenance)
}

/// Minimal polynomial of `gamma` when its powers form a basis.
fn power_basis_poly(model: &ExplicitModel, gamma: &RingElement) -> Result<Option<ZMPoly>> {
    let m = model.rank();
    let mut powers = vec![model.one()];
    for _ in 0..m {
        powers.push(model.mul(powers.last().unwrap(), gamma));
    }
    let columns: Vec<Vec<BigUint>> = powers[..m].iter().map(|x| x.coords.clone()).collect();
    if !independent_mod_p(model.modulus(), &columns) {
        return Ok(None);
    }
    let sol = solve_columns(
        model.modulus(),
        &columns,
        std::slice::from_ref(&powers[m].coords),
    )?;
    let modulus = model.modulus();
    let mut coeffs: Vec<BigUint> = sol[0].iter().map(|c| modulus.neg(c)).collect();
    coeffs.push(BigUint::one());
    Ok(Some(ZMPoly::new(modulus, coeffs)))
}

/// The residue field F_{p^m} of a model.
pub fn residue_field_of(model: &ExplicitModel) -> Result<ExplicitModel> {
    model.residue_field_model()
}

/// The standard model of GR(p^n, m).
pub fn standard_model(p: u64, n: u32, m: u64, config: &Config) -> Result<ExplicitModel> {
    if !nt::is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if n == 0 || m == 0 {
        return Err(Error::input("n and m must be at least 1"));
    }
    if m > config.caps.max_m {
        return Err(Error::ResourceCap {
            what: "rank".into(),
            value: m,
            cap: config.caps.max_m,
        });
    }
    if n > config.caps.max_n {
        return Err(Error::ResourceCap {
            what: "precision exponent".into(),
            value: n as u64,
            cap: config.caps.max_n as u64,
        });
    }
    if m == 1 {
        return trivial_model(p, n, config);
    }
    let components = nt::factorize(m)
        .into_iter()
        .map(|(r, k)| prime_power_model(p, n, r, k, config, &PrimePowerOptions::default()))
        .collect::<Result<Vec<_>>>()?;
    tensor_compose(&components, config)
}
