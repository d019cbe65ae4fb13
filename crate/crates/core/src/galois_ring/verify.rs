//! Checks that an explicit model is a Galois ring of the advertised size.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::model::{ExplicitModel, RingElement};
use crate::arith::linalg::independent_mod_p;
use crate::arith::nt;
use crate::ff::is_irreducible_modp;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub p: u64,
    pub n: u32,
    pub m: usize,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

/// Basis triples are checked exhaustively up to this rank.
const EXHAUSTIVE_RANK: usize = 12;
/// Total ring size up to which elements are enumerated.
const ENUMERATION_LIMIT: u64 = 1 << 16;
const SAMPLE_SEED: u64 = 0xa55_0c1a;

pub fn verify_model(model: &ExplicitModel) -> VerificationReport {
    let m = model.rank();
    let modulus = model.modulus();
    let mut report = VerificationReport {
        p: model.p(),
        n: model.n(),
        m,
        checks: Vec::new(),
    };
    let c = |i, j, k| model.constant(i, j, k);

    let identity = (0..m).all(|j| {
        (0..m).all(|k| {
            let want = if j == k {
                BigUint::one()
            } else {
                BigUint::zero()
            };
            *c(0, j, k) == want && *c(j, 0, k) == want
        })
    });
    report.push("identity", identity, "e_0 e_j = e_j e_0 = e_j");

    let comm = (0..m).all(|i| (0..m).all(|j| (0..m).all(|k| c(i, j, k) == c(j, i, k))));
    report.push("commutativity", comm, "a_ijk = a_jik");

    let mut assoc_fail = None;
    if m <= EXHAUSTIVE_RANK {
        'outer: for i in 0..m {
            for j in 0..m {
                let ij = model.mul(&model.basis_element(i), &model.basis_element(j));
                for k in 0..m {
                    let jk = model.mul(&model.basis_element(j), &model.basis_element(k));
                    let lhs = model.mul(&ij, &model.basis_element(k));
                    let rhs = model.mul(&model.basis_element(i), &jk);
                    if lhs != rhs {
                        assoc_fail = Some(format!("(e_{i} e_{j}) e_{k} != e_{i} (e_{j} e_{k})"));
                        break 'outer;
                    }
                }
            }
        }
    }
    let cube = (m * m * m) as u64;
    let samples = (200_000_000 / cube.max(1)).clamp(64, 10_000);
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let random = |rng: &mut ChaCha8Rng| RingElement {
        coords: (0..m)
            .map(|_| {
                let bytes: Vec<u8> = (0..modulus.value().bits().div_ceil(8) + 1)
                    .map(|_| rng.gen())
                    .collect();
                modulus.reduce(&BigUint::from_bytes_le(&bytes))
            })
            .collect(),
    };
    if assoc_fail.is_none() {
        for s in 0..samples {
            let (u, v, w) = (random(&mut rng), random(&mut rng), random(&mut rng));
            if model.mul(&model.mul(&u, &v), &w) != model.mul(&u, &model.mul(&v, &w)) {
                assoc_fail = Some(format!("sampled triple {s} is not associative"));
                break;
            }
        }
    }
    let how = if m <= EXHAUSTIVE_RANK {
        format!(
            "all {} basis triples and {samples} random triples",
            m * m * m
        )
    } else {
        format!("{samples} random triples")
    };
    report.push(
        "associativity",
        assoc_fail.is_none(),
        assoc_fail.unwrap_or(how),
    );

    // additive order of e_0
    let q_prev = nt::big_pow(model.p(), model.n() - 1);
    let char_ok = !modulus.reduce(&q_prev).is_zero();
    report.push(
        "characteristic",
        char_ok && identity,
        format!("additive order of e_0 is {}", modulus),
    );

    match model.defining_poly() {
        Some(f) => {
            let monic = f.is_monic() && f.degree() == Some(m);
            let irreducible = monic && is_irreducible_modp(&f.to_fp()).unwrap_or(false);
            report.push(
                "defining polynomial",
                monic && irreducible,
                format!("{f}: monic of degree {m}, irreducible mod {}", model.p()),
            );
            if let Some(g) = model.generator() {
                let root = model.eval(f, &g) == model.zero();
                let mut powers = vec![model.one()];
                for _ in 1..m {
                    powers.push(model.mul(powers.last().unwrap(), &g));
                }
                let cols: Vec<Vec<BigUint>> = powers.into_iter().map(|x| x.coords).collect();
                let basis = independent_mod_p(modulus, &cols);
                report.push(
                    "generator",
                    root && basis,
                    "the generator is a root whose powers form a basis",
                );
            }
        }
        None => report.push("defining polynomial", true, "absent (constants only)"),
    }

    let size = nt::big_pow(model.p(), model.n() * m as u32);
    if size <= BigUint::from(ENUMERATION_LIMIT) {
        enumerate_checks(model, &mut report);
    }
    report
}

/// Rank of a square matrix mod p.
fn rank_mod_p(mut a: Vec<Vec<u64>>, p: u64) -> usize {
    let n = a.len();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..n).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = nt::inv_mod(a[rank][col], p).unwrap();
        for r in 0..n {
            if r != rank && a[r][col] != 0 {
                let f = nt::mul_mod(a[r][col], inv, p);
                for c in col..n {
                    let sub = nt::mul_mod(f, a[rank][c], p);
                    a[r][c] = (a[r][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn enumerate_checks(model: &ExplicitModel, report: &mut VerificationReport) {
    let (p, n, m) = (model.p(), model.n(), model.rank());
    let q = model.modulus().small().unwrap();
    let consts: Vec<u64> = model
        .constants()
        .iter()
        .map(|c| (c % p).to_u64().unwrap())
        .collect();
    let total = q.pow(m as u32);
    let mut units = 0u64;
    let mut nonunit_outside_pr = 0u64;
    let mut coords = vec![0u64; m];
    for idx in 0..total {
        let mut x = idx;
        for slot in coords.iter_mut() {
            *slot = x % q;
            x /= q;
        }
        // multiplication by the element, mod p
        let mut mat = vec![vec![0u64; m]; m];
        for (i, &u) in coords.iter().enumerate() {
            let u = u % p;
            if u == 0 {
                continue;
            }
            for j in 0..m {
                for (k, row) in mat.iter_mut().enumerate() {
                    let a = consts[(i * m + j) * m + k];
                    if a != 0 {
                        row[j] = (row[j] + u * a) % p;
                    }
                }
            }
        }
        let unit = rank_mod_p(mat, p) == m;
        if unit {
            units += 1;
        } else if coords.iter().any(|&c| c % p != 0) {
            nonunit_outside_pr += 1;
        }
    }
    let expected = p.pow((n - 1) * m as u32) * (p.pow(m as u32) - 1);
    report.push(
        "unit count",
        units == expected,
        format!("units={units} expected={expected}"),
    );
    report.push(
        "nonunits",
        nonunit_outside_pr == 0 && total - units == p.pow((n - 1) * m as u32),
        format!("nonunits form pR ({} outside)", nonunit_outside_pr),
    );
    // p^i R is an ideal of size p^((n-i)m)
    let mut chain_ok = true;
    for i in 0..=n {
        let pi = p.pow(i);
        let members = (0..total)
            .filter(|&idx| {
                let mut x = idx;
                (0..m).all(|_| {
                    let ok = (x % q).is_multiple_of(pi);
                    x /= q;
                    ok
                })
            })
            .count() as u64;
        if members != p.pow((n - i) * m as u32) {
            chain_ok = false;
        }
        // closed under multiplication by the basis
        let mq = model.modulus();
        for j in 0..m {
            for k in 0..m {
                let g = model.scale(&model.basis_element(k), &BigUint::from(pi));
                let prod = model.mul(&model.basis_element(j), &g);
                if prod
                    .coords
                    .iter()
                    .any(|c| (mq.reduce(c) % pi) != BigUint::zero())
                {
                    chain_ok = false;
                }
            }
        }
    }
    report.push(
        "ideal chain",
        chain_ok,
        format!("p^i R has {}^((n-i)m) elements for 0 <= i <= {n}", p),
    );
}
