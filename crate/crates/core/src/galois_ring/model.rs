//! Explicit models: a free Z/p^n-module with a labeled basis and structure
//! constants e_i e_j = sum_k a_ijk e_k.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::arith::linalg::solve_columns;
use crate::arith::{Modulus, ZMPoly};
use crate::error::{Error, Result};
use crate::ff::is_irreducible_modp;

/// How one prime-power factor of the rank was built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentProvenance {
    pub r: u64,
    pub k: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bold_r: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub l: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub root_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub descriptor: Option<Vec<u64>>,
    /// Digits (lowest first) of the polynomial presenting the ambient
    /// residue field, or of the tower polynomial when r = p.
    pub aux_modulus: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub omega: Option<Vec<u64>>,
    /// Outcome of the cross-check through the exact minimal polynomial.
    pub route_b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub route: String,
    pub r_components: Vec<ComponentProvenance>,
    pub seed: u64,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitModel {
    p: u64,
    n: u32,
    m: usize,
    modulus: Arc<Modulus>,
    basis: Vec<String>,
    constants: Vec<BigUint>,
    small: Option<Vec<u64>>,
    defining_poly: Option<ZMPoly>,
    generator: Option<Vec<BigUint>>,
    provenance: Provenance,
}

/// Coordinates of an element of a model.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    pub coords: Vec<BigUint>,
}

impl ExplicitModel {
    pub fn new(
        modulus: &Arc<Modulus>,
        basis: Vec<String>,
        constants: Vec<BigUint>,
        defining_poly: Option<ZMPoly>,
        generator: Option<Vec<BigUint>>,
        provenance: Provenance,
    ) -> Result<Self> {
        let m = basis.len();
        if constants.len() != m * m * m {
            return Err(Error::input(format!(
                "expected {} structure constants, got {}",
                m * m * m,
                constants.len()
            )));
        }
        if let Some(f) = &defining_poly {
            if f.modulus() != modulus {
                return Err(Error::ModulusMismatch {
                    left: f.modulus().to_string(),
                    right: modulus.to_string(),
                });
            }
        }
        if generator.as_ref().is_some_and(|g| g.len() != m) {
            return Err(Error::input("generator has the wrong length"));
        }
        let constants: Vec<BigUint> = constants.iter().map(|c| modulus.reduce(c)).collect();
        let small = modulus
            .small()
            .filter(|&q| q < (1 << 62))
            .map(|_| constants.iter().map(|c| c.to_u64().unwrap()).collect());
        Ok(ExplicitModel {
            p: modulus.prime(),
            n: modulus.exponent(),
            m,
            modulus: modulus.clone(),
            basis,
            constants,
            small,
            defining_poly,
            generator: generator.map(|g| g.iter().map(|c| modulus.reduce(c)).collect()),
            provenance,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &Arc<Modulus> {
        &self.modulus
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn defining_poly(&self) -> Option<&ZMPoly> {
        self.defining_poly.as_ref()
    }

    pub fn generator(&self) -> Option<RingElement> {
        self.generator.clone().map(|coords| RingElement { coords })
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &BigUint {
        &self.constants[(i * self.m + j) * self.m + k]
    }

    pub fn constants(&self) -> &[BigUint] {
        &self.constants
    }

    /// Replaces one structure constant (for mutation tests of the verifier).
    pub fn with_constant(&self, i: usize, j: usize, k: usize, value: BigUint) -> ExplicitModel {
        let mut c = self.constants.clone();
        c[(i * self.m + j) * self.m + k] = value;
        ExplicitModel::new(
            &self.modulus,
            self.basis.clone(),
            c,
            self.defining_poly.clone(),
            self.generator.clone(),
            self.provenance.clone(),
        )
        .expect("same shape")
    }

    pub(crate) fn small_constants(&self) -> Option<(&[u64], u64)> {
        self.small
            .as_deref()
            .map(|c| (c, self.modulus.small().unwrap()))
    }

    pub fn element(&self, coords: Vec<BigUint>) -> Result<RingElement> {
        if coords.len() != self.m {
            return Err(Error::input(format!(
                "element has {} coordinates, rank is {}",
                coords.len(),
                self.m
            )));
        }
        Ok(RingElement {
            coords: coords.iter().map(|c| self.modulus.reduce(c)).collect(),
        })
    }

    pub fn zero(&self) -> RingElement {
        RingElement {
            coords: vec![BigUint::zero(); self.m],
        }
    }

    pub fn basis_element(&self, i: usize) -> RingElement {
        let mut e = self.zero();
        e.coords[i] = BigUint::from(1u32);
        e
    }

    pub fn one(&self) -> RingElement {
        self.basis_element(0)
    }

    pub fn add(&self, u: &RingElement, v: &RingElement) -> RingElement {
        RingElement {
            coords: u
                .coords
                .iter()
                .zip(&v.coords)
                .map(|(a, b)| self.modulus.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, u: &RingElement, v: &RingElement) -> RingElement {
        RingElement {
            coords: u
                .coords
                .iter()
                .zip(&v.coords)
                .map(|(a, b)| self.modulus.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, u: &RingElement, c: &BigUint) -> RingElement {
        RingElement {
            coords: u.coords.iter().map(|a| self.modulus.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, u: &RingElement, v: &RingElement) -> RingElement {
        let m = self.m;
        if let Some((c, q)) = self.small_constants() {
            let uu: Vec<u64> = u.coords.iter().map(|x| x.to_u64().unwrap()).collect();
            let vv: Vec<u64> = v.coords.iter().map(|x| x.to_u64().unwrap()).collect();
            let mut acc = vec![0u128; m];
            let q128 = q as u128;
            for (i, &a) in uu.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in vv.iter().enumerate() {
                    if b == 0 {
                        continue;
                    }
                    let ab = (a as u128 * b as u128) % q128;
                    let row = &c[(i * m + j) * m..(i * m + j + 1) * m];
                    for (k, &ck) in row.iter().enumerate() {
                        if ck != 0 {
                            acc[k] = (acc[k] + ab * ck as u128) % q128;
                        }
                    }
                }
            }
            return RingElement {
                coords: acc.into_iter().map(|x| BigUint::from(x as u64)).collect(),
            };
        }
        let mut acc = vec![BigUint::zero(); m];
        for i in 0..m {
            if u.coords[i].is_zero() {
                continue;
            }
            for j in 0..m {
                if v.coords[j].is_zero() {
                    continue;
                }
                let ab = self.modulus.mul(&u.coords[i], &v.coords[j]);
                for (k, slot) in acc.iter_mut().enumerate() {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        *slot = self.modulus.add(slot, &self.modulus.mul(&ab, c));
                    }
                }
            }
        }
        RingElement { coords: acc }
    }

    pub fn pow(&self, u: &RingElement, e: &BigUint) -> RingElement {
        let mut acc = self.one();
        let mut base = u.clone();
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
        }
        acc
    }

    /// Columns of multiplication by `u` on the basis.
    fn mul_columns(&self, u: &RingElement) -> Vec<Vec<BigUint>> {
        (0..self.m)
            .map(|j| self.mul(u, &self.basis_element(j)).coords)
            .collect()
    }

    /// Inverse of a unit: solve mod p, then Newton steps v <- v (2 - u v).
    pub fn inv(&self, u: &RingElement) -> Result<RingElement> {
        let mp = Modulus::new(self.p, 1)?;
        let pb = BigUint::from(self.p);
        let cols: Vec<Vec<BigUint>> = self
            .mul_columns(u)
            .into_iter()
            .map(|c| c.into_iter().map(|x| x % &pb).collect())
            .collect();
        let one = self.one();
        let v0 = solve_columns(&mp, &cols, std::slice::from_ref(&one.coords))
            .map_err(|_| Error::ZeroDivisor(self.p))?;
        let mut v = RingElement {
            coords: v0.into_iter().next().unwrap(),
        };
        let two = self.scale(&one, &BigUint::from(2u32));
        let steps = 32 - self.n.max(1).leading_zeros() + 1;
        for _ in 0..steps {
            v = self.mul(&v, &self.sub(&two, &self.mul(u, &v)));
        }
        if self.mul(u, &v) != one {
            return Err(Error::internal("Newton inverse did not converge"));
        }
        Ok(v)
    }

    /// Evaluates a polynomial over Z/p^n at an element.
    pub fn eval(&self, f: &ZMPoly, x: &RingElement) -> RingElement {
        let mut acc = self.zero();
        for c in f.coeffs().iter().rev() {
            acc = self.add(&self.mul(&acc, x), &self.scale(&self.one(), c));
        }
        acc
    }

    /// The same model read modulo p^e, e <= n.
    pub fn reduce_precision(&self, e: u32) -> Result<ExplicitModel> {
        if e == 0 || e > self.n {
            return Err(Error::input(format!(
                "cannot reduce precision {} to {e}",
                self.n
            )));
        }
        let target = self.modulus.with_exponent(e)?;
        ExplicitModel::new(
            &target,
            self.basis.clone(),
            self.constants.clone(),
            self.defining_poly
                .as_ref()
                .map(|f| f.reduce_precision(e))
                .transpose()?,
            self.generator.clone(),
            self.provenance.clone(),
        )
    }

    /// The residue field F_{p^m}: constants and defining polynomial mod p,
    /// with irreducibility of the latter asserted.
    pub fn residue_field_model(&self) -> Result<ExplicitModel> {
        let r = self.reduce_precision(1)?;
        if let Some(f) = r.defining_poly() {
            if !is_irreducible_modp(&f.to_fp())? {
                return Err(Error::internal(format!(
                    "reduction {f} of the defining polynomial is reducible"
                )));
            }
        }
        Ok(r)
    }

    pub fn to_json(&self) -> ModelJson {
        let num = |c: &BigUint| Number::from_str(&c.to_string()).expect("decimal");
        let m = self.m;
        ModelJson {
            p: self.p,
            n: self.n,
            m,
            basis: self.basis.clone(),
            defining_poly: self.defining_poly.as_ref().map(|f| {
                f.padded(f.degree().map_or(0, |d| d + 1))
                    .iter()
                    .map(num)
                    .collect()
            }),
            structure_constants: (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| (0..m).map(|k| num(self.constant(i, j, k))).collect())
                        .collect()
                })
                .collect(),
            provenance: ProvenanceJson {
                route: self.provenance.route.clone(),
                r_components: self.provenance.r_components.clone(),
                seed: self.provenance.seed,
                version: self.provenance.version.clone(),
                generator: self.generator.as_ref().map(|g| g.iter().map(num).collect()),
            },
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serializable")
    }

    pub fn from_json(j: &ModelJson) -> Result<Self> {
        let parse = |x: &Number| -> Result<BigUint> {
            BigUint::from_str(&x.to_string())
                .map_err(|_| Error::input(format!("{x} is not a nonnegative integer")))
        };
        let modulus = Modulus::new(j.p, j.n)?;
        let m = j.m;
        if j.basis.len() != m || j.structure_constants.len() != m {
            return Err(Error::input("basis or constants do not match the rank"));
        }
        let mut constants = Vec::with_capacity(m * m * m);
        for row in &j.structure_constants {
            if row.len() != m {
                return Err(Error::input("ragged structure constants"));
            }
            for col in row {
                if col.len() != m {
                    return Err(Error::input("ragged structure constants"));
                }
                for c in col {
                    constants.push(parse(c)?);
                }
            }
        }
        let defining_poly = j
            .defining_poly
            .as_ref()
            .map(|v| -> Result<ZMPoly> {
                Ok(ZMPoly::new(
                    &modulus,
                    v.iter().map(parse).collect::<Result<Vec<_>>>()?,
                ))
            })
            .transpose()?;
        let generator = j
            .provenance
            .generator
            .as_ref()
            .map(|v| v.iter().map(parse).collect::<Result<Vec<_>>>())
            .transpose()?;
        ExplicitModel::new(
            &modulus,
            j.basis.clone(),
            constants,
            defining_poly,
            generator,
            Provenance {
                route: j.provenance.route.clone(),
                r_components: j.provenance.r_components.clone(),
                seed: j.provenance.seed,
                version: j.provenance.version.clone(),
            },
        )
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: ModelJson =
            serde_json::from_str(s).map_err(|e| Error::input(format!("malformed model: {e}")))?;
        Self::from_json(&j)
    }
}

/// Serialized form; field order is part of the format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelJson {
    pub p: u64,
    pub n: u32,
    pub m: usize,
    pub basis: Vec<String>,
    pub defining_poly: Option<Vec<Number>>,
    pub structure_constants: Vec<Vec<Vec<Number>>>,
    pub provenance: ProvenanceJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceJson {
    pub route: String,
    pub r_components: Vec<ComponentProvenance>,
    pub seed: u64,
    pub version: String,
    /// Coordinates of the element whose minimal polynomial is the defining
    /// polynomial.
    #[serde(default)]
    pub generator: Option<Vec<Number>>,
}
