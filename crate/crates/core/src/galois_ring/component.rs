//! Prime-power components. Rank r^k with r != p comes from the pinned Gauss
//! period, rank p^k from the Artin-Schreier tower.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::aux::AuxRing;
use super::model::{ComponentProvenance, ExplicitModel, Provenance};
use super::{label, VERSION};
use crate::arith::linalg::solve_columns;
use crate::arith::{nt, Modulus, ZMPoly, ZPoly};
use crate::artin_schreier::{as_tower, embedded_generators};
use crate::config::{Config, EXACT_MINPOLY_DEGREE_CAP};
use crate::error::{Error, Result};
use crate::ff::{
    canonical_extension, factor_modp_seeded, is_irreducible_modp, FFElement, FFExt, FpPoly,
};
use crate::gauss::{
    delta_exponents, gauss_period_minpoly_exact, level, select_standard_ideal, IdealDescriptor,
    LevelData, RootTable,
};
use crate::hensel::hensel_lift_factors;

/// Overrides for the residue-field presentation and the pinned root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrimePowerOptions {
    /// Irreducible polynomial of the right degree used instead of the
    /// canonical one.
    pub aux_modulus: Option<FpPoly>,
    /// Position in the index-ordered list of roots realizing the standard
    /// descriptor; 0 is the pinned one.
    pub omega_index: Option<usize>,
}

/// Outcome of the exact-minimal-polynomial route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RouteBStatus {
    /// All factors mod p were lifted together.
    Agreed,
    /// The reduction is not squarefree but the distinguished factor is
    /// simple, so it was lifted against its cofactor.
    AgreedTwoFactor,
    Skipped(String),
}

impl RouteBStatus {
    pub fn tag(&self) -> String {
        match self {
            RouteBStatus::Agreed => "agree".into(),
            RouteBStatus::AgreedTwoFactor => "agree (two-factor lift)".into(),
            RouteBStatus::Skipped(why) => format!("skipped: {why}"),
        }
    }
}

fn cap(what: &str, value: u64, cap: u64) -> Error {
    Error::ResourceCap {
        what: what.into(),
        value,
        cap,
    }
}

fn exact_minpoly(r: u64, k: u32) -> Result<ZPoly> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), ZPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(f) = guard.get(&(r, k)) {
        return Ok(f.clone());
    }
    let f = gauss_period_minpoly_exact(r, k, EXACT_MINPOLY_DEGREE_CAP)?;
    guard.insert((r, k), f.clone());
    Ok(f)
}

/// The ambient residue field of degree ord_M(p) and the roots of unity of
/// order M realizing the standard descriptor, in index order.
pub fn omega_candidates(
    p: u64,
    r: u64,
    k: u32,
    aux_modulus: Option<&FpPoly>,
    config: &Config,
) -> Result<(LevelData, IdealDescriptor, FFExt, Vec<FFElement>)> {
    let ld = level(p, r)?;
    let top = ld.l + k;
    let order = ld.root_order(top)?;
    let d = nt::multiplicative_order(p % order, order);
    if d > config.caps.max_d {
        return Err(cap("auxiliary field degree", d, config.caps.max_d));
    }
    let ext = match aux_modulus {
        Some(h) => {
            if h.degree() != Some(d as usize) {
                return Err(Error::input(format!(
                    "auxiliary modulus {h} must have degree {d}"
                )));
            }
            FFExt::new(h.clone())?
        }
        None => canonical_extension(p, d as usize)?,
    };
    let descriptor = select_standard_ideal(p, r)?.descriptor;
    let mut candidates = {
        let table = RootTable::new(&ext, order)?;
        let mut out = Vec::new();
        for j in table.primitive_exponents() {
            if table.descriptor(&ld, top, j)? == descriptor {
                out.push(table.power(j).clone());
            }
        }
        out
    };
    candidates.sort_by(FFElement::index_cmp);
    if candidates.is_empty() {
        return Err(Error::internal("no root realizes the standard descriptor"));
    }
    Ok((ld, descriptor, ext, candidates))
}

/// Everything needed to produce the rank r^k component over Z/p^n.
pub struct GaussSetup {
    pub level: LevelData,
    pub k: u32,
    pub root_order: u64,
    pub descriptor: IdealDescriptor,
    pub ext: FFExt,
    pub omega: FFElement,
    pub candidate_count: usize,
    seed: u64,
    aux: AuxRing,
    powers: Vec<ZMPoly>,
}

impl GaussSetup {
    pub fn new(
        p: u64,
        n: u32,
        r: u64,
        k: u32,
        config: &Config,
        opts: &PrimePowerOptions,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("precision exponent must be at least 1"));
        }
        if n > config.caps.max_n {
            return Err(cap(
                "precision exponent",
                n as u64,
                config.caps.max_n as u64,
            ));
        }
        let (ld, descriptor, ext, candidates) =
            omega_candidates(p, r, k, opts.aux_modulus.as_ref(), config)?;
        let idx = opts.omega_index.unwrap_or(0);
        let omega = candidates.get(idx).cloned().ok_or_else(|| {
            Error::input(format!(
                "root index {idx} out of range: {} candidates",
                candidates.len()
            ))
        })?;
        let modulus = Modulus::new(p, n)?;
        let aux = AuxRing::new(&modulus, ext.modulus())?;
        let w = aux.teichmuller(&aux.from_fp(omega.poly())?)?;
        let order = ld.root_order(ld.l + k)?;
        let mut powers = Vec::with_capacity(order as usize);
        let mut acc = aux.one();
        for _ in 0..order {
            powers.push(acc.clone());
            acc = aux.mul(&acc, &w)?;
        }
        if acc != aux.one() {
            return Err(Error::internal("lifted root has the wrong order"));
        }
        Ok(GaussSetup {
            level: ld,
            k,
            root_order: order,
            descriptor,
            ext,
            omega,
            candidate_count: candidates.len(),
            seed: config.seed,
            aux,
            powers,
        })
    }

    pub fn aux(&self) -> &AuxRing {
        &self.aux
    }

    fn top(&self) -> u32 {
        self.level.l + self.k
    }

    /// Lift of eta_{r,K,0} moved by Frobenius^t, for K <= l + k.
    pub fn period(&self, level_k: u32, t: u64) -> Result<ZMPoly> {
        let r = self.level.r;
        let m = self.root_order;
        let sub = self.level.root_order(level_k)?;
        let scale = r.pow(self.top() - level_k);
        let frob = nt::pow_mod(self.level.p % m, t, m);
        let mut acc = self.aux.zero();
        for e in delta_exponents(r, sub)? {
            let exp = nt::mul_mod(nt::mul_mod(e, scale, m), frob, m);
            acc = acc.add(&self.powers[exp as usize])?;
        }
        Ok(acc)
    }

    /// The lifted period at the top level.
    pub fn eta_hat(&self) -> Result<ZMPoly> {
        self.period(self.top(), 0)
    }

    /// Product of x - Frob^t(eta) over the r^k conjugates.
    pub fn route_a(&self) -> Result<ZMPoly> {
        let modulus = self.aux.modulus();
        let deg = self.level.r.pow(self.k) as usize;
        let mut coeffs = vec![self.aux.one()];
        for t in 0..deg as u64 {
            let c = self.period(self.top(), t)?;
            let mut next = vec![self.aux.zero(); coeffs.len() + 1];
            for (i, a) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1].add(a)?;
                next[i] = next[i].sub(&self.aux.mul(a, &c)?)?;
            }
            coeffs = next;
        }
        let mut out = Vec::with_capacity(coeffs.len());
        for c in &coeffs {
            if !self.aux.is_scalar(c) {
                return Err(Error::internal(
                    "Frobenius orbit product has a coefficient outside Z/p^n",
                ));
            }
            out.push(c.coeff(0));
        }
        let g = ZMPoly::new(modulus, out);
        if !is_irreducible_modp(&g.to_fp())? {
            return Err(Error::internal(format!(
                "orbit product {g} is reducible mod p"
            )));
        }
        Ok(g)
    }

    /// Lift of the factor of the exact minimal polynomial mod p that vanishes
    /// at the residue of the period.
    pub fn route_b(&self) -> Result<(Option<ZMPoly>, RouteBStatus)> {
        let r = self.level.r;
        let p = self.level.p;
        let deg = nt::big_pow(r, self.top());
        if deg > BigUint::from(EXACT_MINPOLY_DEGREE_CAP) {
            return Ok((
                None,
                RouteBStatus::Skipped(format!(
                    "exact minimal polynomial of degree {deg} exceeds {EXACT_MINPOLY_DEGREE_CAP}"
                )),
            ));
        }
        let f = exact_minpoly(r, self.top())?;
        let fn_ = f.reduce(self.aux.modulus());
        let fbar = fn_.to_fp();
        let fac = factor_modp_seeded(&fbar, self.seed)?;
        let alpha = self.ext.element(&self.aux.residue(&self.eta_hat()?));
        let hits: Vec<usize> = (0..fac.factors.len())
            .filter(|&i| self.ext.eval(&fac.factors[i].0, &alpha).is_zero())
            .collect();
        if hits.len() != 1 {
            return Err(Error::internal(format!(
                "{} factors mod {p} vanish at the residue of the period",
                hits.len()
            )));
        }
        let (g, mult) = fac.factors[hits[0]].clone();
        if fac.is_squarefree() {
            let all: Vec<FpPoly> = fac.factors.iter().map(|(g, _)| g.clone()).collect();
            let (lifted, cert) = hensel_lift_factors(&fn_, &all)?;
            if !cert.verify(&fn_)? {
                return Err(Error::internal("lifting certificate does not verify"));
            }
            return Ok((Some(lifted[hits[0]].clone()), RouteBStatus::Agreed));
        }
        if mult == 1 {
            let (cof, rem) = fbar.divrem(&g);
            debug_assert!(rem.is_zero());
            let (lifted, _) = hensel_lift_factors(&fn_, &[g, cof])?;
            return Ok((Some(lifted[0].clone()), RouteBStatus::AgreedTwoFactor));
        }
        Ok((
            None,
            RouteBStatus::Skipped(format!(
                "distinguished factor {g} has multiplicity {mult} mod {p}"
            )),
        ))
    }

    /// Both routes, asserted equal.
    pub fn defining_poly(&self) -> Result<(ZMPoly, RouteBStatus)> {
        let a = self.route_a()?;
        let (b, status) = self.route_b()?;
        if let Some(b) = b {
            if a != b {
                return Err(Error::internal(format!(
                    "route disagreement: orbit product {a}, lifted factor {b}"
                )));
            }
        }
        Ok((a, status))
    }

    /// eps_t = prod_j eta_{l+j}^(c_j) for t = sum_j c_j r^(k-j).
    pub fn epsilon_elements(&self) -> Result<Vec<ZMPoly>> {
        let r = self.level.r;
        let k = self.k;
        let mut pows: Vec<Vec<ZMPoly>> = Vec::with_capacity(k as usize);
        for j in 1..=k {
            let eta = self.period(self.level.l + j, 0)?;
            let mut row = vec![self.aux.one()];
            for _ in 1..r {
                let next = self.aux.mul(row.last().unwrap(), &eta)?;
                row.push(next);
            }
            pows.push(row);
        }
        let m = r.pow(k);
        let mut out = Vec::with_capacity(m as usize);
        for t in 0..m {
            let mut e = self.aux.one();
            for j in 1..=k {
                let c = (t / r.pow(k - j)) % r;
                if c != 0 {
                    e = self.aux.mul(&e, &pows[j as usize - 1][c as usize])?;
                }
            }
            out.push(e);
        }
        Ok(out)
    }

    fn provenance(&self, status: &RouteBStatus) -> ComponentProvenance {
        let d = self.ext.degree();
        ComponentProvenance {
            r: self.level.r,
            k: self.k,
            bold_r: Some(self.level.bold_r),
            l: Some(self.level.l),
            root_order: Some(self.root_order),
            descriptor: Some(self.descriptor.0.clone()),
            aux_modulus: self.ext.modulus().coeffs().to_vec(),
            omega: Some(self.omega.digits(d)),
            route_b: status.tag(),
        }
    }
}

/// Structure constants of the basis `elems` (elems[0] = 1) inside a ring
/// whose elements have coordinates given by `coords`.
pub(crate) fn structure_constants<F, C>(
    modulus: &Arc<Modulus>,
    elems: &[ZMPoly],
    mul: F,
    coords: C,
) -> Result<Vec<BigUint>>
where
    F: Fn(&ZMPoly, &ZMPoly) -> Result<ZMPoly>,
    C: Fn(&ZMPoly) -> Vec<BigUint>,
{
    let m = elems.len();
    let columns: Vec<Vec<BigUint>> = elems.iter().map(&coords).collect();
    let mut pairs = Vec::with_capacity(m * (m + 1) / 2);
    let mut rhs = Vec::with_capacity(m * (m + 1) / 2);
    for a in 0..m {
        for b in a..m {
            pairs.push((a, b));
            rhs.push(coords(&mul(&elems[a], &elems[b])?));
        }
    }
    let sol = solve_columns(modulus, &columns, &rhs)
        .map_err(|e| Error::internal(format!("basis change is singular: {e:?}")))?;
    let mut out = vec![BigUint::zero(); m * m * m];
    for ((a, b), x) in pairs.into_iter().zip(sol) {
        for (k, c) in x.into_iter().enumerate() {
            out[(a * m + b) * m + k] = c.clone();
            out[(b * m + a) * m + k] = c;
        }
    }
    Ok(out)
}

fn unit(m: usize, i: usize) -> Vec<BigUint> {
    let mut v = vec![BigUint::zero(); m];
    v[i] = BigUint::one();
    v
}

/// The rank r^k model (r != p) on its product basis of lifted periods.
pub fn prime_power_model(
    p: u64,
    n: u32,
    r: u64,
    k: u32,
    config: &Config,
    opts: &PrimePowerOptions,
) -> Result<ExplicitModel> {
    if r == p {
        return p_part_model(p, n, k, config);
    }
    if k == 0 {
        return Err(Error::input("rank exponent must be at least 1"));
    }
    let setup = GaussSetup::new(p, n, r, k, config, opts)?;
    let (g, status) = setup.defining_poly()?;
    let elems = setup.epsilon_elements()?;
    let aux = setup.aux();
    let constants = structure_constants(
        aux.modulus(),
        &elems,
        |a, b| aux.mul(a, b),
        |a| aux.coords(a),
    )?;
    let m = elems.len();
    ExplicitModel::new(
        aux.modulus(),
        (0..m as u64).map(|t| label(t, m as u64)).collect(),
        constants,
        Some(g),
        Some(unit(m, 1)),
        Provenance {
            route: "frobenius-orbit".into(),
            r_components: vec![setup.provenance(&status)],
            seed: config.seed,
            version: VERSION.into(),
        },
    )
}

/// Defining polynomial of the rank r^k model, k >= 0; k = 0 gives the
/// linear polynomial of the lifted period at the base level.
pub fn defining_polynomial(p: u64, n: u32, r: u64, k: u32, config: &Config) -> Result<ZMPoly> {
    if r == p {
        return crate::artin_schreier::galois_ring_p_tower(p, n, k);
    }
    let setup = GaussSetup::new(p, n, r, k, config, &PrimePowerOptions::default())?;
    Ok(setup.defining_poly()?.0)
}

/// Newton lift of the simple root `start` of `f` in `ring`.
fn lift_root(ring: &AuxRing, f: &ZMPoly, start: ZMPoly) -> Result<ZMPoly> {
    let df = f.derivative();
    let mut y = start;
    for _ in 0..=(32 - ring.modulus().exponent().leading_zeros()) + 1 {
        let fy = ring.eval(f, &y)?;
        if ring.is_zero(&fy) {
            return Ok(y);
        }
        let step = ring.mul(&fy, &ring.inv(&ring.eval(&df, &y)?)?)?;
        y = y.sub(&step)?;
    }
    if ring.is_zero(&ring.eval(f, &y)?) {
        return Ok(y);
    }
    Err(Error::internal(
        "Newton lift of a tower generator did not converge",
    ))
}

/// The rank p^k model on the basis prod_j beta_j^(c_j), where beta_j is the
/// lift of the level-j tower generator.
pub fn p_part_model(p: u64, n: u32, k: u32, config: &Config) -> Result<ExplicitModel> {
    if n == 0 {
        return Err(Error::input("precision exponent must be at least 1"));
    }
    if n > config.caps.max_n {
        return Err(cap(
            "precision exponent",
            n as u64,
            config.caps.max_n as u64,
        ));
    }
    if k == 0 {
        return Err(Error::input("rank exponent must be at least 1"));
    }
    let levels = as_tower(p, k)?;
    let gens = embedded_generators(&levels);
    let modulus = Modulus::new(p, n)?;
    let top = &levels[k as usize].g;
    let gk = ZMPoly::from_fp(&modulus, top)?;
    let ring = AuxRing::from_poly(gk.clone())?;
    let mut betas = Vec::with_capacity(k as usize);
    for j in 1..=k as usize {
        let b = if j == k as usize {
            ring.from_fp(&FpPoly::x(p))?
        } else {
            let gj = ZMPoly::from_fp(&modulus, &levels[j].g)?;
            lift_root(&ring, &gj, ring.from_fp(&gens[j])?)?
        };
        betas.push(b);
    }
    let m = p.pow(k);
    let mut elems = Vec::with_capacity(m as usize);
    for t in 0..m {
        let mut e = ring.one();
        for j in 1..=k {
            let c = (t / p.pow(k - j)) % p;
            for _ in 0..c {
                e = ring.mul(&e, &betas[j as usize - 1])?;
            }
        }
        elems.push(e);
    }
    let constants =
        structure_constants(&modulus, &elems, |a, b| ring.mul(a, b), |a| ring.coords(a))?;
    let mu = m as usize;
    ExplicitModel::new(
        &modulus,
        (0..m).map(|t| label(t, m)).collect(),
        constants,
        Some(gk),
        Some(unit(mu, 1)),
        Provenance {
            route: "artin-schreier".into(),
            r_components: vec![ComponentProvenance {
                r: p,
                k,
                bold_r: None,
                l: None,
                root_order: None,
                descriptor: None,
                aux_modulus: top.coeffs().to_vec(),
                omega: None,
                route_b: "not applicable".into(),
            }],
            seed: config.seed,
            version: VERSION.into(),
        },
    )
}
