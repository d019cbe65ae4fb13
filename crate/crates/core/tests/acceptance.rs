//! Acceptance suite: one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use stdgr::ff::{canonical_extension, is_irreducible_modp, monic_polynomials};
use stdgr::galois_ring::{
    omega_candidates, prime_power_model, standard_model, verify_model, ExplicitModel, GaussSetup,
    PrimePowerOptions, RouteBStatus,
};
use stdgr::gauss::{enumerate_ideal_descriptors, IdealDescriptor};
use stdgr::tables::cmd_table;
use stdgr::Config;

type Outcome = Result<String, String>;

fn squash(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn expect_eq(what: &str, got: &str, want: &str) -> Result<(), String> {
    if squash(got) == squash(want) {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, want {want}"))
    }
}

const SEVENTEEN_THREE: [[&str; 3]; 4] = [
    ["x+10", "x+214", "x+1659"],
    ["x^3+14x+10", "x^3+286x+214", "x^3+4910x+1659"],
    [
        "x^9+8x^7+10x^5+4x^3+9x+10",
        "x^9+280x^7+27x^5+259x^3+9x+214",
        "x^9+4904x^7+27x^5+4883x^3+9x+1659",
    ],
    [
        "x^27+7x^25+x^23+x^21+8x^19+15x^17+16x^7+7x^5+3x^3+7x+10",
        "x^27+262x^25+35x^23+35x^21+280x^19+49x^17+119x^15+255x^13+187x^11+187x^9+254x^7+143x^5+241x^3+262x+214",
        "x^27+4886x^25+324x^23+2636x^21+569x^19+2072x^17+986x^15+3434x^13+4233x^11+765x^9+1410x^7+2455x^5+819x^3+4886x+1659",
    ],
];

const SEVENTEEN_THREE_PADIC: [&str; 4] = [
    "x+907573721136",
    "x^3-3x+907573721136",
    "x^9-9x^7+27x^5-30x^3+9x+907573721136",
    // the printed source has -907573721136 here; every other row and the
    // closed form (an odd polynomial minus the base period) give +
    "x^27-27x^25+324x^23-2277x^21+10395x^19-32319x^17+69768x^15-104652x^13+107406x^11-72930x^9+30888x^7-7371x^5+819x^3-27x+907573721136",
];

const SEVEN_FIVE: [[&str; 4]; 3] = [
    ["x+6", "x+27", "x+223", "x + 89288611"],
    [
        "x^5+4x^3+3x^2+2x+6",
        "x^5 +39x^3 +10x^2 + 23x +27",
        "x^5 + 333x^3 +108x^2 + 121x +223",
        "x^5 - 10x^3 - 118986592x^2 - 70930221x + 89288611",
    ],
    [
        "x^25 + 6x^23 + 3x^21 + 6x^19 + 3x^18 + 4x^17 + 4x^16 + 5x^15 + 2x^14
        + 3x^13 + 2x^12 + 2x^11 + 6x^9 + 2x^8 + 5x^7 + 4x^6 + 6x^5 + x^4
        + 2x^3 + 5x^2 + 2x + 6",
        "x^25 + 48x^23 + 45x^21 + 20x^19 + 31x^18 + 18x^17 + 25x^16 + 5x^15 +
        30x^14 + 17x^13 + 2x^12 + 44x^11 + 35x^10 + 13x^9 + 30x^8 +
        26x^7 + 4x^6 + 41x^5 + 36x^4 + 9x^3 + 12x^2 + 44x + 27",
        "x^25 + 293x^23 + 339x^21 + 69x^19 + 178x^18 + 214x^17 + 319x^16 +
        152x^15 + 275x^14 + 311x^13 + 296x^12 + 142x^11 + 280x^10 +
        258x^9 + 324x^8 + 222x^7 + 102x^6 + 237x^5 + 183x^4 + 205x^3 +
        12x^2 + 289x + 223",
        "x^25 - 50x^23 + 1025x^21 - 11250x^19 - 110679405x^18 - 27514217x^17 -
        79903246x^16 + 137649825x^15 + 16072226x^14 + 132000431x^13 -
        25843382x^12 + 50890709x^11 - 7926107x^10 - 125486292x^9 -
        71853031x^8 - 57656706x^7 + 113389042x^6 - 40325244x^5 -
        101821768x^4 - 8793629x^3 + 63002252x^2 + 38678341x + 89288611",
    ],
];

const THREE_THREE: [&str; 3] = [
    "x^3+2x^2+2x+2",
    "x^9+2x^8+x^7+x^5+x^3+2x+2",
    "x^27+2x^26+2x^24+x^23+2x^22+2x^21+2x^18+x^16+x^15+2x^14+2x^13+2x^12+x^10+2x^9+x^8+x^7+x^6+2x^5+x^3+x^2+2x+2",
];

fn seventeen_grid() -> Outcome {
    let cfg = Config::default();
    let t = cmd_table(17, 3, 3, 3, None, &cfg).map_err(|e| e.to_string())?;
    for (row, want) in t.rows.iter().zip(SEVENTEEN_THREE) {
        for (n, (got, w)) in row.cells.iter().zip(want).enumerate() {
            expect_eq(&format!("k={} n={}", row.k, n + 1), got, w)?;
        }
    }
    Ok("12 entries, k=0..3 and n=1..3".into())
}

fn seventeen_padic() -> Outcome {
    let cfg = Config::default();
    for k in 0..4u32 {
        let f = stdgr::galois_ring::defining_polynomial(17, 10, 3, k, &cfg)
            .map_err(|e| e.to_string())?;
        let got = f.render_balanced();
        expect_eq(&format!("k={k}"), &got, SEVENTEEN_THREE_PADIC[k as usize])?;
        let c = f.modulus().balanced(&f.coeff(0));
        if c.to_string() != "907573721136" {
            return Err(format!("k={k}: constant term {c}"));
        }
    }
    Ok("constant 907573721136 in rows k=0..3".into())
}

fn seven_grid() -> Outcome {
    let cfg = Config::default();
    let t = cmd_table(7, 5, 2, 3, Some(10), &cfg).map_err(|e| e.to_string())?;
    for (row, want) in t.rows.iter().zip(SEVEN_FIVE) {
        let mut cells = row.cells.clone();
        cells.push(row.padic.clone().unwrap_or_default());
        for (col, (got, w)) in cells.iter().zip(want).enumerate() {
            let name = if col == 3 {
                "padic".to_string()
            } else {
                format!("n={}", col + 1)
            };
            expect_eq(&format!("k={} {name}", row.k), got, w)?;
        }
    }
    Ok("rows k=0..2, n=1..3 and precision 7^10".into())
}

fn three_three() -> Outcome {
    let t = cmd_table(3, 3, 3, 1, None, &Config::default()).map_err(|e| e.to_string())?;
    for (row, want) in t.rows.iter().zip(THREE_THREE) {
        expect_eq(&format!("k={}", row.k), &row.cells[0], want)?;
    }
    if t.rows.len() != 3 {
        return Err(format!("{} rows", t.rows.len()));
    }
    Ok("k=1..3".into())
}

fn routes_agree() -> Outcome {
    let cfg = Config::default();
    let mut cases = Vec::new();
    for n in 1..=3 {
        for k in 0..=2 {
            cases.push((17u64, n, 3u64, k));
        }
        cases.push((7, n, 5, 1));
    }
    for n in 1..=4 {
        cases.push((2, n, 3, 1));
    }
    let mut compared = 0;
    for &(p, n, r, k) in &cases {
        let s = GaussSetup::new(p, n, r, k, &cfg, &PrimePowerOptions::default())
            .map_err(|e| e.to_string())?;
        let a = s.route_a().map_err(|e| e.to_string())?;
        let (b, status) = s.route_b().map_err(|e| e.to_string())?;
        match (b, status) {
            (Some(b), _) if b == a => compared += 1,
            (Some(b), _) => return Err(format!("({p},{n},{r},{k}): {a} vs {b}")),
            (None, RouteBStatus::Skipped(why)) => {
                return Err(format!("({p},{n},{r},{k}): cross-check unavailable: {why}"))
            }
            (None, _) => return Err("missing lifted factor".into()),
        }
    }
    Ok(format!("{compared} cases identical"))
}

fn descriptors() -> Outcome {
    let v = |xs: &[u64]| IdealDescriptor(xs.to_vec());
    let a = enumerate_ideal_descriptors(17, 3).map_err(|e| e.to_string())?;
    let want_a = vec![v(&[7, 14, 13]), v(&[13, 7, 14]), v(&[14, 13, 7])];
    if a != want_a {
        return Err(format!("(17,3): {a:?}"));
    }
    let b = enumerate_ideal_descriptors(7, 5).map_err(|e| e.to_string())?;
    let mut want_b = vec![
        v(&[1, 3, 5, 2, 3]),
        v(&[2, 3, 1, 3, 5]),
        v(&[3, 1, 3, 5, 2]),
        v(&[3, 5, 2, 3, 1]),
        v(&[5, 2, 3, 1, 3]),
    ];
    want_b.sort();
    if b != want_b {
        return Err(format!("(7,5): {b:?}"));
    }
    Ok("3 + 5 descriptors, minima (7,14,13) and (1,3,5,2,3)".into())
}

const GRID: [(u64, u32, u64); 24] = [
    (2, 1, 1),
    (2, 2, 2),
    (2, 3, 2),
    (2, 2, 3),
    (2, 4, 3),
    (2, 1, 4),
    (2, 2, 4),
    (2, 1, 6),
    (2, 2, 6),
    (2, 1, 8),
    (2, 1, 9),
    (2, 1, 12),
    (3, 2, 2),
    (3, 1, 3),
    (3, 2, 3),
    (3, 2, 4),
    (3, 1, 6),
    (5, 2, 2),
    (5, 2, 3),
    (5, 2, 6),
    (7, 2, 5),
    (7, 1, 12),
    (17, 2, 3),
    (17, 3, 3),
];

/// Model data that does not depend on presentation choices.
fn essence(m: &ExplicitModel) -> (Vec<String>, Vec<num_bigint::BigUint>, Option<String>) {
    (
        m.basis().to_vec(),
        m.constants().to_vec(),
        m.defining_poly().map(|f| f.to_string()),
    )
}

fn properties() -> Outcome {
    let cfg = Config::default();
    let mut exhaustive = 0;
    for &(p, n, m) in &GRID {
        let model = standard_model(p, n, m, &cfg).map_err(|e| format!("({p},{n},{m}): {e}"))?;
        let rep = verify_model(&model);
        if !rep.passed() {
            let bad: Vec<_> = rep.checks.iter().filter(|c| !c.passed).collect();
            return Err(format!("({p},{n},{m}): {bad:?}"));
        }
        let small = (p as f64).powi((n as u64 * m) as i32) <= 65536.0;
        if small != rep.check("unit count").is_some() {
            return Err(format!("({p},{n},{m}): unit enumeration coverage"));
        }
        exhaustive += usize::from(small);
        for lower in 1..n {
            let direct = standard_model(p, lower, m, &cfg).map_err(|e| e.to_string())?;
            let reduced = model.reduce_precision(lower).map_err(|e| e.to_string())?;
            if direct != reduced {
                return Err(format!("({p},{n},{m}): precision coherence at {lower}"));
            }
        }
        let field = standard_model(p, 1, m, &cfg).map_err(|e| e.to_string())?;
        if model.residue_field_model().map_err(|e| e.to_string())? != field {
            return Err(format!("({p},{n},{m}): residue coherence"));
        }
    }
    for (p, n, r, k) in [(17u64, 2u32, 3u64, 1u32), (7, 2, 5, 1)] {
        let base = prime_power_model(p, n, r, k, &cfg, &PrimePowerOptions::default())
            .map_err(|e| e.to_string())?;
        let (_, _, ext, cands) =
            omega_candidates(p, r, k, None, &cfg).map_err(|e| e.to_string())?;
        for i in 1..cands.len() {
            let opts = PrimePowerOptions {
                omega_index: Some(i),
                ..Default::default()
            };
            let other = prime_power_model(p, n, r, k, &cfg, &opts).map_err(|e| e.to_string())?;
            if essence(&other) != essence(&base) {
                return Err(format!("({p},{n},{r},{k}): root {i} changes the model"));
            }
        }
        let d = ext.degree();
        let alt = monic_polynomials(p, d).find(|h| h != ext.modulus() && is_irreducible_modp(h).unwrap_or(false))
            .ok_or("no second irreducible")?;
        let opts = PrimePowerOptions {
            aux_modulus: Some(alt),
            ..Default::default()
        };
        let other = prime_power_model(p, n, r, k, &cfg, &opts).map_err(|e| e.to_string())?;
        if essence(&other) != essence(&base) {
            return Err(format!(
                "({p},{n},{r},{k}): auxiliary modulus changes the model"
            ));
        }
        let _ = canonical_extension(p, d);
    }
    Ok(format!(
        "{} triples verified, {exhaustive} by exhaustive unit count; root and field independence",
        GRID.len()
    ))
}

// ---- brute-force oracle over small rings, plain integer arithmetic ----

fn poly_mulmod(a: &[i64], b: &[i64], f: &[i64], q: i64) -> Vec<i64> {
    let m = f.len() - 1;
    let mut prod = vec![0i64; 2 * m];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % q;
        }
    }
    for d in (m..2 * m).rev() {
        let c = prod[d];
        if c != 0 {
            for i in 0..=m {
                let at = d - m + i;
                prod[at] = (prod[at] - c * f[i]).rem_euclid(q);
            }
        }
    }
    prod.truncate(m);
    prod
}

fn irreducible_brute(f: &[i64], p: i64) -> bool {
    // no monic factor of degree 1..=deg/2 over F_p
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut g = vec![0i64; d + 1];
            let mut x = idx;
            for c in g.iter_mut().take(d) {
                *c = x % p;
                x /= p;
            }
            g[d] = 1;
            let mut r: Vec<i64> = f.iter().map(|c| c.rem_euclid(p)).collect();
            while r.len() > d {
                let lead = *r.last().unwrap();
                let shift = r.len() - 1 - d;
                for i in 0..=d {
                    r[shift + i] = (r[shift + i] - lead * g[i]).rem_euclid(p);
                }
                r.pop();
            }
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn det_mod_p(mut a: Vec<Vec<i64>>, p: i64) -> i64 {
    let n = a.len();
    let mut det = 1;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r][col].rem_euclid(p) != 0) else {
            return 0;
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det = (det * a[col][col]).rem_euclid(p);
        let inv = (1..p)
            .find(|&x| (x * a[col][col]).rem_euclid(p) == 1)
            .unwrap();
        for r in col + 1..n {
            let f = (a[r][col] * inv).rem_euclid(p);
            for c in col..n {
                a[r][c] = (a[r][c] - f * a[col][c]).rem_euclid(p);
            }
        }
    }
    det
}

fn oracle(p: u64, n: u32, m: usize) -> Result<String, String> {
    let model = standard_model(p, n, m as u64, &Config::default()).map_err(|e| e.to_string())?;
    let q = (p as i64).pow(n);
    let pi = p as i64;
    let consts: Vec<i64> = model
        .constants()
        .iter()
        .map(|c| c.to_i64().unwrap())
        .collect();
    let mmul = |u: &[i64], v: &[i64]| -> Vec<i64> {
        let mut w = vec![0i64; m];
        for i in 0..m {
            for j in 0..m {
                for (k, slot) in w.iter_mut().enumerate() {
                    *slot = (*slot + u[i] * v[j] % q * consts[(i * m + j) * m + k]) % q;
                }
            }
        }
        w
    };
    let elements: Vec<Vec<i64>> = (0..q.pow(m as u32))
        .map(|mut x| {
            (0..m)
                .map(|_| {
                    let c = x % q;
                    x /= q;
                    c
                })
                .collect()
        })
        .collect();
    let mut one = vec![0i64; m];
    one[0] = 1;
    let mut polys = 0;
    for idx in 0..q.pow(m as u32) {
        let mut f: Vec<i64> = (0..m)
            .scan(idx, |x, _| {
                let c = *x % q;
                *x /= q;
                Some(c)
            })
            .collect();
        f.push(1);
        if !irreducible_brute(&f, pi) {
            continue;
        }
        polys += 1;
        // images y of x with f(y) = 0 and 1, y, ..., y^(m-1) a basis
        let image = elements.iter().find(|y| {
            let mut acc = vec![0i64; m];
            for &c in f.iter().rev() {
                acc = mmul(&acc, y);
                acc[0] = (acc[0] + c) % q;
            }
            if acc.iter().any(|&c| c != 0) {
                return false;
            }
            let mut powers = vec![one.clone()];
            for _ in 1..m {
                powers.push(mmul(powers.last().unwrap(), y));
            }
            det_mod_p(powers, pi) != 0
        });
        let Some(y) = image else {
            return Err(format!("no image of x for f = {f:?}"));
        };
        // phi(a) = sum a_i y^i; check phi(ab) = phi(a) phi(b) for all pairs
        let mut powers = vec![one.clone()];
        for _ in 1..m {
            powers.push(mmul(powers.last().unwrap(), y));
        }
        let phi = |a: &[i64]| -> Vec<i64> {
            let mut out = vec![0i64; m];
            for (i, &c) in a.iter().enumerate() {
                for k in 0..m {
                    out[k] = (out[k] + c * powers[i][k]) % q;
                }
            }
            out
        };
        for a in &elements {
            for b in &elements {
                if phi(&poly_mulmod(a, b, &f, q)) != mmul(&phi(a), &phi(b)) {
                    return Err(format!("map for f = {f:?} is not multiplicative"));
                }
            }
        }
    }
    if polys == 0 {
        return Err("no basic irreducible polynomials".into());
    }
    Ok(format!(
        "GR({}^{n},{m}): {polys} quotient rings isomorphic",
        p
    ))
}

fn brute_force() -> Outcome {
    let mut notes = Vec::new();
    for (p, n, m) in [(2u64, 2u32, 2usize), (2, 2, 3), (3, 2, 2)] {
        notes.push(oracle(p, n, m)?);
    }
    Ok(notes.join("; "))
}

fn main() {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 8] = [
        (1, "rank 3^k over Z/17^n golden grid", 60, seventeen_grid),
        (
            2,
            "rank 3^k over the 17-adics, precision 17^10",
            10,
            seventeen_padic,
        ),
        (3, "rank 5^k over Z/7^n golden grid", 300, seven_grid),
        (4, "rank 3^k over Z/3^n golden row", 30, three_three),
        (5, "orbit product equals lifted factor", 300, routes_agree),
        (6, "prime descriptors", 10, descriptors),
        (7, "model invariants and coherence", 600, properties),
        (8, "brute-force isomorphism oracle", 300, brute_force),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(note) if elapsed > Duration::from_secs(budget) => {
                Err(format!("{note}; took {elapsed:.1?}, budget {budget}s"))
            }
            other => other,
        };
        match outcome {
            Ok(note) => println!("PASS {id} {name} ({elapsed:.1?}): {note}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id} {name} ({elapsed:.1?}): {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
