//! Gaussian elimination over Z/p^N restricted to unit pivots.

use std::fmt::Debug;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::modulus::Modulus;
use super::nt;
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// No unit pivot exists in this column: the columns are dependent mod p.
    Singular { column: usize },
    /// A right-hand side does not lie in the column span.
    Inconsistent { rhs: usize },
}

impl From<SolveError> for Error {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Singular { column } => {
                Error::internal(format!("singular change of basis at column {column}"))
            }
            SolveError::Inconsistent { rhs } => {
                Error::internal(format!("vector {rhs} is outside the column span"))
            }
        }
    }
}

trait Ring {
    type E: Clone + PartialEq + Debug;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Option<Self::E>;
    fn is_zero(&self, a: &Self::E) -> bool;
}

struct Small {
    m: u64,
}

impl Ring for Small {
    type E = u64;
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        nt::mul_mod(*a, *b, self.m)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        nt::inv_mod(*a, self.m)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

struct Big<'a> {
    m: &'a Modulus,
}

impl Ring for Big<'_> {
    type E = BigUint;
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        self.m.sub(a, b)
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        self.m.mul(a, b)
    }
    fn inv(&self, a: &BigUint) -> Option<BigUint> {
        self.m.inv(a)
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
}

/// Row-major Gauss-Jordan on `[A | B]` where `A` has `ncols` columns.
fn eliminate<R: Ring>(
    ring: &R,
    mut rows: Vec<Vec<R::E>>,
    ncols: usize,
    nrhs: usize,
) -> Result<Vec<Vec<R::E>>, SolveError> {
    let nrows = rows.len();
    let mut pivot_row = 0;
    for col in 0..ncols {
        let found = (pivot_row..nrows).find_map(|i| ring.inv(&rows[i][col]).map(|inv| (i, inv)));
        let Some((i, inv)) = found else {
            return Err(SolveError::Singular { column: col });
        };
        rows.swap(pivot_row, i);
        for v in rows[pivot_row].iter_mut().skip(col) {
            *v = ring.mul(v, &inv);
        }
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == pivot_row || ring.is_zero(&row[col]) {
                continue;
            }
            let f = row[col].clone();
            for (c, v) in row.iter_mut().enumerate().skip(col) {
                if !ring.is_zero(&pivot[c]) {
                    *v = ring.sub(v, &ring.mul(&f, &pivot[c]));
                }
            }
        }
        pivot_row += 1;
    }
    for row in &rows[ncols..] {
        if let Some(k) = (0..nrhs).find(|&k| !ring.is_zero(&row[ncols + k])) {
            return Err(SolveError::Inconsistent { rhs: k });
        }
    }
    Ok((0..nrhs)
        .map(|k| (0..ncols).map(|c| rows[c][ncols + k].clone()).collect())
        .collect())
}

fn build_rows<T: Clone>(columns: &[Vec<T>], rhs: &[Vec<T>], zero: T) -> Vec<Vec<T>> {
    let nrows = columns.iter().chain(rhs).map(Vec::len).max().unwrap_or(0);
    (0..nrows)
        .map(|r| {
            columns
                .iter()
                .chain(rhs)
                .map(|c| c.get(r).cloned().unwrap_or_else(|| zero.clone()))
                .collect()
        })
        .collect()
}

/// Solves `A x_k = b_k` for every right-hand side, where `A` is given by its
/// columns (each a coordinate vector). `A` must have full column rank with
/// unit pivots, i.e. its columns are independent modulo p.
pub fn solve_columns(
    modulus: &Arc<Modulus>,
    columns: &[Vec<BigUint>],
    rhs: &[Vec<BigUint>],
) -> Result<Vec<Vec<BigUint>>, SolveError> {
    let ncols = columns.len();
    if let Some(m) = modulus.small() {
        let conv = |v: &Vec<BigUint>| -> Vec<u64> {
            v.iter().map(|c| (c % m).to_u64().unwrap()).collect()
        };
        let cols: Vec<Vec<u64>> = columns.iter().map(conv).collect();
        let rs: Vec<Vec<u64>> = rhs.iter().map(conv).collect();
        let rows = build_rows(&cols, &rs, 0u64);
        let sol = eliminate(&Small { m }, rows, ncols, rhs.len())?;
        return Ok(sol
            .into_iter()
            .map(|v| v.into_iter().map(BigUint::from).collect())
            .collect());
    }
    let reduce =
        |v: &Vec<BigUint>| -> Vec<BigUint> { v.iter().map(|c| modulus.reduce(c)).collect() };
    let cols: Vec<Vec<BigUint>> = columns.iter().map(reduce).collect();
    let rs: Vec<Vec<BigUint>> = rhs.iter().map(reduce).collect();
    let rows = build_rows(&cols, &rs, BigUint::zero());
    eliminate(&Big { m: modulus }, rows, ncols, rhs.len())
}

/// True when the given vectors are linearly independent modulo p.
pub fn independent_mod_p(modulus: &Arc<Modulus>, columns: &[Vec<BigUint>]) -> bool {
    let p = Modulus::new(modulus.prime(), 1).expect("prime");
    let pb = BigUint::from(modulus.prime());
    let reduced: Vec<Vec<BigUint>> = columns
        .iter()
        .map(|c| c.iter().map(|x| x % &pb).collect())
        .collect();
    solve_columns(&p, &reduced, &[]).is_ok()
}
