//! Grids of defining polynomials by rank exponent and precision.

use serde::Serialize;

use crate::config::Config;
use crate::error::Result;
use crate::galois_ring::defining_polynomial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub k: u32,
    /// Entries for n = 1..=n_max.
    pub cells: Vec<String>,
    /// The polynomial at the extra precision, balanced representatives.
    pub padic: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub p: u64,
    pub r: u64,
    pub n_max: u32,
    pub precision: Option<u32>,
    pub rows: Vec<TableRow>,
}

/// Rows k = k_min..=k_max; the Artin-Schreier grid (r = p) starts at 1.
pub fn cmd_table(
    p: u64,
    r: u64,
    k_max: u32,
    n_max: u32,
    precision: Option<u32>,
    config: &Config,
) -> Result<Table> {
    let k_min = u32::from(r == p);
    let mut rows = Vec::new();
    for k in k_min..=k_max {
        let cells = (1..=n_max)
            .map(|n| defining_polynomial(p, n, r, k, config).map(|f| f.to_string()))
            .collect::<Result<Vec<_>>>()?;
        let padic = precision
            .map(|big| defining_polynomial(p, big, r, k, config).map(|f| f.render_balanced()))
            .transpose()?;
        rows.push(TableRow { k, cells, padic });
    }
    Ok(Table {
        p,
        r,
        n_max,
        precision,
        rows,
    })
}

impl Table {
    /// One line per row, cells separated by " | ".
    pub fn render(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let mut cells = row.cells.clone();
            if let Some(z) = &row.padic {
                cells.push(z.clone());
            }
            out.push_str(&format!("k={}: {}\n", row.k, cells.join(" | ")));
        }
        out
    }
}
