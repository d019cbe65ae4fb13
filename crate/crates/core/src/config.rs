//! Resource caps and the seed threaded through every construction.

use serde::{Deserialize, Serialize};

use crate::ff::DEFAULT_SEED;

/// Largest degree for which the exact minimal polynomial of a Gauss period
/// is formed (the cross-check route).
pub const EXACT_MINPOLY_DEGREE_CAP: u64 = 243;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Caps {
    /// Rank of the ring.
    pub max_m: u64,
    /// Degree of the auxiliary residue field.
    pub max_d: u64,
    /// Precision exponent.
    pub max_n: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_m: 243,
            max_d: 512,
            max_n: 16,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Config {
    pub caps: Caps,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            caps: Caps::default(),
            seed: DEFAULT_SEED,
        }
    }
}
