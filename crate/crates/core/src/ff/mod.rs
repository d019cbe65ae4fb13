//! Finite fields: F_p polynomials, factorization, irreducibility and
//! explicit extensions.

mod ext;
mod factor;
mod fppoly;
mod irreducible;

pub use ext::{
    canonical_extension, element_of_order, monic_polynomials, roots_in_field, FFElement, FFExt,
};
pub use factor::{
    distinct_degree, factor_modp, factor_modp_seeded, squarefree_decomposition, Factorization,
    DEFAULT_SEED,
};
pub use fppoly::FpPoly;
pub use irreducible::is_irreducible_modp;
