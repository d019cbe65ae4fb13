//! Text rendering of polynomials in the table style: `x^3+286x+214`.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

/// Renders ascending coefficients as a polynomial in `x`, highest degree first.
///
/// Unit coefficients are elided on non-constant monomials, zero terms are
/// skipped and there are no spaces around the signs.
pub fn render_signed(coeffs: &[BigInt]) -> String {
    let mut out = String::new();
    for (deg, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.sign() == Sign::Minus;
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let mag = c.abs();
        if deg == 0 || !mag.is_one() {
            out.push_str(&mag.to_string());
        }
        match deg {
            0 => {}
            1 => out.push('x'),
            _ => {
                out.push_str("x^");
                out.push_str(&deg.to_string());
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn render_unsigned<T>(coeffs: &[T]) -> String
where
    T: Clone + Into<BigInt>,
{
    let signed: Vec<BigInt> = coeffs.iter().cloned().map(Into::into).collect();
    render_signed(&signed)
}
