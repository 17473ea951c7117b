//! Exact value ring: big rationals, sparse polynomials in `{g, t, q, E, τ_n}`
//! and truncated Laurent series in ε over them.

mod json;
mod laurent;
mod poly;

pub use json::{EpsLaurentJson, TermJson};
pub use laurent::{DiffVar, EpsLaurent, ExpLegend};
pub use poly::{Monomial, PolyExpr, Var};

use num_bigint::BigInt;
use num_traits::Zero;

/// Exact rationals, always in lowest terms with a positive denominator.
pub type Q = num_rational::BigRational;

/// Parses `p`, `-p` or `p/q` with decimal integers.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Q::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse_and_reduce() {
        assert_eq!(parse_rational("2/4"), Some(Q::new(1.into(), 2.into())));
        assert_eq!(parse_rational("-3"), Some(Q::from_integer((-3).into())));
        assert_eq!(parse_rational("1/-2"), Some(Q::new((-1).into(), 2.into())));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
