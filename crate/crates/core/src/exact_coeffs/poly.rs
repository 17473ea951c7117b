//! Sparse polynomials over Q in the formal variables of the value ring.
//!
//! Variable legend:
//! - `g = e^x`, the coupling; `∂_x` acts as the Euler operator `g ∂_g`.
//! - `t = log μ`, the unit mass.
//! - `q = e^{-t}`, bookkeeping for large-t limits. Negative powers are legal
//!   but only meaningful inside limit computations.
//! - `E = e^{L}` where `L` is fixed by an [`ExpLegend`](super::ExpLegend)
//!   (`L = εt` at unit mass). Negative powers appear only for group inverses.
//! - `τ_n`, the hierarchy times.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    G,
    T,
    Q,
    E,
    /// Hierarchy time `τ_n`, `n ≥ 1`.
    Tau(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::G => write!(f, "g"),
            Var::T => write!(f, "t"),
            Var::Q => write!(f, "q"),
            Var::E => write!(f, "E"),
            Var::Tau(n) => write!(f, "tau{n}"),
        }
    }
}

/// Exponent vector over `{g, t, q, E, τ_1 … τ_K}`.
///
/// `tau` never has trailing zeros, so equal monomials compare equal
/// regardless of how many hierarchy times were ever in play.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    g: u32,
    t: u32,
    q: i32,
    e: i32,
    tau: Vec<u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        Self::one().with_exp(v, 1)
    }

    pub fn exp(&self, v: Var) -> i64 {
        match v {
            Var::G => self.g as i64,
            Var::T => self.t as i64,
            Var::Q => self.q as i64,
            Var::E => self.e as i64,
            Var::Tau(n) => {
                assert!(n >= 1, "hierarchy times are numbered from 1");
                self.tau.get(n - 1).copied().unwrap_or(0) as i64
            }
        }
    }

    pub fn tau_exps(&self) -> &[u32] {
        &self.tau
    }

    /// Replaces the exponent of `v`. Panics on a negative exponent for a
    /// variable that only admits non-negative powers.
    pub fn with_exp(mut self, v: Var, k: i64) -> Self {
        let nonneg = |k: i64| -> u32 {
            assert!(k >= 0, "negative exponent {k} for {v}");
            u32::try_from(k).expect("exponent overflow")
        };
        match v {
            Var::G => self.g = nonneg(k),
            Var::T => self.t = nonneg(k),
            Var::Q => self.q = i32::try_from(k).expect("exponent overflow"),
            Var::E => self.e = i32::try_from(k).expect("exponent overflow"),
            Var::Tau(n) => {
                assert!(n >= 1, "hierarchy times are numbered from 1");
                let k = nonneg(k);
                if self.tau.len() < n {
                    self.tau.resize(n, 0);
                }
                self.tau[n - 1] = k;
                while self.tau.last() == Some(&0) {
                    self.tau.pop();
                }
            }
        }
        self
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.tau.len().max(other.tau.len());
        let mut tau: Vec<u32> = (0..len)
            .map(|i| self.tau.get(i).unwrap_or(&0) + other.tau.get(i).unwrap_or(&0))
            .collect();
        while tau.last() == Some(&0) {
            tau.pop();
        }
        Monomial {
            g: self.g + other.g,
            t: self.t + other.t,
            q: self.q + other.q,
            e: self.e + other.e,
            tau,
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Total degree in the non-unit variables `g`, `t`, `τ`.
    pub fn is_unit(&self) -> bool {
        self.g == 0 && self.t == 0 && self.tau.is_empty()
    }

    fn vars(&self) -> Vec<(Var, i64)> {
        let mut out = Vec::new();
        for v in [Var::G, Var::T, Var::Q, Var::E] {
            let k = self.exp(v);
            if k != 0 {
                out.push((v, k));
            }
        }
        for (i, &k) in self.tau.iter().enumerate() {
            if k != 0 {
                out.push((Var::Tau(i + 1), k as i64));
            }
        }
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.vars();
        if vars.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, k)) in vars.into_iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if k == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{k}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial with exact rational coefficients. Zero coefficients
/// are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PolyExpr {
    terms: BTreeMap<Monomial, Q>,
}

impl PolyExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Q::from_integer(n.into()))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Q::one(), Monomial::var(v))
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    /// The single term of a one-term polynomial.
    pub fn as_single_term(&self) -> Option<(&Monomial, &Q)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.is_zero() {
            return Some(Q::zero());
        }
        match self.as_single_term() {
            Some((m, c)) if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) != 0)
    }

    pub fn min_exp(&self, v: Var) -> Option<i64> {
        self.terms.keys().map(|m| m.exp(v)).min()
    }

    pub fn max_exp(&self, v: Var) -> Option<i64> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn scale(&self, c: &Q) -> PolyExpr {
        if c.is_zero() {
            return PolyExpr::zero();
        }
        PolyExpr {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> PolyExpr {
        PolyExpr {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    /// Rewrites every term; `f` may drop a term by returning `None`.
    pub fn map_terms<F>(&self, mut f: F) -> PolyExpr
    where
        F: FnMut(&Monomial, &Q) -> Option<(Monomial, Q)>,
    {
        let mut out = PolyExpr::zero();
        for (m, c) in &self.terms {
            if let Some((m2, c2)) = f(m, c) {
                out.add_term(m2, c2);
            }
        }
        out
    }

    /// Groups terms by the exponent of `v`, removing `v` from each group.
    pub fn split_by(&self, v: Var) -> BTreeMap<i64, PolyExpr> {
        let mut out: BTreeMap<i64, PolyExpr> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.exp(v);
            out.entry(k)
                .or_default()
                .add_term(m.clone().with_exp(v, 0), c.clone());
        }
        out
    }

    /// Ordinary partial derivative in `v`, treating all variables as independent.
    pub fn partial(&self, v: Var) -> PolyExpr {
        self.map_terms(|m, c| {
            let k = m.exp(v);
            (k != 0).then(|| (m.clone().with_exp(v, k - 1), c * Q::from_integer(k.into())))
        })
    }

    /// Multiplies each term by its exponent of `v` (the Euler operator `v ∂_v`).
    pub fn euler(&self, v: Var) -> PolyExpr {
        self.map_terms(|m, c| {
            let k = m.exp(v);
            (k != 0).then(|| (m.clone(), c * Q::from_integer(k.into())))
        })
    }

    /// Sets `v = 0`. Terms with a negative power of `v` are not allowed.
    pub fn set_zero(&self, v: Var) -> PolyExpr {
        self.map_terms(|m, c| {
            let k = m.exp(v);
            assert!(k >= 0, "cannot set {v} = 0 with negative power present");
            (k == 0).then(|| (m.clone(), c.clone()))
        })
    }

    /// Sets `v = 1`.
    pub fn set_one(&self, v: Var) -> PolyExpr {
        self.map_terms(|m, c| Some((m.clone().with_exp(v, 0), c.clone())))
    }

    /// Renames `from` to `to`; `to` must be absent.
    pub fn rename(&self, from: Var, to: Var) -> PolyExpr {
        assert!(!self.contains(to) || from == to);
        self.map_terms(|m, c| {
            let k = m.exp(from);
            Some((m.clone().with_exp(from, 0).with_exp(to, k), c.clone()))
        })
    }

    fn fmt_term(f: &mut fmt::Formatter<'_>, m: &Monomial, c: &Q, first: bool) -> fmt::Result {
        let neg = c.is_negative();
        let abs = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if m.is_one() {
            write!(f, "{abs}")
        } else if abs.is_one() {
            write!(f, "{m}")
        } else {
            write!(f, "{abs}*{m}")
        }
    }
}

impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            Self::fmt_term(f, m, c, i == 0)?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a PolyExpr> for &'a PolyExpr {
    type Output = PolyExpr;
    fn add(self, rhs: &'a PolyExpr) -> PolyExpr {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&PolyExpr> for PolyExpr {
    fn add_assign(&mut self, rhs: &PolyExpr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a> Sub<&'a PolyExpr> for &'a PolyExpr {
    type Output = PolyExpr;
    fn sub(self, rhs: &'a PolyExpr) -> PolyExpr {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &PolyExpr {
    type Output = PolyExpr;
    fn neg(self) -> PolyExpr {
        PolyExpr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl<'a> Mul<&'a PolyExpr> for &'a PolyExpr {
    type Output = PolyExpr;
    fn mul(self, rhs: &'a PolyExpr) -> PolyExpr {
        let mut out = PolyExpr::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn tau_exponents_are_trimmed() {
        let m = Monomial::var(Var::Tau(3)).with_exp(Var::Tau(3), 0);
        assert_eq!(m, Monomial::one());
        assert!(m.tau_exps().is_empty());
    }

    #[test]
    fn cancellation_removes_terms() {
        let g = PolyExpr::var(Var::G);
        let z = &g - &g;
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
    }

    #[test]
    fn product_of_binomials() {
        // (g + 1)(g - 1) = g^2 - 1
        let g = PolyExpr::var(Var::G);
        let one = PolyExpr::one();
        let p = &(&g + &one) * &(&g - &one);
        let expect = &PolyExpr::term(Q::one(), Monomial::var(Var::G).with_exp(Var::G, 2)) - &one;
        assert_eq!(p, expect);
    }

    #[test]
    fn euler_and_partial() {
        let g2 = PolyExpr::term(q(3, 2), Monomial::one().with_exp(Var::G, 2));
        assert_eq!(g2.euler(Var::G), g2.scale(&q(2, 1)));
        assert_eq!(
            g2.partial(Var::G),
            PolyExpr::term(q(3, 1), Monomial::var(Var::G))
        );
    }

    #[test]
    fn split_and_specialize() {
        let e = PolyExpr::var(Var::E);
        let p = &(&e * &e) - &PolyExpr::var(Var::G);
        let parts = p.split_by(Var::E);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&2], PolyExpr::one());
        assert_eq!(p.set_one(Var::E), &PolyExpr::one() - &PolyExpr::var(Var::G));
        assert_eq!(p.set_zero(Var::E), -&PolyExpr::var(Var::G));
    }

    #[test]
    fn display_is_readable() {
        let p =
            &PolyExpr::term(q(-1, 2), Monomial::var(Var::G).with_exp(Var::E, 2)) + &PolyExpr::one();
        assert_eq!(p.to_string(), "1 - 1/2*g*E^2");
    }
}
