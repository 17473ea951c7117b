use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{Monomial, PolyExpr, Var};
use super::Q;
use crate::error::{Error, Result};

/// Meaning of the formal exponential `E`: `E = exp(Σ ε^a · v_a)` with every
/// `a ≥ 1`. At unit mass this is `E = e^{εt}`; the hierarchy uses
/// `E = exp(Σ τ_n ε^n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpLegend {
    terms: Vec<(i32, Var)>,
}

impl ExpLegend {
    pub fn unit_mass() -> Self {
        Self {
            terms: vec![(1, Var::T)],
        }
    }

    /// `E = exp(Σ_{n ∈ times} τ_n ε^n)`.
    pub fn hierarchy<I: IntoIterator<Item = usize>>(times: I) -> Self {
        Self {
            terms: times
                .into_iter()
                .map(|n| (i32::try_from(n).expect("time index"), Var::Tau(n)))
                .collect(),
        }
    }

    pub fn terms(&self) -> &[(i32, Var)] {
        &self.terms
    }

    pub fn is_trivial(&self) -> bool {
        self.terms.is_empty()
    }

    /// Variables carrying the flow parameters of this legend.
    pub fn flow_vars(&self) -> Vec<Var> {
        self.terms.iter().map(|&(_, v)| v).collect()
    }

    /// The exponent `L` with `E = e^L`.
    pub fn exponent(&self) -> EpsLaurent {
        let mut out = EpsLaurent::zero();
        for &(a, v) in &self.terms {
            assert!(a >= 1, "E-exponent must vanish at eps = 0");
            out = &out + &EpsLaurent::monomial(PolyExpr::var(v), a);
        }
        out
    }

    /// `∂L/∂var`.
    fn d_exponent(&self, var: DiffVar) -> EpsLaurent {
        let mut out = EpsLaurent::zero();
        for &(a, v) in &self.terms {
            let piece = match var {
                DiffVar::Eps => {
                    EpsLaurent::monomial(PolyExpr::var(v).scale(&Q::from_integer(a.into())), a - 1)
                }
                DiffVar::T if v == Var::T => EpsLaurent::monomial(PolyExpr::one(), a),
                DiffVar::Tau(n) if v == Var::Tau(n) => EpsLaurent::monomial(PolyExpr::one(), a),
                _ => continue,
            };
            out = &out + &piece;
        }
        out
    }
}

/// Differentiation variables. `X` is realized as the Euler operator `g ∂_g`
/// because `g = e^x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiffVar {
    Eps,
    T,
    X,
    Tau(usize),
}

impl DiffVar {
    pub fn for_flow(v: Var) -> DiffVar {
        match v {
            Var::T => DiffVar::T,
            Var::Tau(n) => DiffVar::Tau(n),
            other => panic!("{other} is not a flow variable"),
        }
    }
}

fn min_trunc(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

/// Truncated Laurent series in ε over [`PolyExpr`].
///
/// `trunc == Some(k)` means coefficients of `ε^j` for `j > k` are unknown;
/// `None` marks an exact Laurent polynomial. No zero coefficient is stored
/// and no stored exponent exceeds `trunc`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EpsLaurent {
    coeffs: BTreeMap<i32, PolyExpr>,
    trunc: Option<i32>,
}

impl EpsLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_poly(PolyExpr::one())
    }

    pub fn zero_to(trunc: i32) -> Self {
        Self {
            coeffs: BTreeMap::new(),
            trunc: Some(trunc),
        }
    }

    pub fn from_poly(p: PolyExpr) -> Self {
        Self::monomial(p, 0)
    }

    pub fn from_rational(c: Q) -> Self {
        Self::from_poly(PolyExpr::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(PolyExpr::from_int(n))
    }

    /// `p · ε^k`, exact.
    pub fn monomial(p: PolyExpr, k: i32) -> Self {
        let mut out = Self::zero();
        out.add_at(k, &p);
        out
    }

    /// `ε^k`.
    pub fn eps_pow(k: i32) -> Self {
        Self::monomial(PolyExpr::one(), k)
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(PolyExpr::var(v))
    }

    pub fn from_coeffs<I: IntoIterator<Item = (i32, PolyExpr)>>(it: I, trunc: Option<i32>) -> Self {
        let mut out = Self {
            coeffs: BTreeMap::new(),
            trunc,
        };
        for (k, p) in it {
            out.add_at(k, &p);
        }
        out
    }

    fn add_at(&mut self, k: i32, p: &PolyExpr) {
        if p.is_zero() || self.trunc.is_some_and(|t| k > t) {
            return;
        }
        let slot = self.coeffs.entry(k).or_default();
        *slot += p;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn trunc_order(&self) -> Option<i32> {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Most negative stored ε exponent.
    pub fn min_power(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, k: i32) -> PolyExpr {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i32, &PolyExpr)> {
        self.coeffs.iter().map(|(k, p)| (*k, p))
    }

    /// Lowest exponent that might carry a nonzero coefficient; `None` for
    /// the exact zero.
    fn valuation(&self) -> Option<i32> {
        self.min_power().or(self.trunc.map(|t| t + 1))
    }

    pub fn contains(&self, v: Var) -> bool {
        self.coeffs.values().any(|p| p.contains(v))
    }

    pub fn min_exp(&self, v: Var) -> Option<i64> {
        self.coeffs.values().filter_map(|p| p.min_exp(v)).min()
    }

    pub fn max_exp(&self, v: Var) -> Option<i64> {
        self.coeffs.values().filter_map(|p| p.max_exp(v)).max()
    }

    /// Drops everything above `order` and caps the truncation there.
    pub fn truncate(&self, order: i32) -> EpsLaurent {
        let trunc = min_trunc(self.trunc, Some(order));
        EpsLaurent {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| **k <= order)
                .map(|(k, p)| (*k, p.clone()))
                .collect(),
            trunc,
        }
    }

    pub fn scale(&self, c: &Q) -> EpsLaurent {
        self.map_polys(|p| p.scale(c))
    }

    pub fn mul_poly(&self, p: &PolyExpr) -> EpsLaurent {
        self.map_polys(|c| c * p)
    }

    /// Multiplies by `ε^k`.
    pub fn shift(&self, k: i32) -> EpsLaurent {
        EpsLaurent {
            coeffs: self
                .coeffs
                .iter()
                .map(|(j, p)| (j + k, p.clone()))
                .collect(),
            trunc: self.trunc.map(|t| t + k),
        }
    }

    /// Applies `f` coefficientwise; the truncation order is kept.
    pub fn map_polys<F: FnMut(&PolyExpr) -> PolyExpr>(&self, mut f: F) -> EpsLaurent {
        let mut out = EpsLaurent {
            coeffs: BTreeMap::new(),
            trunc: self.trunc,
        };
        for (k, p) in &self.coeffs {
            out.add_at(*k, &f(p));
        }
        out
    }

    pub fn pow(&self, n: u32) -> EpsLaurent {
        let mut out = EpsLaurent::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Multiplicative inverse. Exact inputs that are not a single monomial
    /// are inverted through ε-order `order`.
    pub fn invert(&self, order: i32) -> Result<EpsLaurent> {
        let v = self
            .min_power()
            .ok_or_else(|| Error::NotInvertible("zero series".into()))?;
        let lead = &self.coeffs[&v];
        let (m, c) = lead
            .as_single_term()
            .filter(|(m, _)| m.is_unit())
            .ok_or_else(|| Error::NotInvertible(format!("leading coefficient {lead}")))?;
        let inv_m = Monomial::one()
            .with_exp(Var::Q, -m.exp(Var::Q))
            .with_exp(Var::E, -m.exp(Var::E));
        let inv_lead = PolyExpr::term(c.recip(), inv_m);
        if self.is_exact() && self.coeffs.len() == 1 {
            return Ok(EpsLaurent::monomial(inv_lead, -v));
        }
        let target = match self.trunc {
            Some(t) => order.min(t - 2 * v),
            None => order,
        };
        let n_terms = target + v;
        if n_terms < 0 {
            return Ok(EpsLaurent::zero_to(target));
        }
        let mut b: Vec<PolyExpr> = vec![inv_lead.clone()];
        for k in 1..=n_terms {
            let mut acc = PolyExpr::zero();
            for j in 1..=k {
                let a_j = self.coeff(v + j);
                if !a_j.is_zero() {
                    acc += &(&a_j * &b[(k - j) as usize]);
                }
            }
            b.push(-&(&acc * &inv_lead));
        }
        Ok(EpsLaurent::from_coeffs(
            b.into_iter().enumerate().map(|(k, p)| (k as i32 - v, p)),
            Some(target),
        ))
    }

    /// Strict pole part (minimal subtraction `R`).
    pub fn pole_part(&self) -> Result<EpsLaurent> {
        if self.contains(Var::E) {
            return Err(Error::UnexpandedExponential);
        }
        let trunc = match self.trunc {
            Some(t) if t < -1 => Some(t),
            _ => None,
        };
        Ok(EpsLaurent::from_coeffs(
            self.coeffs.range(..0).map(|(k, p)| (*k, p.clone())),
            trunc,
        ))
    }

    /// `(1 − R)`: the part regular at ε = 0.
    pub fn regular_part(&self) -> Result<EpsLaurent> {
        if self.contains(Var::E) {
            return Err(Error::UnexpandedExponential);
        }
        Ok(EpsLaurent {
            coeffs: self
                .coeffs
                .range(0..)
                .map(|(k, p)| (*k, p.clone()))
                .collect(),
            trunc: self.trunc,
        })
    }

    pub fn has_poles(&self) -> bool {
        self.min_power().is_some_and(|k| k < 0)
    }

    /// Replaces `E^n` by `exp(n L)` for the unit-mass legend `L = εt`.
    pub fn expand_e(&self, order: i32) -> EpsLaurent {
        self.expand_exp(&ExpLegend::unit_mass(), order)
    }

    /// Replaces every `E^n` by the truncated series of `exp(n L)`; the
    /// result is valid through `min(order, trunc)`.
    pub fn expand_exp(&self, legend: &ExpLegend, order: i32) -> EpsLaurent {
        let trunc = min_trunc(self.trunc, Some(order)).unwrap();
        let exponent = legend.exponent();
        let mut cache: BTreeMap<(i64, i32), EpsLaurent> = BTreeMap::new();
        let mut out = EpsLaurent::zero_to(trunc);
        for (&k, p) in &self.coeffs {
            if k > trunc {
                continue;
            }
            for (n, rest) in p.split_by(Var::E) {
                let piece = if n == 0 {
                    EpsLaurent::monomial(rest, k)
                } else {
                    let rel = trunc - k;
                    let series = cache.entry((n, rel)).or_insert_with(|| {
                        exp_series(&exponent.scale(&Q::from_integer(n.into())), rel)
                    });
                    series.mul_poly(&rest).shift(k)
                };
                out = &out + &piece;
            }
        }
        out
    }

    /// Formal derivative. `E` is differentiated through its legend,
    /// `q = e^{-t}` through `∂_t q = -q`, and `X` acts as `g ∂_g`.
    pub fn differentiate(&self, var: DiffVar, legend: &ExpLegend) -> EpsLaurent {
        let d_l = legend.d_exponent(var);
        let mut out = EpsLaurent {
            coeffs: BTreeMap::new(),
            trunc: match var {
                DiffVar::Eps => self.trunc.map(|t| t - 1),
                _ => self.trunc,
            },
        };
        for (&k, p) in &self.coeffs {
            let explicit = match var {
                DiffVar::Eps => EpsLaurent::monomial(p.scale(&Q::from_integer(k.into())), k - 1),
                DiffVar::T => {
                    let mut d = p.partial(Var::T);
                    d += &(-&p.euler(Var::Q));
                    EpsLaurent::monomial(d, k)
                }
                DiffVar::X => EpsLaurent::monomial(p.euler(Var::G), k),
                DiffVar::Tau(n) => EpsLaurent::monomial(p.partial(Var::Tau(n)), k),
            };
            out = &out + &explicit;
            if !d_l.is_zero() && p.contains(Var::E) {
                let through_e = EpsLaurent::monomial(p.euler(Var::E), k);
                out = &out + &(&through_e * &d_l);
            }
        }
        out
    }

    /// Realizes `x → x − t` and `t → t/ε` on an E-closed form at unit mass:
    /// `g → g q` and `E → q^{-1}`.
    pub fn substitute_recovery(&self) -> Result<EpsLaurent> {
        if self.contains(Var::T) {
            return Err(Error::ExpandedInput);
        }
        Ok(self.map_polys(|p| {
            p.map_terms(|m, c| {
                let g = m.exp(Var::G);
                let e = m.exp(Var::E);
                let q = m.exp(Var::Q);
                Some((
                    m.clone().with_exp(Var::E, 0).with_exp(Var::Q, q + g - e),
                    c.clone(),
                ))
            })
        }))
    }

    /// The `q → 0` limit: the `q^0` part, provided no negative power of `q`
    /// is present.
    pub fn limit_q0(&self) -> Result<EpsLaurent> {
        if let Some(k) = self.min_exp(Var::Q).filter(|k| *k < 0) {
            return Err(Error::DivergentLimit { power: k as i32 });
        }
        Ok(self.map_polys(|p| p.split_by(Var::Q).remove(&0).unwrap_or_default()))
    }

    /// Sets every flow variable of `legend` to zero, which also sends `E → 1`
    /// and, at unit mass, `q → 1`.
    pub fn at_zero_flow(&self, legend: &ExpLegend) -> EpsLaurent {
        self.map_polys(|p| {
            let mut p = p.set_one(Var::E);
            for v in legend.flow_vars() {
                if v == Var::T {
                    p = p.set_one(Var::Q);
                }
                p = p.set_zero(v);
            }
            p
        })
    }

    pub fn set_zero(&self, v: Var) -> EpsLaurent {
        self.map_polys(|p| p.set_zero(v))
    }

    pub fn set_one(&self, v: Var) -> EpsLaurent {
        self.map_polys(|p| p.set_one(v))
    }

    pub fn rename(&self, from: Var, to: Var) -> EpsLaurent {
        self.map_polys(|p| p.rename(from, to))
    }

    /// Groups by the exponent of `v`.
    pub fn split_by(&self, v: Var) -> BTreeMap<i64, EpsLaurent> {
        let mut out: BTreeMap<i64, EpsLaurent> = BTreeMap::new();
        for (&k, p) in &self.coeffs {
            for (n, rest) in p.split_by(v) {
                let slot = out.entry(n).or_insert_with(|| EpsLaurent {
                    coeffs: BTreeMap::new(),
                    trunc: self.trunc,
                });
                slot.add_at(k, &rest);
            }
        }
        out
    }

    /// `self == other` on the common range of validity.
    pub fn agrees_with(&self, other: &EpsLaurent) -> bool {
        (self - other).is_zero()
    }
}

/// `exp(x)` for `x` of positive ε-valuation, through ε-order `order`.
fn exp_series(x: &EpsLaurent, order: i32) -> EpsLaurent {
    let mut sum = EpsLaurent::one().truncate(order);
    let mut term = EpsLaurent::one();
    let mut j: i64 = 1;
    loop {
        term = (&term * x)
            .truncate(order)
            .scale(&Q::new(1.into(), j.into()));
        if term.is_zero() {
            break;
        }
        sum = &sum + &term;
        j += 1;
    }
    sum
}

impl fmt::Display for EpsLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")?;
        }
        for (i, (k, p)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let body = if p.len() == 1 {
                p.to_string()
            } else {
                format!("({p})")
            };
            match k {
                0 => write!(f, "{body}")?,
                _ => write!(f, "{body}*eps^{k}")?,
            }
        }
        if let Some(t) = self.trunc {
            write!(f, " + O(eps^{})", t + 1)?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a EpsLaurent> for &'a EpsLaurent {
    type Output = EpsLaurent;
    fn add(self, rhs: &'a EpsLaurent) -> EpsLaurent {
        let trunc = min_trunc(self.trunc, rhs.trunc);
        let mut out = EpsLaurent {
            coeffs: BTreeMap::new(),
            trunc,
        };
        for (k, p) in self.coeffs.iter().chain(rhs.coeffs.iter()) {
            out.add_at(*k, p);
        }
        out
    }
}

impl<'a> Sub<&'a EpsLaurent> for &'a EpsLaurent {
    type Output = EpsLaurent;
    fn sub(self, rhs: &'a EpsLaurent) -> EpsLaurent {
        self + &(-rhs)
    }
}

impl Neg for &EpsLaurent {
    type Output = EpsLaurent;
    fn neg(self) -> EpsLaurent {
        self.map_polys(|p| -p)
    }
}

impl<'a> Mul<&'a EpsLaurent> for &'a EpsLaurent {
    type Output = EpsLaurent;
    fn mul(self, rhs: &'a EpsLaurent) -> EpsLaurent {
        let (va, vb) = match (self.valuation(), rhs.valuation()) {
            (Some(a), Some(b)) => (a, b),
            // one factor is the exact zero
            _ => return EpsLaurent::zero(),
        };
        let trunc = min_trunc(self.trunc.map(|t| t + vb), rhs.trunc.map(|t| t + va));
        let mut out = EpsLaurent {
            coeffs: BTreeMap::new(),
            trunc,
        };
        for (i, p) in &self.coeffs {
            for (j, r) in &rhs.coeffs {
                let k = i + j;
                if trunc.is_some_and(|t| k > t) {
                    continue;
                }
                out.add_at(k, &(p * r));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<EpsLaurent> for EpsLaurent {
            type Output = EpsLaurent;
            fn $m(self, rhs: EpsLaurent) -> EpsLaurent {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Zero for EpsLaurent {
    fn zero() -> Self {
        EpsLaurent::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for EpsLaurent {
    fn one() -> Self {
        EpsLaurent::one()
    }
}
