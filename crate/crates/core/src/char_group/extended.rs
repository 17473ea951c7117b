use rayon::prelude::*;

use super::functional::{Functional, Kind};
use super::{check_cap, commutator, conv_inverse, convolve};
use crate::error::{Error, Result};
use crate::exact_coeffs::{DiffVar, EpsLaurent, ExpLegend, Monomial, PolyExpr, Var, Q};
use crate::forest_hopf::{Forest, HopfAlgebra, RootedTree};

/// `δ + c·Z₀` in the extended Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedLie {
    pub functional: Functional,
    pub z0: EpsLaurent,
}

impl ExtendedLie {
    pub fn new(functional: Functional, z0: EpsLaurent) -> Self {
        Self { functional, z0 }
    }

    /// Forest-by-forest difference of the functional parts together with
    /// the difference of the `Z₀` coefficients.
    pub fn residuals(
        &self,
        hopf: &HopfAlgebra,
        other: &ExtendedLie,
        max_degree: usize,
    ) -> (Vec<(Forest, EpsLaurent)>, EpsLaurent) {
        (
            self.functional
                .residuals(hopf, &other.functional, max_degree),
            &self.z0 - &other.z0,
        )
    }
}

/// The pair `(φ, s)` standing for `φ·e^{sZ₀}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedGroup {
    pub character: Functional,
    pub angle: EpsLaurent,
}

impl ExtendedGroup {
    pub fn new(character: Functional, angle: EpsLaurent) -> Self {
        assert!(character.is_character(), "group element needs a character");
        Self { character, angle }
    }
}

/// `e^s` as a monomial `E^k q^j`, for angles `s = k·L − j·t` where `L` is
/// the legend exponent.
pub fn exp_of_angle(angle: &EpsLaurent, legend: &ExpLegend) -> Result<EpsLaurent> {
    let fail = || Error::NotRepresentable(angle.to_string());
    if !angle.is_exact() {
        return Err(fail());
    }
    let mut rest = angle.clone();
    let mut mono = Monomial::one();
    let l = legend.exponent();
    if let Some(k0) = l.min_power() {
        let lead = l.coeff(k0);
        let (lm, lc) = lead.terms().next().expect("nonzero coefficient");
        let c = rest
            .coeff(k0)
            .terms()
            .find(|(m, _)| *m == lm)
            .map(|(_, c)| c / lc)
            .unwrap_or_default();
        if !c.is_integer() {
            return Err(fail());
        }
        rest = &rest - &l.scale(&c);
        let k: i64 = c.to_integer().try_into().map_err(|_| fail())?;
        mono = mono.with_exp(Var::E, k);
    }
    if !rest.is_zero() {
        let p = match (rest.min_power(), rest.max_power()) {
            (Some(0), Some(0)) => rest.coeff(0),
            _ => return Err(fail()),
        };
        let (m, c) = p.as_single_term().ok_or_else(fail)?;
        if *m != Monomial::var(Var::T) || !c.is_integer() {
            return Err(fail());
        }
        let j: i64 = (-c.to_integer()).try_into().map_err(|_| fail())?;
        mono = mono.with_exp(Var::Q, j);
    }
    Ok(EpsLaurent::from_poly(PolyExpr::term(
        Q::from_integer(1.into()),
        mono,
    )))
}

/// `(φ₁, s₁)(φ₂, s₂) = (φ₁ ⋆ θ_{s₁}(φ₂), s₁ + s₂)`.
pub fn pair_mul(
    hopf: &HopfAlgebra,
    legend: &ExpLegend,
    a: &ExtendedGroup,
    b: &ExtendedGroup,
) -> Result<ExtendedGroup> {
    let rotated = b.character.theta_scale(&exp_of_angle(&a.angle, legend)?);
    Ok(ExtendedGroup::new(
        convolve(hopf, &a.character, &rotated)?,
        &a.angle + &b.angle,
    ))
}

/// `(φ, s)⁻¹ = (θ_{−s}(φ⁻¹), −s)`.
pub fn pair_inverse(
    hopf: &HopfAlgebra,
    legend: &ExpLegend,
    a: &ExtendedGroup,
) -> Result<ExtendedGroup> {
    let neg = -&a.angle;
    let inv = conv_inverse(hopf, &a.character)?;
    Ok(ExtendedGroup::new(
        inv.theta_scale(&exp_of_angle(&neg, legend)?),
        neg,
    ))
}

/// `e^{s(δ + cZ₀)}` with `s` the flow variable `flow`.
///
/// Writing `e^{s(δ+cZ₀)} = h_s·e^{scZ₀}`, the character `h` solves
/// `∂_s h = δ⋆h + c·(h∘Y)` with `h₀ = 1`. On a degree-n tree the
/// inhomogeneous part is a polynomial `Σ r_k M^k` in `M = e^{cs}` with
/// `k < n`, so `h(T) = Σ r_k (M^k − M^n) / (c(k − n))` in closed form.
pub fn pair_exp(
    hopf: &HopfAlgebra,
    legend: &ExpLegend,
    d: &ExtendedLie,
    flow: Var,
) -> Result<ExtendedGroup> {
    let delta = &d.functional;
    if !delta.is_infinitesimal() {
        return Err(Error::NotInfinitesimal);
    }
    let cap = delta.cap();
    check_cap(hopf, cap)?;
    let c = &d.z0;
    let s = EpsLaurent::var(flow);
    if c.is_zero() {
        let scaled = delta.map_hom(|v| v * &s);
        return Ok(ExtendedGroup::new(
            super::conv_exp(hopf, &scaled)?,
            EpsLaurent::zero(),
        ));
    }
    let angle = c * &s;
    let m = exp_of_angle(&angle, legend)?;
    let (mvar, sign) = single_var(&m).ok_or_else(|| {
        Error::DivergentEvolution(format!("e^({angle}) is not a single exponential"))
    })?;
    for (_, v) in delta.entries() {
        if v.contains(mvar) || v.contains(flow) {
            return Err(Error::DivergentEvolution(format!(
                "generator value {v} depends on the flow"
            )));
        }
    }
    let c_inv = match c.min_power() {
        Some(k) if c.is_exact() && c.max_power() == Some(k) => c
            .invert(0)
            .map_err(|e| Error::DivergentEvolution(e.to_string()))?,
        _ => {
            return Err(Error::DivergentEvolution(format!(
                "Z0 coefficient {c} is not a monomial"
            )))
        }
    };
    let m_pow = |k: i64| {
        EpsLaurent::from_poly(PolyExpr::term(
            Q::from_integer(1.into()),
            Monomial::one().with_exp(mvar, k * sign),
        ))
    };

    let mut h = Functional::unit(cap);
    for n in 1..=cap {
        let trees = hopf.trees(n);
        let values: Vec<(RootedTree, EpsLaurent)> = trees
            .par_iter()
            .map(|t| {
                let x = Forest::single(t.clone());
                let mut r = EpsLaurent::zero();
                for ((l, rr), k) in hopf.coproduct(&x)?.iter() {
                    if l.is_empty() {
                        continue;
                    }
                    let dv = delta.eval(l);
                    if dv.is_zero() {
                        continue;
                    }
                    r = &r + &(&dv * &h.eval(rr)).scale(&Q::from_integer(k.into()));
                }
                let mut out = EpsLaurent::zero();
                for (p, rp) in r.split_by(mvar) {
                    let k = p * sign;
                    let gap = k - n as i64;
                    if gap == 0 {
                        return Err(Error::DivergentEvolution(format!("resonant term on {t}")));
                    }
                    let num = &m_pow(k) - &m_pow(n as i64);
                    let term = &(&rp * &num) * &c_inv;
                    out = &out + &term.scale(&Q::new(1.into(), gap.into()));
                }
                Ok((t.clone(), out))
            })
            .collect::<Result<_>>()?;
        let mut all: Vec<(RootedTree, EpsLaurent)> = h
            .entries()
            .filter_map(|(f, v)| f.as_tree().map(|t| (t.clone(), v.clone())))
            .collect();
        all.extend(values);
        h = Functional::from_tree_values(Kind::Character, cap, all);
    }
    Ok(ExtendedGroup::new(h, angle))
}

/// `(var, ±1)` when `m` is `var^{±1}` with unit coefficient.
fn single_var(m: &EpsLaurent) -> Option<(Var, i64)> {
    let (mono, c) = m
        .coeff(0)
        .as_single_term()
        .map(|(a, b)| (a.clone(), b.clone()))?;
    if c != Q::from_integer(1.into()) {
        return None;
    }
    for v in [Var::E, Var::Q] {
        let k = mono.exp(v);
        if (k == 1 || k == -1) && mono == Monomial::one().with_exp(v, k) {
            return Some((v, k));
        }
    }
    None
}

/// `∂g · g⁻¹` for `g = (φ, s)`:
/// `(∂φ⋆φ⁻¹ + ∂s·φ⋆(φ⁻¹∘Y), ∂s)`.
pub fn log_derivative(
    hopf: &HopfAlgebra,
    legend: &ExpLegend,
    g: &ExtendedGroup,
    var: DiffVar,
) -> Result<ExtendedLie> {
    let phi = &g.character;
    let inv = conv_inverse(hopf, phi)?;
    let d_phi = phi.differentiate(hopf, var, legend);
    let mut out = convolve(hopf, &d_phi, &inv)?;
    let ds = g.angle.differentiate(var, legend);
    if !ds.is_zero() {
        let twist = convolve(hopf, phi, &inv.y_compose(hopf))?;
        out = out.add(hopf, &twist.scale(hopf, &ds));
    }
    Ok(ExtendedLie::new(out, ds))
}

/// `Ad_{(φ,s)}(δ + cZ₀) = (φ⋆θ_s(δ)⋆φ⁻¹ + c·φ⋆(φ⁻¹∘Y), c)`.
pub fn adjoint(
    hopf: &HopfAlgebra,
    legend: &ExpLegend,
    g: &ExtendedGroup,
    x: &ExtendedLie,
) -> Result<ExtendedLie> {
    let phi = &g.character;
    let inv = conv_inverse(hopf, phi)?;
    let rotated = x.functional.theta_scale(&exp_of_angle(&g.angle, legend)?);
    let mut out = convolve(hopf, &convolve(hopf, phi, &rotated)?, &inv)?;
    if !x.z0.is_zero() {
        let twist = convolve(hopf, phi, &inv.y_compose(hopf))?;
        out = out.add(hopf, &twist.scale(hopf, &x.z0));
    }
    Ok(ExtendedLie::new(out, x.z0.clone()))
}

/// `[(δ₁,c₁),(δ₂,c₂)] = ([δ₁,δ₂] + c₁·δ₂∘Y − c₂·δ₁∘Y, 0)`.
pub fn ext_bracket(hopf: &HopfAlgebra, a: &ExtendedLie, b: &ExtendedLie) -> Result<ExtendedLie> {
    let mut out = commutator(hopf, &a.functional, &b.functional)?;
    out = out.add(hopf, &b.functional.y_compose(hopf).scale(hopf, &a.z0));
    out = out.sub(hopf, &a.functional.y_compose(hopf).scale(hopf, &b.z0));
    Ok(ExtendedLie::new(out, EpsLaurent::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::char_group::{conv_exp, conv_unit, theta_act};

    fn sym(i: usize) -> EpsLaurent {
        EpsLaurent::var(Var::Tau(i))
    }

    fn generic(hopf: &HopfAlgebra, kind: Kind, n: usize, offset: usize) -> Functional {
        Functional::from_tree_values(
            kind,
            n,
            hopf.trees_up_to(n)
                .into_iter()
                .enumerate()
                .map(|(i, t)| (t, sym(offset + i + 1))),
        )
    }

    fn eps() -> EpsLaurent {
        EpsLaurent::eps_pow(1)
    }

    fn t() -> EpsLaurent {
        EpsLaurent::var(Var::T)
    }

    #[test]
    fn angle_monomials() {
        let legend = ExpLegend::unit_mass();
        let e = exp_of_angle(&(&eps() * &t()), &legend).unwrap();
        assert_eq!(e, EpsLaurent::var(Var::E));
        let q = exp_of_angle(&(-&t()), &legend).unwrap();
        assert_eq!(q, EpsLaurent::var(Var::Q));
        assert!(exp_of_angle(&eps(), &legend).is_err());
        assert_eq!(
            exp_of_angle(&EpsLaurent::zero(), &legend).unwrap(),
            EpsLaurent::one()
        );
    }

    #[test]
    fn pair_group_laws() {
        let h = HopfAlgebra::new(4);
        let legend = ExpLegend::unit_mass();
        let phi = generic(&h, Kind::Character, 4, 0);
        let s = &eps() * &t();
        let g = ExtendedGroup::new(phi.clone(), EpsLaurent::zero());
        let rot = ExtendedGroup::new(conv_unit(4), s.clone());
        let back = ExtendedGroup::new(conv_unit(4), -&s);
        assert_eq!(
            pair_mul(&h, &legend, &g, &rot).unwrap(),
            ExtendedGroup::new(phi.clone(), s.clone())
        );
        let conj = pair_mul(
            &h,
            &legend,
            &pair_mul(&h, &legend, &rot, &g).unwrap(),
            &back,
        )
        .unwrap();
        assert_eq!(conj.character, theta_act(&phi, &s, &legend).unwrap());
        assert!(conj.angle.is_zero());
        let x = ExtendedGroup::new(phi, s);
        let inv = pair_inverse(&h, &legend, &x).unwrap();
        let one = pair_mul(&h, &legend, &x, &inv).unwrap();
        assert_eq!(one.character, conv_unit(4));
        assert!(one.angle.is_zero());
    }

    #[test]
    fn pair_exp_examples() {
        let h = HopfAlgebra::new(4);
        let legend = ExpLegend::unit_mass();
        let zero = ExtendedLie::new(Functional::zero(4), eps());
        let g = pair_exp(&h, &legend, &zero, Var::T).unwrap();
        assert_eq!(g.character, conv_unit(4));
        assert_eq!(g.angle, &eps() * &t());

        let d = generic(&h, Kind::Infinitesimal, 4, 0);
        let g = pair_exp(
            &h,
            &legend,
            &ExtendedLie::new(d.clone(), EpsLaurent::zero()),
            Var::T,
        )
        .unwrap();
        assert_eq!(g.character, conv_exp(&h, &d.map_hom(|v| v * &t())).unwrap());

        let g = pair_exp(&h, &legend, &ExtendedLie::new(d.clone(), eps()), Var::T).unwrap();
        let dot = RootedTree::node();
        let expect =
            (&d.tree_value(&dot) * &(&EpsLaurent::var(Var::E) - &EpsLaurent::one())).shift(-1);
        assert_eq!(g.character.tree_value(&dot), expect);
    }

    #[test]
    fn pair_exp_solves_its_ode() {
        let h = HopfAlgebra::new(4);
        let legend = ExpLegend::unit_mass();
        let d = generic(&h, Kind::Infinitesimal, 4, 0);
        for c in [eps(), EpsLaurent::from_int(-1), EpsLaurent::from_int(1)] {
            let x = ExtendedLie::new(d.clone(), c.clone());
            let g = pair_exp(&h, &legend, &x, Var::T).unwrap();
            let lhs = g.character.differentiate(&h, DiffVar::T, &legend);
            let rhs = convolve(&h, &d, &g.character)
                .unwrap()
                .add(&h, &g.character.y_compose(&h).scale(&h, &c));
            assert!(
                lhs.residuals(&h, &rhs, 4).iter().all(|(_, r)| r.is_zero()),
                "c = {c}"
            );
            // The log-derivative of the exponential returns the generator.
            let back = log_derivative(&h, &legend, &g, DiffVar::T).unwrap();
            let want = adjoint(
                &h,
                &legend,
                &ExtendedGroup::new(conv_unit(4), EpsLaurent::zero()),
                &x,
            )
            .unwrap();
            let (res, z) = back.residuals(&h, &want, 4);
            assert!(res.iter().all(|(_, r)| r.is_zero()) && z.is_zero());
        }
    }

    #[test]
    fn bracket_of_z0_is_grading() {
        let h = HopfAlgebra::new(3);
        let d = generic(&h, Kind::Infinitesimal, 3, 0);
        let z = ExtendedLie::new(Functional::zero(3), EpsLaurent::one());
        let x = ExtendedLie::new(d.clone(), EpsLaurent::zero());
        let b = ext_bracket(&h, &z, &x).unwrap();
        let res = b.functional.residuals(&h, &d.y_compose(&h), 3);
        assert!(res.iter().all(|(_, r)| r.is_zero()));
    }
}
