//! The β element and the identities it drives: the unit-mass flow
//! equations, the scattering formula, the recovery limits, the Baker
//! function, `M` and the ε-differential equations.
//!
//! Every check returns a [`FlowReport`] whose residuals must vanish
//! identically; nothing is sampled numerically.

use serde::Serialize;

use crate::birkhoff::{locality_check, BirkhoffPair};
use crate::char_group::{
    adjoint, conv_exp, conv_inverse, convolve, log_derivative, pair_exp, pair_mul, ExtendedGroup,
    ExtendedLie, Functional, Kind,
};
use crate::error::{Error, Result};
use crate::exact_coeffs::{DiffVar, EpsLaurent, ExpLegend, Monomial, PolyExpr, Var, Q};
use crate::forest_hopf::{Forest, HopfAlgebra};
use crate::report::FlowReport;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaDiagnostic {
    pub tree: String,
    pub pole_free: bool,
    pub eps_free: bool,
}

#[derive(Clone, Debug)]
pub struct BetaElement {
    /// Infinitesimal when the product test passed, general otherwise.
    pub values: Functional,
    pub infinitesimal: bool,
    pub diagnostics: Vec<BetaDiagnostic>,
}

impl BetaElement {
    pub fn pole_free(&self) -> bool {
        self.diagnostics.iter().all(|d| d.pole_free)
    }

    pub fn eps_free(&self) -> bool {
        self.diagnostics.iter().all(|d| d.eps_free)
    }

    /// `β + c·Z₀`.
    pub fn with_z0(&self, c: EpsLaurent) -> ExtendedLie {
        ExtendedLie::new(self.values.clone(), c)
    }
}

/// `β = ε·φ₋⋆(φ₋⁻¹∘Y)`, i.e. `φ₋ εZ₀ φ₋⁻¹ − εZ₀` written with `[Z₀, f] = f∘Y`.
pub fn beta_function(hopf: &HopfAlgebra, pair: &BirkhoffPair) -> Result<BetaElement> {
    let inv = conv_inverse(hopf, &pair.phi_minus)?;
    let raw = convolve(hopf, &pair.phi_minus, &inv.y_compose(hopf))?.map_hom(|v| v.shift(1));
    let (values, infinitesimal) = match raw.clone().into_infinitesimal(hopf) {
        Some(b) => (b, true),
        None => (raw, false),
    };
    let diagnostics = hopf
        .trees_up_to(values.cap())
        .into_iter()
        .map(|t| {
            let v = values.tree_value(&t);
            let eps_free = v.coeffs().all(|(k, _)| k == 0);
            BetaDiagnostic {
                tree: t.encoding().to_string(),
                pole_free: !v.has_poles(),
                eps_free,
            }
        })
        .collect();
    Ok(BetaElement {
        values,
        infinitesimal,
        diagnostics,
    })
}

/// Per-tree report of the β diagnostics; the residual on a failing tree
/// is the part of `β` outside `ε⁰`.
pub fn beta_report(hopf: &HopfAlgebra, beta: &BetaElement) -> Vec<FlowReport> {
    let mut finite = FlowReport::new("beta pole-free and eps-independent");
    for t in hopf.trees_up_to(beta.values.cap()) {
        let v = beta.values.tree_value(&t);
        let off = EpsLaurent::from_coeffs(
            v.coeffs()
                .filter(|(k, _)| *k != 0)
                .map(|(k, p)| (k, p.clone())),
            v.trunc_order(),
        );
        finite.record(t.encoding(), off);
    }
    let mut infinitesimal = FlowReport::new("beta infinitesimal");
    for f in hopf.forests_up_to(beta.values.cap()) {
        if f.len() != 1 {
            infinitesimal.record(f.encoding(), beta.values.eval(&f));
        }
    }
    vec![finite, infinitesimal]
}

fn var_t() -> EpsLaurent {
    EpsLaurent::var(Var::T)
}

fn eps(k: i32) -> EpsLaurent {
    EpsLaurent::eps_pow(k)
}

fn lie_report(
    hopf: &HopfAlgebra,
    name: &str,
    a: &ExtendedLie,
    b: &ExtendedLie,
    n: usize,
) -> FlowReport {
    let (res, z) = a.residuals(hopf, b, n);
    let mut report = FlowReport::from_forests(name, res);
    report.record("Z0", z);
    report
}

/// Unit-mass equations:
/// (i) `∂_t φ₋ = 0`;
/// (ii) `∂_t φ̃₊ · φ̃₊⁻¹ = β + εZ₀` with `φ̃₊ = (φ₊, εt)`;
/// (iii) `(∂_t − ε∂_x)φ_± ⋆ φ_±⁻¹ = β` for both signs;
/// (iv) the pole projection of `φ₋εZ₀φ₋⁻¹` is `−∂_tφ₋⋆φ₋⁻¹` and its
/// regular projection drives `φ̃₊`.
pub fn check_rg_equations(
    hopf: &HopfAlgebra,
    pair: &BirkhoffPair,
    beta: &BetaElement,
) -> Result<Vec<FlowReport>> {
    let n = pair.cap();
    let legend = &pair.legend;
    let mut out = vec![locality_check(hopf, pair, DiffVar::T)];

    let tilde = ExtendedGroup::new(pair.phi_plus.clone(), &eps(1) * &var_t());
    let lhs = log_derivative(hopf, legend, &tilde, DiffVar::T)?;
    out.push(lie_report(
        hopf,
        "d_t phi~+ . phi~+^-1 = beta + eps Z0",
        &lhs,
        &beta.with_z0(eps(1)),
        n,
    ));

    for (label, phi) in [("phi_plus", &pair.phi_plus), ("phi_minus", &pair.phi_minus)] {
        let inv = conv_inverse(hopf, phi)?;
        let d_t = phi.differentiate(hopf, DiffVar::T, legend);
        let d_x = phi
            .differentiate(hopf, DiffVar::X, legend)
            .scale(hopf, &eps(1));
        let lhs = convolve(hopf, &d_t.sub(hopf, &d_x), &inv)?;
        out.push(FlowReport::from_forests(
            format!("(d_t - eps d_x) {label} . {label}^-1 = beta"),
            lhs.residuals(hopf, &beta.values, n),
        ));
    }

    let adj = adjoint(
        hopf,
        legend,
        &ExtendedGroup::new(pair.phi_minus.clone(), EpsLaurent::zero()),
        &ExtendedLie::new(Functional::zero(n), eps(1)),
    )?;
    let inv_minus = conv_inverse(hopf, &pair.phi_minus)?;
    let d_minus = convolve(
        hopf,
        &pair.phi_minus.differentiate(hopf, DiffVar::T, legend),
        &inv_minus,
    )?;
    let mut minus = FlowReport::new("(phi- eps Z0 phi-^-1)_- = -d_t phi- . phi-^-1");
    let mut plus = FlowReport::new("(phi- eps Z0 phi-^-1)_+ = d_t phi~+ . phi~+^-1");
    for f in hopf.forests_up_to(n) {
        let v = adj.functional.eval(&f);
        let key = f.encoding();
        match (v.pole_part(), v.regular_part()) {
            (Ok(p), Ok(r)) => {
                minus.record(key.clone(), &p + &d_minus.eval(&f));
                plus.record(key, &r - &lhs.functional.eval(&f));
            }
            (Err(e), _) | (_, Err(e)) => minus.fail(key, v, e.to_string()),
        }
    }
    // The Z₀ component ε is regular, so it belongs to the plus side.
    plus.record("Z0", &adj.z0 - &lhs.z0);
    out.push(minus);
    out.push(plus);
    Ok(out)
}

/// `φ₊(t) = e^{t(β+εZ₀)} φ₊(0) e^{−tεZ₀}` in integrated form (through
/// `pair_exp`) and differential form (`∂_tφ₊ = β⋆φ₊ + ε·φ₊∘Y`), and the
/// ε → 0 reduction `φ₊(t) = e^{tβ}φ₊(0)`.
pub fn evolve_unit_mass(
    hopf: &HopfAlgebra,
    pair: &BirkhoffPair,
    beta: &BetaElement,
    max_degree: usize,
) -> Result<Vec<FlowReport>> {
    let n = max_degree.min(pair.cap());
    let legend = &pair.legend;
    let mut out = Vec::new();
    let beta_n = truncate_cap(&beta.values, n);
    let plus = truncate_cap(&pair.phi_plus, n);
    let plus0 = plus.map_hom(|v| v.at_zero_flow(legend));

    let flow = pair_exp(
        hopf,
        legend,
        &ExtendedLie::new(beta_n.clone(), eps(1)),
        Var::T,
    )?;
    let rhs = pair_mul(
        hopf,
        legend,
        &pair_mul(
            hopf,
            legend,
            &flow,
            &ExtendedGroup::new(plus0.clone(), EpsLaurent::zero()),
        )?,
        &ExtendedGroup::new(Functional::unit(n), -&(&eps(1) * &var_t())),
    )?;
    let mut integrated = FlowReport::from_forests(
        "phi+(t) = exp(t(beta + eps Z0)) phi+(0) exp(-t eps Z0)",
        plus.residuals(hopf, &rhs.character, n),
    );
    integrated.record("Z0", rhs.angle.clone());
    out.push(integrated);

    let d_t = plus.differentiate(hopf, DiffVar::T, legend);
    let rhs = convolve(hopf, &beta_n, &plus)?.add(hopf, &plus.y_compose(hopf).scale(hopf, &eps(1)));
    let differential = FlowReport::from_forests(
        "d_t phi+ = beta * phi+ + eps phi+ o Y",
        d_t.residuals(hopf, &rhs, n),
    );
    out.push(differential);

    // ε → 0: the expanded φ₊ carries explicit t.
    let mut reduction = FlowReport::new("phi+(t) = exp(t beta) phi+(0) at eps = 0");
    let at_zero = |v: &EpsLaurent| -> Result<EpsLaurent> {
        if v.has_poles() {
            return Err(Error::DivergentLimit {
                power: v.min_power().unwrap_or_default(),
            });
        }
        Ok(EpsLaurent::from_poly(v.coeff(0)))
    };
    let expanded = truncate_cap(&pair.phi_plus_expanded, n);
    let lhs = map_result(&expanded, &at_zero)?;
    let initial = map_result(&lhs, &|v: &EpsLaurent| Ok(v.set_zero(Var::T)))?;
    let beta0 = map_result(&beta_n, &at_zero)?;
    let rhs = convolve(
        hopf,
        &conv_exp(hopf, &beta0.map_hom(|v| v * &var_t()))?,
        &initial,
    )?;
    reduction.record_forests(lhs.residuals(hopf, &rhs, n));
    out.push(reduction);
    Ok(out)
}

/// Values at zero flow: `E → 1` and the flow variables set to zero.
fn at_t0(a: &Functional, legend: &ExpLegend) -> Functional {
    a.map_hom(|v| v.at_zero_flow(legend))
}

fn map_result<F>(a: &Functional, f: &F) -> Result<Functional>
where
    F: Fn(&EpsLaurent) -> Result<EpsLaurent>,
{
    let err = std::cell::RefCell::new(None);
    let out = a.map_hom(|v| {
        f(v).unwrap_or_else(|e| {
            err.borrow_mut().get_or_insert(e);
            EpsLaurent::zero()
        })
    });
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Restriction to trees of degree `≤ n`.
pub fn truncate_cap(a: &Functional, n: usize) -> Functional {
    match a.kind() {
        Kind::General => Functional::general(n, a.entries().map(|(f, v)| (f.clone(), v.clone()))),
        kind => Functional::from_tree_values(
            kind,
            n,
            a.entries()
                .filter_map(|(f, v)| f.as_tree().map(|t| (t.clone(), v.clone()))),
        ),
    }
}

/// `φ₋ ⋆ θ_{−t}(φ₋⁻¹)`, with `e^{−t}` written as `q`.
pub fn scattering_profile(hopf: &HopfAlgebra, pair: &BirkhoffPair) -> Result<Functional> {
    let inv = conv_inverse(hopf, &pair.phi_minus)?;
    let rotated = inv.theta_scale(&EpsLaurent::var(Var::Q));
    convolve(hopf, &pair.phi_minus, &rotated)
}

/// Scattering formula:
/// (a) `β/ε + Z₀ = φ₋ Z₀ φ₋⁻¹`;
/// (b) `φ₋⋆θ_{−t}(φ₋⁻¹)(X)` has q-support in `{0, …, deg X}` and its `q⁰`
/// part is `φ₋(X)`, so the `t → ∞` limit is `φ₋`;
/// (c) `e^{−t(β/ε+Z₀)} e^{tZ₀}` computed by `pair_exp` equals the profile.
pub fn scattering(
    hopf: &HopfAlgebra,
    pair: &BirkhoffPair,
    beta: &BetaElement,
) -> Result<Vec<FlowReport>> {
    let n = pair.cap();
    let legend = &pair.legend;
    let mut out = Vec::new();
    let beta_over_eps = beta.values.map_hom(|v| v.shift(-1));

    let adj = adjoint(
        hopf,
        legend,
        &ExtendedGroup::new(pair.phi_minus.clone(), EpsLaurent::zero()),
        &ExtendedLie::new(Functional::zero(n), EpsLaurent::one()),
    )?;
    out.push(lie_report(
        hopf,
        "beta/eps + Z0 = phi- Z0 phi-^-1",
        &ExtendedLie::new(beta_over_eps.clone(), EpsLaurent::one()),
        &adj,
        n,
    ));

    let profile = scattering_profile(hopf, pair)?;
    let mut support = FlowReport::new("q-support of phi- theta_-t(phi-^-1) within 0..deg");
    let mut limit = FlowReport::new("q^0 part of phi- theta_-t(phi-^-1) = phi-");
    for f in hopf.forests_up_to(n) {
        let v = profile.eval(&f);
        let deg = f.degree() as i64;
        let key = f.encoding();
        let mut outside = EpsLaurent::zero();
        for (k, part) in v.split_by(Var::Q) {
            if k < 0 || k > deg {
                let qk = PolyExpr::term(
                    Q::from_integer(1.into()),
                    Monomial::one().with_exp(Var::Q, k),
                );
                outside = &outside + &part.mul_poly(&qk);
            }
        }
        support.record(key.clone(), outside);
        match v.limit_q0() {
            Ok(l) => limit.record(key, &l - &pair.phi_minus.eval(&f)),
            Err(e) => limit.fail(key, v, e.to_string()),
        }
    }
    out.push(support);
    out.push(limit);

    let flow = pair_exp(
        hopf,
        legend,
        &ExtendedLie::new(beta_over_eps.map_hom(|v| -v), EpsLaurent::from_int(-1)),
        Var::T,
    )?;
    let product = pair_mul(
        hopf,
        legend,
        &flow,
        &ExtendedGroup::new(Functional::unit(n), var_t()),
    )?;
    let mut integrated = FlowReport::from_forests(
        "exp(-t(beta/eps + Z0)) exp(t Z0) = phi- theta_-t(phi-^-1)",
        product.character.residuals(hopf, &profile, n),
    );
    integrated.record("Z0", product.angle);
    out.push(integrated);
    Ok(out)
}

/// Recovery formulas at unit mass, with `q = e^{−t}`:
/// the identity `e^{−tZ₀}e^{t(β/ε+Z₀)} = θ_{−t}(φ₊(x, t/ε)) ⋆ φ₊⁻¹(x, 0)`,
/// and the `q → 0` limits `φ₊(x−t, t/ε) ⋆ φ₊⁻¹(x,0) → φ₋⁻¹` and
/// `φ₊(x−t, t/ε) → φ` at `t = 0`.
pub fn recover_limits(
    hopf: &HopfAlgebra,
    pair: &BirkhoffPair,
    beta: &BetaElement,
    max_degree: usize,
) -> Result<Vec<FlowReport>> {
    let n = max_degree.min(pair.cap());
    let legend = &pair.legend;
    let plus = truncate_cap(&pair.phi_plus, n);
    let plus0_inv = conv_inverse(hopf, &at_t0(&plus, legend))?;
    let mut out = Vec::new();

    // φ₊(x, t/ε): E = e^{ε·t/ε} = q⁻¹.
    let at_t_over_eps = plus.map_hom(|v| {
        v.map_polys(|p| {
            p.map_terms(|m, c| {
                let e = m.exp(Var::E);
                let q = m.exp(Var::Q);
                Some((
                    m.clone().with_exp(Var::E, 0).with_exp(Var::Q, q - e),
                    c.clone(),
                ))
            })
        })
    });
    let rhs = convolve(
        hopf,
        &at_t_over_eps.theta_scale(&EpsLaurent::var(Var::Q)),
        &plus0_inv,
    )?;
    let flow = pair_exp(
        hopf,
        legend,
        &ExtendedLie::new(
            truncate_cap(&beta.values, n).map_hom(|v| v.shift(-1)),
            EpsLaurent::one(),
        ),
        Var::T,
    )?;
    let lhs = flow.character.theta_scale(&EpsLaurent::var(Var::Q));
    out.push(FlowReport::from_forests(
        "exp(-t Z0) exp(t(beta/eps + Z0)) = theta_-t(phi+(x, t/eps)) phi+^-1(x, 0)",
        lhs.residuals(hopf, &rhs, n),
    ));

    match map_result(&plus, &EpsLaurent::substitute_recovery) {
        Err(e) => out.push(FlowReport::error("recovery substitution", e.to_string())),
        Ok(shifted) => {
            let product = convolve(hopf, &shifted, &plus0_inv)?;
            let inv_minus = conv_inverse(hopf, &truncate_cap(&pair.phi_minus, n))?;
            let source0 = at_t0(&truncate_cap(&pair.source, n), legend);
            for (name, value, target) in [
                (
                    "lim phi+(x-t, t/eps) phi+^-1(x, 0) = phi-^-1",
                    &product,
                    &inv_minus,
                ),
                (
                    "lim phi+(x-t, t/eps) = phi at unit mass",
                    &shifted,
                    &source0,
                ),
            ] {
                let mut report = FlowReport::new(name);
                for f in hopf.forests_up_to(n) {
                    let v = value.eval(&f);
                    match v.limit_q0() {
                        Ok(l) => report.record(f.encoding(), &l - &target.eval(&f)),
                        Err(e) => report.fail(f.encoding(), v, e.to_string()),
                    }
                }
                out.push(report);
            }
        }
    }
    Ok(out)
}

/// `α(X) = α′(X)/deg X`, the solution of `[Z₀, α] = α′` obtained from
/// `∫_0^∞ θ_{−t}(α′) dt`.
pub fn grading_inverse(alpha_prime: &Functional) -> Result<Functional> {
    if !alpha_prime.eval(&Forest::empty()).is_zero() {
        return Err(Error::NonzeroCounit);
    }
    Ok(alpha_prime.y_divide())
}

/// `M = ∫_0^∞ θ_{−t}(φ₋⁻¹βφ₋) dt`, without the pole-bound check.
pub fn m_element(
    hopf: &HopfAlgebra,
    pair: &BirkhoffPair,
    beta: &BetaElement,
) -> Result<Functional> {
    let inv = conv_inverse(hopf, &pair.phi_minus)?;
    let conj = convolve(hopf, &convolve(hopf, &inv, &beta.values)?, &pair.phi_minus)?;
    let m = grading_inverse(&conj)?;
    Ok(match m.clone().into_infinitesimal(hopf) {
        Some(x) => x,
        None => m,
    })
}

/// ε powers of `M` on a degree-n tree lie in `[−(n−1), 0]`.
pub fn m_pole_bound(hopf: &HopfAlgebra, m: &Functional) -> FlowReport {
    let mut report = FlowReport::new("M eps powers within [-(n-1), 0]");
    for t in hopf.trees_up_to(m.cap()) {
        let v = m.tree_value(&t);
        let lowest = -(t.degree() as i32 - 1);
        let off = EpsLaurent::from_coeffs(
            v.coeffs()
                .filter(|(k, _)| *k < lowest || *k > 0)
                .map(|(k, p)| (k, p.clone())),
            None,
        );
        report.record(t.encoding(), off);
    }
    report
}

/// `M` with the pole bound enforced.
pub fn compute_m(
    hopf: &HopfAlgebra,
    pair: &BirkhoffPair,
    beta: &BetaElement,
) -> Result<Functional> {
    let m = m_element(hopf, pair, beta)?;
    for t in hopf.trees_up_to(m.cap()) {
        let v = m.tree_value(&t);
        let allowed = -(t.degree() as i32 - 1);
        let low = v.min_power().unwrap_or(0);
        if low < allowed || v.max_power().unwrap_or(0) > 0 {
            return Err(Error::PoleBoundViolated {
                tree: t.encoding().to_string(),
                lowest: low,
                allowed,
            });
        }
    }
    Ok(m)
}

/// The ε-equations:
/// `(∂_εφ₋⁻¹ ⋆ φ₋)∘Y = −φ₋⁻¹βφ₋/ε²` and `∂_εφ₋⁻¹ ⋆ φ₋ = −M/ε²`, together
/// with their premise `φ₋⁻¹∘Y = φ₋⁻¹⋆β/ε`.
pub fn epsilon_ode_check(
    hopf: &HopfAlgebra,
    pair: &BirkhoffPair,
    beta: &BetaElement,
    m: &Functional,
    max_degree: usize,
) -> Result<Vec<FlowReport>> {
    let n = max_degree.min(pair.cap());
    let legend = &pair.legend;
    let inv = conv_inverse(hopf, &pair.phi_minus)?;
    let d_inv = inv.differentiate(hopf, DiffVar::Eps, legend);
    let a = convolve(hopf, &d_inv, &pair.phi_minus)?;
    let conj = convolve(hopf, &convolve(hopf, &inv, &beta.values)?, &pair.phi_minus)?;
    let over_eps2 = |f: &Functional| f.map_hom(|v| -&v.shift(-2));

    Ok(vec![
        FlowReport::from_forests(
            "[Z0, d_eps phi-^-1 phi-] = -phi-^-1 beta phi- / eps^2",
            a.y_compose(hopf).residuals(hopf, &over_eps2(&conj), n),
        ),
        FlowReport::from_forests(
            "d_eps phi-^-1 phi- = -M / eps^2",
            a.residuals(hopf, &over_eps2(m), n),
        ),
        FlowReport::from_forests(
            "[Z0, phi-^-1] = phi-^-1 beta / eps",
            inv.y_compose(hopf).residuals(
                hopf,
                &convolve(hopf, &inv, &beta.values)?.map_hom(|v| v.shift(-1)),
                n,
            ),
        ),
    ])
}

/// Baker function `w = (φ₋, εt)`: `∂_t w·w⁻¹ = β + εZ₀` and
/// `∂_ε w·w⁻¹ = φ₋(M/ε² + tZ₀)φ₋⁻¹`.
pub fn baker_function(
    hopf: &HopfAlgebra,
    pair: &BirkhoffPair,
    beta: &BetaElement,
    m: &Functional,
    max_degree: usize,
) -> Result<Vec<FlowReport>> {
    let n = max_degree.min(pair.cap());
    let legend = &pair.legend;
    let w = ExtendedGroup::new(pair.phi_minus.clone(), &eps(1) * &var_t());
    let d_t = log_derivative(hopf, legend, &w, DiffVar::T)?;
    let d_eps = log_derivative(hopf, legend, &w, DiffVar::Eps)?;
    let rhs = adjoint(
        hopf,
        legend,
        &ExtendedGroup::new(pair.phi_minus.clone(), EpsLaurent::zero()),
        &ExtendedLie::new(m.map_hom(|v| v.shift(-2)), var_t()),
    )?;
    Ok(vec![
        lie_report(
            hopf,
            "d_t w . w^-1 = beta + eps Z0",
            &d_t,
            &beta.with_z0(eps(1)),
            n,
        ),
        lie_report(
            hopf,
            "d_eps w . w^-1 = phi- (M/eps^2 + t Z0) phi-^-1",
            &d_eps,
            &rhs,
            n,
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::birkhoff::decompose;
    use crate::forest_hopf::RootedTree;
    use crate::toy_model::{build_character, ToyRule};

    fn tree(s: &str) -> RootedTree {
        RootedTree::parse(s).unwrap()
    }

    fn g(k: i64) -> EpsLaurent {
        EpsLaurent::from_poly(PolyExpr::term(
            Q::from_integer(1.into()),
            Monomial::one().with_exp(Var::G, k),
        ))
    }

    fn setup(n: usize) -> (HopfAlgebra, BirkhoffPair, BetaElement) {
        let h = HopfAlgebra::new(n);
        let phi = build_character(&h, &ToyRule::ladder(), n).unwrap();
        let pair = decompose(&h, &phi, &ExpLegend::unit_mass(), 8).unwrap();
        let beta = beta_function(&h, &pair).unwrap();
        (h, pair, beta)
    }

    fn all_pass(reports: &[FlowReport]) {
        for r in reports {
            assert!(r.pass, "{} failed: {:?}", r.identity, r.witnesses.first());
        }
    }

    #[test]
    fn beta_values() {
        let (h, _, beta) = setup(4);
        assert!(beta.infinitesimal && beta.pole_free() && beta.eps_free());
        assert_eq!(beta.values.tree_value(&tree("[]")), g(1));
        assert!(beta.values.tree_value(&tree("[[]]")).is_zero());
        assert!(beta.values.eval(&Forest::empty()).is_zero());
        all_pass(&beta_report(&h, &beta));
    }

    #[test]
    fn unit_mass_equations() {
        let (h, pair, beta) = setup(4);
        all_pass(&check_rg_equations(&h, &pair, &beta).unwrap());
        all_pass(&evolve_unit_mass(&h, &pair, &beta, 4).unwrap());
    }

    #[test]
    fn scattering_checks() {
        let (h, pair, beta) = setup(4);
        all_pass(&scattering(&h, &pair, &beta).unwrap());
        let p = scattering_profile(&h, &pair).unwrap();
        let q = EpsLaurent::var(Var::Q);
        let expect = (&(-&g(1)) + &(&q * &g(1))).shift(-1);
        assert_eq!(p.tree_value(&tree("[]")), expect);
    }

    #[test]
    fn recovery_checks() {
        let (h, pair, beta) = setup(4);
        all_pass(&recover_limits(&h, &pair, &beta, 4).unwrap());
    }

    #[test]
    fn m_and_eps_equations() {
        let (h, pair, beta) = setup(5);
        let m = compute_m(&h, &pair, &beta).unwrap();
        assert_eq!(m.tree_value(&tree("[]")), g(1));
        assert!(m.tree_value(&tree("[[]]")).is_zero());
        assert!(m.eval(&Forest::empty()).is_zero());
        assert!(m_pole_bound(&h, &m).pass);
        all_pass(&epsilon_ode_check(&h, &pair, &beta, &m, 4).unwrap());
        all_pass(&baker_function(&h, &pair, &beta, &m, 4).unwrap());
    }

    #[test]
    fn grading_inverse_examples() {
        let h = HopfAlgebra::new(2);
        let a = Functional::from_tree_values(
            Kind::Infinitesimal,
            2,
            [(tree("[]"), g(1)), (tree("[[]]"), g(2))],
        );
        let b = grading_inverse(&a).unwrap();
        assert_eq!(b.tree_value(&tree("[]")), g(1));
        assert_eq!(
            b.tree_value(&tree("[[]]")),
            g(2).scale(&Q::new(1.into(), 2.into()))
        );
        assert_eq!(b.y_compose(&h), a);
        assert_eq!(
            grading_inverse(&Functional::unit(2)).unwrap_err(),
            Error::NonzeroCounit
        );
        assert!(grading_inverse(&Functional::zero(2))
            .unwrap()
            .entries()
            .next()
            .is_none());
    }

    #[test]
    fn unit_character_is_trivial() {
        let h = HopfAlgebra::new(3);
        let pair = decompose(&h, &Functional::unit(3), &ExpLegend::unit_mass(), 4).unwrap();
        let beta = beta_function(&h, &pair).unwrap();
        all_pass(&check_rg_equations(&h, &pair, &beta).unwrap());
        all_pass(&scattering(&h, &pair, &beta).unwrap());
    }
}
