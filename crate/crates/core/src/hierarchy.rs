//! Multi-time flows generated by `Σ τ_n ε^n Z₀`.
//!
//! The dressed character keeps the exponential monomial `E`, now standing
//! for `exp(Σ τ_n ε^n)`; the decomposition and β are computed exactly as at
//! unit mass with that legend.

use crate::birkhoff::{decompose, locality_check, BirkhoffPair};
use crate::char_group::{
    ext_bracket, log_derivative, theta_act, ExtendedGroup, ExtendedLie, Functional,
};
use crate::error::{Error, Result};
use crate::exact_coeffs::{DiffVar, EpsLaurent, ExpLegend, Var};
use crate::forest_hopf::HopfAlgebra;
use crate::report::FlowReport;
use crate::rg_flows::{beta_function, check_rg_equations, BetaElement};

/// The times `τ₁ … τ_K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TimeVector {
    depth: usize,
}

impl TimeVector {
    pub fn new(depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidDepth);
        }
        Ok(Self { depth })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn legend(&self) -> ExpLegend {
        ExpLegend::hierarchy(1..=self.depth)
    }

    /// `Σ τ_n ε^n`.
    pub fn angle(&self) -> EpsLaurent {
        self.legend().exponent()
    }
}

/// Degree-n values scaled by `exp(n Σ τ_m ε^m)`, i.e. by `E^n`.
pub fn apply_times(phi: &Functional, tv: &TimeVector) -> Result<Functional> {
    theta_act(phi, &tv.angle(), &tv.legend())
}

/// A dressed decomposition together with its β.
#[derive(Clone, Debug)]
pub struct HierarchyRun {
    pub times: TimeVector,
    pub pair: BirkhoffPair,
    pub beta: BetaElement,
}

/// Dresses the time-zero character `phi` and decomposes it.
pub fn dress_and_decompose(
    hopf: &HopfAlgebra,
    phi: &Functional,
    tv: &TimeVector,
    eps_trunc: i32,
) -> Result<HierarchyRun> {
    let dressed = apply_times(phi, tv)?;
    let pair = decompose(hopf, &dressed, &tv.legend(), eps_trunc)?;
    let beta = beta_function(hopf, &pair)?;
    Ok(HierarchyRun {
        times: *tv,
        pair,
        beta,
    })
}

/// For each `n ≤ K`: `∂φ₋/∂τ_n = 0`, `∂φ̃₊/∂τ_n · φ̃₊⁻¹ = ε^{n−1}(β + εZ₀)`
/// with `φ̃₊ = (φ₊, Σ τ_m ε^m)`, and the right side is free of the times.
pub fn hierarchy_residual(hopf: &HopfAlgebra, run: &HierarchyRun) -> Result<Vec<FlowReport>> {
    let (pair, beta, tv) = (&run.pair, &run.beta, &run.times);
    let cap = pair.cap();
    let legend = tv.legend();
    let tilde = ExtendedGroup::new(pair.phi_plus.clone(), tv.angle());

    let mut minus = FlowReport::new("d phi- / d tau_n = 0");
    let mut flows = FlowReport::new("d_tau_n phi~+ . phi~+^-1 = eps^(n-1) (beta + eps Z0)");
    let mut free = FlowReport::new("beta independent of tau_n");
    for n in 1..=tv.depth() {
        let var = DiffVar::Tau(n);
        for w in locality_check(hopf, pair, var).witnesses {
            minus.record_n(w.tree, n, w.residual);
        }
        minus.checked +=
            hopf.trees_up_to(cap).len() - minus.witnesses.iter().filter(|w| w.n == Some(n)).count();

        let lhs = log_derivative(hopf, &legend, &tilde, var)?;
        let k = n as i32;
        let rhs = ExtendedLie::new(
            beta.values.map_hom(|v| v.shift(k - 1)),
            EpsLaurent::eps_pow(k),
        );
        let (res, z) = lhs.residuals(hopf, &rhs, cap);
        for (f, r) in res {
            flows.record_n(f.encoding(), n, r);
        }
        flows.record_n("Z0", n, z);

        for t in hopf.trees_up_to(cap) {
            free.record_n(
                t.encoding(),
                n,
                beta.values.tree_value(&t).differentiate(var, &legend),
            );
        }
    }
    Ok(vec![minus, flows, free])
}

/// Mixed derivatives of `φ̃₊` commute, and the generators
/// `A_n = ∂_{τn}φ̃₊·φ̃₊⁻¹` satisfy `∂_m A_n − ∂_n A_m = [A_m, A_n]`.
pub fn flow_commutativity(hopf: &HopfAlgebra, run: &HierarchyRun) -> Result<Vec<FlowReport>> {
    let (pair, tv) = (&run.pair, &run.times);
    let cap = pair.cap();
    let legend = tv.legend();
    let tilde = ExtendedGroup::new(pair.phi_plus.clone(), tv.angle());
    let generators: Vec<ExtendedLie> = (1..=tv.depth())
        .map(|n| log_derivative(hopf, &legend, &tilde, DiffVar::Tau(n)))
        .collect::<Result<_>>()?;

    let mut mixed = FlowReport::new("d_m d_n phi~+ = d_n d_m phi~+");
    let mut curvature = FlowReport::new("d_m A_n - d_n A_m = [A_m, A_n]");
    for m in 1..=tv.depth() {
        for n in (m + 1)..=tv.depth() {
            let (dm, dn) = (DiffVar::Tau(m), DiffVar::Tau(n));
            for t in hopf.trees_up_to(cap) {
                let key = format!("{} (tau{m}, tau{n})", t.encoding());
                let v = pair.phi_plus.tree_value(&t);
                let a = v.differentiate(dn, &legend).differentiate(dm, &legend);
                let b = v.differentiate(dm, &legend).differentiate(dn, &legend);
                mixed.record_n(key.clone(), n, &a - &b);
                let e = pair.phi_plus_expanded.tree_value(&t);
                let a = e.differentiate(dn, &legend).differentiate(dm, &legend);
                let b = e.differentiate(dm, &legend).differentiate(dn, &legend);
                mixed.record_n(format!("{key} expanded"), n, &a - &b);
            }
            let angle = &tv.angle();
            let mixed_angle = &angle.differentiate(dn, &legend).differentiate(dm, &legend)
                - &angle.differentiate(dm, &legend).differentiate(dn, &legend);
            mixed.record_n(format!("Z0 (tau{m}, tau{n})"), n, mixed_angle);

            let (am, an) = (&generators[m - 1], &generators[n - 1]);
            let d_m_an = an.functional.differentiate(hopf, dm, &legend);
            let d_n_am = am.functional.differentiate(hopf, dn, &legend);
            let bracket = ext_bracket(hopf, am, an)?;
            let lhs = d_m_an.sub(hopf, &d_n_am);
            for (f, r) in lhs.residuals(hopf, &bracket.functional, cap) {
                curvature.record_n(format!("{} (tau{m}, tau{n})", f.encoding()), n, r);
            }
            let z = &(&an.z0.differentiate(dm, &legend) - &am.z0.differentiate(dn, &legend))
                - &bracket.z0;
            curvature.record_n(format!("Z0 (tau{m}, tau{n})"), n, z);
        }
    }
    Ok(vec![mixed, curvature])
}

/// `τ₂ = … = τ_K = 0`, then `τ₁ → t`.
fn reduce(v: &EpsLaurent, depth: usize) -> EpsLaurent {
    let mut out = v.clone();
    for n in 2..=depth {
        out = out.set_zero(Var::Tau(n));
    }
    out.rename(Var::Tau(1), Var::T)
}

fn reduce_functional(a: &Functional, depth: usize) -> Functional {
    a.map_hom(|v| reduce(v, depth))
}

/// Bit-exact comparison of a reduced value with its unit-mass counterpart.
fn compare(report: &mut FlowReport, key: String, got: &EpsLaurent, want: &EpsLaurent) {
    let diff = got - want;
    if got == want || !diff.is_zero() {
        report.record(key, diff);
    } else {
        report.fail(key, diff, "equal values but different truncation orders");
    }
}

/// Setting the higher times to zero and renaming `τ₁ → t` reproduces the
/// unit-mass decomposition, β and the unit-mass identity reports exactly.
/// Also checks that the dressed counterterm equals the undressed one.
pub fn reduction_check(
    hopf: &HopfAlgebra,
    run: &HierarchyRun,
    unit: &BirkhoffPair,
    unit_beta: &BetaElement,
) -> Result<Vec<FlowReport>> {
    let k = run.times.depth();
    let pair = &run.pair;
    let reduced = BirkhoffPair {
        source: reduce_functional(&pair.source, k),
        phi_minus: reduce_functional(&pair.phi_minus, k),
        phi_plus: reduce_functional(&pair.phi_plus, k),
        phi_plus_expanded: reduce_functional(&pair.phi_plus_expanded, k),
        phi_bar: pair
            .phi_bar
            .iter()
            .map(|(t, v)| (t.clone(), reduce(v, k)))
            .collect(),
        legend: ExpLegend::unit_mass(),
        eps_trunc: pair.eps_trunc,
    };

    let mut values = FlowReport::new("tau_n = 0 (n >= 2) reproduces the unit-mass decomposition");
    let mut same_minus = FlowReport::new("phi- of the dressed character equals phi- at unit mass");
    for t in hopf.trees_up_to(pair.cap().min(unit.cap())) {
        let e = t.encoding();
        let fields: [(&str, &Functional, &Functional); 5] = [
            ("source", &reduced.source, &unit.source),
            ("phi-", &reduced.phi_minus, &unit.phi_minus),
            ("phi+", &reduced.phi_plus, &unit.phi_plus),
            (
                "phi+ expanded",
                &reduced.phi_plus_expanded,
                &unit.phi_plus_expanded,
            ),
            (
                "beta",
                &reduce_functional(&run.beta.values, k),
                &unit_beta.values,
            ),
        ];
        for (name, a, b) in fields {
            compare(
                &mut values,
                format!("{e} {name}"),
                &a.tree_value(&t),
                &b.tree_value(&t),
            );
        }
        if let (Some(a), Some(b)) = (reduced.phi_bar.get(&t), unit.phi_bar.get(&t)) {
            compare(&mut values, format!("{e} phi-bar"), a, b);
        }
        compare(
            &mut same_minus,
            e.to_string(),
            &pair.phi_minus.tree_value(&t),
            &unit.phi_minus.tree_value(&t),
        );
    }

    let mut suite = FlowReport::new("tau_n = 0 (n >= 2) reproduces the unit-mass reports");
    let reduced_beta = beta_function(hopf, &reduced)?;
    let got = check_rg_equations(hopf, &reduced, &reduced_beta)?;
    let want = check_rg_equations(hopf, unit, unit_beta)?;
    for (a, b) in got.iter().zip(&want) {
        if a == b {
            suite.record(a.identity.clone(), EpsLaurent::zero());
        } else {
            suite.fail(a.identity.clone(), EpsLaurent::zero(), "report differs");
        }
    }
    if got.len() != want.len() {
        suite.fail("", EpsLaurent::zero(), "different number of reports");
    }
    Ok(vec![values, same_minus, suite])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_coeffs::{Monomial, PolyExpr, Q};
    use crate::forest_hopf::RootedTree;
    use crate::toy_model::{build_character, ToyRule};

    fn bare(h: &HopfAlgebra, n: usize) -> Functional {
        let legend = ExpLegend::unit_mass();
        build_character(h, &ToyRule::ladder(), n)
            .unwrap()
            .map_hom(|v| v.at_zero_flow(&legend))
    }

    #[test]
    fn dressing_degree_one() {
        let h = HopfAlgebra::new(2);
        let tv = TimeVector::new(2).unwrap();
        let phi = apply_times(&bare(&h, 2), &tv).unwrap();
        let expect = EpsLaurent::monomial(
            PolyExpr::term(
                Q::from_integer(1.into()),
                Monomial::one().with_exp(Var::G, 1).with_exp(Var::E, 1),
            ),
            -1,
        );
        assert_eq!(phi.tree_value(&RootedTree::node()), expect);
        assert_eq!(
            apply_times(&Functional::unit(2), &tv).unwrap(),
            Functional::unit(2)
        );
        assert_eq!(TimeVector::new(0).unwrap_err(), Error::InvalidDepth);
    }

    #[test]
    fn hierarchy_flows() {
        let h = HopfAlgebra::new(4);
        let tv = TimeVector::new(3).unwrap();
        let run = dress_and_decompose(&h, &bare(&h, 4), &tv, 8).unwrap();
        for r in hierarchy_residual(&h, &run).unwrap() {
            assert!(r.pass, "{}: {:?}", r.identity, r.witnesses.first());
        }
        for r in flow_commutativity(&h, &run).unwrap() {
            assert!(r.pass, "{}: {:?}", r.identity, r.witnesses.first());
        }
    }

    #[test]
    fn reduction_to_unit_mass() {
        let h = HopfAlgebra::new(4);
        let tv = TimeVector::new(3).unwrap();
        let run = dress_and_decompose(&h, &bare(&h, 4), &tv, 8).unwrap();
        let phi = build_character(&h, &ToyRule::ladder(), 4).unwrap();
        let unit = decompose(&h, &phi, &ExpLegend::unit_mass(), 8).unwrap();
        let unit_beta = beta_function(&h, &unit).unwrap();
        for r in reduction_check(&h, &run, &unit, &unit_beta).unwrap() {
            assert!(r.pass, "{}: {:?}", r.identity, r.witnesses.first());
        }
    }

    #[test]
    fn wrong_beta_is_flagged() {
        let h = HopfAlgebra::new(3);
        let tv = TimeVector::new(2).unwrap();
        let mut run = dress_and_decompose(&h, &bare(&h, 3), &tv, 6).unwrap();
        run.beta.values = run.beta.values.map_hom(|v| v.shift(1));
        let reports = hierarchy_residual(&h, &run).unwrap();
        assert!(reports[0].pass);
        assert!(!reports[1].pass);
        assert!(reports[1].witnesses.iter().all(|w| w.n.is_some()));
    }
}
