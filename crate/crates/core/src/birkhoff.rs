//! Birkhoff factorization `φ = φ₋⁻¹ ⋆ φ₊` by the Bogoliubov recursion
//! with minimal subtraction.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::char_group::{conv_inverse, convolve, Functional, Kind};
use crate::error::{Error, Result};
use crate::exact_coeffs::{DiffVar, EpsLaurent, ExpLegend, Q};
use crate::forest_hopf::{Forest, HopfAlgebra, RootedTree};
use crate::report::FlowReport;

#[derive(Clone, Debug)]
pub struct BirkhoffPair {
    /// The decomposed character, in closed form (powers of `E`).
    pub source: Functional,
    /// Counterterm; expanded, pure poles.
    pub phi_minus: Functional,
    /// Renormalized character in closed form, `φ₋ ⋆ φ`.
    pub phi_plus: Functional,
    /// Renormalized character as `(1 − R)φ̄`, expanded through `eps_trunc`.
    pub phi_plus_expanded: Functional,
    /// Bogoliubov preparation `φ̄` in closed form, per tree.
    pub phi_bar: BTreeMap<RootedTree, EpsLaurent>,
    pub legend: ExpLegend,
    pub eps_trunc: i32,
}

impl BirkhoffPair {
    pub fn cap(&self) -> usize {
        self.source.cap()
    }
}

/// `φ̄(X) = φ(X) + Σ′ φ₋(X′) φ(X″)` over the reduced coproduct, given the
/// counterterm on every tree of lower degree.
pub fn bogoliubov_bar(
    hopf: &HopfAlgebra,
    phi: &Functional,
    x: &RootedTree,
    phi_minus: &BTreeMap<RootedTree, EpsLaurent>,
) -> Result<EpsLaurent> {
    let xf = Forest::single(x.clone());
    let mut out = phi.tree_value(x);
    for (left, right, c) in hopf.reduced_coproduct(&xf)? {
        let mut minus = EpsLaurent::one();
        for t in left.trees() {
            let v = phi_minus
                .get(t)
                .ok_or_else(|| Error::MissingLowerDegree(t.encoding().to_string()))?;
            minus = &minus * v;
        }
        let term = &minus * &phi.eval(&right);
        out = &out + &term.scale(&Q::from_integer(c.into()));
    }
    Ok(out)
}

/// Runs the recursion degree by degree. `R` is applied to the expansion of
/// `φ̄` through `ε^{eps_trunc}`; the closed-form `φ₊` is rebuilt as `φ₋⋆φ`.
pub fn decompose(
    hopf: &HopfAlgebra,
    phi: &Functional,
    legend: &ExpLegend,
    eps_trunc: i32,
) -> Result<BirkhoffPair> {
    if !phi.is_character() {
        return Err(Error::NotACharacter);
    }
    let cap = phi.cap();
    if cap > hopf.cap() {
        return Err(Error::CapMismatch(cap, hopf.cap()));
    }
    if eps_trunc < 0 {
        return Err(Error::TruncationExhausted(format!(
            "eps truncation {eps_trunc} cannot hold the regular part"
        )));
    }
    let mut minus: BTreeMap<RootedTree, EpsLaurent> = BTreeMap::new();
    let mut plus: Vec<(RootedTree, EpsLaurent)> = Vec::new();
    let mut bars: BTreeMap<RootedTree, EpsLaurent> = BTreeMap::new();
    for n in 1..=cap {
        let done: Vec<(RootedTree, EpsLaurent, EpsLaurent, EpsLaurent)> = hopf
            .trees(n)
            .par_iter()
            .map(|t| {
                let bar = bogoliubov_bar(hopf, phi, t, &minus)?;
                let expanded = bar.expand_exp(legend, eps_trunc);
                let pole = expanded.pole_part()?;
                if !pole.is_exact() {
                    return Err(Error::TruncationExhausted(format!(
                        "pole part of {t} is cut off at eps^{}",
                        expanded.trunc_order().unwrap_or_default()
                    )));
                }
                Ok((t.clone(), bar, -&pole, expanded.regular_part()?))
            })
            .collect::<Result<_>>()?;
        for (t, bar, m, p) in done {
            bars.insert(t.clone(), bar);
            minus.insert(t.clone(), m);
            plus.push((t, p));
        }
    }
    let phi_minus = Functional::from_tree_values(Kind::Character, cap, minus);
    let phi_plus = convolve(hopf, &phi_minus, phi)?;
    Ok(BirkhoffPair {
        source: phi.clone(),
        phi_minus,
        phi_plus,
        phi_plus_expanded: Functional::from_tree_values(Kind::Character, cap, plus),
        phi_bar: bars,
        legend: legend.clone(),
        eps_trunc,
    })
}

/// `∂φ₋/∂v = 0` on every tree, for a flow variable `v`.
pub fn locality_check(hopf: &HopfAlgebra, pair: &BirkhoffPair, var: DiffVar) -> FlowReport {
    let name = match var {
        DiffVar::Tau(n) => format!("locality tau{n}"),
        _ => "locality".to_string(),
    };
    let mut report = FlowReport::new(name);
    for t in hopf.trees_up_to(pair.cap()) {
        let v = pair.phi_minus.tree_value(&t);
        report.record(t.encoding(), v.differentiate(var, &pair.legend));
    }
    report
}

/// `φ₋` has only strictly negative ε powers; the residual is its regular
/// part.
pub fn pure_pole_check(hopf: &HopfAlgebra, pair: &BirkhoffPair) -> FlowReport {
    let mut report = FlowReport::new("pure pole");
    for t in hopf.trees_up_to(pair.cap()) {
        let v = pair.phi_minus.tree_value(&t);
        match v.regular_part() {
            Ok(r) => report.record(t.encoding(), r),
            Err(e) => report.fail(t.encoding(), v, e.to_string()),
        }
    }
    report
}

/// `φ₊` expanded has no poles.
pub fn regularity_check(hopf: &HopfAlgebra, pair: &BirkhoffPair) -> FlowReport {
    let mut report = FlowReport::new("phi_plus regular");
    for t in hopf.trees_up_to(pair.cap()) {
        let v = pair.phi_plus_expanded.tree_value(&t);
        match v.pole_part() {
            Ok(r) => report.record(t.encoding(), r),
            Err(e) => report.fail(t.encoding(), v, e.to_string()),
        }
    }
    report
}

/// `φ₋⁻¹ ⋆ φ₊ = φ` on every forest up to the cap, in closed form and
/// expanded; also that the closed-form `φ₊` expands to the recursion's.
pub fn reconstruct_check(hopf: &HopfAlgebra, pair: &BirkhoffPair) -> Result<Vec<FlowReport>> {
    let cap = pair.cap();
    let order = pair.eps_trunc;
    let inv = conv_inverse(hopf, &pair.phi_minus)?;

    let closed = convolve(hopf, &inv, &pair.phi_plus)?;
    let r1 = FlowReport::from_forests(
        "reconstruct (closed form)",
        closed.residuals(hopf, &pair.source, cap),
    );

    let expanded = convolve(hopf, &inv, &pair.phi_plus_expanded)?;
    let target = pair.source.map_hom(|v| v.expand_exp(&pair.legend, order));
    let r2 = FlowReport::from_forests(
        "reconstruct (expanded)",
        expanded.residuals(hopf, &target, cap),
    );

    let mut r3 = FlowReport::new("phi_plus closed form expands to recursion");
    for t in hopf.trees_up_to(cap) {
        let a = pair.phi_plus.tree_value(&t).expand_exp(&pair.legend, order);
        r3.record(t.encoding(), &a - &pair.phi_plus_expanded.tree_value(&t));
    }
    Ok(vec![r1, r2, r3])
}
