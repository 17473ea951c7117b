//! Exact checks of the Hopf algebra axioms on every forest up to a degree.
//!
//! Residuals are reported as integers: the sum of absolute coefficient
//! differences between the two sides, so zero means equal.

use std::collections::BTreeMap;

use super::hopf::{counit, h_mul, HElement, HopfAlgebra, Tensor2};
use super::tree::{count_rooted_trees, enumerate_trees, Forest};
use crate::error::Result;
use crate::exact_coeffs::EpsLaurent;
use crate::report::FlowReport;

type Tensor3 = BTreeMap<(Forest, Forest, Forest), i64>;

fn add3(out: &mut Tensor3, k: (Forest, Forest, Forest), c: i64) {
    *out.entry(k).or_insert(0) += c;
}

fn distance<K: Ord>(a: &BTreeMap<K, i64>, b: &BTreeMap<K, i64>) -> i64 {
    let mut d = 0;
    for (k, c) in a {
        d += (c - b.get(k).copied().unwrap_or(0)).abs();
    }
    for (k, c) in b {
        if !a.contains_key(k) {
            d += c.abs();
        }
    }
    d
}

fn dense<K: Ord + Clone>(e: impl Iterator<Item = (K, i64)>) -> BTreeMap<K, i64> {
    let mut out = BTreeMap::new();
    for (k, c) in e {
        *out.entry(k).or_insert(0) += c;
    }
    out.retain(|_, c| *c != 0);
    out
}

fn h_dense(e: &HElement) -> BTreeMap<Forest, i64> {
    dense(e.iter().map(|(k, c)| (k.clone(), c)))
}

fn t_dense(e: &Tensor2) -> BTreeMap<(Forest, Forest), i64> {
    dense(e.iter().map(|(k, c)| (k.clone(), c)))
}

fn residual(d: i64) -> EpsLaurent {
    EpsLaurent::from_int(d)
}

/// `(Δ ⊗ id)Δ = (id ⊗ Δ)Δ`.
fn coassociativity(hopf: &HopfAlgebra, f: &Forest) -> Result<i64> {
    let mut left = Tensor3::new();
    let mut right = Tensor3::new();
    for ((a, b), c) in hopf.coproduct(f)?.iter() {
        for ((a1, a2), c1) in hopf.coproduct(a)?.iter() {
            add3(&mut left, (a1.clone(), a2.clone(), b.clone()), c * c1);
        }
        for ((b1, b2), c2) in hopf.coproduct(b)?.iter() {
            add3(&mut right, (a.clone(), b1.clone(), b2.clone()), c * c2);
        }
    }
    left.retain(|_, c| *c != 0);
    right.retain(|_, c| *c != 0);
    Ok(distance(&left, &right))
}

/// `(ε ⊗ id)Δ = id = (id ⊗ ε)Δ`.
fn counit_law(hopf: &HopfAlgebra, f: &Forest) -> Result<i64> {
    let delta = hopf.coproduct(f)?;
    let target = h_dense(&HElement::basis(f.clone()));
    let left = dense(delta.iter().map(|((a, b), c)| (b.clone(), c * counit(a))));
    let right = dense(delta.iter().map(|((a, b), c)| (a.clone(), c * counit(b))));
    Ok(distance(&left, &target) + distance(&right, &target))
}

/// `m(S ⊗ id)Δ = 1·ε = m(id ⊗ S)Δ`.
fn antipode_law(hopf: &HopfAlgebra, f: &Forest) -> Result<i64> {
    let mut left = HElement::zero();
    let mut right = HElement::zero();
    for ((a, b), c) in hopf.coproduct(f)?.iter() {
        left.add_all(&h_mul(&*hopf.antipode(a)?, &HElement::basis(b.clone())), c);
        right.add_all(&h_mul(&HElement::basis(a.clone()), &*hopf.antipode(b)?), c);
    }
    let mut target = HElement::zero();
    target.add(Forest::empty(), counit(f));
    let target = h_dense(&target);
    Ok(distance(&h_dense(&left), &target) + distance(&h_dense(&right), &target))
}

/// `S² = id`, as H is commutative.
fn involution(hopf: &HopfAlgebra, f: &Forest) -> Result<i64> {
    let twice = hopf.antipode_of(&*hopf.antipode(f)?)?;
    Ok(distance(
        &h_dense(&twice),
        &h_dense(&HElement::basis(f.clone())),
    ))
}

/// Every Hopf axiom on all forests of degree `≤ max_degree`, plus
/// multiplicativity of `Δ` and `S` on all pairs whose product fits.
pub fn check_axioms(hopf: &HopfAlgebra, max_degree: usize) -> Result<Vec<FlowReport>> {
    let forests = hopf.forests_up_to(max_degree);
    let mut coassoc = FlowReport::new("coassociativity");
    let mut counit_r = FlowReport::new("counit");
    let mut antipode = FlowReport::new("antipode");
    let mut square = FlowReport::new("antipode squares to identity");
    for f in &forests {
        let key = f.encoding();
        coassoc.record(key.clone(), residual(coassociativity(hopf, f)?));
        counit_r.record(key.clone(), residual(counit_law(hopf, f)?));
        antipode.record(key.clone(), residual(antipode_law(hopf, f)?));
        square.record(key, residual(involution(hopf, f)?));
    }

    let mut delta_mult = FlowReport::new("coproduct is multiplicative");
    let mut s_mult = FlowReport::new("antipode is multiplicative");
    for (i, f1) in forests.iter().enumerate() {
        for f2 in &forests[i..] {
            if f1.degree() + f2.degree() > max_degree.min(hopf.cap()) {
                continue;
            }
            let key = format!("{} * {}", f1.encoding(), f2.encoding());
            let prod = f1.product(f2);
            let lhs = t_dense(&*hopf.coproduct(&prod)?);
            let rhs = t_dense(&super::hopf::tensor_mul(
                &*hopf.coproduct(f1)?,
                &*hopf.coproduct(f2)?,
            ));
            delta_mult.record(key.clone(), residual(distance(&lhs, &rhs)));
            let lhs = h_dense(&*hopf.antipode(&prod)?);
            let rhs = h_dense(&h_mul(&*hopf.antipode(f1)?, &*hopf.antipode(f2)?));
            s_mult.record(key, residual(distance(&lhs, &rhs)));
        }
    }
    Ok(vec![
        coassoc, counit_r, antipode, square, delta_mult, s_mult,
    ])
}

/// Trees found by canonical generation against the counting recurrence.
pub fn check_tree_counts(max_degree: usize) -> FlowReport {
    let mut report = FlowReport::new("rooted tree counts");
    for n in 1..=max_degree {
        let found = enumerate_trees(n).len() as i64;
        let expected = count_rooted_trees(n) as i64;
        report.record(n.to_string(), residual(found - expected));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axioms_hold_to_degree_five() {
        let h = HopfAlgebra::new(5);
        for r in check_axioms(&h, 5).unwrap() {
            assert!(r.pass, "{}: {:?}", r.identity, r.witnesses.first());
            assert!(r.checked > 0);
        }
        assert!(check_tree_counts(6).pass);
    }
}
