//! Characters of the tree Hopf algebra under convolution, infinitesimal
//! characters under the bracket, the grading action and the semidirect
//! extensions by `Z₀`.

mod extended;
mod functional;

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact_coeffs::{EpsLaurent, EpsLaurentJson, ExpLegend, Q};
use crate::forest_hopf::{Forest, HopfAlgebra, RootedTree};

pub use extended::{
    adjoint, exp_of_angle, ext_bracket, log_derivative, pair_exp, pair_inverse, pair_mul,
    ExtendedGroup, ExtendedLie,
};
pub use functional::{Functional, Kind};

fn check_cap(hopf: &HopfAlgebra, cap: usize) -> Result<()> {
    if cap > hopf.cap() {
        return Err(Error::CapMismatch(cap, hopf.cap()));
    }
    Ok(())
}

/// `Σ a(X′) b(X″)` over `Δ(X)` for each target, with the two sides given as
/// lookup functions on forests.
fn convolve_on<A, B>(hopf: &HopfAlgebra, targets: &[Forest], a: A, b: B) -> Result<Vec<EpsLaurent>>
where
    A: Fn(&Forest) -> EpsLaurent + Sync,
    B: Fn(&Forest) -> EpsLaurent + Sync,
{
    targets
        .par_iter()
        .map(|x| {
            let mut acc = EpsLaurent::zero();
            for ((l, r), c) in hopf.coproduct(x)?.iter() {
                let av = a(l);
                if av.is_zero() && av.is_exact() {
                    continue;
                }
                let term = &av * &b(r);
                acc = &acc + &term.scale(&Q::from_integer(c.into()));
            }
            Ok(acc)
        })
        .collect()
}

/// `a ⋆ b`. Two characters give a character; anything else is computed on
/// every forest and returned as a general functional.
pub fn convolve(hopf: &HopfAlgebra, a: &Functional, b: &Functional) -> Result<Functional> {
    let cap = a.cap().min(b.cap());
    check_cap(hopf, cap)?;
    let (ta, tb) = (a.table(hopf), b.table(hopf));
    let lookup_a = |f: &Forest| ta.get(f).cloned().unwrap_or_default();
    let lookup_b = |f: &Forest| tb.get(f).cloned().unwrap_or_default();
    if a.is_character() && b.is_character() {
        let trees = hopf.trees_up_to(cap);
        let targets: Vec<Forest> = trees.iter().cloned().map(Forest::single).collect();
        let values = convolve_on(hopf, &targets, lookup_a, lookup_b)?;
        return Ok(Functional::from_tree_values(
            Kind::Character,
            cap,
            trees.into_iter().zip(values),
        ));
    }
    let targets = hopf.forests_up_to(cap);
    let values = convolve_on(hopf, &targets, lookup_a, lookup_b)?;
    Ok(Functional::general(cap, targets.into_iter().zip(values)))
}

/// `φ⁻¹ = φ ∘ S`.
pub fn conv_inverse(hopf: &HopfAlgebra, a: &Functional) -> Result<Functional> {
    if !a.is_character() {
        return Err(Error::NotACharacter);
    }
    check_cap(hopf, a.cap())?;
    let table = a.table(hopf);
    let trees = hopf.trees_up_to(a.cap());
    let values: Vec<EpsLaurent> = trees
        .par_iter()
        .map(|t| {
            let s = hopf.antipode(&Forest::single(t.clone()))?;
            let mut acc = EpsLaurent::zero();
            for (f, c) in s.iter() {
                acc = &acc + &table[f].scale(&Q::from_integer(c.into()));
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok(Functional::from_tree_values(
        Kind::Character,
        a.cap(),
        trees.into_iter().zip(values),
    ))
}

pub fn conv_unit(cap: usize) -> Functional {
    Functional::unit(cap)
}

/// `[a, b] = a⋆b − b⋆a` for arbitrary functionals.
pub fn commutator(hopf: &HopfAlgebra, a: &Functional, b: &Functional) -> Result<Functional> {
    Ok(convolve(hopf, a, b)?.sub(hopf, &convolve(hopf, b, a)?))
}

/// Bracket on infinitesimal characters; the result is again one.
pub fn lie_bracket(hopf: &HopfAlgebra, d1: &Functional, d2: &Functional) -> Result<Functional> {
    if !d1.is_infinitesimal() || !d2.is_infinitesimal() {
        return Err(Error::NotInfinitesimal);
    }
    let cap = d1.cap().min(d2.cap());
    check_cap(hopf, cap)?;
    let trees = hopf.trees_up_to(cap);
    let targets: Vec<Forest> = trees.iter().cloned().map(Forest::single).collect();
    let ab = convolve_on(hopf, &targets, |f| d1.eval(f), |f| d2.eval(f))?;
    let ba = convolve_on(hopf, &targets, |f| d2.eval(f), |f| d1.eval(f))?;
    Ok(Functional::from_tree_values(
        Kind::Infinitesimal,
        cap,
        trees
            .into_iter()
            .zip(ab.iter().zip(&ba).map(|(x, y)| x - y)),
    ))
}

/// `θ_s`: the value on a degree-n forest is multiplied by `e^{ns}`. The
/// angle must be a combination of the legend exponent and `−t`, so that
/// `e^s` is a monomial `E^k q^j`.
pub fn theta_act(a: &Functional, angle: &EpsLaurent, legend: &ExpLegend) -> Result<Functional> {
    Ok(a.theta_scale(&exp_of_angle(angle, legend)?))
}

pub fn y_compose(hopf: &HopfAlgebra, a: &Functional) -> Functional {
    a.y_compose(hopf)
}

/// Repeated convolution `u^{⋆k}` on trees, for `u` given on all forests and
/// vanishing on `1`. Returns the tree values of `Σ_k coeff(k)·u^{⋆k}`.
fn power_series_on_trees<C: Fn(usize) -> Q>(
    hopf: &HopfAlgebra,
    cap: usize,
    u: &BTreeMap<Forest, EpsLaurent>,
    coeff: C,
) -> Result<Vec<(RootedTree, EpsLaurent)>> {
    let forests = hopf.forests_up_to(cap);
    // power[f] = u^{⋆k}(f) on every forest; u^{⋆k} vanishes below degree k.
    let mut power: BTreeMap<Forest, EpsLaurent> = u.clone();
    let trees = hopf.trees_up_to(cap);
    let mut sums: Vec<EpsLaurent> = trees
        .iter()
        .map(|t| power[&Forest::single(t.clone())].scale(&coeff(1)))
        .collect();
    for k in 2..=cap {
        let targets: Vec<Forest> = forests
            .iter()
            .filter(|f| f.degree() >= k)
            .cloned()
            .collect();
        let values = convolve_on(
            hopf,
            &targets,
            |f| u.get(f).cloned().unwrap_or_default(),
            |f| power.get(f).cloned().unwrap_or_default(),
        )?;
        let next: BTreeMap<Forest, EpsLaurent> = targets.into_iter().zip(values).collect();
        let c = coeff(k);
        for (t, sum) in trees.iter().zip(sums.iter_mut()) {
            if let Some(v) = next.get(&Forest::single(t.clone())) {
                *sum = &*sum + &v.scale(&c);
            }
        }
        power = next;
    }
    Ok(trees.into_iter().zip(sums).collect())
}

fn factorial(k: usize) -> Q {
    Q::from_integer((1..=k).fold(num_bigint::BigInt::from(1), |acc, j| acc * j))
}

/// `exp_⋆(d) = Σ d^{⋆k}/k!`, a character; the series stops at the degree.
pub fn conv_exp(hopf: &HopfAlgebra, d: &Functional) -> Result<Functional> {
    if !d.is_infinitesimal() {
        return Err(Error::NotInfinitesimal);
    }
    check_cap(hopf, d.cap())?;
    let u = d.table(hopf);
    let values = power_series_on_trees(hopf, d.cap(), &u, |k| factorial(k).recip())?;
    Ok(Functional::from_tree_values(
        Kind::Character,
        d.cap(),
        values,
    ))
}

/// `log_⋆(a) = Σ (−1)^{k+1}(a − 1)^{⋆k}/k`, an infinitesimal character.
pub fn conv_log(hopf: &HopfAlgebra, a: &Functional) -> Result<Functional> {
    if !a.is_character() {
        return Err(Error::NotACharacter);
    }
    check_cap(hopf, a.cap())?;
    let mut u = a.table(hopf);
    u.remove(&Forest::empty());
    let values = power_series_on_trees(hopf, a.cap(), &u, |k| {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        Q::new(sign.into(), (k as i64).into())
    })?;
    Ok(Functional::from_tree_values(
        Kind::Infinitesimal,
        a.cap(),
        values,
    ))
}

/// JSON dump: canonical tree encoding to ε-Laurent value.
pub fn to_json(a: &Functional) -> BTreeMap<String, EpsLaurentJson> {
    a.entries()
        .map(|(f, v)| (f.encoding(), EpsLaurentJson::from(v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_coeffs::{PolyExpr, Var};

    fn tree(s: &str) -> RootedTree {
        RootedTree::parse(s).unwrap()
    }

    fn f(s: &str) -> Forest {
        Forest::parse(s).unwrap()
    }

    fn var(v: Var) -> EpsLaurent {
        EpsLaurent::var(v)
    }

    fn sym(name: usize) -> EpsLaurent {
        EpsLaurent::var(Var::Tau(name))
    }

    /// A character with a distinct symbol on every tree up to degree `n`.
    fn generic(hopf: &HopfAlgebra, kind: Kind, n: usize, offset: usize) -> Functional {
        let trees = hopf.trees_up_to(n);
        Functional::from_tree_values(
            kind,
            n,
            trees
                .into_iter()
                .enumerate()
                .map(|(i, t)| (t, sym(offset + i + 1))),
        )
    }

    #[test]
    fn unit_values() {
        let u = conv_unit(3);
        assert_eq!(u.eval(&Forest::empty()), EpsLaurent::one());
        assert!(u.eval(&f("[]")).is_zero());
        assert!(u.eval(&f("[[]]")).is_zero());
    }

    #[test]
    fn convolution_on_l2() {
        let h = HopfAlgebra::new(4);
        let a = generic(&h, Kind::Character, 4, 0);
        let b = generic(&h, Kind::Character, 4, 20);
        let ab = convolve(&h, &a, &b).unwrap();
        assert!(ab.is_character());
        let (dot, l2) = (tree("[]"), tree("[[]]"));
        let expect = &(&a.tree_value(&l2) + &(&a.tree_value(&dot) * &b.tree_value(&dot)))
            + &b.tree_value(&l2);
        assert_eq!(ab.tree_value(&l2), expect);
        let u = conv_unit(4);
        assert_eq!(convolve(&h, &u, &a).unwrap(), a);
        assert_eq!(convolve(&h, &a, &u).unwrap(), a);
    }

    #[test]
    fn inverse_examples() {
        let h = HopfAlgebra::new(4);
        let a = generic(&h, Kind::Character, 4, 0);
        let inv = conv_inverse(&h, &a).unwrap();
        let (dot, l2) = (tree("[]"), tree("[[]]"));
        assert_eq!(inv.eval(&Forest::empty()), EpsLaurent::one());
        assert_eq!(inv.tree_value(&dot), -&a.tree_value(&dot));
        assert_eq!(
            inv.tree_value(&l2),
            &(-&a.tree_value(&l2)) + &a.tree_value(&dot).pow(2)
        );
        assert_eq!(convolve(&h, &a, &inv).unwrap(), conv_unit(4));
        assert_eq!(convolve(&h, &inv, &a).unwrap(), conv_unit(4));
        let d = generic(&h, Kind::Infinitesimal, 4, 0);
        assert_eq!(conv_inverse(&h, &d).unwrap_err(), Error::NotACharacter);
    }

    #[test]
    fn bracket_examples() {
        let h = HopfAlgebra::new(4);
        let d1 = generic(&h, Kind::Infinitesimal, 4, 0);
        let d2 = generic(&h, Kind::Infinitesimal, 4, 20);
        assert!(lie_bracket(&h, &d1, &d1)
            .unwrap()
            .entries()
            .next()
            .is_none());
        let br = lie_bracket(&h, &d1, &d2).unwrap();
        assert!(br.tree_value(&tree("[]")).is_zero());
        let (dot, l2) = (tree("[]"), tree("[[]]"));
        let expect = &(&(&d1.tree_value(&dot) * &d2.tree_value(&l2))
            + &(&d1.tree_value(&l2) * &d2.tree_value(&dot)))
            - &(&(&d2.tree_value(&dot) * &d1.tree_value(&l2))
                + &(&d2.tree_value(&l2) * &d1.tree_value(&dot)));
        assert_eq!(br.tree_value(&tree("[[[]]]")), expect);
        let back = lie_bracket(&h, &d2, &d1).unwrap();
        assert_eq!(back.neg(&h), br);
        let a = generic(&h, Kind::Character, 4, 0);
        assert_eq!(
            lie_bracket(&h, &a, &d1).unwrap_err(),
            Error::NotInfinitesimal
        );
    }

    #[test]
    fn theta_examples() {
        let h = HopfAlgebra::new(3);
        let legend = ExpLegend::unit_mass();
        let a = generic(&h, Kind::Character, 3, 0);
        let inv = conv_inverse(&h, &a).unwrap();
        let minus_t = -&var(Var::T);
        let th = theta_act(&inv, &minus_t, &legend).unwrap();
        let dot = tree("[]");
        assert_eq!(
            th.tree_value(&dot),
            inv.tree_value(&dot).mul_poly(&PolyExpr::var(Var::Q))
        );
        assert_eq!(theta_act(&a, &EpsLaurent::zero(), &legend).unwrap(), a);
        assert_eq!(
            theta_act(&conv_unit(3), &minus_t, &legend).unwrap(),
            conv_unit(3)
        );
    }

    #[test]
    fn y_is_a_derivation() {
        let h = HopfAlgebra::new(4);
        let a = generic(&h, Kind::Character, 4, 0);
        let b = generic(&h, Kind::Character, 4, 20);
        let lhs = y_compose(&h, &convolve(&h, &a, &b).unwrap());
        let rhs = convolve(&h, &y_compose(&h, &a), &b)
            .unwrap()
            .add(&h, &convolve(&h, &a, &y_compose(&h, &b)).unwrap());
        assert!(lhs.residuals(&h, &rhs, 4).iter().all(|(_, r)| r.is_zero()));
        let ya = y_compose(&h, &a);
        assert!(ya.eval(&Forest::empty()).is_zero());
        assert_eq!(
            ya.eval(&f("[[]]")),
            a.tree_value(&tree("[[]]"))
                .scale(&Q::from_integer(2.into()))
        );
    }

    #[test]
    fn exp_log_round_trip() {
        let h = HopfAlgebra::new(5);
        let d = generic(&h, Kind::Infinitesimal, 5, 0);
        let e = conv_exp(&h, &d).unwrap();
        let (dot, l2) = (tree("[]"), tree("[[]]"));
        assert_eq!(e.tree_value(&dot), d.tree_value(&dot));
        assert_eq!(
            e.tree_value(&l2),
            &d.tree_value(&l2) + &d.tree_value(&dot).pow(2).scale(&Q::new(1.into(), 2.into()))
        );
        assert_eq!(conv_log(&h, &e).unwrap(), d);
        let a = generic(&h, Kind::Character, 5, 0);
        let l = conv_log(&h, &a).unwrap();
        assert_eq!(l.tree_value(&dot), a.tree_value(&dot));
        assert_eq!(conv_exp(&h, &l).unwrap(), a);
        assert_eq!(conv_exp(&h, &Functional::zero(5)).unwrap(), conv_unit(5));
        assert!(conv_log(&h, &conv_unit(5))
            .unwrap()
            .entries()
            .next()
            .is_none());
    }

    #[test]
    fn associativity() {
        let h = HopfAlgebra::new(4);
        let a = generic(&h, Kind::Character, 4, 0);
        let b = generic(&h, Kind::Character, 4, 10);
        let c = generic(&h, Kind::Character, 4, 20);
        let l = convolve(&h, &convolve(&h, &a, &b).unwrap(), &c).unwrap();
        let r = convolve(&h, &a, &convolve(&h, &b, &c).unwrap()).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn json_dump_uses_encodings() {
        let h = HopfAlgebra::new(2);
        let a = generic(&h, Kind::Character, 2, 0);
        let j = to_json(&a);
        assert_eq!(j.keys().cloned().collect::<Vec<_>>(), vec!["[[]]", "[]"]);
    }
}
