//! Counterterms recomputed from scratch: ladder values from tree factorials,
//! preparation from the admissible-cut list, minimal subtraction on the
//! expanded series. Compared against the library's decomposition.

mod oracle;

use std::collections::BTreeMap;

use ckrg_core::birkhoff::decompose;
use ckrg_core::char_group::convolve;
use ckrg_core::exact_coeffs::{EpsLaurent, ExpLegend, Monomial, PolyExpr, Var, Q};
use ckrg_core::forest_hopf::HopfAlgebra;
use ckrg_core::toy_model::{build_character, ToyRule};

const TRUNC: i32 = 8;

/// `g^n E^n ε^{-n} / T!`.
fn ladder_value(enc: &str) -> EpsLaurent {
    let n = oracle::Nodes::parse(enc).len() as i64;
    let c = Q::new(1.into(), oracle::tree_factorial(enc).into());
    let m = Monomial::one().with_exp(Var::G, n).with_exp(Var::E, n);
    EpsLaurent::monomial(PolyExpr::term(c, m), -(n as i32))
}

fn on_forest(enc: &str, values: &BTreeMap<String, EpsLaurent>) -> EpsLaurent {
    if enc == "1" {
        return EpsLaurent::one();
    }
    enc.split('.')
        .fold(EpsLaurent::one(), |acc, t| &acc * &values[t])
}

struct Oracle {
    minus: BTreeMap<String, EpsLaurent>,
    plus: BTreeMap<String, EpsLaurent>,
}

fn bogoliubov(trees: &[String]) -> Oracle {
    let phi: BTreeMap<String, EpsLaurent> = trees
        .iter()
        .map(|t| (t.clone(), ladder_value(t).expand_e(TRUNC)))
        .collect();
    let mut minus = BTreeMap::new();
    let mut plus = BTreeMap::new();
    // Trees come in increasing degree, so every pruned piece is done.
    for t in trees {
        let mut bar = phi[t].clone();
        for ((pruned, trunk), c) in oracle::admissible_coproduct(t) {
            if pruned == "1" || trunk == "1" {
                continue;
            }
            let term = &on_forest(&pruned, &minus) * &phi[&trunk];
            bar = &bar + &term.scale(&Q::from_integer(c.into()));
        }
        minus.insert(t.clone(), -&bar.pole_part().unwrap());
        plus.insert(t.clone(), bar.regular_part().unwrap());
    }
    Oracle { minus, plus }
}

#[test]
fn counterterms_match_independent_recursion() {
    let h = HopfAlgebra::new(5);
    let trees: Vec<String> = h
        .trees_up_to(5)
        .iter()
        .map(|t| t.encoding().to_string())
        .collect();
    let expect = bogoliubov(&trees);
    let phi = build_character(&h, &ToyRule::ladder(), 5).unwrap();
    let pair = decompose(&h, &phi, &ExpLegend::unit_mass(), TRUNC).unwrap();
    for t in h.trees_up_to(5) {
        let e = t.encoding();
        assert_eq!(phi.tree_value(&t), ladder_value(e), "phi {e}");
        assert!(
            pair.phi_minus.tree_value(&t).agrees_with(&expect.minus[e]),
            "phi- {e}"
        );
        assert!(
            pair.phi_plus_expanded
                .tree_value(&t)
                .agrees_with(&expect.plus[e]),
            "phi+ {e}"
        );
    }
}

#[test]
fn convolution_matches_cut_sum() {
    let h = HopfAlgebra::new(5);
    let phi = build_character(&h, &ToyRule::ladder(), 5).unwrap();
    let pair = decompose(&h, &phi, &ExpLegend::unit_mass(), TRUNC).unwrap();
    let product = convolve(&h, &pair.phi_minus, &phi).unwrap();
    let minus: BTreeMap<String, EpsLaurent> = h
        .trees_up_to(5)
        .iter()
        .map(|t| (t.encoding().to_string(), pair.phi_minus.tree_value(t)))
        .collect();
    let values: BTreeMap<String, EpsLaurent> = h
        .trees_up_to(5)
        .iter()
        .map(|t| (t.encoding().to_string(), phi.tree_value(t)))
        .collect();
    for t in h.trees_up_to(5) {
        let mut sum = EpsLaurent::zero();
        for ((pruned, trunk), c) in oracle::admissible_coproduct(t.encoding()) {
            let term = &on_forest(&pruned, &minus) * &on_forest(&trunk, &values);
            sum = &sum + &term.scale(&Q::from_integer(c.into()));
        }
        assert_eq!(product.tree_value(&t), sum, "{}", t.encoding());
    }
}
