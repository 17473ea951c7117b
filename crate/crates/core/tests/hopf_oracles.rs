mod oracle;

use std::collections::BTreeMap;

use ckrg_core::forest_hopf::{
    check_axioms, count_rooted_trees, enumerate_trees, Forest, HopfAlgebra, RootedTree,
};

fn library_coproduct(h: &HopfAlgebra, t: &RootedTree) -> BTreeMap<(String, String), i64> {
    h.coproduct(&Forest::single(t.clone()))
        .unwrap()
        .iter()
        .map(|((a, b), c)| ((a.encoding(), b.encoding()), c))
        .collect()
}

#[test]
fn coproduct_matches_admissible_cuts() {
    let h = HopfAlgebra::new(6);
    for t in h.trees_up_to(6) {
        assert_eq!(
            library_coproduct(&h, &t),
            oracle::admissible_coproduct(t.encoding()),
            "{}",
            t.encoding()
        );
    }
}

#[test]
fn antipode_matches_full_cut_formula() {
    let h = HopfAlgebra::new(6);
    for t in h.trees_up_to(6) {
        let got: BTreeMap<String, i64> = h
            .antipode(&Forest::single(t.clone()))
            .unwrap()
            .iter()
            .map(|(f, c)| (f.encoding(), c))
            .collect();
        assert_eq!(
            got,
            oracle::full_cut_antipode(t.encoding()),
            "{}",
            t.encoding()
        );
    }
}

#[test]
fn hopf_axioms_through_degree_six() {
    let h = HopfAlgebra::new(6);
    for r in check_axioms(&h, 6).unwrap() {
        assert!(r.pass, "{}: {:?}", r.identity, r.witnesses.first());
        assert!(r.checked > 0, "{}", r.identity);
    }
}

#[test]
fn enumeration_matches_brute_force_and_recurrence() {
    let expected = [1, 1, 2, 4, 9, 20, 48, 115];
    for n in 1..=8 {
        let listed: Vec<String> = enumerate_trees(n)
            .iter()
            .map(|t| t.encoding().to_string())
            .collect();
        let brute = oracle::brute_force_trees(n);
        assert_eq!(listed.len(), brute.len(), "degree {n}");
        assert!(listed.iter().all(|e| brute.contains(e)), "degree {n}");
        assert_eq!(count_rooted_trees(n), expected[n - 1]);
        assert_eq!(listed.len() as u64, expected[n - 1]);
    }
}

#[test]
fn factorial_and_canonical_round_trip() {
    let h = HopfAlgebra::new(6);
    for t in h.trees_up_to(6) {
        assert_eq!(t.factorial(), oracle::tree_factorial(t.encoding()));
        assert_eq!(RootedTree::parse(t.encoding()).unwrap(), t);
    }
}

#[test]
fn listing_order_within_degree() {
    let listed: Vec<String> = enumerate_trees(3)
        .iter()
        .map(|t| t.encoding().to_string())
        .collect();
    assert_eq!(listed, ["[[][]]", "[[[]]]"]);
}
