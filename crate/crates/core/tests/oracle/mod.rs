//! Independent reference implementations used to cross-check the library:
//! admissible cuts on explicit node arrays, a full-cut antipode formula and
//! brute-force enumeration of rooted trees. Nothing here calls into the
//! library's tree code; trees are exchanged as bracket strings.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

/// A rooted tree as a parent array; node 0 is the root.
#[derive(Clone, Debug)]
pub struct Nodes {
    pub parent: Vec<Option<usize>>,
}

impl Nodes {
    pub fn parse(enc: &str) -> Nodes {
        let mut parent = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        for b in enc.bytes() {
            match b {
                b'[' => {
                    parent.push(stack.last().copied());
                    stack.push(parent.len() - 1);
                }
                b']' => {
                    stack.pop().expect("balanced");
                }
                _ => panic!("unexpected byte in {enc}"),
            }
        }
        assert!(stack.is_empty(), "unbalanced {enc}");
        Nodes { parent }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    fn children(&self, v: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&c| self.parent[c] == Some(v))
            .collect()
    }

    /// Is `a` a proper ancestor of `b`?
    fn ancestor(&self, a: usize, b: usize) -> bool {
        let mut cur = self.parent[b];
        while let Some(p) = cur {
            if p == a {
                return true;
            }
            cur = self.parent[p];
        }
        false
    }

    /// Canonical encoding of the subtree at `v`, skipping the subtrees
    /// hanging below any node in `cut`.
    fn encode_below(&self, v: usize, cut: &BTreeSet<usize>) -> String {
        let mut kids: Vec<String> = self
            .children(v)
            .into_iter()
            .filter(|c| !cut.contains(c))
            .map(|c| self.encode_below(c, cut))
            .collect();
        kids.sort();
        format!("[{}]", kids.concat())
    }

    pub fn encode(&self) -> String {
        self.encode_below(0, &BTreeSet::new())
    }

    /// All components obtained by removing the edges above the nodes in
    /// `cut`: one per cut node plus the root component.
    fn pieces(&self, cut: &BTreeSet<usize>) -> (Vec<String>, String) {
        let pruned = cut.iter().map(|&c| self.encode_below(c, cut)).collect();
        (pruned, self.encode_below(0, cut))
    }
}

/// Canonical forest encoding from tree encodings.
pub fn forest(mut trees: Vec<String>) -> String {
    if trees.is_empty() {
        return "1".into();
    }
    trees.sort();
    trees.join(".")
}

fn subsets(items: &[usize]) -> impl Iterator<Item = BTreeSet<usize>> + '_ {
    (0u64..(1 << items.len())).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect()
    })
}

/// `Δ(T) = T ⊗ 1 + 1 ⊗ T + Σ_c P^c(T) ⊗ R^c(T)` over admissible cuts, with
/// the pruned forest on the left and the trunk on the right.
pub fn admissible_coproduct(enc: &str) -> BTreeMap<(String, String), i64> {
    let t = Nodes::parse(enc);
    let edges: Vec<usize> = (1..t.len()).collect();
    let mut out = BTreeMap::new();
    *out.entry((enc.to_string(), "1".to_string())).or_insert(0) += 1;
    for cut in subsets(&edges) {
        let admissible = cut
            .iter()
            .all(|&a| cut.iter().all(|&b| a == b || !t.ancestor(a, b)));
        if !admissible {
            continue;
        }
        let (pruned, trunk) = t.pieces(&cut);
        *out.entry((forest(pruned), trunk)).or_insert(0) += 1;
    }
    out
}

/// `S(T) = −Σ_{c ⊆ E} (−1)^{|c|} W_c(T)` over all edge subsets, where
/// `W_c` is the forest of all components.
pub fn full_cut_antipode(enc: &str) -> BTreeMap<String, i64> {
    let t = Nodes::parse(enc);
    let edges: Vec<usize> = (1..t.len()).collect();
    let mut out = BTreeMap::new();
    for cut in subsets(&edges) {
        let (mut pieces, root) = t.pieces(&cut);
        pieces.push(root);
        let sign = if cut.len() % 2 == 0 { -1 } else { 1 };
        *out.entry(forest(pieces)).or_insert(0) += sign;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Every rooted tree on `n` nodes: canonical encodings of all recursive
/// trees (node `i` hangs below some node `< i`), deduplicated.
pub fn brute_force_trees(n: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    if n == 0 {
        return out;
    }
    let mut choice = vec![0usize; n];
    loop {
        let parent = (0..n)
            .map(|i| if i == 0 { None } else { Some(choice[i]) })
            .collect();
        out.insert(Nodes { parent }.encode());
        // Odometer over choice[i] ∈ 0..i.
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            choice[i] += 1;
            if choice[i] < i {
                break;
            }
            choice[i] = 0;
            i -= 1;
        }
    }
}

/// Tree factorial `T! = Π_v |subtree(v)|`.
pub fn tree_factorial(enc: &str) -> u64 {
    let t = Nodes::parse(enc);
    (0..t.len())
        .map(|v| (0..t.len()).filter(|&w| w == v || t.ancestor(v, w)).count() as u64)
        .product()
}
