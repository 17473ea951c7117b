use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// Unordered nesting as read from input, before canonicalization.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawTree {
    pub children: Vec<RawTree>,
}

impl RawTree {
    pub fn leaf() -> Self {
        Self::default()
    }

    pub fn with_children(children: Vec<RawTree>) -> Self {
        Self { children }
    }
}

/// An isomorphism class of rooted trees, held in canonical form: children
/// sorted by encoding, so isomorphic trees are identical values.
///
/// Equality, ordering and hashing all go through the canonical encoding.
#[derive(Clone, Debug)]
pub struct RootedTree {
    enc: String,
    children: Vec<RootedTree>,
    degree: usize,
}

impl RootedTree {
    /// The single node `•`.
    pub fn node() -> Self {
        Self::graft(Vec::new())
    }

    /// `B₊`: a new root carrying the given trees as children.
    pub fn graft(mut children: Vec<RootedTree>) -> Self {
        children.sort();
        let mut enc = String::from("[");
        for c in &children {
            enc.push_str(&c.enc);
        }
        enc.push(']');
        let degree = 1 + children.iter().map(|c| c.degree).sum::<usize>();
        RootedTree {
            enc,
            children,
            degree,
        }
    }

    pub fn canonicalize(raw: &RawTree) -> Self {
        Self::graft(raw.children.iter().map(Self::canonicalize).collect())
    }

    /// The chain with `n` nodes; `ladder(2)` is `B₊(•)`.
    pub fn ladder(n: usize) -> Self {
        assert!(n >= 1);
        (1..n).fold(Self::node(), |t, _| Self::graft(vec![t]))
    }

    /// Parses a (not necessarily canonical) bracket encoding.
    pub fn parse(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        let (raw, end) = parse_raw(bytes, 0).ok_or_else(|| Error::InvalidTree(s.to_string()))?;
        if end != bytes.len() {
            return Err(Error::InvalidTree(s.to_string()));
        }
        Ok(Self::canonicalize(&raw))
    }

    pub fn encoding(&self) -> &str {
        &self.enc
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn child_trees(&self) -> &[RootedTree] {
        &self.children
    }

    /// The forest obtained by removing the root.
    pub fn children(&self) -> Forest {
        Forest::from_trees(self.children.clone())
    }

    /// Tree factorial `T! = deg(T) · Π children!`.
    pub fn factorial(&self) -> u64 {
        self.degree as u64 * self.children.iter().map(|c| c.factorial()).product::<u64>()
    }
}

fn parse_raw(bytes: &[u8], mut pos: usize) -> Option<(RawTree, usize)> {
    if bytes.get(pos) != Some(&b'[') {
        return None;
    }
    pos += 1;
    let mut children = Vec::new();
    loop {
        match bytes.get(pos)? {
            b']' => return Some((RawTree::with_children(children), pos + 1)),
            b'[' => {
                let (child, next) = parse_raw(bytes, pos)?;
                children.push(child);
                pos = next;
            }
            _ => return None,
        }
    }
}

impl PartialEq for RootedTree {
    fn eq(&self, other: &Self) -> bool {
        self.enc == other.enc
    }
}

impl Eq for RootedTree {}

impl Hash for RootedTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.enc.hash(state);
    }
}

impl PartialOrd for RootedTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RootedTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.enc.cmp(&other.enc)
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.enc)
    }
}

/// A monomial of the Hopf algebra: a multiset of trees kept sorted by
/// encoding. The empty forest is the unit `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Forest {
    trees: Vec<RootedTree>,
}

impl Forest {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(t: RootedTree) -> Self {
        Self { trees: vec![t] }
    }

    pub fn from_trees(mut trees: Vec<RootedTree>) -> Self {
        trees.sort();
        Self { trees }
    }

    /// Parses `1` or dot-separated tree encodings.
    pub fn parse(s: &str) -> Result<Self> {
        if s == "1" {
            return Ok(Self::empty());
        }
        s.split('.')
            .map(RootedTree::parse)
            .collect::<Result<Vec<_>>>()
            .map(Self::from_trees)
    }

    pub fn trees(&self) -> &[RootedTree] {
        &self.trees
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn as_tree(&self) -> Option<&RootedTree> {
        match self.trees.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }

    pub fn degree(&self) -> usize {
        self.trees.iter().map(RootedTree::degree).sum()
    }

    /// Commutative product: multiset union.
    pub fn product(&self, other: &Forest) -> Forest {
        let mut trees = self.trees.clone();
        trees.extend(other.trees.iter().cloned());
        Forest::from_trees(trees)
    }

    pub fn encoding(&self) -> String {
        if self.trees.is_empty() {
            "1".to_string()
        } else {
            self.trees
                .iter()
                .map(RootedTree::encoding)
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

impl From<RootedTree> for Forest {
    fn from(t: RootedTree) -> Self {
        Forest::single(t)
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

/// `B₊` on a forest.
pub fn b_plus(f: &Forest) -> RootedTree {
    RootedTree::graft(f.trees.clone())
}

/// Commutative forest product.
pub fn product(f1: &Forest, f2: &Forest) -> Forest {
    f1.product(f2)
}

/// All forests of total degree `m`.
pub(crate) fn forests_of_degree(m: usize, trees_by_degree: &[Vec<RootedTree>]) -> Vec<Forest> {
    use std::collections::BTreeSet;
    let mut by_degree: Vec<BTreeSet<Forest>> = vec![BTreeSet::from([Forest::empty()])];
    for k in 1..=m {
        let mut set = BTreeSet::new();
        for d in 1..=k {
            for t in &trees_by_degree[d] {
                for f in &by_degree[k - d] {
                    set.insert(f.product(&Forest::single(t.clone())));
                }
            }
        }
        by_degree.push(set);
    }
    by_degree.pop().unwrap().into_iter().collect()
}

/// All isomorphism classes of rooted trees with `n` nodes, as B₊ of the
/// forests of degree `n − 1`. Within a degree trees are listed in
/// descending encoding order, which puts bushier trees first.
pub fn enumerate_trees(n: usize) -> Vec<RootedTree> {
    enumerate_up_to(n).pop().unwrap_or_default()
}

/// Trees indexed by degree `0..=n` (index 0 is empty).
pub(crate) fn enumerate_up_to(n: usize) -> Vec<Vec<RootedTree>> {
    let mut by_degree: Vec<Vec<RootedTree>> = vec![Vec::new()];
    for k in 1..=n {
        let mut trees: Vec<RootedTree> = forests_of_degree(k - 1, &by_degree)
            .iter()
            .map(b_plus)
            .collect();
        trees.sort_by(|a, b| b.cmp(a));
        trees.dedup();
        by_degree.push(trees);
    }
    by_degree
}

/// Number of rooted trees with `n` nodes from the classical recurrence
/// `a(n+1) = (1/n) Σ_{k=1}^{n} (Σ_{d|k} d·a(d)) a(n−k+1)`.
pub fn count_rooted_trees(n: usize) -> u64 {
    let mut a = vec![0u64, 1];
    for m in 1..n {
        let mut s = 0u64;
        for k in 1..=m {
            let divisor_sum: u64 = (1..=k)
                .filter(|d| k % d == 0)
                .map(|d| d as u64 * a[d])
                .sum();
            s += divisor_sum * a[m - k + 1];
        }
        a.push(s / m as u64);
    }
    if n == 0 {
        0
    } else {
        a[n]
    }
}
