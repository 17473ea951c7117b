//! The Connes–Kreimer Hopf algebra of rooted trees.
//!
//! Basis elements are forests of canonical rooted trees. The bracket
//! encoding is bit-exact: `•` is `[]`, `B₊(F)` is `[` followed by the
//! children's encodings in ascending byte order and `]`, a forest joins its
//! trees with `.` in ascending order, and the empty forest is `1`.

mod axioms;
mod hopf;
mod tree;

pub use axioms::{check_axioms, check_tree_counts};

pub use hopf::{counit, grading_y, h_mul, tensor_mul, HElement, HopfAlgebra, LinComb, Tensor2};
pub use tree::{b_plus, count_rooted_trees, enumerate_trees, product, Forest, RawTree, RootedTree};
