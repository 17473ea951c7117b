//! Exact symbolic machinery for the renormalization group as a
//! Birkhoff factorization problem on the Connes–Kreimer Hopf algebra of
//! rooted trees.

pub mod birkhoff;
pub mod char_group;
pub mod error;
pub mod exact_coeffs;
pub mod forest_hopf;
pub mod hierarchy;
pub mod report;
pub mod rg_flows;
pub mod toy_model;

pub use error::{Error, Result};
