//! Finite p-groups from power-commutator presentations: minimal faithful
//! permutation degree, minimal faithful quasi-permutation degree, and a
//! catalog of verified presentations.

pub mod catalog;
pub mod cli;
pub mod collect;
pub mod error;
pub mod linalg;
pub mod mu;
pub mod pcpres;
pub mod primes;
pub mod quasiperm;
pub mod structure;

pub use collect::{Element, PcGroup};
pub use error::{Error, Result};
pub use primes::PrimeParams;
pub use structure::Subgroup;

/// Limits on search effort. Exhausting any limit yields
/// [`Error::BudgetExhausted`], never a value reported as exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Budget {
    /// Maximum number of subgroups visited by a search.
    pub max_subgroups: u64,
    /// Maximum number of elements or cosets scanned by brute-force steps.
    pub max_elements: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_subgroups: 2_000_000, max_elements: 50_000_000 }
    }
}

impl Budget {
    /// Budget where both limits equal `n`.
    pub fn uniform(n: u64) -> Self {
        Budget { max_subgroups: n, max_elements: n }
    }
}
