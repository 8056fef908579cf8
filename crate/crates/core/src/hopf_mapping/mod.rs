//! Pseudogroups and the Hopf pro-algebra structure on mapping towers into them.

pub mod axioms;
pub mod pseudogroup;
pub mod tower;

use serde::Serialize;

use crate::exact_algebra::{NCPolynomial, Scalar, Verdict};

pub use axioms::{check_hopf_axioms, mutate, HopfAxiomReport, Mutation};
pub use pseudogroup::{Cell, Pseudogroup};
pub use tower::{build_hopf_tower, counit_point, derive_structure, DerivedStructure, HopfTower};

/// Hopf data of a presented algebra given on generators: `Δ(g) = Σ P ⊗ Q`, `ε(g)`, `S(g)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HopfData {
    pub comul: Vec<Vec<(NCPolynomial, NCPolynomial)>>,
    pub counit: Vec<Scalar>,
    pub antipode: Vec<NCPolynomial>,
}

impl HopfData {
    /// Longest word among the antipode images (at least 1).
    pub fn antipode_degree(&self) -> usize {
        self.antipode.iter().map(|p| p.degree()).max().unwrap_or(1).max(1)
    }

    /// Every antipode image has degree at most one.
    pub fn antipode_is_linear(&self) -> bool {
        self.antipode.iter().all(|p| p.degree() <= 1)
    }
}

/// One named condition with its verdict and, when it did not verify, a witness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, verdict: Verdict, witness: Option<String>) -> Self {
        Check { name: name.into(), verdict, witness }
    }
}

/// Combined verdict of a list of checks.
pub fn overall(checks: &[Check]) -> Verdict {
    Verdict::all(checks.iter().map(|c| c.verdict))
}
