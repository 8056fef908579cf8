//! Universal algebras of mappings into coefficient algebras, their pro-algebra towers,
//! Hopf structures on towers, and finite-field point enumeration.

pub mod basis_algebra;
pub mod cli;
pub mod equivariant;
pub mod error;
pub mod exact_algebra;
pub mod hopf_hom;
pub mod hopf_mapping;
pub mod mapping_core;
pub mod pro_tower;
pub mod syntax;

pub use error::{Error, Result};
