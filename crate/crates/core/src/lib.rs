//! Fusion, braiding and lattice tools for the Z2 twist-defect extension of
//! the toric code.
//!
//! The pipeline runs from the fusion model ([`anyon_model`]) through the
//! solved F- and R-symbols ([`consistency`]) to the two-qubit braid
//! representation ([`fusion_space`]) and compiled gates ([`braid`]).
//! [`lattice`] is independent: it checks stabilizer commutation exactly.

pub mod anyon_model;
pub mod braid;
pub mod consistency;
pub mod error;
pub mod fusion_space;
pub mod lattice;
pub mod linalg;

pub use anyon_model::{AnyonLabel, AnyonModel, FusionTable, LabelId, ModularData};
pub use braid::{compile, equiv_up_to_phase, gate_library, BraidWord, GateName};
pub use consistency::{solve_defect_f, solve_defect_r, FSymbolSet, RSymbolSet};
pub use error::{Error, Result};
pub use fusion_space::{DefectRepresentation, FusionBasisState};
pub use lattice::{build_patch, verify_defect, PauliOperator, StabilizerLattice};
