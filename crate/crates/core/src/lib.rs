//! Exact machinery for counting quasimorphisms on amalgamated free products
//! and HNN extensions over finite factor groups.
//!
//! The crate is organized around two word models sharing one interface:
//! `amalgam` (normal forms and gauge orbits in `A *_C B`) and `hnn` (Britton
//! reduction and gauge orbits in `A *_C phi`). The `qm` module evaluates the
//! counting function `c_w`, the quasimorphism `h_w = c_w - c_{w^-1}` and its
//! coboundary defect generically over either model, `families` builds the
//! standard word families and the symbolic covering checker, and `group`/
//! `snf` supply the exact finite-group and integer-matrix arithmetic
//! underneath.

pub mod amalgam;
pub mod families;
pub mod group;
pub mod hnn;
pub mod matcher;
pub mod qm;
pub mod snf;

pub use amalgam::{AElement, ALetter, AWord, AmalgamError, AmalgamPresentation, Side};
pub use families::{
    cover_refute, AmalgamFamily, CoverReport, FamilyError, FamilySymbol, HnnFamily, SymbolPattern,
};
pub use group::{
    build_group, check_embedding, double_cosets, subgroup_closure, DoubleCosets, Embedding,
    FiniteGroup, GroupError, GroupSpec, Subgroup,
};
pub use hnn::{ConditionClass, HElement, HLetter, HWord, HnnError, HnnPresentation, Sign, TPattern};
pub use qm::{
    ball, c_w, c_w_inv, count_nonoverlap, defect_scan, delta_h, h_w, oracle_c_w, qm_value,
    DefectReport, GroupModel, OracleIndex, Pattern, QmError, QmValue, ScanStrategy, DEFECT_BOUND,
};
pub use snf::{smith_invariants, smith_normal_form, AbelianInvariants, SmithForm};
