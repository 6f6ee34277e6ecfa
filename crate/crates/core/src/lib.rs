//! Deligne–Lusztig virtual characters of `GL2(F_q)` and `SL2(F_q)`, computed
//! from Green functions by brute force over the enumerated groups.
//!
//! [`restlab`] compares characters of `GL2` with those of its determinant
//! subgroups after restriction.

pub mod classfn;
pub mod dlchar;
pub mod error;
pub mod ffield;
pub mod group;
pub mod restlab;
pub mod torus;

pub use classfn::{ClassFunction, TOLERANCE};
pub use dlchar::{cuspidal_character, dl_character, eps_sign, DlEvaluator, GreenTable};
pub use error::{Error, Result};
pub use ffield::FieldTower;
pub use group::{GroupElement, GroupKind, GroupModel};
pub use torus::{CharIndex, TorusCharacter, TorusDatum, TorusKind};
pub use restlab::{run_suite, Lab, RestrictionReport, Suite, VerificationSummary};
