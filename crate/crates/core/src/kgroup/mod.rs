//! Formal classes in the localized Grothendieck group of varieties.

mod bittner;
mod class;
mod ops;
mod record;

pub use bittner::{bittner_rewrite, Rewriter};
pub use class::{Generator, KClass, POINT};
pub use ops::{blowup_class, eq_mod_filtration, eval_class, parse_class, projective_bundle_class};
pub use record::{projective_space, BlowupOf, ClassSource, Geometry, InvariantData, VarietyDb, VarietyRecord};
