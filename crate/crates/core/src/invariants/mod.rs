//! Motivic invariant families of type `(a, b)` and the identities checked
//! on them.

mod checks;
mod family;
mod registry;

pub use checks::{gsca_symmetry_check, mirror_check, CheckReport};
pub use family::{FamilyKind, InvariantFamily};
pub use registry::{define_builtin_families, Families, BUILTIN};
