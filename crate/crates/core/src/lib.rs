//! Exact symbolic computation with classes in the localized Grothendieck
//! group of varieties, bounded motivic invariant families, stringy
//! functions of SNC resolutions, and toric stringy E-functions.

pub mod error;
pub mod exec;
pub mod invariants;
pub mod kgroup;
pub mod lring;
pub mod parse;
pub mod snc;
pub mod toric;
pub mod workspace;

pub use error::{Error, Result};
pub use exec::Exec;
