//! Exact arithmetic in the Lefschetz class `L` and the Hodge variables `u, v`.

mod bipoly;
mod birational;
mod poly;
mod rational;

pub use bipoly::{BiPoly, Exp2};
pub use birational::{BiRational, StringyNumbers};
pub use poly::LefschetzPoly;
pub use rational::{Direction, LefschetzRational, Norm};

pub(crate) use poly::forward_owned;
pub(crate) use rational::{inverse_series_at_zero, multiset_diff, multiset_max};
