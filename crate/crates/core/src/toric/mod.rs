//! Fans, toric Hodge numbers and E-polynomials, and the toric stringy
//! E-function via lattice-point generating functions of cones.

mod fan;
mod genfun;
pub mod linalg;
mod support;

pub use fan::{toric_epoly, toric_hodge, Cone, ConeShape, Fan};
pub use genfun::{
    box_values, cone_genfun, placing_triangulation, simplicial_closed, simplicial_interior,
    toric_stringy_e, toric_symmetry_check, ConeGenFun, DEFAULT_DET_LIMIT,
};
pub use support::SupportFunction;
