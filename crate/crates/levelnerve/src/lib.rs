//! Graph decompositions of symplectic modules, finite covers of surfaces,
//! nerves of level structures over moduli of curves and their local
//! monodromy kernels, computed exactly at small genus.

pub mod arith;
pub mod canon;
pub mod cli;
pub mod complexes;
pub mod covers;
pub mod decomp;
pub mod error;
pub mod io;
pub mod limits;
pub mod monodromy;
pub mod surface;
pub mod symplectic;

pub use error::{Error, Result};
