//! Exact and numerical tools for torus actions on the Grassmannians G(n,2):
//! moment maps, the hypersimplex arrangement, regular values and explicit
//! fibers over two regular values for G(4,2).

pub mod acceptance;
pub mod error;
pub mod exactgeom;
pub mod fibers4;
pub mod moment;
pub mod plucker;
pub mod regularity;
pub mod tolerances;

pub use error::{Error, Result};
