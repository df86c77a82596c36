//! Exact computations in the equivariant Pontryagin ring of the affine
//! Grassmannian and in the equivariant quantum cohomology of flag varieties,
//! together with the Peterson map comparing them.

pub mod affweyl;
pub mod error;
pub mod exactalg;
pub mod grring;
pub mod peterson;
pub mod qhring;
pub mod rootdata;
pub mod table;

pub use error::{Error, ResidualKind, Result};
