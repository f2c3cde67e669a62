//! Exact-arithmetic workbench for finite-dimensional compact quantum group
//! algebras: cyclotomic scalars, Hopf structure constants, cocycle twists,
//! ergodic actions of dihedral groups and their coideal realizations.

pub mod algebra;
pub mod coideal;
pub mod corep;
pub mod cyclo;
pub mod ergodic;
pub mod error;
pub mod groups;
pub mod hopf;
pub mod linalg;
pub mod o2sym;
pub mod polysolve;
pub mod qgw1;
pub mod twist;

pub use cyclo::CycNum;
pub use error::{QgwError, Result};
