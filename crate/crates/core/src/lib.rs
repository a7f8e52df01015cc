pub mod error;
pub mod exactmat;
pub mod fixtures;
pub mod grid;
pub mod immanant;
pub mod klpoly;
pub mod perm;

pub use error::{Error, Result};
pub use perm::{NonInversion, Permutation};
