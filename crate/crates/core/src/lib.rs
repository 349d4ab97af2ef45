pub mod anisotropy;
pub mod artinian;
pub mod complex;
pub mod corpus;
pub mod diffop;
pub mod error;
pub mod field;
pub mod lefschetz;
pub mod linalg;
pub mod psi;

pub use error::{Error, Result};
