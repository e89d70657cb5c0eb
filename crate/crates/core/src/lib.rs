pub mod algebra;
pub mod chern;
pub mod claims;
pub mod error;
pub mod resultant;
pub mod sampling;
pub mod sections;
pub mod sos;

pub use error::{Error, Result};
