pub mod abel;
pub mod cli;
pub mod deconvolve;
pub mod error;
pub mod htype;
pub mod meanvalue;
pub mod nagroup;
pub mod poisson;
pub mod quad;
pub mod slowdecrease;
pub mod special;
pub mod spherical;

pub use error::{Error, Result};
