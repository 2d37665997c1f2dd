pub mod error;
pub mod exactpoly;
pub mod grassmann;
pub mod kauszlm;
pub mod millecrepes;
pub mod par;
pub mod sampling;
pub mod suites;
pub mod torusflow;

pub use error::{Error, Result};
