//! Exact combinatorics of germ expansions for `GL_n(D)`.

mod bigint_serde;
pub mod cli;
pub mod cosets;
pub mod error;
pub mod germ;
pub mod gl2;
pub mod oracle;
pub mod partition;
pub mod qpoly;

pub use error::{Error, Result};
