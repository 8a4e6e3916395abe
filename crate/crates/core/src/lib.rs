pub mod cases;
pub mod charvariety;
pub mod cli;
pub mod derham;
pub mod error;
pub mod groebner;
pub mod job;
pub mod linalg;
pub mod pipeline;
pub mod weyl;

pub use error::{Error, Result};
