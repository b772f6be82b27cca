pub mod ainf;
pub mod bm;
pub mod cli;
pub mod error;
pub mod free;
pub mod graded;
pub mod linalg;
pub mod moduli;
pub mod operad;
pub mod oracle;
pub mod random;
pub mod scalar;
pub mod suite;

pub use error::{Error, Result};
