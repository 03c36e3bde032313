pub mod cli;
pub mod error;
pub mod expr;
pub mod families;
pub mod gf;
pub mod permcheck;
pub mod polyalg;

pub use error::{Error, Result};
pub use gf::{Fe, FieldCtx};
