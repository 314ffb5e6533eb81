pub mod bounds;
pub mod conditions;
pub mod error;
pub mod expansion;
pub mod fieldpoly;
pub mod grobner;
pub mod harness;
pub mod singular;

pub use error::{Error, Result};
