pub mod bitcore;
pub mod construct;
pub mod dataset;
pub mod error;
pub mod groups;
pub mod invariants;
pub mod propelin;
pub mod suite;

pub use error::{Error, Result};
