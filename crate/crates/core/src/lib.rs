pub mod base;
pub mod checks;
pub mod cube;
pub mod day;
pub mod density;
pub mod dr;
pub mod error;
pub mod generate;
pub mod kan;
pub mod matching;
pub mod nat;
pub mod presheaf;
pub mod simplex;
pub mod skeleton;
pub mod tribe;

pub use error::{Error, Result};
