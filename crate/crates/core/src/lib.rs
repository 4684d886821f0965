pub mod combinatorics;
pub mod error;
pub mod linalg;

pub use error::{Error, Result};
pub mod complex;
pub mod filtration;
pub mod persistence;
pub mod acycle;
pub mod morse;
pub mod process;
pub mod asymptotics;
pub mod experiment;
