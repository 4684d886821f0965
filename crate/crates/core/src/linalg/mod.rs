//! Exact sparse linear algebra over rationals, integers and prime fields.

mod det;
mod ring;
mod smith;
mod sparse;

pub use det::determinant;
pub use ring::{Backend, Field, Gf, GfAlt, Ring, Zp};
pub use smith::{smith_normal_form, SmithForm};
pub use sparse::{rank, ColumnReducer, RankOracle, SparseColumn, SparseColumnMatrix};
