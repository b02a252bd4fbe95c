//! Exact construction of differential equations with prescribed Galois groups
//! by patching local solutions over a tower of fields.

pub mod error;
pub mod field;
pub mod poly;
pub mod ratfunc;
pub mod series;
pub mod matrix;
pub mod tower;
pub mod rootdata;
pub mod seed;
pub mod patcher;
pub mod forge;
pub mod wire;
pub mod random;
pub mod cli;

pub use error::{Error, Result};
pub use field::{Field, Rat, Ring};
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use series::TSeries;
pub use matrix::{Mat, TMatrix};
