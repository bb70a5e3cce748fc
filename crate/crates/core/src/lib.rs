#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod error;

pub use error::{Error, Result};
pub mod cli;
pub mod expr;
pub mod gene;
pub mod special_poly;
pub mod tower;
pub mod valued_field;
pub mod weave;
pub mod witt;
