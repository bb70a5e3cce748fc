pub mod field;
pub mod gcd;
pub mod linsolve;
pub mod poly;
pub mod ring;
pub mod scalar;

pub use field::{FieldCtx, FieldElem};
pub use poly::{Monomial, SparsePoly};
pub use ring::PRing;
pub use scalar::Scalar;
