use std::fmt::Debug;

use super::{FieldCtx, FieldElem};
use crate::error::Result;
use crate::valued_field::{self, Valuation};

/// A valued field of characteristic p containing `K`, as needed by the
/// special-polynomial lemmas.
pub trait PRing {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `a^p`.
    fn frob(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn base(&self, x: FieldElem) -> Self::Elem;
    fn valuation(&self, a: &Self::Elem) -> Valuation;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn frob_n(&self, a: &Self::Elem, e: u32) -> Result<Self::Elem> {
        let mut out = a.clone();
        for _ in 0..e {
            out = self.frob(&out)?;
        }
        Ok(out)
    }
}

impl PRing for FieldCtx {
    type Elem = FieldElem;

    fn zero(&self) -> FieldElem {
        FieldCtx::zero(self)
    }
    fn one(&self) -> FieldElem {
        FieldCtx::one(self)
    }
    fn is_zero(&self, a: &FieldElem) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.add(b)
    }
    fn neg(&self, a: &FieldElem) -> FieldElem {
        a.neg()
    }
    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.mul(b)
    }
    fn frob(&self, a: &FieldElem) -> Result<FieldElem> {
        a.frobenius_power(1)
    }
    fn frob_n(&self, a: &FieldElem, e: u32) -> Result<FieldElem> {
        a.frobenius_power(e)
    }
    fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        a.inv()
    }
    fn base(&self, x: FieldElem) -> FieldElem {
        x
    }
    fn valuation(&self, a: &FieldElem) -> Valuation {
        valued_field::valuation(self, a)
    }
}
