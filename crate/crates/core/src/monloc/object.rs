use serde_json::{json, Value};

use crate::abcat::{column_map, is_mono, row_map, PresentedMorphism, PresentedObject};
use crate::complexes::BoundedComplex;
use crate::error::{Error, Result};
use crate::intlin::Ring;
use crate::regular::RegularCategory;

/// A monomorphism `δ: E⁻¹ ↪ E⁰`, viewed as a two-term complex in degrees −1, 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonObject<R> {
    delta: PresentedMorphism<R>,
}

impl<R: Ring> MonObject<R> {
    pub fn new(delta: PresentedMorphism<R>) -> Result<Self> {
        if !is_mono(&delta) {
            return Err(Error::Precondition("the structure map of a mono object must be a monomorphism".into()));
        }
        Ok(MonObject { delta })
    }

    /// Checks in addition that both ends lie in `E`.
    pub fn in_category(cat: &RegularCategory<R>, delta: PresentedMorphism<R>) -> Result<Self> {
        cat.require_morphism(&delta)?;
        Self::new(delta)
    }

    pub fn zero() -> Self {
        let z = PresentedObject::zero();
        MonObject { delta: PresentedMorphism::identity(&z) }
    }

    /// `0 ↪ x`.
    pub fn from_object(x: &PresentedObject<R>) -> Self {
        MonObject { delta: PresentedMorphism::zero(&PresentedObject::zero(), x) }
    }

    pub fn delta(&self) -> &PresentedMorphism<R> {
        &self.delta
    }

    /// `E⁻¹`.
    pub fn lower(&self) -> &PresentedObject<R> {
        self.delta.source()
    }

    /// `E⁰`.
    pub fn upper(&self) -> &PresentedObject<R> {
        self.delta.target()
    }

    /// The two-term complex with `E⁰` in degree 0.
    pub fn to_complex(&self) -> BoundedComplex<R> {
        BoundedComplex::new(-1, vec![self.lower().clone(), self.upper().clone()], vec![self.delta.clone()])
            .expect("two-term complex")
    }

    pub fn is_zero_object(&self) -> bool {
        self.upper().is_zero()
    }

    /// The extension `[[δ₁, glue], [0, δ₂]]: X₁ ⊕ X₂ ↪ Y₁ ⊕ Y₂` of
    /// `second` by `first`, for `glue: X₂ → Y₁`.
    pub fn extension(first: &MonObject<R>, second: &MonObject<R>, glue: &PresentedMorphism<R>) -> Result<Self> {
        if glue.source() != second.lower() || glue.target() != first.upper() {
            return Err(Error::Shape("glue must map the second subobject to the first ambient object".into()));
        }
        let top = row_map(&[&first.delta, glue]);
        let bottom = row_map(&[&PresentedMorphism::zero(first.lower(), second.upper()), &second.delta]);
        Self::new(column_map(&[&top, &bottom]))
    }

    pub fn to_json(&self) -> Value {
        json!({ "delta": self.delta.to_json() })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let d = value.get("delta").unwrap_or(value);
        Self::new(PresentedMorphism::from_json(d)?)
    }
}
