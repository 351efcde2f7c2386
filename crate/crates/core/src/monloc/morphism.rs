use serde_json::{json, Value};

use super::object::MonObject;
use crate::abcat::{cokernel, column_map, factor_through_epi, factor_through_mono, is_iso, row_map, PresentedMorphism};
use crate::complexes::{is_quasi_iso, ChainMap};
use crate::error::{Error, Result};
use crate::intlin::Ring;
use crate::regular::RegularCategory;

/// How two parallel squares are compared.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Equality {
    /// Equal up to a homotopy `t: E⁰ → F⁻¹`.
    #[default]
    Homotopy,
    /// Equal component by component.
    Strict,
}

/// A commuting square `δ_F ∘ lower = upper ∘ δ_E`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonMorphism<R> {
    source: MonObject<R>,
    target: MonObject<R>,
    lower: PresentedMorphism<R>,
    upper: PresentedMorphism<R>,
}

impl<R: Ring> MonMorphism<R> {
    pub fn new(
        source: &MonObject<R>,
        target: &MonObject<R>,
        lower: PresentedMorphism<R>,
        upper: PresentedMorphism<R>,
    ) -> Result<Self> {
        if lower.source() != source.lower() || lower.target() != target.lower() {
            return Err(Error::Shape("lower component has the wrong endpoints".into()));
        }
        if upper.source() != source.upper() || upper.target() != target.upper() {
            return Err(Error::Shape("upper component has the wrong endpoints".into()));
        }
        if !target.delta().compose(&lower).equals(&upper.compose(source.delta())) {
            return Err(Error::NotWellDefined("square does not commute".into()));
        }
        Ok(MonMorphism { source: source.clone(), target: target.clone(), lower, upper })
    }

    /// The square with the given top map; the lower map is forced since
    /// `δ_F` is a monomorphism.
    pub fn from_upper(source: &MonObject<R>, target: &MonObject<R>, upper: PresentedMorphism<R>) -> Result<Self> {
        let lower = factor_through_mono(target.delta(), &upper.compose(source.delta()))
            .ok_or_else(|| Error::NotWellDefined("top map does not carry the subobject into the subobject".into()))?;
        Self::new(source, target, lower, upper)
    }

    pub fn identity(x: &MonObject<R>) -> Self {
        MonMorphism {
            source: x.clone(),
            target: x.clone(),
            lower: PresentedMorphism::identity(x.lower()),
            upper: PresentedMorphism::identity(x.upper()),
        }
    }

    pub fn zero(source: &MonObject<R>, target: &MonObject<R>) -> Self {
        MonMorphism {
            source: source.clone(),
            target: target.clone(),
            lower: PresentedMorphism::zero(source.lower(), target.lower()),
            upper: PresentedMorphism::zero(source.upper(), target.upper()),
        }
    }

    pub fn source(&self) -> &MonObject<R> {
        &self.source
    }

    pub fn target(&self) -> &MonObject<R> {
        &self.target
    }

    /// `u₋₁: E⁻¹ → F⁻¹`.
    pub fn lower(&self) -> &PresentedMorphism<R> {
        &self.lower
    }

    /// `u₀: E⁰ → F⁰`.
    pub fn upper(&self) -> &PresentedMorphism<R> {
        &self.upper
    }

    pub fn compose(&self, inner: &MonMorphism<R>) -> MonMorphism<R> {
        assert!(inner.target == self.source, "composing squares with mismatched objects");
        MonMorphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            lower: self.lower.compose(&inner.lower),
            upper: self.upper.compose(&inner.upper),
        }
    }

    pub fn add(&self, other: &MonMorphism<R>) -> MonMorphism<R> {
        MonMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            lower: self.lower.add(&other.lower),
            upper: self.upper.add(&other.upper),
        }
    }

    pub fn sub(&self, other: &MonMorphism<R>) -> MonMorphism<R> {
        MonMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            lower: self.lower.sub(&other.lower),
            upper: self.upper.sub(&other.upper),
        }
    }

    /// A homotopy `t: E⁰ → F⁻¹` with `t δ_E = u₋₁` and `δ_F t = u₀`.
    pub fn null_homotopy(&self) -> Option<PresentedMorphism<R>> {
        let t = factor_through_mono(self.target.delta(), &self.upper)?;
        t.compose(self.source.delta()).equals(&self.lower).then_some(t)
    }

    pub fn is_null_homotopic(&self) -> bool {
        self.null_homotopy().is_some()
    }

    pub fn equals(&self, other: &MonMorphism<R>, mode: Equality) -> bool {
        match mode {
            Equality::Strict => self.lower.equals(&other.lower) && self.upper.equals(&other.upper),
            Equality::Homotopy => self.sub(other).is_null_homotopic(),
        }
    }

    /// The square as a map of two-term complexes in degrees −1, 0.
    pub fn theta(&self) -> ChainMap<R> {
        let (s, t) = (self.source.to_complex(), self.target.to_complex());
        ChainMap::new(&s, &t, |n| match n {
            -1 => self.lower.clone(),
            0 => self.upper.clone(),
            _ => PresentedMorphism::zero(&s.object(n), &t.object(n)),
        })
        .expect("a commuting square is a chain map")
    }

    /// The induced map `coker δ_E → coker δ_F`.
    pub fn shadow(&self) -> PresentedMorphism<R> {
        let (ps, pt) = (self.source.shadow(), self.target.shadow());
        factor_through_epi(&ps.projection, &pt.projection.compose(&self.upper)).expect("squares preserve the subobject")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "lower": self.lower.to_json(),
            "upper": self.upper.to_json(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let field = |k: &str| value.get(k).ok_or_else(|| Error::Parse(format!("square needs {k}")));
        let source = MonObject::from_json(field("source")?)?;
        let target = MonObject::from_json(field("target")?)?;
        let lower = PresentedMorphism::from_json(field("lower")?)?;
        let upper = PresentedMorphism::from_json(field("upper")?)?;
        Self::new(&source, &target, lower, upper)
    }
}

/// Whether `E⁻¹ --(−δ_E, u₋₁)ᵀ--> E⁰ ⊕ F⁻¹ --(u₀ δ_F)--> F⁰` is a conflation.
pub fn is_bicartesian<R: Ring>(cat: &RegularCategory<R>, u: &MonMorphism<R>) -> bool {
    let i = column_map(&[&u.source.delta().neg(), &u.lower]);
    let p = row_map(&[&u.upper, u.target.delta()]);
    cat.is_conflation(&i, &p)
}

/// Whether `θ(u)` is a quasi-isomorphism of complexes over `E`.
pub fn quasi_iso_criterion<R: Ring>(cat: &RegularCategory<R>, u: &MonMorphism<R>) -> Result<bool> {
    is_quasi_iso(cat, &u.theta())
}

/// Whether the induced map of cokernels is an isomorphism.
pub fn shadow_is_iso<R: Ring>(u: &MonMorphism<R>) -> bool {
    is_iso(&u.shadow())
}

impl<R: Ring> MonObject<R> {
    /// `coker δ` in the ambient category, with its projection from `E⁰`.
    pub fn shadow(&self) -> crate::abcat::Cokernel<R> {
        cokernel(self.delta())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abcat::PresentedObject;
    use crate::intlin::{int, Matrix, Z};
    use crate::regular::{Ambient, Predicate};

    fn cat(p: &str) -> RegularCategory<Z> {
        RegularCategory::new(Ambient::FgAb, Predicate::parse(p).unwrap()).unwrap()
    }

    fn mul(k: i64) -> PresentedMorphism<Z> {
        let z = PresentedObject::free(1);
        PresentedMorphism::new(z.clone(), z, Matrix::from_i64(&[&[k]])).unwrap()
    }

    #[test]
    fn bicartesian_examples() {
        let lat = cat("torsion-free");
        let two = MonObject::new(mul(2)).unwrap();
        assert!(is_bicartesian(&lat, &MonMorphism::identity(&two)));
        let u = MonMorphism::new(&two, &two, mul(1), mul(1)).unwrap();
        assert!(is_bicartesian(&lat, &u));
        let free = MonObject::from_object(&PresentedObject::free(1));
        let doubling = MonMorphism::new(&free, &free, PresentedMorphism::identity(free.lower()), mul(2)).unwrap();
        assert!(!is_bicartesian(&lat, &doubling));
    }

    #[test]
    fn quasi_iso_agrees() {
        let lat = cat("torsion-free");
        let two = MonObject::new(mul(2)).unwrap();
        assert!(quasi_iso_criterion(&lat, &MonMorphism::identity(&two)).unwrap());
        let u = MonMorphism::new(&two, &two, mul(1), mul(1)).unwrap();
        assert!(quasi_iso_criterion(&lat, &u).unwrap());
        let zero = MonObject::zero();
        assert!(!quasi_iso_criterion(&lat, &MonMorphism::zero(&zero, &two)).unwrap());
    }

    #[test]
    fn shadows_of_objects() {
        let z = PresentedObject::<Z>::free(1);
        assert!(MonObject::new(mul(2)).unwrap().shadow().object.is_isomorphic(&PresentedObject::cyclic(int(2))));
        assert!(MonObject::new(mul(6)).unwrap().shadow().object.is_isomorphic(&PresentedObject::cyclic(int(6))));
        assert!(MonObject::from_object(&z).shadow().object.is_isomorphic(&z));
    }

    #[test]
    fn homotopy_and_strict_equality() {
        // on (Z --1--> Z) every square is null-homotopic
        let one = MonObject::new(mul(1)).unwrap();
        let u = MonMorphism::new(&one, &one, mul(3), mul(3)).unwrap();
        assert!(u.is_null_homotopic());
        assert!(u.equals(&MonMorphism::zero(&one, &one), Equality::Homotopy));
        assert!(!u.equals(&MonMorphism::zero(&one, &one), Equality::Strict));
        let two = MonObject::new(mul(2)).unwrap();
        assert!(!MonMorphism::identity(&two).is_null_homotopic());
        assert!(MonMorphism::from_upper(&two, &two, mul(2)).unwrap().is_null_homotopic());
    }
}
