use serde_json::{json, Value};

use crate::abcat::{
    cokernel, column_map, factor_through_mono, kernel, lift_along, row_map, HomFamily, HomGroup, PresentedMorphism,
    PresentedObject,
};
use crate::error::{Error, Result};
use crate::intlin::Ring;
use crate::regular::RegularCategory;

/// A finitely presented functor `coker Y(f)` for `f: A → B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreydObject<R> {
    presentation: PresentedMorphism<R>,
}

impl<R: Ring> FreydObject<R> {
    pub fn new(presentation: PresentedMorphism<R>) -> Self {
        FreydObject { presentation }
    }

    pub fn in_category(cat: &RegularCategory<R>, presentation: PresentedMorphism<R>) -> Result<Self> {
        cat.require_morphism(&presentation)?;
        Ok(Self::new(presentation))
    }

    /// The representable functor `Y(x)`.
    pub fn representable(x: &PresentedObject<R>) -> Self {
        Self::new(PresentedMorphism::zero(&PresentedObject::zero(), x))
    }

    pub fn zero() -> Self {
        Self::representable(&PresentedObject::zero())
    }

    pub fn presentation(&self) -> &PresentedMorphism<R> {
        &self.presentation
    }

    /// `A` in `f: A → B`.
    pub fn relations(&self) -> &PresentedObject<R> {
        self.presentation.source()
    }

    /// `B` in `f: A → B`.
    pub fn generators(&self) -> &PresentedObject<R> {
        self.presentation.target()
    }

    /// `coker Y(f)` vanishes exactly when `f` is a split epimorphism.
    pub fn is_zero(&self) -> bool {
        lift_along(&self.presentation, &PresentedMorphism::identity(self.generators())).is_some()
    }

    pub fn to_json(&self) -> Value {
        json!({ "presentation": self.presentation.to_json() })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let p = value.get("presentation").unwrap_or(value);
        Ok(Self::new(PresentedMorphism::from_json(p)?))
    }
}

/// A natural transformation `coker Y(f) → coker Y(g)` induced by a square
/// `g ∘ witness = map ∘ f`. Two representatives agree when their maps
/// differ by something factoring through `g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreydMorphism<R> {
    source: FreydObject<R>,
    target: FreydObject<R>,
    map: PresentedMorphism<R>,
    witness: PresentedMorphism<R>,
}

impl<R: Ring> FreydMorphism<R> {
    pub fn new(
        source: &FreydObject<R>,
        target: &FreydObject<R>,
        map: PresentedMorphism<R>,
        witness: PresentedMorphism<R>,
    ) -> Result<Self> {
        let (f, g) = (source.presentation(), target.presentation());
        if map.source() != f.target() || map.target() != g.target() {
            return Err(Error::Shape("map must go between the generator objects".into()));
        }
        if witness.source() != f.source() || witness.target() != g.source() {
            return Err(Error::Shape("witness must go between the relation objects".into()));
        }
        if !g.compose(&witness).equals(&map.compose(f)) {
            return Err(Error::NotWellDefined("square does not commute".into()));
        }
        Ok(FreydMorphism { source: source.clone(), target: target.clone(), map, witness })
    }

    /// Finds a witness for `map`, if it induces a transformation at all.
    pub fn from_map(source: &FreydObject<R>, target: &FreydObject<R>, map: PresentedMorphism<R>) -> Result<Self> {
        let need = map.compose(source.presentation());
        let witness = lift_along(target.presentation(), &need)
            .ok_or_else(|| Error::NotWellDefined("map does not carry relations to relations".into()))?;
        Self::new(source, target, map, witness)
    }

    pub fn identity(x: &FreydObject<R>) -> Self {
        FreydMorphism {
            source: x.clone(),
            target: x.clone(),
            map: PresentedMorphism::identity(x.generators()),
            witness: PresentedMorphism::identity(x.relations()),
        }
    }

    pub fn zero(source: &FreydObject<R>, target: &FreydObject<R>) -> Self {
        FreydMorphism {
            source: source.clone(),
            target: target.clone(),
            map: PresentedMorphism::zero(source.generators(), target.generators()),
            witness: PresentedMorphism::zero(source.relations(), target.relations()),
        }
    }

    pub fn source(&self) -> &FreydObject<R> {
        &self.source
    }

    pub fn target(&self) -> &FreydObject<R> {
        &self.target
    }

    pub fn map(&self) -> &PresentedMorphism<R> {
        &self.map
    }

    pub fn witness(&self) -> &PresentedMorphism<R> {
        &self.witness
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &FreydMorphism<R>) -> FreydMorphism<R> {
        assert!(inner.target == self.source, "composing transformations with mismatched functors");
        FreydMorphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            map: self.map.compose(&inner.map),
            witness: self.witness.compose(&inner.witness),
        }
    }

    pub fn add(&self, other: &FreydMorphism<R>) -> FreydMorphism<R> {
        FreydMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            map: self.map.add(&other.map),
            witness: self.witness.add(&other.witness),
        }
    }

    pub fn sub(&self, other: &FreydMorphism<R>) -> FreydMorphism<R> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FreydMorphism<R> {
        FreydMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            map: self.map.neg(),
            witness: self.witness.neg(),
        }
    }

    /// Whether the map factors through the target presentation.
    pub fn is_zero(&self) -> bool {
        lift_along(self.target.presentation(), &self.map).is_some()
    }

    pub fn equals(&self, other: &FreydMorphism<R>) -> bool {
        self.sub(other).is_zero()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "map": self.map.to_json(),
            "witness": self.witness.to_json(),
        })
    }
}

/// `Hom(coker Y(f), coker Y(g))` as a presented group: pairs `(b, a)` with
/// `b f = g a`, modulo pairs whose `b` factors through `g`.
#[derive(Clone, Debug)]
pub struct FreydHom<R> {
    source: FreydObject<R>,
    target: FreydObject<R>,
    pairs: HomFamily<R>,
    cycles: PresentedMorphism<R>,
    quotient: PresentedMorphism<R>,
}

impl<R: Ring> FreydHom<R> {
    pub fn new(source: &FreydObject<R>, target: &FreydObject<R>) -> Self {
        let (f, g) = (source.presentation(), target.presentation());
        let (a, b) = (f.source(), f.target());
        let (c, d) = (g.source(), g.target());
        let pairs = HomFamily::of(&[(b, d), (a, c)]);
        let square = HomFamily::of(&[(a, d)]);
        let defect = pairs.linear_map(&square, |m| vec![m[0].compose(f).sub(&g.compose(&m[1]))]);
        let z = kernel(&defect);
        // pairs with b = 0 carry no information
        let first = HomFamily::of(&[(b, d)]);
        let project = pairs.linear_map(&first, |m| vec![m[0].clone()]);
        let silent = kernel(&project.compose(&z.inclusion));
        let through = HomFamily::new(vec![HomGroup::new(b, c)]);
        let null = through.linear_map(&pairs, |h| vec![g.compose(&h[0]), h[0].compose(f)]);
        let null = factor_through_mono(&z.inclusion, &null).expect("null pairs commute");
        let q = cokernel(&row_map(&[&silent.inclusion, &null]));
        FreydHom {
            source: source.clone(),
            target: target.clone(),
            pairs,
            cycles: z.inclusion,
            quotient: q.projection,
        }
    }

    pub fn group(&self) -> &PresentedObject<R> {
        self.quotient.target()
    }

    pub fn coordinates(&self, eta: &FreydMorphism<R>) -> Vec<R> {
        assert!(eta.source == self.source && eta.target == self.target, "transformation outside this hom group");
        let v = self.pairs.coordinates(&[eta.map.clone(), eta.witness.clone()]);
        let z = self.cycles.preimage(&v).expect("commuting squares are cycles");
        self.quotient.apply(&z)
    }

    pub fn morphism(&self, coords: &[R]) -> FreydMorphism<R> {
        let z = self.quotient.preimage(coords).expect("quotient is onto");
        let v = self.cycles.apply(&z);
        let mut maps = self.pairs.morphisms(&v);
        let witness = maps.pop().expect("two summands");
        let map = maps.pop().expect("two summands");
        FreydMorphism::new(&self.source, &self.target, map, witness).expect("cycles commute")
    }

    pub fn generators(&self) -> Vec<FreydMorphism<R>> {
        (0..self.group().generators()).map(|i| self.morphism(&self.group().unit_vector(i))).collect()
    }
}

/// `Hom_{mod E}(F, G)`.
pub fn freyd_hom<R: Ring>(source: &FreydObject<R>, target: &FreydObject<R>) -> FreydHom<R> {
    FreydHom::new(source, target)
}

/// Some `θ` with `through ∘ θ == eta`.
pub fn freyd_factor<R: Ring>(through: &FreydMorphism<R>, eta: &FreydMorphism<R>) -> Option<FreydMorphism<R>> {
    assert!(through.target == eta.target, "factoring through a transformation with a different codomain");
    let from = FreydHom::new(&eta.source, &through.source);
    let to = FreydHom::new(&eta.source, &eta.target);
    let cols: Vec<Vec<R>> = from.generators().iter().map(|t| to.coordinates(&through.compose(t))).collect();
    let m = crate::intlin::Matrix::from_columns(to.group().generators(), &cols);
    let post = PresentedMorphism::new(from.group().clone(), to.group().clone(), m).expect("composition is additive");
    let coords = post.preimage(&to.coordinates(eta))?;
    let theta = from.morphism(&coords);
    through.compose(&theta).equals(eta).then_some(theta)
}

/// The map `a ↦ (f a, β a)` into a subobject of a sum given by its
/// inclusion, used by the kernel construction.
pub(crate) fn into_sum<R: Ring>(
    inclusion: &PresentedMorphism<R>,
    parts: &[&PresentedMorphism<R>],
) -> PresentedMorphism<R> {
    factor_through_mono(inclusion, &column_map(parts)).expect("components land in the subobject")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::{int, Matrix, Z};

    fn mul(k: i64) -> PresentedMorphism<Z> {
        let z = PresentedObject::free(1);
        PresentedMorphism::new(z.clone(), z, Matrix::from_i64(&[&[k]])).unwrap()
    }

    #[test]
    fn hom_examples() {
        let f = FreydObject::new(mul(2));
        let h = freyd_hom(&f, &f);
        assert!(h.group().is_isomorphic(&PresentedObject::cyclic(int(2))));
        assert!(!h.generators()[0].is_zero());
        assert!(h.generators()[0].equals(&FreydMorphism::identity(&f)));

        let zero = FreydObject::new(mul(1));
        assert!(zero.is_zero());
        assert!(freyd_hom(&zero, &zero).group().is_zero());

        let y = FreydObject::representable(&PresentedObject::<Z>::free(1));
        assert!(freyd_hom(&y, &y).group().is_isomorphic(&PresentedObject::free(1)));
    }

    #[test]
    fn coordinates_round_trip() {
        let z4 = PresentedObject::<Z>::cyclic(int(4));
        let z = PresentedObject::<Z>::free(1);
        let f = FreydObject::new(PresentedMorphism::new(z.clone(), z4.clone(), Matrix::from_i64(&[&[2]])).unwrap());
        let g = FreydObject::representable(&z4);
        let h = freyd_hom(&f, &g);
        for eta in h.generators() {
            let c = h.coordinates(&eta);
            assert!(h.morphism(&c).equals(&eta));
        }
        let twice = FreydMorphism::from_map(&f, &f, PresentedMorphism::identity(&z4).scale(&int(3))).unwrap();
        let back = freyd_hom(&f, &f);
        assert!(back.morphism(&back.coordinates(&twice)).equals(&twice));
    }

    #[test]
    fn factoring_transformations() {
        let f = FreydObject::new(mul(2));
        let id = FreydMorphism::identity(&f);
        let three = FreydMorphism::from_map(&f, &f, mul(3)).unwrap();
        let theta = freyd_factor(&three, &id).unwrap();
        assert!(three.compose(&theta).equals(&id));
        let zero = FreydMorphism::zero(&f, &f);
        assert!(freyd_factor(&zero, &id).is_none());
    }
}
