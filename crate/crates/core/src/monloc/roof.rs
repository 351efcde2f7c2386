use serde_json::{json, Value};

use super::morphism::{is_bicartesian, MonMorphism};
use super::object::MonObject;
use crate::abcat::{
    biproduct, column_map, direct_sum, factor_through_mono, inverse, kernel, lift_along, pullback, HomGroup,
    PresentedMorphism, PresentedObject,
};
use crate::error::{Error, Result};
use crate::freyd::{is_weak_inflation, Search};
use crate::intlin::Ring;
use crate::regular::RegularCategory;

/// A right fraction `f ∘ s⁻¹` with `s: δ' → δ_X` bicartesian and
/// `f: δ' → δ_Y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RoofMorphism<R> {
    s: MonMorphism<R>,
    f: MonMorphism<R>,
}

impl<R: Ring> RoofMorphism<R> {
    pub fn new(cat: &RegularCategory<R>, s: MonMorphism<R>, f: MonMorphism<R>) -> Result<Self> {
        if s.source() != f.source() {
            return Err(Error::Shape("both legs of a roof start at the same object".into()));
        }
        if !is_bicartesian(cat, &s) {
            return Err(Error::Precondition("the backward leg of a roof must be a bicartesian square".into()));
        }
        Ok(RoofMorphism { s, f })
    }

    /// `u` as the roof `(id, u)`.
    pub fn from_square(u: MonMorphism<R>) -> Self {
        RoofMorphism { s: MonMorphism::identity(u.source()), f: u }
    }

    pub fn backward(&self) -> &MonMorphism<R> {
        &self.s
    }

    pub fn forward(&self) -> &MonMorphism<R> {
        &self.f
    }

    pub fn source(&self) -> &MonObject<R> {
        self.s.target()
    }

    pub fn target(&self) -> &MonObject<R> {
        self.f.target()
    }

    /// `coker(f) ∘ coker(s)⁻¹`.
    pub fn shadow(&self) -> PresentedMorphism<R> {
        let back = inverse(&self.s.shadow()).expect("bicartesian squares induce isomorphisms");
        self.f.shadow().compose(&back)
    }

    pub fn to_json(&self) -> Value {
        json!({ "backward": self.s.to_json(), "forward": self.f.to_json() })
    }

    pub fn from_json(cat: &RegularCategory<R>, value: &Value) -> Result<Self> {
        let field = |k: &str| value.get(k).ok_or_else(|| Error::Parse(format!("roof needs {k}")));
        let s = MonMorphism::from_json(field("backward")?)?;
        let f = MonMorphism::from_json(field("forward")?)?;
        Self::new(cat, s, f)
    }
}

/// A roof from `x` to `y` whose shadow is `h: coker δ_X → coker δ_Y`.
///
/// When `h` lifts to a map `X⁰ → Y⁰` the roof is a plain square. Otherwise
/// the intermediate object is `X⁻¹ ⊕ Y⁻¹ ↪ P`, where `P ⊆ X⁰ ⊕ Y⁰` is the
/// pullback of `h ∘ π_X` and `π_Y`.
pub fn roof_lift<R: Ring>(
    cat: &RegularCategory<R>,
    x: &MonObject<R>,
    y: &MonObject<R>,
    h: &PresentedMorphism<R>,
) -> Result<RoofMorphism<R>> {
    let (px, py) = (x.shadow(), y.shadow());
    if h.source() != &px.object || h.target() != &py.object {
        return Err(Error::Shape("map must go between the shadows".into()));
    }
    let along = h.compose(&px.projection);
    let roof = match lift_along(&py.projection, &along) {
        Some(upper) => RoofMorphism::from_square(MonMorphism::from_upper(x, y, upper)?),
        None => {
            let pb = pullback(&along, &py.projection);
            cat.require(&pb.object)?;
            let into = column_map(&[&pb.to_left, &pb.to_right]);
            let lower = biproduct(&[x.lower(), y.lower()]);
            let delta = factor_through_mono(&into, &direct_sum(&[x.delta(), y.delta()]))
                .ok_or_else(|| Error::Invariant("subobjects do not land in the pullback".into()))?;
            let mid = MonObject::new(delta)?;
            let s = MonMorphism::new(&mid, x, lower.projections[0].clone(), pb.to_left)?;
            let f = MonMorphism::new(&mid, y, lower.projections[1].clone(), pb.to_right)?;
            RoofMorphism::new(cat, s, f)?
        }
    };
    if !roof.shadow().equals(h) {
        return Err(Error::Invariant("lifted roof has the wrong shadow".into()));
    }
    Ok(roof)
}

/// Verdict of [`roofs_equal`], with a common refinement when requested
/// and the roofs agree.
#[derive(Clone, Debug)]
pub struct RoofEquality {
    pub equal: bool,
    pub certificate: Option<Value>,
}

/// Decides equality of two roofs by comparing shadows. With `certify`, an
/// equal pair also gets a roof `(t₁, t₂)` over both with `s₁t₁ ≃ s₂t₂` and
/// `f₁t₁ ≃ f₂t₂`, each homotopy written out.
pub fn roofs_equal<R: Ring>(
    cat: &RegularCategory<R>,
    r1: &RoofMorphism<R>,
    r2: &RoofMorphism<R>,
    certify: bool,
) -> Result<RoofEquality> {
    if r1.source() != r2.source() || r1.target() != r2.target() {
        return Err(Error::Precondition("roofs must share their endpoints".into()));
    }
    let equal = r1.shadow().equals(&r2.shadow());
    if !equal || !certify {
        return Ok(RoofEquality { equal, certificate: None });
    }
    let px = r1.source().shadow();
    let a1 = px.projection.compose(r1.s.upper());
    let a2 = px.projection.compose(r2.s.upper());
    let pb = pullback(&a1, &a2);
    let k = kernel(&a1.compose(&pb.to_left));
    let common = MonObject::new(k.inclusion)?;
    let t1 = MonMorphism::from_upper(&common, r1.s.source(), pb.to_left)?;
    let t2 = MonMorphism::from_upper(&common, r2.s.source(), pb.to_right)?;
    for t in [&t1, &t2] {
        if !is_bicartesian(cat, t) {
            return Err(Error::Invariant("refinement leg is not bicartesian".into()));
        }
    }
    let hs = r1.s.compose(&t1).sub(&r2.s.compose(&t2)).null_homotopy();
    let hf = r1.f.compose(&t1).sub(&r2.f.compose(&t2)).null_homotopy();
    match (hs, hf) {
        (Some(hs), Some(hf)) => Ok(RoofEquality {
            equal,
            certificate: Some(json!({
                "refinement": common.to_json(),
                "first_leg": t1.to_json(),
                "second_leg": t2.to_json(),
                "backward_homotopy": hs.to_json(),
                "forward_homotopy": hf.to_json(),
            })),
        }),
        _ => Err(Error::Invariant("roofs with equal shadows admit no common refinement".into())),
    }
}

/// `Hom(x, y)` after localizing at bicartesian squares, with one roof per
/// generator.
#[derive(Clone, Debug)]
pub struct LocalizedHom<R> {
    pub hom: HomGroup<R>,
    pub roofs: Vec<RoofMorphism<R>>,
}

impl<R: Ring> LocalizedHom<R> {
    pub fn group(&self) -> &PresentedObject<R> {
        self.hom.group()
    }
}

pub fn localized_hom<R: Ring>(
    cat: &RegularCategory<R>,
    x: &MonObject<R>,
    y: &MonObject<R>,
) -> Result<LocalizedHom<R>> {
    let hom = HomGroup::new(&x.shadow().object, &y.shadow().object);
    let roofs = hom.generators().iter().map(|h| roof_lift(cat, x, y, h)).collect::<Result<Vec<_>>>()?;
    Ok(LocalizedHom { hom, roofs })
}

/// Where a mono object sits between `E`, its exact hull and the heart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HullClass<R> {
    /// `δ` is an inflation.
    InE,
    /// `δ` is a composite of the listed inflations.
    InHull(Vec<PresentedMorphism<R>>),
    HeartOnly,
    /// The chain search hit its depth bound.
    Exhausted,
}

impl<R> HullClass<R> {
    pub fn label(&self) -> &'static str {
        match self {
            HullClass::InE => "in_E",
            HullClass::InHull(_) => "in_hull",
            HullClass::HeartOnly => "heart_only",
            HullClass::Exhausted => "exhausted",
        }
    }
}

pub fn hull_membership<R: Ring>(
    cat: &RegularCategory<R>,
    x: &MonObject<R>,
    max_depth: usize,
) -> Result<HullClass<R>> {
    if cat.is_inflation(x.delta())? {
        return Ok(HullClass::InE);
    }
    Ok(match is_weak_inflation(cat, x.delta(), max_depth)? {
        Search::Found(chain) => HullClass::InHull(chain),
        Search::None => HullClass::HeartOnly,
        Search::Exhausted => HullClass::Exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abcat::is_iso;
    use crate::intlin::{int, Matrix, Z};
    use crate::regular::{Ambient, Predicate};

    fn cat(p: &str) -> RegularCategory<Z> {
        RegularCategory::new(Ambient::FgAb, Predicate::parse(p).unwrap()).unwrap()
    }

    fn mul(k: i64) -> PresentedMorphism<Z> {
        let z = PresentedObject::free(1);
        PresentedMorphism::new(z.clone(), z, Matrix::from_i64(&[&[k]])).unwrap()
    }

    fn mon(k: i64) -> MonObject<Z> {
        MonObject::new(mul(k)).unwrap()
    }

    #[test]
    fn roof_shadow_is_the_canonical_epi() {
        let u = MonMorphism::new(&mon(4), &mon(2), mul(2), mul(1)).unwrap();
        let r = RoofMorphism::from_square(u);
        let sh = r.shadow();
        assert!(sh.source().is_isomorphic(&PresentedObject::cyclic(int(4))));
        assert!(sh.target().is_isomorphic(&PresentedObject::cyclic(int(2))));
        assert!(crate::abcat::is_epi(&sh));
        assert!(!is_iso(&sh));
    }

    #[test]
    fn lifting_examples() {
        let lat = cat("torsion-free");
        let two = mon(2);
        let c = two.shadow().object;
        let id = roof_lift(&lat, &two, &two, &PresentedMorphism::identity(&c)).unwrap();
        assert!(id.backward().equals(&MonMorphism::identity(&two), super::super::Equality::Strict));
        let zero = roof_lift(&lat, &two, &two, &PresentedMorphism::zero(&c, &c)).unwrap();
        assert!(zero.forward().is_null_homotopic());
        let four = mon(4);
        let h = factor_through_epi_into(&four, &two);
        let r = roof_lift(&lat, &four, &two, &h).unwrap();
        assert!(r.shadow().equals(&h));
    }

    fn factor_through_epi_into(x: &MonObject<Z>, y: &MonObject<Z>) -> PresentedMorphism<Z> {
        let (px, py) = (x.shadow(), y.shadow());
        crate::abcat::factor_through_epi(&px.projection, &py.projection).unwrap()
    }

    #[test]
    fn lifting_needs_a_roof() {
        // x = (0 ↪ Z/2) and y = (Z --2--> Z) share the shadow Z/2, but no
        // map Z/2 → Z covers the identity
        let e2 = cat("torsion-exponent:2");
        let z2 = PresentedObject::<Z>::cyclic(int(2));
        let x = MonObject::from_object(&z2);
        let y = MonObject::new(mul(2)).unwrap();
        let h = HomGroup::new(&x.shadow().object, &y.shadow().object).generators()[0].clone();
        assert!(lift_along(&y.shadow().projection, &h.compose(&x.shadow().projection)).is_none());
        let r = roof_lift(&e2, &x, &y, &h).unwrap();
        assert!(r.shadow().equals(&h));
        assert!(is_bicartesian(&e2, r.backward()));
    }

    #[test]
    fn equality_of_roofs() {
        let lat = cat("torsion-free");
        let two = mon(2);
        let id = RoofMorphism::from_square(MonMorphism::identity(&two));
        let zero = RoofMorphism::from_square(MonMorphism::zero(&two, &two));
        assert!(!roofs_equal(&lat, &id, &zero, true).unwrap().equal);
        // precompose both legs with a bicartesian square
        let s = MonMorphism::new(&two, &two, mul(1), mul(1)).unwrap();
        let longer = RoofMorphism::new(&lat, s.clone(), s).unwrap();
        let eq = roofs_equal(&lat, &id, &longer, true).unwrap();
        assert!(eq.equal);
        assert!(eq.certificate.is_some());
        // a null-homotopic modification changes nothing
        let modified = MonMorphism::from_upper(&two, &two, mul(3)).unwrap();
        let r = RoofMorphism::from_square(modified);
        assert!(roofs_equal(&lat, &id, &r, true).unwrap().equal);
    }

    #[test]
    fn localized_hom_examples() {
        let lat = cat("torsion-free");
        let z = PresentedObject::<Z>::free(1);
        let two = mon(2);
        let h = localized_hom(&lat, &two, &two).unwrap();
        assert!(h.group().is_isomorphic(&PresentedObject::cyclic(int(2))));
        assert_eq!(h.roofs.len(), h.group().generators());
        let free = MonObject::from_object(&z);
        assert!(localized_hom(&lat, &free, &free).unwrap().group().is_isomorphic(&z));
        assert!(localized_hom(&lat, &two, &free).unwrap().group().is_zero());
    }

    #[test]
    fn hull_examples() {
        let e2 = cat("torsion-exponent:2");
        let lat = cat("torsion-free");
        assert_eq!(hull_membership(&e2, &mon(2), 8).unwrap(), HullClass::InE);
        assert_eq!(hull_membership(&e2, &mon(4), 8).unwrap().label(), "in_hull");
        assert_eq!(hull_membership(&lat, &mon(2), 8).unwrap(), HullClass::HeartOnly);
    }
}
