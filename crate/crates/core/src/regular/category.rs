use std::fmt;

use serde_json::{json, Value};

use super::predicate::Predicate;
use crate::abcat::{
    cokernel, factor_through_epi, image, is_epi, is_mono, is_short_exact, kernel, pullback, Kernel,
    PresentedMorphism, PresentedObject, Pullback,
};
use crate::error::{Error, Result};
use crate::intlin::{Matrix, Ring};

/// The ambient abelian category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ambient {
    /// Finitely generated abelian groups.
    FgAb,
    /// Finite-dimensional rational vector spaces.
    VecQ,
    /// Finite-dimensional vector spaces over `F_p`, realized as groups killed by `p`.
    VecFp(u64),
}

impl Ambient {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "fgab" | "fgAb" => Ok(Ambient::FgAb),
            "vec:Q" | "vec:q" => Ok(Ambient::VecQ),
            other => {
                let p = other
                    .strip_prefix("vec:F")
                    .or_else(|| other.strip_prefix("vec:f"))
                    .ok_or_else(|| Error::Parse(format!("unknown ambient {other:?}")))?;
                let p: u64 = p.parse().map_err(|_| Error::Parse(format!("bad field size in {other:?}")))?;
                if p < 2 || !(2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
                    return Err(Error::Parse(format!("{p} is not prime")));
                }
                Ok(Ambient::VecFp(p))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Ambient::FgAb => "fgab".into(),
            Ambient::VecQ => "vec:Q".into(),
            Ambient::VecFp(p) => format!("vec:F{p}"),
        }
    }
}

/// A deflation `p` followed by a monomorphism `m`, with `f = m ∘ p`.
#[derive(Clone, Debug)]
pub struct Factorization<R> {
    pub deflation: PresentedMorphism<R>,
    pub mono: PresentedMorphism<R>,
}

impl<R: Ring> Factorization<R> {
    pub fn middle(&self) -> &PresentedObject<R> {
        self.deflation.target()
    }
}

/// An additive regular category realized as a subobject-closed full
/// subcategory of an ambient module category.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RegularCategory<R> {
    ambient: Ambient,
    predicate: Predicate,
    _ring: std::marker::PhantomData<R>,
}

impl<R: Ring> fmt::Debug for RegularCategory<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.ambient.name(), self.predicate)
    }
}

impl<R: Ring> RegularCategory<R> {
    /// Fails when the predicate rejects the ambient free objects, since
    /// then `E` has no covering quotients.
    pub fn new(ambient: Ambient, predicate: Predicate) -> Result<Self> {
        let cat = RegularCategory { ambient, predicate, _ring: std::marker::PhantomData };
        if !cat.contains(&cat.free(1)) {
            return Err(Error::Precondition(format!(
                "predicate {} excludes the free objects of {}",
                cat.predicate,
                ambient.name()
            )));
        }
        Ok(cat)
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn predicate(&self) -> &Predicate {
        &self.predicate
    }

    pub fn describe(&self) -> Value {
        json!({ "ambient": self.ambient.name(), "predicate": self.predicate.name() })
    }

    /// The free object of rank `n` in the ambient category.
    pub fn free(&self, n: usize) -> PresentedObject<R> {
        match self.ambient {
            Ambient::VecFp(p) => PresentedObject::new(n, Matrix::identity(n).scale(&R::from_i64(p as i64)))
                .expect("square presentation"),
            _ => PresentedObject::free(n),
        }
    }

    /// Whether `x` is an object of the ambient category.
    pub fn in_ambient(&self, x: &PresentedObject<R>) -> bool {
        match self.ambient {
            Ambient::VecFp(p) => {
                let p = R::from_i64(p as i64);
                (0..x.generators()).all(|i| {
                    let v: Vec<R> = x.unit_vector(i).into_iter().map(|c| c * p.clone()).collect();
                    x.is_zero_element(&v)
                })
            }
            _ => true,
        }
    }

    pub fn contains(&self, x: &PresentedObject<R>) -> bool {
        self.in_ambient(x) && self.predicate.admits(&x.invariants())
    }

    pub fn require(&self, x: &PresentedObject<R>) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::PredicateViolation { predicate: self.predicate.name(), detail: format!("object {x}") })
        }
    }

    pub fn require_morphism(&self, f: &PresentedMorphism<R>) -> Result<()> {
        self.require(f.source())?;
        self.require(f.target())
    }

    /// The smallest subobject `K' ⊇ K` of `G` with `G/K'` in `E`, given
    /// the inclusion `K ↪ G`. Returned as a kernel-style inclusion.
    pub fn coreflect(&self, k: &PresentedMorphism<R>) -> Result<Kernel<R>> {
        let profile = self
            .predicate
            .profile()
            .ok_or_else(|| Error::NoCoreflection(format!("predicate {} has no quotient coreflection", self.predicate)))?;
        let g = k.target();
        let q = cokernel(k);
        let rels = q.object.relations();
        let mut extra = Vec::new();
        for i in 0..rels.cols() {
            let d = rels[(i, i)].clone();
            let keep = profile.allowed_part(&d);
            if keep.is_unit() && d.is_unit() {
                continue;
            }
            if keep != d {
                let mut v = q.object.zero_element();
                v[i] = keep;
                extra.push(q.projection.preimage(&v).expect("projection is surjective"));
            }
        }
        let mut cols = k.matrix().columns();
        cols.extend(extra);
        let n = cols.len();
        let spanning = PresentedMorphism::new(
            PresentedObject::free(n),
            g.clone(),
            Matrix::from_columns(g.generators(), &cols),
        )
        .expect("maps out of free objects are well defined");
        let im = image(&spanning);
        Ok(Kernel { object: im.object, inclusion: im.mono })
    }

    /// The largest quotient of `g` lying in `E`.
    pub fn reflect_quotient(&self, g: &PresentedObject<R>) -> Result<crate::abcat::Cokernel<R>> {
        let zero = PresentedMorphism::zero(&PresentedObject::zero(), g);
        let k = self.coreflect(&zero)?;
        Ok(cokernel(&k.inclusion))
    }

    /// The cokernel of `f` computed inside `E`: the quotient of the target
    /// by the coreflection of the image.
    pub fn e_cokernel(&self, f: &PresentedMorphism<R>) -> Result<crate::abcat::Cokernel<R>> {
        let im = image(f);
        let k = self.coreflect(&im.mono)?;
        Ok(cokernel(&k.inclusion))
    }

    pub fn is_deflation(&self, f: &PresentedMorphism<R>) -> Result<bool> {
        self.require_morphism(f)?;
        let epi = is_epi(f);
        if epi {
            let k = kernel(f);
            if !self.contains(&k.object) {
                return Err(Error::Invariant(format!(
                    "kernel {} of a deflation left {}",
                    k.object, self.predicate
                )));
            }
        }
        Ok(epi)
    }

    pub fn is_inflation(&self, f: &PresentedMorphism<R>) -> Result<bool> {
        self.require_morphism(f)?;
        Ok(is_mono(f) && self.contains(&cokernel(f).object))
    }

    /// Whether `X --i--> Y --p--> Z` is a conflation of `E`.
    pub fn is_conflation(&self, i: &PresentedMorphism<R>, p: &PresentedMorphism<R>) -> bool {
        self.contains(i.source())
            && self.contains(i.target())
            && self.contains(p.target())
            && is_short_exact(i, p)
    }

    pub fn deflation_mono_factorization(&self, f: &PresentedMorphism<R>) -> Result<Factorization<R>> {
        self.require_morphism(f)?;
        let im = image(f);
        if !self.contains(&im.object) {
            return Err(Error::Invariant(format!("image {} of a morphism in E left {}", im.object, self.predicate)));
        }
        Ok(Factorization { deflation: im.epi, mono: im.mono })
    }

    /// Factorization through the `E`-cokernel of the kernel of `f`.
    pub fn cokernel_mono_factorization(&self, f: &PresentedMorphism<R>) -> Result<Factorization<R>> {
        let fac = self.deflation_mono_factorization(f)?;
        let k = kernel(f);
        let c = self.e_cokernel(&k.inclusion)?;
        // the E-cokernel of the kernel and the deflation part agree up to a unique iso
        let iso = factor_through_epi(&c.projection, &fac.deflation)
            .ok_or_else(|| Error::Invariant("deflation part does not factor through the cokernel".into()))?;
        if !crate::abcat::is_iso(&iso) {
            return Err(Error::Invariant("cokernel of the kernel differs from the image".into()));
        }
        let mono = fac.mono.compose(&iso);
        Ok(Factorization { deflation: c.projection, mono })
    }

    /// Pullback of two inflations with common codomain, checking that all
    /// four sides are inflations.
    pub fn admissible_intersection(
        &self,
        f: &PresentedMorphism<R>,
        g: &PresentedMorphism<R>,
    ) -> Result<Pullback<R>> {
        for (name, m) in [("first", f), ("second", g)] {
            if !self.is_inflation(m)? {
                return Err(Error::Precondition(format!("{name} map is not an inflation")));
            }
        }
        let pb = pullback(f, g);
        if !self.contains(&pb.object) {
            return Err(Error::Invariant("intersection of inflations left E".into()));
        }
        for m in [&pb.to_left, &pb.to_right] {
            if !self.is_inflation(m)? {
                return Err(Error::Invariant("pullback projection of inflations is not an inflation".into()));
            }
        }
        Ok(pb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abcat::is_iso;
    use crate::intlin::{int, Z};

    fn cat(p: &str) -> RegularCategory<Z> {
        RegularCategory::new(Ambient::FgAb, Predicate::parse(p).unwrap()).unwrap()
    }

    fn map(s: &PresentedObject<Z>, t: &PresentedObject<Z>, m: &[&[i64]]) -> PresentedMorphism<Z> {
        PresentedMorphism::new(s.clone(), t.clone(), Matrix::from_i64(m)).unwrap()
    }

    #[test]
    fn deflations_and_inflations() {
        let lat = cat("torsion-free");
        let e2 = cat("torsion-exponent:2");
        let z = PresentedObject::<Z>::free(1);
        let z2 = PresentedObject::<Z>::free(2);
        let c2 = PresentedObject::<Z>::cyclic(int(2));
        assert!(lat.is_deflation(&map(&z2, &z, &[&[1, 0]])).unwrap());
        assert!(!lat.is_deflation(&map(&z, &z, &[&[2]])).unwrap());
        assert!(e2.is_deflation(&map(&z, &c2, &[&[1]])).unwrap());
        assert!(e2.is_inflation(&map(&z, &z, &[&[2]])).unwrap());
        assert!(!e2.is_inflation(&map(&z, &z, &[&[4]])).unwrap());
        assert!(lat.is_inflation(&PresentedMorphism::identity(&z)).unwrap());
        assert!(matches!(lat.is_deflation(&map(&z, &c2, &[&[1]])), Err(Error::PredicateViolation { .. })));
    }

    #[test]
    fn factorization_examples() {
        let lat = cat("torsion-free");
        let z = PresentedObject::<Z>::free(1);
        let z2 = PresentedObject::<Z>::free(2);
        let f = map(&z2, &z2, &[&[2, 0], &[0, 0]]);
        let fac = lat.deflation_mono_factorization(&f).unwrap();
        assert!(fac.middle().is_isomorphic(&z));
        assert!(fac.mono.compose(&fac.deflation).equals(&f));
        assert!(lat.is_deflation(&fac.deflation).unwrap());
        assert!(is_mono(&fac.mono));

        let g = map(&z2, &z, &[&[2, 2]]);
        let fac = lat.cokernel_mono_factorization(&g).unwrap();
        let p = fac.deflation.matrix();
        assert!(p.row(0) == vec![int(1), int(1)] || p.row(0) == vec![int(-1), int(-1)]);
        assert!(fac.mono.compose(&fac.deflation).equals(&g));
        let zero = PresentedMorphism::zero(&z2, &z);
        let fac = lat.cokernel_mono_factorization(&zero).unwrap();
        assert!(fac.middle().is_zero());
    }

    #[test]
    fn coreflections() {
        let z = PresentedObject::<Z>::free(1);
        let two_two = map(&z, &PresentedObject::free(2), &[&[2], &[2]]);
        let k = cat("torsion-free").coreflect(&two_two).unwrap();
        let c = k.inclusion.matrix().column(0);
        assert!(c == vec![int(1), int(1)] || c == vec![int(-1), int(-1)]);
        // inside Z, 8Z coreflects to 2Z for E_2
        let k = cat("torsion-exponent:2").coreflect(&map(&z, &z, &[&[8]])).unwrap();
        assert!(cokernel(&k.inclusion).object.is_isomorphic(&PresentedObject::cyclic(int(2))));
        let k = cat("all").coreflect(&map(&z, &z, &[&[8]])).unwrap();
        assert!(cokernel(&k.inclusion).object.is_isomorphic(&PresentedObject::cyclic(int(8))));
        assert!(cat("free-or-Z4").coreflect(&map(&z, &z, &[&[8]])).is_err());
    }

    #[test]
    fn intersections() {
        let z = PresentedObject::<Z>::free(1);
        let id = PresentedMorphism::identity(&z);
        let pb = cat("torsion-free").admissible_intersection(&id, &id).unwrap();
        assert!(is_iso(&pb.to_left) && is_iso(&pb.to_right));
        let e2 = cat("torsion-exponent:2");
        let pb = e2.admissible_intersection(&map(&z, &z, &[&[2]]), &id).unwrap();
        assert!(is_iso(&pb.to_left));
        assert!(pb.to_right.matrix()[(0, 0)] == int(2) || pb.to_right.matrix()[(0, 0)] == int(-2));
        let all = cat("all");
        let pb = all.admissible_intersection(&map(&z, &z, &[&[2]]), &map(&z, &z, &[&[3]])).unwrap();
        let through = map(&z, &z, &[&[2]]).compose(&pb.to_left);
        assert!(through.matrix()[(0, 0)] == int(6) || through.matrix()[(0, 0)] == int(-6));
        assert!(e2.admissible_intersection(&map(&z, &z, &[&[4]]), &id).is_err());
    }

    #[test]
    fn vector_space_ambients() {
        let f3 = RegularCategory::<Z>::new(Ambient::VecFp(3), Predicate::all()).unwrap();
        let v = f3.free(2);
        assert!(f3.contains(&v));
        assert!(!f3.contains(&PresentedObject::free(1)));
        assert!(RegularCategory::<Z>::new(Ambient::VecFp(3), Predicate::torsion_free()).is_err());
        let q = RegularCategory::<crate::intlin::Q>::new(Ambient::VecQ, Predicate::all()).unwrap();
        assert!(q.contains(&q.free(3)));
        assert_eq!(Ambient::parse("vec:F5").unwrap(), Ambient::VecFp(5));
        assert!(Ambient::parse("vec:F6").is_err());
    }
}
