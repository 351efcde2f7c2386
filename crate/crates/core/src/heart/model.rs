use serde_json::{json, Value};

use rand::Rng;

use crate::abcat::{
    factor_through_mono, image, is_epi, is_mono, kernel, pullback, HomGroup, PresentedMorphism, PresentedObject,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::freyd::is_effaceable;
use crate::intlin::{Matrix, Ring};
use crate::monloc::{hull_membership, is_bicartesian, roof_lift, shadow_is_iso, HullClass, MonObject};
use crate::regular::{enumerate_members, Predicate, RegularCategory};
use crate::report::{Outcome, Report};
use crate::sample::{Bounds, Sampler};

/// The left heart of `E`, realized as the ambient module category: every
/// ambient object is a quotient of a free object, and free objects lie
/// in `E`.
#[derive(Clone)]
pub struct HeartModel<R> {
    regular: RegularCategory<R>,
    /// The whole ambient category, for sampling heart objects.
    ambient: RegularCategory<R>,
}

impl<R: Ring> std::fmt::Debug for HeartModel<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HeartModel({:?})", self.regular)
    }
}

impl<R: Ring> HeartModel<R> {
    pub fn new(regular: RegularCategory<R>) -> Result<Self> {
        if regular.predicate().profile().is_none() {
            return Err(Error::Precondition(format!(
                "predicate {} is not closed under subobjects and quotients",
                regular.predicate()
            )));
        }
        let ambient = RegularCategory::new(regular.ambient(), Predicate::all())?;
        Ok(HeartModel { regular, ambient })
    }

    pub fn regular(&self) -> &RegularCategory<R> {
        &self.regular
    }

    /// The ambient category viewed with the trivial predicate.
    pub fn ambient(&self) -> &RegularCategory<R> {
        &self.ambient
    }

    pub fn contains(&self, x: &PresentedObject<R>) -> bool {
        self.ambient.contains(x)
    }

    /// `K ↣ F ↠ x` with `F` free on the generators of `x`; `K` lies in `E`
    /// as a subobject of a free object.
    pub fn resolution(&self, x: &PresentedObject<R>) -> Result<MonObject<R>> {
        if !self.contains(x) {
            return Err(Error::Precondition(format!("{x} is not an ambient object")));
        }
        let g = x.generators();
        let cover = PresentedMorphism::new(self.regular.free(g), x.clone(), Matrix::identity(g))?;
        MonObject::new(kernel(&cover).inclusion)
    }

    fn describe(&self) -> Value {
        self.regular.describe()
    }
}

fn fail(model_desc: &Value, reason: impl Into<String>, data: Value) -> Outcome {
    Outcome::Fail(json!({ "reason": reason.into(), "category": model_desc, "data": data }))
}

fn salted(seed: u64, salt: u64) -> u64 {
    seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Runs `f` on `bounds.samples` independent samplers over `cat`.
pub(crate) fn sampled<R, F>(
    name: String,
    cat: &RegularCategory<R>,
    bounds: Bounds,
    seed: u64,
    salt: u64,
    exec: Execution,
    f: F,
) -> Result<Report>
where
    R: Ring,
    F: Fn(&mut Sampler<'_, R>) -> Result<Outcome> + Sync + Send,
{
    let outcomes = exec.map(bounds.samples, |i| {
        let mut s = Sampler::new(cat, bounds, salted(seed, salt), i as u64);
        f(&mut s)
    });
    let outcomes: Result<Vec<Outcome>> = outcomes.into_iter().collect();
    Ok(Report::from_outcomes(name, outcomes?, bounds.to_json(), Some(seed)))
}

/// The checks (a)–(d) of the equivalence between the localization of
/// `hMon(E)` at bicartesian squares and the ambient model, plus the
/// degenerate case when `E` is the whole ambient category.
///
/// (d) enumerates every ambient object with at most `bounds.rank`
/// summands and invariant factors up to `max_factor`.
pub fn verify_heart_equivalence<R: Ring>(
    model: &HeartModel<R>,
    bounds: Bounds,
    max_factor: i64,
    seed: u64,
    exec: Execution,
) -> Result<Vec<Report>> {
    let cat = model.regular();
    let desc = model.describe();
    let name = |s: &str| format!("heart:{s}:{}", cat.predicate());
    let mut reports = Vec::new();

    // (a) bicartesian squares have invertible shadows
    reports.push(sampled(name("a-localizing-squares-invert"), cat, bounds, seed, 1, exec, |s| {
        let y = s.mon_object();
        let u = s.bicartesian_square_onto(&y);
        if !is_bicartesian(cat, &u) {
            return Err(Error::Invariant("constructed square is not bicartesian".into()));
        }
        let x = s.mon_object();
        let v = s.square(&x, &y);
        for w in [&u, &v] {
            if is_bicartesian(cat, w) && !shadow_is_iso(w) {
                return Ok(fail(&desc, "bicartesian square with non-invertible shadow", w.to_json()));
            }
        }
        Ok(Outcome::Pass)
    })?);

    // (b) saturation: invertible shadow forces bicartesian
    reports.push(sampled(name("b-saturation"), cat, bounds, seed, 2, exec, |s| {
        let y = s.mon_object();
        let u = s.bicartesian_square_onto(&y);
        let t = s.null_homotopic_square(u.source(), &y);
        let perturbed = u.add(&t);
        let x = s.mon_object();
        let v = s.square(&x, &y);
        let mut tested = false;
        for w in [&perturbed, &v] {
            if shadow_is_iso(w) {
                tested = true;
                if !is_bicartesian(cat, w) {
                    return Ok(fail(&desc, "square with invertible shadow is not bicartesian", w.to_json()));
                }
            }
        }
        Ok(if tested { Outcome::Pass } else { Outcome::Vacuous })
    })?);

    // (c) every generator of the ambient hom group lifts to a roof
    reports.push(sampled(name("c-roofs-realize-homs"), cat, bounds, seed, 3, exec, |s| {
        let x = s.mon_object();
        let y = s.mon_object();
        let hom = HomGroup::new(&x.shadow().object, &y.shadow().object);
        for h in hom.generators() {
            if let Err(e) = roof_lift(cat, &x, &y, &h) {
                return Ok(fail(
                    &desc,
                    format!("no roof realizes a generator: {e}"),
                    json!({ "x": x.to_json(), "y": y.to_json(), "map": h.to_json() }),
                ));
            }
        }
        Ok(Outcome::Pass)
    })?);

    // (d) every small ambient object is a shadow
    let objects = enumerate_members(model.ambient(), bounds.rank, max_factor);
    let outcomes = exec.map(objects.len(), |i| realize(model, &objects[i]));
    let outcomes: Result<Vec<Outcome>> = outcomes.into_iter().collect();
    let mut d = Report::from_outcomes(name("d-objects-are-shadows"), outcomes?, bounds.to_json(), Some(seed));
    d.bounds["max_factor"] = json!(max_factor);
    reports.push(d);

    if *cat.predicate() == Predicate::all() {
        reports.push(abelian_degeneration(model, bounds, seed, exec)?);
    }
    Ok(reports)
}

fn realize<R: Ring>(model: &HeartModel<R>, x: &PresentedObject<R>) -> Result<Outcome> {
    let cat = model.regular();
    let r = model.resolution(x)?;
    let ok = cat.contains(r.lower()) && cat.contains(r.upper()) && r.shadow().object.is_isomorphic(x);
    Ok(if ok {
        Outcome::Pass
    } else {
        fail(&model.describe(), format!("{x} is not realized by its resolution"), r.to_json())
    })
}

/// With the trivial predicate every mono object is in `E`, shadows are
/// plain cokernels, `0 ↪ X` has shadow `X`, and a Freyd object is
/// effaceable exactly when its presentation is epi.
fn abelian_degeneration<R: Ring>(model: &HeartModel<R>, bounds: Bounds, seed: u64, exec: Execution) -> Result<Report> {
    let cat = model.regular();
    let desc = model.describe();
    sampled(format!("heart:abelian-degeneration:{}", cat.predicate()), cat, bounds, seed, 4, exec, |s| {
        let x = s.object();
        if !MonObject::from_object(&x).shadow().object.is_isomorphic(&x) {
            return Ok(fail(&desc, "shadow of 0 ↪ X differs from X", x.to_json()));
        }
        let m = s.mon_object();
        if hull_membership(cat, &m, 1)? != HullClass::InE {
            return Ok(fail(&desc, "mono object outside E", m.to_json()));
        }
        let f = s.freyd_object();
        if is_effaceable(cat, &f)? != is_epi(f.presentation()) {
            return Ok(fail(&desc, "effaceable verdict differs from surjectivity", f.to_json()));
        }
        Ok(Outcome::Pass)
    })
}

/// Sampled checks that `E` sits in the model as an exact, fully faithful,
/// subobject-closed subcategory, and that model objects have two-term
/// resolutions by objects of `E`.
pub fn verify_embedding_properties<R: Ring>(
    model: &HeartModel<R>,
    bounds: Bounds,
    seed: u64,
    exec: Execution,
) -> Result<Report> {
    let cat = model.regular();
    let desc = model.describe();
    sampled(format!("heart:embedding:{}", cat.predicate()), cat, bounds, seed, 5, exec, |s| {
        let f = s.any_morphism();
        let k = kernel(&f);
        if !cat.contains(&k.object) || !is_mono(&k.inclusion) {
            return Ok(fail(&desc, "kernel in the model leaves E", f.to_json()));
        }
        if is_mono(&f) != k.object.is_zero() {
            return Ok(fail(&desc, "monos of E and of the model differ", f.to_json()));
        }
        let fac = cat.deflation_mono_factorization(&f)?;
        let im = image(&f);
        if !is_epi(&fac.deflation) || !is_mono(&fac.mono) || !fac.middle().is_isomorphic(&im.object) {
            return Ok(fail(&desc, "deflation-mono factorization is not the image factorization", f.to_json()));
        }
        // a model subobject of an object of E
        let mut a = Sampler::new(model.ambient(), s.bounds, s.rng.random(), 0);
        let w = a.object();
        let g = a.morphism(&w, f.target());
        let sub = image(&g);
        if !cat.contains(&sub.object) {
            return Ok(fail(&desc, "subobject of an object of E leaves E", g.to_json()));
        }
        // resolution of a model object
        let r = model.resolution(&w)?;
        if !cat.contains(r.lower()) || !cat.contains(r.upper()) || !r.shadow().object.is_isomorphic(&w) {
            return Ok(fail(&desc, "model object without a resolution in E", w.to_json()));
        }
        Ok(Outcome::Pass)
    })
}

/// Shadows of single inflations lie in `E`; extensions of composites of
/// inflations and their subobjects in the model stay composites of
/// inflations.
pub fn verify_hull_sandwich<R: Ring>(
    model: &HeartModel<R>,
    bounds: Bounds,
    seed: u64,
    exec: Execution,
) -> Result<Report> {
    let cat = model.regular();
    let desc = model.describe();
    let depth = bounds.chain_depth;
    let in_hull = move |m: &MonObject<R>| -> Result<Option<&'static str>> {
        Ok(match hull_membership(cat, m, depth)? {
            HullClass::InE | HullClass::InHull(_) => None,
            other => Some(other.label()),
        })
    };
    sampled(format!("heart:hull-sandwich:{}", cat.predicate()), cat, bounds, seed, 6, exec, |s| {
        let y = s.object();
        let i = s.inflation_into(&y);
        if !cat.contains(&MonObject::new(i.clone())?.shadow().object) {
            return Ok(fail(&desc, "shadow of an inflation leaves E", i.to_json()));
        }
        let first = s.hull_object();
        let second = s.hull_object();
        let glue = s.morphism(second.lower(), first.upper());
        let ext = MonObject::extension(&first, &second, &glue)?;
        if let Some(label) = in_hull(&ext)? {
            return Ok(fail(&desc, format!("extension escaped the hull ({label})"), ext.to_json()));
        }
        // a subobject of the shadow, pulled back to the ambient object
        let c = ext.shadow();
        let w = s.object();
        let g = s.morphism(&w, &c.object);
        let sub = image(&g);
        let pb = pullback(&c.projection, &sub.mono);
        let lower = factor_through_mono(&pb.to_left, ext.delta())
            .ok_or_else(|| Error::Invariant("subobject misses the image of δ".into()))?;
        let restricted = MonObject::new(lower)?;
        if !restricted.shadow().object.is_isomorphic(&sub.object) {
            return Err(Error::Invariant("restriction does not realize the subobject".into()));
        }
        if let Some(label) = in_hull(&restricted)? {
            return Ok(fail(&desc, format!("subobject escaped the hull ({label})"), restricted.to_json()));
        }
        Ok(Outcome::Pass)
    })
}
