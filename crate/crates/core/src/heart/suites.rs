use serde_json::json;

use super::model::sampled;
use crate::abcat::{biproduct, direct_sum, is_epi, PresentedMorphism};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::freyd::{
    freyd_hom, freyd_is_iso, has_pd_leq_1, is_effaceable, torsion_decomposition, FreydMorphism, FreydObject,
};
use crate::intlin::Ring;
use crate::monloc::{
    is_bicartesian, quasi_iso_criterion, roofs_equal, shadow_is_iso, MonMorphism, RoofMorphism,
};
use crate::regular::RegularCategory;
use crate::report::{Outcome, Report};
use crate::sample::{Bounds, Sampler};

fn failure(cat: &RegularCategory<impl Ring>, reason: &str, data: serde_json::Value) -> Outcome {
    Outcome::Fail(json!({ "reason": reason, "category": cat.describe(), "data": data }))
}

/// The torsion pair (effaceable, projective dimension ≤ 1) on the Freyd
/// category: decompositions are exact with parts in the right classes,
/// and there are no nonzero maps from the first class to the second.
pub fn verify_torsion_pair<R: Ring>(
    cat: &RegularCategory<R>,
    bounds: Bounds,
    seed: u64,
    exec: Execution,
) -> Result<Vec<Report>> {
    let name = |c: &str| format!("torsion:{c}:{}", cat.predicate());
    let split = sampled(name("decomposition"), cat, bounds, seed, 401, exec, |s| {
        let x = s.freyd_object();
        let d = torsion_decomposition(cat, &x)?;
        let ok = d.is_exact() && is_effaceable(cat, &d.torsion)? && has_pd_leq_1(cat, &d.torsion_free)?;
        Ok(if ok { Outcome::Pass } else { failure(cat, "torsion decomposition is wrong", x.to_json()) })
    })?;
    let orthogonal = sampled(name("orthogonality"), cat, bounds, seed, 402, exec, |s| {
        let t = s.effaceable_object();
        let f = s.pd_one_object();
        if !is_effaceable(cat, &t)? || !has_pd_leq_1(cat, &f)? {
            return Err(Error::Invariant("sampled objects are not in their classes".into()));
        }
        let hom = freyd_hom(&t, &f);
        Ok(if hom.group().is_zero() {
            Outcome::Pass
        } else {
            failure(cat, "nonzero map from an effaceable functor", json!({ "from": t.to_json(), "to": f.to_json() }))
        })
    })?;
    Ok(vec![split, orthogonal])
}

/// `F` is effaceable exactly when its presentation is surjective, and the
/// verdict survives re-presenting `F` by `(f ⊕ 1_W)` with spare relations.
pub fn verify_effaceable_characterization<R: Ring>(
    cat: &RegularCategory<R>,
    bounds: Bounds,
    seed: u64,
    exec: Execution,
) -> Result<Report> {
    sampled(format!("effaceable:characterization:{}", cat.predicate()), cat, bounds, seed, 403, exec, |s| {
        let f = if s.chance(0.5) { s.deflation() } else { s.any_morphism() };
        let x = FreydObject::new(f.clone());
        let verdict = is_effaceable(cat, &x)?;
        if verdict != is_epi(&f) {
            return Ok(failure(cat, "effaceable verdict differs from surjectivity", f.to_json()));
        }
        let (y, eta) = re_present(s, &x);
        if !freyd_is_iso(&eta) {
            return Err(Error::Invariant("re-presentation is not isomorphic".into()));
        }
        Ok(if is_effaceable(cat, &y)? == verdict {
            Outcome::Pass
        } else {
            failure(cat, "re-presenting changed the effaceable verdict", json!({ "first": f.to_json(), "second": y.to_json() }))
        })
    })
}

/// `coker Y(f) ≅ coker Y([f ⊕ 1_W, (f ⊕ 1_W) k]: A ⊕ W ⊕ V → B ⊕ W)`,
/// with the canonical comparison map.
fn re_present<R: Ring>(s: &mut Sampler<'_, R>, x: &FreydObject<R>) -> (FreydObject<R>, FreydMorphism<R>) {
    let f = x.presentation();
    let w = s.object_up_to(1);
    let v = s.object_up_to(1);
    let sum = direct_sum(&[f, &PresentedMorphism::identity(&w)]);
    // spare relations: combinations of the existing ones
    let extra = sum.compose(&s.morphism(&v, sum.source()));
    let presentation = crate::abcat::row_map(&[&sum, &extra]);
    let y = FreydObject::new(presentation);
    let into = biproduct(&[f.target(), &w]).injections[0].clone();
    let eta = FreydMorphism::from_map(x, &y, into).expect("f lands in the relations of the bigger presentation");
    (y, eta)
}

/// Agreement of bicartesian, quasi-isomorphism and invertible shadow on
/// random squares. Even-numbered samples are constructed positives.
pub fn verify_localization_agreement<R: Ring>(
    cat: &RegularCategory<R>,
    bounds: Bounds,
    seed: u64,
    exec: Execution,
) -> Result<Report> {
    let outcomes = exec.map(bounds.samples, |i| -> Result<Outcome> {
        let mut s = Sampler::new(cat, bounds, seed ^ 0x51_0C_A1, i as u64);
        let y = s.mon_object();
        let u = if i % 2 == 0 {
            let u = s.bicartesian_square_onto(&y);
            if s.chance(0.5) {
                u.add(&s.null_homotopic_square(u.source(), &y))
            } else {
                u
            }
        } else {
            let x = if s.chance(0.5) { s.mon_object() } else { s.hull_object() };
            s.square(&x, &y)
        };
        let verdicts = [is_bicartesian(cat, &u), quasi_iso_criterion(cat, &u)?, shadow_is_iso(&u)];
        Ok(if verdicts.iter().all(|&v| v == verdicts[0]) {
            if i % 2 == 0 && !verdicts[0] {
                return Err(Error::Invariant("constructed positive square is not bicartesian".into()));
            }
            Outcome::Pass
        } else {
            failure(
                cat,
                "bicartesian, quasi-isomorphism and shadow verdicts disagree",
                json!({ "square": u.to_json(), "bicartesian": verdicts[0], "quasi_iso": verdicts[1], "shadow_iso": verdicts[2] }),
            )
        })
    });
    let outcomes: Result<Vec<Outcome>> = outcomes.into_iter().collect();
    let mut r = Report::from_outcomes(
        format!("localize:agreement:{}", cat.predicate()),
        outcomes?,
        bounds.to_json(),
        Some(seed),
    );
    r.bounds["constructed_positives"] = json!(bounds.samples.div_ceil(2));
    Ok(r)
}

/// Null-homotopic squares have zero shadow and equal the zero roof, with a
/// written-out refinement; squares with zero shadow are null-homotopic.
pub fn verify_mon_vs_hmon<R: Ring>(
    cat: &RegularCategory<R>,
    bounds: Bounds,
    seed: u64,
    exec: Execution,
) -> Result<Report> {
    sampled(format!("localize:null-homotopic:{}", cat.predicate()), cat, bounds, seed, 404, exec, |s| {
        let x = s.mon_object();
        let y = s.mon_object();
        let u = s.null_homotopic_square(&x, &y);
        if !u.shadow().is_zero() {
            return Ok(failure(cat, "null-homotopic square with nonzero shadow", u.to_json()));
        }
        let zero = RoofMorphism::from_square(MonMorphism::zero(&x, &y));
        let eq = roofs_equal(cat, &RoofMorphism::from_square(u.clone()), &zero, true)?;
        if !eq.equal || eq.certificate.is_none() {
            return Ok(failure(cat, "null-homotopic square differs from zero as a roof", u.to_json()));
        }
        let v = s.square(&x, &y);
        if v.shadow().is_zero() && !v.is_null_homotopic() {
            return Ok(failure(cat, "square with zero shadow is not null-homotopic", v.to_json()));
        }
        Ok(Outcome::Pass)
    })
}
