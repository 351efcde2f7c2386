use std::fmt;

use serde_json::{json, Value};

use super::model::sampled;
use crate::abcat::{cokernel, image, kernel, pushout, PresentedMorphism, PresentedObject};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::freyd::{chase_transformation, is_effaceable, FreydObject};
use crate::intlin::{Matrix, Ring};
use crate::regular::{Ambient, Predicate, RegularCategory};
use crate::report::{certificate, Outcome, Report};
use crate::sample::{Bounds, Sampler};

/// A decidable full subcategory `T` of the host category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subclass {
    /// Finite groups.
    Finite,
    /// Free groups.
    Free,
    /// Groups admitted by a predicate.
    Member(Predicate),
}

impl Subclass {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "finite" => Ok(Subclass::Finite),
            "free" => Ok(Subclass::Free),
            other => Ok(Subclass::Member(Predicate::parse(other)?)),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Subclass::Finite => "finite".into(),
            Subclass::Free => "free".into(),
            Subclass::Member(p) => p.name(),
        }
    }

    pub fn contains<R: Ring>(&self, x: &PresentedObject<R>) -> bool {
        let inv = x.invariants();
        match self {
            Subclass::Finite => inv.free_rank == 0,
            Subclass::Free => inv.torsion.is_empty(),
            Subclass::Member(p) => p.admits(&inv),
        }
    }

    /// A random object of `T` on a scrambled presentation.
    fn sample<R: Ring>(&self, s: &mut Sampler<'_, R>) -> PresentedObject<R> {
        let inv = s.object().invariants();
        let base = match self {
            Subclass::Finite => PresentedObject::from_invariants(0, &inv.torsion),
            Subclass::Free => PresentedObject::free(inv.free_rank),
            Subclass::Member(p) => {
                let torsion: Vec<R> = match p.profile() {
                    Some(profile) => {
                        inv.torsion.iter().map(|d| profile.allowed_part(d)).filter(|d| !d.is_unit()).collect()
                    }
                    None => Vec::new(),
                };
                let mut torsion = torsion;
                torsion.sort_by_key(|d| d.size());
                PresentedObject::from_invariants(inv.free_rank, &torsion)
            }
        };
        let x = s.scramble(&base);
        debug_assert!(self.contains(&x));
        x
    }
}

impl fmt::Display for Subclass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// The extension `a ↣ A ↠ b` presented by `[[R_a, glue], [0, R_b]]`;
/// exact when the relation columns of `b` are independent.
fn extension<R: Ring>(
    a: &PresentedObject<R>,
    b: &PresentedObject<R>,
    glue: &Matrix<R>,
) -> (PresentedMorphism<R>, PresentedMorphism<R>) {
    let (ga, gb) = (a.generators(), b.generators());
    let top = Matrix::hstack(&[a.relations(), glue]);
    let bottom = Matrix::hstack(&[&Matrix::zeros(gb, a.relations().cols()), b.relations()]);
    let middle = PresentedObject::new(ga + gb, Matrix::vstack(&[&top, &bottom])).expect("block presentation");
    let incl = PresentedMorphism::new(
        a.clone(),
        middle.clone(),
        Matrix::vstack(&[&Matrix::identity(ga), &Matrix::zeros(gb, ga)]),
    )
    .expect("inclusion of the first block");
    let proj = PresentedMorphism::new(middle, b.clone(), Matrix::hstack(&[&Matrix::zeros(gb, ga), &Matrix::identity(gb)]))
        .expect("projection to the second block");
    (incl, proj)
}

fn instance_certificate<R: Ring>(
    host: &RegularCategory<R>,
    t: &Subclass,
    check: &str,
    reason: String,
    maps: &[(&str, &PresentedMorphism<R>)],
) -> Outcome {
    let names: Vec<(String, Value)> = maps.iter().map(|(n, m)| (n.to_string(), m.to_json())).collect();
    let task = json!({
        "op": "percolate-instance",
        "subclass": t.name(),
        "check": check,
        "morphisms": maps.iter().map(|(n, _)| n.to_string()).collect::<Vec<_>>(),
    });
    Outcome::Fail(certificate(&reason, &host.describe(), &names, task))
}

/// Checks one instance of a percolating axiom on explicit maps, as listed
/// in a failure certificate.
///
/// `P1` takes a short exact sequence `(i, p)`, `subobject` a mono into an
/// object of `T`, `P2` and `A2` a map into an object of `T`, `A3` a
/// deflation onto an object of `T` and an inflation with the same source.
pub fn check_percolating_instance<R: Ring>(
    host: &RegularCategory<R>,
    t: &Subclass,
    check: &str,
    maps: &[PresentedMorphism<R>],
) -> Result<Outcome> {
    let arity = match check {
        "P1" | "A1" | "A3" => 2,
        "subobject" | "P2" | "A2" => 1,
        other => return Err(Error::Parse(format!("unknown percolating check {other}"))),
    };
    if maps.len() != arity {
        return Err(Error::Shape(format!("{check} needs {arity} morphisms, got {}", maps.len())));
    }
    for m in maps {
        if !host.contains(m.source()) || !host.contains(m.target()) {
            return Ok(Outcome::Vacuous);
        }
    }
    let fail = |reason: String| -> Outcome {
        let names = ["first", "second"];
        let named: Vec<(&str, &PresentedMorphism<R>)> = names.iter().copied().zip(maps.iter()).collect();
        instance_certificate(host, t, check, reason, &named)
    };
    Ok(match check {
        "P1" | "A1" => {
            let (i, p) = (&maps[0], &maps[1]);
            if !host.is_conflation(i, p) {
                return Ok(Outcome::Vacuous);
            }
            let (a, b, c) = (i.source(), i.target(), p.target());
            let (ia, ib, ic) = (t.contains(a), t.contains(b), t.contains(c));
            if ib == (ia && ic) {
                Outcome::Pass
            } else if ib {
                let side = if ia { "quotient" } else { "subobject" };
                let leaving = if ia { c } else { a };
                fail(format!("{side} {leaving} of {b} leaves {t}"))
            } else {
                fail(format!("extension {b} of {c} by {a} leaves {t}"))
            }
        }
        "subobject" => {
            let m = &maps[0];
            if !t.contains(m.target()) || !crate::abcat::is_mono(m) {
                return Ok(Outcome::Vacuous);
            }
            if t.contains(m.source()) {
                Outcome::Pass
            } else {
                fail(format!("subobject {} of {} leaves {t}", m.source(), m.target()))
            }
        }
        "P2" | "A2" => {
            let f = &maps[0];
            if !t.contains(f.target()) {
                return Ok(Outcome::Vacuous);
            }
            let fac = host.deflation_mono_factorization(f)?;
            if !t.contains(fac.middle()) {
                return Ok(fail(format!("image {} of a map into {} leaves {t}", fac.middle(), f.target())));
            }
            if check == "A2" && !host.is_inflation(&fac.mono)? {
                return Ok(fail("map into T is not admissible".into()));
            }
            Outcome::Pass
        }
        _ => {
            let (p, g) = (&maps[0], &maps[1]);
            if p.source() != g.source() || !t.contains(p.target()) || !host.is_deflation(p)? || !host.is_inflation(g)? {
                return Ok(Outcome::Vacuous);
            }
            let po = pushout(p, g);
            if !host.contains(&po.object) {
                return Ok(fail(format!("pushout {} leaves the host category", po.object)));
            }
            if !host.is_inflation(&po.from_left)? || !host.is_deflation(&po.from_right)? {
                return Ok(fail("pushout of a deflation onto T along an inflation is not a conflation square".into()));
            }
            Outcome::Pass
        }
    })
}

/// Sampled checks that `T` is a percolating subcategory of the host:
/// Serre closure (P1, equivalently A1), the factorization P2, closure
/// under subobjects, admissibility A2, the pushout axiom A3, and the
/// verdict "percolating iff Serre and subobject-closed".
pub fn check_percolating<R: Ring>(
    host: &RegularCategory<R>,
    t: &Subclass,
    bounds: Bounds,
    seed: u64,
    exec: Execution,
) -> Result<Vec<Report>> {
    if host.ambient() != Ambient::FgAb {
        return Err(Error::Precondition("percolating checks run over abelian groups".into()));
    }
    let name = |c: &str| format!("percolate:{c}:{t}");
    let run = |check: &'static str, salt: u64, draw: fn(&Subclass, &mut Sampler<'_, R>) -> Vec<PresentedMorphism<R>>| {
        sampled(name(check), host, bounds, seed, 100 + salt, exec, move |s| {
            let maps = draw(t, s);
            check_percolating_instance(host, t, check, &maps)
        })
    };
    let serre = run("P1", 1, draw_conflation)?;
    let factor = run("P2", 2, draw_map_into_t)?;
    let sub = run("subobject", 3, draw_mono_into_t)?;
    let admissible = run("A2", 4, draw_map_into_t)?;
    let pushouts = run("A3", 5, draw_pushout_span)?;

    let percolating = serre.passed() && factor.passed();
    let classified = serre.passed() && sub.passed();
    let mut verdict = Report::new(name("classification"), bounds.to_json(), Some(seed));
    let note = json!({
        "serre": serre.passed(),
        "factorization": factor.passed(),
        "subobject_closed": sub.passed(),
        "percolating": percolating,
    });
    verdict.record(if percolating == classified {
        Outcome::Finding(note)
    } else {
        Outcome::Fail(json!({ "reason": "axioms disagree with the Serre and subobject classification", "verdict": note }))
    });
    Ok(vec![serre, factor, sub, admissible, pushouts, verdict])
}

fn draw_conflation<R: Ring>(t: &Subclass, s: &mut Sampler<'_, R>) -> Vec<PresentedMorphism<R>> {
    if s.chance(0.5) {
        // kernel and image of a map out of an object of T
        let a = t.sample(s);
        let f = s.morphism_from(&a);
        let im = image(&f);
        vec![kernel(&f).inclusion, im.epi]
    } else {
        let a = if s.chance(0.5) { t.sample(s) } else { s.object() };
        let b = if s.chance(0.5) { t.sample(s) } else { s.object() };
        let glue = Matrix::from_fn(a.generators(), b.relations().cols(), |_, _| s.coefficient());
        let (i, p) = extension(&a, &b, &glue);
        vec![i, p]
    }
}

fn draw_map_into_t<R: Ring>(t: &Subclass, s: &mut Sampler<'_, R>) -> Vec<PresentedMorphism<R>> {
    let a = t.sample(s);
    let x = s.object();
    vec![s.morphism(&x, &a)]
}

fn draw_mono_into_t<R: Ring>(t: &Subclass, s: &mut Sampler<'_, R>) -> Vec<PresentedMorphism<R>> {
    let a = t.sample(s);
    if s.chance(0.5) {
        vec![s.inflation_into(&a)]
    } else {
        let x = s.object();
        vec![image(&s.morphism(&x, &a)).mono]
    }
}

fn draw_pushout_span<R: Ring>(t: &Subclass, s: &mut Sampler<'_, R>) -> Vec<PresentedMorphism<R>> {
    let a = t.sample(s);
    let p = s.deflation_onto(&a);
    let x = p.source().clone();
    let w = s.object_up_to(1);
    let h = s.morphism(&x, &w);
    let bp = crate::abcat::biproduct(&[&x, &w]);
    let g = bp.injections[0].add(&bp.injections[1].compose(&h));
    let auto = s.automorphism(&bp.object);
    vec![p, auto.compose(&g)]
}

/// Sampled checks that effaceable functors form a Serre subcategory of
/// the Freyd category (A1), and that images of maps into effaceable
/// functors are effaceable (A2).
pub fn check_effaceable_percolating<R: Ring>(
    cat: &RegularCategory<R>,
    bounds: Bounds,
    seed: u64,
    exec: Execution,
) -> Result<Vec<Report>> {
    let name = |c: &str| format!("percolate:{c}:eff({})", cat.predicate());
    let desc = cat.describe();
    let mixed = |s: &mut Sampler<'_, R>| if s.chance(0.5) { s.effaceable_object() } else { s.freyd_object() };
    let eff = |x: &FreydObject<R>| is_effaceable(cat, x);
    let failure = |reason: &str, eta: Value| Outcome::Fail(json!({ "reason": reason, "category": desc, "transformation": eta }));

    let serre = sampled(name("A1"), cat, bounds, seed, 201, exec, |s| {
        let f = mixed(s);
        let g = mixed(s);
        let eta = s.freyd_morphism(&f, &g);
        let ch = chase_transformation(&eta);
        let (ef, eg) = (eff(&f)?, eff(&g)?);
        let (ek, ei, ec) = (eff(&ch.kernel.object)?, eff(&ch.image)?, eff(&ch.cokernel.object)?);
        let mut tested = false;
        if ef {
            tested = true;
            if !(ek && ei) {
                return Ok(failure("subobject or quotient of an effaceable functor is not effaceable", eta.to_json()));
            }
        }
        if eg {
            tested = true;
            if !(ei && ec) {
                return Ok(failure("subobject or quotient of an effaceable functor is not effaceable", eta.to_json()));
            }
        }
        if ek && ei {
            tested = true;
            if !ef {
                return Ok(failure("extension of effaceable functors is not effaceable", eta.to_json()));
            }
        }
        if ei && ec {
            tested = true;
            if !eg {
                return Ok(failure("extension of effaceable functors is not effaceable", eta.to_json()));
            }
        }
        Ok(if tested { Outcome::Pass } else { Outcome::Vacuous })
    })?;

    let admissible = sampled(name("A2"), cat, bounds, seed, 202, exec, |s| {
        let f = s.freyd_object();
        let g = s.effaceable_object();
        let eta = s.freyd_morphism(&f, &g);
        let ch = chase_transformation(&eta);
        if !ch.verify() {
            return Err(Error::Invariant("diagram chase is not exact".into()));
        }
        Ok(if eff(&ch.image)? { Outcome::Pass } else { failure("image in an effaceable functor is not effaceable", eta.to_json()) })
    })?;
    Ok(vec![serre, admissible])
}

/// Whether the admissible map `f` is inverted in the quotient by `T`:
/// its kernel and cokernel lie in `T`. `T` is first checked to be
/// percolating on a small sample.
pub fn weak_isomorphisms<R: Ring>(host: &RegularCategory<R>, t: &Subclass, f: &PresentedMorphism<R>) -> Result<bool> {
    let fac = host.deflation_mono_factorization(f)?;
    if !host.is_inflation(&fac.mono)? {
        return Err(Error::Precondition("morphism is not admissible".into()));
    }
    let reports = check_percolating(host, t, Bounds::default().with_samples(64), 0, Execution::Sequential)?;
    if let Some(r) = reports.iter().find(|r| !r.passed()) {
        return Err(Error::Precondition(format!("{t} is not percolating: {}", r.summary())));
    }
    Ok(t.contains(&kernel(f).object) && t.contains(&cokernel(f).object))
}
