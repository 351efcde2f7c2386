//! Sampled verification of the one-sided exact axioms.

use std::fmt;

use serde_json::{json, Value};

use super::category::RegularCategory;
use crate::abcat::{
    column_map, image, is_iso, is_mono, kernel, pullback, row_map, PresentedMorphism,
    PresentedObject,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::intlin::{Matrix, Ring};
use crate::report::{certificate, Outcome, Report};
use crate::sample::{Bounds, Sampler};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// `X → 0` is a deflation.
    R0,
    /// Deflations compose.
    R1,
    /// Deflations are stable under pullback.
    R2,
    /// If `p ∘ i` is a deflation and `p` has a kernel, `p` is a deflation.
    R3,
    /// If `p ∘ i` is a deflation, `p` is a deflation.
    R3Plus,
    /// Every morphism is a cokernel followed by a monomorphism.
    DR1,
    /// Cokernels are stable under pullback.
    DR2,
    /// Pullbacks of inflations along inflations are squares of inflations.
    AI,
    /// Inflations compose.
    L1,
    /// Every kernel-cokernel pair is a conflation.
    KernelCokernel,
}

impl Axiom {
    pub const ALL: [Axiom; 10] = [
        Axiom::R0,
        Axiom::R1,
        Axiom::R2,
        Axiom::R3,
        Axiom::R3Plus,
        Axiom::DR1,
        Axiom::DR2,
        Axiom::AI,
        Axiom::L1,
        Axiom::KernelCokernel,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Axiom::R0 => "R0",
            Axiom::R1 => "R1",
            Axiom::R2 => "R2",
            Axiom::R3 => "R3",
            Axiom::R3Plus => "R3plus",
            Axiom::DR1 => "DR1",
            Axiom::DR2 => "DR2",
            Axiom::AI => "AI",
            Axiom::L1 => "L1",
            Axiom::KernelCokernel => "kernel-cokernel",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        Axiom::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(t))
            .or(match t {
                "R3+" | "R3⁺" => Some(Axiom::R3Plus),
                "admissible-intersection" => Some(Axiom::AI),
                "L1-on-samples" => Some(Axiom::L1),
                _ => None,
            })
            .ok_or_else(|| Error::Parse(format!("unknown axiom {s:?}")))
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Input data for one axiom instance.
#[derive(Clone, Debug)]
pub enum AxiomSample<R> {
    Object(PresentedObject<R>),
    /// `first: X → Y` followed by `second: Y → Z`.
    Composable { first: PresentedMorphism<R>, second: PresentedMorphism<R> },
    /// A map `p` and a map `g` with the same codomain.
    Cospan { p: PresentedMorphism<R>, g: PresentedMorphism<R> },
    Morphism(PresentedMorphism<R>),
}

impl<R: Ring> AxiomSample<R> {
    pub fn morphisms(&self) -> Vec<PresentedMorphism<R>> {
        match self {
            AxiomSample::Object(x) => vec![PresentedMorphism::identity(x)],
            AxiomSample::Composable { first, second } => vec![first.clone(), second.clone()],
            AxiomSample::Cospan { p, g } => vec![p.clone(), g.clone()],
            AxiomSample::Morphism(f) => vec![f.clone()],
        }
    }

    /// Rebuilds a sample from the morphism list produced by [`AxiomSample::morphisms`].
    pub fn from_morphisms(axiom: Axiom, ms: Vec<PresentedMorphism<R>>) -> Result<Self> {
        let want = match axiom {
            Axiom::R0 | Axiom::DR1 | Axiom::KernelCokernel => 1,
            _ => 2,
        };
        if ms.len() != want {
            return Err(Error::Parse(format!("axiom {axiom} takes {want} morphisms, got {}", ms.len())));
        }
        let mut it = ms.into_iter();
        let a = it.next().expect("length checked");
        Ok(match axiom {
            Axiom::R0 => AxiomSample::Object(a.source().clone()),
            Axiom::DR1 | Axiom::KernelCokernel => AxiomSample::Morphism(a),
            Axiom::R2 | Axiom::DR2 | Axiom::AI => {
                let b = it.next().expect("length checked");
                if a.target() != b.target() {
                    return Err(Error::Shape("cospan legs need a common codomain".into()));
                }
                AxiomSample::Cospan { p: a, g: b }
            }
            _ => {
                let b = it.next().expect("length checked");
                if a.target() != b.source() {
                    return Err(Error::Shape("maps are not composable".into()));
                }
                AxiomSample::Composable { first: a, second: b }
            }
        })
    }
}

/// Draws one instance suited to `axiom`.
pub fn sample_axiom<R: Ring>(axiom: Axiom, s: &mut Sampler<'_, R>) -> AxiomSample<R> {
    match axiom {
        Axiom::R0 => AxiomSample::Object(s.object()),
        Axiom::R1 => {
            let second = s.deflation();
            let first = s.deflation_onto(&second.source().clone());
            AxiomSample::Composable { first, second }
        }
        Axiom::R2 | Axiom::DR2 => {
            let p = s.deflation();
            let w = s.object();
            let g = s.morphism(&w, p.target());
            AxiomSample::Cospan { p, g }
        }
        Axiom::R3 | Axiom::R3Plus => {
            if s.chance(0.2) {
                let first = s.any_morphism();
                let second = s.morphism_from(first.target());
                return AxiomSample::Composable { first, second };
            }
            // p ∘ i = q by construction: i = (1; r), p = (q - h r, h)
            let q = s.deflation();
            let a = q.source().clone();
            let w = s.object();
            let r = s.morphism(&a, &w);
            let h = s.morphism(&w, q.target());
            let i = column_map(&[&PresentedMorphism::identity(&a), &r]);
            let p = row_map(&[&q.sub(&h.compose(&r)), &h]);
            AxiomSample::Composable { first: i, second: p }
        }
        Axiom::DR1 | Axiom::KernelCokernel => AxiomSample::Morphism(s.any_morphism()),
        Axiom::AI => {
            let z = s.object();
            let p = s.inflation_into(&z);
            let g = s.inflation_into(&z);
            AxiomSample::Cospan { p, g }
        }
        Axiom::L1 => {
            let y = s.object();
            let second = s.inflation_into(&y);
            let first = s.inflation_into(&second.source().clone());
            AxiomSample::Composable { first, second }
        }
    }
}

fn is_e_cokernel<R: Ring>(cat: &RegularCategory<R>, p: &PresentedMorphism<R>) -> Result<bool> {
    let k = kernel(p);
    let c = cat.e_cokernel(&k.inclusion)?;
    Ok(match crate::abcat::factor_through_epi(&c.projection, p) {
        Some(u) => is_iso(&u),
        None => false,
    })
}

fn verdict(ok: bool, reason: &str) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(reason.to_string())
    }
}

enum Check {
    Holds,
    Vacuous,
    Fails(String),
    Finding(Value),
}

fn check_one<R: Ring>(cat: &RegularCategory<R>, axiom: Axiom, sample: &AxiomSample<R>) -> Result<Check> {
    use AxiomSample as S;
    let res: std::result::Result<(), String> = match (axiom, sample) {
        (Axiom::R0, S::Object(x)) => {
            let to_zero = PresentedMorphism::zero(x, &PresentedObject::zero());
            verdict(cat.is_deflation(&to_zero)?, "X -> 0 is not a deflation")
                .and(verdict(cat.is_deflation(&PresentedMorphism::identity(x))?, "identity is not a deflation"))
        }
        (Axiom::R1, S::Composable { first, second }) => {
            if !(cat.is_deflation(first)? && cat.is_deflation(second)?) {
                return Ok(Check::Vacuous);
            }
            verdict(cat.is_deflation(&second.compose(first))?, "composite of deflations is not a deflation")
        }
        (Axiom::R2 | Axiom::DR2, S::Cospan { p, g }) => {
            let hyp = if axiom == Axiom::R2 { cat.is_deflation(p)? } else { is_e_cokernel(cat, p)? };
            if !hyp {
                return Ok(Check::Vacuous);
            }
            cat.require_morphism(g)?;
            let pb = pullback(p, g);
            let base = &pb.to_right;
            if !cat.contains(&pb.object) {
                Err(format!("pullback {} left E", pb.object))
            } else if axiom == Axiom::R2 {
                verdict(cat.is_deflation(base)?, "pulled back deflation is not a deflation").and_then(|_| {
                    // the kernel is preserved: ker(base) ≅ ker(p)
                    let kb = kernel(base).object;
                    verdict(kb.is_isomorphic(&kernel(p).object), "pullback changed the kernel")
                })
            } else {
                verdict(is_e_cokernel(cat, base)?, "pulled back cokernel is not a cokernel")
            }
        }
        (Axiom::R3 | Axiom::R3Plus, S::Composable { first, second }) => {
            cat.require_morphism(first)?;
            cat.require_morphism(second)?;
            if !cat.is_deflation(&second.compose(first))? {
                return Ok(Check::Vacuous);
            }
            if axiom == Axiom::R3 && !cat.contains(&kernel(second).object) {
                return Ok(Check::Vacuous);
            }
            verdict(cat.is_deflation(second)?, "p is not a deflation although p∘i is")
        }
        (Axiom::DR1, S::Morphism(f)) => {
            let fac = cat.cokernel_mono_factorization(f)?;
            verdict(fac.mono.compose(&fac.deflation).equals(f), "factorization does not recompose")
                .and(verdict(is_mono(&fac.mono), "second factor is not mono"))
                .and(verdict(is_e_cokernel(cat, &fac.deflation)?, "first factor is not a cokernel"))
        }
        (Axiom::AI, S::Cospan { p, g }) => {
            if !(cat.is_inflation(p)? && cat.is_inflation(g)?) {
                return Ok(Check::Vacuous);
            }
            match cat.admissible_intersection(p, g) {
                Ok(pb) => verdict(
                    p.compose(&pb.to_left).equals(&g.compose(&pb.to_right)),
                    "intersection square does not commute",
                ),
                Err(Error::Invariant(msg)) => Err(msg),
                Err(e) => return Err(e),
            }
        }
        (Axiom::L1, S::Composable { first, second }) => {
            if !(cat.is_inflation(first)? && cat.is_inflation(second)?) {
                return Ok(Check::Vacuous);
            }
            let comp = second.compose(first);
            if cat.is_inflation(&comp)? {
                Ok(())
            } else {
                Err(format!(
                    "composite inflation has cokernel {} outside E",
                    crate::abcat::cokernel(&comp).object
                ))
            }
        }
        (Axiom::KernelCokernel, S::Morphism(f)) => {
            cat.require_morphism(f)?;
            let c = cat.e_cokernel(f)?;
            let k = kernel(&c.projection);
            // (k, c) is a kernel-cokernel pair of E; it should be a conflation
            if !cat.is_conflation(&k.inclusion, &c.projection) {
                return Ok(Check::Finding(json!({
                    "note": "kernel-cokernel pair of E that is not ambient exact",
                    "morphism": f.to_json(),
                })));
            }
            let back = cat.e_cokernel(&k.inclusion)?;
            verdict(back.object.is_isomorphic(&c.object), "cokernel is not the cokernel of its kernel")
        }
        _ => return Err(Error::Shape(format!("sample shape does not fit axiom {axiom}"))),
    };
    Ok(match res {
        Ok(()) => Check::Holds,
        Err(reason) => Check::Fails(reason),
    })
}

/// Checks `axiom` on each sample, in order.
pub fn check_axiom<R: Ring>(
    cat: &RegularCategory<R>,
    axiom: Axiom,
    samples: &[AxiomSample<R>],
    exec: Execution,
) -> Result<Report> {
    let outcomes = exec.map(samples.len(), |i| outcome(cat, axiom, &samples[i]));
    let outcomes: Result<Vec<Outcome>> = outcomes.into_iter().collect();
    Ok(Report::from_outcomes(format!("axiom:{axiom}"), outcomes?, json!({}), None))
}

fn outcome<R: Ring>(cat: &RegularCategory<R>, axiom: Axiom, sample: &AxiomSample<R>) -> Result<Outcome> {
    Ok(match check_one(cat, axiom, sample)? {
        Check::Holds => Outcome::Pass,
        Check::Vacuous => Outcome::Vacuous,
        Check::Finding(v) => Outcome::Finding(v),
        Check::Fails(reason) => {
            let ms = sample.morphisms();
            let names: Vec<(String, Value)> =
                ms.iter().enumerate().map(|(i, m)| (format!("m{i}"), m.to_json())).collect();
            let task = json!({
                "op": "check-axiom-instance",
                "axiom": axiom.name(),
                "morphisms": names.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
            });
            Outcome::Fail(certificate(&reason, &cat.describe(), &names, task))
        }
    })
}

/// Samples and checks `axiom` with `bounds.samples` instances.
pub fn run_axiom<R: Ring>(
    cat: &RegularCategory<R>,
    axiom: Axiom,
    bounds: Bounds,
    seed: u64,
    exec: Execution,
) -> Result<Report> {
    let outcomes = exec.map(bounds.samples, |i| {
        let mut s = Sampler::new(cat, bounds, seed ^ axiom_salt(axiom), i as u64);
        let sample = sample_axiom(axiom, &mut s);
        outcome(cat, axiom, &sample)
    });
    let outcomes: Result<Vec<Outcome>> = outcomes.into_iter().collect();
    Ok(Report::from_outcomes(
        format!("axiom:{axiom}:{}", cat.predicate()),
        outcomes?,
        bounds.to_json(),
        Some(seed),
    ))
}

fn axiom_salt(axiom: Axiom) -> u64 {
    (Axiom::ALL.iter().position(|a| *a == axiom).expect("listed") as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Every object of `E` with at most `rank` cyclic summands and invariant
/// factors at most `max_factor`.
pub fn enumerate_members<R: Ring>(
    cat: &RegularCategory<R>,
    rank: usize,
    max_factor: i64,
) -> Vec<PresentedObject<R>> {
    let mut out = Vec::new();
    let mut chains: Vec<Vec<i64>> = vec![vec![]];
    let mut frontier = chains.clone();
    for _ in 0..rank {
        let mut next = Vec::new();
        for c in &frontier {
            let start = *c.last().unwrap_or(&1);
            let mut d = start.max(2);
            while d <= max_factor {
                if d % start == 0 {
                    let mut e = c.clone();
                    e.push(d);
                    next.push(e);
                }
                d += 1;
            }
        }
        chains.extend(next.iter().cloned());
        frontier = next;
    }
    for torsion in chains {
        for free in 0..=rank - torsion.len() {
            let t: Vec<R> = torsion.iter().map(|&d| R::from_i64(d)).collect();
            let x = match cat.ambient() {
                super::Ambient::VecFp(_) => {
                    if !torsion.is_empty() {
                        continue;
                    }
                    cat.free(free)
                }
                _ => PresentedObject::from_invariants(free, &t),
            };
            if cat.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// Enumerates subobjects generated by one or two elements of every member
/// object up to the bound, and reports those that leave `E`.
pub fn check_subobject_closed<R: Ring>(
    cat: &RegularCategory<R>,
    rank: usize,
    max_factor: i64,
    exec: Execution,
) -> Report {
    let members = enumerate_members(cat, rank, max_factor);
    let mut jobs = Vec::new();
    for x in &members {
        let elems = element_box(x, 2);
        for (i, a) in elems.iter().enumerate() {
            jobs.push((x.clone(), vec![a.clone()]));
            if elems.len() <= 40 {
                for b in &elems[i + 1..] {
                    jobs.push((x.clone(), vec![a.clone(), b.clone()]));
                }
            }
        }
    }
    let outcomes = exec.map(jobs.len(), |j| {
        let (x, gens) = &jobs[j];
        let span = PresentedMorphism::new(
            PresentedObject::free(gens.len()),
            x.clone(),
            Matrix::from_columns(x.generators(), gens),
        )
        .expect("maps out of free objects are well defined");
        let sub = image(&span);
        if cat.contains(&sub.object) {
            Outcome::Pass
        } else {
            let reason = format!("{} ⊂ {} leaves {}", sub.object, x, cat.predicate());
            let names = vec![("inclusion".to_string(), sub.mono.to_json())];
            let task = json!({"op": "subobject-closed", "rank": rank, "max_factor": max_factor});
            let mut cert = certificate(&reason, &cat.describe(), &names, task);
            cert["subobject"] = json!(sub.object.to_string());
            cert["object"] = json!(x.to_string());
            Outcome::Fail(cert)
        }
    });
    let mut r = Report::from_outcomes(
        format!("subobject-closed:{}", cat.predicate()),
        outcomes,
        json!({"rank": rank, "max_factor": max_factor}),
        None,
    );
    // keep one certificate per distinct (subobject, object) pair, smallest first
    let mut seen = std::collections::BTreeSet::new();
    r.failures.retain(|c| seen.insert((c["subobject"].to_string(), c["object"].to_string())));
    r
}

/// Elements of a diagonal presentation with torsion coordinates in `0..d`
/// and free coordinates in `0..=free_range`, excluding zero.
fn element_box<R: Ring>(x: &PresentedObject<R>, free_range: i64) -> Vec<Vec<R>> {
    use num_traits::ToPrimitive;
    let rels = x.relations();
    let ranges: Vec<i64> = (0..x.generators())
        .map(|i| {
            let d = if i < rels.cols() { rels[(i, i)].size().to_i64().unwrap_or(0) } else { 0 };
            if d == 0 {
                free_range + 1
            } else {
                d.min(64)
            }
        })
        .collect();
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for &r in &ranges {
        out = out.into_iter().flat_map(|v| (0..r).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out.into_iter()
        .filter(|v| v.iter().any(|&c| c != 0))
        .map(|v| v.into_iter().map(R::from_i64).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::{int, Z};
    use crate::regular::{Ambient, Predicate};

    fn cat(p: &str) -> RegularCategory<Z> {
        RegularCategory::new(Ambient::FgAb, Predicate::parse(p).unwrap()).unwrap()
    }

    fn map(s: &PresentedObject<Z>, t: &PresentedObject<Z>, m: &[&[i64]]) -> PresentedMorphism<Z> {
        PresentedMorphism::new(s.clone(), t.clone(), Matrix::from_i64(m)).unwrap()
    }

    #[test]
    fn r2_example() {
        let lat = cat("torsion-free");
        let z = PresentedObject::<Z>::free(1);
        let p = map(&PresentedObject::free(2), &z, &[&[1, 0]]);
        let g = map(&z, &z, &[&[2]]);
        let r = check_axiom(&lat, Axiom::R2, &[AxiomSample::Cospan { p, g }], Execution::Sequential).unwrap();
        assert_eq!((r.passes, r.samples), (1, 1));
    }

    #[test]
    fn r0_everywhere() {
        for p in ["all", "torsion-free", "torsion-exponent:2"] {
            let x = PresentedObject::<Z>::from_invariants(1, &[]);
            let r = check_axiom(&cat(p), Axiom::R0, &[AxiomSample::Object(x)], Execution::Sequential).unwrap();
            assert!(r.passed());
        }
    }

    #[test]
    fn l1_fails_for_exponent_two() {
        let e2 = cat("torsion-exponent:2");
        let z = PresentedObject::<Z>::free(1);
        let two = map(&z, &z, &[&[2]]);
        let r = check_axiom(
            &e2,
            Axiom::L1,
            &[AxiomSample::Composable { first: two.clone(), second: two }],
            Execution::Sequential,
        )
        .unwrap();
        assert_eq!(r.failures.len(), 1);
        assert!(r.failures[0]["reason"].as_str().unwrap().contains("Z/4"));
    }

    #[test]
    fn subobject_closure() {
        assert!(check_subobject_closed(&cat("torsion-free"), 2, 6, Execution::Parallel).passed());
        assert!(check_subobject_closed(&cat("torsion-exponent:2"), 2, 8, Execution::Parallel).passed());
        let r = check_subobject_closed(&cat("free-or-Z4"), 2, 4, Execution::Parallel);
        assert!(!r.passed());
        assert!(r.failures.iter().any(|c| c["subobject"] == "Z/2" && c["object"] == "Z/4"));
    }

    #[test]
    fn sampled_axioms_hold() {
        let b = Bounds::default().with_samples(20);
        for p in ["all", "torsion-free", "torsion-exponent:2"] {
            let c = cat(p);
            for a in Axiom::ALL {
                let r = run_axiom(&c, a, b, 5, Execution::Parallel).unwrap();
                if a == Axiom::L1 && p == "torsion-exponent:2" {
                    continue;
                }
                assert!(r.passed(), "{}", r.summary());
            }
        }
    }

    #[test]
    fn kernel_matches_example() {
        let z = PresentedObject::<Z>::free(1);
        assert!(kernel(&map(&z, &PresentedObject::cyclic(int(2)), &[&[1]])).object.is_isomorphic(&z));
    }
}
