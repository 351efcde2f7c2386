use serde_json::json;

use super::model::sampled;
use crate::complexes::{check_truncation_triangle, cone, is_acyclic_at, verify_two_descriptions};
use crate::error::Result;
use crate::exec::Execution;
use crate::intlin::Ring;
use crate::regular::RegularCategory;
use crate::report::{Outcome, Report};
use crate::sample::Bounds;

/// Longest random complex in the coherence corpus.
pub const MAX_COMPLEX_LENGTH: usize = 4;

/// Heart cohomology of random complexes: both representatives agree in
/// every degree, and every truncation triangle closes up.
pub fn verify_cohomology_coherence<R: Ring>(
    cat: &RegularCategory<R>,
    bounds: Bounds,
    seed: u64,
    exec: Execution,
) -> Result<Vec<Report>> {
    let desc = cat.describe();
    let two = sampled(format!("cohomology:two-descriptions:{}", cat.predicate()), cat, bounds, seed, 301, exec, |s| {
        let c = s.complex(MAX_COMPLEX_LENGTH);
        for n in c.start() - 1..=c.end() + 1 {
            if !verify_two_descriptions(cat, &c, n)? {
                return Ok(Outcome::Fail(json!({
                    "reason": "heart cohomology representatives disagree",
                    "category": desc, "degree": n, "complex": c.to_json(),
                })));
            }
        }
        Ok(Outcome::Pass)
    })?;
    // the same corpus: identical salt and indices
    let triangle = sampled(format!("cohomology:truncation-triangle:{}", cat.predicate()), cat, bounds, seed, 301, exec, |s| {
        let c = s.complex(MAX_COMPLEX_LENGTH);
        for n in c.start() - 1..=c.end() {
            if !check_truncation_triangle(cat, &c, n)? {
                return Ok(Outcome::Fail(json!({
                    "reason": "cone of the truncation is not quasi-isomorphic to the upper truncation",
                    "category": desc, "degree": n, "complex": c.to_json(),
                })));
            }
        }
        Ok(Outcome::Pass)
    })?;
    Ok(vec![two, triangle])
}

/// For `f: X → Y` with `X` acyclic in degree `n` and `Y` in degrees
/// `n − 1` and `n`, the cone is acyclic in degree `n − 1`. Samples whose
/// complexes miss the hypotheses count as vacuous.
pub fn verify_cone_bookkeeping<R: Ring>(
    cat: &RegularCategory<R>,
    bounds: Bounds,
    seed: u64,
    exec: Execution,
) -> Result<Report> {
    let desc = cat.describe();
    sampled(format!("cohomology:cone-bookkeeping:{}", cat.predicate()), cat, bounds, seed, 302, exec, |s| {
        let x = if s.chance(0.5) { s.acyclic_complex() } else { s.complex(3) };
        let y = if s.chance(0.8) { s.acyclic_complex() } else { s.complex(3) };
        let f = s.chain_map(&x, &y);
        let lo = x.start().min(y.start());
        let hi = x.end().max(y.end()) + 1;
        let n = lo + s.below((hi - lo + 1) as usize) as i64;
        if !(is_acyclic_at(cat, &x, n)? && is_acyclic_at(cat, &y, n - 1)? && is_acyclic_at(cat, &y, n)?) {
            return Ok(Outcome::Vacuous);
        }
        Ok(if is_acyclic_at(cat, &cone(&f).complex, n - 1)? {
            Outcome::Pass
        } else {
            Outcome::Fail(json!({
                "reason": "cone is not acyclic in degree n - 1",
                "category": desc, "degree": n, "map": f.to_json(),
            }))
        })
    })
}
