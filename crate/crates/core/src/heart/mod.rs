//! The left heart in its ambient model, and the verifiers relating it to
//! complexes, Freyd categories and localized mono objects.

mod coherence;
mod model;
mod percolate;
mod suites;

pub use coherence::{verify_cohomology_coherence, verify_cone_bookkeeping, MAX_COMPLEX_LENGTH};
pub use model::{verify_embedding_properties, verify_heart_equivalence, verify_hull_sandwich, HeartModel};
pub use percolate::{
    check_effaceable_percolating, check_percolating, check_percolating_instance, weak_isomorphisms, Subclass,
};
pub use suites::{
    verify_effaceable_characterization, verify_localization_agreement, verify_mon_vs_hmon, verify_torsion_pair,
};
// both descriptions of heart cohomology live with the complexes
pub use crate::complexes::verify_two_descriptions;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abcat::{image, kernel, PresentedMorphism, PresentedObject};
    use crate::exec::Execution;
    use crate::intlin::{int, Matrix, Z};
    use crate::regular::{Ambient, Predicate, RegularCategory};
    use crate::report::Outcome;
    use crate::sample::Bounds;

    fn cat(p: &str) -> RegularCategory<Z> {
        RegularCategory::new(Ambient::FgAb, Predicate::parse(p).unwrap()).unwrap()
    }

    fn map(s: &PresentedObject<Z>, t: &PresentedObject<Z>, m: &[&[i64]]) -> PresentedMorphism<Z> {
        PresentedMorphism::new(s.clone(), t.clone(), Matrix::from_i64(m)).unwrap()
    }

    #[test]
    fn cyclic_groups_are_shadows() {
        let z = PresentedObject::<Z>::free(1);
        let lat = HeartModel::new(cat("torsion-free")).unwrap();
        let r = lat.resolution(&PresentedObject::cyclic(int(6))).unwrap();
        assert!(r.lower().is_isomorphic(&z) && r.upper().is_isomorphic(&z));
        assert!(r.shadow().object.is_isomorphic(&PresentedObject::cyclic(int(6))));

        let e2 = HeartModel::new(cat("torsion-exponent:2")).unwrap();
        let z4 = PresentedObject::cyclic(int(4));
        assert!(!e2.regular().contains(&z4));
        let r = e2.resolution(&z4).unwrap();
        assert!(e2.regular().contains(r.lower()) && e2.regular().contains(r.upper()));
        assert!(r.shadow().object.is_isomorphic(&z4));
    }

    #[test]
    fn small_heart_suites_pass() {
        let b = Bounds::default().with_samples(40);
        for p in ["torsion-free", "torsion-exponent:2", "all"] {
            let model = HeartModel::new(cat(p)).unwrap();
            for r in verify_heart_equivalence(&model, b, 6, 3, Execution::Sequential).unwrap() {
                assert!(r.passed(), "{}", r.summary());
            }
            assert!(verify_embedding_properties(&model, b, 3, Execution::Sequential).unwrap().passed());
            assert!(verify_hull_sandwich(&model, b, 3, Execution::Sequential).unwrap().passed());
        }
        assert!(HeartModel::new(cat("free-or-Z4")).is_err());
    }

    #[test]
    fn embedding_examples() {
        let z = PresentedObject::<Z>::free(1);
        assert!(kernel(&map(&z, &z, &[&[2]])).object.is_zero());
        let lat = cat("torsion-free");
        let f = map(&PresentedObject::free(2), &z, &[&[2, 2]]);
        let fac = lat.deflation_mono_factorization(&f).unwrap();
        assert!(fac.middle().is_isomorphic(&image(&f).object));
        assert!(fac.middle().is_isomorphic(&z));
        for p in ["all", "torsion-free", "torsion-exponent:2"] {
            assert!(cat(p).contains(&image(&map(&z, &z, &[&[3]])).object));
        }
    }

    #[test]
    fn coherence_suites_pass() {
        let b = Bounds::default().with_samples(30);
        for p in ["torsion-free", "torsion-exponent:2"] {
            let c = cat(p);
            for r in verify_cohomology_coherence(&c, b, 5, Execution::Sequential).unwrap() {
                assert!(r.passed(), "{}", r.summary());
            }
            let r = verify_cone_bookkeeping(&c, b, 5, Execution::Sequential).unwrap();
            assert!(r.passed() && r.effective() > 0, "{}", r.summary());
        }
    }

    #[test]
    fn percolating_examples() {
        let all = cat("all");
        let b = Bounds::default().with_samples(60);
        let finite = check_percolating(&all, &Subclass::Finite, b, 1, Execution::Sequential).unwrap();
        assert!(finite.iter().all(|r| r.passed()));
        let free = check_percolating(&all, &Subclass::Free, b, 1, Execution::Sequential).unwrap();
        assert!(!free[0].passed());
        assert!(free[1..].iter().all(|r| r.passed()));

        let z = PresentedObject::<Z>::free(1);
        let z2 = PresentedObject::<Z>::cyclic(int(2));
        let p = map(&z, &z2, &[&[1]]);
        let i = kernel(&p).inclusion;
        match check_percolating_instance(&all, &Subclass::Free, "P1", &[i, p]).unwrap() {
            Outcome::Fail(cert) => {
                assert!(cert["reason"].as_str().unwrap().starts_with("quotient"));
                assert_eq!(cert["scenario"]["tasks"][0]["op"], "percolate-instance");
            }
            other => panic!("expected a failure, got {other:?}"),
        }

        for r in check_effaceable_percolating(&cat("torsion-exponent:2"), b, 1, Execution::Sequential).unwrap() {
            assert!(r.passed() && r.effective() > 0, "{}", r.summary());
        }
    }

    #[test]
    fn small_localization_and_freyd_suites_pass() {
        let b = Bounds::default().with_samples(40);
        for p in ["torsion-free", "torsion-exponent:2"] {
            let c = cat(p);
            for r in verify_torsion_pair(&c, b, 2, Execution::Sequential).unwrap() {
                assert!(r.passed(), "{}", r.summary());
            }
            for r in [
                verify_effaceable_characterization(&c, b, 2, Execution::Sequential).unwrap(),
                verify_localization_agreement(&c, b, 2, Execution::Sequential).unwrap(),
                verify_mon_vs_hmon(&c, b, 2, Execution::Sequential).unwrap(),
            ] {
                assert!(r.passed(), "{}", r.summary());
            }
        }
    }

    #[test]
    fn weak_isomorphism_examples() {
        let all = cat("all");
        let z = PresentedObject::<Z>::free(1);
        let z2 = PresentedObject::<Z>::free(2);
        assert!(weak_isomorphisms(&all, &Subclass::Finite, &map(&z, &z, &[&[2]])).unwrap());
        assert!(weak_isomorphisms(&all, &Subclass::Finite, &map(&z, &z, &[&[-1]])).unwrap());
        assert!(!weak_isomorphisms(&all, &Subclass::Finite, &map(&z2, &z, &[&[1, 0]])).unwrap());
        assert!(weak_isomorphisms(&all, &Subclass::Free, &map(&z, &z, &[&[1]])).is_err());
        // 2: Z → Z is not admissible in Lat
        let lat = cat("torsion-free");
        assert!(weak_isomorphisms(&lat, &Subclass::Finite, &map(&z, &z, &[&[2]])).is_err());
    }
}
