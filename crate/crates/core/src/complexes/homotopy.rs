use super::complex::{BoundedComplex, ChainMap};
use crate::abcat::{cokernel, factor_through_mono, kernel, HomFamily, HomGroup, PresentedMorphism, PresentedObject};
use crate::intlin::Ring;

/// `Hom_K(C, D)`: chain maps modulo null-homotopic ones.
#[derive(Clone, Debug)]
pub struct HomotopyClasses<R> {
    source: BoundedComplex<R>,
    target: BoundedComplex<R>,
    lo: i64,
    /// `Hom(C^k, D^k)` for each degree.
    degree0: HomFamily<R>,
    group: PresentedObject<R>,
    /// `ker Φ ↪ ⊕ Hom(C^k, D^k)`.
    cycles: PresentedMorphism<R>,
    /// `ker Φ ↠ group`.
    quotient: PresentedMorphism<R>,
}

impl<R: Ring> HomotopyClasses<R> {
    pub fn new(c: &BoundedComplex<R>, d: &BoundedComplex<R>) -> Self {
        let lo = c.start().min(d.start()) - 1;
        let hi = c.end().max(d.end()) + 1;
        let degrees: Vec<i64> = (lo..=hi).collect();
        let h0 = HomFamily::new(degrees.iter().map(|&k| HomGroup::new(&c.object(k), &d.object(k))).collect());
        let h1 = HomFamily::new(degrees.iter().map(|&k| HomGroup::new(&c.object(k), &d.object(k + 1))).collect());
        let hm1 = HomFamily::new(degrees.iter().map(|&k| HomGroup::new(&c.object(k), &d.object(k - 1))).collect());
        let idx = |k: i64| (k - lo) as usize;
        let comp = |maps: &[PresentedMorphism<R>], k: i64, s: &PresentedObject<R>, t: &PresentedObject<R>| {
            if k < lo || k > hi {
                PresentedMorphism::zero(s, t)
            } else {
                maps[idx(k)].clone()
            }
        };
        // Φ(f)^k = d_D f^k - f^{k+1} d_C
        let phi = h0.linear_map(&h1, |f| {
            degrees
                .iter()
                .map(|&k| {
                    let next = comp(f, k + 1, &c.object(k + 1), &d.object(k + 1));
                    d.differential(k).compose(&f[idx(k)]).sub(&next.compose(&c.differential(k)))
                })
                .collect()
        });
        // Ψ(h)^k = d_D h^k + h^{k+1} d_C
        let psi = hm1.linear_map(&h0, |h| {
            degrees
                .iter()
                .map(|&k| {
                    let next = comp(h, k + 1, &c.object(k + 1), &d.object(k));
                    d.differential(k - 1).compose(&h[idx(k)]).add(&next.compose(&c.differential(k)))
                })
                .collect()
        });
        let z = kernel(&phi);
        let boundaries = factor_through_mono(&z.inclusion, &psi).expect("null-homotopic maps are chain maps");
        let q = cokernel(&boundaries);
        HomotopyClasses {
            source: c.clone(),
            target: d.clone(),
            lo,
            degree0: h0,
            group: q.object,
            cycles: z.inclusion,
            quotient: q.projection,
        }
    }

    pub fn group(&self) -> &PresentedObject<R> {
        &self.group
    }

    /// Coordinates of the class of `f`.
    pub fn coordinates(&self, f: &ChainMap<R>) -> Vec<R> {
        let comps: Vec<_> = (0..self.degree0.groups().len()).map(|i| f.component(self.lo + i as i64)).collect();
        let v = self.degree0.coordinates(&comps);
        let z = self.cycles.preimage(&v).expect("chain maps are cycles");
        self.quotient.apply(&z)
    }

    /// A chain map representing the class with the given coordinates.
    pub fn representative(&self, coords: &[R]) -> ChainMap<R> {
        let z = self.quotient.preimage(coords).expect("quotient is onto");
        self.chain_map(&z)
    }

    /// Number of generators of the group of all chain maps `C → D`.
    pub fn chain_map_generators(&self) -> usize {
        self.cycles.source().generators()
    }

    /// The chain map with the given coordinates on the generators of the
    /// group of all chain maps.
    pub fn chain_map(&self, z: &[R]) -> ChainMap<R> {
        let maps = self.degree0.morphisms(&self.cycles.apply(z));
        let lo = self.lo;
        ChainMap::new(&self.source, &self.target, |k| {
            let i = k - lo;
            if i >= 0 && (i as usize) < maps.len() {
                maps[i as usize].clone()
            } else {
                PresentedMorphism::zero(&self.source.object(k), &self.target.object(k))
            }
        })
        .expect("cycles are chain maps")
    }

    pub fn generators(&self) -> Vec<ChainMap<R>> {
        (0..self.group.generators()).map(|i| self.representative(&self.group.unit_vector(i))).collect()
    }

    pub fn is_null_homotopic(&self, f: &ChainMap<R>) -> bool {
        self.group.is_zero_element(&self.coordinates(f))
    }
}

/// `Hom_K(C, D)` as a presented group.
pub fn homotopy_classes<R: Ring>(c: &BoundedComplex<R>, d: &BoundedComplex<R>) -> HomotopyClasses<R> {
    HomotopyClasses::new(c, d)
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
    fn homotopy_examples() {
        let z = PresentedObject::<Z>::free(1);
        let stalk = BoundedComplex::stalk(&z, 0);
        let h = homotopy_classes(&stalk, &stalk);
        assert!(h.group().is_isomorphic(&z));

        // (Z --2--> Z) in degrees -1, 0 against Z in degree -1: chain maps
        // are a·(id in degree -1) with 2a... every map is (a) with d∘a = 0
        // forced only on the target side; homotopies t: C^0 → D^{-1} give
        // a ↦ a + 2t, so the classes form Z/2.
        let two = BoundedComplex::new(-1, vec![z.clone(), z.clone()], vec![mul(2)]).unwrap();
        let target = BoundedComplex::stalk(&z, -1);
        let h = homotopy_classes(&two, &target);
        assert!(h.group().is_isomorphic(&PresentedObject::cyclic(int(2))));

        let contractible = BoundedComplex::new(-1, vec![z.clone(), z.clone()], vec![mul(1)]).unwrap();
        let mono = BoundedComplex::new(-1, vec![PresentedObject::zero(), z.clone()], vec![PresentedMorphism::zero(&PresentedObject::zero(), &z)]).unwrap();
        assert!(homotopy_classes(&mono, &contractible).group().is_zero());
    }

    #[test]
    fn identity_of_contractible_is_null() {
        let z = PresentedObject::<Z>::free(1);
        let c = BoundedComplex::new(-1, vec![z.clone(), z.clone()], vec![mul(1)]).unwrap();
        let h = homotopy_classes(&c, &c);
        assert!(h.is_null_homotopic(&ChainMap::identity(&c)));
        let two = BoundedComplex::new(-1, vec![z.clone(), z], vec![mul(2)]).unwrap();
        let h = homotopy_classes(&two, &two);
        assert!(!h.is_null_homotopic(&ChainMap::identity(&two)));
        for g in h.generators() {
            let c = h.coordinates(&g);
            assert!(h.group().elements_equal(&c, &h.coordinates(&h.representative(&c))));
        }
    }
}
