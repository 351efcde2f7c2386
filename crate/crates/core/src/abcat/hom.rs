//! Hom groups between presented modules, as presented modules themselves.

use super::limits::reduce;
use super::morphism::PresentedMorphism;
use super::object::PresentedObject;
use crate::intlin::{image_basis, kernel_basis, snf, solve_with, Matrix, Ring, SmithDecomposition};

/// `Hom(source, target)` presented on generators, with coordinate maps in
/// both directions.
#[derive(Clone, Debug)]
pub struct HomGroup<R> {
    source: PresentedObject<R>,
    target: PresentedObject<R>,
    group: PresentedObject<R>,
    /// Vectorized generator matrices spanning the lattice of well-defined maps.
    lattice: Matrix<R>,
    lattice_smith: SmithDecomposition<R>,
    to_group: Matrix<R>,
    from_group: Matrix<R>,
}

impl<R: Ring> HomGroup<R> {
    pub fn new(source: &PresentedObject<R>, target: &PresentedObject<R>) -> Self {
        let (gs, gt) = (source.generators(), target.generators());
        let ks = source.relations().cols();
        // F·Rs = Rt·W, column-major: (Rsᵀ ⊗ I)vec F = (I ⊗ Rt)vec W
        let lhs = source.relations().transpose().kron(&Matrix::identity(gt));
        let rhs = Matrix::<R>::identity(ks).kron(target.relations());
        let sys = Matrix::hstack(&[&lhs, &rhs.neg()]);
        let lattice = image_basis(&kernel_basis(&sys).row_range(0, gt * gs));
        let lattice_smith = snf(&lattice);
        // maps of the form Rt·Z vanish
        let null = Matrix::<R>::identity(gs).kron(target.relations());
        let null = image_basis(&null);
        let coords: Vec<Vec<R>> = (0..null.cols())
            .map(|j| solve_with(&lattice_smith, &null.column(j)).expect("null maps are well defined"))
            .collect();
        let raw = PresentedObject::new(lattice.cols(), Matrix::from_columns(lattice.cols(), &coords))
            .expect("hom presentation");
        let red = reduce(&raw);
        HomGroup {
            source: source.clone(),
            target: target.clone(),
            group: red.object,
            lattice,
            lattice_smith,
            to_group: red.to_reduced.matrix().clone(),
            from_group: red.from_reduced.matrix().clone(),
        }
    }

    pub fn source(&self) -> &PresentedObject<R> {
        &self.source
    }

    pub fn target(&self) -> &PresentedObject<R> {
        &self.target
    }

    /// The hom group as an abstract presented module.
    pub fn group(&self) -> &PresentedObject<R> {
        &self.group
    }

    /// Coordinates of `f` on the generators of [`HomGroup::group`].
    pub fn coordinates(&self, f: &PresentedMorphism<R>) -> Vec<R> {
        assert!(f.source() == &self.source && f.target() == &self.target, "morphism outside this hom group");
        let c = solve_with(&self.lattice_smith, &f.matrix().vectorize()).expect("well-defined map lies in the lattice");
        self.to_group.mul_vec(&c)
    }

    /// The morphism with the given coordinates.
    pub fn morphism(&self, coords: &[R]) -> PresentedMorphism<R> {
        let c = self.from_group.mul_vec(coords);
        let v = self.lattice.mul_vec(&c);
        let m = Matrix::unvectorize(self.target.generators(), self.source.generators(), &v);
        PresentedMorphism::new(self.source.clone(), self.target.clone(), m).expect("lattice maps are well defined")
    }

    pub fn generators(&self) -> Vec<PresentedMorphism<R>> {
        (0..self.group.generators()).map(|i| self.morphism(&self.group.unit_vector(i))).collect()
    }

    /// The homomorphism of hom groups induced by an additive operation `op`.
    pub fn induced(
        &self,
        other: &HomGroup<R>,
        op: impl Fn(&PresentedMorphism<R>) -> PresentedMorphism<R>,
    ) -> PresentedMorphism<R> {
        let cols: Vec<Vec<R>> = self.generators().iter().map(|g| other.coordinates(&op(g))).collect();
        let m = Matrix::from_columns(other.group.generators(), &cols);
        PresentedMorphism::new(self.group.clone(), other.group.clone(), m).expect("additive operation")
    }
}

/// A direct sum of hom groups, with coordinates split per summand.
#[derive(Clone, Debug)]
pub struct HomFamily<R> {
    groups: Vec<HomGroup<R>>,
    offsets: Vec<usize>,
    total: PresentedObject<R>,
}

impl<R: Ring> HomFamily<R> {
    pub fn new(groups: Vec<HomGroup<R>>) -> Self {
        let objs: Vec<&PresentedObject<R>> = groups.iter().map(|g| g.group()).collect();
        let total = super::limits::biproduct(&objs).object;
        let mut offsets = Vec::with_capacity(groups.len());
        let mut acc = 0;
        for g in &groups {
            offsets.push(acc);
            acc += g.group().generators();
        }
        HomFamily { groups, offsets, total }
    }

    /// `Hom(s, t)` for each pair.
    pub fn of(pairs: &[(&PresentedObject<R>, &PresentedObject<R>)]) -> Self {
        Self::new(pairs.iter().map(|(s, t)| HomGroup::new(s, t)).collect())
    }

    pub fn groups(&self) -> &[HomGroup<R>] {
        &self.groups
    }

    /// The direct sum of the hom groups.
    pub fn total(&self) -> &PresentedObject<R> {
        &self.total
    }

    pub fn split(&self, v: &[R]) -> Vec<Vec<R>> {
        self.groups
            .iter()
            .zip(&self.offsets)
            .map(|(g, &o)| v[o..o + g.group().generators()].to_vec())
            .collect()
    }

    pub fn coordinates(&self, maps: &[PresentedMorphism<R>]) -> Vec<R> {
        assert_eq!(maps.len(), self.groups.len(), "one morphism per summand");
        self.groups.iter().zip(maps).flat_map(|(g, m)| g.coordinates(m)).collect()
    }

    pub fn morphisms(&self, v: &[R]) -> Vec<PresentedMorphism<R>> {
        self.groups.iter().zip(self.split(v)).map(|(g, c)| g.morphism(&c)).collect()
    }

    /// The homomorphism `total → to.total` induced by an additive operation
    /// on tuples of morphisms.
    pub fn linear_map(
        &self,
        to: &HomFamily<R>,
        op: impl Fn(&[PresentedMorphism<R>]) -> Vec<PresentedMorphism<R>>,
    ) -> PresentedMorphism<R> {
        let cols: Vec<Vec<R>> = (0..self.total.generators())
            .map(|j| to.coordinates(&op(&self.morphisms(&self.total.unit_vector(j)))))
            .collect();
        let m = Matrix::from_columns(to.total.generators(), &cols);
        PresentedMorphism::new(self.total.clone(), to.total.clone(), m).expect("additive operation")
    }
}

/// Some `h` with `f ∘ h == g`, where `f: A → B` and `g: X → B`. Unlike
/// [`super::factor_through_mono`], `f` need not be a monomorphism: the
/// search runs over `Hom(X, A)`.
pub fn lift_along<R: Ring>(f: &PresentedMorphism<R>, g: &PresentedMorphism<R>) -> Option<PresentedMorphism<R>> {
    assert!(f.target() == g.target(), "lifting along a map with a different codomain");
    let from = HomGroup::new(g.source(), f.source());
    let to = HomGroup::new(g.source(), f.target());
    let post = from.induced(&to, |h| f.compose(h));
    let coords = post.preimage(&to.coordinates(g))?;
    let h = from.morphism(&coords);
    f.compose(&h).equals(g).then_some(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::{int, Z};

    #[test]
    fn lifting_through_non_monos() {
        // Z/4 → Z/2 admits no section, Z → Z/2 lifts identity maps of Z
        let z = PresentedObject::<Z>::free(1);
        let z2 = PresentedObject::<Z>::cyclic(int(2));
        let z4 = PresentedObject::<Z>::cyclic(int(4));
        let q = PresentedMorphism::new(z4.clone(), z2.clone(), Matrix::from_i64(&[&[1]])).unwrap();
        assert!(lift_along(&q, &PresentedMorphism::identity(&z2)).is_none());
        let p = PresentedMorphism::new(z.clone(), z2.clone(), Matrix::from_i64(&[&[1]])).unwrap();
        let h = lift_along(&q, &p).unwrap();
        assert!(q.compose(&h).equals(&p));
    }

    #[test]
    fn hom_examples() {
        let z2 = PresentedObject::<Z>::cyclic(int(2));
        let z = PresentedObject::<Z>::free(1);
        let h = HomGroup::new(&z2, &z2);
        assert!(h.group().is_isomorphic(&z2));
        assert!(h.generators()[0].equals(&PresentedMorphism::identity(&z2)));
        let h = HomGroup::new(&z, &z);
        assert!(h.group().is_isomorphic(&z));
        assert!(HomGroup::new(&z2, &z).group().is_zero());
    }

    #[test]
    fn hom_between_mixed_groups() {
        // Hom(Z/4, Z/6) = Z/2, Hom(Z ⊕ Z/4, Z/8) = Z/8 ⊕ Z/4
        let z4 = PresentedObject::<Z>::cyclic(int(4));
        let z6 = PresentedObject::<Z>::cyclic(int(6));
        assert!(HomGroup::new(&z4, &z6).group().is_isomorphic(&PresentedObject::cyclic(int(2))));
        let x = PresentedObject::<Z>::from_invariants(1, &[int(4)]);
        let y = PresentedObject::<Z>::cyclic(int(8));
        let h = HomGroup::new(&x, &y);
        assert!(h.group().is_isomorphic(&PresentedObject::from_invariants(0, &[int(4), int(8)])));
        for g in h.generators() {
            let c = h.coordinates(&g);
            assert!(h.morphism(&c).equals(&g));
        }
    }
}
