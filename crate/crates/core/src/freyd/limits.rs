use serde_json::{json, Value};

use super::object::{freyd_factor, into_sum, FreydMorphism, FreydObject};
use crate::abcat::{biproduct, column_map, kernel, pullback, row_map, PresentedMorphism, PresentedObject};
use crate::error::{Error, Result};
use crate::intlin::Ring;

#[derive(Clone, Debug)]
pub struct FreydKernel<R> {
    pub object: FreydObject<R>,
    pub inclusion: FreydMorphism<R>,
}

#[derive(Clone, Debug)]
pub struct FreydCokernel<R> {
    pub object: FreydObject<R>,
    pub projection: FreydMorphism<R>,
}

/// The pullback `P` of the target presentation `g` along `map`, with its
/// two projections.
struct Chase<R> {
    object: PresentedObject<R>,
    to_generators: PresentedMorphism<R>,
    to_relations: PresentedMorphism<R>,
    inclusion: PresentedMorphism<R>,
}

fn chase<R: Ring>(eta: &FreydMorphism<R>) -> Chase<R> {
    let pb = pullback(eta.map(), eta.target().presentation());
    let inclusion = column_map(&[&pb.to_left, &pb.to_right]);
    Chase { object: pb.object, to_generators: pb.to_left, to_relations: pb.to_right, inclusion }
}

/// `ker η = coker Y(A ⊕ ker g → P)`, where `P` pulls `g` back along the
/// map of `η` and `A → P` is `a ↦ (f a, witness a)`.
pub fn freyd_kernel<R: Ring>(eta: &FreydMorphism<R>) -> FreydKernel<R> {
    let f = eta.source().presentation();
    let g = eta.target().presentation();
    let p = chase(eta);
    let from_relations = into_sum(&p.inclusion, &[f, eta.witness()]);
    let kg = kernel(g);
    let zero = PresentedMorphism::zero(&kg.object, f.target());
    let from_kernel = into_sum(&p.inclusion, &[&zero, &kg.inclusion]);
    let object = FreydObject::new(row_map(&[&from_relations, &from_kernel]));
    let witness = row_map(&[&PresentedMorphism::identity(f.source()), &PresentedMorphism::zero(&kg.object, f.source())]);
    let inclusion =
        FreydMorphism::new(&object, eta.source(), p.to_generators, witness).expect("kernel square commutes");
    FreydKernel { object, inclusion }
}

/// `coker η = coker Y([g map]: C ⊕ B → D)`.
pub fn freyd_cokernel<R: Ring>(eta: &FreydMorphism<R>) -> FreydCokernel<R> {
    let g = eta.target().presentation();
    let object = FreydObject::new(row_map(&[g, eta.map()]));
    let witness = column_map(&[
        &PresentedMorphism::identity(g.source()),
        &PresentedMorphism::zero(g.source(), eta.source().generators()),
    ]);
    let projection = FreydMorphism::new(eta.target(), &object, PresentedMorphism::identity(g.target()), witness)
        .expect("cokernel square commutes");
    FreydCokernel { object, projection }
}

pub fn freyd_is_mono<R: Ring>(eta: &FreydMorphism<R>) -> bool {
    freyd_kernel(eta).object.is_zero()
}

pub fn freyd_is_epi<R: Ring>(eta: &FreydMorphism<R>) -> bool {
    freyd_cokernel(eta).object.is_zero()
}

pub fn freyd_is_iso<R: Ring>(eta: &FreydMorphism<R>) -> bool {
    freyd_is_mono(eta) && freyd_is_epi(eta)
}

/// Exactness of `F --φ--> G --ψ--> H` at `G`: `φ` maps onto `ker ψ`.
pub fn freyd_is_exact<R: Ring>(phi: &FreydMorphism<R>, psi: &FreydMorphism<R>) -> bool {
    if !psi.compose(phi).is_zero() {
        return false;
    }
    let k = freyd_kernel(psi);
    match freyd_factor(&k.inclusion, phi) {
        Some(theta) => freyd_is_epi(&theta),
        None => false,
    }
}

/// The epi-mono factorization of `η: F → G` and the exact sequence
/// `ker η ↣ F ↠ im η ↣ G ↠ coker η` built from the pullback of the
/// target presentation along the map of `η`.
#[derive(Clone, Debug)]
pub struct DiagramChase<R> {
    pub eta: FreydMorphism<R>,
    /// The pullback `P` of `g` and the map of `η`.
    pub pullback: PresentedObject<R>,
    pub pullback_to_generators: PresentedMorphism<R>,
    pub pullback_to_relations: PresentedMorphism<R>,
    pub kernel: FreydKernel<R>,
    pub image: FreydObject<R>,
    pub coimage_projection: FreydMorphism<R>,
    pub image_inclusion: FreydMorphism<R>,
    pub cokernel: FreydCokernel<R>,
}

impl<R: Ring> DiagramChase<R> {
    /// Whether all five terms fit into an exact sequence factoring `η`.
    pub fn verify(&self) -> bool {
        let k = &self.kernel.inclusion;
        let p = &self.coimage_projection;
        let i = &self.image_inclusion;
        let c = &self.cokernel.projection;
        freyd_is_mono(k)
            && freyd_is_exact(k, p)
            && freyd_is_epi(p)
            && freyd_is_mono(i)
            && freyd_is_exact(i, c)
            && freyd_is_epi(c)
            && i.compose(p).equals(&self.eta)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pullback": self.pullback.to_json(),
            "kernel": self.kernel.object.to_json(),
            "image": self.image.to_json(),
            "cokernel": self.cokernel.object.to_json(),
        })
    }
}

/// Runs the chase on a commuting square `g β = α f`, where `f: A → B`
/// and `g: C → D` present the source and target, `β: A → C`, `α: B → D`.
pub fn famous_diagram_chase<R: Ring>(
    f: &PresentedMorphism<R>,
    g: &PresentedMorphism<R>,
    beta: &PresentedMorphism<R>,
    alpha: &PresentedMorphism<R>,
) -> Result<DiagramChase<R>> {
    let source = FreydObject::new(f.clone());
    let target = FreydObject::new(g.clone());
    let eta = FreydMorphism::new(&source, &target, alpha.clone(), beta.clone())
        .map_err(|e| Error::Precondition(format!("malformed square: {e}")))?;
    Ok(chase_transformation(&eta))
}

pub fn chase_transformation<R: Ring>(eta: &FreydMorphism<R>) -> DiagramChase<R> {
    let f = eta.source().presentation();
    let p = chase(eta);
    let kernel = freyd_kernel(eta);
    // im η is the cokernel of the kernel inclusion: coker Y([f, P → B])
    let image = FreydObject::new(row_map(&[f, &p.to_generators]));
    let sum = biproduct(&[f.source(), &p.object]);
    let coimage_projection =
        FreydMorphism::new(eta.source(), &image, PresentedMorphism::identity(f.target()), sum.injections[0].clone())
            .expect("coimage square commutes");
    let witness = row_map(&[eta.witness(), &p.to_relations]);
    let image_inclusion =
        FreydMorphism::new(&image, eta.target(), eta.map().clone(), witness).expect("image square commutes");
    let cokernel = freyd_cokernel(eta);
    DiagramChase {
        eta: eta.clone(),
        pullback: p.object,
        pullback_to_generators: p.to_generators,
        pullback_to_relations: p.to_relations,
        kernel,
        image,
        coimage_projection,
        image_inclusion,
        cokernel,
    }
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
    fn kernels_and_cokernels() {
        let f = FreydObject::new(mul(2));
        let id = FreydMorphism::identity(&f);
        assert!(freyd_kernel(&id).object.is_zero());
        assert!(freyd_cokernel(&id).object.is_zero());
        let zero = FreydMorphism::zero(&f, &f);
        let c = freyd_cokernel(&zero);
        assert!(freyd_is_iso(&c.projection));
        let k = freyd_kernel(&zero);
        assert!(freyd_is_iso(&k.inclusion));
        // the class of b = 2 is zero on coker Y(2)
        let two = FreydMorphism::from_map(&f, &f, mul(2)).unwrap();
        assert!(two.is_zero());
        assert!(freyd_is_iso(&freyd_kernel(&two).inclusion));
        assert!(freyd_is_iso(&freyd_cokernel(&two).projection));
    }

    #[test]
    fn chase_examples() {
        // identical presentations with identity square: η is an iso
        let chase = famous_diagram_chase(&mul(2), &mul(2), &mul(1), &mul(1)).unwrap();
        assert!(chase.verify());
        assert!(chase.kernel.object.is_zero());
        assert!(chase.cokernel.object.is_zero());

        // coker Y(2) → Y(Z/2) induced by the projection Z ↠ Z/2
        let z = PresentedObject::<Z>::free(1);
        let z2 = PresentedObject::<Z>::cyclic(int(2));
        let zero = PresentedObject::<Z>::zero();
        let g = PresentedMorphism::zero(&zero, &z2);
        let alpha = PresentedMorphism::new(z.clone(), z2.clone(), Matrix::from_i64(&[&[1]])).unwrap();
        let beta = PresentedMorphism::zero(&z, &zero);
        let chase = famous_diagram_chase(&mul(2), &g, &beta, &alpha).unwrap();
        assert!(chase.verify());
        assert!(chase.pullback.is_isomorphic(&z));
        assert!(chase.kernel.object.is_zero());
        assert!(freyd_is_iso(&chase.coimage_projection));
        let c = &chase.cokernel.object;
        assert!(!c.is_zero());
        assert!(crate::abcat::is_epi(c.presentation()));

        let zz = PresentedMorphism::<Z>::zero(&z, &z);
        let chase = famous_diagram_chase(&zz, &zz, &zz, &zz).unwrap();
        assert!(chase.verify());
        assert!(chase.image.is_zero());
    }

    #[test]
    fn malformed_square_is_rejected() {
        assert!(famous_diagram_chase(&mul(2), &mul(3), &mul(1), &mul(1)).is_err());
    }
}
