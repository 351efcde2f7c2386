//! Kernels, cokernels, images and (co)limits of presented modules.

use super::morphism::PresentedMorphism;
use super::object::PresentedObject;
use crate::intlin::{image_basis, kernel_basis, snf, solve_in_image, Matrix, Ring};

/// An object together with mutually inverse isomorphisms to its reduced form.
#[derive(Clone, Debug)]
pub struct Reduced<R> {
    pub object: PresentedObject<R>,
    pub to_reduced: PresentedMorphism<R>,
    pub from_reduced: PresentedMorphism<R>,
}

/// Rewrites `obj` in Smith coordinates, dropping generators killed by unit
/// relations. The result is presented by a diagonal of non-unit invariant
/// factors followed by free generators.
pub fn reduce<R: Ring>(obj: &PresentedObject<R>) -> Reduced<R> {
    let s = snf(obj.relations());
    let diag = s.diagonal();
    let keep: Vec<usize> = (0..obj.generators())
        .filter(|&i| i >= diag.len() || !diag[i].is_unit())
        .collect();
    let torsion: Vec<R> = keep.iter().filter(|&&i| i < diag.len()).map(|&i| diag[i].clone()).collect();
    let reduced = PresentedObject::new(keep.len(), Matrix::diagonal(keep.len(), torsion.len(), &torsion))
        .expect("diagonal presentation");
    let to = s.u.select_rows(&keep);
    let from = s.u_inv.select_columns(&keep);
    let to_reduced = PresentedMorphism::new(obj.clone(), reduced.clone(), to).expect("smith change of basis");
    let from_reduced =
        PresentedMorphism::new(reduced.clone(), obj.clone(), from).expect("inverse smith change of basis");
    Reduced { object: reduced, to_reduced, from_reduced }
}

#[derive(Clone, Debug)]
pub struct Kernel<R> {
    pub object: PresentedObject<R>,
    pub inclusion: PresentedMorphism<R>,
}

#[derive(Clone, Debug)]
pub struct Cokernel<R> {
    pub object: PresentedObject<R>,
    pub projection: PresentedMorphism<R>,
}

/// Epi-mono factorization `f = mono ∘ epi` through the image.
#[derive(Clone, Debug)]
pub struct Image<R> {
    pub object: PresentedObject<R>,
    pub epi: PresentedMorphism<R>,
    pub mono: PresentedMorphism<R>,
}

/// Projections of `P = X ×_Z Y` onto the two legs of the cospan.
#[derive(Clone, Debug)]
pub struct Pullback<R> {
    pub object: PresentedObject<R>,
    pub to_left: PresentedMorphism<R>,
    pub to_right: PresentedMorphism<R>,
}

/// Coprojections of `P = X ⊔_Z Y` from the two legs of the span.
#[derive(Clone, Debug)]
pub struct Pushout<R> {
    pub object: PresentedObject<R>,
    pub from_left: PresentedMorphism<R>,
    pub from_right: PresentedMorphism<R>,
}

#[derive(Clone, Debug)]
pub struct Biproduct<R> {
    pub object: PresentedObject<R>,
    pub injections: Vec<PresentedMorphism<R>>,
    pub projections: Vec<PresentedMorphism<R>>,
}

/// Columns of `basis(lattice ∩ first-block)`: solutions of `[a | b](x; y) = 0`
/// projected to the `x` block.
fn projected_kernel<R: Ring>(a: &Matrix<R>, b: &Matrix<R>) -> Matrix<R> {
    let sys = Matrix::hstack(&[a, &b.neg()]);
    let k = kernel_basis(&sys);
    image_basis(&k.row_range(0, a.cols()))
}

pub fn kernel<R: Ring>(f: &PresentedMorphism<R>) -> Kernel<R> {
    let src = f.source();
    // generators: x with f(x) ∈ relations of the target
    let gens = projected_kernel(f.matrix(), f.target().relations());
    // relations: coefficient vectors c with gens·c ∈ relations of the source
    let rels = projected_kernel(&gens, src.relations());
    let raw = PresentedObject::new(gens.cols(), rels).expect("kernel presentation");
    let incl = PresentedMorphism::new(raw.clone(), src.clone(), gens).expect("kernel inclusion");
    let red = reduce(&raw);
    Kernel { object: red.object, inclusion: incl.compose(&red.from_reduced) }
}

pub fn cokernel<R: Ring>(f: &PresentedMorphism<R>) -> Cokernel<R> {
    let tgt = f.target();
    let rels = Matrix::hstack(&[tgt.relations(), f.matrix()]);
    let raw = PresentedObject::new(tgt.generators(), rels).expect("cokernel presentation");
    let proj = PresentedMorphism::new(tgt.clone(), raw.clone(), Matrix::identity(tgt.generators()))
        .expect("cokernel projection");
    let red = reduce(&raw);
    Cokernel { object: red.object, projection: red.to_reduced.compose(&proj) }
}

pub fn image<R: Ring>(f: &PresentedMorphism<R>) -> Image<R> {
    let k = kernel(f);
    let c = cokernel(&k.inclusion);
    let mono = factor_through_epi(&c.projection, f).expect("f vanishes on its kernel");
    Image { object: c.object, epi: c.projection, mono }
}

pub fn is_epi<R: Ring>(f: &PresentedMorphism<R>) -> bool {
    let rels = Matrix::hstack(&[f.target().relations(), f.matrix()]);
    PresentedObject::new(f.target().generators(), rels).expect("cokernel presentation").is_zero()
}

pub fn is_mono<R: Ring>(f: &PresentedMorphism<R>) -> bool {
    kernel(f).object.is_zero()
}

pub fn is_iso<R: Ring>(f: &PresentedMorphism<R>) -> bool {
    is_epi(f) && is_mono(f)
}

/// Two-sided inverse of an isomorphism.
pub fn inverse<R: Ring>(f: &PresentedMorphism<R>) -> Option<PresentedMorphism<R>> {
    if !is_iso(f) {
        return None;
    }
    factor_through_epi(f, &PresentedMorphism::identity(f.source()))
}

/// `h` with `m ∘ h == g`, when `g` lands in the image of `m`. Unique when
/// `m` is a monomorphism.
pub fn factor_through_mono<R: Ring>(
    m: &PresentedMorphism<R>,
    g: &PresentedMorphism<R>,
) -> Option<PresentedMorphism<R>> {
    assert!(m.target() == g.target(), "factorization through a map with a different codomain");
    let sys = Matrix::hstack(&[m.matrix(), m.target().relations()]);
    let s = snf(&sys);
    let mut cols = Vec::with_capacity(g.source().generators());
    for j in 0..g.source().generators() {
        let x = crate::intlin::solve_with(&s, &g.matrix().column(j))?;
        cols.push(x[..m.source().generators()].to_vec());
    }
    let h = Matrix::from_columns(m.source().generators(), &cols);
    let h = PresentedMorphism::new(g.source().clone(), m.source().clone(), h).ok()?;
    m.compose(&h).equals(g).then_some(h)
}

/// `h` with `h ∘ p == g`, when `g` vanishes on the kernel of `p` and `p`
/// is an epimorphism. Unique in that case.
pub fn factor_through_epi<R: Ring>(
    p: &PresentedMorphism<R>,
    g: &PresentedMorphism<R>,
) -> Option<PresentedMorphism<R>> {
    assert!(p.source() == g.source(), "factorization through a map with a different domain");
    let sys = Matrix::hstack(&[p.matrix(), p.target().relations()]);
    let s = snf(&sys);
    let q = p.target();
    let mut cols = Vec::with_capacity(q.generators());
    for j in 0..q.generators() {
        let x = crate::intlin::solve_with(&s, &q.unit_vector(j))?;
        cols.push(g.apply(&x[..p.source().generators()]));
    }
    let h = Matrix::from_columns(g.target().generators(), &cols);
    let h = PresentedMorphism::new(q.clone(), g.target().clone(), h).ok()?;
    h.compose(p).equals(g).then_some(h)
}

pub fn biproduct<R: Ring>(objects: &[&PresentedObject<R>]) -> Biproduct<R> {
    let gens: usize = objects.iter().map(|o| o.generators()).sum();
    let rel_blocks: Vec<&Matrix<R>> = objects.iter().map(|o| o.relations()).collect();
    let object = PresentedObject::new(gens, Matrix::block_diag(&rel_blocks)).expect("block presentation");
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let (mut g0, mut k0) = (0, 0);
    for o in objects {
        let (g, k) = (o.generators(), o.relations().cols());
        let ks = object.relations().cols();
        let inj = Matrix::from_fn(gens, g, |i, j| if i == g0 + j { R::one() } else { R::zero() });
        let inj_w = Matrix::from_fn(ks, k, |i, j| if i == k0 + j { R::one() } else { R::zero() });
        injections.push(
            PresentedMorphism::with_witness((*o).clone(), object.clone(), inj, inj_w).expect("injection"),
        );
        let proj = Matrix::from_fn(g, gens, |i, j| if j == g0 + i { R::one() } else { R::zero() });
        let proj_w = Matrix::from_fn(k, ks, |i, j| if j == k0 + i { R::one() } else { R::zero() });
        projections.push(
            PresentedMorphism::with_witness(object.clone(), (*o).clone(), proj, proj_w).expect("projection"),
        );
        g0 += g;
        k0 += k;
    }
    Biproduct { object, injections, projections }
}

/// `(f_1 ... f_n): X_1 ⊕ ... ⊕ X_n → Y`.
pub fn row_map<R: Ring>(maps: &[&PresentedMorphism<R>]) -> PresentedMorphism<R> {
    let target = maps[0].target();
    assert!(maps.iter().all(|m| m.target() == target), "row map with mismatched codomains");
    let sources: Vec<&PresentedObject<R>> = maps.iter().map(|m| m.source()).collect();
    let bp = biproduct(&sources);
    let mats: Vec<&Matrix<R>> = maps.iter().map(|m| m.matrix()).collect();
    let wits: Vec<&Matrix<R>> = maps.iter().map(|m| m.witness()).collect();
    PresentedMorphism::with_witness(bp.object, target.clone(), Matrix::hstack(&mats), Matrix::hstack(&wits))
        .expect("row map")
}

/// `(f_1; ...; f_n): X → Y_1 ⊕ ... ⊕ Y_n`.
pub fn column_map<R: Ring>(maps: &[&PresentedMorphism<R>]) -> PresentedMorphism<R> {
    let source = maps[0].source();
    assert!(maps.iter().all(|m| m.source() == source), "column map with mismatched domains");
    let targets: Vec<&PresentedObject<R>> = maps.iter().map(|m| m.target()).collect();
    let bp = biproduct(&targets);
    let mats: Vec<&Matrix<R>> = maps.iter().map(|m| m.matrix()).collect();
    let wits: Vec<&Matrix<R>> = maps.iter().map(|m| m.witness()).collect();
    PresentedMorphism::with_witness(source.clone(), bp.object, Matrix::vstack(&mats), Matrix::vstack(&wits))
        .expect("column map")
}

/// `f ⊕ g`.
pub fn direct_sum<R: Ring>(maps: &[&PresentedMorphism<R>]) -> PresentedMorphism<R> {
    let sources: Vec<&PresentedObject<R>> = maps.iter().map(|m| m.source()).collect();
    let targets: Vec<&PresentedObject<R>> = maps.iter().map(|m| m.target()).collect();
    let s = biproduct(&sources).object;
    let t = biproduct(&targets).object;
    let mats: Vec<&Matrix<R>> = maps.iter().map(|m| m.matrix()).collect();
    let wits: Vec<&Matrix<R>> = maps.iter().map(|m| m.witness()).collect();
    PresentedMorphism::with_witness(s, t, Matrix::block_diag(&mats), Matrix::block_diag(&wits))
        .expect("direct sum")
}

/// Pullback of the cospan `X --f--> Z <--g-- Y`, realized as the kernel of
/// `(f, -g): X ⊕ Y → Z`.
pub fn pullback<R: Ring>(f: &PresentedMorphism<R>, g: &PresentedMorphism<R>) -> Pullback<R> {
    assert!(f.target() == g.target(), "pullback of maps with different codomains");
    let diff = row_map(&[f, &g.neg()]);
    let k = kernel(&diff);
    let bp = biproduct(&[f.source(), g.source()]);
    Pullback {
        object: k.object,
        to_left: bp.projections[0].compose(&k.inclusion),
        to_right: bp.projections[1].compose(&k.inclusion),
    }
}

/// Pushout of the span `X <--f-- Z --g--> Y`, realized as the cokernel of
/// `(f; -g): Z → X ⊕ Y`.
pub fn pushout<R: Ring>(f: &PresentedMorphism<R>, g: &PresentedMorphism<R>) -> Pushout<R> {
    assert!(f.source() == g.source(), "pushout of maps with different domains");
    let diff = column_map(&[f, &g.neg()]);
    let c = cokernel(&diff);
    let bp = biproduct(&[f.target(), g.target()]);
    Pushout {
        object: c.object,
        from_left: c.projection.compose(&bp.injections[0]),
        from_right: c.projection.compose(&bp.injections[1]),
    }
}

/// Whether `X --f--> Y --g--> Z` is exact at `Y`.
pub fn is_exact_at<R: Ring>(f: &PresentedMorphism<R>, g: &PresentedMorphism<R>) -> bool {
    if !g.compose(f).is_zero() {
        return false;
    }
    let k = kernel(g);
    k.inclusion.matrix().columns().iter().all(|v| in_image(f, v))
}

/// Whether `0 → X --i--> Y --p--> Z → 0` is exact.
pub fn is_short_exact<R: Ring>(i: &PresentedMorphism<R>, p: &PresentedMorphism<R>) -> bool {
    is_mono(i) && is_epi(p) && is_exact_at(i, p)
}

/// Whether `v` lies in the column lattice of `m` (over the target relations).
pub fn in_image<R: Ring>(f: &PresentedMorphism<R>, y: &[R]) -> bool {
    let sys = Matrix::hstack(&[f.matrix(), f.target().relations()]);
    solve_in_image(&sys, y).ok().flatten().is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::{int, Z};

    fn obj(g: usize, rel: &[&[i64]]) -> PresentedObject<Z> {
        if rel.is_empty() {
            PresentedObject::free(g)
        } else {
            PresentedObject::new(g, Matrix::from_i64(rel)).unwrap()
        }
    }

    fn map(s: &PresentedObject<Z>, t: &PresentedObject<Z>, m: &[&[i64]]) -> PresentedMorphism<Z> {
        let m = if m.is_empty() { Matrix::zeros(t.generators(), s.generators()) } else { Matrix::from_i64(m) };
        PresentedMorphism::new(s.clone(), t.clone(), m).unwrap()
    }

    #[test]
    fn kernel_examples() {
        let z = obj(1, &[]);
        let k = kernel(&map(&z, &z, &[&[0]]));
        assert!(k.object.is_isomorphic(&z));
        assert!(is_iso(&k.inclusion));
        assert!(kernel(&map(&z, &z, &[&[2]])).object.is_zero());
        let z2 = obj(2, &[]);
        let f = map(&z2, &z, &[&[1, 1]]);
        let k = kernel(&f);
        assert!(k.object.is_isomorphic(&z));
        let c = k.inclusion.matrix().column(0);
        assert!(c == vec![int(1), int(-1)] || c == vec![int(-1), int(1)]);
        assert!(f.compose(&k.inclusion).is_zero());
        assert!(is_mono(&k.inclusion));
    }

    #[test]
    fn cokernel_and_image_examples() {
        let z = obj(1, &[]);
        let c = cokernel(&map(&z, &z, &[&[2]]));
        assert!(c.object.is_isomorphic(&PresentedObject::cyclic(int(2))));
        let z4 = PresentedObject::cyclic(int(4));
        let f = map(&z, &z4, &[&[2]]);
        let im = image(&f);
        assert!(im.object.is_isomorphic(&PresentedObject::cyclic(int(2))));
        assert!(is_epi(&im.epi));
        assert!(is_mono(&im.mono));
        assert!(im.mono.compose(&im.epi).equals(&f));
    }

    #[test]
    fn pullback_example() {
        let z = obj(1, &[]);
        let z2 = obj(2, &[]);
        let f = map(&z2, &z, &[&[1, 0]]);
        let g = map(&z, &z, &[&[2]]);
        let pb = pullback(&f, &g);
        assert!(pb.object.is_isomorphic(&z2));
        assert!(f.compose(&pb.to_left).equals(&g.compose(&pb.to_right)));
    }

    #[test]
    fn pushout_and_intersection() {
        let z = obj(1, &[]);
        let two = map(&z, &z, &[&[2]]);
        let three = map(&z, &z, &[&[3]]);
        let pb = pullback(&two, &three);
        assert!(pb.object.is_isomorphic(&z));
        let through = two.compose(&pb.to_left);
        assert!(through.equals(&map(&z, &z, &[&[6]])) || through.equals(&map(&z, &z, &[&[-6]])));
        let po = pushout(&two, &three);
        assert!(po.object.is_isomorphic(&z));
        assert!(po.from_left.compose(&two).equals(&po.from_right.compose(&three)));
    }

    #[test]
    fn factorizations_and_inverse() {
        let x = obj(2, &[&[2], &[0]]);
        let red = reduce(&x);
        assert_eq!(red.object.generators(), 2);
        assert!(red.from_reduced.compose(&red.to_reduced).equals(&PresentedMorphism::identity(&x)));
        let inv = inverse(&red.to_reduced).unwrap();
        assert!(inv.equals(&red.from_reduced));
        let z = obj(1, &[]);
        assert!(inverse(&map(&z, &z, &[&[2]])).is_none());
    }

    #[test]
    fn short_exact_detection() {
        let z = obj(1, &[]);
        let z2 = PresentedObject::cyclic(int(2));
        let i = map(&z, &z, &[&[2]]);
        let p = map(&z, &z2, &[&[1]]);
        assert!(is_short_exact(&i, &p));
        let i4 = map(&z, &z, &[&[4]]);
        assert!(!is_short_exact(&i4, &p));
    }
}
