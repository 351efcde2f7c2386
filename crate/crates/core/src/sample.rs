//! Seeded random generation of objects, morphisms and special maps.
//!
//! Every sample is drawn from its own ChaCha8 stream, selected by the
//! sample index, so results are independent of scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::abcat::{biproduct, cokernel, kernel, pullback, row_map, HomGroup, PresentedMorphism, PresentedObject};
use crate::complexes::{homotopy_classes, BoundedComplex, ChainMap};
use crate::freyd::{freyd_hom, FreydMorphism, FreydObject};
use crate::intlin::{Matrix, Ring};
use crate::monloc::{MonMorphism, MonObject};
use crate::regular::{Ambient, Predicate, RegularCategory};

/// Size limits for sampled instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Bounds {
    /// Maximum number of cyclic summands of a sampled object.
    pub rank: usize,
    /// Maximum absolute value of sampled coefficients.
    pub entry: i64,
    /// Number of samples per randomized check.
    pub samples: usize,
    /// Maximum length of inflation chains searched.
    pub chain_depth: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { rank: 3, entry: 3, samples: 500, chain_depth: 8 }
    }
}

impl Bounds {
    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "entry": self.entry,
            "samples": self.samples,
            "chain_depth": self.chain_depth,
        })
    }

    pub fn with_samples(mut self, n: usize) -> Self {
        self.samples = n;
        self
    }
}

/// The generator for sample `index` of a run seeded with `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws objects and morphisms of a regular category.
pub struct Sampler<'a, R> {
    pub cat: &'a RegularCategory<R>,
    pub bounds: Bounds,
    pub rng: ChaCha8Rng,
}

impl<'a, R: Ring> Sampler<'a, R> {
    pub fn new(cat: &'a RegularCategory<R>, bounds: Bounds, seed: u64, index: u64) -> Self {
        Sampler { cat, bounds, rng: stream(seed, index) }
    }

    pub fn coefficient(&mut self) -> R {
        R::from_i64(self.rng.random_range(-self.bounds.entry..=self.bounds.entry))
    }

    pub fn coefficients(&mut self, n: usize) -> Vec<R> {
        (0..n).map(|_| self.coefficient()).collect()
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// A product of elementary matrices, hence invertible over the ring.
    pub fn unimodular(&mut self, n: usize) -> Matrix<R> {
        let mut m = Matrix::identity(n);
        if n < 2 {
            return m;
        }
        for _ in 0..n + 1 {
            let i = self.below(n);
            let mut j = self.below(n - 1);
            if j >= i {
                j += 1;
            }
            let c = R::from_i64(self.rng.random_range(-2..=2));
            let e = Matrix::from_fn(n, n, |a, b| {
                if a == b {
                    R::one()
                } else if a == i && b == j {
                    c.clone()
                } else {
                    R::zero()
                }
            });
            m = e.mul(&m);
        }
        m
    }

    /// Invariant factors of a random object of `E` with at most `rank` summands.
    fn member_invariants(&mut self, rank: usize) -> (usize, Vec<R>) {
        let total = self.rng.random_range(0..=rank);
        if let Ambient::VecFp(_) = self.cat.ambient() {
            return (total, Vec::new());
        }
        if *self.cat.predicate() == Predicate::FreeOrCyclic4 {
            return if self.chance(0.3) { (0, vec![R::from_i64(4)]) } else { (total, Vec::new()) };
        }
        let profile = self.cat.predicate().profile().expect("closed predicate").clone();
        let max_factor = (2 * self.bounds.entry).max(4);
        let mut free = 0;
        let mut torsion = Vec::new();
        for _ in 0..total {
            if self.chance(0.5) {
                free += 1;
            } else {
                let d = R::from_i64(self.rng.random_range(2..=max_factor));
                let d = profile.allowed_part(&d);
                if !d.is_unit() {
                    torsion.push(d);
                }
            }
        }
        torsion.sort_by_key(|a| a.size());
        (free, torsion)
    }

    /// A random object of `E` on a scrambled presentation.
    pub fn object(&mut self) -> PresentedObject<R> {
        let rank = self.bounds.rank;
        self.object_up_to(rank)
    }

    pub fn object_up_to(&mut self, rank: usize) -> PresentedObject<R> {
        let (free, torsion) = self.member_invariants(rank);
        let base = match self.cat.ambient() {
            Ambient::VecFp(_) => self.cat.free(free),
            _ => PresentedObject::from_invariants(free, &torsion),
        };
        self.scramble(&base)
    }

    /// The same module on generators changed by a random unimodular matrix.
    pub fn scramble(&mut self, x: &PresentedObject<R>) -> PresentedObject<R> {
        let g = x.generators();
        let k = x.relations().cols();
        let u = self.unimodular(g);
        let v = self.unimodular(k);
        PresentedObject::new(g, u.mul(x.relations()).mul(&v)).expect("same row count")
    }

    /// A random morphism `x → y`, drawn uniformly from small coordinates on
    /// a generating set of the hom group.
    pub fn morphism(&mut self, x: &PresentedObject<R>, y: &PresentedObject<R>) -> PresentedMorphism<R> {
        let h = HomGroup::new(x, y);
        let c = self.coefficients(h.group().generators());
        h.morphism(&c)
    }

    pub fn morphism_from(&mut self, x: &PresentedObject<R>) -> PresentedMorphism<R> {
        let y = self.object();
        self.morphism(x, &y)
    }

    pub fn any_morphism(&mut self) -> PresentedMorphism<R> {
        let x = self.object();
        self.morphism_from(&x)
    }

    /// A deflation onto `z`: a generator cover plus a random extra summand.
    pub fn deflation_onto(&mut self, z: &PresentedObject<R>) -> PresentedMorphism<R> {
        let g = z.generators();
        let cover_obj = self.cat.free(g);
        let cover = PresentedMorphism::new(cover_obj.clone(), z.clone(), Matrix::identity(g)).expect("generator cover");
        let extra_rank = self.rng.random_range(0..=self.bounds.rank.saturating_sub(g).min(1));
        let w = self.object_up_to(extra_rank);
        let h = self.morphism(&w, z);
        let p = row_map(&[&cover, &h]);
        // hide the cover behind an automorphism of the source
        let src = p.source().clone();
        let auto = self.automorphism(&src);
        p.compose(&auto)
    }

    pub fn deflation(&mut self) -> PresentedMorphism<R> {
        let z = self.object();
        self.deflation_onto(&z)
    }

    /// A random product of elementary automorphisms of `x`; steps that are
    /// not well defined on `x` are skipped.
    pub fn automorphism(&mut self, x: &PresentedObject<R>) -> PresentedMorphism<R> {
        let g = x.generators();
        let mut m = PresentedMorphism::identity(x);
        for _ in 0..g {
            if g < 2 {
                break;
            }
            let i = self.below(g);
            let mut j = self.below(g - 1);
            if j >= i {
                j += 1;
            }
            let c = R::from_i64(self.rng.random_range(-2..=2));
            let e = Matrix::from_fn(g, g, |a, b| {
                if a == b {
                    R::one()
                } else if a == i && b == j {
                    c.clone()
                } else {
                    R::zero()
                }
            });
            if let Ok(step) = PresentedMorphism::new(x.clone(), x.clone(), e) {
                if crate::abcat::is_iso(&step) {
                    m = step.compose(&m);
                }
            }
        }
        m
    }

    /// The mono part of a random morphism of `E`.
    pub fn mono(&mut self) -> PresentedMorphism<R> {
        loop {
            let f = self.any_morphism();
            let k = crate::abcat::kernel(&f);
            let c = crate::abcat::cokernel(&k.inclusion);
            let im = crate::abcat::factor_through_epi(&c.projection, &f).expect("image factorization");
            if self.cat.contains(im.source()) && self.cat.contains(im.target()) {
                return im;
            }
        }
    }

    /// The kernel of a random deflation.
    pub fn inflation(&mut self) -> PresentedMorphism<R> {
        let p = self.deflation();
        crate::abcat::kernel(&p).inclusion
    }

    /// The kernel of a random morphism out of `y`, an inflation since its
    /// cokernel embeds in an object of `E`.
    pub fn inflation_into(&mut self, y: &PresentedObject<R>) -> PresentedMorphism<R> {
        let f = self.morphism_from(y);
        crate::abcat::kernel(&f).inclusion
    }

    /// A split short exact sequence `x → x ⊕ z → z`.
    pub fn split_pair(&mut self) -> (PresentedMorphism<R>, PresentedMorphism<R>) {
        let x = self.object();
        let z = self.object();
        let bp = biproduct(&[&x, &z]);
        (bp.injections[0].clone(), bp.projections[1].clone())
    }
}

/// Composite structures: complexes, mono objects, squares and Freyd objects.
impl<R: Ring> Sampler<'_, R> {
    /// A complex of at most `max_len` objects of `E`, starting in a degree
    /// between −2 and 0. Each differential kills the previous image by
    /// factoring through its cokernel.
    pub fn complex(&mut self, max_len: usize) -> BoundedComplex<R> {
        let len = self.rng.random_range(1..=max_len.max(1));
        let start = -(self.rng.random_range(0..=2) as i64);
        let rank = self.bounds.rank.min(2);
        let mut objects = vec![self.object_up_to(rank)];
        let mut diffs: Vec<PresentedMorphism<R>> = Vec::new();
        for _ in 1..len {
            let next = self.object_up_to(rank);
            let last = objects.last().expect("nonempty");
            let d = match diffs.last() {
                None => self.morphism(last, &next),
                Some(prev) => {
                    let c = cokernel(prev);
                    let g = self.morphism(&c.object, &next);
                    g.compose(&c.projection)
                }
            };
            diffs.push(d);
            objects.push(next);
        }
        BoundedComplex::new(start, objects, diffs).expect("differentials square to zero")
    }

    /// A conflation `K ↣ Y ↠ Z` as a complex, sometimes spliced with a
    /// split conflation `Z ↣ Z ⊕ W ↠ W`; acyclic in every degree.
    pub fn acyclic_complex(&mut self) -> BoundedComplex<R> {
        let start = -(self.rng.random_range(0..=2) as i64);
        let p = self.deflation();
        let i = kernel(&p).inclusion;
        let mut objects = vec![i.source().clone(), p.source().clone(), p.target().clone()];
        let mut diffs = vec![i, p.clone()];
        if self.chance(0.5) {
            let z = p.target();
            let w = self.object_up_to(1);
            let h = self.morphism(z, &w);
            let bp = biproduct(&[z, &w]);
            let into = bp.injections[0].add(&bp.injections[1].compose(&h));
            // (z, w) ↦ w − h z kills the graph of h
            let out = bp.projections[1].sub(&h.compose(&bp.projections[0]));
            diffs[1] = into.compose(&p);
            objects[2] = bp.object.clone();
            objects.push(w);
            diffs.push(out);
        }
        BoundedComplex::new(start, objects, diffs).expect("conflations compose to zero")
    }

    /// A random chain map `c → d`: a small combination of generators of
    /// the group of all chain maps.
    pub fn chain_map(&mut self, c: &BoundedComplex<R>, d: &BoundedComplex<R>) -> ChainMap<R> {
        let classes = homotopy_classes(c, d);
        let z = self.coefficients(classes.chain_map_generators());
        classes.chain_map(&z)
    }

    pub fn mon_object(&mut self) -> MonObject<R> {
        MonObject::new(self.mono()).expect("mono")
    }

    /// One inflation into a random object, or a composite of two.
    pub fn hull_object(&mut self) -> MonObject<R> {
        let y = self.object();
        let first = self.inflation_into(&y);
        let delta = if self.chance(0.5) {
            let second = self.inflation_into(first.source());
            first.compose(&second)
        } else {
            first
        };
        MonObject::new(delta).expect("inflations are mono")
    }

    /// A random square `x → y`: a random top map, restricted to a
    /// subobject of `x` it carries into `y⁻¹` when needed.
    pub fn square(&mut self, x: &MonObject<R>, y: &MonObject<R>) -> MonMorphism<R> {
        let upper = self.morphism(x.upper(), y.upper());
        if let Ok(u) = MonMorphism::from_upper(x, y, upper.clone()) {
            return u;
        }
        // restrict to the preimage of y⁻¹ under the top map
        let pb = pullback(&upper.compose(x.delta()), y.delta());
        let source = MonObject::new(x.delta().compose(&pb.to_left)).expect("composite of monos");
        MonMorphism::new(&source, y, pb.to_right, upper).expect("pullback square commutes")
    }

    /// A bicartesian square onto `y`: `E⁰ = free ⊕ W` maps onto `y⁰` and
    /// `E⁻¹` is the preimage of `y⁻¹`.
    pub fn bicartesian_square_onto(&mut self, y: &MonObject<R>) -> MonMorphism<R> {
        let p = self.deflation_onto(y.upper());
        let lift = pullback(&p, y.delta());
        let source = MonObject::new(lift.to_left).expect("pullback of a mono");
        MonMorphism::new(&source, y, lift.to_right, p).expect("pullback square commutes")
    }

    /// A null-homotopic square `x → y` built from a random `t: x⁰ → y⁻¹`.
    pub fn null_homotopic_square(&mut self, x: &MonObject<R>, y: &MonObject<R>) -> MonMorphism<R> {
        let t = self.morphism(x.upper(), y.lower());
        MonMorphism::new(x, y, t.compose(x.delta()), y.delta().compose(&t)).expect("null-homotopic squares commute")
    }

    /// A random object of the Freyd category.
    pub fn freyd_object(&mut self) -> FreydObject<R> {
        FreydObject::new(self.any_morphism())
    }

    /// Presented by a deflation, hence effaceable.
    pub fn effaceable_object(&mut self) -> FreydObject<R> {
        FreydObject::new(self.deflation())
    }

    /// Presented by a mono, possibly after a split projection; projective
    /// dimension at most one.
    pub fn pd_one_object(&mut self) -> FreydObject<R> {
        let m = self.mono();
        if self.chance(0.5) {
            return FreydObject::new(m);
        }
        let w = self.object_up_to(1);
        let bp = biproduct(&[m.source(), &w]);
        FreydObject::new(m.compose(&bp.projections[0]))
    }

    pub fn freyd_morphism(&mut self, x: &FreydObject<R>, y: &FreydObject<R>) -> FreydMorphism<R> {
        let h = freyd_hom(x, y);
        let c = self.coefficients(h.group().generators());
        h.morphism(&c)
    }
}
