use serde_json::{json, Value};

use crate::abcat::{biproduct, PresentedMorphism, PresentedObject};
use crate::error::{Error, Result};
use crate::intlin::{Matrix, Ring};
use crate::regular::RegularCategory;

/// A cochain complex with finitely many nonzero terms, zero outside
/// `start ..= end()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundedComplex<R> {
    start: i64,
    objects: Vec<PresentedObject<R>>,
    /// `differentials[i]: objects[i] → objects[i + 1]`.
    differentials: Vec<PresentedMorphism<R>>,
}

impl<R: Ring> BoundedComplex<R> {
    pub fn new(
        start: i64,
        objects: Vec<PresentedObject<R>>,
        differentials: Vec<PresentedMorphism<R>>,
    ) -> Result<Self> {
        if objects.is_empty() {
            return Ok(Self::zero());
        }
        if differentials.len() + 1 != objects.len() {
            return Err(Error::Shape(format!(
                "{} objects need {} differentials, got {}",
                objects.len(),
                objects.len() - 1,
                differentials.len()
            )));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.source() != &objects[i] || d.target() != &objects[i + 1] {
                return Err(Error::Shape(format!("differential {i} does not match its objects")));
            }
        }
        for w in differentials.windows(2) {
            if !w[1].compose(&w[0]).is_zero() {
                return Err(Error::NotWellDefined("consecutive differentials do not compose to zero".into()));
            }
        }
        Ok(BoundedComplex { start, objects, differentials })
    }

    pub fn zero() -> Self {
        BoundedComplex { start: 0, objects: Vec::new(), differentials: Vec::new() }
    }

    /// `x` in degree `n`.
    pub fn stalk(x: &PresentedObject<R>, n: i64) -> Self {
        BoundedComplex { start: n, objects: vec![x.clone()], differentials: Vec::new() }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Last degree of the stored range; `start - 1` when empty.
    pub fn end(&self) -> i64 {
        self.start + self.objects.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.start..=self.end()
    }

    pub fn object(&self, n: i64) -> PresentedObject<R> {
        if n < self.start || n > self.end() {
            PresentedObject::zero()
        } else {
            self.objects[(n - self.start) as usize].clone()
        }
    }

    /// `d^n: C^n → C^{n+1}`.
    pub fn differential(&self, n: i64) -> PresentedMorphism<R> {
        if n >= self.start && n < self.end() {
            self.differentials[(n - self.start) as usize].clone()
        } else {
            PresentedMorphism::zero(&self.object(n), &self.object(n + 1))
        }
    }

    pub fn require_in(&self, cat: &RegularCategory<R>) -> Result<()> {
        self.objects.iter().try_for_each(|x| cat.require(x))
    }

    /// Builds a complex on `lo ..= hi` from degree-indexed constructors.
    pub fn from_fn(
        lo: i64,
        hi: i64,
        object: impl Fn(i64) -> PresentedObject<R>,
        differential: impl Fn(i64) -> PresentedMorphism<R>,
    ) -> Result<Self> {
        if hi < lo {
            return Ok(Self::zero());
        }
        let objects = (lo..=hi).map(object).collect();
        let differentials = (lo..hi).map(differential).collect();
        Self::new(lo, objects, differentials)
    }

    /// `C[1]`: degree `n` holds `C^{n+1}` and differentials change sign.
    pub fn shift(&self) -> Self {
        BoundedComplex {
            start: self.start - 1,
            objects: self.objects.clone(),
            differentials: self.differentials.iter().map(|d| d.neg()).collect(),
        }
    }

    /// Drops zero objects at both ends.
    pub fn trimmed(&self) -> Self {
        let nonzero: Vec<i64> = self.degrees().filter(|&n| !self.object(n).is_zero()).collect();
        match (nonzero.first(), nonzero.last()) {
            (Some(&lo), Some(&hi)) => {
                Self::from_fn(lo, hi, |n| self.object(n), |n| self.differential(n)).expect("sub-range of a complex")
            }
            _ => Self::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.objects.iter().all(|x| x.is_zero())
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let lo = self.start.min(other.start);
        let hi = self.end().max(other.end());
        Self::from_fn(
            lo,
            hi,
            |n| biproduct(&[&self.object(n), &other.object(n)]).object,
            |n| crate::abcat::direct_sum(&[&self.differential(n), &other.differential(n)]),
        )
        .expect("sum of complexes")
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.degrees()
                .map(|n| {
                    let mut e = json!({ "degree": n, "object": self.object(n).to_json() });
                    if n < self.end() {
                        e["differential"] = self.differential(n).matrix().to_json();
                    }
                    e
                })
                .collect(),
        )
    }

    /// Parses `[{degree, object, differential}, ...]` with consecutive degrees.
    pub fn from_json(value: &Value) -> Result<Self> {
        let items = value.as_array().ok_or_else(|| Error::Parse("complex must be an array".into()))?;
        if items.is_empty() {
            return Ok(Self::zero());
        }
        let mut objects = Vec::new();
        let mut start = None;
        for (i, it) in items.iter().enumerate() {
            let deg = it
                .get("degree")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Parse("complex entry needs an integer degree".into()))?;
            let s = *start.get_or_insert(deg);
            if deg != s + i as i64 {
                return Err(Error::Parse("complex degrees must be consecutive and increasing".into()));
            }
            let obj = it.get("object").ok_or_else(|| Error::Parse("complex entry needs an object".into()))?;
            objects.push(PresentedObject::from_json(obj)?);
        }
        let mut differentials = Vec::new();
        for i in 0..objects.len() - 1 {
            let (s, t) = (&objects[i], &objects[i + 1]);
            let m = match items[i].get("differential") {
                Some(v) => {
                    let m = Matrix::from_json(v, Some(t.generators()))?;
                    if m.cols() == 0 && s.generators() > 0 {
                        Matrix::zeros(t.generators(), s.generators())
                    } else {
                        m
                    }
                }
                None => Matrix::zeros(t.generators(), s.generators()),
            };
            differentials.push(PresentedMorphism::new(s.clone(), t.clone(), m)?);
        }
        Self::new(start.expect("nonempty"), objects, differentials)
    }
}

/// Components `f^n: C^n → D^n` commuting with the differentials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainMap<R> {
    source: BoundedComplex<R>,
    target: BoundedComplex<R>,
    lo: i64,
    components: Vec<PresentedMorphism<R>>,
}

impl<R: Ring> ChainMap<R> {
    /// `component(n)` is queried for every degree where either complex is
    /// stored; all other components are zero.
    pub fn new(
        source: &BoundedComplex<R>,
        target: &BoundedComplex<R>,
        component: impl Fn(i64) -> PresentedMorphism<R>,
    ) -> Result<Self> {
        let lo = source.start().min(target.start());
        let hi = source.end().max(target.end());
        let components: Vec<_> = (lo..=hi).map(component).collect();
        let f = ChainMap { source: source.clone(), target: target.clone(), lo, components };
        for n in lo..=hi {
            let c = f.component(n);
            if c.source() != &source.object(n) || c.target() != &target.object(n) {
                return Err(Error::Shape(format!("component {n} has the wrong endpoints")));
            }
        }
        for n in lo - 1..=hi {
            let left = target.differential(n).compose(&f.component(n));
            let right = f.component(n + 1).compose(&source.differential(n));
            if !left.equals(&right) {
                return Err(Error::NotWellDefined(format!("chain map does not commute in degree {n}")));
            }
        }
        Ok(f)
    }

    pub fn identity(c: &BoundedComplex<R>) -> Self {
        Self::new(c, c, |n| PresentedMorphism::identity(&c.object(n))).expect("identity commutes")
    }

    pub fn zero(source: &BoundedComplex<R>, target: &BoundedComplex<R>) -> Self {
        Self::new(source, target, |n| PresentedMorphism::zero(&source.object(n), &target.object(n)))
            .expect("zero commutes")
    }

    pub fn source(&self) -> &BoundedComplex<R> {
        &self.source
    }

    pub fn target(&self) -> &BoundedComplex<R> {
        &self.target
    }

    pub fn component(&self, n: i64) -> PresentedMorphism<R> {
        let i = n - self.lo;
        if i >= 0 && (i as usize) < self.components.len() {
            self.components[i as usize].clone()
        } else {
            PresentedMorphism::zero(&self.source.object(n), &self.target.object(n))
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ChainMap<R>) -> ChainMap<R> {
        assert!(inner.target == self.source, "composing chain maps with mismatched complexes");
        ChainMap::new(&inner.source, &self.target, |n| self.component(n).compose(&inner.component(n)))
            .expect("composite commutes")
    }

    pub fn add(&self, other: &ChainMap<R>) -> ChainMap<R> {
        ChainMap::new(&self.source, &self.target, |n| self.component(n).add(&other.component(n)))
            .expect("sum commutes")
    }

    pub fn sub(&self, other: &ChainMap<R>) -> ChainMap<R> {
        ChainMap::new(&self.source, &self.target, |n| self.component(n).sub(&other.component(n)))
            .expect("difference commutes")
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.lo + self.components.len() as i64 - 1
    }

    pub fn to_json(&self) -> Value {
        json!({
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "components": self.degrees()
                .map(|n| json!({"degree": n, "matrix": self.component(n).matrix().to_json()}))
                .collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::{int, Z};

    fn two() -> BoundedComplex<Z> {
        let z = PresentedObject::free(1);
        let d = PresentedMorphism::new(z.clone(), z.clone(), Matrix::from_i64(&[&[2]])).unwrap();
        BoundedComplex::new(-1, vec![z.clone(), z], vec![d]).unwrap()
    }

    #[test]
    fn differentials_square_to_zero() {
        let z = PresentedObject::<Z>::free(1);
        let one = PresentedMorphism::identity(&z);
        assert!(BoundedComplex::new(0, vec![z.clone(), z.clone(), z.clone()], vec![one.clone(), one]).is_err());
        let c = two();
        assert_eq!(c.differential(-1).matrix()[(0, 0)], int(2));
        assert!(c.differential(0).is_zero());
        assert!(c.object(3).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let c = two();
        assert_eq!(BoundedComplex::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn chain_maps_must_commute() {
        let c = two();
        let z = PresentedObject::<Z>::free(1);
        let stalk = BoundedComplex::stalk(&z, 0);
        let ok = ChainMap::new(&c, &stalk, |n| {
            if n == 0 {
                PresentedMorphism::identity(&z)
            } else {
                PresentedMorphism::zero(&c.object(n), &stalk.object(n))
            }
        });
        assert!(ok.is_err());
        let ok = ChainMap::new(&stalk, &c, |n| {
            if n == 0 {
                PresentedMorphism::identity(&z)
            } else {
                PresentedMorphism::zero(&stalk.object(n), &c.object(n))
            }
        });
        assert!(ok.is_ok());
    }
}
