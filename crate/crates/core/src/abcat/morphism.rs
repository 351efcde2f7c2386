use std::fmt;

use serde_json::{json, Value};

use super::object::PresentedObject;
use crate::error::{Error, Result};
use crate::intlin::{solve_in_image, Matrix, Ring};

/// A homomorphism of presented modules given on generators.
///
/// `witness` certifies well-definedness:
/// `matrix · source.relations == target.relations · witness`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PresentedMorphism<R> {
    source: PresentedObject<R>,
    target: PresentedObject<R>,
    matrix: Matrix<R>,
    witness: Matrix<R>,
}

impl<R: Ring> PresentedMorphism<R> {
    /// Validates the generator matrix and computes its witness.
    pub fn new(source: PresentedObject<R>, target: PresentedObject<R>, matrix: Matrix<R>) -> Result<Self> {
        if matrix.shape() != (target.generators(), source.generators()) {
            return Err(Error::Shape(format!(
                "{}x{} matrix for a map from {} to {} generators",
                matrix.rows(),
                matrix.cols(),
                source.generators(),
                target.generators()
            )));
        }
        let image = matrix.mul(source.relations());
        let mut cols = Vec::with_capacity(image.cols());
        for j in 0..image.cols() {
            let c = image.column(j);
            match solve_in_image(target.relations(), &c)? {
                Some(x) => cols.push(x),
                None => {
                    return Err(Error::NotWellDefined(format!(
                        "relation {j} of the source is not sent into the target relations"
                    )))
                }
            }
        }
        let witness = Matrix::from_columns(target.relations().cols(), &cols);
        Ok(PresentedMorphism { source, target, matrix, witness })
    }

    /// Accepts a caller-supplied witness after verifying it.
    pub fn with_witness(
        source: PresentedObject<R>,
        target: PresentedObject<R>,
        matrix: Matrix<R>,
        witness: Matrix<R>,
    ) -> Result<Self> {
        if matrix.shape() != (target.generators(), source.generators())
            || witness.shape() != (target.relations().cols(), source.relations().cols())
        {
            return Err(Error::Shape("morphism or witness shape".into()));
        }
        if matrix.mul(source.relations()) != target.relations().mul(&witness) {
            return Err(Error::NotWellDefined("witness equation fails".into()));
        }
        Ok(PresentedMorphism { source, target, matrix, witness })
    }

    pub fn identity(obj: &PresentedObject<R>) -> Self {
        let g = obj.generators();
        let k = obj.relations().cols();
        PresentedMorphism {
            source: obj.clone(),
            target: obj.clone(),
            matrix: Matrix::identity(g),
            witness: Matrix::identity(k),
        }
    }

    pub fn zero(source: &PresentedObject<R>, target: &PresentedObject<R>) -> Self {
        PresentedMorphism {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zeros(target.generators(), source.generators()),
            witness: Matrix::zeros(target.relations().cols(), source.relations().cols()),
        }
    }

    pub fn source(&self) -> &PresentedObject<R> {
        &self.source
    }

    pub fn target(&self) -> &PresentedObject<R> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix<R> {
        &self.matrix
    }

    pub fn witness(&self) -> &Matrix<R> {
        &self.witness
    }

    /// `self ∘ inner`. Panics unless `inner.target == self.source`.
    pub fn compose(&self, inner: &Self) -> Self {
        assert!(inner.target == self.source, "composing morphisms with mismatched objects");
        PresentedMorphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&inner.matrix),
            witness: self.witness.mul(&inner.witness),
        }
    }

    fn same_endpoints(&self, other: &Self) {
        assert!(
            self.source == other.source && self.target == other.target,
            "morphism arithmetic with mismatched objects"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_endpoints(other);
        PresentedMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.add(&other.matrix),
            witness: self.witness.add(&other.witness),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_endpoints(other);
        PresentedMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.sub(&other.matrix),
            witness: self.witness.sub(&other.witness),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-R::one())
    }

    pub fn scale(&self, c: &R) -> Self {
        PresentedMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.scale(c),
            witness: self.witness.scale(c),
        }
    }

    /// Decides equality of the underlying homomorphisms.
    pub fn equals(&self, other: &Self) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        self.sub(other).is_zero()
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.is_zero_element(&self.matrix.column(j)))
    }

    pub fn apply(&self, v: &[R]) -> Vec<R> {
        self.matrix.mul_vec(v)
    }

    /// Some `x` with `self(x) == y` in the target, if one exists.
    pub fn preimage(&self, y: &[R]) -> Option<Vec<R>> {
        let sys = Matrix::hstack(&[&self.matrix, self.target.relations()]);
        let sol = solve_in_image(&sys, y).ok()??;
        Some(sol[..self.source.generators()].to_vec())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "matrix": self.matrix.to_json(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let field = |k: &str| value.get(k).ok_or_else(|| Error::Parse(format!("morphism needs \"{k}\"")));
        let source = PresentedObject::from_json(field("source")?)?;
        let target = PresentedObject::from_json(field("target")?)?;
        let mut matrix = Matrix::from_json(field("matrix")?, Some(target.generators()))?;
        if matrix.cols() == 0 && source.generators() > 0 && target.generators() == 0 {
            matrix = Matrix::zeros(0, source.generators());
        }
        Self::new(source, target, matrix)
    }
}

impl<R: fmt::Debug> fmt::Debug for PresentedMorphism<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} --{:?}--> {:?}", self.source, self.matrix, self.target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::{int, Z};

    #[test]
    fn witness_is_checked() {
        let z4 = PresentedObject::<Z>::cyclic(int(4));
        let z2 = PresentedObject::<Z>::cyclic(int(2));
        // Z/4 -> Z/2, 1 -> 1 is fine; Z/2 -> Z/4, 1 -> 1 is not
        assert!(PresentedMorphism::new(z4.clone(), z2.clone(), Matrix::from_i64(&[&[1]])).is_ok());
        assert!(matches!(
            PresentedMorphism::new(z2.clone(), z4.clone(), Matrix::from_i64(&[&[1]])),
            Err(Error::NotWellDefined(_))
        ));
        let m = PresentedMorphism::new(z2, z4, Matrix::from_i64(&[&[2]])).unwrap();
        assert_eq!(m.witness(), &Matrix::from_i64(&[&[1]]));
    }

    #[test]
    fn equality_is_decided() {
        let z = PresentedObject::<Z>::free(1);
        let z2 = PresentedObject::<Z>::cyclic(int(2));
        let a = PresentedMorphism::new(z.clone(), z2.clone(), Matrix::from_i64(&[&[1]])).unwrap();
        let b = PresentedMorphism::new(z.clone(), z2.clone(), Matrix::from_i64(&[&[3]])).unwrap();
        assert!(a.equals(&b));
        assert!(a.sub(&b).is_zero());
        assert!(!a.is_zero());
        assert_eq!(a.preimage(&[int(1)]), Some(vec![int(1)]));
    }

    #[test]
    fn json_round_trip() {
        let z = PresentedObject::<Z>::free(2);
        let f = PresentedMorphism::new(z.clone(), PresentedObject::free(1), Matrix::from_i64(&[&[1, 1]])).unwrap();
        assert_eq!(PresentedMorphism::from_json(&f.to_json()).unwrap(), f);
    }
}
