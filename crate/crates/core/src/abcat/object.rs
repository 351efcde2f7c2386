use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::intlin::{snf, solve_in_image, Matrix, Ring, SmithDecomposition};

/// A finitely presented module `R^g / colspan(relations)`.
///
/// Objects are kept as presentations; two objects are equal as values only
/// when their presentations agree. Isomorphism is decided by
/// [`PresentedObject::is_isomorphic`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PresentedObject<R> {
    generators: usize,
    relations: Matrix<R>,
}

/// Isomorphism invariants: free rank plus non-unit invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Invariants<R> {
    pub free_rank: usize,
    pub torsion: Vec<R>,
}

impl<R: Ring> Invariants<R> {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl<R: Ring> fmt::Display for Invariants<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let base = if R::NAME == "integers" { "Z" } else { "Q" };
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                base.to_string()
            } else {
                format!("{base}^{}", self.free_rank)
            });
        }
        for d in &self.torsion {
            parts.push(format!("{base}/{d}"));
        }
        f.write_str(&parts.join(" + "))
    }
}

impl<R: Ring> PresentedObject<R> {
    pub fn new(generators: usize, relations: Matrix<R>) -> Result<Self> {
        if relations.rows() != generators {
            return Err(Error::Shape(format!(
                "relation matrix has {} rows for {generators} generators",
                relations.rows()
            )));
        }
        Ok(PresentedObject { generators, relations })
    }

    pub fn free(rank: usize) -> Self {
        PresentedObject { generators: rank, relations: Matrix::zeros(rank, 0) }
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    /// `R / (d)`.
    pub fn cyclic(d: R) -> Self {
        PresentedObject { generators: 1, relations: Matrix::new(1, 1, vec![d]).unwrap() }
    }

    /// `R^free_rank ⊕ R/(t_1) ⊕ ...`, torsion generators first.
    pub fn from_invariants(free_rank: usize, torsion: &[R]) -> Self {
        let g = torsion.len() + free_rank;
        PresentedObject { generators: g, relations: Matrix::diagonal(g, torsion.len(), torsion) }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &Matrix<R> {
        &self.relations
    }

    pub fn smith(&self) -> SmithDecomposition<R> {
        snf(&self.relations)
    }

    pub fn invariants(&self) -> Invariants<R> {
        let diag = self.smith().diagonal();
        let rank = diag.len();
        Invariants {
            free_rank: self.generators - rank,
            torsion: diag.into_iter().filter(|d| !d.is_unit()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.invariants().is_zero()
    }

    pub fn is_free(&self) -> bool {
        self.invariants().torsion.is_empty()
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.invariants() == other.invariants()
    }

    /// Whether the element with coordinates `v` is zero in the quotient.
    pub fn is_zero_element(&self, v: &[R]) -> bool {
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        solve_in_image(&self.relations, v).ok().flatten().is_some()
    }

    pub fn elements_equal(&self, a: &[R], b: &[R]) -> bool {
        let d: Vec<R> = a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect();
        self.is_zero_element(&d)
    }

    pub fn unit_vector(&self, i: usize) -> Vec<R> {
        let mut v = vec![R::zero(); self.generators];
        v[i] = R::one();
        v
    }

    pub fn zero_element(&self) -> Vec<R> {
        vec![R::zero(); self.generators]
    }

    pub fn to_json(&self) -> Value {
        json!({ "generators": self.generators, "relations": self.relations.to_json() })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let g = value
            .get("generators")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("object needs an integer \"generators\" field".into()))?
            as usize;
        let rel = match value.get("relations") {
            Some(v) => Matrix::from_json(v, Some(g))?,
            None => Matrix::zeros(g, 0),
        };
        Self::new(g, rel)
    }
}

impl<R: fmt::Debug> fmt::Debug for PresentedObject<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} | {:?}>", self.generators, self.relations)
    }
}

impl<R: Ring> fmt::Display for PresentedObject<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.invariants())
    }
}
