
use super::matrix::Matrix;
use super::ring::Ring;
use crate::error::{Error, Result};

/// `u * m * v == d` with `u`, `v` invertible over the ring and `d` diagonal
/// with `d[0] | d[1] | ...`, each diagonal entry in canonical (nonnegative) form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition<R> {
    pub u: Matrix<R>,
    pub u_inv: Matrix<R>,
    pub d: Matrix<R>,
    pub v: Matrix<R>,
    pub v_inv: Matrix<R>,
}

impl<R: Ring> SmithDecomposition<R> {
    pub fn rank(&self) -> usize {
        self.diagonal().len()
    }

    /// Nonzero diagonal entries in order.
    pub fn diagonal(&self) -> Vec<R> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).take_while(|x| !x.is_zero()).collect()
    }
}

struct SmithState<R> {
    a: Matrix<R>,
    u: Matrix<R>,
    u_inv: Matrix<R>,
    v: Matrix<R>,
    v_inv: Matrix<R>,
}

impl<R: Ring> SmithState<R> {
    fn row_swap(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// row[dst] += c * row[src]
    fn row_add(&mut self, dst: usize, src: usize, c: &R) {
        self.a.add_row_multiple(dst, src, c);
        self.u.add_row_multiple(dst, src, c);
        self.u_inv.add_col_multiple(src, dst, &-c.clone());
    }

    /// col[dst] += c * col[src]
    fn col_add(&mut self, dst: usize, src: usize, c: &R) {
        self.a.add_col_multiple(dst, src, c);
        self.v.add_col_multiple(dst, src, c);
        self.v_inv.add_row_multiple(src, dst, &-c.clone());
    }

    fn row_scale(&mut self, i: usize, unit: &R, unit_inv: &R) {
        self.a.scale_row(i, unit);
        self.u.scale_row(i, unit);
        self.u_inv.scale_col(i, unit_inv);
    }

    /// Smallest nonzero entry in the trailing block, ties broken row-major.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), num_bigint::BigUint)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let s = x.size();
                if best.as_ref().is_none_or(|(_, b)| s < *b) {
                    best = Some(((i, j), s));
                }
            }
        }
        best.map(|(p, _)| p)
    }

    /// Smallest nonzero entry in row `t` or column `t` beyond the diagonal.
    fn cross_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), num_bigint::BigUint)> = None;
        let mut consider = |p: (usize, usize), x: &R| {
            if !x.is_zero() {
                let s = x.size();
                if best.as_ref().is_none_or(|(_, b)| s < *b) {
                    best = Some((p, s));
                }
            }
        };
        consider((t, t), &self.a[(t, t)]);
        for i in t + 1..self.a.rows() {
            consider((i, t), &self.a[(i, t)]);
        }
        for j in t + 1..self.a.cols() {
            consider((t, j), &self.a[(t, j)]);
        }
        best.map(|(p, _)| p)
    }

    fn run(&mut self) {
        let (m, n) = self.a.shape();
        for t in 0..m.min(n) {
            let Some((pi, pj)) = self.pivot(t) else { break };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            loop {
                let mut clean = true;
                let p = self.a[(t, t)].clone();
                for i in t + 1..m {
                    if self.a[(i, t)].is_zero() {
                        continue;
                    }
                    let (q, r) = self.a[(i, t)].div_rem_euclid(&p);
                    self.row_add(i, t, &-q);
                    clean &= r.is_zero();
                }
                for j in t + 1..n {
                    if self.a[(t, j)].is_zero() {
                        continue;
                    }
                    let (q, r) = self.a[(t, j)].div_rem_euclid(&p);
                    self.col_add(j, t, &-q);
                    clean &= r.is_zero();
                }
                if !clean {
                    let (pi, pj) = self.cross_pivot(t).expect("nonzero pivot remains");
                    if pi != t {
                        self.row_swap(t, pi);
                    }
                    if pj != t {
                        self.col_swap(t, pj);
                    }
                    continue;
                }
                // row and column t are clear; enforce divisibility of the block
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !p.divides(&self.a[(i, j)])));
                match bad {
                    Some(i) => self.row_add(t, i, &R::one()),
                    None => break,
                }
            }
            let (_, unit) = self.a[(t, t)].normalize();
            if !unit.is_one() {
                let inv = unit.unit_inverse().expect("normalizing factor is a unit");
                self.row_scale(t, &unit, &inv);
            }
        }
    }
}

/// Smith normal form with transformation matrices. Deterministic: pivots are
/// chosen by smallest Euclidean size, ties by row-major position.
pub fn snf<R: Ring>(m: &Matrix<R>) -> SmithDecomposition<R> {
    let (r, c) = m.shape();
    let mut st = SmithState {
        a: m.clone(),
        u: Matrix::identity(r),
        u_inv: Matrix::identity(r),
        v: Matrix::identity(c),
        v_inv: Matrix::identity(c),
    };
    st.run();
    SmithDecomposition { u: st.u, u_inv: st.u_inv, d: st.a, v: st.v, v_inv: st.v_inv }
}

/// Finds `x` with `a * x == b`, or `None` when `b` is outside the column
/// lattice (span, over a field) of `a`.
pub fn solve_in_image<R: Ring>(a: &Matrix<R>, b: &[R]) -> Result<Option<Vec<R>>> {
    if a.rows() != b.len() {
        return Err(Error::Shape(format!(
            "right-hand side of length {} for a {}x{} system",
            b.len(),
            a.rows(),
            a.cols()
        )));
    }
    Ok(solve_with(&snf(a), b))
}

/// Solves against a precomputed decomposition of the system matrix.
pub fn solve_with<R: Ring>(s: &SmithDecomposition<R>, b: &[R]) -> Option<Vec<R>> {
    let ub = s.u.mul_vec(b);
    let diag = s.diagonal();
    let mut y = vec![R::zero(); s.v.rows()];
    for (i, c) in ub.iter().enumerate() {
        if i < diag.len() {
            let (q, r) = c.div_rem_euclid(&diag[i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

pub fn rank<R: Ring>(m: &Matrix<R>) -> usize {
    snf(m).rank()
}

/// Basis (as columns) of `{x : m x = 0}`. The result is saturated.
pub fn kernel_basis<R: Ring>(m: &Matrix<R>) -> Matrix<R> {
    let s = snf(m);
    s.v.column_range(s.rank(), m.cols())
}

/// Basis (as columns) of the column lattice of `m`.
pub fn image_basis<R: Ring>(m: &Matrix<R>) -> Matrix<R> {
    let s = snf(m);
    let diag = s.diagonal();
    let mut b = s.u_inv.column_range(0, diag.len());
    for (j, d) in diag.iter().enumerate() {
        b.scale_col(j, d);
    }
    b
}

/// Basis of the smallest pure sublattice containing the column lattice of `l`:
/// `{x : n x ∈ colspan(l) for some nonzero n}`.
pub fn saturate<R: Ring>(l: &Matrix<R>) -> Matrix<R> {
    let s = snf(l);
    s.u_inv.column_range(0, s.rank())
}

/// Determinant by fraction-free elimination. Panics on non-square input.
pub fn det<R: Ring>(m: &Matrix<R>) -> R {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return R::one();
    }
    let mut a = m.clone();
    let mut sign = R::one();
    let mut prev = R::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return R::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[(i, j)].clone() * a[(k, k)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                *a.get_mut(i, j) = num.div_rem_euclid(&prev).0;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    type M = Matrix<BigInt>;

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn snf_of_coprime_diagonal() {
        let m = M::from_i64(&[&[2, 0], &[0, 3]]);
        let s = snf(&m);
        assert_eq!(s.d, M::from_i64(&[&[1, 0], &[0, 6]]));
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), M::identity(2));
        assert_eq!(s.v_inv.mul(&s.v), M::identity(2));
    }

    #[test]
    fn snf_fixed_points() {
        let zero = M::from_i64(&[&[0]]);
        assert_eq!(snf(&zero).d, zero);
        let id = M::identity(3);
        assert_eq!(snf(&id).d, id);
    }

    #[test]
    fn snf_is_deterministic_and_unimodular() {
        let m = M::from_i64(&[&[3, -2, 4], &[6, 1, -3], &[0, 5, 2], &[-3, 3, 3]]);
        let a = snf(&m);
        let b = snf(&m);
        assert_eq!(a, b);
        assert_eq!(a.u.mul(&m).mul(&a.v), a.d);
        let du = det(&a.u);
        let dv = det(&a.v);
        assert!(du == z(1) || du == z(-1));
        assert!(dv == z(1) || dv == z(-1));
        let diag = a.diagonal();
        for w in diag.windows(2) {
            assert!(w[0].divides(&w[1]));
        }
    }

    #[test]
    fn solve_examples() {
        let a = M::from_i64(&[&[2]]);
        assert_eq!(solve_in_image(&a, &[z(4)]).unwrap(), Some(vec![z(2)]));
        assert_eq!(solve_in_image(&a, &[z(3)]).unwrap(), None);
        let a = M::from_i64(&[&[1, 1], &[0, 2]]);
        assert_eq!(solve_in_image(&a, &[z(0), z(2)]).unwrap(), Some(vec![z(-1), z(1)]));
        assert!(solve_in_image(&a, &[z(1)]).is_err());
    }

    #[test]
    fn saturate_examples() {
        assert_eq!(saturate(&M::from_i64(&[&[2]])), M::from_i64(&[&[1]]));
        let s = saturate(&M::identity(2));
        assert_eq!(det(&s).magnitude(), z(1).magnitude());
        let s = saturate(&M::from_i64(&[&[2], &[2]]));
        let c = s.column(0);
        assert!(c == vec![z(1), z(1)] || c == vec![z(-1), z(-1)]);
    }

    #[test]
    fn kernel_and_image() {
        let m = M::from_i64(&[&[1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        assert!(k.column(0) == vec![z(1), z(-1)] || k.column(0) == vec![z(-1), z(1)]);
        let m = M::from_i64(&[&[2, 4], &[0, 6]]);
        let img = image_basis(&m);
        assert_eq!(img.cols(), 2);
        assert_eq!(det(&img).magnitude(), z(12).magnitude());
    }

    #[test]
    fn determinant() {
        assert_eq!(det(&M::from_i64(&[&[2, 1], &[7, 4]])), z(1));
        assert_eq!(det(&M::from_i64(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]])), z(-2));
        assert_eq!(det(&M::from_i64(&[&[1, 2], &[2, 4]])), z(0));
    }

    #[test]
    fn rational_snf_is_rank_normal_form() {
        let m = Matrix::<BigRational>::from_i64(&[&[2, 4], &[1, 2], &[0, 3]]);
        let s = snf(&m);
        assert_eq!(s.diagonal().len(), 2);
        assert!(s.diagonal().iter().all(|d| d.is_one()));
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
    }
}
