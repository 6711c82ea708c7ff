//! Exact elimination: echelon forms, kernels, affine solution sets, inverses.

use crate::field::{FieldElement, FieldSpec};
use crate::matrix::Matrix;

/// Reduced row echelon form with its pivot columns and rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

pub fn rref(m: &Matrix) -> Rref {
    let spec = m.spec();
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, pr);
        let inv = a[r][c].inv().expect("nonzero pivot");
        for x in a[r].iter_mut().skip(c) {
            *x = &*x * &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x = &*x - &(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();
    Rref { matrix: Matrix::from_vector(spec, rows, cols, a.into_iter().flatten().collect()), pivots, rank }
}

impl Matrix {
    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    /// Basis of the right kernel `{v : self * v = 0}` as column vectors.
    pub fn kernel(&self) -> Vec<Matrix> {
        kernel_vectors(self).into_iter().map(|v| Matrix::column_vector(self.spec(), v)).collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        invert(self).ok()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows()
    }

    pub fn determinant(&self) -> FieldElement {
        determinant(self)
    }
}

/// Kernel basis as plain vectors, one per free column, in column order.
pub fn kernel_vectors(m: &Matrix) -> Vec<Vec<FieldElement>> {
    let spec = m.spec();
    let r = rref(m);
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![FieldElement::zero(spec); cols];
        v[free] = FieldElement::one(spec);
        for (row, &pc) in r.pivots.iter().enumerate() {
            v[pc] = -r.matrix.get(row, free);
        }
        out.push(v);
    }
    out
}

/// Solution set of `a * x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    /// `particular + span(kernel)`; each kernel vector is a column of length
    /// `a.cols()`, and the general solution adds any kernel combination to
    /// any column of `particular`.
    Consistent { particular: Matrix, kernel: Vec<Matrix> },
    Inconsistent,
}

impl LinearSolution {
    pub fn particular(&self) -> Option<&Matrix> {
        match self {
            LinearSolution::Consistent { particular, .. } => Some(particular),
            LinearSolution::Inconsistent => None,
        }
    }

    pub fn is_consistent(&self) -> bool {
        matches!(self, LinearSolution::Consistent { .. })
    }
}

/// Solves `a * x = b` exactly. Panics if `a.rows() != b.rows()`.
pub fn solve_linear(a: &Matrix, b: &Matrix) -> LinearSolution {
    assert_eq!(a.rows(), b.rows(), "solve_linear: row count mismatch");
    let spec = a.spec();
    let n = a.cols();
    let aug = a.hstack(b);
    let r = rref(&aug);
    if r.pivots.iter().any(|&p| p >= n) {
        return LinearSolution::Inconsistent;
    }
    let mut particular = Matrix::zeros(spec, n, b.cols());
    for (row, &pc) in r.pivots.iter().enumerate() {
        for j in 0..b.cols() {
            particular.set(pc, j, r.matrix.get(row, n + j).clone());
        }
    }
    LinearSolution::Consistent { particular, kernel: a.kernel() }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvertError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is singular")]
    Singular,
}

pub fn invert(m: &Matrix) -> Result<Matrix, InvertError> {
    if !m.is_square() {
        return Err(InvertError::NotSquare);
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Matrix::zeros(m.spec(), 0, 0));
    }
    let r = rref(&m.hstack(&Matrix::identity(m.spec(), n)));
    if r.pivots[n - 1] != n - 1 {
        return Err(InvertError::Singular);
    }
    let cols: Vec<usize> = (n..2 * n).collect();
    Ok(r.matrix.select_columns(&cols))
}

pub fn determinant(m: &Matrix) -> FieldElement {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let spec = m.spec();
    let n = m.rows();
    let mut a = m.to_rows();
    let mut det = FieldElement::one(spec);
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return FieldElement::zero(spec);
        };
        if pr != c {
            a.swap(pr, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det = &det * &piv;
        let inv = piv.inv().expect("nonzero pivot");
        let pivot_row = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] * &inv;
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = &*x - &(&f * p);
            }
        }
    }
    det
}

/// An incrementally built subspace of `F^len`, kept in reduced echelon form
/// so that membership is a single reduction.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    spec: FieldSpec,
    len: usize,
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(spec: FieldSpec, len: usize) -> Self {
        EchelonBasis { spec, len, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    /// Residue of `v` after eliminating every pivot.
    pub fn reduce(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (x, r) in w.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = &*x - &(&f * r);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        self.reduce(v).iter().all(FieldElement::is_zero)
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[FieldElement]) -> bool {
        assert_eq!(v.len(), self.len);
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else { return false };
        let inv = w[p].inv().expect("nonzero");
        for x in w.iter_mut() {
            *x = &*x * &inv;
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&w) {
                *x = &*x - &(&f * y);
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
        true
    }

    /// Coordinates of `v` in the echelon rows, if `v` lies in the span.
    pub fn coordinates(&self, v: &[FieldElement]) -> Option<Vec<FieldElement>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn basis(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }
}

/// Column-space basis of a matrix (columns `n x r`, pivot columns of `m`).
pub fn column_space(m: &Matrix) -> Matrix {
    let r = rref(m);
    m.select_columns(&r.pivots)
}

/// Given a basis `sub` (columns) of a subspace, extends it to a basis of the
/// whole space by appending standard basis vectors in index order.
pub fn extend_to_basis(sub: &Matrix) -> Matrix {
    let spec = sub.spec();
    let n = sub.rows();
    let mut e = EchelonBasis::new(spec, n);
    let mut out = sub.clone();
    for j in 0..sub.cols() {
        e.insert(&sub.column(j).vectorize());
    }
    for i in 0..n {
        let mut v = vec![FieldElement::zero(spec); n];
        v[i] = FieldElement::one(spec);
        if e.insert(&v) {
            out = out.hstack(&Matrix::column_vector(spec, v));
        }
    }
    out
}

/// Basis (as columns) of the intersection of two column spaces.
pub fn intersect_column_spaces(a: &Matrix, b: &Matrix) -> Matrix {
    let spec = a.spec();
    let n = a.rows();
    if a.cols() == 0 || b.cols() == 0 {
        return Matrix::zeros(spec, n, 0);
    }
    // a x = b y  <=>  [a | -b] (x; y) = 0
    let stacked = a.hstack(&(-b));
    let mut cols: Option<Matrix> = None;
    for k in stacked.kernel() {
        let x = Matrix::from_fn(spec, a.cols(), 1, |i, _| k.get(i, 0).clone());
        let v = a * &x;
        cols = Some(match cols {
            None => v,
            Some(c) => c.hstack(&v),
        });
    }
    match cols {
        None => Matrix::zeros(spec, n, 0),
        Some(c) => column_space(&c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Q
    }

    #[test]
    fn rref_identity() {
        let r = rref(&Matrix::identity(q(), 3));
        assert_eq!(r.matrix, Matrix::identity(q(), 3));
        assert_eq!(r.pivots, vec![0, 1, 2]);
        assert_eq!(r.rank, 3);
    }

    #[test]
    fn rref_dependent_rows() {
        let r = rref(&Matrix::from_i64(q(), &[&[1, 2], &[2, 4]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn rref_over_f2() {
        // [[1,1],[1,0]] -> R2 += R1 gives [[1,1],[0,1]], full rank.
        let f2 = FieldSpec::prime(2);
        let r = rref(&Matrix::from_i64(f2, &[&[1, 1], &[1, 0]]));
        assert_eq!(r.rank, 2);
        assert_eq!(r.matrix, Matrix::identity(f2, 2));
    }

    #[test]
    fn solve_identity_and_zero() {
        let b = Matrix::from_i64(q(), &[&[3], &[-1]]);
        match solve_linear(&Matrix::identity(q(), 2), &b) {
            LinearSolution::Consistent { particular, kernel } => {
                assert_eq!(particular, b);
                assert!(kernel.is_empty());
            }
            LinearSolution::Inconsistent => panic!("identity system is consistent"),
        }
        assert_eq!(solve_linear(&Matrix::zeros(q(), 2, 2), &b), LinearSolution::Inconsistent);
    }

    #[test]
    fn invert_examples() {
        let d = Matrix::from_i64(q(), &[&[2, 0], &[0, 3]]);
        let expected =
            Matrix::diagonal(q(), &[FieldElement::rational(1, 2), FieldElement::rational(1, 3)]);
        assert_eq!(invert(&d).unwrap(), expected);
        let f2 = FieldSpec::prime(2);
        let u = Matrix::from_i64(f2, &[&[1, 1], &[0, 1]]);
        assert_eq!(invert(&u).unwrap(), u);
        assert_eq!(invert(&Matrix::from_i64(q(), &[&[1, 2], &[2, 4]])), Err(InvertError::Singular));
        assert_eq!(invert(&Matrix::zeros(q(), 2, 3)), Err(InvertError::NotSquare));
    }

    #[test]
    fn determinant_small() {
        let m = Matrix::from_i64(q(), &[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(determinant(&m), FieldElement::from_i64(q(), -2));
        assert!(determinant(&Matrix::from_i64(q(), &[&[0, 0], &[1, 1]])).is_zero());
    }

    #[test]
    fn echelon_membership() {
        let mut e = EchelonBasis::new(q(), 3);
        let v = |a: i64, b: i64, c: i64| vec![FieldElement::from_i64(q(), a), FieldElement::from_i64(q(), b), FieldElement::from_i64(q(), c)];
        assert!(e.insert(&v(1, 1, 0)));
        assert!(e.insert(&v(0, 1, 1)));
        assert!(!e.insert(&v(1, 2, 1)));
        assert!(e.contains(&v(1, 0, -1)));
        assert!(!e.contains(&v(0, 0, 1)));
    }

    #[test]
    fn intersection_of_planes() {
        let a = Matrix::from_i64(q(), &[&[1, 0], &[0, 1], &[0, 0]]);
        let b = Matrix::from_i64(q(), &[&[0, 0], &[1, 0], &[0, 1]]);
        let i = intersect_column_spaces(&a, &b);
        assert_eq!(i.cols(), 1);
        assert!(i.get(0, 0).is_zero() && i.get(2, 0).is_zero());
    }
}
