//! Dense matrices over a single [`FieldSpec`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::field::{embed_extension, FieldElement, FieldError, FieldSpec};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(spec: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { spec, rows, cols, data: vec![FieldElement::zero(spec); rows * cols] }
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(spec, n, n);
        for i in 0..n {
            m.data[i * n + i] = FieldElement::one(spec);
        }
        m
    }

    pub fn scalar(spec: FieldSpec, n: usize, c: &FieldElement) -> Self {
        let mut m = Self::zeros(spec, n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    /// Panics on ragged input or entries from a different field.
    pub fn from_rows(spec: FieldSpec, rows: Vec<Vec<FieldElement>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            for e in row {
                assert_eq!(e.spec(), spec, "entry field differs from matrix field");
                data.push(e);
            }
        }
        Matrix { spec, rows: r, cols: c, data }
    }

    pub fn from_fn(spec: FieldSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FieldElement) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { spec, rows, cols, data }
    }

    /// Integer entries mapped into `spec`.
    pub fn from_i64(spec: FieldSpec, rows: &[&[i64]]) -> Self {
        let r: Vec<Vec<FieldElement>> =
            rows.iter().map(|row| row.iter().map(|&x| FieldElement::from_i64(spec, x)).collect()).collect();
        Self::from_rows(spec, r)
    }

    pub fn column_vector(spec: FieldSpec, entries: Vec<FieldElement>) -> Self {
        let n = entries.len();
        Matrix { spec, rows: n, cols: 1, data: entries }
    }

    pub fn diagonal(spec: FieldSpec, entries: &[FieldElement]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(spec, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    /// Elementary matrix `E_{ij}`.
    pub fn unit(spec: FieldSpec, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(spec, n, n);
        m.data[i * n + j] = FieldElement::one(spec);
        m
    }

    pub fn random<R: Rng + ?Sized>(spec: FieldSpec, rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(spec, rows, cols, |_, _| FieldElement::random(spec, rng, 3, 1))
    }

    /// Rejection-samples an invertible matrix.
    pub fn random_invertible<R: Rng + ?Sized>(spec: FieldSpec, n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(spec, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        assert_eq!(v.spec(), self.spec, "entry field differs from matrix field");
        self.data[i * self.cols + j] = v;
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Matrix {
        Matrix::from_fn(self.spec, self.rows, 1, |i, _| self.get(i, j).clone())
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.spec, self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Entries read row by row as one vector.
    pub fn vectorize(&self) -> Vec<FieldElement> {
        self.data.clone()
    }

    pub fn from_vector(spec: FieldSpec, rows: usize, cols: usize, v: Vec<FieldElement>) -> Self {
        assert_eq!(v.len(), rows * cols);
        Matrix { spec, rows, cols, data: v }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.spec, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// A scalar multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.is_square() && self.is_diagonal() && (1..self.rows).all(|i| self.get(i, i) == self.get(0, 0))
    }

    pub fn trace(&self) -> FieldElement {
        let mut t = FieldElement::zero(self.spec);
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    pub fn scale(&self, c: &FieldElement) -> Matrix {
        Matrix { spec: self.spec, rows: self.rows, cols: self.cols, data: self.data.iter().map(|e| e * c).collect() }
    }

    pub fn pow(&self, e: u32) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.spec, self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        &(self * other) - &(other * self)
    }

    pub fn commutes_with(&self, other: &Matrix) -> bool {
        self * other == other * self
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.spec, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { spec: self.spec, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diagonal(spec: FieldSpec, blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(spec, n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.data[(r0 + i) * m + c0 + j] = b.get(i, j).clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Entry-wise image under the canonical field embedding.
    pub fn embed(&self, target: FieldSpec) -> Result<Matrix, FieldError> {
        if target == self.spec {
            return Ok(self.clone());
        }
        let data = self.data.iter().map(|e| embed_extension(e, target)).collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix { spec: target, rows: self.rows, cols: self.cols, data })
    }

    /// `g * self * g^{-1}` given `g` and its inverse.
    pub fn conjugate_by(&self, g: &Matrix, g_inv: &Matrix) -> Matrix {
        &(g * self) * g_inv
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>[", self.spec)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| format!("{e:>6}")).collect();
            writeln!(f, "[{} ]", row.join(""))?;
        }
        Ok(())
    }
}

impl Mul<&Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        assert_eq!(self.spec, o.spec, "field mismatch in product");
        let mut out = Matrix::zeros(self.spec, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }
}

impl Add<&Matrix> for &Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "dimension mismatch in sum");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        Matrix { spec: self.spec, rows: self.rows, cols: self.cols, data }
    }
}

impl Sub<&Matrix> for &Matrix {
    type Output = Matrix;
    fn sub(self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "dimension mismatch in difference");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        Matrix { spec: self.spec, rows: self.rows, cols: self.cols, data }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { spec: self.spec, rows: self.rows, cols: self.cols, data: self.data.iter().map(|e| -e).collect() }
    }
}

macro_rules! forward_owned_matrix {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Matrix> for Matrix {
            type Output = Matrix;
            fn $m(self, o: Matrix) -> Matrix { (&self).$m(&o) }
        }
        impl $tr<&Matrix> for Matrix {
            type Output = Matrix;
            fn $m(self, o: &Matrix) -> Matrix { (&self).$m(o) }
        }
        impl $tr<Matrix> for &Matrix {
            type Output = Matrix;
            fn $m(self, o: Matrix) -> Matrix { self.$m(&o) }
        }
    )*};
}
forward_owned_matrix!(Add add, Sub sub, Mul mul);

/// Wire form of a field: `{"kind":"Q"}` or `{"kind":"Fq","p":2,"k":2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldJson {
    Q,
    Fq { p: u32, k: u32 },
}

impl From<FieldSpec> for FieldJson {
    fn from(s: FieldSpec) -> Self {
        match s {
            FieldSpec::Rationals => FieldJson::Q,
            FieldSpec::Finite { p, k } => FieldJson::Fq { p, k },
        }
    }
}

impl TryFrom<FieldJson> for FieldSpec {
    type Error = FieldError;
    fn try_from(f: FieldJson) -> Result<Self, FieldError> {
        match f {
            FieldJson::Q => Ok(FieldSpec::Rationals),
            FieldJson::Fq { p, k } => FieldSpec::finite(p, k),
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FieldJson::from(*self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let f = FieldJson::deserialize(d)?;
        FieldSpec::try_from(f).map_err(D::Error::custom)
    }
}

/// Serializes one element: rationals as `"a/b"` strings, finite-field
/// elements as coefficient arrays `[c0, c1, ..]`.
pub fn element_to_json(e: &FieldElement) -> serde_json::Value {
    match e.as_gf() {
        Some(g) => serde_json::Value::from(g.coefficients()),
        None => serde_json::Value::String(e.to_string()),
    }
}

/// Accepts the forms written by [`element_to_json`], plus `"[c0,..]"`
/// strings and bare integers.
pub fn element_from_json(spec: FieldSpec, v: &serde_json::Value) -> Result<FieldElement, FieldError> {
    let bad = || FieldError::Parse { spec, text: v.to_string() };
    match v {
        serde_json::Value::String(s) => FieldElement::parse(spec, s),
        serde_json::Value::Number(n) => FieldElement::parse(spec, &n.to_string()),
        serde_json::Value::Array(cs) if spec.is_finite() => {
            let text: Vec<String> = cs.iter().map(|c| c.as_i64().map(|x| x.to_string()).ok_or_else(bad)).collect::<Result<_, _>>()?;
            FieldElement::parse(spec, &format!("[{}]", text.join(",")))
        }
        _ => Err(bad()),
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<serde_json::Value>>,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries = (0..self.rows).map(|i| self.row(i).iter().map(element_to_json).collect()).collect();
        MatrixJson { field: self.spec, rows: self.rows, cols: self.cols, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        if j.entries.len() != j.rows || j.entries.iter().any(|r| r.len() != j.cols) {
            return Err(D::Error::custom(format!("entries do not match declared shape {}x{}", j.rows, j.cols)));
        }
        let mut data = Vec::with_capacity(j.rows * j.cols);
        for row in &j.entries {
            for v in row {
                data.push(element_from_json(j.field, v).map_err(D::Error::custom)?);
            }
        }
        Ok(Matrix { spec: j.field, rows: j.rows, cols: j.cols, data })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let m = Matrix::from_rows(
            FieldSpec::Q,
            vec![vec![FieldElement::rational(1, 2), FieldElement::from_i64(FieldSpec::Q, 3)]],
        );
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(v["field"]["kind"], "Q");
        assert_eq!(v["entries"][0][0], "1/2");
        let back: Matrix = serde_json::from_value(v).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn json_finite_field() {
        let f4 = FieldSpec::finite(2, 2).unwrap();
        let text = r#"{"field":{"kind":"Fq","p":2,"k":2},"rows":1,"cols":2,"entries":[[[0,1],"[1,1]"]]}"#;
        let m: Matrix = serde_json::from_str(text).unwrap();
        assert_eq!(m.get(0, 0), &f4.generator());
        let out = serde_json::to_string(&m).unwrap();
        assert!(out.contains("[[[0,1],[1,1]]]"), "{out}");
    }

    #[test]
    fn json_rejects_bad_shape() {
        let text = r#"{"field":{"kind":"Q"},"rows":2,"cols":1,"entries":[["1"]]}"#;
        assert!(serde_json::from_str::<Matrix>(text).is_err());
    }

    #[test]
    fn block_diagonal_and_stack() {
        let q = FieldSpec::Q;
        let a = Matrix::from_i64(q, &[&[1, 2], &[3, 4]]);
        let b = Matrix::from_i64(q, &[&[5]]);
        let d = Matrix::block_diagonal(q, &[a.clone(), b]);
        assert_eq!(d, Matrix::from_i64(q, &[&[1, 2, 0], &[3, 4, 0], &[0, 0, 5]]));
        assert_eq!(a.hstack(&a).cols(), 4);
        assert_eq!(a.vstack(&a).rows(), 4);
    }
}
