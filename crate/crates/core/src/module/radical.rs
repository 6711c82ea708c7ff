//! Jacobson radical of a matrix algebra given by a basis.
//!
//! Over ℚ the radical is the kernel of the trace form. Over F_p the plain
//! trace form is too weak once `p ≤ n`, so the layered forms
//! `g_i(a) = Tr(ã^{p^i}) / p^i mod p` are used, with `ã` an integer lift:
//! `I_{-1} = A`, `I_i = {a ∈ I_{i-1} : g_i(ab) = 0 for all b ∈ A}`, and
//! `I_l` is the radical for `l = ⌊log_p n⌋`. Over F_{p^k} the algebra is
//! first viewed as an F_p-algebra of `nk × nk` matrices.

use crate::field::{FieldElement, FieldSpec};
use crate::linalg::EchelonBasis;
use crate::matrix::Matrix;

/// Radical of the algebra with the given basis (which must span a unital
/// subalgebra), as a basis of matrices.
pub fn radical_of_span(basis: &[Matrix]) -> Vec<Matrix> {
    let Some(first) = basis.first() else { return vec![] };
    let spec = first.spec();
    match spec {
        FieldSpec::Rationals => trace_form_radical(basis),
        FieldSpec::Finite { p, k: 1 } => layered_radical(basis, p),
        FieldSpec::Finite { p, k } => {
            let fp = FieldSpec::prime(p);
            let alpha = spec.generator();
            let mut scaled = Vec::with_capacity(basis.len() * k as usize);
            for b in basis {
                let mut c = FieldElement::one(spec);
                for _ in 0..k {
                    scaled.push(b.scale(&c));
                    c = &c * &alpha;
                }
            }
            let over_fp: Vec<Matrix> = scaled.iter().map(|m| restrict_scalars(m, fp)).collect();
            let rad = layered_coordinates(&over_fp, p);
            let mut e = EchelonBasis::new(spec, first.rows() * first.cols());
            let mut out = Vec::new();
            for coords in rad {
                let mut m = Matrix::zeros(spec, first.rows(), first.cols());
                for (c, s) in coords.iter().zip(&scaled) {
                    let lift = c.prime_field_lift().expect("prime field");
                    if lift != 0 {
                        m = &m + &s.scale(&FieldElement::from_i64(spec, lift as i64));
                    }
                }
                if e.insert(&m.vectorize()) {
                    out.push(m);
                }
            }
            out
        }
    }
}

/// Matrix of multiplication by `c ∈ F_{p^k}` on the basis `1, x, .., x^{k-1}`.
fn multiplication_matrix(c: &FieldElement, fp: FieldSpec) -> Matrix {
    let spec = c.spec();
    let k = spec.degree() as usize;
    let x = spec.generator();
    let mut basis_elt = FieldElement::one(spec);
    let mut cols = Vec::with_capacity(k);
    for _ in 0..k {
        let prod = c * &basis_elt;
        cols.push(prod.as_gf().expect("finite").coefficients());
        basis_elt = &basis_elt * &x;
    }
    Matrix::from_fn(fp, k, k, |i, j| FieldElement::from_i64(fp, cols[j][i] as i64))
}

fn restrict_scalars(m: &Matrix, fp: FieldSpec) -> Matrix {
    let k = m.spec().degree() as usize;
    let blocks: Vec<Vec<Matrix>> =
        (0..m.rows()).map(|r| (0..m.cols()).map(|s| multiplication_matrix(m.get(r, s), fp)).collect()).collect();
    Matrix::from_fn(fp, m.rows() * k, m.cols() * k, |i, j| blocks[i / k][j / k].get(i % k, j % k).clone())
}

fn trace_form_radical(basis: &[Matrix]) -> Vec<Matrix> {
    let spec = basis[0].spec();
    let d = basis.len();
    let gram = Matrix::from_fn(spec, d, d, |i, j| (&basis[i] * &basis[j]).trace());
    combine(basis, gram.kernel().iter().map(|v| v.vectorize()).collect())
}

fn combine(basis: &[Matrix], coords: Vec<Vec<FieldElement>>) -> Vec<Matrix> {
    let b0 = &basis[0];
    coords
        .into_iter()
        .map(|c| {
            c.iter().zip(basis).fold(Matrix::zeros(b0.spec(), b0.rows(), b0.cols()), |acc, (x, b)| {
                if x.is_zero() {
                    acc
                } else {
                    &acc + &b.scale(x)
                }
            })
        })
        .collect()
}

fn layered_radical(basis: &[Matrix], p: u32) -> Vec<Matrix> {
    let coords = layered_coordinates(basis, p);
    combine(basis, coords)
}

/// Coordinates (relative to `basis`) of a basis of the radical over F_p.
fn layered_coordinates(basis: &[Matrix], p: u32) -> Vec<Vec<FieldElement>> {
    let spec = basis[0].spec();
    let n = basis[0].rows();
    let d = basis.len();
    let mut layers = 0u32;
    while (p as usize).pow(layers + 1) <= n {
        layers += 1;
    }
    let lifted: Vec<Vec<Vec<u64>>> = basis.iter().map(lift).collect();
    // current ideal: coordinate vectors over the algebra basis
    let mut ideal: Vec<Vec<FieldElement>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { FieldElement::one(spec) } else { FieldElement::zero(spec) }).collect())
        .collect();
    for i in 0..=layers {
        if ideal.is_empty() {
            break;
        }
        let elems: Vec<Vec<Vec<u64>>> = ideal.iter().map(|c| combine_lifted(c, &lifted, p)).collect();
        // form[j][r] = g_i(elems[r] * b_j)
        let form = Matrix::from_fn(spec, d, ideal.len(), |j, r| {
            let prod = mat_mul_mod(&elems[r], &lifted[j], p as u64);
            FieldElement::from_i64(spec, layer_form(&prod, p, i) as i64)
        });
        let next: Vec<Vec<FieldElement>> = form
            .kernel()
            .iter()
            .map(|k| {
                let mut v = vec![FieldElement::zero(spec); d];
                for (r, c) in ideal.iter().enumerate() {
                    let s = k.get(r, 0);
                    if s.is_zero() {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(c) {
                        *x += &(s * y);
                    }
                }
                v
            })
            .collect();
        ideal = next;
    }
    ideal
}

fn lift(m: &Matrix) -> Vec<Vec<u64>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).prime_field_lift().expect("prime field") as u64).collect()).collect()
}

fn combine_lifted(c: &[FieldElement], lifted: &[Vec<Vec<u64>>], p: u32) -> Vec<Vec<u64>> {
    let n = lifted[0].len();
    let mut out = vec![vec![0u64; n]; n];
    for (x, m) in c.iter().zip(lifted) {
        let s = x.prime_field_lift().expect("prime field") as u64;
        if s == 0 {
            continue;
        }
        for (orow, mrow) in out.iter_mut().zip(m) {
            for (o, e) in orow.iter_mut().zip(mrow) {
                *o = (*o + s * e) % p as u64;
            }
        }
    }
    out
}

fn mat_mul_mod(a: &[Vec<u64>], b: &[Vec<u64>], m: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut out = vec![vec![0u64; n]; n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i][k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = (out[i][j] + x * b[k][j]) % m;
            }
        }
    }
    out
}

/// `Tr(a^{p^i}) / p^i mod p`, computed with the entries of `a` (already in
/// `[0, p)`) as integers modulo `p^{i+1}`.
fn layer_form(a: &[Vec<u64>], p: u32, i: u32) -> u64 {
    let p = p as u64;
    let modulus = p.pow(i + 1);
    let mut acc = a.to_vec();
    for _ in 0..i {
        // acc ← acc^p
        let base = acc.clone();
        for _ in 1..p {
            acc = mat_mul_mod(&acc, &base, modulus);
        }
    }
    let tr = (0..acc.len()).fold(0, |s, j| (s + acc[j][j]) % modulus);
    let scale = p.pow(i);
    debug_assert_eq!(tr % scale, 0, "layer form not divisible");
    (tr / scale) % p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{span_algebra, MatrixTuple};

    #[test]
    fn unipotent_over_f2_has_radical() {
        let f2 = FieldSpec::prime(2);
        let j = MatrixTuple::from_entries(vec![Matrix::from_i64(f2, &[&[1, 1], &[0, 1]])]).unwrap();
        let a = span_algebra(&j);
        assert_eq!(radical_of_span(a.basis()).len(), 1);
    }

    #[test]
    fn full_matrix_algebra_in_small_characteristic() {
        // M_2(F_2) is simple although the trace form on it is degenerate
        let f2 = FieldSpec::prime(2);
        let t = MatrixTuple::from_entries(vec![Matrix::unit(f2, 2, 0, 1), Matrix::unit(f2, 2, 1, 0)]).unwrap();
        let a = span_algebra(&t);
        assert_eq!(a.dim(), 4);
        assert!(radical_of_span(a.basis()).is_empty());
        let f4 = FieldSpec::finite(2, 2).unwrap();
        let t4 = t.embed(f4).unwrap();
        assert!(radical_of_span(span_algebra(&t4).basis()).is_empty());
    }

    #[test]
    fn extension_field_radical() {
        let f4 = FieldSpec::finite(2, 2).unwrap();
        let w = f4.generator();
        let one = FieldElement::one(f4);
        let zero = FieldElement::zero(f4);
        let m = Matrix::from_rows(f4, vec![vec![w.clone(), one.clone()], vec![zero, w]]);
        let a = span_algebra(&MatrixTuple::from_entries(vec![m]).unwrap());
        let r = radical_of_span(a.basis());
        assert_eq!(r.len(), 1);
        assert!(r[0].pow(2).is_zero());
    }
}
