//! Splitting a semisimple module into irreducible summands and grouping
//! them into isotypic components.
//!
//! A summand `U` is split using its endomorphism algebra `E = End_A(U)`:
//! any non-scalar `c ∈ E` that is singular, or whose minimal polynomial has
//! a proper factor `g`, yields the proper submodule `ker g(c)`, and a
//! complement is read off an `A`-linear idempotent found by a linear solve.
//! `U` is irreducible exactly when `E` is a division algebra. Over F_q this
//! is decided: a noncommutative `E` is never a division algebra, and a
//! commutative one is a field iff `{z : z^q = z}` is one-dimensional.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{intertwiners, is_semisimple_module, restrict, MatrixTuple, ModuleError};
use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{solve_linear, LinearSolution};
use crate::matrix::Matrix;
use crate::poly::{minimal_polynomial, proper_factor, rational_roots};

pub const DEFAULT_SEED: u64 = 0x15_07;

const RANDOM_TRIES: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotypicComponent {
    pub irreducible_dim: usize,
    pub multiplicity: usize,
    /// Columns spanning the component.
    pub basis: Matrix,
    /// Column bases of the irreducible summands inside the component.
    pub summands: Vec<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotypicDecomposition {
    pub components: Vec<IsotypicComponent>,
    /// Summand bases side by side, component by component.
    pub change_of_basis: Matrix,
    pub seed: u64,
    /// False if some summand could not be proven irreducible (possible
    /// over ℚ only, where polynomials are factored partially).
    pub certified: bool,
}

impl IsotypicDecomposition {
    pub fn summands(&self) -> impl Iterator<Item = &Matrix> {
        self.components.iter().flat_map(|c| c.summands.iter())
    }

    pub fn summand_count(&self) -> usize {
        self.components.iter().map(|c| c.multiplicity).sum()
    }
}

pub fn isotypic_decomposition(t: &MatrixTuple) -> Result<IsotypicDecomposition, ModuleError> {
    isotypic_decomposition_seeded(t, DEFAULT_SEED)
}

pub fn isotypic_decomposition_seeded(t: &MatrixTuple, seed: u64) -> Result<IsotypicDecomposition, ModuleError> {
    if !is_semisimple_module(t) {
        return Err(ModuleError::NotSemisimple);
    }
    let spec = t.spec();
    let n = t.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut work = vec![Matrix::identity(spec, n)];
    let mut irreducible: Vec<Matrix> = Vec::new();
    let mut certified = true;
    while let Some(b) = work.pop() {
        let r = restrict(t.entries(), &b);
        match find_split(&r, &mut rng) {
            Split::Found(w) => {
                let c = invariant_complement(&r, &w)?;
                work.push(&b * &c);
                work.push(&b * &w);
            }
            Split::Irreducible => irreducible.push(b),
            Split::Unknown => {
                certified = false;
                irreducible.push(b);
            }
        }
    }

    let restricted: Vec<Vec<Matrix>> = irreducible.iter().map(|b| restrict(t.entries(), b)).collect();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..irreducible.len() {
        let home = groups.iter_mut().find(|g| {
            let rep = g[0];
            irreducible[rep].cols() == irreducible[i].cols() && !intertwiners(&restricted[rep], &restricted[i]).is_empty()
        });
        match home {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    let components: Vec<IsotypicComponent> = groups
        .iter()
        .map(|g| {
            let summands: Vec<Matrix> = g.iter().map(|&i| irreducible[i].clone()).collect();
            IsotypicComponent {
                irreducible_dim: summands[0].cols(),
                multiplicity: summands.len(),
                basis: hstack_all(spec, n, &summands),
                summands,
            }
        })
        .collect();
    let blocks: Vec<Matrix> = components.iter().map(|c| c.basis.clone()).collect();
    Ok(IsotypicDecomposition { change_of_basis: hstack_all(spec, n, &blocks), components, seed, certified })
}

fn hstack_all(spec: FieldSpec, rows: usize, ms: &[Matrix]) -> Matrix {
    ms.iter().fold(Matrix::zeros(spec, rows, 0), |acc, m| acc.hstack(m))
}

enum Split {
    Found(Matrix),
    Irreducible,
    Unknown,
}

fn find_split(r: &[Matrix], rng: &mut ChaCha8Rng) -> Split {
    let k = r[0].rows();
    if k == 1 {
        return Split::Irreducible;
    }
    let spec = r[0].spec();
    let e = intertwiners(r, r);
    if e.len() == 1 {
        return Split::Irreducible;
    }
    for c in &e {
        if let Some(w) = submodule_from(c) {
            return Split::Found(w);
        }
    }
    let commutative = e.iter().all(|a| e.iter().all(|b| a.commutes_with(b)));
    if let (FieldSpec::Finite { .. }, true) = (spec, commutative) {
        return berlekamp_split(&e);
    }
    let mut field_certificate = false;
    for _ in 0..RANDOM_TRIES {
        let c = e.iter().fold(Matrix::zeros(spec, k, k), |acc, b| &acc + &b.scale(&FieldElement::random(spec, rng, 5, 1)));
        if let Some(w) = submodule_from(&c) {
            return Split::Found(w);
        }
        if commutative && spec == FieldSpec::Q {
            // E = ℚ[c] is a field when the minimal polynomial has full
            // degree ≤ 3 and no rational root
            let f = minimal_polynomial(&c);
            let d = f.degree().unwrap_or(0);
            if d == e.len() && d <= 3 && rational_roots(&f).is_empty() {
                field_certificate = true;
                break;
            }
        }
    }
    match spec {
        FieldSpec::Rationals if field_certificate => Split::Irreducible,
        _ => Split::Unknown,
    }
}

/// A proper nonzero submodule (in local coordinates) from an endomorphism.
fn submodule_from(c: &Matrix) -> Option<Matrix> {
    if c.is_scalar() {
        return None;
    }
    let spec = c.spec();
    let k = c.rows();
    let kernel_of = |m: &Matrix| hstack_all(spec, k, &m.kernel());
    if !c.is_invertible() {
        return Some(kernel_of(c));
    }
    let g = proper_factor(&minimal_polynomial(c))?;
    Some(kernel_of(&g.eval_matrix(c)))
}

/// Commutative `E` over F_q: the fixed points of `z ↦ z^q` form a split
/// semisimple algebra whose dimension counts the simple factors of `E`.
fn berlekamp_split(e: &[Matrix]) -> Split {
    let spec = e[0].spec();
    let q = spec.order().expect("finite field");
    let k = e[0].rows();
    let cols = hstack_all(spec, k * k, &e.iter().map(|m| Matrix::column_vector(spec, m.vectorize())).collect::<Vec<_>>());
    let coords = |m: &Matrix| match solve_linear(&cols, &Matrix::column_vector(spec, m.vectorize())) {
        LinearSolution::Consistent { particular, .. } => particular,
        LinearSolution::Inconsistent => panic!("endomorphism algebra not closed"),
    };
    let frob: Vec<Matrix> = e.iter().map(|z| coords(&(&pow_big(z, q) - z))).collect();
    let map = hstack_all(spec, e.len(), &frob);
    let fixed = map.kernel();
    if fixed.len() <= 1 {
        return Split::Irreducible;
    }
    for v in fixed {
        let z = e.iter().zip(v.vectorize()).fold(Matrix::zeros(spec, k, k), |acc, (b, x)| &acc + &b.scale(&x));
        if z.is_scalar() {
            continue;
        }
        // eigenvalues of z lie in F_q
        for r in spec.elements() {
            let shifted = &z - &Matrix::scalar(spec, k, &r);
            let ker = shifted.kernel();
            if !ker.is_empty() && ker.len() < k {
                return Split::Found(hstack_all(spec, k, &ker));
            }
        }
    }
    Split::Unknown
}

fn pow_big(m: &Matrix, mut e: u64) -> Matrix {
    let mut base = m.clone();
    let mut acc = Matrix::identity(m.spec(), m.rows());
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// An invariant complement of the invariant subspace `w` (columns), via an
/// `A`-linear idempotent `π = w·X` with `X·w = I`.
pub(crate) fn invariant_complement(r: &[Matrix], w: &Matrix) -> Result<Matrix, ModuleError> {
    let spec = w.spec();
    let k = w.rows();
    let j = w.cols();
    let nvars = j * k;
    let var = |a: usize, c: usize| a * k + c;
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    let mut rhs: Vec<FieldElement> = Vec::new();
    for ri in r {
        let rb = ri * w;
        for row in 0..k {
            for s in 0..k {
                let mut eq = vec![FieldElement::zero(spec); nvars];
                for a in 0..j {
                    let bra = w.get(row, a);
                    if !bra.is_zero() {
                        for c in 0..k {
                            let x = ri.get(c, s);
                            if !x.is_zero() {
                                eq[var(a, c)] += &(bra * x);
                            }
                        }
                    }
                    let y = rb.get(row, a);
                    if !y.is_zero() {
                        eq[var(a, s)] -= y;
                    }
                }
                if eq.iter().any(|x| !x.is_zero()) {
                    rows.push(eq);
                    rhs.push(FieldElement::zero(spec));
                }
            }
        }
    }
    for a in 0..j {
        for b in 0..j {
            let mut eq = vec![FieldElement::zero(spec); nvars];
            for c in 0..k {
                eq[var(a, c)] = w.get(c, b).clone();
            }
            rows.push(eq);
            rhs.push(if a == b { FieldElement::one(spec) } else { FieldElement::zero(spec) });
        }
    }
    let lhs = Matrix::from_rows(spec, rows);
    let sol = solve_linear(&lhs, &Matrix::column_vector(spec, rhs));
    let x = sol.particular().ok_or(ModuleError::NotSemisimple)?;
    let x = Matrix::from_vector(spec, j, k, x.vectorize());
    let pi = w * &x;
    Ok(hstack_all(spec, k, &pi.kernel()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::is_invariant;

    fn q() -> FieldSpec {
        FieldSpec::Q
    }

    #[test]
    fn diagonal_tuple_splits_into_lines() {
        let t = MatrixTuple::from_entries(vec![
            Matrix::from_i64(q(), &[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]),
            Matrix::from_i64(q(), &[&[4, 0, 0], &[0, 4, 0], &[0, 0, 5]]),
        ])
        .unwrap();
        let d = isotypic_decomposition(&t).unwrap();
        assert_eq!(d.components.len(), 3);
        assert!(d.components.iter().all(|c| c.irreducible_dim == 1 && c.multiplicity == 1));
        assert!(d.change_of_basis.is_invertible());
        assert!(d.certified);
    }

    #[test]
    fn repeated_irreducible_is_one_component() {
        // the 90° rotation is irreducible over ℚ with End = ℚ(i)
        let rot = Matrix::from_i64(q(), &[&[0, -1], &[1, 0]]);
        let t = MatrixTuple::from_entries(vec![Matrix::block_diagonal(q(), &[rot.clone(), rot])]).unwrap();
        let d = isotypic_decomposition(&t).unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.components[0].multiplicity, 2);
        assert_eq!(d.components[0].irreducible_dim, 2);
        for s in d.summands() {
            assert!(is_invariant(t.entries(), s));
        }
    }

    #[test]
    fn finite_field_irreducible_block() {
        // companion matrix of x^2 + x + 1, irreducible over F_2
        let f2 = FieldSpec::prime(2);
        let c = Matrix::from_i64(f2, &[&[0, 1], &[1, 1]]);
        let t = MatrixTuple::from_entries(vec![Matrix::block_diagonal(f2, &[c.clone(), Matrix::identity(f2, 1), c])]).unwrap();
        let d = isotypic_decomposition(&t).unwrap();
        let mut dims: Vec<(usize, usize)> = d.components.iter().map(|c| (c.irreducible_dim, c.multiplicity)).collect();
        dims.sort();
        assert_eq!(dims, vec![(1, 1), (2, 2)]);
        assert!(d.certified);
    }

    #[test]
    fn rejects_non_semisimple() {
        let t = MatrixTuple::from_entries(vec![Matrix::from_i64(q(), &[&[1, 1], &[0, 1]])]).unwrap();
        assert_eq!(isotypic_decomposition(&t), Err(ModuleError::NotSemisimple));
    }
}
