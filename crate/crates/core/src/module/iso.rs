//! Module isomorphism, i.e. simultaneous conjugacy of tuples.
//!
//! The intertwiners `{P : P·s_i = t_i·P}` form a linear space with basis
//! `P_1..P_d`, and the tuples are conjugate iff some combination is
//! invertible. Cheap invariants are checked first, then a deterministic
//! sweep and seeded random combinations. If those find nothing, the
//! determinant of `Σ x_j P_j` is expanded symbolically: zero certifies
//! non-isomorphism, and otherwise the variables are fixed one at a time so
//! that the polynomial stays nonzero. Over F_q the polynomial is first
//! reduced modulo `x^q − x` so that a nonzero reduced polynomial always has
//! a nonvanishing point in the base field.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{intertwiners, span_algebra, MatrixTuple, ModuleError};
use crate::field::{FieldElement, FieldSpec};
use crate::matrix::Matrix;

const RANDOM_TRIES: usize = 24;
const SEED: u64 = 0x1503;
const TERM_BUDGET: usize = 400_000;
const MAX_SYMBOLIC_DIM: usize = 16;

/// Why two tuples are not simultaneously conjugate. Each variant is a
/// complete proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NonIsomorphismProof {
    /// The spanned algebras have different dimensions.
    AlgebraDimension { left: usize, right: usize },
    /// The same word has different ranks on the two sides.
    WordRank { word: Vec<usize>, left: usize, right: usize },
    /// One module is semisimple and the other is not.
    Semisimplicity { left: bool, right: bool },
    /// `dim Hom(s, t)` differs from `dim End(s)` or `dim End(t)`.
    HomDimension { hom: usize, end_left: usize, end_right: usize },
    /// `det(Σ x_j P_j)` is the zero polynomial.
    DeterminantVanishes { hom: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoOutcome {
    /// `P` invertible with `P·s_i·P⁻¹ = t_i`.
    Isomorphic(Matrix),
    NotIsomorphic(NonIsomorphismProof),
}

impl IsoOutcome {
    pub fn witness(&self) -> Option<&Matrix> {
        match self {
            IsoOutcome::Isomorphic(p) => Some(p),
            IsoOutcome::NotIsomorphic(_) => None,
        }
    }

    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic(_))
    }
}

fn word_value(t: &MatrixTuple, w: &[usize]) -> Matrix {
    w.iter().fold(Matrix::identity(t.spec(), t.dim()), |acc, &i| &acc * &t.entries()[i])
}

fn combination(basis: &[Matrix], c: &[FieldElement]) -> Matrix {
    let b0 = &basis[0];
    basis
        .iter()
        .zip(c)
        .filter(|(_, x)| !x.is_zero())
        .fold(Matrix::zeros(b0.spec(), b0.rows(), b0.cols()), |acc, (b, x)| &acc + &b.scale(x))
}

pub fn modules_isomorphic(s: &MatrixTuple, t: &MatrixTuple) -> Result<IsoOutcome, ModuleError> {
    if s.len() != t.len() || s.dim() != t.dim() {
        return Err(ModuleError::Incomparable);
    }
    if s.spec() != t.spec() {
        return Err(ModuleError::FieldMismatch(s.spec(), t.spec()));
    }
    let spec = s.spec();
    let n = s.dim();
    if s.entries() == t.entries() {
        return Ok(IsoOutcome::Isomorphic(Matrix::identity(spec, n)));
    }

    let (sa, ta) = (span_algebra(s), span_algebra(t));
    if sa.dim() != ta.dim() {
        return Ok(IsoOutcome::NotIsomorphic(NonIsomorphismProof::AlgebraDimension { left: sa.dim(), right: ta.dim() }));
    }
    for w in sa.words().iter().chain(ta.words()) {
        let (l, r) = (word_value(s, w).rank(), word_value(t, w).rank());
        if l != r {
            return Ok(IsoOutcome::NotIsomorphic(NonIsomorphismProof::WordRank { word: w.clone(), left: l, right: r }));
        }
    }
    let hom = intertwiners(s.entries(), t.entries());
    let end_s = intertwiners(s.entries(), s.entries()).len();
    let end_t = intertwiners(t.entries(), t.entries()).len();
    if hom.len() != end_s || hom.len() != end_t {
        return Ok(IsoOutcome::NotIsomorphic(NonIsomorphismProof::HomDimension { hom: hom.len(), end_left: end_s, end_right: end_t }));
    }
    let (ls, lt) = (sa.radical().is_empty(), ta.radical().is_empty());
    if ls != lt {
        return Ok(IsoOutcome::NotIsomorphic(NonIsomorphismProof::Semisimplicity { left: ls, right: lt }));
    }

    // deterministic sweep: single basis elements, then their sum
    for p in hom.iter() {
        if p.is_invertible() {
            return Ok(IsoOutcome::Isomorphic(p.clone()));
        }
    }
    let all_ones = vec![FieldElement::one(spec); hom.len()];
    let sum = combination(&hom, &all_ones);
    if sum.is_invertible() {
        return Ok(IsoOutcome::Isomorphic(sum));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let range = n as i64 + 2;
    for _ in 0..RANDOM_TRIES {
        let c: Vec<FieldElement> = (0..hom.len()).map(|_| FieldElement::random(spec, &mut rng, range, 1)).collect();
        let p = combination(&hom, &c);
        if p.is_invertible() {
            return Ok(IsoOutcome::Isomorphic(p));
        }
    }

    // exact fallback
    let mut det = symbolic_determinant(&hom)?;
    if let Some(q) = spec.order() {
        det = reduce_frobenius(det, q);
    }
    if det.is_empty() {
        return Ok(IsoOutcome::NotIsomorphic(NonIsomorphismProof::DeterminantVanishes { hom: hom.len() }));
    }
    let candidates: Vec<FieldElement> = match spec {
        FieldSpec::Rationals => (0..=n as i64).map(|i| FieldElement::from_i64(spec, i)).collect(),
        FieldSpec::Finite { .. } => spec.elements().collect(),
    };
    let mut values = Vec::with_capacity(hom.len());
    for v in 0..hom.len() {
        let c = candidates
            .iter()
            .find_map(|c| {
                let sub = substitute(&det, v, c);
                (!sub.is_empty()).then(|| (c.clone(), sub))
            })
            .expect("a nonzero reduced polynomial has a nonvanishing point");
        values.push(c.0);
        det = c.1;
    }
    let p = combination(&hom, &values);
    debug_assert!(p.is_invertible());
    Ok(IsoOutcome::Isomorphic(p))
}

/// Sparse polynomial: exponent vector ↦ nonzero coefficient.
type Sparse = BTreeMap<Vec<u16>, FieldElement>;

fn add_term(p: &mut Sparse, e: Vec<u16>, c: FieldElement) {
    if c.is_zero() {
        return;
    }
    match p.get_mut(&e) {
        Some(x) => {
            *x += &c;
            if x.is_zero() {
                p.remove(&e);
            }
        }
        None => {
            p.insert(e, c);
        }
    }
}

/// `det(Σ x_j P_j)` by Laplace expansion over column subsets.
fn symbolic_determinant(basis: &[Matrix]) -> Result<Sparse, ModuleError> {
    let n = basis[0].rows();
    if n > MAX_SYMBOLIC_DIM {
        return Err(ModuleError::Budget(format!("symbolic determinant of size {n}")));
    }
    let d = basis.len();
    let spec = basis[0].spec();
    let mut table: Vec<Option<Sparse>> = vec![None; 1 << n];
    let mut unit = Sparse::new();
    unit.insert(vec![0; d], FieldElement::one(spec));
    table[0] = Some(unit);
    for k in 1..=n {
        for mask in (1usize..(1 << n)).filter(|m| m.count_ones() as usize == k) {
            let row = k - 1;
            let mut acc = Sparse::new();
            for j in 0..n {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let rest = table[mask ^ (1 << j)].as_ref().expect("previous layer");
                if rest.is_empty() {
                    continue;
                }
                let negative = (mask >> (j + 1)).count_ones() % 2 == 1;
                for (v, b) in basis.iter().enumerate() {
                    let e = b.get(row, j);
                    if e.is_zero() {
                        continue;
                    }
                    let coef = if negative { -e } else { e.clone() };
                    for (exp, c) in rest {
                        let mut ex = exp.clone();
                        ex[v] += 1;
                        add_term(&mut acc, ex, &coef * c);
                    }
                }
                if acc.len() > TERM_BUDGET {
                    return Err(ModuleError::Budget(format!("more than {TERM_BUDGET} determinant terms")));
                }
            }
            table[mask] = Some(acc);
        }
        for (m, slot) in table.iter_mut().enumerate() {
            if m.count_ones() as usize == k - 1 {
                *slot = None;
            }
        }
    }
    Ok(table[(1 << n) - 1].take().expect("full mask"))
}

/// Reduces every exponent `e ≥ 1` to `1 + (e − 1) mod (q − 1)`, which keeps
/// the polynomial function on F_q unchanged.
fn reduce_frobenius(p: Sparse, q: u64) -> Sparse {
    let mut out = Sparse::new();
    for (e, c) in p {
        let r: Vec<u16> = e.iter().map(|&x| if x == 0 { 0 } else { 1 + ((x as u64 - 1) % (q - 1)) as u16 }).collect();
        add_term(&mut out, r, c);
    }
    out
}

fn substitute(p: &Sparse, v: usize, c: &FieldElement) -> Sparse {
    let mut out = Sparse::new();
    for (e, x) in p {
        let mut ex = e.clone();
        let k = ex[v];
        ex[v] = 0;
        add_term(&mut out, ex, x * &c.pow(k as i64));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Q
    }

    #[test]
    fn identical_tuples_give_identity() {
        let s = MatrixTuple::from_entries(vec![Matrix::from_i64(q(), &[&[1, 2], &[3, 4]])]).unwrap();
        let out = modules_isomorphic(&s, &s).unwrap();
        assert!(out.witness().unwrap().is_identity());
    }

    #[test]
    fn gl2_tuple_not_conjugate_to_limit() {
        let x = MatrixTuple::from_entries(vec![Matrix::from_i64(q(), &[&[1, 0], &[0, 2]]), Matrix::from_i64(q(), &[&[1, 1], &[0, 1]])])
            .unwrap();
        let lim = MatrixTuple::from_entries(vec![Matrix::from_i64(q(), &[&[1, 0], &[0, 2]]), Matrix::identity(q(), 2)]).unwrap();
        assert!(!modules_isomorphic(&x, &lim).unwrap().is_isomorphic());
    }

    #[test]
    fn symbolic_determinant_of_identity_pencil() {
        // det(x0 I + x1 E_12) = x0^2
        let basis = vec![Matrix::identity(q(), 2), Matrix::unit(q(), 2, 0, 1)];
        let det = symbolic_determinant(&basis).unwrap();
        assert_eq!(det.len(), 1);
        assert_eq!(det.keys().next().unwrap(), &vec![2, 0]);
    }

    #[test]
    fn frobenius_reduction_can_vanish() {
        // x^2 - x over F_2 is zero as a function
        let f2 = FieldSpec::prime(2);
        let mut p = Sparse::new();
        p.insert(vec![2], FieldElement::one(f2));
        p.insert(vec![1], FieldElement::one(f2));
        assert!(reduce_frobenius(p, 2).is_empty());
    }

    #[test]
    fn exact_fallback_finds_base_field_point() {
        // intertwiners of two identity tuples over F_2: all of M_2, and the
        // witness must be invertible over F_2 itself
        let f2 = FieldSpec::prime(2);
        let hom: Vec<Matrix> = (0..2).flat_map(|i| (0..2).map(move |j| Matrix::unit(f2, 2, i, j))).collect();
        let det = reduce_frobenius(symbolic_determinant(&hom).unwrap(), 2);
        assert!(!det.is_empty());
    }
}
