//! Exhaustive submodule enumeration over tiny finite fields.

use super::{ModuleError, MatrixTuple};
use crate::field::{FieldElement, FieldSpec};
use crate::linalg::EchelonBasis;
use crate::matrix::Matrix;

const MAX_ORDER: u64 = 4;
const MAX_DIM: usize = 4;

/// Every subspace of `F_q^n` in reduced row echelon form, as row bases.
fn all_subspaces(spec: FieldSpec, n: usize) -> Vec<Vec<Vec<FieldElement>>> {
    let elems: Vec<FieldElement> = spec.elements().collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let pivots: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        // free slots: row r, column c > pivot r, c not a pivot
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| (pc + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let q = elems.len();
        let total = q.pow(free.len() as u32);
        for code in 0..total {
            let mut rows = vec![vec![FieldElement::zero(spec); n]; pivots.len()];
            for (r, &pc) in pivots.iter().enumerate() {
                rows[r][pc] = FieldElement::one(spec);
            }
            let mut x = code;
            for &(r, c) in &free {
                rows[r][c] = elems[x % q].clone();
                x /= q;
            }
            out.push(rows);
        }
    }
    out
}

fn apply(g: &Matrix, v: &[FieldElement]) -> Vec<FieldElement> {
    (0..g.rows())
        .map(|i| v.iter().enumerate().fold(FieldElement::zero(g.spec()), |acc, (j, x)| &acc + &(g.get(i, j) * x)))
        .collect()
}

fn check_range(t: &MatrixTuple) -> Result<(), ModuleError> {
    let order = t.spec().order().unwrap_or(u64::MAX);
    if order > MAX_ORDER {
        return Err(ModuleError::BruteForceRange(format!("field {} has more than {MAX_ORDER} elements", t.spec())));
    }
    if t.dim() > MAX_DIM {
        return Err(ModuleError::BruteForceRange(format!("dimension {} exceeds {MAX_DIM}", t.dim())));
    }
    Ok(())
}

/// All invariant subspaces, as row bases, by exhaustive enumeration.
pub fn invariant_subspaces(t: &MatrixTuple) -> Result<Vec<Vec<Vec<FieldElement>>>, ModuleError> {
    check_range(t)?;
    let n = t.dim();
    Ok(all_subspaces(t.spec(), n)
        .into_iter()
        .filter(|rows| {
            let mut e = EchelonBasis::new(t.spec(), n);
            for r in rows {
                e.insert(r);
            }
            t.entries().iter().all(|g| rows.iter().all(|r| e.contains(&apply(g, r))))
        })
        .collect())
}

/// True iff every invariant subspace has an invariant complement, decided
/// by enumerating all subspaces of `F_q^n` (`q ≤ 4`, `n ≤ 4`).
pub fn brute_force_semisimple(t: &MatrixTuple) -> Result<bool, ModuleError> {
    let n = t.dim();
    let spec = t.spec();
    let inv = invariant_subspaces(t)?;
    Ok(inv.iter().all(|u| {
        inv.iter().any(|w| {
            if u.len() + w.len() != n {
                return false;
            }
            let mut e = EchelonBasis::new(spec, n);
            u.iter().chain(w).all(|r| e.insert(r))
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_counts() {
        // Gaussian binomials: F_2^3 has 1 + 7 + 7 + 1 subspaces
        assert_eq!(all_subspaces(FieldSpec::prime(2), 3).len(), 16);
        assert_eq!(all_subspaces(FieldSpec::prime(3), 2).len(), 6);
    }

    #[test]
    fn identity_is_semisimple() {
        let t = MatrixTuple::from_entries(vec![Matrix::identity(FieldSpec::prime(2), 2)]).unwrap();
        assert!(brute_force_semisimple(&t).unwrap());
    }

    #[test]
    fn jordan_block_is_not() {
        let t = MatrixTuple::from_entries(vec![Matrix::from_i64(FieldSpec::prime(3), &[&[1, 1], &[0, 1]])]).unwrap();
        assert!(!brute_force_semisimple(&t).unwrap());
    }

    #[test]
    fn range_is_enforced() {
        let t = MatrixTuple::from_entries(vec![Matrix::identity(FieldSpec::prime(5), 2)]).unwrap();
        assert!(matches!(brute_force_semisimple(&t), Err(ModuleError::BruteForceRange(_))));
        let q = MatrixTuple::from_entries(vec![Matrix::identity(FieldSpec::Q, 2)]).unwrap();
        assert!(brute_force_semisimple(&q).is_err());
    }
}
