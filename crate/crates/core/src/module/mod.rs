//! Matrix tuples as modules over the algebra they span: radicals,
//! semisimplicity, isomorphism and decomposition into irreducibles.

mod brute;
mod decompose;
mod iso;
mod radical;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cochar::{ActionInstance, DetConstraint, Point};
use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::linalg::{solve_linear, EchelonBasis, LinearSolution};
use crate::matrix::Matrix;

pub use brute::{brute_force_semisimple, invariant_subspaces};
pub use decompose::{
    isotypic_decomposition, isotypic_decomposition_seeded, IsotypicComponent, IsotypicDecomposition, DEFAULT_SEED,
};
pub(crate) use decompose::invariant_complement;
pub use iso::{modules_isomorphic, IsoOutcome, NonIsomorphismProof};
pub use radical::radical_of_span;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("empty tuple")]
    EmptyTuple,
    #[error("tuple entries must all be {expected}x{expected}, found {rows}x{cols}")]
    Shape { expected: usize, rows: usize, cols: usize },
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("tuples differ in length or dimension")]
    Incomparable,
    #[error("module is not semisimple")]
    NotSemisimple,
    #[error("brute force unsupported: {0}")]
    BruteForceRange(String),
    #[error("search budget exceeded: {0}")]
    Budget(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An ordered tuple of square matrices of one size over one field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TupleJson", into = "TupleJson")]
pub struct MatrixTuple {
    entries: Vec<Matrix>,
    det_constraint: Option<DetConstraint>,
}

#[derive(Serialize, Deserialize)]
struct TupleJson {
    entries: Vec<Matrix>,
    #[serde(default)]
    det_constraint: Option<DetConstraint>,
}

impl TryFrom<TupleJson> for MatrixTuple {
    type Error = ModuleError;
    fn try_from(j: TupleJson) -> Result<Self, ModuleError> {
        MatrixTuple::new(j.entries, j.det_constraint)
    }
}

impl From<MatrixTuple> for TupleJson {
    fn from(t: MatrixTuple) -> Self {
        TupleJson { entries: t.entries, det_constraint: t.det_constraint }
    }
}

impl MatrixTuple {
    pub fn new(entries: Vec<Matrix>, det_constraint: Option<DetConstraint>) -> Result<Self, ModuleError> {
        let first = entries.first().ok_or(ModuleError::EmptyTuple)?;
        let (n, spec) = (first.rows(), first.spec());
        for m in &entries {
            if m.rows() != n || m.cols() != n {
                return Err(ModuleError::Shape { expected: n, rows: m.rows(), cols: m.cols() });
            }
            if m.spec() != spec {
                return Err(ModuleError::FieldMismatch(spec, m.spec()));
            }
        }
        Ok(MatrixTuple { entries, det_constraint })
    }

    pub fn from_entries(entries: Vec<Matrix>) -> Result<Self, ModuleError> {
        Self::new(entries, None)
    }

    pub fn entries(&self) -> &[Matrix] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.entries[0].rows()
    }

    pub fn spec(&self) -> FieldSpec {
        self.entries[0].spec()
    }

    pub fn det_constraint(&self) -> Option<DetConstraint> {
        self.det_constraint
    }

    /// `g·t·g⁻¹` entrywise. Panics on singular `g`.
    pub fn conjugate(&self, g: &Matrix) -> MatrixTuple {
        let g_inv = g.inverse().expect("conjugating matrix must be invertible");
        MatrixTuple { entries: self.entries.iter().map(|m| m.conjugate_by(g, &g_inv)).collect(), ..self.clone() }
    }

    pub fn embed(&self, target: FieldSpec) -> Result<MatrixTuple, ModuleError> {
        let entries = self.entries.iter().map(|m| m.embed(target)).collect::<Result<_, _>>()?;
        Ok(MatrixTuple { entries, det_constraint: self.det_constraint })
    }

    pub fn permuted(&self, order: &[usize]) -> MatrixTuple {
        MatrixTuple { entries: order.iter().map(|&i| self.entries[i].clone()).collect(), ..self.clone() }
    }

    /// The conjugation-action instance with this tuple as its point.
    pub fn to_instance(&self) -> ActionInstance {
        ActionInstance::new(Point::ConjugationOnTuple(self.entries.clone()), self.dim(), self.det_constraint)
            .expect("validated tuple")
    }

    pub fn from_instance(x: &ActionInstance) -> Option<MatrixTuple> {
        match x.point() {
            Point::ConjugationOnTuple(t) => MatrixTuple::new(t.clone(), x.det_constraint()).ok(),
            _ => None,
        }
    }
}

/// The unital associative algebra spanned by a tuple, with the word that
/// produced every basis element.
#[derive(Debug)]
pub struct AlgebraHandle {
    generators: MatrixTuple,
    basis: Vec<Matrix>,
    words: Vec<Vec<usize>>,
    echelon: EchelonBasis,
    radical: OnceLock<Vec<Matrix>>,
}

impl AlgebraHandle {
    pub fn generators(&self) -> &MatrixTuple {
        &self.generators
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn spec(&self) -> FieldSpec {
        self.generators.spec()
    }

    pub fn n(&self) -> usize {
        self.generators.dim()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.echelon.contains(&m.vectorize())
    }

    /// Every product of two basis elements lies in the span.
    pub fn is_closed(&self) -> bool {
        self.basis.iter().all(|a| self.basis.iter().all(|b| self.contains(&(a * b))))
    }

    /// Basis of the Jacobson radical, computed once.
    pub fn radical(&self) -> &[Matrix] {
        self.radical.get_or_init(|| radical_of_span(&self.basis))
    }
}

/// Breadth-first closure of `{I}` under right multiplication by the
/// generators; words are recorded in shortlex order.
pub fn span_algebra(t: &MatrixTuple) -> AlgebraHandle {
    let spec = t.spec();
    let n = t.dim();
    let mut echelon = EchelonBasis::new(spec, n * n);
    let id = Matrix::identity(spec, n);
    echelon.insert(&id.vectorize());
    let mut basis = vec![id];
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut next = 0;
    while next < basis.len() {
        for (i, g) in t.entries().iter().enumerate() {
            let prod = &basis[next] * g;
            if echelon.insert(&prod.vectorize()) {
                let mut w = words[next].clone();
                w.push(i);
                basis.push(prod);
                words.push(w);
            }
        }
        next += 1;
    }
    AlgebraHandle { generators: t.clone(), basis, words, echelon, radical: OnceLock::new() }
}

/// Words in the generators whose values span the generated algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericTuple {
    pub tuple: MatrixTuple,
    pub words: Vec<Vec<usize>>,
}

pub fn generic_tuple(generators: &MatrixTuple) -> GenericTuple {
    let a = span_algebra(generators);
    GenericTuple {
        tuple: MatrixTuple::new(a.basis.clone(), generators.det_constraint()).expect("uniform basis"),
        words: a.words.clone(),
    }
}

pub fn radical(a: &AlgebraHandle) -> Vec<Matrix> {
    a.radical().to_vec()
}

pub fn is_semisimple_module(t: &MatrixTuple) -> bool {
    span_algebra(t).radical().is_empty()
}

/// Unital algebra of matrices commuting with every entry.
pub fn centralizer_algebra(t: &MatrixTuple) -> AlgebraHandle {
    let basis = intertwiners(t.entries(), t.entries());
    span_algebra(&MatrixTuple::new(basis, t.det_constraint()).expect("centralizer is nonempty"))
}

/// Basis of `{X : X·s_i = t_i·X for all i}`, where `s_i` is `a×a`, `t_i` is
/// `b×b` and `X` is `b×a`.
pub fn intertwiners(s: &[Matrix], t: &[Matrix]) -> Vec<Matrix> {
    assert_eq!(s.len(), t.len());
    let Some(first) = s.first().or(t.first()) else { return vec![] };
    let spec = first.spec();
    let a = s.first().map_or(0, Matrix::rows);
    let b = t.first().map_or(0, Matrix::rows);
    let nvars = a * b;
    if nvars == 0 {
        return vec![];
    }
    let var = |r: usize, k: usize| r * a + k;
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    for (si, ti) in s.iter().zip(t) {
        for r in 0..b {
            for c in 0..a {
                let mut row = vec![FieldElement::zero(spec); nvars];
                for k in 0..a {
                    let e = si.get(k, c);
                    if !e.is_zero() {
                        row[var(r, k)] += e;
                    }
                }
                for k in 0..b {
                    let e = ti.get(r, k);
                    if !e.is_zero() {
                        row[var(k, c)] -= e;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..nvars)
            .map(|i| Matrix::from_fn(spec, nvars, 1, |r, _| if r == i { FieldElement::one(spec) } else { FieldElement::zero(spec) }))
            .collect()
    } else {
        Matrix::from_rows(spec, rows).kernel()
    };
    kernel.into_iter().map(|v| Matrix::from_vector(spec, b, a, v.vectorize())).collect()
}

/// The action of each entry on the invariant subspace with basis columns
/// `b`. Panics if the subspace is not invariant.
pub fn restrict(gens: &[Matrix], b: &Matrix) -> Vec<Matrix> {
    gens.iter()
        .map(|g| match solve_linear(b, &(g * b)) {
            LinearSolution::Consistent { particular, .. } => particular,
            LinearSolution::Inconsistent => panic!("restriction to a non-invariant subspace"),
        })
        .collect()
}

/// Whether the column space of `b` is invariant under every entry.
pub fn is_invariant(gens: &[Matrix], b: &Matrix) -> bool {
    gens.iter().all(|g| solve_linear(b, &(g * b)).is_consistent())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Q
    }

    fn tuple(ms: Vec<Matrix>) -> MatrixTuple {
        MatrixTuple::from_entries(ms).unwrap()
    }

    #[test]
    fn span_of_identity_and_jordan() {
        let t = tuple(vec![Matrix::identity(q(), 3)]);
        assert_eq!(span_algebra(&t).dim(), 1);
        let j = tuple(vec![Matrix::from_i64(q(), &[&[1, 1], &[0, 1]])]);
        let a = span_algebra(&j);
        assert_eq!(a.dim(), 2);
        assert!(a.is_closed());
        assert_eq!(a.words(), &[vec![], vec![0]]);
    }

    #[test]
    fn generic_tuple_examples() {
        let t = tuple(vec![Matrix::identity(q(), 2)]);
        assert_eq!(generic_tuple(&t).tuple.entries(), &[Matrix::identity(q(), 2)]);
        let d = Matrix::from_i64(q(), &[&[1, 0], &[0, 3]]);
        let g = generic_tuple(&tuple(vec![d.clone()]));
        assert_eq!(g.tuple.entries(), &[Matrix::identity(q(), 2), d]);
        assert_eq!(g.words, vec![vec![], vec![0]]);
    }

    #[test]
    fn semisimplicity_of_gl2_pair() {
        let x = tuple(vec![Matrix::from_i64(q(), &[&[1, 0], &[0, 2]]), Matrix::from_i64(q(), &[&[1, 1], &[0, 1]])]);
        let y = tuple(vec![Matrix::from_i64(q(), &[&[1, 0], &[1, 1]]), Matrix::from_i64(q(), &[&[1, 1], &[0, 1]])]);
        assert!(!is_semisimple_module(&x));
        assert!(is_semisimple_module(&y));
        let d = tuple(vec![Matrix::from_i64(q(), &[&[1, 0], &[0, 2]]), Matrix::from_i64(q(), &[&[5, 0], &[0, 5]])]);
        assert!(is_semisimple_module(&d));
    }

    #[test]
    fn radical_of_jordan_algebra() {
        let j = tuple(vec![Matrix::from_i64(q(), &[&[1, 1], &[0, 1]])]);
        let r = radical(&span_algebra(&j));
        assert_eq!(r.len(), 1);
        assert!(r[0].pow(2).is_zero());
        assert!(!r[0].is_zero());
    }

    #[test]
    fn centralizer_examples() {
        let full = tuple(vec![Matrix::unit(q(), 2, 0, 1), Matrix::unit(q(), 2, 1, 0)]);
        assert_eq!(centralizer_algebra(&full).dim(), 1);
        assert_eq!(centralizer_algebra(&tuple(vec![Matrix::identity(q(), 3)])).dim(), 9);
    }

    #[test]
    fn tuple_json() {
        let t = MatrixTuple::new(vec![Matrix::identity(q(), 2)], Some(DetConstraint::Sl)).unwrap();
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["det_constraint"], "SL");
        let back: MatrixTuple = serde_json::from_value(v).unwrap();
        assert_eq!(back, t);
        let bad = serde_json::json!({"entries": [], "det_constraint": null});
        assert!(serde_json::from_value::<MatrixTuple>(bad).is_err());
    }
}
