//! Closed-orbit decisions with self-checking certificates.
//!
//! For a full group acting on matrix tuples by conjugation the decision is
//! exact: the orbit is closed iff the tuple is a semisimple module, and a
//! non-semisimple tuple is destabilized along its radical-series flag.
//! For subgroups and other actions a bounded Hilbert–Mumford search runs
//! over the lattice of a supplied torus; every candidate with a limit is
//! tested for conjugacy back to the point under `R_u(P_λ) ∩ H`, which is a
//! linear system in the strictly-upper part of `λ`'s eigenbasis.

use std::cmp::Reverse;
use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cochar::{check_conjfixed, limit, ActionInstance, CocharError, Cocharacter, DetConstraint, Point};
use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{extend_to_basis, solve_linear, LinearSolution};
use crate::matrix::Matrix;
use crate::module::{
    centralizer_algebra, intertwiners, invariant_complement, is_invariant, isotypic_decomposition, modules_isomorphic, restrict,
    span_algebra, IsoOutcome, MatrixTuple, ModuleError, NonIsomorphismProof, DEFAULT_SEED,
};

pub const DEFAULT_BOUND: i64 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("torus does not lie in the subgroup: {0}")]
    TorusMismatch(String),
    #[error("inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Cochar(#[from] CocharError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

impl OrbitError {
    /// 3 for an invariant breach, 2 for anything the caller got wrong.
    pub fn exit_code(&self) -> i32 {
        match self {
            OrbitError::Inconsistent(_) => 3,
            _ => 2,
        }
    }
}

fn precondition<T>(msg: impl Into<String>) -> Result<T, OrbitError> {
    Err(OrbitError::Precondition(msg.into()))
}

fn inconsistent<T>(msg: impl Into<String>) -> Result<T, OrbitError> {
    Err(OrbitError::Inconsistent(msg.into()))
}

/// The acting group `H ⊆ GL_n`. Apart from finite lists, every kind is the
/// unit group of a unital matrix algebra `L_H` (intersected with `SL_n` for
/// `FullSl`), so membership is a linear test plus invertibility.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubgroupSpec {
    FullGl,
    FullSl,
    DiagonalTorus,
    /// Block-diagonal `GL_{n_1} × … × GL_{n_k}`.
    BlockSubgroup { blocks: Vec<usize> },
    /// Invertible matrices commuting with every entry.
    CentralizerUnits { tuple: MatrixTuple },
    FiniteList { elements: Vec<Matrix> },
}

impl SubgroupSpec {
    pub fn full(det: Option<DetConstraint>) -> Self {
        match det {
            Some(DetConstraint::Sl) => SubgroupSpec::FullSl,
            None => SubgroupSpec::FullGl,
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, SubgroupSpec::FullGl | SubgroupSpec::FullSl)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, SubgroupSpec::FiniteList { .. })
    }

    pub fn check_dim(&self, n: usize) -> Result<(), OrbitError> {
        match self {
            SubgroupSpec::BlockSubgroup { blocks } if blocks.iter().sum::<usize>() != n || blocks.contains(&0) => {
                precondition(format!("block sizes {blocks:?} do not partition {n}"))
            }
            SubgroupSpec::CentralizerUnits { tuple } if tuple.dim() != n => {
                precondition(format!("centralized tuple has dimension {}, expected {n}", tuple.dim()))
            }
            SubgroupSpec::FiniteList { elements } => {
                for g in elements {
                    if g.rows() != n || g.cols() != n || !g.is_invertible() {
                        return precondition(format!("finite list entries must be invertible {n}x{n} matrices"));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn block_index(blocks: &[usize]) -> Vec<usize> {
        blocks.iter().enumerate().flat_map(|(b, &k)| std::iter::repeat_n(b, k)).collect()
    }

    pub fn contains(&self, g: &Matrix) -> bool {
        if !g.is_square() || !g.is_invertible() {
            return false;
        }
        match self {
            SubgroupSpec::FullSl => g.determinant().is_one(),
            SubgroupSpec::FiniteList { elements } => elements.contains(g),
            _ => self.span_defect(g).iter().all(FieldElement::is_zero),
        }
    }

    /// A linear map on `M_n` whose kernel is `L_H`.
    fn span_defect(&self, m: &Matrix) -> Vec<FieldElement> {
        let n = m.rows();
        match self {
            SubgroupSpec::FullGl | SubgroupSpec::FullSl => vec![],
            SubgroupSpec::DiagonalTorus => {
                (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m.get(i, j).clone()).collect()
            }
            SubgroupSpec::BlockSubgroup { blocks } => {
                let b = Self::block_index(blocks);
                (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| b[i] != b[j])
                    .map(|(i, j)| m.get(i, j).clone())
                    .collect()
            }
            SubgroupSpec::CentralizerUnits { tuple } => {
                tuple.entries().iter().flat_map(|t| (&(m * t) - &(t * m)).vectorize()).collect()
            }
            SubgroupSpec::FiniteList { .. } => m.vectorize(),
        }
    }

    /// Basis of `L_H`.
    fn span_basis(&self, spec: FieldSpec, n: usize) -> Vec<Matrix> {
        let units = |keep: &dyn Fn(usize, usize) -> bool| -> Vec<Matrix> {
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| keep(i, j)).map(|(i, j)| Matrix::unit(spec, n, i, j)).collect()
        };
        match self {
            SubgroupSpec::FullGl | SubgroupSpec::FullSl => units(&|_, _| true),
            SubgroupSpec::DiagonalTorus => units(&|i, j| i == j),
            SubgroupSpec::BlockSubgroup { blocks } => {
                let b = Self::block_index(blocks);
                units(&|i, j| b[i] == b[j])
            }
            SubgroupSpec::CentralizerUnits { tuple } => intertwiners(tuple.entries(), tuple.entries()),
            SubgroupSpec::FiniteList { .. } => vec![],
        }
    }

    /// `λ(t) ∈ H` for all `t`: every eigenprojector lies in `L_H`, plus
    /// `Σw = 0` for `SL_n`; a finite group only has the trivial cocharacter.
    pub fn contains_cocharacter(&self, lambda: &Cocharacter) -> bool {
        match self {
            SubgroupSpec::FiniteList { .. } => lambda.is_trivial(),
            SubgroupSpec::FullSl => lambda.weight_sum() == 0,
            _ => self.contains_torus_direction(lambda),
        }
    }

    fn contains_torus_direction(&self, lambda: &Cocharacter) -> bool {
        match self {
            SubgroupSpec::FiniteList { .. } => lambda.is_trivial(),
            _ => lambda
                .distinct_weights()
                .iter()
                .all(|&d| self.span_defect(&lambda.projector(d)).iter().all(FieldElement::is_zero)),
        }
    }

    /// `H·x = {x}`: every element of `L_H` fixes `x` infinitesimally. Units
    /// of `L_H` are dense in it, so vectors are fixed only when zero.
    fn fixes(&self, p: &Point, basis: &[Matrix]) -> bool {
        match p {
            Point::LinearOnVector(v) => v.is_zero(),
            Point::ConjugationOnTuple(t) => t.iter().all(|x| basis.iter().all(|m| m.commutes_with(x))),
            Point::DiagonalProduct(a, b) => self.fixes(a, basis) && self.fixes(b, basis),
        }
    }
}

/// A split torus given by a base change and a basis of its cocharacter
/// lattice: the coefficients `c` stand for `λ(t) = g·diag(t^{Σ c_k b_k})·g⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusOfSubgroup {
    pub base_change: Matrix,
    pub weight_basis: Vec<Vec<i64>>,
    pub description: String,
}

impl TorusOfSubgroup {
    pub fn diagonal(spec: FieldSpec, n: usize) -> Self {
        TorusOfSubgroup {
            base_change: Matrix::identity(spec, n),
            weight_basis: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(),
            description: "diagonal".into(),
        }
    }

    /// The center of `GL_n`.
    pub fn scalars(spec: FieldSpec, n: usize) -> Self {
        TorusOfSubgroup {
            base_change: Matrix::identity(spec, n),
            weight_basis: vec![vec![1; n]],
            description: "scalars".into(),
        }
    }

    /// The image of a rank-`r` torus acting on coordinates through the given
    /// characters.
    pub fn from_characters(spec: FieldSpec, rank: usize, characters: &[Vec<i64>]) -> Self {
        TorusOfSubgroup {
            base_change: Matrix::identity(spec, characters.len()),
            weight_basis: (0..rank).map(|k| characters.iter().map(|chi| chi[k]).collect()).collect(),
            description: "character torus".into(),
        }
    }

    pub fn rank(&self) -> usize {
        self.weight_basis.len()
    }

    pub fn dim(&self) -> usize {
        self.base_change.rows()
    }

    pub fn weights_of(&self, c: &[i64]) -> Vec<i64> {
        let mut w = vec![0; self.dim()];
        for (ck, b) in c.iter().zip(&self.weight_basis) {
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi += ck * bi;
            }
        }
        w
    }

    pub fn cocharacter(&self, weights: &[i64]) -> Result<Cocharacter, OrbitError> {
        Ok(Cocharacter::new(self.base_change.clone(), weights.to_vec())?)
    }

    pub fn basis(&self) -> Result<Vec<Cocharacter>, OrbitError> {
        self.weight_basis.iter().map(|b| self.cocharacter(b)).collect()
    }

    fn check(&self, n: usize, spec: Option<FieldSpec>) -> Result<(), OrbitError> {
        if self.dim() != n || !self.base_change.is_square() {
            return precondition(format!("torus acts on dimension {}, expected {n}", self.dim()));
        }
        if let Some(s) = spec {
            if s != self.base_change.spec() {
                return precondition(format!("torus is over {}, point over {s}", self.base_change.spec()));
            }
        }
        if self.weight_basis.iter().any(|b| b.len() != n) {
            return precondition("weight basis vectors must have one entry per coordinate");
        }
        if !self.base_change.is_invertible() {
            return precondition("torus base change is singular");
        }
        Ok(())
    }

    /// Scalars lie in the torus (over ℚ).
    fn contains_scalars(&self) -> bool {
        let n = self.dim();
        if self.weight_basis.is_empty() {
            return false;
        }
        let spec = FieldSpec::Q;
        let a = Matrix::from_fn(spec, n, self.rank(), |i, k| FieldElement::from_i64(spec, self.weight_basis[k][i]));
        let ones = Matrix::from_fn(spec, n, 1, |_, _| FieldElement::one(spec));
        solve_linear(&a, &ones).is_consistent()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Closed,
    NotClosed,
    NoDestabilizerUpToBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedReason {
    /// Full-group conjugation of a semisimple tuple.
    Semisimple,
    /// `H` fixes the point.
    SingletonOrbit,
    /// Orbits of a finite group are finite.
    FiniteGroup,
}

/// Why the limit is not conjugate back to the point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum NonConjugacy {
    /// The limit and the point are non-isomorphic modules (full group).
    ModuleNonIsomorphism { proof: NonIsomorphismProof },
    /// The linear system for `u ∈ R_u(P_λ) ∩ H` with `u·x = lim` has no
    /// solution.
    UnipotentSystemInconsistent { variables: usize, equations: usize },
    /// No listed element in `R_u(P_λ)` maps the point to the limit.
    FiniteListExhausted { checked: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemisimplicityData {
    pub algebra_dim: usize,
    pub radical_dim: usize,
    /// Dimensions of `J^i V / J^{i+1} V`, top first.
    pub layer_dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub instance: ActionInstance,
    pub subgroup: SubgroupSpec,
    pub destabilizer: Option<Cocharacter>,
    pub limit_value: Option<Point>,
    pub nonconjugacy: Option<NonConjugacy>,
    pub semisimplicity: Option<SemisimplicityData>,
    pub closed_reason: Option<ClosedReason>,
    pub search_bound: Option<i64>,
    pub torus_used: Option<TorusOfSubgroup>,
    pub seed: u64,
}

impl Certificate {
    fn skeleton(verdict: Verdict, instance: &ActionInstance, subgroup: &SubgroupSpec) -> Self {
        Certificate {
            verdict,
            instance: instance.clone(),
            subgroup: subgroup.clone(),
            destabilizer: None,
            limit_value: None,
            nonconjugacy: None,
            semisimplicity: None,
            closed_reason: None,
            search_bound: None,
            torus_used: None,
            seed: DEFAULT_SEED,
        }
    }

    pub fn is_certified(&self) -> bool {
        self.verdict != Verdict::NoDestabilizerUpToBound
    }

    /// `Some(true)` for Closed, `Some(false)` for NotClosed.
    pub fn closed(&self) -> Option<bool> {
        match self.verdict {
            Verdict::Closed => Some(true),
            Verdict::NotClosed => Some(false),
            Verdict::NoDestabilizerUpToBound => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuConjugacy {
    /// `u ∈ R_u(P_λ) ∩ H` with `u·x = lim λ(t)·x`.
    Witness(Matrix),
    Infeasible(NonConjugacy),
}

/// Linear equations in the entries of `N` (one variable per allowed
/// position) for `(I+N)·x = t`, all in λ's eigenbasis.
fn unipotent_equations(
    x: &Point,
    t: &Point,
    vars: &[(usize, usize)],
    rows: &mut Vec<Vec<FieldElement>>,
    rhs: &mut Vec<FieldElement>,
) {
    match (x, t) {
        (Point::LinearOnVector(v), Point::LinearOnVector(v2)) => {
            let spec = v.spec();
            for a in 0..v.rows() {
                rows.push(vars.iter().map(|&(i, j)| if i == a { v.get(j, 0).clone() } else { FieldElement::zero(spec) }).collect());
                rhs.push(v2.get(a, 0) - v.get(a, 0));
            }
        }
        (Point::ConjugationOnTuple(xs), Point::ConjugationOnTuple(ts)) => {
            // N·X − X'·N = X' − X
            for (m, m2) in xs.iter().zip(ts) {
                let spec = m.spec();
                let n = m.rows();
                for a in 0..n {
                    for b in 0..n {
                        rows.push(
                            vars.iter()
                                .map(|&(i, j)| {
                                    let mut e = FieldElement::zero(spec);
                                    if a == i {
                                        e += m.get(j, b);
                                    }
                                    if j == b {
                                        e -= m2.get(a, i);
                                    }
                                    e
                                })
                                .collect(),
                        );
                        rhs.push(m2.get(a, b) - m.get(a, b));
                    }
                }
            }
        }
        (Point::DiagonalProduct(a1, b1), Point::DiagonalProduct(a2, b2)) => {
            unipotent_equations(a1, a2, vars, rows, rhs);
            unipotent_equations(b1, b2, vars, rows, rhs);
        }
        _ => unreachable!("limit has the shape of the point"),
    }
}

fn require_reductive(h: &SubgroupSpec) -> Result<(), OrbitError> {
    if let SubgroupSpec::CentralizerUnits { tuple } = h {
        // units of an algebra form a reductive group iff the algebra is semisimple
        if !centralizer_algebra(tuple).radical().is_empty() {
            return precondition("centralizer algebra is not semisimple, so its unit group is not reductive");
        }
    }
    Ok(())
}

/// Solves `u·x = lim λ(t)·x` for `u ∈ R_u(P_λ) ∩ H`.
pub fn ru_conjugacy_back(x: &ActionInstance, lambda: &Cocharacter, h: &SubgroupSpec) -> Result<RuConjugacy, OrbitError> {
    h.check_dim(x.ambient_dim())?;
    require_reductive(h)?;
    if !h.contains_cocharacter(lambda) {
        return precondition("cocharacter does not lie in the subgroup");
    }
    let lim = limit(x, lambda)?;
    let Some(target) = lim.value else {
        return precondition("limit along the cocharacter does not exist");
    };
    let spec = lambda.spec();
    let n = lambda.dim();
    let witness = |u: Matrix| -> Result<RuConjugacy, OrbitError> {
        let (lhs, rhs) = check_conjfixed(x, lambda, &u)?;
        if !(lhs && rhs) {
            return inconsistent(format!("conjugacy witness fails the fixed-point cross-check ({lhs}, {rhs})"));
        }
        Ok(RuConjugacy::Witness(u))
    };
    if &target == x.point() {
        return witness(Matrix::identity(spec, n));
    }
    if let SubgroupSpec::FiniteList { elements } = h {
        let mut checked = 0;
        for u in elements {
            if lambda.ru_p_lambda_contains(u)? {
                checked += 1;
                if x.act(u).point() == &target {
                    return witness(u.clone());
                }
            }
        }
        return Ok(RuConjugacy::Infeasible(NonConjugacy::FiniteListExhausted { checked }));
    }
    let w = lambda.weights();
    let g = lambda.base_change();
    let gi = lambda.base_inverse();
    let xe = x.point().act(gi, g);
    let te = target.act(gi, g);
    let vars: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| w[i] > w[j]).collect();
    if vars.is_empty() {
        return Ok(RuConjugacy::Infeasible(NonConjugacy::UnipotentSystemInconsistent { variables: 0, equations: 0 }));
    }
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    unipotent_equations(&xe, &te, &vars, &mut rows, &mut rhs);
    let defects: Vec<Vec<FieldElement>> =
        vars.iter().map(|&(i, j)| h.span_defect(&(&(g * &Matrix::unit(spec, n, i, j)) * gi))).collect();
    for d in 0..defects[0].len() {
        rows.push(defects.iter().map(|col| col[d].clone()).collect());
        rhs.push(FieldElement::zero(spec));
    }
    let equations = rows.len();
    match solve_linear(&Matrix::from_rows(spec, rows), &Matrix::column_vector(spec, rhs)) {
        LinearSolution::Inconsistent => Ok(RuConjugacy::Infeasible(NonConjugacy::UnipotentSystemInconsistent {
            variables: vars.len(),
            equations,
        })),
        LinearSolution::Consistent { particular, .. } => {
            let mut u = Matrix::identity(spec, n);
            for (k, &(i, j)) in vars.iter().enumerate() {
                u.set(i, j, particular.get(k, 0).clone());
            }
            witness(&(g * &u) * gi)
        }
    }
}

fn primitive(w: &[i64]) -> Vec<i64> {
    let g = w.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        w.to_vec()
    } else {
        w.iter().map(|x| x / g).collect()
    }
}

/// Candidate weight vectors in search order: lattice points with
/// coefficients and weights in `[−B, B]`, made primitive, deduplicated and
/// sorted by max-norm, then lexicographically descending. When the center
/// acts trivially and lies in the torus, `w` is replaced by `n·w − Σw`
/// (same action, trace zero).
fn candidates(torus: &TorusOfSubgroup, bound: i64, zero_sum: bool, modulo_center: bool) -> Vec<Vec<i64>> {
    let r = torus.rank();
    let n = torus.dim() as i64;
    let mut seen = BTreeSet::new();
    let mut c = vec![-bound; r];
    if r == 0 {
        return vec![];
    }
    loop {
        let raw = torus.weights_of(&c);
        if raw.iter().any(|&x| x != 0) && raw.iter().all(|x| x.abs() <= bound) {
            let s: i64 = raw.iter().sum();
            let w = if modulo_center { raw.iter().map(|x| n * x - s).collect() } else { raw };
            let w = primitive(&w);
            if w.iter().any(|&x| x != 0) && (!zero_sum || w.iter().sum::<i64>() == 0) {
                seen.insert(w);
            }
        }
        let mut k = 0;
        loop {
            if k == r {
                let mut out: Vec<Vec<i64>> = seen.into_iter().collect();
                out.sort_by_key(|w| (w.iter().map(|x| x.abs()).max().unwrap_or(0), Reverse(w.clone())));
                return out;
            }
            if c[k] < bound {
                c[k] += 1;
                break;
            }
            c[k] = -bound;
            k += 1;
        }
    }
}

/// Bounded Hilbert–Mumford search for `H·x` over a torus of `H`.
pub fn destabilizer_search(
    x: &ActionInstance,
    h: &SubgroupSpec,
    torus: &TorusOfSubgroup,
    bound: i64,
) -> Result<Certificate, OrbitError> {
    if bound < 1 {
        return precondition("bound must be at least 1");
    }
    let n = x.ambient_dim();
    h.check_dim(n)?;
    torus.check(n, x.spec())?;
    require_reductive(h)?;
    for (k, b) in torus.basis()?.iter().enumerate() {
        if !h.contains_torus_direction(b) {
            return Err(OrbitError::TorusMismatch(format!("basis cocharacter {k} is not in the subgroup")));
        }
    }
    let mut cert = Certificate::skeleton(Verdict::NoDestabilizerUpToBound, x, h);
    cert.search_bound = Some(bound);
    cert.torus_used = Some(torus.clone());
    if h.is_finite() {
        cert.verdict = Verdict::Closed;
        cert.closed_reason = Some(ClosedReason::FiniteGroup);
        return Ok(cert);
    }
    let spec = torus.base_change.spec();
    if h.fixes(x.point(), &h.span_basis(spec, n)) {
        cert.verdict = Verdict::Closed;
        cert.closed_reason = Some(ClosedReason::SingletonOrbit);
        return Ok(cert);
    }
    let zero_sum = x.det_constraint() == Some(DetConstraint::Sl) || *h == SubgroupSpec::FullSl;
    let modulo_center = x.point().center_acts_trivially() && torus.contains_scalars();
    for w in candidates(torus, bound, zero_sum, modulo_center) {
        let lambda = torus.cocharacter(&w)?;
        if !limit(x, &lambda)?.exists {
            continue;
        }
        if let RuConjugacy::Infeasible(proof) = ru_conjugacy_back(x, &lambda, h)? {
            cert.verdict = Verdict::NotClosed;
            cert.limit_value = limit(x, &lambda)?.value;
            cert.destabilizer = Some(lambda);
            cert.nonconjugacy = Some(proof);
            return Ok(cert);
        }
    }
    Ok(cert)
}

/// `V ⊋ JV ⊋ J²V ⊋ … ⊋ 0` as column bases, `V` first.
fn radical_layers(rad: &[Matrix], spec: FieldSpec, n: usize) -> Vec<Matrix> {
    let mut layers = vec![Matrix::identity(spec, n)];
    loop {
        let cur = layers.last().expect("nonempty");
        let mut e = crate::linalg::EchelonBasis::new(spec, n);
        let mut cols = Matrix::zeros(spec, n, 0);
        for r in rad {
            let img = r * cur;
            for j in 0..img.cols() {
                let v = img.column(j);
                if e.insert(&v.vectorize()) {
                    cols = cols.hstack(&v);
                }
            }
        }
        if cols.cols() == 0 {
            return layers;
        }
        layers.push(cols);
    }
}

/// Coordinates of the columns of `sub` in the basis `b` (`sub ⊆ span b`).
fn coordinates(b: &Matrix, sub: &Matrix) -> Matrix {
    match solve_linear(b, sub) {
        LinearSolution::Consistent { particular, .. } => particular,
        LinearSolution::Inconsistent => panic!("subspace is not contained in the basis span"),
    }
}

/// Exact decision for `GL_n` (or `SL_n`) acting on a tuple by conjugation.
pub fn is_orbit_closed_full(t: &MatrixTuple) -> Result<Certificate, OrbitError> {
    let inst = t.to_instance();
    let subgroup = SubgroupSpec::full(t.det_constraint());
    let spec = t.spec();
    let n = t.dim();
    let alg = span_algebra(t);
    let rad = alg.radical();
    let layers = radical_layers(rad, spec, n);
    let layer_dims: Vec<usize> = layers.windows(2).map(|p| p[0].cols() - p[1].cols()).chain(layers.last().map(Matrix::cols)).collect();
    let data = SemisimplicityData { algebra_dim: alg.dim(), radical_dim: rad.len(), layer_dims };
    let mut cert = Certificate::skeleton(Verdict::Closed, &inst, &subgroup);
    cert.semisimplicity = Some(data);
    if rad.is_empty() {
        cert.closed_reason = Some(ClosedReason::Semisimple);
        return Ok(cert);
    }
    // top layer lowest weight, so the tuple is block upper triangular with
    // nonnegative weights and the limit is the associated graded
    let m = layers.len() as i64;
    let mut base = Matrix::zeros(spec, n, 0);
    let mut weights = Vec::new();
    for (i, v) in layers.iter().enumerate() {
        let comp = match layers.get(i + 1) {
            Some(next) => {
                let local = extend_to_basis(&coordinates(v, next));
                let extra: Vec<usize> = (next.cols()..local.cols()).collect();
                v * &local.select_columns(&extra)
            }
            None => v.clone(),
        };
        weights.extend(std::iter::repeat_n(2 * i as i64 - (m - 1), comp.cols()));
        base = base.hstack(&comp);
    }
    if t.det_constraint() == Some(DetConstraint::Sl) {
        let s: i64 = weights.iter().sum();
        weights = weights.iter().map(|w| n as i64 * w - s).collect();
    }
    let lambda = Cocharacter::new(base, primitive(&weights))?;
    let lim = limit(&inst, &lambda)?;
    let Some(value) = lim.value else {
        return inconsistent("radical flag cocharacter has no limit");
    };
    let lim_tuple = MatrixTuple::from_instance(&inst.with_point(value.clone())).expect("tuple limit");
    let proof = match modules_isomorphic(t, &lim_tuple)? {
        IsoOutcome::NotIsomorphic(p) => p,
        IsoOutcome::Isomorphic(_) => return inconsistent("associated graded is isomorphic to a non-semisimple module"),
    };
    cert.verdict = Verdict::NotClosed;
    cert.destabilizer = Some(lambda);
    cert.limit_value = Some(value);
    cert.nonconjugacy = Some(NonConjugacy::ModuleNonIsomorphism { proof });
    Ok(cert)
}

/// Closedness of `G·x` for the full group of the instance: exact for
/// tuples, a diagonal-torus search with [`DEFAULT_BOUND`] otherwise. The
/// empty tuple is a fixed point.
pub fn is_orbit_closed(x: &ActionInstance) -> Result<Certificate, OrbitError> {
    let g = SubgroupSpec::full(x.det_constraint());
    if let Point::ConjugationOnTuple(t) = x.point() {
        if t.is_empty() {
            let mut cert = Certificate::skeleton(Verdict::Closed, x, &g);
            cert.closed_reason = Some(ClosedReason::SingletonOrbit);
            return Ok(cert);
        }
    }
    match MatrixTuple::from_instance(x) {
        Some(t) => is_orbit_closed_full(&t),
        None => {
            let spec = x.spec().ok_or_else(|| OrbitError::Precondition("instance has no entries".into()))?;
            destabilizer_search(x, &g, &TorusOfSubgroup::diagonal(spec, x.ambient_dim()), DEFAULT_BOUND)
        }
    }
}

/// A maximal split torus of the centralizer of the semisimple tuple `a`:
/// one scaling cocharacter per irreducible summand.
pub fn torus_of_centralizer(a: &MatrixTuple) -> Result<TorusOfSubgroup, OrbitError> {
    adapted_torus(a, &[Matrix::identity(a.spec(), a.dim())], "centralizer")
}

/// As [`torus_of_centralizer`], with summands chosen inside an `a`-stable
/// splitting of the radical-series flag of `flag`, so the torus contains
/// the flag's destabilizer. Every layer must be `a`-invariant.
pub fn torus_of_centralizer_with_flag(a: &MatrixTuple, flag: &MatrixTuple) -> Result<TorusOfSubgroup, OrbitError> {
    if a.dim() != flag.dim() || a.spec() != flag.spec() {
        return precondition("tuples act on different spaces");
    }
    let layers = radical_layers(span_algebra(flag).radical(), flag.spec(), flag.dim());
    adapted_torus(a, &layers, "centralizer adapted to a radical flag")
}

fn adapted_torus(a: &MatrixTuple, layers: &[Matrix], description: &str) -> Result<TorusOfSubgroup, OrbitError> {
    if !span_algebra(a).radical().is_empty() {
        return precondition("centralized tuple is not semisimple");
    }
    let spec = a.spec();
    let n = a.dim();
    let mut summands: Vec<Matrix> = Vec::new();
    for (i, v) in layers.iter().enumerate() {
        if !is_invariant(a.entries(), v) {
            return precondition("flag is not stable under the centralized tuple");
        }
        let r = restrict(a.entries(), v);
        let comp = match layers.get(i + 1) {
            Some(next) => v * &invariant_complement(&r, &coordinates(v, next))?,
            None => v.clone(),
        };
        let rc = MatrixTuple::from_entries(restrict(a.entries(), &comp))?;
        for s in isotypic_decomposition(&rc)?.summands() {
            summands.push(&comp * s);
        }
    }
    let mut base = Matrix::zeros(spec, n, 0);
    let mut weight_basis = Vec::new();
    for s in &summands {
        let start = base.cols();
        base = base.hstack(s);
        weight_basis.push((0..n).map(|j| i64::from(j >= start && j < start + s.cols())).collect());
    }
    Ok(TorusOfSubgroup { base_change: base, weight_basis, description: description.into() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HtogOutcome {
    /// `G·x` is closed; nothing to find.
    GClosed,
    /// A destabilizer inside the centralizer torus, with `H·x` certified
    /// not closed.
    DestabilizerFound,
    /// Nothing within the bound.
    Inconclusive,
    /// `H·x` certified closed while `G·x` is not.
    Contradiction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HtogReport {
    pub full: Certificate,
    pub search: Option<Certificate>,
    pub outcome: HtogOutcome,
}

/// With `A` (the entries of `a`) semisimple and fixing `x`, a non-closed
/// `G·x` should be destabilized inside `C_G(A)`.
pub fn htog_check(x: &MatrixTuple, a: &MatrixTuple, bound: i64) -> Result<HtogReport, OrbitError> {
    if a.dim() != x.dim() || a.spec() != x.spec() {
        return precondition("tuples act on different spaces");
    }
    for g in a.entries() {
        if !g.is_invertible() {
            return precondition("stabilizer entries must be invertible");
        }
        if !x.entries().iter().all(|m| m.commutes_with(g)) {
            return precondition("stabilizer entries must commute with the point");
        }
    }
    if !span_algebra(a).radical().is_empty() {
        return precondition("stabilizer tuple is not semisimple");
    }
    let full = is_orbit_closed_full(x)?;
    if full.verdict == Verdict::Closed {
        return Ok(HtogReport { full, search: None, outcome: HtogOutcome::GClosed });
    }
    let torus = torus_of_centralizer_with_flag(a, x)?;
    let h = SubgroupSpec::CentralizerUnits { tuple: a.clone() };
    let search = destabilizer_search(&x.to_instance(), &h, &torus, bound)?;
    let outcome = match search.verdict {
        Verdict::NotClosed => HtogOutcome::DestabilizerFound,
        Verdict::NoDestabilizerUpToBound => HtogOutcome::Inconclusive,
        Verdict::Closed => HtogOutcome::Contradiction,
    };
    Ok(HtogReport { full, search: Some(search), outcome })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoVarietiesReport {
    /// `H·x` with `H = C_G(y)`.
    pub hx: Certificate,
    /// `K·y` with `K = C_G(x)`.
    pub ky: Certificate,
    /// `G·(x, y)`.
    pub joint: Certificate,
    /// No two certified verdicts disagree.
    pub consistent: bool,
    pub both_not_closed: bool,
}

impl TwoVarietiesReport {
    pub fn certificates(&self) -> [&Certificate; 3] {
        [&self.hx, &self.ky, &self.joint]
    }
}

fn concat(x: &MatrixTuple, y: &MatrixTuple) -> Result<MatrixTuple, OrbitError> {
    let mut e = x.entries().to_vec();
    e.extend(y.entries().iter().cloned());
    Ok(MatrixTuple::new(e, x.det_constraint())?)
}

/// For closed `G·x` and `G·y`: `H·x`, `K·y` and `G·(x, y)` are closed
/// together or not at all.
pub fn two_varieties_check(x: &MatrixTuple, y: &MatrixTuple, bound: i64) -> Result<TwoVarietiesReport, OrbitError> {
    if x.dim() != y.dim() || x.spec() != y.spec() {
        return precondition("tuples act on different spaces");
    }
    for t in [x, y] {
        if is_orbit_closed_full(t)?.verdict != Verdict::Closed {
            return precondition("G-orbits of both tuples must be closed");
        }
    }
    let joint_tuple = concat(x, y)?;
    let joint = is_orbit_closed_full(&joint_tuple)?;
    let hx = destabilizer_search(
        &x.to_instance(),
        &SubgroupSpec::CentralizerUnits { tuple: y.clone() },
        &torus_of_centralizer_with_flag(y, &joint_tuple)?,
        bound,
    )?;
    let ky = destabilizer_search(
        &y.to_instance(),
        &SubgroupSpec::CentralizerUnits { tuple: x.clone() },
        &torus_of_centralizer_with_flag(x, &joint_tuple)?,
        bound,
    )?;
    let verdicts: BTreeSet<bool> = [&hx, &ky, &joint].iter().filter_map(|c| c.closed()).collect();
    let both_not_closed = hx.verdict == Verdict::NotClosed && ky.verdict == Verdict::NotClosed;
    Ok(TwoVarietiesReport { consistent: verdicts.len() <= 1, both_not_closed, hx, ky, joint })
}

/// A tuple whose stabilizer contains a maximal torus (all entries diagonal
/// after conjugating by `conjugator⁻¹`) has a closed orbit.
pub fn kraft_check(t: &MatrixTuple, conjugator: Option<&Matrix>) -> Result<Certificate, OrbitError> {
    let g = conjugator.cloned().unwrap_or_else(|| Matrix::identity(t.spec(), t.dim()));
    let Some(gi) = g.inverse() else {
        return precondition("conjugator is singular");
    };
    if !t.entries().iter().all(|m| m.conjugate_by(&gi, &g).is_diagonal()) {
        return precondition("entries do not commute with the given maximal torus");
    }
    let cert = is_orbit_closed_full(t)?;
    if cert.verdict != Verdict::Closed {
        return inconsistent("a tuple centralized by a maximal torus has a non-closed orbit");
    }
    Ok(cert)
}

/// Recomputes every claim of a certificate. Any failure, including a
/// malformed field, is reported as an inconsistency.
pub fn verify(c: &Certificate) -> Result<(), OrbitError> {
    verify_inner(c).map_err(|e| match e {
        OrbitError::Inconsistent(_) => e,
        other => OrbitError::Inconsistent(other.to_string()),
    })
}

fn verify_inner(c: &Certificate) -> Result<(), OrbitError> {
    let x = &c.instance;
    let h = &c.subgroup;
    let n = x.ambient_dim();
    h.check_dim(n)?;
    match c.verdict {
        Verdict::NotClosed => {
            let Some(lambda) = &c.destabilizer else {
                return inconsistent("NotClosed without a destabilizer");
            };
            if !h.contains_cocharacter(lambda) {
                return inconsistent("destabilizer is not in the subgroup");
            }
            let lim = limit(x, lambda)?;
            if !lim.exists {
                return inconsistent("limit along the destabilizer does not exist");
            }
            if lim.value != c.limit_value {
                return inconsistent("recorded limit differs from the recomputed one");
            }
            match &c.nonconjugacy {
                None => inconsistent("NotClosed without a non-conjugacy proof"),
                Some(NonConjugacy::ModuleNonIsomorphism { proof }) => {
                    if !h.is_full() {
                        return inconsistent("module proofs only apply to the full group");
                    }
                    let (Some(s), Some(value)) = (MatrixTuple::from_instance(x), &c.limit_value) else {
                        return inconsistent("module proofs need a conjugation action on tuples");
                    };
                    let t = MatrixTuple::from_instance(&x.with_point(value.clone())).expect("same shape");
                    match modules_isomorphic(&s, &t)? {
                        IsoOutcome::NotIsomorphic(p) if &p == proof => Ok(()),
                        IsoOutcome::NotIsomorphic(_) => inconsistent("non-isomorphism proof differs on recomputation"),
                        IsoOutcome::Isomorphic(_) => inconsistent("limit is conjugate to the point"),
                    }
                }
                Some(recorded) => match ru_conjugacy_back(x, lambda, h)? {
                    RuConjugacy::Infeasible(p) if &p == recorded => Ok(()),
                    RuConjugacy::Infeasible(_) => inconsistent("unipotent system differs on recomputation"),
                    RuConjugacy::Witness(_) => inconsistent("limit is conjugate back to the point"),
                },
            }
        }
        Verdict::Closed => {
            if c.destabilizer.is_some() || c.nonconjugacy.is_some() {
                return inconsistent("Closed certificate carries destabilizing data");
            }
            match c.closed_reason {
                None => inconsistent("Closed without a reason"),
                Some(ClosedReason::Semisimple) => {
                    let Some(t) = MatrixTuple::from_instance(x) else {
                        return inconsistent("semisimplicity applies to tuples only");
                    };
                    if *h != SubgroupSpec::full(t.det_constraint()) {
                        return inconsistent("semisimplicity decides closedness for the full group only");
                    }
                    let again = is_orbit_closed_full(&t)?;
                    if again.verdict != Verdict::Closed || again.semisimplicity != c.semisimplicity {
                        return inconsistent("semisimplicity data differs on recomputation");
                    }
                    Ok(())
                }
                Some(ClosedReason::SingletonOrbit) => {
                    let spec = x.spec().unwrap_or(FieldSpec::Q);
                    if h.is_finite() || !h.fixes(x.point(), &h.span_basis(spec, n)) {
                        return inconsistent("the subgroup does not fix the point");
                    }
                    Ok(())
                }
                Some(ClosedReason::FiniteGroup) => {
                    if !h.is_finite() {
                        return inconsistent("subgroup is not finite");
                    }
                    Ok(())
                }
            }
        }
        Verdict::NoDestabilizerUpToBound => {
            let (Some(torus), Some(bound)) = (&c.torus_used, c.search_bound) else {
                return inconsistent("bounded verdict without its torus and bound");
            };
            let again = destabilizer_search(x, h, torus, bound)?;
            if again != *c {
                return inconsistent("bounded search differs on recomputation");
            }
            Ok(())
        }
    }
}
