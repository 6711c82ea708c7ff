//! Cocharacters of GL_n, weight gradings of actions, limits, and the
//! subgroups P_λ ⊇ L_λ, R_u(P_λ) as block conditions in λ's eigenbasis.
//!
//! A cocharacter is stored as a base change `g` and integer weights `w`,
//! meaning `λ(t) = g · diag(t^{w_1}, .., t^{w_n}) · g⁻¹`. Limits are never
//! taken numerically: a point is split into λ-weight components, and
//! `lim_{t→0} λ(t)·x` exists exactly when no component has negative weight.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocharError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("weights must sum to zero for SL_n, got {0}")]
    TraceNonzero(i64),
    #[error("invalid action instance: {0}")]
    InvalidInstance(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `λ(t) = g · diag(t^{w}) · g⁻¹`, kept with weights sorted non-increasing.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "CocharacterJson", into = "CocharacterJson")]
pub struct Cocharacter {
    base_change: Matrix,
    base_inverse: Matrix,
    weights: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct CocharacterJson {
    base_change: Matrix,
    weights: Vec<i64>,
}

impl TryFrom<CocharacterJson> for Cocharacter {
    type Error = CocharError;
    fn try_from(j: CocharacterJson) -> Result<Self, CocharError> {
        Cocharacter::new(j.base_change, j.weights)
    }
}

impl From<Cocharacter> for CocharacterJson {
    fn from(c: Cocharacter) -> Self {
        CocharacterJson { base_change: c.base_change, weights: c.weights }
    }
}

impl PartialEq for Cocharacter {
    /// Equality as maps `k* → GL_n`: same eigenspace for every weight.
    fn eq(&self, other: &Self) -> bool {
        if self.dim() != other.dim() || self.spec() != other.spec() {
            return false;
        }
        if self.weights != other.weights {
            return false;
        }
        self.distinct_weights().into_iter().all(|d| {
            let a = self.eigenspace(d);
            let b = other.eigenspace(d);
            a.hstack(&b).rank() == a.cols()
        })
    }
}

impl Eq for Cocharacter {}

impl Cocharacter {
    /// Validates and canonicalises: weights are stably sorted
    /// non-increasing with the columns of `base_change` permuted to match.
    pub fn new(base_change: Matrix, weights: Vec<i64>) -> Result<Self, CocharError> {
        if !base_change.is_square() {
            return Err(CocharError::DimensionMismatch { expected: base_change.rows(), found: base_change.cols() });
        }
        if weights.len() != base_change.rows() {
            return Err(CocharError::DimensionMismatch { expected: base_change.rows(), found: weights.len() });
        }
        let mut order: Vec<usize> = (0..weights.len()).collect();
        order.sort_by(|&a, &b| weights[b].cmp(&weights[a]));
        let base_change = base_change.select_columns(&order);
        let weights: Vec<i64> = order.iter().map(|&i| weights[i]).collect();
        let base_inverse = base_change.inverse().ok_or(CocharError::Singular)?;
        Ok(Cocharacter { base_change, base_inverse, weights })
    }

    /// `diag(t^{w_1}, .., t^{w_n})` in the standard basis.
    pub fn diagonal(spec: FieldSpec, weights: &[i64]) -> Self {
        Self::new(Matrix::identity(spec, weights.len()), weights.to_vec()).expect("identity is invertible")
    }

    /// The trivial cocharacter of GL_n.
    pub fn trivial(spec: FieldSpec, n: usize) -> Self {
        Self::diagonal(spec, &vec![0; n])
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn spec(&self) -> FieldSpec {
        self.base_change.spec()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn base_change(&self) -> &Matrix {
        &self.base_change
    }

    pub fn base_inverse(&self) -> &Matrix {
        &self.base_inverse
    }

    pub fn is_trivial(&self) -> bool {
        self.weights.iter().all(|&w| w == 0)
    }

    pub fn weight_sum(&self) -> i64 {
        self.weights.iter().sum()
    }

    /// Distinct weights, decreasing.
    pub fn distinct_weights(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.weights.clone();
        d.dedup();
        d
    }

    /// Columns spanning the eigenspace on which `λ(t)` acts by `t^d`.
    pub fn eigenspace(&self, d: i64) -> Matrix {
        let cols: Vec<usize> = (0..self.dim()).filter(|&i| self.weights[i] == d).collect();
        self.base_change.select_columns(&cols)
    }

    /// Projector onto the weight-`d` eigenspace along the others.
    pub fn projector(&self, d: i64) -> Matrix {
        let spec = self.spec();
        let mask: Vec<FieldElement> = self
            .weights
            .iter()
            .map(|&w| if w == d { FieldElement::one(spec) } else { FieldElement::zero(spec) })
            .collect();
        &(&self.base_change * &Matrix::diagonal(spec, &mask)) * &self.base_inverse
    }

    /// `λ(t)` at a nonzero field element.
    pub fn evaluate(&self, t: &FieldElement) -> Matrix {
        let d: Vec<FieldElement> = self.weights.iter().map(|&w| t.pow(w)).collect();
        &(&self.base_change * &Matrix::diagonal(self.spec(), &d)) * &self.base_inverse
    }

    /// The exponents `w` with `λ(t) = diag(t^{w_1}, .., t^{w_n})`, if `λ`
    /// is diagonal in the standard basis.
    pub fn diagonal_weights(&self) -> Option<Vec<i64>> {
        let mut out = vec![0; self.dim()];
        for d in self.distinct_weights() {
            let p = self.projector(d);
            if !p.is_diagonal() {
                return None;
            }
            for (i, w) in out.iter_mut().enumerate() {
                if p.get(i, i).is_one() {
                    *w = d;
                }
            }
        }
        Some(out)
    }

    /// The same map composed with `t ↦ t^k` for `k > 0`.
    pub fn scaled(&self, k: i64) -> Self {
        assert!(k > 0, "scaling must be positive to keep canonical order");
        Cocharacter {
            base_change: self.base_change.clone(),
            base_inverse: self.base_inverse.clone(),
            weights: self.weights.iter().map(|w| w * k).collect(),
        }
    }

    pub fn embed(&self, target: FieldSpec) -> Result<Self, CocharError> {
        Ok(Cocharacter {
            base_change: self.base_change.embed(target)?,
            base_inverse: self.base_inverse.embed(target)?,
            weights: self.weights.clone(),
        })
    }

    /// Weights made primitive (divided by their gcd).
    pub fn primitive(&self) -> Self {
        let g = self.weights.iter().fold(0i64, |a, &w| num_integer::gcd(a, w));
        if g <= 1 {
            return self.clone();
        }
        Cocharacter {
            base_change: self.base_change.clone(),
            base_inverse: self.base_inverse.clone(),
            weights: self.weights.iter().map(|w| w / g).collect(),
        }
    }

    fn check_group_element(&self, g: &Matrix) -> Result<Matrix, CocharError> {
        if g.rows() != self.dim() || !g.is_square() {
            return Err(CocharError::DimensionMismatch { expected: self.dim(), found: g.rows() });
        }
        if g.spec() != self.spec() {
            return Err(CocharError::FieldMismatch(self.spec(), g.spec()));
        }
        if !g.is_invertible() {
            return Err(CocharError::Singular);
        }
        Ok(&(&self.base_inverse * g) * &self.base_change)
    }

    /// `g ∈ P_λ`: `λ(t) g λ(t)⁻¹` has a limit, i.e. no entry of `g` in the
    /// eigenbasis sits at negative weight `w_i − w_j`.
    pub fn p_lambda_contains(&self, g: &Matrix) -> Result<bool, CocharError> {
        let y = self.check_group_element(g)?;
        let n = self.dim();
        Ok((0..n).all(|i| (0..n).all(|j| self.weights[i] >= self.weights[j] || y.get(i, j).is_zero())))
    }

    /// `g ∈ L_λ = C_G(λ)`: only weight-zero blocks are nonzero.
    pub fn l_lambda_contains(&self, g: &Matrix) -> Result<bool, CocharError> {
        let y = self.check_group_element(g)?;
        let n = self.dim();
        Ok((0..n).all(|i| (0..n).all(|j| self.weights[i] == self.weights[j] || y.get(i, j).is_zero())))
    }

    /// `g ∈ R_u(P_λ)`: the conjugation limit is the identity.
    pub fn ru_p_lambda_contains(&self, g: &Matrix) -> Result<bool, CocharError> {
        let y = self.check_group_element(g)?;
        let n = self.dim();
        Ok((0..n).all(|i| {
            (0..n).all(|j| {
                let (wi, wj) = (self.weights[i], self.weights[j]);
                let e = y.get(i, j);
                if wi < wj {
                    e.is_zero()
                } else if wi == wj {
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                } else {
                    true
                }
            })
        }))
    }
}

/// `(g·λ)(t) = g λ(t) g⁻¹`, returned in canonical form.
pub fn act_on_cocharacter(g: &Matrix, lambda: &Cocharacter) -> Result<Cocharacter, CocharError> {
    if g.rows() != lambda.dim() || !g.is_square() {
        return Err(CocharError::DimensionMismatch { expected: lambda.dim(), found: g.rows() });
    }
    Cocharacter::new(g * lambda.base_change(), lambda.weights().to_vec())
}

/// A point of one of the supported GL_n-varieties. The variant is the
/// action kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Point {
    /// A column vector, acted on by `g·v`.
    LinearOnVector(Matrix),
    /// A tuple of square matrices, acted on by simultaneous conjugation.
    ConjugationOnTuple(Vec<Matrix>),
    /// `g·(x, y) = (g·x, g·y)`.
    DiagonalProduct(Box<Point>, Box<Point>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ActionKind {
    LinearOnVector,
    ConjugationOnTuple,
    DiagonalProduct,
}

impl Point {
    pub fn kind(&self) -> ActionKind {
        match self {
            Point::LinearOnVector(_) => ActionKind::LinearOnVector,
            Point::ConjugationOnTuple(_) => ActionKind::ConjugationOnTuple,
            Point::DiagonalProduct(..) => ActionKind::DiagonalProduct,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Point::LinearOnVector(v) => v.is_zero(),
            Point::ConjugationOnTuple(t) => t.iter().all(Matrix::is_zero),
            Point::DiagonalProduct(a, b) => a.is_zero() && b.is_zero(),
        }
    }

    /// `g·x` given `g` and `g⁻¹`.
    pub fn act(&self, g: &Matrix, g_inv: &Matrix) -> Point {
        match self {
            Point::LinearOnVector(v) => Point::LinearOnVector(g * v),
            Point::ConjugationOnTuple(t) => Point::ConjugationOnTuple(t.iter().map(|x| x.conjugate_by(g, g_inv)).collect()),
            Point::DiagonalProduct(a, b) => {
                Point::DiagonalProduct(Box::new(a.act(g, g_inv)), Box::new(b.act(g, g_inv)))
            }
        }
    }

    pub fn add(&self, o: &Point) -> Point {
        match (self, o) {
            (Point::LinearOnVector(a), Point::LinearOnVector(b)) => Point::LinearOnVector(a + b),
            (Point::ConjugationOnTuple(a), Point::ConjugationOnTuple(b)) => {
                Point::ConjugationOnTuple(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Point::DiagonalProduct(a1, b1), Point::DiagonalProduct(a2, b2)) => {
                Point::DiagonalProduct(Box::new(a1.add(a2)), Box::new(b1.add(b2)))
            }
            _ => panic!("adding points of different shapes"),
        }
    }

    /// Same shape, all entries zero.
    pub fn zero_like(&self) -> Point {
        self.map_entries(&mut |m| Matrix::zeros(m.spec(), m.rows(), m.cols()))
    }

    fn map_entries(&self, f: &mut impl FnMut(&Matrix) -> Matrix) -> Point {
        match self {
            Point::LinearOnVector(v) => Point::LinearOnVector(f(v)),
            Point::ConjugationOnTuple(t) => Point::ConjugationOnTuple(t.iter().map(&mut *f).collect()),
            Point::DiagonalProduct(a, b) => {
                let a = a.map_entries(f);
                let b = b.map_entries(f);
                Point::DiagonalProduct(Box::new(a), Box::new(b))
            }
        }
    }

    pub fn embed(&self, target: FieldSpec) -> Result<Point, FieldError> {
        let mut err = None;
        let out = self.map_entries(&mut |m| match m.embed(target) {
            Ok(x) => x,
            Err(e) => {
                err = Some(e);
                m.clone()
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// All matrices of the point (vectors included), left to right.
    pub fn matrices(&self) -> Vec<&Matrix> {
        match self {
            Point::LinearOnVector(v) => vec![v],
            Point::ConjugationOnTuple(t) => t.iter().collect(),
            Point::DiagonalProduct(a, b) => {
                let mut m = a.matrices();
                m.extend(b.matrices());
                m
            }
        }
    }

    /// The field of the entries, if the point has any.
    pub fn spec(&self) -> Option<FieldSpec> {
        self.matrices().first().map(|m| m.spec())
    }

    /// Center of GL_n acts trivially (pure conjugation).
    pub fn center_acts_trivially(&self) -> bool {
        match self {
            Point::LinearOnVector(_) => false,
            Point::ConjugationOnTuple(_) => true,
            Point::DiagonalProduct(a, b) => a.center_acts_trivially() && b.center_acts_trivially(),
        }
    }

    fn validate(&self, n: usize) -> Result<(), CocharError> {
        match self {
            Point::LinearOnVector(v) => {
                if v.rows() != n || v.cols() != 1 {
                    return Err(CocharError::InvalidInstance(format!("vector must be {n}x1, got {}x{}", v.rows(), v.cols())));
                }
            }
            Point::ConjugationOnTuple(t) => {
                if let Some(m) = t.iter().find(|m| m.rows() != n || m.cols() != n) {
                    return Err(CocharError::InvalidInstance(format!(
                        "tuple entries must be {n}x{n}, got {}x{}",
                        m.rows(),
                        m.cols()
                    )));
                }
            }
            Point::DiagonalProduct(a, b) => {
                a.validate(n)?;
                b.validate(n)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DetConstraint {
    #[serde(rename = "SL")]
    Sl,
}

/// A point of a GL_n- or SL_n-variety.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ActionInstanceJson", into = "ActionInstanceJson")]
pub struct ActionInstance {
    point: Point,
    ambient_dim: usize,
    det_constraint: Option<DetConstraint>,
}

#[derive(Serialize, Deserialize)]
struct ActionInstanceJson {
    ambient_dim: usize,
    #[serde(default)]
    det_constraint: Option<DetConstraint>,
    point: Point,
}

impl TryFrom<ActionInstanceJson> for ActionInstance {
    type Error = CocharError;
    fn try_from(j: ActionInstanceJson) -> Result<Self, CocharError> {
        ActionInstance::new(j.point, j.ambient_dim, j.det_constraint)
    }
}

impl From<ActionInstance> for ActionInstanceJson {
    fn from(a: ActionInstance) -> Self {
        ActionInstanceJson { ambient_dim: a.ambient_dim, det_constraint: a.det_constraint, point: a.point }
    }
}

impl ActionInstance {
    pub fn new(point: Point, ambient_dim: usize, det_constraint: Option<DetConstraint>) -> Result<Self, CocharError> {
        point.validate(ambient_dim)?;
        let specs: BTreeSet<FieldSpec> = point.matrices().iter().map(|m| m.spec()).collect();
        if specs.len() > 1 {
            let v: Vec<FieldSpec> = specs.into_iter().collect();
            return Err(CocharError::FieldMismatch(v[0], v[1]));
        }
        Ok(ActionInstance { point, ambient_dim, det_constraint })
    }

    pub fn tuple(entries: Vec<Matrix>) -> Result<Self, CocharError> {
        let n = entries.first().map(Matrix::rows).ok_or_else(|| CocharError::InvalidInstance("empty tuple".into()))?;
        Self::new(Point::ConjugationOnTuple(entries), n, None)
    }

    pub fn vector(v: Matrix, det_constraint: Option<DetConstraint>) -> Result<Self, CocharError> {
        let n = v.rows();
        Self::new(Point::LinearOnVector(v), n, det_constraint)
    }

    pub fn point(&self) -> &Point {
        &self.point
    }

    pub fn kind(&self) -> ActionKind {
        self.point.kind()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn det_constraint(&self) -> Option<DetConstraint> {
        self.det_constraint
    }

    pub fn spec(&self) -> Option<FieldSpec> {
        self.point.spec()
    }

    pub fn with_point(&self, point: Point) -> Self {
        ActionInstance { point, ..self.clone() }
    }

    /// `g·x`. Panics if `g` is singular.
    pub fn act(&self, g: &Matrix) -> ActionInstance {
        let g_inv = g.inverse().expect("group element must be invertible");
        self.with_point(self.point.act(g, &g_inv))
    }

    pub fn embed(&self, target: FieldSpec) -> Result<Self, CocharError> {
        Ok(self.with_point(self.point.embed(target)?))
    }

    fn check(&self, lambda: &Cocharacter) -> Result<(), CocharError> {
        if lambda.dim() != self.ambient_dim {
            return Err(CocharError::DimensionMismatch { expected: self.ambient_dim, found: lambda.dim() });
        }
        if let Some(s) = self.spec() {
            if s != lambda.spec() {
                return Err(CocharError::FieldMismatch(s, lambda.spec()));
            }
        }
        if self.det_constraint == Some(DetConstraint::Sl) && lambda.weight_sum() != 0 {
            return Err(CocharError::TraceNonzero(lambda.weight_sum()));
        }
        Ok(())
    }
}

/// Point coordinates in λ's eigenbasis, with the weight of every entry.
fn to_eigen(p: &Point, l: &Cocharacter) -> Point {
    // g⁻¹·x
    p.act(l.base_inverse(), l.base_change())
}

fn from_eigen(p: &Point, l: &Cocharacter) -> Point {
    p.act(l.base_change(), l.base_inverse())
}

fn mask_eigen(p: &Point, w: &[i64], keep: &impl Fn(i64) -> bool) -> Point {
    match p {
        Point::LinearOnVector(v) => {
            let spec = v.spec();
            Point::LinearOnVector(Matrix::from_fn(spec, v.rows(), 1, |i, _| {
                if keep(w[i]) {
                    v.get(i, 0).clone()
                } else {
                    FieldElement::zero(spec)
                }
            }))
        }
        Point::ConjugationOnTuple(t) => Point::ConjugationOnTuple(
            t.iter()
                .map(|m| {
                    let spec = m.spec();
                    Matrix::from_fn(spec, m.rows(), m.cols(), |i, j| {
                        if keep(w[i] - w[j]) {
                            m.get(i, j).clone()
                        } else {
                            FieldElement::zero(spec)
                        }
                    })
                })
                .collect(),
        ),
        Point::DiagonalProduct(a, b) => {
            Point::DiagonalProduct(Box::new(mask_eigen(a, w, keep)), Box::new(mask_eigen(b, w, keep)))
        }
    }
}

fn support_eigen(p: &Point, w: &[i64], out: &mut BTreeSet<i64>) {
    match p {
        Point::LinearOnVector(v) => {
            for i in 0..v.rows() {
                if !v.get(i, 0).is_zero() {
                    out.insert(w[i]);
                }
            }
        }
        Point::ConjugationOnTuple(t) => {
            for m in t {
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        if !m.get(i, j).is_zero() {
                            out.insert(w[i] - w[j]);
                        }
                    }
                }
            }
        }
        Point::DiagonalProduct(a, b) => {
            support_eigen(a, w, out);
            support_eigen(b, w, out);
        }
    }
}

/// Decomposition of a point into λ-weight components: `λ(t)` multiplies
/// the component of weight `d` by `t^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightGrading {
    pub components: BTreeMap<i64, Point>,
}

impl WeightGrading {
    pub fn weights(&self) -> Vec<i64> {
        self.components.keys().copied().collect()
    }

    /// Sum of all components.
    pub fn reconstruct(&self) -> Option<Point> {
        let mut it = self.components.values();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, p| acc.add(p)))
    }

    /// `λ(t)·x` evaluated from the grading at a nonzero `t`.
    pub fn evaluate(&self, t: &FieldElement) -> Option<Point> {
        let scaled: Vec<Point> = self
            .components
            .iter()
            .map(|(&d, p)| {
                let s = t.pow(d);
                p.map_entries(&mut |m| m.scale(&s))
            })
            .collect();
        let mut it = scaled.into_iter();
        let first = it.next()?;
        Some(it.fold(first, |acc, p| acc.add(&p)))
    }
}

/// Splits `x` into λ-weight components. Only nonzero components are kept,
/// except that the zero point grades as a single weight-0 component.
pub fn grade(x: &ActionInstance, lambda: &Cocharacter) -> Result<WeightGrading, CocharError> {
    x.check(lambda)?;
    let w = lambda.weights();
    let eig = to_eigen(x.point(), lambda);
    let mut support = BTreeSet::new();
    support_eigen(&eig, w, &mut support);
    let mut components = BTreeMap::new();
    if support.is_empty() {
        components.insert(0, x.point().clone());
    }
    for d in support {
        let part = mask_eigen(&eig, w, &|e| e == d);
        components.insert(d, from_eigen(&part, lambda));
    }
    Ok(WeightGrading { components })
}

/// Result of `lim_{t→0} λ(t)·x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitOutcome {
    pub exists: bool,
    pub value: Option<Point>,
    /// Negative weights carrying nonzero components, increasing.
    pub negative_support: Vec<i64>,
}

pub fn limit(x: &ActionInstance, lambda: &Cocharacter) -> Result<LimitOutcome, CocharError> {
    x.check(lambda)?;
    let w = lambda.weights();
    let eig = to_eigen(x.point(), lambda);
    let mut support = BTreeSet::new();
    support_eigen(&eig, w, &mut support);
    let negative_support: Vec<i64> = support.iter().copied().filter(|&d| d < 0).collect();
    if !negative_support.is_empty() {
        return Ok(LimitOutcome { exists: false, value: None, negative_support });
    }
    let zero_part = mask_eigen(&eig, w, &|e| e == 0);
    Ok(LimitOutcome { exists: true, value: Some(from_eigen(&zero_part, lambda)), negative_support })
}

/// True when `λ(t)·x = x` for all `t`.
pub fn is_fixed(x: &ActionInstance, lambda: &Cocharacter) -> Result<bool, CocharError> {
    Ok(grade(x, lambda)?.components.keys().all(|&d| d == 0))
}

fn require_ru(lambda: &Cocharacter, u: &Matrix) -> Result<Matrix, CocharError> {
    if !lambda.ru_p_lambda_contains(u)? {
        return Err(CocharError::Precondition("u is not in R_u(P_λ)".into()));
    }
    u.inverse().ok_or(CocharError::Singular)
}

/// Both sides of the equivalence "the limit `x'` equals `u·x` iff `u⁻¹·λ`
/// fixes `x`", for `u ∈ R_u(P_λ)`.
pub fn check_conjfixed(x: &ActionInstance, lambda: &Cocharacter, u: &Matrix) -> Result<(bool, bool), CocharError> {
    let u_inv = require_ru(lambda, u)?;
    let lim = limit(x, lambda)?;
    let Some(value) = lim.value else {
        return Err(CocharError::Precondition("limit along λ does not exist".into()));
    };
    let lhs = value == x.point().act(u, &u_inv);
    let mu = act_on_cocharacter(&u_inv, lambda)?;
    let rhs = is_fixed(x, &mu)?;
    Ok((lhs, rhs))
}

/// For `u ∈ R_u(P_λ)` and `x' = lim λ(t)·x`: the limit along `u·λ` exists
/// and equals `u·x'`.
pub fn check_conjlim(x: &ActionInstance, lambda: &Cocharacter, u: &Matrix) -> Result<bool, CocharError> {
    let u_inv = require_ru(lambda, u)?;
    let lim = limit(x, lambda)?;
    let Some(value) = lim.value else {
        return Err(CocharError::Precondition("limit along λ does not exist".into()));
    };
    let mu = act_on_cocharacter(u, lambda)?;
    let lim_mu = limit(x, &mu)?;
    Ok(lim_mu.exists && lim_mu.value == Some(value.act(u, &u_inv)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn diagonal_weights_round_trip() {
        let l = Cocharacter::diagonal(q(), &[0, 1, -1]);
        assert_eq!(l.weights(), &[1, 0, -1]);
        assert_eq!(l.diagonal_weights(), Some(vec![0, 1, -1]));
        let g = Matrix::from_i64(q(), &[&[1, 1], &[0, 1]]);
        assert_eq!(Cocharacter::new(g, vec![1, 0]).unwrap().diagonal_weights(), None);
    }

    fn gl2_x(a: i64) -> ActionInstance {
        ActionInstance::tuple(vec![
            Matrix::from_i64(q(), &[&[1, 0], &[0, a]]),
            Matrix::from_i64(q(), &[&[1, 1], &[0, 1]]),
        ])
        .unwrap()
    }

    #[test]
    fn grading_of_fixed_vector_h() {
        let h = ActionInstance::vector(Matrix::from_i64(q(), &[&[0], &[1], &[0]]), Some(DetConstraint::Sl)).unwrap();
        let lambda = Cocharacter::diagonal(q(), &[0, 1, -1]);
        let g = grade(&h, &lambda).unwrap();
        assert_eq!(g.weights(), vec![1]);
        let lim = limit(&h, &lambda).unwrap();
        assert!(lim.exists);
        assert!(lim.value.unwrap().is_zero());
    }

    #[test]
    fn grading_of_gl2_example() {
        let x = gl2_x(2);
        let lambda = Cocharacter::diagonal(q(), &[1, -1]);
        let g = grade(&x, &lambda).unwrap();
        assert_eq!(g.weights(), vec![0, 2]);
        assert_eq!(g.reconstruct().unwrap(), *x.point());
        // λ(t)·x = ((1,0;0,a),(1,t²;0,1)) at t = 3
        let at3 = g.evaluate(&FieldElement::from_i64(q(), 3)).unwrap();
        let expected = Point::ConjugationOnTuple(vec![
            Matrix::from_i64(q(), &[&[1, 0], &[0, 2]]),
            Matrix::from_i64(q(), &[&[1, 9], &[0, 1]]),
        ]);
        assert_eq!(at3, expected);
        let lim = limit(&x, &lambda).unwrap();
        let expected_limit = Point::ConjugationOnTuple(vec![
            Matrix::from_i64(q(), &[&[1, 0], &[0, 2]]),
            Matrix::identity(q(), 2),
        ]);
        assert_eq!(lim.value, Some(expected_limit));
    }

    #[test]
    fn trivial_cocharacter_grades_at_zero() {
        let x = gl2_x(5);
        let g = grade(&x, &Cocharacter::trivial(q(), 2)).unwrap();
        assert_eq!(g.weights(), vec![0]);
    }

    #[test]
    fn lower_nilpotent_has_no_limit() {
        let x = ActionInstance::tuple(vec![Matrix::from_i64(q(), &[&[0, 0], &[1, 0]])]).unwrap();
        let lim = limit(&x, &Cocharacter::diagonal(q(), &[1, -1])).unwrap();
        assert!(!lim.exists);
        assert_eq!(lim.negative_support, vec![-2]);
    }

    #[test]
    fn parabolic_membership() {
        let l = Cocharacter::diagonal(q(), &[1, -1]);
        let upper = Matrix::from_i64(q(), &[&[1, 1], &[0, 1]]);
        let lower = Matrix::from_i64(q(), &[&[1, 0], &[1, 1]]);
        assert!(l.p_lambda_contains(&upper).unwrap());
        assert!(!l.p_lambda_contains(&lower).unwrap());
        assert!(Cocharacter::trivial(q(), 2).p_lambda_contains(&lower).unwrap());
        let d = Matrix::from_i64(q(), &[&[2, 0], &[0, 3]]);
        assert!(l.l_lambda_contains(&d).unwrap());
        assert!(!l.ru_p_lambda_contains(&d).unwrap());
        assert!(l.ru_p_lambda_contains(&Matrix::from_i64(q(), &[&[1, 5], &[0, 1]])).unwrap());
        assert_eq!(l.p_lambda_contains(&Matrix::zeros(q(), 2, 2)), Err(CocharError::Singular));
    }

    #[test]
    fn acting_on_cocharacters() {
        let l = Cocharacter::diagonal(q(), &[1, -1]);
        assert_eq!(act_on_cocharacter(&Matrix::identity(q(), 2), &l).unwrap(), l);
        let swap = Matrix::from_i64(q(), &[&[0, 1], &[1, 0]]);
        let s = act_on_cocharacter(&swap, &l).unwrap();
        assert_eq!(s.weights(), &[1, -1]);
        assert_eq!(s.base_change(), &swap);
        let g = Matrix::from_i64(q(), &[&[1, 2], &[3, 7]]);
        let gl = act_on_cocharacter(&g, &l).unwrap();
        for t in [2, 3] {
            let t = FieldElement::from_i64(q(), t);
            let direct = &(&g * &l.evaluate(&t)) * &g.inverse().unwrap();
            assert_eq!(gl.evaluate(&t), direct);
        }
    }

    #[test]
    fn sl_instances_reject_unbalanced_weights() {
        let h = ActionInstance::vector(Matrix::from_i64(q(), &[&[0], &[1], &[0]]), Some(DetConstraint::Sl)).unwrap();
        assert_eq!(limit(&h, &Cocharacter::diagonal(q(), &[1, 1, 0])), Err(CocharError::TraceNonzero(2)));
    }

    #[test]
    fn conjfixed_identity_and_gl2() {
        let x = gl2_x(2);
        let l = Cocharacter::diagonal(q(), &[1, -1]);
        let (lhs, rhs) = check_conjfixed(&x, &l, &Matrix::identity(q(), 2)).unwrap();
        assert_eq!((lhs, rhs), (false, false));
        for c in -3..=3 {
            let u = Matrix::from_i64(q(), &[&[1, c], &[0, 1]]);
            let (lhs, rhs) = check_conjfixed(&x, &l, &u).unwrap();
            assert!(!lhs);
            assert_eq!(lhs, rhs);
            assert!(check_conjlim(&x, &l, &u).unwrap());
        }
    }

    #[test]
    fn conjfixed_constructed_instance() {
        let l = Cocharacter::diagonal(q(), &[1, -1]);
        let x0 = ActionInstance::tuple(vec![Matrix::from_i64(q(), &[&[1, 0], &[0, 4]])]).unwrap();
        let u = Matrix::from_i64(q(), &[&[1, 3], &[0, 1]]);
        let y = x0.act(&u.inverse().unwrap());
        let (lhs, rhs) = check_conjfixed(&y, &l, &u).unwrap();
        assert!(lhs && rhs);
    }

    #[test]
    fn conj_checks_need_unipotent_radical() {
        let x = gl2_x(2);
        let l = Cocharacter::diagonal(q(), &[1, -1]);
        let lower = Matrix::from_i64(q(), &[&[1, 0], &[1, 1]]);
        assert!(matches!(check_conjlim(&x, &l, &lower), Err(CocharError::Precondition(_))));
    }

    #[test]
    fn instance_json_round_trip() {
        let x = gl2_x(2);
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.contains("\"conjugation_on_tuple\""));
        let back: ActionInstance = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let l = Cocharacter::diagonal(q(), &[-1, 1]);
        let js = serde_json::to_value(&l).unwrap();
        assert_eq!(js["weights"], serde_json::json!([1, -1]));
    }
}
