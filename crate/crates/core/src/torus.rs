//! Torus actions on linear spaces: closedness and instability through the
//! convex hull of the weight support, decided by exact LPs, and optimal
//! destabilizers from the exact min-norm point of that hull.
//!
//! Sign convention: a cocharacter `w` multiplies a coordinate of weight `χ`
//! by `t^{⟨χ, w⟩}`, so the limit along `w` exists iff `⟨χ, w⟩ ≥ 0` on the
//! support. Separating normals and destabilizers therefore point towards
//! the hull, i.e. along the min-norm point `m`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{solve_linear, LinearSolution};
use crate::lp::{maximize, LpOutcome};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("weight {index} has length {found}, expected rank {rank}")]
    Rank { index: usize, found: usize, rank: usize },
    #[error("support is not unstable (0 lies in its convex hull)")]
    NotUnstable,
    #[error("{0} coordinates for {1} weights")]
    CoordinateCount(usize, usize),
    #[error("bad rational {0:?}")]
    Parse(String),
}

/// Distinct characters of the torus carrying nonzero coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SupportJson", into = "SupportJson")]
pub struct WeightSupport {
    rank: usize,
    weights: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct SupportJson {
    rank: usize,
    weights: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<String>>,
}

impl TryFrom<SupportJson> for WeightSupport {
    type Error = TorusError;
    fn try_from(j: SupportJson) -> Result<Self, TorusError> {
        WeightSupport::new(j.rank, j.weights)
    }
}

impl From<WeightSupport> for SupportJson {
    fn from(s: WeightSupport) -> Self {
        SupportJson { rank: s.rank, weights: s.weights, coords: None }
    }
}

impl WeightSupport {
    /// Sorts and collapses duplicates.
    pub fn new(rank: usize, mut weights: Vec<Vec<i64>>) -> Result<Self, TorusError> {
        for (index, w) in weights.iter().enumerate() {
            if w.len() != rank {
                return Err(TorusError::Rank { index, found: w.len(), rank });
            }
        }
        weights.sort();
        weights.dedup();
        Ok(WeightSupport { rank, weights })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Every weight multiplied by `k`.
    pub fn scaled(&self, k: i64) -> WeightSupport {
        WeightSupport::new(self.rank, self.weights.iter().map(|w| w.iter().map(|x| x * k).collect()).collect())
            .expect("same rank")
    }
}

/// A point of a torus representation in an eigenbasis: one character and
/// one coordinate per basis vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusPoint {
    pub rank: usize,
    pub weights: Vec<Vec<i64>>,
    pub coords: Vec<FieldElement>,
}

impl TorusPoint {
    pub fn new(rank: usize, weights: Vec<Vec<i64>>, coords: Vec<FieldElement>) -> Result<Self, TorusError> {
        if weights.len() != coords.len() {
            return Err(TorusError::CoordinateCount(coords.len(), weights.len()));
        }
        for (index, w) in weights.iter().enumerate() {
            if w.len() != rank {
                return Err(TorusError::Rank { index, found: w.len(), rank });
            }
        }
        Ok(TorusPoint { rank, weights, coords })
    }

    /// Reads `{"rank", "weights", "coords"}` with rational coordinates.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, TorusError> {
        let j: SupportJson = serde_json::from_value(v.clone()).map_err(|e| TorusError::Parse(e.to_string()))?;
        let coords = j
            .coords
            .unwrap_or_default()
            .iter()
            .map(|s| FieldElement::parse(FieldSpec::Q, s).map_err(|_| TorusError::Parse(s.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        TorusPoint::new(j.rank, j.weights, coords)
    }

    pub fn support(&self) -> WeightSupport {
        let ws = self.weights.iter().zip(&self.coords).filter(|(_, c)| !c.is_zero()).map(|(w, _)| w.clone()).collect();
        WeightSupport::new(self.rank, ws).expect("validated rank")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvexKind {
    InRelativeInterior,
    OnBoundary,
    Outside,
}

/// Where 0 sits relative to the convex hull of the support, with a
/// rational witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexCertificate {
    pub kind: ConvexKind,
    /// Zero for `InRelativeInterior`; otherwise `⟨χ, normal⟩ ≥ 0` on the
    /// support, strictly positive everywhere for `Outside` and somewhere
    /// for `OnBoundary`.
    pub normal: Vec<i64>,
    /// Convex coefficients with `Σ c_i χ_i = 0` when 0 is in the hull.
    #[serde(with = "rational_list")]
    pub witness: Option<Vec<BigRational>>,
}

impl ConvexCertificate {
    pub fn is_closed(&self) -> bool {
        self.kind == ConvexKind::InRelativeInterior
    }

    /// Re-checks the certificate's inequalities against a support.
    pub fn check(&self, s: &WeightSupport) -> bool {
        let pair = |w: &Vec<i64>| w.iter().zip(&self.normal).map(|(a, b)| a * b).sum::<i64>();
        let witness_ok = |strict: bool| match &self.witness {
            None => false,
            Some(c) => {
                c.len() == s.weights.len()
                    && c.iter().all(|x| if strict { x.is_positive() } else { !x.is_negative() })
                    && c.iter().fold(BigRational::zero(), |a, x| a + x) == BigRational::one()
                    && (0..s.rank).all(|k| {
                        c.iter().zip(&s.weights).fold(BigRational::zero(), |a, (x, w)| a + x * BigRational::from_integer(w[k].into()))
                            == BigRational::zero()
                    })
            }
        };
        match self.kind {
            ConvexKind::InRelativeInterior => s.is_empty() || witness_ok(true),
            ConvexKind::OnBoundary => {
                witness_ok(false) && s.weights.iter().all(|w| pair(w) >= 0) && s.weights.iter().any(|w| pair(w) > 0)
            }
            ConvexKind::Outside => s.weights.iter().all(|w| pair(w) > 0),
        }
    }
}

/// A convex certificate together with the support it speaks about, as
/// emitted and re-checked by the CLI. The three kinds exclude each other,
/// so a passing check settles the verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportCertificate {
    pub support: WeightSupport,
    pub certificate: ConvexCertificate,
}

impl SupportCertificate {
    pub fn new(support: WeightSupport) -> Self {
        let certificate = torus_orbit_closed(&support);
        SupportCertificate { support, certificate }
    }

    pub fn verify(&self) -> bool {
        self.support.weights.iter().all(|w| w.len() == self.support.rank)
            && self.certificate.normal.len() == self.support.rank
            && self.certificate.check(&self.support)
    }
}

mod rational_list {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigRational>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|xs| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigRational>>, D::Error> {
        let raw: Option<Vec<String>> = Option::deserialize(d)?;
        raw.map(|xs| xs.iter().map(|x| x.parse::<BigRational>().map_err(serde::de::Error::custom)).collect()).transpose()
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn dot_int(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Feasibility data for `Σ c_i χ_i = 0`, `Σ c_i = 1`, `c ≥ 0`: columns are
/// `extra` leading variables followed by one per weight.
fn hull_rows(s: &WeightSupport, lead: &[BigRational], lead_sum: BigRational) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for k in 0..s.rank {
        let mut row: Vec<BigRational> = lead.iter().map(|c| c * q(s.weights.iter().map(|w| w[k]).sum())).collect();
        row.extend(s.weights.iter().map(|w| q(w[k])));
        a.push(row);
        b.push(BigRational::zero());
    }
    let mut row: Vec<BigRational> = lead.iter().map(|_| lead_sum.clone()).collect();
    row.extend(s.weights.iter().map(|_| BigRational::one()));
    a.push(row);
    b.push(BigRational::one());
    (a, b)
}

pub fn torus_orbit_closed(s: &WeightSupport) -> ConvexCertificate {
    let zero_normal = vec![0; s.rank];
    if s.is_empty() {
        return ConvexCertificate { kind: ConvexKind::InRelativeInterior, normal: zero_normal, witness: Some(vec![]) };
    }
    let n = s.weights.len();
    // variables ε, s_1..s_N with c_i = ε + s_i; maximise ε
    let (a, b) = hull_rows(s, &[BigRational::one()], q(n as i64));
    let mut c = vec![BigRational::one()];
    c.extend((0..n).map(|_| BigRational::zero()));
    match maximize(&c, &a, &b) {
        LpOutcome::Infeasible => {
            let m = min_norm_point(s);
            ConvexCertificate { kind: ConvexKind::Outside, normal: primitive_integer(&m), witness: None }
        }
        LpOutcome::Unbounded => unreachable!("ε ≤ 1/N"),
        LpOutcome::Optimal { x, value } => {
            let witness: Vec<BigRational> = x[1..].iter().map(|si| si + &value).collect();
            if value.is_positive() {
                ConvexCertificate { kind: ConvexKind::InRelativeInterior, normal: zero_normal, witness: Some(witness) }
            } else {
                ConvexCertificate { kind: ConvexKind::OnBoundary, normal: face_normal(s), witness: Some(witness) }
            }
        }
    }
}

/// A normal of the smallest face containing 0: zero on the weights that
/// can carry positive mass in a zero combination, positive on the rest.
fn face_normal(s: &WeightSupport) -> Vec<i64> {
    let n = s.weights.len();
    let r = s.rank;
    let (a, b) = hull_rows(s, &[], BigRational::zero());
    let inner: Vec<bool> = (0..n)
        .map(|i| {
            let c: Vec<BigRational> = (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect();
            matches!(maximize(&c, &a, &b), LpOutcome::Optimal { value, .. } if value.is_positive())
        })
        .collect();
    // variables v⁺ (r), v⁻ (r), one slack per outer weight; minimise Σ v±
    let outer: Vec<usize> = (0..n).filter(|&i| !inner[i]).collect();
    let width = 2 * r + outer.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        let mut row = vec![BigRational::zero(); width];
        for k in 0..r {
            row[k] = q(s.weights[i][k]);
            row[r + k] = -q(s.weights[i][k]);
        }
        if let Some(pos) = outer.iter().position(|&o| o == i) {
            row[2 * r + pos] = -BigRational::one();
            rhs.push(BigRational::one());
        } else {
            rhs.push(BigRational::zero());
        }
        rows.push(row);
    }
    let mut c = vec![-BigRational::one(); 2 * r];
    c.extend((0..outer.len()).map(|_| BigRational::zero()));
    match maximize(&c, &rows, &rhs) {
        LpOutcome::Optimal { x, .. } => {
            let v: Vec<BigRational> = (0..r).map(|k| &x[k] - &x[r + k]).collect();
            primitive_integer(&v)
        }
        o => unreachable!("a face normal always exists: {o:?}"),
    }
}

/// Smallest integer vector with the direction of `v` (zero stays zero).
pub fn primitive_integer(v: &[BigRational]) -> Vec<i64> {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return vec![0; v.len()];
    }
    ints.iter().map(|x| (x / &g).to_i64().expect("weights fit in i64")).collect()
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Exact min-norm point of the convex hull of the support (Wolfe's
/// algorithm; ties broken by lowest index).
pub fn min_norm_point(s: &WeightSupport) -> Vec<BigRational> {
    let pts: Vec<Vec<BigRational>> = s.weights.iter().map(|w| w.iter().map(|&x| q(x)).collect()).collect();
    if pts.is_empty() {
        return vec![BigRational::zero(); s.rank];
    }
    let combine = |set: &[usize], lam: &[BigRational]| -> Vec<BigRational> {
        (0..s.rank).map(|k| set.iter().zip(lam).fold(BigRational::zero(), |acc, (&i, l)| acc + l * &pts[i][k])).collect()
    };
    let start = (0..pts.len()).min_by_key(|&i| dot(&pts[i], &pts[i])).expect("nonempty");
    let mut set = vec![start];
    let mut lam = vec![BigRational::one()];
    let mut x = pts[start].clone();
    loop {
        let xx = dot(&x, &x);
        if xx.is_zero() {
            return x;
        }
        let j = (0..pts.len()).min_by_key(|&i| dot(&x, &pts[i])).expect("nonempty");
        if dot(&x, &pts[j]) >= xx || set.contains(&j) {
            return x;
        }
        set.push(j);
        lam.push(BigRational::zero());
        loop {
            let alpha = affine_minimizer(&set, &pts);
            if alpha.iter().all(|a| a.is_positive()) {
                lam = alpha;
                x = combine(&set, &lam);
                break;
            }
            let theta = lam
                .iter()
                .zip(&alpha)
                .filter(|(_, a)| !a.is_positive())
                .map(|(l, a)| l / (l - a))
                .min()
                .expect("some coefficient is non-positive");
            let mut next_set = Vec::new();
            let mut next_lam = Vec::new();
            for ((&i, l), a) in set.iter().zip(&lam).zip(&alpha) {
                let v = &theta * a + (BigRational::one() - &theta) * l;
                if v.is_positive() {
                    next_set.push(i);
                    next_lam.push(v);
                }
            }
            set = next_set;
            lam = next_lam;
        }
    }
}

/// Coefficients (summing to 1) of the point of the affine hull of `set`
/// nearest the origin.
fn affine_minimizer(set: &[usize], pts: &[Vec<BigRational>]) -> Vec<BigRational> {
    let k = set.len();
    let fe = |x: BigRational| FieldElement::Rational(x);
    let m = Matrix::from_fn(FieldSpec::Q, k + 1, k + 1, |i, j| match (i < k, j < k) {
        (true, true) => fe(dot(&pts[set[i]], &pts[set[j]])),
        (true, false) | (false, true) => FieldElement::one(FieldSpec::Q),
        (false, false) => FieldElement::zero(FieldSpec::Q),
    });
    let rhs = Matrix::from_fn(FieldSpec::Q, k + 1, 1, |i, _| if i == k { FieldElement::one(FieldSpec::Q) } else { FieldElement::zero(FieldSpec::Q) });
    match solve_linear(&m, &rhs) {
        LinearSolution::Consistent { particular, .. } => {
            (0..k).map(|i| particular.get(i, 0).as_rational().expect("rational").clone()).collect()
        }
        LinearSolution::Inconsistent => unreachable!("affine hull minimiser always exists"),
    }
}

/// The Kempf-optimal destabilizer: the primitive integer direction of the
/// min-norm point.
pub fn optimal_destabilizer(s: &WeightSupport) -> Result<Vec<i64>, TorusError> {
    if torus_orbit_closed(s).kind != ConvexKind::Outside {
        return Err(TorusError::NotUnstable);
    }
    Ok(primitive_integer(&min_norm_point(s)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusLimit {
    pub exists: bool,
    pub value: Option<Vec<FieldElement>>,
    /// Pairings `⟨χ, w⟩ < 0` met on the support, increasing and distinct.
    pub negative_support: Vec<i64>,
}

pub fn limit_along(p: &TorusPoint, w: &[i64]) -> TorusLimit {
    assert_eq!(w.len(), p.rank, "cocharacter rank");
    let mut neg: Vec<i64> = p
        .weights
        .iter()
        .zip(&p.coords)
        .filter(|(_, c)| !c.is_zero())
        .map(|(chi, _)| dot_int(chi, w))
        .filter(|&d| d < 0)
        .collect();
    neg.sort();
    neg.dedup();
    if !neg.is_empty() {
        return TorusLimit { exists: false, value: None, negative_support: neg };
    }
    let value = p
        .weights
        .iter()
        .zip(&p.coords)
        .map(|(chi, c)| if dot_int(chi, w) == 0 { c.clone() } else { FieldElement::zero(c.spec()) })
        .collect();
    TorusLimit { exists: true, value: Some(value), negative_support: vec![] }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn support(rank: usize, ws: &[&[i64]]) -> WeightSupport {
        WeightSupport::new(rank, ws.iter().map(|w| w.to_vec()).collect()).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn one_dimensional_cases() {
        let sym = support(1, &[&[1], &[-1]]);
        let c = torus_orbit_closed(&sym);
        assert_eq!(c.kind, ConvexKind::InRelativeInterior);
        assert!(c.check(&sym));
        let pos = support(1, &[&[1], &[2]]);
        let c = torus_orbit_closed(&pos);
        assert_eq!(c.kind, ConvexKind::Outside);
        assert_eq!(c.normal, vec![1]);
        assert!(c.check(&pos));
        let z = support(1, &[&[0]]);
        assert_eq!(torus_orbit_closed(&z).kind, ConvexKind::InRelativeInterior);
        assert!(torus_orbit_closed(&support(1, &[])).is_closed());
    }

    #[test]
    fn boundary_case() {
        let s = support(2, &[&[1, 0], &[-1, 0], &[0, 1]]);
        let c = torus_orbit_closed(&s);
        assert_eq!(c.kind, ConvexKind::OnBoundary);
        assert_eq!(c.normal, vec![0, 1]);
        assert!(c.check(&s));
    }

    #[test]
    fn min_norm_points() {
        assert_eq!(min_norm_point(&support(1, &[&[1], &[2]])), vec![rat(1, 1)]);
        assert_eq!(min_norm_point(&support(2, &[&[1, 0], &[0, 1]])), vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(min_norm_point(&support(2, &[&[2, 0], &[0, 2], &[1, 1]])), vec![rat(1, 1), rat(1, 1)]);
        assert_eq!(optimal_destabilizer(&support(2, &[&[2, 0], &[0, 2], &[1, 1]])).unwrap(), vec![1, 1]);
        assert_eq!(optimal_destabilizer(&support(1, &[&[1], &[2]])).unwrap(), vec![1]);
        assert_eq!(optimal_destabilizer(&support(1, &[&[1], &[-1]])), Err(TorusError::NotUnstable));
    }

    #[test]
    fn limits() {
        let spec = FieldSpec::Q;
        let one = FieldElement::one(spec);
        let p = TorusPoint::new(1, vec![vec![1], vec![2]], vec![one.clone(), one.clone()]).unwrap();
        let l = limit_along(&p, &[0]);
        assert_eq!(l.value, Some(p.coords.clone()));
        let l = limit_along(&p, &[1]);
        assert!(l.value.unwrap().iter().all(FieldElement::is_zero));
        assert!(!limit_along(&p, &[-1]).exists);
        let mixed = TorusPoint::new(1, vec![vec![1], vec![-1]], vec![one.clone(), one]).unwrap();
        assert_eq!(limit_along(&mixed, &[1]).negative_support, vec![-1]);
    }

    #[test]
    fn json_round_trip() {
        let s = support(2, &[&[1, 0], &[0, 1], &[1, 0]]);
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v, serde_json::json!({"rank": 2, "weights": [[0, 1], [1, 0]]}));
        let p = TorusPoint::from_json(&serde_json::json!({"rank": 1, "weights": [[1]], "coords": ["3/2"]})).unwrap();
        assert_eq!(p.coords[0], FieldElement::rational(3, 2));
        let c = torus_orbit_closed(&s);
        let back: ConvexCertificate = serde_json::from_value(serde_json::to_value(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
