//! The instance zoo: worked examples, constructed families, and the
//! property suites run over them.
//!
//! The corpus is bundled as JSON under `zoo/v1`; [`build_corpus`] is the
//! recipe that produced it and a unit test keeps the two in sync. Every
//! suite is deterministic given the seeds in `zoo/v1/config.json`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cochar::{act_on_cocharacter, check_conjfixed, check_conjlim, ActionInstance, Cocharacter, DetConstraint, Point};
use crate::field::{FieldElement, FieldSpec};
use crate::matrix::Matrix;
use crate::module::{
    brute_force_semisimple, centralizer_algebra, generic_tuple, invariant_complement, invariant_subspaces,
    is_semisimple_module, MatrixTuple,
};
use crate::orbit::{
    destabilizer_search, htog_check, is_orbit_closed_full, kraft_check, torus_of_centralizer,
    torus_of_centralizer_with_flag, two_varieties_check, verify, Certificate, ClosedReason, HtogOutcome, OrbitError,
    SubgroupSpec, TorusOfSubgroup, Verdict,
};
use crate::torus::{torus_orbit_closed, ConvexKind, WeightSupport};

pub const CORPUS_VERSION: &str = "v1";
pub const SUITES: [&str; 4] = ["gl2", "sl3", "lemmas", "theorems"];

const CONFIG_JSON: &str = include_str!("../zoo/v1/config.json");
const CORPUS_JSON: [(&str, &str); 4] = [
    ("worked", include_str!("../zoo/v1/worked.json")),
    ("two_varieties", include_str!("../zoo/v1/two_varieties.json")),
    ("htog", include_str!("../zoo/v1/htog.json")),
    ("kraft", include_str!("../zoo/v1/kraft.json")),
];

#[derive(Debug, Error)]
pub enum ZooError {
    #[error("unknown suite {0:?}; expected one of gl2, sl3, lemmas, theorems")]
    UnknownSuite(String),
    #[error("corpus file {file}: {message}")]
    Corpus { file: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub lemmas: u64,
    pub theorems: u64,
    pub sampling: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZooConfig {
    /// The parameter `a` of the GL₂ pair.
    pub a: i64,
    /// Coefficients (constant term first) of the modulus used for F_4.
    pub f4_modulus: Vec<u32>,
    pub bound: i64,
    pub seeds: Seeds,
}

/// The monic modulus of `spec`, constant term first.
fn full_modulus(spec: FieldSpec) -> Option<Vec<u32>> {
    spec.modulus().map(|low| low.iter().copied().chain([1]).collect())
}

pub fn config() -> ZooConfig {
    serde_json::from_str(CONFIG_JSON).expect("bundled config parses")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Tuple { tuple: MatrixTuple },
    Instance { instance: ActionInstance },
    /// Two tuples for the product-variety check.
    Pair { x: MatrixTuple, y: MatrixTuple },
    /// A point and a semisimple tuple of stabilizer elements.
    Stabilized { x: MatrixTuple, a: MatrixTuple },
    /// A tuple diagonal after conjugating by `conjugator⁻¹`.
    Diagonalizable { tuple: MatrixTuple, conjugator: Option<Matrix> },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub destabilizer_weights: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub both_not_closed: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub htog: Option<HtogOutcome>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// A worked example with displayed data.
    Worked { example: String },
    Constructed { recipe: String },
    Random { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZooInstance {
    pub id: String,
    pub description: String,
    pub payload: Payload,
    pub expected: Expected,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub id: String,
    pub passed: bool,
    /// Number of individual checks behind this entry.
    pub checked: usize,
    pub detail: Vec<String>,
    pub certificates: Vec<Certificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seeds: Vec<u64>,
    pub results: Vec<InstanceResult>,
    pub elapsed_ms: u64,
}

impl SuiteReport {
    fn new(suite: &str, seeds: Vec<u64>, mut results: Vec<InstanceResult>, started: Instant) -> Self {
        results.sort_by(|a, b| a.id.cmp(&b.id));
        SuiteReport { suite: suite.into(), seeds, results, elapsed_ms: started.elapsed().as_millis() as u64 }
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> Vec<&InstanceResult> {
        self.results.iter().filter(|r| !r.passed).collect()
    }

    pub fn certificates(&self) -> impl Iterator<Item = &Certificate> {
        self.results.iter().flat_map(|r| r.certificates.iter())
    }

    pub fn result(&self, id: &str) -> Option<&InstanceResult> {
        self.results.iter().find(|r| r.id == id)
    }

    /// The report with timing zeroed, for determinism comparisons.
    pub fn stripped(&self) -> SuiteReport {
        SuiteReport { elapsed_ms: 0, ..self.clone() }
    }
}

/// Accumulates the checks of one report entry.
struct Check {
    id: String,
    ok: bool,
    checked: usize,
    detail: Vec<String>,
    certificates: Vec<Certificate>,
}

impl Check {
    fn new(id: impl Into<String>) -> Self {
        Check { id: id.into(), ok: true, checked: 0, detail: vec![], certificates: vec![] }
    }

    fn expect(&mut self, cond: bool, what: impl Into<String>) {
        self.checked += 1;
        if !cond {
            self.ok = false;
            self.detail.push(format!("failed: {}", what.into()));
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.detail.push(what.into());
    }

    /// Re-verifies and archives a certificate.
    fn certificate(&mut self, c: &Certificate) {
        let r = verify(c);
        self.expect(r.is_ok(), format!("certificate re-verification: {r:?}"));
        self.certificates.push(c.clone());
    }

    fn finish(self) -> InstanceResult {
        InstanceResult { id: self.id, passed: self.ok, checked: self.checked, detail: self.detail, certificates: self.certificates }
    }
}

fn run(id: impl Into<String>, f: impl FnOnce(&mut Check) -> Result<(), OrbitError>) -> InstanceResult {
    let mut c = Check::new(id);
    if let Err(e) = f(&mut c) {
        c.ok = false;
        c.detail.push(format!("error: {e}"));
    }
    c.finish()
}

fn mat(spec: FieldSpec, rows: &[&[i64]]) -> Matrix {
    Matrix::from_i64(spec, rows)
}

fn tuple(ms: Vec<Matrix>) -> MatrixTuple {
    MatrixTuple::from_entries(ms).expect("uniform tuple")
}

fn diag(spec: FieldSpec, d: &[i64]) -> Matrix {
    Matrix::diagonal(spec, &d.iter().map(|&x| FieldElement::from_i64(spec, x)).collect::<Vec<_>>())
}

fn f4() -> FieldSpec {
    FieldSpec::finite(2, 2).expect("F_4")
}

// ---- the GL₂ pair ----

/// `x = (diag(1, a), (1,1;0,1))`.
pub fn gl2_x(spec: FieldSpec, a: &FieldElement) -> MatrixTuple {
    let one = FieldElement::one(spec);
    tuple(vec![Matrix::diagonal(spec, &[one, a.clone()]), mat(spec, &[&[1, 1], &[0, 1]])])
}

/// `y = ((1,0;1,1), (1,1;0,1))`.
pub fn gl2_y(spec: FieldSpec) -> MatrixTuple {
    tuple(vec![mat(spec, &[&[1, 0], &[1, 1]]), mat(spec, &[&[1, 1], &[0, 1]])])
}

/// The limit `(diag(1, a), I)` of `x` along `diag(t, t⁻¹)`.
pub fn gl2_limit(spec: FieldSpec, a: &FieldElement) -> Point {
    let one = FieldElement::one(spec);
    Point::ConjugationOnTuple(vec![Matrix::diagonal(spec, &[one, a.clone()]), Matrix::identity(spec, 2)])
}

fn concat(x: &MatrixTuple, y: &MatrixTuple) -> MatrixTuple {
    tuple(x.entries().iter().chain(y.entries()).cloned().collect())
}

/// Generic tuples of an upper Borel subgroup and of all of `GL₂`.
pub fn gl2_generic_tuples(spec: FieldSpec, a: &FieldElement) -> (MatrixTuple, MatrixTuple) {
    let one = FieldElement::one(spec);
    let upper = vec![
        Matrix::diagonal(spec, &[one.clone(), a.clone()]),
        Matrix::diagonal(spec, &[a.clone(), one]),
        mat(spec, &[&[1, 1], &[0, 1]]),
    ];
    let mut full = upper.clone();
    full.push(mat(spec, &[&[1, 0], &[1, 1]]));
    (generic_tuple(&tuple(upper)).tuple, generic_tuple(&tuple(full)).tuple)
}

pub fn zoo_gl2_example(a: &FieldElement) -> SuiteReport {
    let started = Instant::now();
    let spec = a.spec();
    let tag = format!("gl2[{spec}, a={a}]");
    let x = gl2_x(spec, a);
    let y = gl2_y(spec);
    let mut results = Vec::new();
    let precondition_ok = !a.is_zero() && !a.is_one();
    results.push(run(format!("{tag}/x-not-closed"), |c| {
        c.expect(precondition_ok, "a ∉ {0, 1}");
        let cert = is_orbit_closed_full(&x)?;
        c.expect(cert.verdict == Verdict::NotClosed, "G·x not closed");
        c.expect(cert.destabilizer == Some(Cocharacter::diagonal(spec, &[1, -1])), "destabilizer diag(t, t⁻¹)");
        c.expect(cert.limit_value == Some(gl2_limit(spec, a)), "limit (diag(1,a), I)");
        c.certificate(&cert);
        let search = destabilizer_search(&x.to_instance(), &SubgroupSpec::FullGl, &TorusOfSubgroup::diagonal(spec, 2), 2)?;
        c.expect(search.destabilizer.as_ref().map(|l| l.weights().to_vec()) == Some(vec![1, -1]), "search hits (1,−1) first");
        c.certificate(&search);
        Ok(())
    }));
    results.push(run(format!("{tag}/y-closed"), |c| {
        let cert = is_orbit_closed_full(&y)?;
        c.expect(cert.verdict == Verdict::Closed, "G·y closed");
        c.certificate(&cert);
        Ok(())
    }));
    results.push(run(format!("{tag}/joint-closed"), |c| {
        let cert = is_orbit_closed_full(&concat(&x, &y))?;
        c.expect(cert.verdict == Verdict::Closed, "G·(x, y) closed");
        c.certificate(&cert);
        Ok(())
    }));
    results.push(run(format!("{tag}/centralizers-scalar"), |c| {
        c.expect(centralizer_algebra(&x).dim() == 1, "dim C(x) = 1");
        c.expect(centralizer_algebra(&y).dim() == 1, "dim C(y) = 1");
        Ok(())
    }));
    results.push(run(format!("{tag}/singleton-orbits"), |c| {
        let scalars = TorusOfSubgroup::scalars(spec, 2);
        for (p, q, name) in [(&x, &y, "G_y·x"), (&y, &x, "G_x·y")] {
            let h = SubgroupSpec::CentralizerUnits { tuple: q.clone() };
            let cert = destabilizer_search(&p.to_instance(), &h, &scalars, 3)?;
            c.expect(cert.closed_reason == Some(ClosedReason::SingletonOrbit), format!("{name} is a single point"));
            c.certificate(&cert);
        }
        Ok(())
    }));
    results.push(run(format!("{tag}/borel-generic"), |c| {
        let (borel, full) = gl2_generic_tuples(spec, a);
        let b = is_orbit_closed_full(&borel)?;
        c.expect(b.verdict == Verdict::NotClosed, "generic tuple of a Borel subgroup: not closed");
        c.certificate(&b);
        let f = is_orbit_closed_full(&full)?;
        c.expect(f.verdict == Verdict::Closed, "generic tuple of GL₂: closed");
        c.certificate(&f);
        Ok(())
    }));
    SuiteReport::new("gl2", vec![], results, started)
}

// ---- the adjoint representation of SL₂ ----

/// `(a,b;c,d) ↦ (a²,0,b²; ac,1,bd; c²,0,d²)`.
pub fn rho(g: &Matrix) -> Matrix {
    let spec = g.spec();
    let (a, b, c, d) = (g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1));
    let z = FieldElement::zero(spec);
    Matrix::from_rows(
        spec,
        vec![
            vec![a * a, z.clone(), b * b],
            vec![a * c, FieldElement::one(spec), b * d],
            vec![c * c, z, d * d],
        ],
    )
}

/// `X ↦ gXg⁻¹` on trace-zero matrices in the basis `e, h = diag(1,−1), f`.
pub fn adjoint(g: &Matrix) -> Matrix {
    let spec = g.spec();
    let gi = g.inverse().expect("invertible");
    let basis = [mat(spec, &[&[0, 1], &[0, 0]]), mat(spec, &[&[1, 0], &[0, -1]]), mat(spec, &[&[0, 0], &[1, 0]])];
    let images: Vec<Matrix> = basis.iter().map(|x| x.conjugate_by(g, &gi)).collect();
    Matrix::from_fn(spec, 3, 3, |i, j| {
        let m = &images[j];
        match i {
            0 => m.get(0, 1).clone(),
            1 => m.get(0, 0).clone(),
            _ => m.get(1, 0).clone(),
        }
    })
}

fn sl2_generators(spec: FieldSpec) -> Vec<Matrix> {
    let w = spec.generator();
    let wi = w.inv().expect("unit");
    vec![mat(spec, &[&[1, 1], &[0, 1]]), mat(spec, &[&[1, 0], &[1, 1]]), Matrix::diagonal(spec, &[w, wi])]
}

fn sl2_elements(spec: FieldSpec) -> Vec<Matrix> {
    let els: Vec<FieldElement> = spec.elements().collect();
    let mut out = Vec::new();
    for a in &els {
        for b in &els {
            for c in &els {
                for d in &els {
                    if (&(a * d) - &(b * c)).is_one() {
                        out.push(Matrix::from_rows(spec, vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]]));
                    }
                }
            }
        }
    }
    out
}

/// The vector `h` as a point of `SL₃` acting linearly.
pub fn sl3_fixed_vector(spec: FieldSpec) -> ActionInstance {
    ActionInstance::vector(mat(spec, &[&[0], &[1], &[0]]), Some(DetConstraint::Sl)).expect("3x1 vector")
}

/// The image of the standard generators of `SL₂(F_q)` under `ρ`.
pub fn rho_image(spec: FieldSpec) -> MatrixTuple {
    MatrixTuple::new(sl2_generators(spec).iter().map(rho).collect(), Some(DetConstraint::Sl)).expect("3x3 tuple")
}

fn sl3_char2_run(spec: FieldSpec, seed: u64) -> Vec<InstanceResult> {
    let tag = format!("sl3[{spec}]");
    let image = rho_image(spec);
    let h = mat(spec, &[&[0], &[1], &[0]]);
    let mut results = Vec::new();
    results.push(run(format!("{tag}/rho-homomorphism"), |c| {
        let els = sl2_elements(spec);
        let pairs: Vec<(usize, usize)> = if els.len() <= 64 {
            (0..els.len()).flat_map(|i| (0..els.len()).map(move |j| (i, j))).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..400).map(|_| (rng.gen_range(0..els.len()), rng.gen_range(0..els.len()))).collect()
        };
        let mut ok = true;
        for g in &els {
            let r = rho(g);
            ok &= r.determinant().is_one() && r == adjoint(g);
        }
        c.expect(ok, "ρ(g) ∈ SL₃ and equals the adjoint action");
        let hom = pairs.iter().all(|&(i, j)| rho(&(&els[i] * &els[j])) == &rho(&els[i]) * &rho(&els[j]));
        c.expect(hom, format!("ρ(gh) = ρ(g)ρ(h) on {} pairs", pairs.len()));
        Ok(())
    }));
    results.push(run(format!("{tag}/not-semisimple"), |c| {
        c.expect(!is_semisimple_module(&image), "ρ-image module is not semisimple");
        let cert = is_orbit_closed_full(&image)?;
        c.expect(cert.verdict == Verdict::NotClosed, "generic ρ-tuple has a non-closed SL₃-orbit");
        c.certificate(&cert);
        Ok(())
    }));
    results.push(run(format!("{tag}/fixed-vector-no-complement"), |c| {
        c.expect(image.entries().iter().all(|g| g * &h == h), "h is fixed");
        let fixed: Vec<Matrix> = image.entries().iter().fold(Matrix::zeros(spec, 0, 3), |acc, g| acc.vstack(&(g - &Matrix::identity(spec, 3)))).kernel();
        c.expect(fixed.len() == 1, "h spans the fixed space");
        let linear = invariant_complement(image.entries(), &h).is_err();
        c.expect(linear, "no equivariant projection onto ⟨h⟩");
        if spec.order().is_some_and(|q| q <= 4) {
            let subspaces = invariant_subspaces(&image).map_err(OrbitError::from)?;
            let complement = subspaces.iter().any(|rows| {
                rows.len() == 2 && Matrix::from_rows(spec, rows.clone()).vstack(&h.transpose()).rank() == 3
            });
            c.expect(!complement, "brute force finds no invariant complement");
            c.expect(!brute_force_semisimple(&image).map_err(OrbitError::from)?, "brute force agrees: not semisimple");
        }
        Ok(())
    }));
    results.push(run(format!("{tag}/centralizer-scalar"), |c| {
        c.expect(centralizer_algebra(&image).dim() == 1, "centralizer algebra is the scalars");
        Ok(())
    }));
    results.push(run(format!("{tag}/destabilizer"), |c| {
        let cert = destabilizer_search(&sl3_fixed_vector(spec), &SubgroupSpec::FullSl, &TorusOfSubgroup::diagonal(spec, 3), 1)?;
        c.expect(cert.verdict == Verdict::NotClosed, "SL₃·h not closed");
        c.expect(cert.destabilizer == Some(Cocharacter::diagonal(spec, &[0, 1, -1])), "λ = diag(1, t, t⁻¹)");
        c.expect(cert.limit_value.as_ref().is_some_and(Point::is_zero), "λ(t)·h → 0");
        c.certificate(&cert);
        Ok(())
    }));
    results
}

fn sl3_char3_run() -> InstanceResult {
    let spec = FieldSpec::prime(3);
    run("sl3[F_3]/adjoint-semisimple", |c| {
        let image = MatrixTuple::new(sl2_generators(spec).iter().map(adjoint).collect(), Some(DetConstraint::Sl))?;
        c.expect(is_semisimple_module(&image), "adjoint module is semisimple in characteristic 3");
        c.expect(brute_force_semisimple(&image).map_err(OrbitError::from)?, "brute force agrees");
        let fixed = image.entries().iter().fold(Matrix::zeros(spec, 0, 3), |acc, g| acc.vstack(&(g - &Matrix::identity(spec, 3)))).kernel();
        c.expect(fixed.is_empty(), "no nonzero fixed vector");
        let cert = is_orbit_closed_full(&image)?;
        c.expect(cert.verdict == Verdict::Closed, "generic adjoint tuple has a closed orbit");
        c.certificate(&cert);
        Ok(())
    })
}

pub fn zoo_sl3_adjoint() -> SuiteReport {
    let started = Instant::now();
    let seed = config().seeds.sampling;
    let mut results = sl3_char2_run(f4(), seed);
    results.extend(sl3_char2_run(FieldSpec::finite(2, 4).expect("F_16"), seed));
    results.push(sl3_char3_run());
    SuiteReport::new("sl3", vec![seed], results, started)
}

// ---- lemma suites ----

fn random_cocharacter(spec: FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> Cocharacter {
    let g = Matrix::random_invertible(spec, n, rng);
    let w = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
    Cocharacter::new(g, w).expect("invertible")
}

/// `g(I + N)g⁻¹` with random `N` on the positions allowed by `keep`.
fn random_unipotent(l: &Cocharacter, rng: &mut ChaCha8Rng, keep: impl Fn(usize, usize) -> bool) -> Matrix {
    let spec = l.spec();
    let w = l.weights();
    let u = Matrix::from_fn(spec, l.dim(), l.dim(), |i, j| {
        if i == j {
            FieldElement::one(spec)
        } else if w[i] > w[j] && keep(i, j) {
            FieldElement::random(spec, rng, 3, 2)
        } else {
            FieldElement::zero(spec)
        }
    });
    &(l.base_change() * &u) * l.base_inverse()
}

/// A random point whose weights along `l` all pass `keep`.
fn random_point(l: &Cocharacter, vector: bool, len: usize, rng: &mut ChaCha8Rng, keep: impl Fn(i64) -> bool) -> ActionInstance {
    let spec = l.spec();
    let n = l.dim();
    let w = l.weights();
    let mut entry = |d: i64| if keep(d) { FieldElement::random(spec, rng, 3, 2) } else { FieldElement::zero(spec) };
    let eigen = if vector {
        Point::LinearOnVector(Matrix::from_fn(spec, n, 1, |i, _| entry(w[i])))
    } else {
        Point::ConjugationOnTuple((0..len).map(|_| Matrix::from_fn(spec, n, n, |i, j| entry(w[i] - w[j]))).collect())
    };
    let p = eigen.act(l.base_change(), l.base_inverse());
    ActionInstance::new(p, n, None).expect("shape")
}

fn lemma_fields() -> [FieldSpec; 2] {
    [FieldSpec::prime(7), FieldSpec::Q]
}

pub fn conjlim_suite(seed: u64, per_field: usize) -> InstanceResult {
    run(format!("lemmas/conjlim[{per_field} per field]"), |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for spec in lemma_fields() {
            for _ in 0..per_field {
                let n = rng.gen_range(2..=4);
                let l = random_cocharacter(spec, n, &mut rng);
                let vector = rng.gen_bool(0.3);
                let len = rng.gen_range(1..=2);
                let x = random_point(&l, vector, len, &mut rng, |d| d >= 0);
                let u = random_unipotent(&l, &mut rng, |_, _| true);
                c.expect(check_conjlim(&x, &l, &u)?, format!("conjlim over {spec}, n = {n}"));
            }
        }
        Ok(())
    })
}

pub fn conjfixed_suite(seed: u64, per_field: usize) -> InstanceResult {
    run(format!("lemmas/conjfixed[{per_field} per field]"), |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut both_true = 0;
        for spec in lemma_fields() {
            for k in 0..per_field {
                let n = rng.gen_range(2..=4);
                let l = random_cocharacter(spec, n, &mut rng);
                let vector = rng.gen_bool(0.3);
                let len = rng.gen_range(1..=2);
                let u = random_unipotent(&l, &mut rng, |_, _| true);
                let x = if k % 2 == 0 {
                    // x = u⁻¹·x₀ with x₀ fixed by λ
                    let x0 = random_point(&l, vector, len, &mut rng, |d| d == 0);
                    x0.act(&u.inverse().expect("unipotent"))
                } else {
                    random_point(&l, vector, len, &mut rng, |d| d >= 0)
                };
                let (lhs, rhs) = check_conjfixed(&x, &l, &u)?;
                c.expect(lhs == rhs, format!("conjfixed over {spec}: {lhs} vs {rhs}"));
                if k % 2 == 0 {
                    c.expect(lhs, "constructed instance satisfies the limit equation");
                }
                both_true += usize::from(lhs && rhs);
            }
        }
        c.note(format!("{both_true} instances with lim = u·x"));
        Ok(())
    })
}

/// Block subgroups `GL_a × GL_b`: for `u ∈ R_u(P_λ)`, `u·λ` stays in the
/// subgroup exactly when `u` does.
pub fn conjcochar_suite(seed: u64, per_field: usize) -> InstanceResult {
    run(format!("lemmas/conjcochar[{per_field} per field]"), |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for spec in lemma_fields() {
            let mut made = 0;
            while made < per_field {
                let n = rng.gen_range(2..=4);
                let a = rng.gen_range(1..n);
                let blocks = vec![a, n - a];
                let g = Matrix::block_diagonal(
                    spec,
                    &[Matrix::random_invertible(spec, a, &mut rng), Matrix::random_invertible(spec, n - a, &mut rng)],
                );
                let w: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
                let l = Cocharacter::new(g, w).expect("invertible");
                let block_of: Vec<usize> = (0..n)
                    .map(|j| usize::from((0..n).any(|i| i >= a && !l.base_change().get(i, j).is_zero())))
                    .collect();
                let lw = l.weights();
                let cross = (0..n).any(|i| (0..n).any(|j| lw[i] > lw[j] && block_of[i] != block_of[j]));
                if !cross {
                    continue;
                }
                made += 1;
                let h = SubgroupSpec::BlockSubgroup { blocks };
                c.expect(h.contains_cocharacter(&l), "λ ∈ Y(H)");
                let inside = made % 2 == 0;
                let u = loop {
                    let u = random_unipotent(&l, &mut rng, |i, j| !inside || block_of[i] == block_of[j]);
                    if inside || !h.contains(&u) {
                        break u;
                    }
                };
                let mu = act_on_cocharacter(&u, &l)?;
                c.expect(l.ru_p_lambda_contains(&u)?, "u ∈ R_u(P_λ)");
                c.expect(h.contains(&u) == inside, "u lands where constructed");
                c.expect(h.contains_cocharacter(&mu) == inside, format!("u·λ ∈ Y(H) iff u ∈ H (inside = {inside})"));
            }
        }
        Ok(())
    })
}

pub fn suite_lemmas() -> SuiteReport {
    let started = Instant::now();
    let seed = config().seeds.lemmas;
    let results = vec![
        conjlim_suite(seed, 100),
        conjfixed_suite(seed.wrapping_add(1), 100),
        conjcochar_suite(seed.wrapping_add(2), 30),
    ];
    SuiteReport::new("lemmas", vec![seed], results, started)
}

// ---- theorem suites ----

fn random_tuple(spec: FieldSpec, rng: &mut ChaCha8Rng) -> MatrixTuple {
    let n = rng.gen_range(2..=3);
    let len = rng.gen_range(1..=3);
    tuple((0..len).map(|_| Matrix::random(spec, n, n, rng)).collect())
}

/// Exact verdict against a bounded search over a flag-adapted diagonal
/// torus, with brute force confirming every Closed.
pub fn ruconj_agreement(seed: u64, count: usize, bound: i64) -> InstanceResult {
    run(format!("theorems/ruconj-agreement[{count}]"), |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for k in 0..count {
            let spec = if k % 2 == 0 { FieldSpec::prime(2) } else { FieldSpec::prime(3) };
            let t = random_tuple(spec, &mut rng);
            let full = is_orbit_closed_full(&t)?;
            let id = tuple(vec![Matrix::identity(spec, t.dim())]);
            let torus = torus_of_centralizer_with_flag(&id, &t)?;
            let search = destabilizer_search(&t.to_instance(), &SubgroupSpec::FullGl, &torus, bound)?;
            c.expect(
                (search.verdict == Verdict::NotClosed) == (full.verdict == Verdict::NotClosed),
                format!("tuple {k}: full {:?}, search {:?}", full.verdict, search.verdict),
            );
            if full.verdict == Verdict::Closed {
                c.expect(brute_force_semisimple(&t).map_err(OrbitError::from)?, format!("tuple {k}: brute force confirms Closed"));
            }
            let g = Matrix::random_invertible(spec, t.dim(), &mut rng);
            c.expect(is_orbit_closed_full(&t.conjugate(&g))?.verdict == full.verdict, "conjugation invariance");
            c.certificate(&full);
            c.certificate(&search);
        }
        Ok(())
    })
}

fn corpus_group(group: &str) -> Vec<ZooInstance> {
    corpus().expect("bundled corpus parses").into_iter().filter(|z| z.id.starts_with(&format!("{group}/"))).collect()
}

pub fn two_varieties_results(bound: i64) -> Vec<InstanceResult> {
    corpus_group("two-varieties")
        .into_iter()
        .map(|z| {
            run(format!("theorems/{}", z.id), |c| {
                let Payload::Pair { x, y } = &z.payload else {
                    c.expect(false, "pair payload");
                    return Ok(());
                };
                let r = two_varieties_check(x, y, bound)?;
                c.expect(r.consistent, "no certified contradiction");
                if let Some(v) = z.expected.verdict {
                    c.expect(r.joint.verdict == v, format!("joint verdict {:?}", r.joint.verdict));
                }
                if let Some(b) = z.expected.both_not_closed {
                    c.expect(r.both_not_closed == b, format!("both sides not closed = {}", r.both_not_closed));
                }
                for cert in r.certificates() {
                    c.certificate(cert);
                }
                Ok(())
            })
        })
        .collect()
}

pub fn htog_results(bound: i64) -> Vec<InstanceResult> {
    corpus_group("htog")
        .into_iter()
        .map(|z| {
            run(format!("theorems/{}", z.id), |c| {
                let Payload::Stabilized { x, a } = &z.payload else {
                    c.expect(false, "stabilized payload");
                    return Ok(());
                };
                let r = htog_check(x, a, bound)?;
                c.expect(Some(r.outcome) == z.expected.htog, format!("outcome {:?}", r.outcome));
                c.expect(r.outcome != HtogOutcome::Contradiction, "no contradiction");
                c.certificate(&r.full);
                if let Some(s) = &r.search {
                    if let Some(l) = &s.destabilizer {
                        let h = SubgroupSpec::CentralizerUnits { tuple: a.clone() };
                        c.expect(h.contains_cocharacter(l), "destabilizer lies in C_G(A)");
                    }
                    c.certificate(s);
                }
                Ok(())
            })
        })
        .collect()
}

/// Subgroups `H = C_G(t)` containing `G_x` (`t` a polynomial in `x`): a
/// closed `G·x` never yields a certified non-closed `H·x`.
pub fn hk_subgroup_results(bound: i64) -> InstanceResult {
    run("theorems/hk-subgroup", |c| {
        let mut closed: Vec<MatrixTuple> = Vec::new();
        for z in corpus_group("two-varieties") {
            if let Payload::Pair { x, y } = z.payload {
                closed.push(x);
                closed.push(y);
            }
        }
        closed.dedup();
        for x in &closed {
            let spec = x.spec();
            let n = x.dim();
            let mut ts = vec![tuple(vec![Matrix::identity(spec, n)])];
            let first = &x.entries()[0];
            if first.is_invertible() && x.entries().iter().all(|m| m.commutes_with(first)) {
                ts.push(tuple(vec![first.clone()]));
            }
            for t in ts {
                if !is_semisimple_module(&t) {
                    continue;
                }
                let h = SubgroupSpec::CentralizerUnits { tuple: t.clone() };
                let cert = destabilizer_search(&x.to_instance(), &h, &torus_of_centralizer(&t)?, bound)?;
                c.expect(cert.verdict != Verdict::NotClosed, "no certified NotClosed for H ⊇ G_x");
                c.certificate(&cert);
            }
        }
        Ok(())
    })
}

/// `G_x` a diagonal torus or block subgroup and `A ⊆ G_x` completely
/// reducible there: `H·x` with `H = C_G(A)` must not be certified non-closed.
pub fn luna_results(bound: i64) -> InstanceResult {
    run("theorems/luna-ii", |c| {
        let q = FieldSpec::Q;
        let cases = vec![
            (tuple(vec![diag(q, &[1, 2, 3])]), tuple(vec![diag(q, &[2, 2, 5])])),
            (tuple(vec![diag(q, &[1, 2, 3])]), tuple(vec![diag(q, &[1, 4, 9]), diag(q, &[3, 3, 3])])),
            (tuple(vec![diag(q, &[1, 1, 2])]), tuple(vec![Matrix::block_diagonal(q, &[mat(q, &[&[0, 1], &[1, 0]]), diag(q, &[3])])])),
            (tuple(vec![diag(q, &[1, 1, 2, 2])]), tuple(vec![Matrix::block_diagonal(q, &[mat(q, &[&[0, -1], &[1, 0]]), diag(q, &[2, 2])])])),
            (
                tuple(vec![diag(FieldSpec::prime(5), &[1, 1, 3])]),
                tuple(vec![Matrix::block_diagonal(FieldSpec::prime(5), &[mat(FieldSpec::prime(5), &[&[0, 1], &[2, 0]]), diag(FieldSpec::prime(5), &[1])])]),
            ),
        ];
        for (x, a) in cases {
            let gx = centralizer_algebra(&x).dim();
            c.expect(is_orbit_closed_full(&x)?.verdict == Verdict::Closed, "G·x closed");
            c.expect(a.entries().iter().all(|m| x.entries().iter().all(|e| e.commutes_with(m))), "A ⊆ G_x");
            c.expect(is_semisimple_module(&a), "A completely reducible");
            let h = SubgroupSpec::CentralizerUnits { tuple: a.clone() };
            let cert = destabilizer_search(&x.to_instance(), &h, &torus_of_centralizer(&a)?, bound)?;
            c.expect(cert.verdict != Verdict::NotClosed, format!("H·x not certified non-closed (dim G_x = {gx})"));
            c.certificate(&cert);
        }
        Ok(())
    })
}

pub fn kraft_results() -> Vec<InstanceResult> {
    corpus_group("kraft")
        .into_iter()
        .map(|z| {
            run(format!("theorems/{}", z.id), |c| {
                let Payload::Diagonalizable { tuple, conjugator } = &z.payload else {
                    c.expect(false, "diagonalizable payload");
                    return Ok(());
                };
                let cert = kraft_check(tuple, conjugator.as_ref())?;
                c.expect(cert.verdict == Verdict::Closed, "closed");
                if tuple.spec().order().is_some_and(|q| q <= 4) && tuple.dim() <= 4 {
                    c.expect(brute_force_semisimple(tuple).map_err(OrbitError::from)?, "brute force agrees");
                }
                c.certificate(&cert);
                Ok(())
            })
        })
        .collect()
}

/// Sampled torus supports: the convex certificate self-checks and agrees
/// with the subgroup search on the image torus.
pub fn torus_results(seed: u64, count: usize) -> InstanceResult {
    run(format!("theorems/torus-criterion[{count}]"), |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = FieldSpec::Q;
        for _ in 0..count {
            let r = rng.gen_range(1..=2);
            let size = rng.gen_range(1..=4);
            let weights: Vec<Vec<i64>> = (0..size).map(|_| (0..r).map(|_| rng.gen_range(-2..=2)).collect()).collect();
            let s = WeightSupport::new(r, weights).expect("rank");
            let cert = torus_orbit_closed(&s);
            c.expect(cert.check(&s), "convex certificate self-check");
            let torus = TorusOfSubgroup::from_characters(q, r, s.weights());
            let v = Matrix::from_fn(q, s.weights().len(), 1, |_, _| FieldElement::one(q));
            let x = ActionInstance::vector(v, None).expect("vector");
            let search = destabilizer_search(&x, &SubgroupSpec::DiagonalTorus, &torus, 9)?;
            let unstable = search.verdict == Verdict::NotClosed;
            c.expect(unstable == (cert.kind != ConvexKind::InRelativeInterior), format!("support {:?}", s.weights()));
            c.certificate(&search);
        }
        Ok(())
    })
}

pub fn suite_theorems(bound: i64) -> SuiteReport {
    let started = Instant::now();
    let seed = config().seeds.theorems;
    let mut results = vec![ruconj_agreement(seed, 60, bound)];
    results.extend(two_varieties_results(bound));
    results.extend(htog_results(bound));
    results.push(hk_subgroup_results(bound));
    results.push(luna_results(bound));
    results.extend(kraft_results());
    results.push(torus_results(seed.wrapping_add(1), 40));
    SuiteReport::new("theorems", vec![seed], results, started)
}

pub fn run_suite(name: &str) -> Result<SuiteReport, ZooError> {
    let cfg = config();
    match name {
        "gl2" => {
            let mut rs = zoo_gl2_example(&FieldElement::from_i64(FieldSpec::Q, cfg.a));
            for a in [FieldElement::from_i64(FieldSpec::Q, 3), f4().generator()] {
                rs.results.extend(zoo_gl2_example(&a).results);
            }
            rs.results.push(run("gl2/config-modulus", |c| {
                c.expect(full_modulus(f4()) == Some(cfg.f4_modulus.clone()), "F_4 modulus matches the config");
                Ok(())
            }));
            rs.results.sort_by(|a, b| a.id.cmp(&b.id));
            Ok(rs)
        }
        "sl3" => Ok(zoo_sl3_adjoint()),
        "lemmas" => Ok(suite_lemmas()),
        "theorems" => Ok(suite_theorems(cfg.bound)),
        other => Err(ZooError::UnknownSuite(other.into())),
    }
}

// ---- the corpus ----

fn worked_corpus() -> Vec<ZooInstance> {
    let q = FieldSpec::Q;
    let a = FieldElement::from_i64(q, 2);
    let worked = |example: &str| Provenance::Worked { example: example.into() };
    let (borel, full) = gl2_generic_tuples(q, &a);
    vec![
        ZooInstance {
            id: "worked/gl2-x".into(),
            description: "x = (diag(1,2), (1,1;0,1)) under GL2 conjugation".into(),
            payload: Payload::Tuple { tuple: gl2_x(q, &a) },
            expected: Expected {
                verdict: Some(Verdict::NotClosed),
                destabilizer_weights: Some(vec![1, -1]),
                limit: Some(gl2_limit(q, &a)),
                ..Expected::default()
            },
            provenance: worked("gl2 pair"),
        },
        ZooInstance {
            id: "worked/gl2-y".into(),
            description: "y = ((1,0;1,1), (1,1;0,1)) under GL2 conjugation".into(),
            payload: Payload::Tuple { tuple: gl2_y(q) },
            expected: Expected { verdict: Some(Verdict::Closed), ..Expected::default() },
            provenance: worked("gl2 pair"),
        },
        ZooInstance {
            id: "worked/gl2-xy".into(),
            description: "the joint tuple (x, y)".into(),
            payload: Payload::Tuple { tuple: concat(&gl2_x(q, &a), &gl2_y(q)) },
            expected: Expected { verdict: Some(Verdict::Closed), ..Expected::default() },
            provenance: worked("gl2 pair"),
        },
        ZooInstance {
            id: "worked/gl2-borel-generic".into(),
            description: "generic tuple of the upper Borel subgroup of GL2".into(),
            payload: Payload::Tuple { tuple: borel },
            expected: Expected { verdict: Some(Verdict::NotClosed), ..Expected::default() },
            provenance: Provenance::Constructed {
                recipe: "span basis of the algebra generated by diag(1,2), diag(2,1), (1,1;0,1)".into(),
            },
        },
        ZooInstance {
            id: "worked/gl2-full-generic".into(),
            description: "generic tuple of GL2".into(),
            payload: Payload::Tuple { tuple: full },
            expected: Expected { verdict: Some(Verdict::Closed), ..Expected::default() },
            provenance: Provenance::Constructed { recipe: "Borel generators plus (1,0;1,1)".into() },
        },
        ZooInstance {
            id: "worked/sl3-h-f4".into(),
            description: "the fixed vector h of the char-2 adjoint image, SL3 acting linearly over F_4".into(),
            payload: Payload::Instance { instance: sl3_fixed_vector(f4()) },
            expected: Expected {
                verdict: Some(Verdict::NotClosed),
                destabilizer_weights: Some(vec![0, 1, -1]),
                limit: Some(Point::LinearOnVector(Matrix::zeros(f4(), 3, 1))),
                ..Expected::default()
            },
            provenance: worked("sl3 adjoint"),
        },
        ZooInstance {
            id: "worked/sl3-image-f4".into(),
            description: "images of the standard SL2(F_4) generators under the char-2 adjoint map".into(),
            payload: Payload::Tuple { tuple: rho_image(f4()) },
            expected: Expected { verdict: Some(Verdict::NotClosed), ..Expected::default() },
            provenance: worked("sl3 adjoint"),
        },
    ]
}

/// `x = diag(dx)`, `y = P·diag(dy)·P⁻¹`.
fn conjugated_pair(spec: FieldSpec, dx: &[i64], dy: &[i64], p: &Matrix) -> (MatrixTuple, MatrixTuple) {
    let x = tuple(vec![diag(spec, dx)]);
    let y = tuple(vec![diag(spec, dy)]).conjugate(p);
    (x, y)
}

fn two_varieties_corpus() -> Vec<ZooInstance> {
    let q = FieldSpec::Q;
    let f5 = FieldSpec::prime(5);
    let shear = |spec: FieldSpec, s: i64| mat(spec, &[&[1, s], &[0, 1]]);
    let mut pairs: Vec<(String, String, MatrixTuple, MatrixTuple, bool)> = Vec::new();
    let mut unstable = |name: &str, spec: FieldSpec, dx: &[i64], dy: &[i64], p: Matrix| {
        let (x, y) = conjugated_pair(spec, dx, dy, &p);
        let recipe = format!("x = diag{dx:?}, y = P·diag{dy:?}·P⁻¹ over {spec}, P unipotent upper triangular");
        pairs.push((name.into(), recipe, x, y, true));
    };
    unstable("q-1", q, &[1, 2], &[3, 5], shear(q, 1));
    unstable("q-2", q, &[1, 3], &[2, 7], shear(q, 2));
    unstable("q-3", q, &[2, 5], &[1, 4], shear(q, 3));
    unstable("q-4", q, &[1, -1], &[2, -2], shear(q, 1));
    unstable("q-5", q, &[3, 4], &[5, 6], shear(q, -2));
    unstable("f5-1", f5, &[1, 2], &[3, 4], shear(f5, 1));
    unstable("f5-2", f5, &[1, 3], &[2, 4], shear(f5, 2));
    unstable("f7-1", FieldSpec::prime(7), &[2, 3], &[4, 5], shear(FieldSpec::prime(7), 1));
    unstable("f3-1", FieldSpec::prime(3), &[1, 2], &[1, 2], shear(FieldSpec::prime(3), 1));
    unstable("q3-1", q, &[1, 2, 3], &[4, 5, 6], mat(q, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]));
    unstable("q3-2", q, &[1, 2, 3], &[4, 5, 6], mat(q, &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]));
    unstable("f5-3d", f5, &[1, 2, 3], &[1, 2, 4], mat(f5, &[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]));
    {
        let k = f4();
        let w = k.generator();
        let x = tuple(vec![Matrix::diagonal(k, &[FieldElement::one(k), w.clone()])]);
        let y = tuple(vec![Matrix::diagonal(k, &[w.clone(), &w * &w])]).conjugate(&shear(k, 1));
        pairs.push(("f4-1".into(), "x = diag(1, w), y = P·diag(w, w²)·P⁻¹ over F_4".into(), x, y, true));
    }
    let mut stable = |name: &str, recipe: &str, x: MatrixTuple, y: MatrixTuple| {
        pairs.push((name.into(), recipe.into(), x, y, false));
    };
    stable("same-diag", "x = y = diag(1,2)", tuple(vec![diag(q, &[1, 2])]), tuple(vec![diag(q, &[1, 2])]));
    stable("same-gl2-y", "x = y = ((1,0;1,1),(1,1;0,1))", gl2_y(q), gl2_y(q));
    stable(
        "same-f2-irreducible",
        "x = y = (1,1;1,0), irreducible over F_2",
        tuple(vec![mat(FieldSpec::prime(2), &[&[1, 1], &[1, 0]])]),
        tuple(vec![mat(FieldSpec::prime(2), &[&[1, 1], &[1, 0]])]),
    );
    stable(
        "scalar-centralizers-q",
        "both tuples generate M_2, so both stabilizers are central",
        gl2_y(q),
        tuple(vec![diag(q, &[1, 2]), mat(q, &[&[0, 1], &[1, 0]])]),
    );
    stable(
        "scalar-centralizers-f5",
        "both tuples generate M_2 over F_5",
        gl2_y(f5),
        tuple(vec![diag(f5, &[1, 2]), mat(f5, &[&[0, 1], &[1, 0]])]),
    );
    stable("commuting-diag-2", "x, y diagonal", tuple(vec![diag(q, &[1, 2])]), tuple(vec![diag(q, &[3, 5])]));
    stable("commuting-diag-3", "x, y diagonal with repeated eigenvalues", tuple(vec![diag(q, &[1, 1, 2])]), tuple(vec![diag(q, &[3, 4, 4])]));
    stable(
        "commuting-diag-f7",
        "x, y diagonal over F_7",
        tuple(vec![diag(FieldSpec::prime(7), &[1, 2, 3])]),
        tuple(vec![diag(FieldSpec::prime(7), &[3, 2, 1])]),
    );
    stable(
        "rotations",
        "x, y in a copy of Q(i) inside M_2(Q)",
        tuple(vec![mat(q, &[&[0, -1], &[1, 0]])]),
        tuple(vec![mat(q, &[&[1, -1], &[1, 1]])]),
    );
    pairs
        .into_iter()
        .map(|(name, recipe, x, y, unstable)| ZooInstance {
            id: format!("two-varieties/{name}"),
            description: if unstable {
                "semisimple pair whose joint module is not semisimple".into()
            } else {
                "semisimple pair with a semisimple joint module".into()
            },
            payload: Payload::Pair { x, y },
            expected: Expected {
                verdict: Some(if unstable { Verdict::NotClosed } else { Verdict::Closed }),
                both_not_closed: Some(unstable),
                ..Expected::default()
            },
            provenance: Provenance::Constructed { recipe },
        })
        .collect()
}

fn htog_corpus() -> Vec<ZooInstance> {
    let q = FieldSpec::Q;
    let f7 = FieldSpec::prime(7);
    let f3 = FieldSpec::prime(3);
    let f5 = FieldSpec::prime(5);
    let id = |spec: FieldSpec, n: usize| tuple(vec![Matrix::identity(spec, n)]);
    let g3 = mat(q, &[&[1, 2, 0], &[0, 1, 1], &[1, 0, 1]]);
    let rot = mat(q, &[&[0, -1], &[1, 0]]);
    let i2 = Matrix::identity(q, 2);
    let z2 = Matrix::zeros(q, 2, 2);
    let block_unipotent = Matrix::from_fn(q, 4, 4, |i, j| if i == j || (i < 2 && j == i + 2) { FieldElement::one(q) } else { FieldElement::zero(q) });
    let cases: Vec<(&str, &str, MatrixTuple, MatrixTuple)> = vec![
        ("gl2-x-a2", "the GL2 pair's x, A = {1}", gl2_x(q, &FieldElement::from_i64(q, 2)), id(q, 2)),
        ("gl2-x-a3", "the GL2 pair's x with a = 3, A = {1}", gl2_x(q, &FieldElement::from_i64(q, 3)), id(q, 2)),
        ("gl2-x-f4", "the GL2 pair's x over F_4, A = {1}", gl2_x(f4(), &f4().generator()), id(f4(), 2)),
        ("gl2-x-f5", "the GL2 pair's x over F_5, A = {1}", gl2_x(f5, &FieldElement::from_i64(f5, 2)), id(f5, 2)),
        (
            "jordan-plus-point-q",
            "x = J_2(1) ⊕ (3), A = diag(1,1,2)",
            tuple(vec![mat(q, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 3]])]),
            tuple(vec![diag(q, &[1, 1, 2])]),
        ),
        (
            "jordan-plus-point-f7",
            "x = J_2(1) ⊕ (3) over F_7, A = diag(1,1,2)",
            tuple(vec![mat(f7, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 3]])]),
            tuple(vec![diag(f7, &[1, 1, 2])]),
        ),
        (
            "jordan-plus-point-conjugated",
            "the previous pair conjugated by a non-monomial matrix",
            tuple(vec![mat(q, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 3]])]).conjugate(&g3),
            tuple(vec![diag(q, &[1, 1, 2])]).conjugate(&g3),
        ),
        (
            "block-unipotent-rotation",
            "x = (I, I; 0, I) in 2x2 blocks, A = diag(r, r) with r a rotation, irreducible over Q",
            tuple(vec![block_unipotent]),
            tuple(vec![Matrix::block_diagonal(q, &[rot.clone(), rot.clone()])]),
        ),
        ("jordan-3", "x = J_3(1), A = {1}", tuple(vec![mat(q, &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]])]), id(q, 3)),
        (
            "jordan-plus-point-f3",
            "x = J_2(1) ⊕ (2) over F_3, A = diag(2,2,1)",
            tuple(vec![mat(f3, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 2]])]),
            tuple(vec![diag(f3, &[2, 2, 1])]),
        ),
        (
            "two-jordan-blocks",
            "x = J_2(1) ⊕ J_2(2), A = diag(1,1,3,3)",
            tuple(vec![mat(q, &[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 2, 1], &[0, 0, 0, 2]])]),
            tuple(vec![diag(q, &[1, 1, 3, 3])]),
        ),
        (
            "pair-with-block-stabilizer",
            "x = ((2) ⊕ J_2(1), diag(3,1,1)), A = diag(2,1,1)",
            tuple(vec![mat(q, &[&[2, 0, 0], &[0, 1, 1], &[0, 0, 1]]), diag(q, &[3, 1, 1])]),
            tuple(vec![diag(q, &[2, 1, 1])]),
        ),
        (
            "rotation-commuting-unipotent",
            "x = (r, I; 0, r) in 2x2 blocks, A = diag(r, r)",
            tuple(vec![rot.hstack(&i2).vstack(&z2.hstack(&rot))]),
            tuple(vec![Matrix::block_diagonal(q, &[rot.clone(), rot])]),
        ),
    ];
    cases
        .into_iter()
        .map(|(name, description, x, a)| ZooInstance {
            id: format!("htog/{name}"),
            description: description.into(),
            payload: Payload::Stabilized { x, a },
            expected: Expected { verdict: Some(Verdict::NotClosed), htog: Some(HtogOutcome::DestabilizerFound), ..Expected::default() },
            provenance: Provenance::Constructed { recipe: description.into() },
        })
        .collect()
}

fn kraft_corpus() -> Vec<ZooInstance> {
    let q = FieldSpec::Q;
    let f2 = FieldSpec::prime(2);
    let f5 = FieldSpec::prime(5);
    let g = mat(q, &[&[1, 1, 0], &[0, 1, 2], &[1, 0, 1]]);
    let g5 = mat(f5, &[&[1, 2], &[3, 4]]);
    let cases: Vec<(&str, MatrixTuple, Option<Matrix>)> = vec![
        ("diag-q", tuple(vec![diag(q, &[1, 2, 3]), diag(q, &[0, 5, 5])]), None),
        ("diag-f2", tuple(vec![diag(f2, &[1, 0, 1]), diag(f2, &[1, 1, 0])]), None),
        ("diag-f3", tuple(vec![diag(FieldSpec::prime(3), &[1, 2])]), None),
        ("conjugated-q", tuple(vec![diag(q, &[1, 2, 3]), diag(q, &[4, 4, 0])]).conjugate(&g), Some(g)),
        ("conjugated-f5", tuple(vec![diag(f5, &[1, 2])]).conjugate(&g5), Some(g5)),
    ];
    cases
        .into_iter()
        .map(|(name, tuple, conjugator)| ZooInstance {
            id: format!("kraft/{name}"),
            description: "tuple centralized by a maximal torus".into(),
            payload: Payload::Diagonalizable { tuple, conjugator },
            expected: Expected { verdict: Some(Verdict::Closed), ..Expected::default() },
            provenance: Provenance::Constructed { recipe: "diagonal entries, optionally conjugated".into() },
        })
        .collect()
}

/// The corpus as constructed in code, grouped by file.
pub fn build_corpus() -> Vec<(&'static str, Vec<ZooInstance>)> {
    vec![
        ("worked", worked_corpus()),
        ("two_varieties", two_varieties_corpus()),
        ("htog", htog_corpus()),
        ("kraft", kraft_corpus()),
    ]
}

/// The bundled corpus.
pub fn corpus() -> Result<Vec<ZooInstance>, ZooError> {
    let mut out = Vec::new();
    for (file, text) in CORPUS_JSON {
        let group: Vec<ZooInstance> =
            serde_json::from_str(text).map_err(|e| ZooError::Corpus { file: file.into(), message: e.to_string() })?;
        out.extend(group);
    }
    Ok(out)
}

/// `(id, description)` of every corpus entry.
pub fn list() -> Result<Vec<(String, String)>, ZooError> {
    Ok(corpus()?.into_iter().map(|z| (z.id, z.description)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_corpus_matches_recipes() {
        for (file, built) in build_corpus() {
            let text = CORPUS_JSON.iter().find(|(f, _)| *f == file).expect("file is bundled").1;
            let bundled: Vec<ZooInstance> = serde_json::from_str(text).unwrap();
            assert_eq!(bundled, built, "zoo/v1/{file}.json is stale; regenerate with the zoo_export example");
        }
    }

    #[test]
    fn rho_matches_adjoint_in_char_2() {
        for g in sl2_elements(f4()) {
            assert_eq!(rho(&g), adjoint(&g));
        }
    }

    #[test]
    fn config_loads() {
        let c = config();
        assert_eq!(c.a, 2);
        assert_eq!(full_modulus(f4()), Some(c.f4_modulus));
    }
}
