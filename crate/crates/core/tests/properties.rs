//! Property tests over randomly generated small instances.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use orbitlab::cochar::{act_on_cocharacter, check_conjfixed, grade, limit, ActionInstance, Cocharacter, Point};
use orbitlab::field::{FieldElement, FieldSpec};
use orbitlab::linalg::{invert, rref, solve_linear, LinearSolution};
use orbitlab::matrix::Matrix;
use orbitlab::module::{
    brute_force_semisimple, centralizer_algebra, is_semisimple_module, modules_isomorphic, span_algebra, MatrixTuple,
};
use orbitlab::torus::{limit_along, TorusPoint};
use orbitlab::orbit::{is_orbit_closed_full, verify, Verdict};
use orbitlab::torus::{min_norm_point, optimal_destabilizer, torus_orbit_closed, ConvexKind, WeightSupport};

fn field(code: u8) -> FieldSpec {
    match code % 5 {
        0 => FieldSpec::Q,
        1 => FieldSpec::prime(2),
        2 => FieldSpec::prime(3),
        3 => FieldSpec::prime(7),
        _ => FieldSpec::finite(2, 2).unwrap(),
    }
}

fn square(spec: FieldSpec, n: usize, vals: &[i64]) -> Matrix {
    Matrix::from_fn(spec, n, n, |i, j| FieldElement::from_i64(spec, vals[i * n + j]))
}

/// A square matrix with entries in [-3, 3].
fn matrix(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, n * n)
}

/// Unit upper triangular, hence invertible in every characteristic.
fn upper_unipotent(spec: FieldSpec, n: usize, vals: &[i64]) -> Matrix {
    Matrix::from_fn(spec, n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => FieldElement::one(spec),
        std::cmp::Ordering::Less => FieldElement::from_i64(spec, vals[i * n + j]),
        std::cmp::Ordering::Greater => FieldElement::zero(spec),
    })
}

/// A generally non-monomial invertible matrix: upper unipotent times lower
/// unipotent.
fn invertible(spec: FieldSpec, n: usize, a: &[i64], b: &[i64]) -> Matrix {
    &upper_unipotent(spec, n, a) * &upper_unipotent(spec, n, b).transpose()
}

fn tuple_strategy() -> impl Strategy<Value = (u8, usize, Vec<Vec<i64>>)> {
    (0u8..5, 2usize..=3).prop_flat_map(|(f, n)| (Just(f), Just(n), prop::collection::vec(matrix(n), 1..=3)))
}

/// Element of F_16 from four bits.
fn gf16(bits: u32) -> FieldElement {
    let spec = FieldSpec::finite(2, 4).unwrap();
    FieldElement::from_coefficients(spec, &[bits & 1, (bits >> 1) & 1, (bits >> 2) & 1, (bits >> 3) & 1]).unwrap()
}

/// Invertible element of the diagonal `P_λ`: unit diagonal, free entries
/// where `w_i ≥ w_j`.
fn parabolic(spec: FieldSpec, w: &[i64], vals: &[i64]) -> Matrix {
    let n = w.len();
    let below = Matrix::from_fn(spec, n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => FieldElement::one(spec),
        _ if w[i] >= w[j] => FieldElement::from_i64(spec, vals[i * n + j]),
        _ => FieldElement::zero(spec),
    });
    // strictly lower and strictly upper halves separately stay invertible
    let lower = Matrix::from_fn(spec, n, n, |i, j| if i >= j { below.get(i, j).clone() } else { FieldElement::zero(spec) });
    let upper = Matrix::from_fn(spec, n, n, |i, j| if i <= j { below.get(i, j).clone() } else { FieldElement::zero(spec) });
    &lower * &upper
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn determinant_is_multiplicative(f in 0u8..5, a in matrix(3), b in matrix(3)) {
        let spec = field(f);
        let (a, b) = (square(spec, 3, &a), square(spec, 3, &b));
        prop_assert_eq!((&a * &b).determinant(), &a.determinant() * &b.determinant());
    }

    #[test]
    fn rank_nullity(f in 0u8..5, a in prop::collection::vec(-3i64..=3, 12)) {
        let spec = field(f);
        let m = Matrix::from_fn(spec, 3, 4, |i, j| FieldElement::from_i64(spec, a[i * 4 + j]));
        let kernel = m.kernel();
        prop_assert_eq!(m.rank() + kernel.len(), 4);
        for v in kernel {
            prop_assert!((&m * &v).is_zero());
        }
    }

    #[test]
    fn inverse_is_two_sided(f in 0u8..5, a in matrix(3), b in matrix(3)) {
        let spec = field(f);
        let g = invertible(spec, 3, &a, &b);
        let gi = g.inverse().unwrap();
        prop_assert!((&g * &gi).is_identity());
        prop_assert!((&gi * &g).is_identity());
    }

    #[test]
    fn field_axioms(f in 0u8..5, x in -20i64..20, y in -20i64..20, z in -20i64..20) {
        let spec = field(f);
        let (x, y, z) = (FieldElement::from_i64(spec, x), FieldElement::from_i64(spec, y), FieldElement::from_i64(spec, z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        if let Some(xi) = x.inv() {
            prop_assert!((&x * &xi).is_one());
        } else {
            prop_assert!(x.is_zero());
        }
    }

    /// `lim g·λ·g⁻¹ of g·x` is `g·(lim λ of x)`.
    #[test]
    fn limit_is_equivariant(f in 0u8..4, w in prop::collection::vec(-2i64..=2, 3), xs in matrix(3), a in matrix(3), b in matrix(3)) {
        let spec = field(f);
        let x = ActionInstance::tuple(vec![square(spec, 3, &xs)]).unwrap();
        let l = Cocharacter::diagonal(spec, &w);
        let g = invertible(spec, 3, &a, &b);
        let gi = g.inverse().unwrap();
        let before = limit(&x, &l).unwrap();
        let after = limit(&x.act(&g), &act_on_cocharacter(&g, &l).unwrap()).unwrap();
        prop_assert_eq!(before.exists, after.exists);
        prop_assert_eq!(before.value.map(|p| p.act(&g, &gi)), after.value);
    }

    /// `λ` and `λ^k` have the same limits.
    #[test]
    fn limit_ignores_scaling(f in 0u8..4, w in prop::collection::vec(-2i64..=2, 3), xs in matrix(3), k in 1i64..4) {
        let spec = field(f);
        let x = ActionInstance::tuple(vec![square(spec, 3, &xs)]).unwrap();
        let l = Cocharacter::diagonal(spec, &w);
        let a = limit(&x, &l).unwrap();
        let b = limit(&x, &l.scaled(k)).unwrap();
        prop_assert_eq!(a.exists, b.exists);
        prop_assert_eq!(a.value, b.value);
    }

    /// A limit is fixed by `λ`, and the limit of a fixed point is itself.
    #[test]
    fn limit_is_fixed(f in 0u8..4, w in prop::collection::vec(-2i64..=2, 3), xs in matrix(3)) {
        let spec = field(f);
        let x = ActionInstance::vector(Matrix::from_fn(spec, 3, 1, |i, _| FieldElement::from_i64(spec, xs[i])), None).unwrap();
        let l = Cocharacter::diagonal(spec, &w);
        let out = limit(&x, &l).unwrap();
        if let Some(v) = out.value {
            let y = x.with_point(v.clone());
            prop_assert_eq!(limit(&y, &l).unwrap().value, Some(v));
        }
    }

    /// `x = u⁻¹·x₀` with `x₀` fixed by `λ` and `u ∈ R_u(P_λ)`: the limit
    /// criterion and the fixed-cocharacter criterion agree.
    #[test]
    fn conjfixed_sides_agree(f in 0u8..4, w in prop::collection::vec(-2i64..=2, 3), d in prop::collection::vec(-3i64..=3, 3), us in matrix(3)) {
        let spec = field(f);
        let l = Cocharacter::diagonal(spec, &w);
        let u = Matrix::from_fn(spec, 3, 3, |i, j| {
            if i == j { FieldElement::one(spec) } else if w[i] > w[j] { FieldElement::from_i64(spec, us[i * 3 + j]) } else { FieldElement::zero(spec) }
        });
        let x0 = Matrix::from_fn(spec, 3, 3, |i, j| if w[i] == w[j] { FieldElement::from_i64(spec, d[i] + d[j]) } else { FieldElement::zero(spec) });
        let x = ActionInstance::tuple(vec![x0]).unwrap().act(&u.inverse().unwrap());
        let (lhs, rhs) = check_conjfixed(&x, &l, &u).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// Semisimplicity, span dimension and centralizer dimension are
    /// conjugation invariants.
    #[test]
    fn module_invariants_under_conjugation((f, n, ms) in tuple_strategy(), a in matrix(3), b in matrix(3)) {
        let spec = field(f);
        let t = MatrixTuple::from_entries(ms.iter().map(|m| square(spec, n, m)).collect()).unwrap();
        let g = invertible(spec, n, &a[..n * n], &b[..n * n]);
        let s = t.conjugate(&g);
        prop_assert_eq!(is_semisimple_module(&t), is_semisimple_module(&s));
        prop_assert_eq!(span_algebra(&t).dim(), span_algebra(&s).dim());
        prop_assert_eq!(centralizer_algebra(&t).dim(), centralizer_algebra(&s).dim());
        let iso = modules_isomorphic(&t, &s).unwrap();
        prop_assert!(iso.is_isomorphic());
        if let Some(p) = iso.witness() {
            for (x, y) in t.entries().iter().zip(s.entries()) {
                prop_assert_eq!(&(p * x), &(y * p));
            }
        }
    }

    /// The exact verdict agrees with brute force over tiny fields, is
    /// conjugation invariant, and its certificate re-verifies.
    #[test]
    fn full_verdict_matches_brute_force(p in prop::sample::select(vec![2u32, 3]), (_, n, ms) in tuple_strategy(), a in matrix(3), b in matrix(3)) {
        let spec = FieldSpec::prime(p);
        let t = MatrixTuple::from_entries(ms.iter().map(|m| square(spec, n, m)).collect()).unwrap();
        let cert = is_orbit_closed_full(&t).unwrap();
        prop_assert_eq!(cert.verdict == Verdict::Closed, brute_force_semisimple(&t).unwrap());
        prop_assert!(verify(&cert).is_ok());
        let g = invertible(spec, n, &a[..n * n], &b[..n * n]);
        prop_assert_eq!(is_orbit_closed_full(&t.conjugate(&g)).unwrap().verdict, cert.verdict);
    }

    /// Verdicts depend only on the support, not on its scale; Outside
    /// normals are strictly positive on the support.
    #[test]
    fn torus_certificates(r in 1usize..=2, ws in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 1..=6), k in 1i64..4) {
        let weights: Vec<Vec<i64>> = ws.into_iter().map(|w| w[..r].to_vec()).collect();
        let s = WeightSupport::new(r, weights).unwrap();
        let c = torus_orbit_closed(&s);
        prop_assert!(c.check(&s));
        prop_assert_eq!(torus_orbit_closed(&s.scaled(k)).kind, c.kind);
        prop_assert_eq!(optimal_destabilizer(&s.scaled(k)).ok(), optimal_destabilizer(&s).ok());
        let m = min_norm_point(&s);
        prop_assert_eq!(m.iter().all(Zero::is_zero), c.kind != ConvexKind::Outside);
        match optimal_destabilizer(&s) {
            Ok(w) => {
                prop_assert_eq!(c.kind, ConvexKind::Outside);
                for chi in s.weights() {
                    prop_assert!(chi.iter().zip(&w).map(|(a, b)| a * b).sum::<i64>() > 0);
                }
            }
            Err(_) => prop_assert!(c.kind != ConvexKind::Outside),
        }
        // the min-norm point pairs with every weight at least |m|²
        let norm: BigRational = m.iter().map(|x| x * x).sum();
        for chi in s.weights() {
            let d: BigRational = chi.iter().zip(&m).map(|(&a, x)| x * BigRational::from_integer(a.into())).sum();
            prop_assert!(!(d - &norm).is_negative());
        }
    }

    #[test]
    fn invert_fails_iff_singular(f in 0u8..5, a in matrix(3)) {
        let m = square(field(f), 3, &a);
        prop_assert_eq!(invert(&m).is_ok(), m.rank() == 3);
        if let Ok(mi) = invert(&m) {
            prop_assert!((&m * &mi).is_identity());
        }
    }

    #[test]
    fn rref_is_idempotent(f in 0u8..5, a in prop::collection::vec(-3i64..=3, 12)) {
        let spec = field(f);
        let m = Matrix::from_fn(spec, 3, 4, |i, j| FieldElement::from_i64(spec, a[i * 4 + j]));
        let once = rref(&m);
        let twice = rref(&once.matrix);
        prop_assert_eq!(&twice.matrix, &once.matrix);
        prop_assert_eq!(twice.pivots, once.pivots);
        prop_assert_eq!(once.rank, m.rank());
    }

    /// Solutions satisfy the system; an inconsistent answer means `b` is
    /// outside the column space.
    #[test]
    fn solve_linear_by_substitution(f in 0u8..5, a in prop::collection::vec(-3i64..=3, 12), b in prop::collection::vec(-3i64..=3, 3)) {
        let spec = field(f);
        let m = Matrix::from_fn(spec, 3, 4, |i, j| FieldElement::from_i64(spec, a[i * 4 + j]));
        let rhs = Matrix::from_fn(spec, 3, 1, |i, _| FieldElement::from_i64(spec, b[i]));
        match solve_linear(&m, &rhs) {
            LinearSolution::Consistent { particular, kernel } => {
                prop_assert_eq!(&(&m * &particular), &rhs);
                for v in &kernel {
                    prop_assert_eq!(&(&m * &(&particular + v)), &rhs);
                }
            }
            LinearSolution::Inconsistent => prop_assert_eq!(m.hstack(&rhs).rank(), m.rank() + 1),
        }
    }

    #[test]
    fn field_axioms_f16(x in 0u32..16, y in 0u32..16, z in 0u32..16) {
        let (x, y, z) = (gf16(x), gf16(y), gf16(z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        match x.inv() {
            Some(xi) => prop_assert!((&x * &xi).is_one()),
            None => prop_assert!(x.is_zero()),
        }
    }

    #[test]
    fn field_associativity(f in 0u8..5, x in -20i64..20, y in -20i64..20, z in -20i64..20) {
        let spec = field(f);
        let (x, y, z) = (FieldElement::from_i64(spec, x), FieldElement::from_i64(spec, y), FieldElement::from_i64(spec, z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
    }

    /// A torus point embedded diagonally in GL_n: `limit_along` agrees with
    /// the cocharacter limit of the pairings `⟨χ_i, m⟩`.
    #[test]
    fn torus_limit_matches_cochar_limit(
        f in 0u8..4,
        chis in prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 1..=4),
        m in prop::collection::vec(-2i64..=2, 2),
        cs in prop::collection::vec(-2i64..=2, 4),
    ) {
        let spec = field(f);
        let n = chis.len();
        let coords: Vec<FieldElement> = cs[..n].iter().map(|&c| FieldElement::from_i64(spec, c)).collect();
        let p = TorusPoint::new(2, chis.clone(), coords.clone()).unwrap();
        let pairing: Vec<i64> = chis.iter().map(|c| c[0] * m[0] + c[1] * m[1]).collect();
        let x = ActionInstance::vector(Matrix::column_vector(spec, coords), None).unwrap();
        let ours = limit_along(&p, &m);
        let theirs = limit(&x, &Cocharacter::diagonal(spec, &pairing)).unwrap();
        prop_assert_eq!(ours.exists, theirs.exists);
        let expected = ours.value.map(|v| ActionInstance::vector(Matrix::column_vector(spec, v), None).unwrap().point().clone());
        prop_assert_eq!(expected, theirs.value);
    }

    /// `P_λ` is closed under products and inverses.
    #[test]
    fn parabolic_is_a_subgroup(f in 0u8..4, w in prop::collection::vec(-2i64..=2, 3), a in matrix(3), b in matrix(3)) {
        let spec = field(f);
        let l = Cocharacter::diagonal(spec, &w);
        let (g, h) = (parabolic(spec, &w, &a), parabolic(spec, &w, &b));
        prop_assert!(l.p_lambda_contains(&g).unwrap());
        prop_assert!(l.p_lambda_contains(&h).unwrap());
        prop_assert!(l.p_lambda_contains(&(&g * &h)).unwrap());
        prop_assert!(l.p_lambda_contains(&g.inverse().unwrap()).unwrap());
    }

    /// A limit is concentrated in weight zero.
    #[test]
    fn limit_grades_at_zero(f in 0u8..4, w in prop::collection::vec(-2i64..=2, 3), xs in matrix(3)) {
        let spec = field(f);
        let x = ActionInstance::tuple(vec![square(spec, 3, &xs)]).unwrap();
        let l = Cocharacter::diagonal(spec, &w);
        if let Some(v) = limit(&x, &l).unwrap().value {
            let weights = grade(&x.with_point(v), &l).unwrap().weights();
            prop_assert!(weights.iter().all(|&d| d == 0), "{:?}", weights);
        }
    }

    /// The radical is a nilpotent two-sided ideal.
    #[test]
    fn radical_is_nilpotent_ideal((f, n, ms) in tuple_strategy()) {
        let spec = field(f);
        let t = MatrixTuple::from_entries(ms.iter().map(|m| square(spec, n, m)).collect()).unwrap();
        let a = span_algebra(&t);
        let rad = a.radical().to_vec();
        let in_rad = |m: &Matrix| {
            let mut cols = rad.iter().map(|r| Matrix::column_vector(spec, r.vectorize())).collect::<Vec<_>>();
            cols.push(Matrix::column_vector(spec, m.vectorize()));
            let stacked = cols.iter().skip(1).fold(cols[0].clone(), |acc, c| acc.hstack(c));
            stacked.rank() == rad.len()
        };
        for r in &rad {
            prop_assert!(a.contains(r));
            prop_assert!(r.pow(n as u32).is_zero());
            for b in a.basis() {
                prop_assert!(in_rad(&(r * b)));
                prop_assert!(in_rad(&(b * r)));
            }
        }
    }

    #[test]
    fn span_ignores_generator_order((f, n, ms) in tuple_strategy()) {
        let spec = field(f);
        let t = MatrixTuple::from_entries(ms.iter().map(|m| square(spec, n, m)).collect()).unwrap();
        let order: Vec<usize> = (0..t.len()).rev().collect();
        let (a, b) = (span_algebra(&t), span_algebra(&t.permuted(&order)));
        prop_assert_eq!(a.dim(), b.dim());
        prop_assert!(b.basis().iter().all(|m| a.contains(m)));
    }

    /// Isomorphism is symmetric and transitive, with witnesses composing.
    #[test]
    fn isomorphism_is_an_equivalence((f, n, ms) in tuple_strategy(), a in matrix(3), b in matrix(3), c in matrix(3), d in matrix(3)) {
        let spec = field(f);
        let s = MatrixTuple::from_entries(ms.iter().map(|m| square(spec, n, m)).collect()).unwrap();
        let t = s.conjugate(&invertible(spec, n, &a[..n * n], &b[..n * n]));
        let u = t.conjugate(&invertible(spec, n, &c[..n * n], &d[..n * n]));
        let intertwines = |p: &Matrix, x: &MatrixTuple, y: &MatrixTuple| {
            p.inverse().is_some() && x.entries().iter().zip(y.entries()).all(|(x, y)| p * x == y * p)
        };
        prop_assert!(modules_isomorphic(&s, &s).unwrap().is_isomorphic());
        let st = modules_isomorphic(&s, &t).unwrap();
        let ts = modules_isomorphic(&t, &s).unwrap();
        let tu = modules_isomorphic(&t, &u).unwrap();
        let su = modules_isomorphic(&s, &u).unwrap();
        prop_assert!(st.is_isomorphic() && ts.is_isomorphic() && tu.is_isomorphic() && su.is_isomorphic());
        if let (Some(p), Some(q)) = (st.witness(), tu.witness()) {
            prop_assert!(intertwines(p, &s, &t));
            prop_assert!(intertwines(&p.inverse().unwrap(), &t, &s));
            prop_assert!(intertwines(&(q * p), &s, &u));
        }
        // a non-isomorphic partner stays non-isomorphic after conjugation
        let z = MatrixTuple::from_entries(vec![Matrix::zeros(spec, n, n); s.len()]).unwrap();
        let sz = modules_isomorphic(&s, &z).unwrap().is_isomorphic();
        prop_assert_eq!(modules_isomorphic(&z, &s).unwrap().is_isomorphic(), sz);
        prop_assert_eq!(modules_isomorphic(&u, &z).unwrap().is_isomorphic(), sz);
    }
}

#[test]
fn point_zero_like_matches_shape() {
    let spec = FieldSpec::prime(5);
    let p = Point::ConjugationOnTuple(vec![Matrix::identity(spec, 2)]);
    assert!(p.zero_like().is_zero());
}
