//! Univariate polynomials over the working field, used for minimal
//! polynomials and for splitting modules by kernels of `f(c)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{solve_linear, LinearSolution};
use crate::matrix::Matrix;

/// Coefficients low degree first, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    spec: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(spec: FieldSpec, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        Poly { spec, coeffs }
    }

    pub fn zero(spec: FieldSpec) -> Self {
        Poly { spec, coeffs: vec![] }
    }

    pub fn constant(c: FieldElement) -> Self {
        Poly::new(c.spec(), vec![c])
    }

    /// `x - r`.
    pub fn linear(r: &FieldElement) -> Self {
        Poly::new(r.spec(), vec![-r, FieldElement::one(r.spec())])
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("nonzero leading coefficient");
                Poly::new(self.spec, self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = FieldElement::zero(self.spec);
        let c = (0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z)).collect();
        Poly::new(self.spec, c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = FieldElement::zero(self.spec);
        let c = (0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) - o.coeffs.get(i).unwrap_or(&z)).collect();
        Poly::new(self.spec, c)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.spec);
        }
        let mut c = vec![FieldElement::zero(self.spec); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += &(a * b);
            }
        }
        Poly::new(self.spec, c)
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dl = d.leading().expect("division by the zero polynomial").inv().expect("nonzero");
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(self.spec), self.clone());
        }
        let mut q = vec![FieldElement::zero(self.spec); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = &r[i] * &dl;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[i - dd + j] -= &(&c * dj);
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (Poly::new(self.spec, q), Poly::new(self.spec, r))
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.div_rem(self).1.is_zero()
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a * &FieldElement::from_i64(self.spec, i as i64))
            .collect();
        Poly::new(self.spec, c)
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = FieldElement::zero(self.spec);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `f(m)` by Horner's rule.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut acc = Matrix::zeros(self.spec, n, n);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * m) + &Matrix::scalar(self.spec, n, c);
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }
}

/// Minimal polynomial of a square matrix (monic), from the first linear
/// dependence among `I, m, m^2, ..`.
pub fn minimal_polynomial(m: &Matrix) -> Poly {
    let spec = m.spec();
    let n = m.rows();
    let mut powers: Vec<Matrix> = vec![Matrix::identity(spec, n)];
    loop {
        let next = &powers[powers.len() - 1] * m;
        let cols = powers.iter().fold(None::<Matrix>, |acc, p| {
            let col = Matrix::column_vector(spec, p.vectorize());
            Some(match acc {
                None => col,
                Some(a) => a.hstack(&col),
            })
        });
        let a = cols.expect("at least the identity");
        let b = Matrix::column_vector(spec, next.vectorize());
        if let LinearSolution::Consistent { particular, .. } = solve_linear(&a, &b) {
            // next = sum c_i m^i  =>  x^d - sum c_i x^i
            let mut coeffs: Vec<FieldElement> = (0..powers.len()).map(|i| -particular.get(i, 0)).collect();
            coeffs.push(FieldElement::one(spec));
            return Poly::new(spec, coeffs);
        }
        powers.push(next);
    }
}

/// All monic polynomials of degree `d` over a finite field, in code order.
fn monic_polys(spec: FieldSpec, d: usize) -> impl Iterator<Item = Poly> {
    let elems: Vec<FieldElement> = spec.elements().collect();
    let q = elems.len() as u64;
    let count = q.pow(d as u32);
    (0..count).map(move |code| {
        let mut c = Vec::with_capacity(d + 1);
        let mut x = code;
        for _ in 0..d {
            c.push(elems[(x % q) as usize].clone());
            x /= q;
        }
        c.push(FieldElement::one(spec));
        Poly::new(spec, c)
    })
}

/// Upper bound on candidate divisors tried by [`factor_finite`].
const TRIAL_LIMIT: u64 = 2_000_000;

/// Factorisation of a nonzero polynomial over F_{p^k} into monic
/// irreducibles with multiplicity, by trial division in increasing degree.
/// Returns `None` if the search would exceed the trial budget.
pub fn factor_finite(f: &Poly) -> Option<Vec<(Poly, usize)>> {
    let spec = f.spec();
    let q = spec.order().expect("finite field");
    let mut rest = f.monic();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        if q.checked_pow(d as u32).is_none_or(|c| c > TRIAL_LIMIT) {
            return None;
        }
        for g in monic_polys(spec, d) {
            let mut mult = 0;
            loop {
                let (quo, rem) = rest.div_rem(&g);
                if !rem.is_zero() {
                    break;
                }
                rest = quo;
                mult += 1;
            }
            if mult > 0 {
                out.push((g, mult));
            }
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push((rest, 1));
    }
    Some(out)
}

/// Rational roots of a polynomial over ℚ (rational root theorem), sorted.
pub fn rational_roots(f: &Poly) -> Vec<FieldElement> {
    assert_eq!(f.spec(), FieldSpec::Q);
    if f.is_zero() {
        return vec![];
    }
    // clear denominators
    let denom_lcm = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.as_rational().unwrap().denom()));
    let ints: Vec<BigInt> =
        f.coeffs().iter().map(|c| (c.as_rational().unwrap() * BigRational::from_integer(denom_lcm.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if low > 0 {
        roots.push(BigRational::zero());
    }
    let ints = &ints[low..];
    let (a0, an) = (ints[0].abs(), ints[ints.len() - 1].abs());
    let (Some(a0), Some(an)) = (a0.to_u64(), an.to_u64()) else { return finish(roots) };
    if a0 > 1_000_000 || an > 1_000_000 || ints.len() == 1 {
        return finish(roots);
    }
    let divisors = |n: u64| (1..=n).filter(move |d| n.is_multiple_of(*d));
    for p in divisors(a0) {
        for q in divisors(an) {
            for s in [1i64, -1] {
                let r = BigRational::new(BigInt::from(s) * BigInt::from(p), BigInt::from(q));
                let val = ints.iter().rev().fold(BigRational::zero(), |acc, c| acc * &r + BigRational::from_integer(c.clone()));
                if val.is_zero() && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    finish(roots)
}

fn finish(mut roots: Vec<BigRational>) -> Vec<FieldElement> {
    roots.sort();
    roots.into_iter().map(FieldElement::Rational).collect()
}

/// A proper monic factor of `f` that this module can find exactly, if any:
/// a repeated factor, a linear factor, or (over finite fields) any
/// irreducible factor from trial division.
pub fn proper_factor(f: &Poly) -> Option<Poly> {
    let deg = f.degree()?;
    if deg < 2 {
        return None;
    }
    let g = f.gcd(&f.derivative());
    if g.degree().is_some_and(|d| d > 0) {
        // squarefree part is a proper factor
        return Some(f.div_rem(&g).0.monic());
    }
    match f.spec() {
        FieldSpec::Rationals => rational_roots(f).first().map(Poly::linear),
        FieldSpec::Finite { .. } => {
            let fs = factor_finite(f)?;
            if fs.len() == 1 && fs[0].1 == 1 {
                None
            } else {
                Some(fs[0].0.clone())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> FieldElement {
        FieldElement::from_i64(FieldSpec::Q, n)
    }

    #[test]
    fn minpoly_of_jordan_block() {
        let j = Matrix::from_i64(FieldSpec::Q, &[&[2, 1], &[0, 2]]);
        // (x-2)^2 = x^2 - 4x + 4
        assert_eq!(minimal_polynomial(&j), Poly::new(FieldSpec::Q, vec![q(4), q(-4), q(1)]));
        let d = Matrix::from_i64(FieldSpec::Q, &[&[3, 0], &[0, 3]]);
        assert_eq!(minimal_polynomial(&d).degree(), Some(1));
    }

    #[test]
    fn factor_over_f2() {
        let f2 = FieldSpec::prime(2);
        // x^4 + x = x (x+1)(x^2+x+1)
        let f = Poly::new(f2, [0, 1, 0, 0, 1].iter().map(|&c| FieldElement::from_i64(f2, c)).collect());
        let fs = factor_finite(&f).unwrap();
        let degs: Vec<usize> = fs.iter().map(|(g, _)| g.degree().unwrap()).collect();
        assert_eq!(degs, vec![1, 1, 2]);
    }

    #[test]
    fn rational_roots_found() {
        // 2x^2 - 3x + 1 = (2x-1)(x-1)
        let f = Poly::new(FieldSpec::Q, vec![q(1), q(-3), q(2)]);
        assert_eq!(rational_roots(&f), vec![FieldElement::rational(1, 2), q(1)]);
        let g = Poly::new(FieldSpec::Q, vec![q(1), q(0), q(1)]);
        assert!(rational_roots(&g).is_empty());
        assert!(proper_factor(&g).is_none());
    }

    #[test]
    fn div_rem_and_gcd() {
        let f = Poly::new(FieldSpec::Q, vec![q(-1), q(0), q(1)]);
        let g = Poly::new(FieldSpec::Q, vec![q(-1), q(1)]);
        let (quo, rem) = f.div_rem(&g);
        assert!(rem.is_zero());
        assert_eq!(quo, Poly::new(FieldSpec::Q, vec![q(1), q(1)]));
        assert_eq!(f.gcd(&g), g);
    }
}
