//! Exact scalars over ℚ and the finite fields F_{p^k}.
//!
//! Finite fields are realised as F_p[x]/(m) where `m` is the fixed monic
//! irreducible listed in [`MODULUS_TABLE`]. An element is stored as its
//! coefficient vector packed base `p` into a single `u32` (`c0 + c1 p + ...`),
//! so arithmetic never allocates.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

/// Largest extension degree supported by the modulus table.
pub const MAX_DEGREE: u32 = 8;

/// One monic irreducible per `(p, k)`: `(p, k, [c0, .., c_{k-1}])` encodes
/// `x^k + c_{k-1} x^{k-1} + .. + c0`. The first irreducible in the order of
/// the packed coefficient code with nonzero constant term is chosen, so the
/// table is reproducible. Serialized elements depend on this table.
pub static MODULUS_TABLE: &[(u32, u32, &[u32])] = &[
    (2, 1, &[0]),
    (2, 2, &[1, 1]),
    (2, 3, &[1, 1, 0]),
    (2, 4, &[1, 1, 0, 0]),
    (2, 5, &[1, 0, 1, 0, 0]),
    (2, 6, &[1, 1, 0, 0, 0, 0]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0]),
    (2, 8, &[1, 1, 0, 1, 1, 0, 0, 0]),
    (3, 1, &[0]),
    (3, 2, &[1, 0]),
    (3, 3, &[1, 2, 0]),
    (3, 4, &[2, 1, 0, 0]),
    (3, 5, &[1, 2, 0, 0, 0]),
    (3, 6, &[2, 1, 0, 0, 0, 0]),
    (3, 7, &[2, 0, 1, 0, 0, 0, 0]),
    (3, 8, &[2, 0, 1, 0, 0, 0, 0, 0]),
    (5, 1, &[0]),
    (5, 2, &[2, 0]),
    (5, 3, &[1, 1, 0]),
    (5, 4, &[2, 0, 0, 0]),
    (5, 5, &[1, 4, 0, 0, 0]),
    (5, 6, &[2, 1, 0, 0, 0, 0]),
    (5, 7, &[1, 1, 0, 0, 0, 0, 0]),
    (5, 8, &[2, 0, 0, 0, 0, 0, 0, 0]),
    (7, 1, &[0]),
    (7, 2, &[1, 0]),
    (7, 3, &[2, 0, 0]),
    (7, 4, &[1, 1, 0, 0]),
    (7, 5, &[3, 1, 0, 0, 0]),
    (7, 6, &[2, 0, 0, 0, 0, 0]),
    (7, 7, &[1, 6, 0, 0, 0, 0, 0]),
    (7, 8, &[3, 1, 0, 0, 0, 0, 0, 0]),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a supported prime (expected one of 2, 3, 5, 7)")]
    UnsupportedPrime(u32),
    #[error("extension degree {0} outside 1..={MAX_DEGREE}")]
    UnsupportedDegree(u32),
    #[error("table modulus for F_{p}^{k} failed the irreducibility check")]
    ReducibleModulus { p: u32, k: u32 },
    #[error("cannot embed {from} into {to}")]
    IncompatibleSpecs { from: FieldSpec, to: FieldSpec },
    #[error("cannot parse field element {text:?} over {spec}")]
    Parse { spec: FieldSpec, text: String },
    #[error("no common field for {0} and {1}")]
    NoCommonField(FieldSpec, FieldSpec),
}

/// The working field: ℚ or F_{p^k}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Finite { p: u32, k: u32 },
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Finite { p, k: 1 } => write!(f, "F_{p}"),
            FieldSpec::Finite { p, k } => write!(f, "F_{p}^{k}"),
        }
    }
}

fn table_modulus(p: u32, k: u32) -> Option<&'static [u32]> {
    MODULUS_TABLE
        .iter()
        .find(|(tp, tk, _)| *tp == p && *tk == k)
        .map(|(_, _, m)| *m)
}

fn verified_moduli() -> &'static Mutex<HashSet<(u32, u32)>> {
    static CACHE: OnceLock<Mutex<HashSet<(u32, u32)>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashSet::new()))
}

impl FieldSpec {
    pub const Q: FieldSpec = FieldSpec::Rationals;

    /// F_{p^k} with the table modulus. The modulus is checked for
    /// irreducibility the first time a given `(p, k)` is requested.
    pub fn finite(p: u32, k: u32) -> Result<Self, FieldError> {
        if ![2, 3, 5, 7].contains(&p) {
            return Err(FieldError::UnsupportedPrime(p));
        }
        if k == 0 || k > MAX_DEGREE {
            return Err(FieldError::UnsupportedDegree(k));
        }
        let mut cache = verified_moduli().lock().expect("modulus cache poisoned");
        if !cache.contains(&(p, k)) {
            let m = table_modulus(p, k).ok_or(FieldError::UnsupportedDegree(k))?;
            let mut full: Vec<u32> = m.to_vec();
            full.push(1);
            if !is_irreducible_mod_p(&full, p) {
                return Err(FieldError::ReducibleModulus { p, k });
            }
            cache.insert((p, k));
        }
        Ok(FieldSpec::Finite { p, k })
    }

    /// Shorthand for prime fields, panicking on unsupported primes.
    pub fn prime(p: u32) -> Self {
        Self::finite(p, 1).expect("unsupported prime")
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldSpec::Finite { .. })
    }

    /// 0 for ℚ.
    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Finite { p, .. } => *p,
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 1,
            FieldSpec::Finite { k, .. } => *k,
        }
    }

    /// Number of elements, `None` for ℚ.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Finite { p, k } => Some((*p as u64).pow(*k)),
        }
    }

    /// Low coefficients `[c0, .., c_{k-1}]` of the monic modulus.
    pub fn modulus(&self) -> Option<&'static [u32]> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Finite { p, k } => table_modulus(*p, *k),
        }
    }

    /// True when `self` contains a canonical copy of `sub`.
    pub fn extends(&self, sub: &FieldSpec) -> bool {
        match (self, sub) {
            (FieldSpec::Rationals, FieldSpec::Rationals) => true,
            (FieldSpec::Finite { p, k }, FieldSpec::Finite { p: q, k: j }) => p == q && k % j == 0,
            _ => false,
        }
    }

    /// The extension of degree `factor` over this field.
    pub fn extension(&self, factor: u32) -> Result<Self, FieldError> {
        match self {
            FieldSpec::Rationals => Err(FieldError::IncompatibleSpecs { from: *self, to: *self }),
            FieldSpec::Finite { p, k } => FieldSpec::finite(*p, k * factor),
        }
    }

    /// Smallest field containing both.
    pub fn join(&self, other: &FieldSpec) -> Result<Self, FieldError> {
        match (self, other) {
            (FieldSpec::Rationals, FieldSpec::Rationals) => Ok(*self),
            (FieldSpec::Finite { p, k }, FieldSpec::Finite { p: q, k: j }) if p == q => {
                let l = num_integer::lcm(*k, *j);
                FieldSpec::finite(*p, l)
            }
            _ => Err(FieldError::NoCommonField(*self, *other)),
        }
    }

    /// All elements in code order. Panics for ℚ.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        let (p, k) = match self {
            FieldSpec::Finite { p, k } => (*p, *k),
            FieldSpec::Rationals => panic!("ℚ is infinite"),
        };
        let q = p.pow(k);
        (0..q).map(move |code| FieldElement::Finite(Gf { p, k, code }))
    }

    /// A generator of the field over its prime field (the class of `x`).
    pub fn generator(&self) -> FieldElement {
        match self {
            FieldSpec::Rationals => FieldElement::one(*self),
            FieldSpec::Finite { p, k: 1 } => FieldElement::Finite(Gf { p: *p, k: 1, code: 1 }),
            FieldSpec::Finite { p, k } => FieldElement::Finite(Gf { p: *p, k: *k, code: *p }),
        }
    }
}

/// Trial division by every monic polynomial of degree at most half the
/// degree. `f` is given low coefficient first.
pub fn is_irreducible_mod_p(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut g: Vec<u32> = (0..d).map(|i| ((code / (p as u64).pow(i as u32)) % p as u64) as u32).collect();
            g.push(1);
            if poly_rem_mod_p(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_mod_p(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let lead_inv = mod_inverse(b[b.len() - 1] as u64, p as u64);
    while r.len() >= b.len() {
        let top = *r.last().unwrap() % p as u64;
        if top != 0 {
            let c = top * lead_inv % p as u64;
            let shift = r.len() - b.len();
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p as u64 - c) * bi as u64) % p as u64;
            }
        }
        r.pop();
    }
    r.into_iter().map(|c| (c % p as u64) as u32).collect()
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// An element of F_{p^k} as a packed coefficient code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf {
    p: u32,
    k: u32,
    code: u32,
}

impl Gf {
    fn digits(&self) -> [u32; MAX_DEGREE as usize] {
        let mut out = [0u32; MAX_DEGREE as usize];
        let mut c = self.code;
        for d in out.iter_mut().take(self.k as usize) {
            *d = c % self.p;
            c /= self.p;
        }
        out
    }

    fn pack(p: u32, k: u32, digits: &[u32]) -> Self {
        let mut code = 0u32;
        for i in (0..k as usize).rev() {
            code = code * p + digits[i] % p;
        }
        Gf { p, k, code }
    }

    pub fn coefficients(&self) -> Vec<u32> {
        self.digits()[..self.k as usize].to_vec()
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    fn add(self, o: Gf) -> Gf {
        if self.k == 1 {
            return Gf { code: (self.code + o.code) % self.p, ..self };
        }
        let (a, b) = (self.digits(), o.digits());
        let s: Vec<u32> = (0..self.k as usize).map(|i| (a[i] + b[i]) % self.p).collect();
        Gf::pack(self.p, self.k, &s)
    }

    fn neg(self) -> Gf {
        if self.k == 1 {
            return Gf { code: (self.p - self.code) % self.p, ..self };
        }
        let a = self.digits();
        let s: Vec<u32> = (0..self.k as usize).map(|i| (self.p - a[i]) % self.p).collect();
        Gf::pack(self.p, self.k, &s)
    }

    fn mul(self, o: Gf) -> Gf {
        let p = self.p as u64;
        if self.k == 1 {
            return Gf { code: ((self.code as u64 * o.code as u64) % p) as u32, ..self };
        }
        let k = self.k as usize;
        let (a, b) = (self.digits(), o.digits());
        let mut prod = [0u64; 2 * MAX_DEGREE as usize];
        for i in 0..k {
            if a[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + a[i] as u64 * b[j] as u64) % p;
            }
        }
        let m = table_modulus(self.p, self.k).expect("modulus");
        for i in (k..2 * k - 1).rev() {
            let c = prod[i] % p;
            if c == 0 {
                continue;
            }
            // x^k = -(m_0 + .. + m_{k-1} x^{k-1})
            for (j, &mj) in m.iter().enumerate() {
                prod[i - k + j] = (prod[i - k + j] + (p - c) * mj as u64) % p;
            }
            prod[i] = 0;
        }
        let digits: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        Gf::pack(self.p, self.k, &digits)
    }

    fn pow(self, mut e: u64) -> Gf {
        let mut result = Gf { code: 1, ..self };
        let mut base = self;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        result
    }

    fn inv(self) -> Option<Gf> {
        if self.code == 0 {
            return None;
        }
        let q = (self.p as u64).pow(self.k);
        Some(self.pow(q - 2))
    }
}

/// An exact scalar.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Finite(Gf),
}

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldElement::Rational(_) => FieldSpec::Rationals,
            FieldElement::Finite(g) => FieldSpec::Finite { p: g.p, k: g.k },
        }
    }

    pub fn zero(spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Rationals => FieldElement::Rational(BigRational::zero()),
            FieldSpec::Finite { p, k } => FieldElement::Finite(Gf { p, k, code: 0 }),
        }
    }

    pub fn one(spec: FieldSpec) -> Self {
        Self::from_i64(spec, 1)
    }

    /// Image of an integer under the canonical ring map.
    pub fn from_i64(spec: FieldSpec, n: i64) -> Self {
        match spec {
            FieldSpec::Rationals => FieldElement::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Finite { p, k } => {
                let c = n.rem_euclid(p as i64) as u32;
                FieldElement::Finite(Gf { p, k, code: c })
            }
        }
    }

    /// `num/den` in ℚ. Panics if `den == 0`.
    pub fn rational(num: i64, den: i64) -> Self {
        FieldElement::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Element of F_{p^k} from its low-first coefficient vector.
    pub fn from_coefficients(spec: FieldSpec, coeffs: &[u32]) -> Option<Self> {
        match spec {
            FieldSpec::Finite { p, k } if coeffs.len() <= k as usize => {
                let mut d = [0u32; MAX_DEGREE as usize];
                for (i, &c) in coeffs.iter().enumerate() {
                    d[i] = c % p;
                }
                Some(FieldElement::Finite(Gf::pack(p, k, &d)))
            }
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Finite(g) => g.code == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_one(),
            FieldElement::Finite(g) => g.code == 1,
        }
    }

    pub fn inv(&self) -> Option<Self> {
        match self {
            FieldElement::Rational(r) if r.is_zero() => None,
            FieldElement::Rational(r) => Some(FieldElement::Rational(r.recip())),
            FieldElement::Finite(g) => g.inv().map(FieldElement::Finite),
        }
    }

    /// Integer power; negative exponents invert. Panics on `0^{-n}`.
    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv().expect("zero to a negative power") } else { self.clone() };
        let e = e.unsigned_abs();
        match base {
            FieldElement::Rational(r) => {
                let mut acc = BigRational::one();
                for _ in 0..e {
                    acc *= &r;
                }
                FieldElement::Rational(acc)
            }
            FieldElement::Finite(g) => FieldElement::Finite(g.pow(e)),
        }
    }

    /// Multiplicative order, for nonzero elements of finite fields.
    pub fn multiplicative_order(&self) -> Option<u64> {
        match self {
            FieldElement::Finite(g) if g.code != 0 => {
                let one = Gf { code: 1, ..*g };
                let mut acc = *g;
                let mut n = 1u64;
                while acc != one {
                    acc = acc.mul(*g);
                    n += 1;
                }
                Some(n)
            }
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElement::Rational(r) => Some(r),
            FieldElement::Finite(_) => None,
        }
    }

    pub fn as_gf(&self) -> Option<Gf> {
        match self {
            FieldElement::Finite(g) => Some(*g),
            FieldElement::Rational(_) => None,
        }
    }

    /// Canonical lift of a prime-field element to `0..p`.
    pub fn prime_field_lift(&self) -> Option<u32> {
        match self {
            FieldElement::Finite(g) if g.k == 1 => Some(g.code),
            _ => None,
        }
    }

    /// A random element; over ℚ a small fraction with numerator in
    /// `-range..=range` and denominator in `1..=den_range`.
    pub fn random<R: Rng + ?Sized>(spec: FieldSpec, rng: &mut R, range: i64, den_range: i64) -> Self {
        match spec {
            FieldSpec::Rationals => {
                let num = rng.gen_range(-range..=range);
                let den = rng.gen_range(1..=den_range.max(1));
                FieldElement::rational(num, den)
            }
            FieldSpec::Finite { p, k } => {
                let q = p.pow(k);
                FieldElement::Finite(Gf { p, k, code: rng.gen_range(0..q) })
            }
        }
    }

    /// Parses `"a/b"`, `"a"` over ℚ or `"[c0,c1,..]"` / `"c"` over F_{p^k}.
    pub fn parse(spec: FieldSpec, text: &str) -> Result<Self, FieldError> {
        let err = || FieldError::Parse { spec, text: text.to_string() };
        let t = text.trim();
        match spec {
            FieldSpec::Rationals => {
                let (n, d) = match t.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (t, "1"),
                };
                let n: BigInt = n.parse().map_err(|_| err())?;
                let d: BigInt = d.parse().map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(FieldElement::Rational(BigRational::new(n, d)))
            }
            FieldSpec::Finite { p, k } => {
                let inner = t.strip_prefix('[').and_then(|s| s.strip_suffix(']'));
                let coeffs: Vec<i64> = match inner {
                    Some(body) if body.trim().is_empty() => vec![],
                    Some(body) => body
                        .split(',')
                        .map(|c| c.trim().parse::<i64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| err())?,
                    None => vec![t.parse::<i64>().map_err(|_| err())?],
                };
                if coeffs.len() > k as usize {
                    return Err(err());
                }
                let reduced: Vec<u32> = coeffs.iter().map(|c| c.rem_euclid(p as i64) as u32).collect();
                FieldElement::from_coefficients(spec, &reduced).ok_or_else(err)
            }
        }
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.spec(), other.spec(), "field mismatch in arithmetic");
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElement::Finite(g) => {
                let cs: Vec<String> = g.coefficients().iter().map(|c| c.to_string()).collect();
                write!(f, "[{}]", cs.join(","))
            }
        }
    }
}

impl Add<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        self.check_same(o);
        match (self, o) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            (FieldElement::Finite(a), FieldElement::Finite(b)) => FieldElement::Finite(a.add(*b)),
            _ => unreachable!(),
        }
    }
}

impl Sub<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        self.check_same(o);
        match (self, o) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a - b),
            (FieldElement::Finite(a), FieldElement::Finite(b)) => FieldElement::Finite(a.add(b.neg())),
            _ => unreachable!(),
        }
    }
}

impl Mul<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        self.check_same(o);
        match (self, o) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            (FieldElement::Finite(a), FieldElement::Finite(b)) => FieldElement::Finite(a.mul(*b)),
            _ => unreachable!(),
        }
    }
}

impl Div<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn div(self, o: &FieldElement) -> FieldElement {
        self * &o.inv().expect("division by zero")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Rational(a) => FieldElement::Rational(-a),
            FieldElement::Finite(a) => FieldElement::Finite(a.neg()),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement { (&self).$m(&o) }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: &FieldElement) -> FieldElement { (&self).$m(o) }
        }
        impl $tr<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement { self.$m(&o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, o: &FieldElement) {
        *self = &*self + o;
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, o: &FieldElement) {
        *self = &*self - o;
    }
}

impl MulAssign<&FieldElement> for FieldElement {
    fn mul_assign(&mut self, o: &FieldElement) {
        *self = &*self * o;
    }
}

fn embedding_roots() -> &'static Mutex<HashMap<(u32, u32, u32), Gf>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32, u32), Gf>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The image of the generator of F_{p^k} inside F_{p^{k'}}: the root of the
/// table modulus of smallest code.
fn embedding_root(p: u32, k: u32, target_k: u32) -> Gf {
    let mut cache = embedding_roots().lock().expect("embedding cache poisoned");
    if let Some(r) = cache.get(&(p, k, target_k)) {
        return *r;
    }
    let modulus = table_modulus(p, k).expect("modulus");
    let q = p.pow(target_k);
    let root = (0..q)
        .map(|code| Gf { p, k: target_k, code })
        .find(|beta| {
            // x^k + sum m_j x^j
            let mut acc = beta.pow(k as u64);
            let mut power = Gf { p, k: target_k, code: 1 };
            for &mj in modulus {
                acc = acc.add(power.mul(Gf { p, k: target_k, code: mj }));
                power = power.mul(*beta);
            }
            acc.code == 0
        })
        .expect("an irreducible of degree k splits in every extension of degree divisible by k");
    cache.insert((p, k, target_k), root);
    root
}

/// Image of `e` under the canonical embedding into `target`.
pub fn embed_extension(e: &FieldElement, target: FieldSpec) -> Result<FieldElement, FieldError> {
    let from = e.spec();
    if !target.extends(&from) {
        return Err(FieldError::IncompatibleSpecs { from, to: target });
    }
    if from == target {
        return Ok(e.clone());
    }
    let g = e.as_gf().expect("finite");
    let FieldSpec::Finite { p, k: tk } = target else { unreachable!() };
    if g.k == 1 {
        return Ok(FieldElement::Finite(Gf { p, k: tk, code: g.code }));
    }
    let beta = embedding_root(p, g.k, tk);
    let mut acc = Gf { p, k: tk, code: 0 };
    let mut power = Gf { p, k: tk, code: 1 };
    for c in g.coefficients() {
        acc = acc.add(power.mul(Gf { p, k: tk, code: c }));
        power = power.mul(beta);
    }
    Ok(FieldElement::Finite(acc))
}

/// Rational value as `f64`, for display only.
pub fn approx_f64(e: &FieldElement) -> Option<f64> {
    e.as_rational().and_then(|r| {
        let n = r.numer().to_f64()?;
        let d = r.denom().to_f64()?;
        Some(n / d)
    })
}

/// Sign of a rational element.
pub fn rational_sign(e: &FieldElement) -> Option<i32> {
    e.as_rational().map(|r| {
        if r.is_zero() {
            0
        } else if r.is_positive() {
            1
        } else {
            -1
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_moduli_are_irreducible() {
        for &(p, k, m) in MODULUS_TABLE {
            let mut full = m.to_vec();
            full.push(1);
            assert!(is_irreducible_mod_p(&full, p), "F_{p}^{k}");
            assert_eq!(m.len(), k as usize);
        }
    }

    #[test]
    fn f4_modulus_is_x2_x_1() {
        assert_eq!(FieldSpec::finite(2, 2).unwrap().modulus(), Some(&[1u32, 1][..]));
    }

    #[test]
    fn unsupported_inputs() {
        assert_eq!(FieldSpec::finite(11, 1), Err(FieldError::UnsupportedPrime(11)));
        assert_eq!(FieldSpec::finite(2, 9), Err(FieldError::UnsupportedDegree(9)));
    }

    #[test]
    fn rationals_lowest_terms() {
        let a = FieldElement::rational(2, -4);
        assert_eq!(a.to_string(), "-1/2");
        assert_eq!(FieldElement::parse(FieldSpec::Q, "6/4").unwrap().to_string(), "3/2");
    }

    #[test]
    fn f4_generator_has_order_three() {
        let f4 = FieldSpec::finite(2, 2).unwrap();
        let a = f4.generator();
        assert_eq!(a.multiplicative_order(), Some(3));
        // a^2 + a + 1 = 0
        let s = &(&a * &a) + &a;
        assert!((s + FieldElement::one(f4)).is_zero());
    }

    #[test]
    fn embedding_examples() {
        let f2 = FieldSpec::prime(2);
        let f4 = FieldSpec::finite(2, 2).unwrap();
        let f16 = FieldSpec::finite(2, 4).unwrap();
        assert_eq!(embed_extension(&FieldElement::one(f2), f4).unwrap(), FieldElement::one(f4));
        assert_eq!(embed_extension(&FieldElement::zero(f2), f16).unwrap(), FieldElement::zero(f16));
        let img = embed_extension(&f4.generator(), f16).unwrap();
        assert_eq!(img.multiplicative_order(), Some(3));
        assert!(embed_extension(&f4.generator(), FieldSpec::finite(2, 3).unwrap()).is_err());
        assert!(embed_extension(&FieldElement::one(f2), FieldSpec::Q).is_err());
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let f4 = FieldSpec::finite(2, 2).unwrap();
        let f16 = FieldSpec::finite(2, 4).unwrap();
        for a in f4.elements() {
            for b in f4.elements() {
                let ea = embed_extension(&a, f16).unwrap();
                let eb = embed_extension(&b, f16).unwrap();
                assert_eq!(embed_extension(&(&a * &b), f16).unwrap(), &ea * &eb);
                assert_eq!(embed_extension(&(&a + &b), f16).unwrap(), &ea + &eb);
            }
        }
    }

    #[test]
    fn parse_and_display_finite() {
        let f9 = FieldSpec::finite(3, 2).unwrap();
        let e = FieldElement::parse(f9, "[2, 1]").unwrap();
        assert_eq!(e.to_string(), "[2,1]");
        assert_eq!(FieldElement::parse(f9, "4").unwrap().to_string(), "[1,0]");
        assert!(FieldElement::parse(f9, "[1,2,3]").is_err());
    }

    #[test]
    fn inverses_in_every_small_field() {
        for spec in [FieldSpec::prime(7), FieldSpec::finite(2, 4).unwrap(), FieldSpec::finite(3, 2).unwrap()] {
            for a in spec.elements().filter(|e| !e.is_zero()) {
                assert!((&a * &a.inv().unwrap()).is_one());
            }
        }
    }
}
