//! Dense complex polynomials and the three-term recurrence
//! `P_n + B P_{n-l} + A P_{n-k} = 0`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precise::{self, Cdd};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Polynomial with complex coefficients in ascending order of degree.
///
/// The zero polynomial is the empty coefficient vector. Trailing
/// coefficients are trimmed only when they are exactly zero.
///
/// Polynomials produced by the recurrence keep the low-order parts of their
/// double-double coefficients in `tail`; arithmetic, serialization and
/// [`ComplexPoly::eval`] use the `f64` coefficients only.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
    tail: Vec<Complex64>,
}

/// Equal values: a missing tail counts as zero.
impl PartialEq for ComplexPoly {
    fn eq(&self, other: &Self) -> bool {
        let low = |p: &Self, i: usize| p.tail().map_or(ZERO, |t| t[i]);
        self.coeffs == other.coeffs
            && (0..self.coeffs.len()).all(|i| low(self, i) == low(other, i))
    }
}

impl From<Vec<Complex64>> for ComplexPoly {
    fn from(coeffs: Vec<Complex64>) -> Self {
        Self::new(coeffs)
    }
}

impl From<ComplexPoly> for Vec<Complex64> {
    fn from(p: ComplexPoly) -> Self {
        p.coeffs
    }
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        Self {
            coeffs,
            tail: Vec::new(),
        }
    }

    pub(crate) fn from_dd(mut coeffs: Vec<Cdd>) -> Self {
        while coeffs.last().is_some_and(|c| precise::to_c64(*c) == ZERO) {
            coeffs.pop();
        }
        let (hi, lo): (Vec<Complex64>, Vec<Complex64>) =
            coeffs.into_iter().map(precise::split).unzip();
        Self {
            coeffs: hi,
            tail: lo,
        }
    }

    pub(crate) fn coeffs_dd(&self) -> Vec<Cdd> {
        if self.tail().is_none() {
            self.coeffs.iter().map(|&c| precise::dd(c)).collect()
        } else {
            self.coeffs
                .iter()
                .zip(&self.tail)
                .map(|(&hi, &lo)| precise::join(hi, lo))
                .collect()
        }
    }

    /// Low-order parts of the coefficients, when they were computed in
    /// double-double arithmetic.
    pub fn tail(&self) -> Option<&[Complex64]> {
        (!self.coeffs.is_empty() && self.tail.len() == self.coeffs.len())
            .then_some(self.tail.as_slice())
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^power`
    pub fn monomial(c: Complex64, power: usize) -> Self {
        let mut coeffs = vec![ZERO; power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    /// Builds from real coefficients, ascending degree.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `lead * prod (z - r)`
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Self {
        roots.iter().fold(Self::constant(lead), |acc, &r| {
            &acc * &Self::new(vec![-r, ONE])
        })
    }

    /// Parses the JSON literal format `[[re, im], ...]`, ascending degree.
    pub fn parse_literal(text: &str) -> Result<Self> {
        let pairs: Vec<[f64; 2]> =
            serde_json::from_str(text).map_err(|e| Error::PolyLiteral(e.to_string()))?;
        if pairs.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::PolyLiteral("non-finite coefficient".into()));
        }
        Ok(Self::new(
            pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
        ))
    }

    pub fn to_literal(&self) -> String {
        serde_json::to_string(&self.coeffs).expect("finite coefficients serialize")
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    /// Largest coefficient modulus (0 for the zero polynomial).
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `p(z^d)`
    pub fn compose_power(&self, d: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![ZERO; (self.coeffs.len() - 1) * d + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * d] = c;
        }
        Self::new(coeffs)
    }

    /// Divides by `(z - r)` using synthetic division; returns the quotient and
    /// the remainder `p(r)`.
    pub fn deflate(&self, r: Complex64) -> (Self, Complex64) {
        let n = self.coeffs.len();
        if n == 0 {
            return (Self::zero(), ZERO);
        }
        let mut quotient = vec![ZERO; n - 1];
        let mut carry = ZERO;
        for i in (0..n).rev() {
            let value = self.coeffs[i] + carry * r;
            if i == 0 {
                return (Self::new(quotient), value);
            }
            quotient[i - 1] = value;
            carry = value;
        }
        unreachable!()
    }
}

impl fmt::Display for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;

    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                self.coeffs.get(i).copied().unwrap_or(ZERO) + rhs.coeffs.get(i).copied().unwrap_or(ZERO)
            })
            .collect();
        ComplexPoly::new(coeffs)
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;

    fn neg(self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;

    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        self + &(-rhs)
    }
}

impl Mul for &ComplexPoly {
    type Output = ComplexPoly;

    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPoly::zero();
        }
        let mut coeffs = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        ComplexPoly::new(coeffs)
    }
}

pub fn poly_add(p: &ComplexPoly, q: &ComplexPoly) -> ComplexPoly {
    p + q
}

pub fn poly_mul(p: &ComplexPoly, q: &ComplexPoly) -> ComplexPoly {
    p * q
}

pub fn poly_eval(p: &ComplexPoly, z: Complex64) -> Complex64 {
    p.eval(z)
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Checks `k > l >= 1` and `gcd(k, l) = 1`.
pub fn check_shifts(k: u32, l: u32) -> Result<()> {
    if l < 1 {
        return Err(Error::InvalidSpec("l must be at least 1".into()));
    }
    if k <= l {
        return Err(Error::InvalidSpec("k must be greater than l".into()));
    }
    if gcd(k, l) != 1 {
        return Err(Error::InvalidSpec("k and l must be coprime".into()));
    }
    Ok(())
}

/// The data `(A, B, k, l)` of the recurrence `P_n + B P_{n-l} + A P_{n-k} = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceSpec {
    #[serde(rename = "A")]
    a: ComplexPoly,
    #[serde(rename = "B")]
    b: ComplexPoly,
    k: u32,
    l: u32,
}

impl RecurrenceSpec {
    pub fn new(a: ComplexPoly, b: ComplexPoly, k: u32, l: u32) -> Result<Self> {
        check_shifts(k, l)?;
        if a.is_zero() {
            return Err(Error::InvalidSpec("A must be a nonzero polynomial".into()));
        }
        if b.is_zero() {
            return Err(Error::InvalidSpec("B must be a nonzero polynomial".into()));
        }
        if a.degree().unwrap_or(0) + b.degree().unwrap_or(0) < 1 {
            return Err(Error::InvalidSpec("deg(A*B) must be at least 1".into()));
        }
        Ok(Self { a, b, k, l })
    }

    /// `A(z) = i z^3 + z + 3i`, `B(z) = z^2 - 2i z + 7`, `(k, l) = (5, 3)`.
    pub fn table1() -> Self {
        let i = Complex64::i();
        let a = ComplexPoly::new(vec![3.0 * i, ONE, ZERO, i]);
        let b = ComplexPoly::new(vec![Complex64::new(7.0, 0.0), -2.0 * i, ONE]);
        Self::new(a, b, 5, 3).expect("table spec is valid")
    }

    pub fn a(&self) -> &ComplexPoly {
        &self.a
    }

    pub fn b(&self) -> &ComplexPoly {
        &self.b
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// `D(t; z) = A(z) t^k + B(z) t^l + 1` evaluated at `(t, z)`.
    pub fn d_value(&self, t: Complex64, z: Complex64) -> Complex64 {
        self.a.eval(z) * t.powu(self.k) + self.b.eval(z) * t.powu(self.l) + 1.0
    }
}

fn run_recurrence(
    a: &ComplexPoly,
    b: &ComplexPoly,
    short: usize,
    long: usize,
    n_max: usize,
) -> Vec<ComplexPoly> {
    let (a, b) = (a.coeffs_dd(), b.coeffs_dd());
    let mut seq: Vec<Vec<Cdd>> = Vec::with_capacity(n_max + 1);
    seq.push(vec![precise::dd_real(1.0)]);
    for n in 1..=n_max {
        let mut next: Vec<Cdd> = Vec::new();
        for (factor, back) in [(&b, n.checked_sub(short)), (&a, n.checked_sub(long))] {
            let Some(j) = back else { continue };
            let prev = &seq[j];
            if prev.is_empty() || factor.is_empty() {
                continue;
            }
            let len = prev.len() + factor.len() - 1;
            if next.len() < len {
                next.resize(len, precise::dd_real(0.0));
            }
            for (i, &x) in factor.iter().enumerate() {
                for (m, &y) in prev.iter().enumerate() {
                    next[i + m] = next[i + m] - x * y;
                }
            }
        }
        while next.last().is_some_and(|c| precise::to_c64(*c) == ZERO) {
            next.pop();
        }
        seq.push(next);
    }
    seq.into_iter().map(ComplexPoly::from_dd).collect()
}

/// `[P_0, ..., P_{n_max}]` with `P_0 = 1` and zero initial values at negative
/// indices.
pub fn generate_sequence(spec: &RecurrenceSpec, n_max: usize) -> Vec<ComplexPoly> {
    run_recurrence(&spec.a, &spec.b, spec.l as usize, spec.k as usize, n_max)
}

/// `|(sum_{n <= n_terms} P_n(z) t^n) D(t; z) - 1|`.
///
/// The truncated series only approximates `1/D` inside the disk
/// `|t| <= 0.1 / (1 + |A(z)| + |B(z)|)`; outside it the residual need not be
/// small.
pub fn generating_function_check(
    spec: &RecurrenceSpec,
    z: Complex64,
    t: Complex64,
    n_terms: usize,
) -> f64 {
    let seq = generate_sequence(spec, n_terms);
    let mut sum = ZERO;
    let mut tp = ONE;
    for p in &seq {
        sum += p.eval(z) * tp;
        tp *= t;
    }
    (sum * spec.d_value(t, z) - 1.0).norm()
}

/// Radius of the disk in which [`generating_function_check`] is meaningful.
pub fn generating_function_radius(spec: &RecurrenceSpec, z: Complex64) -> f64 {
    0.1 / (1.0 + spec.a.eval(z).norm() + spec.b.eval(z).norm())
}

/// `R_0..R_{m_max}` from the recurrence with shifts `(l d, k d)`.
pub fn expand_non_coprime(spec: &RecurrenceSpec, d: usize, m_max: usize) -> Vec<ComplexPoly> {
    assert!(d >= 1, "dilation factor must be positive");
    run_recurrence(
        &spec.a,
        &spec.b,
        spec.l as usize * d,
        spec.k as usize * d,
        m_max,
    )
}
