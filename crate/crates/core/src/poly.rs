//! Coefficient-form polynomials, zero sets and the interlacing test.
//!
//! Coefficients are stored constant term first. Trailing zero coefficients
//! are trimmed on construction, so `degree()` is always the index of the
//! last nonzero coefficient (the zero polynomial is `[0.0]`).

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots;

/// `|Im z| <= REAL_AXIS_TOL * (1 + |z|)` classifies `z` as real.
pub const REAL_AXIS_TOL: f64 = 1e-10;
/// Relative gap that strict interlacing must exceed.
pub const INTERLACING_TOL: f64 = 1e-9;
/// Looser realness test for zeros of polynomials known to be real-rooted.
pub(crate) const REAL_ROOT_TOL: f64 = 1e-7;

fn trim<T: Copy, F: Fn(&T) -> bool>(mut coeffs: Vec<T>, is_zero: F) -> Vec<T> {
    while coeffs.len() > 1 && is_zero(coeffs.last().unwrap()) {
        coeffs.pop();
    }
    coeffs
}

/// Polynomial with real coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

impl RealPoly {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("polynomial coefficients"));
        }
        Ok(Self {
            coeffs: trim(coeffs, |c| *c == 0.0),
        })
    }

    /// Builds the polynomial and divides through by its leading coefficient.
    pub fn monic(coeffs: Vec<f64>) -> Result<Self> {
        let p = Self::new(coeffs)?;
        let lead = p.leading();
        if lead == 0.0 {
            return Err(Error::ZeroPolynomial);
        }
        let n = p.degree();
        let mut coeffs: Vec<f64> = p.coeffs.iter().map(|c| c / lead).collect();
        coeffs[n] = 1.0;
        Ok(Self { coeffs })
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1.0] }
    }

    /// Monic polynomial `prod (z - r)`.
    pub fn from_roots(roots: &[f64]) -> Self {
        roots.iter().fold(Self::one(), |p, &r| p.mul_linear(r))
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[self.degree()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0.0]
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1.0
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn eval_real(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// `sum |c_k| r^k`, the scale of rounding errors in Horner at `|z| = r`.
    pub fn eval_bound(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c.abs())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self { coeffs: vec![0.0] };
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| k as f64 * c)
            .collect();
        Self {
            coeffs: trim(coeffs, |c| *c == 0.0),
        }
    }

    /// `(z - root) * self`.
    pub fn mul_linear(&self, root: f64) -> Self {
        let mut out = vec![0.0; self.coeffs.len() + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k + 1] += c;
            out[k] -= root * c;
        }
        Self {
            coeffs: trim(out, |c| *c == 0.0),
        }
    }

    /// Synthetic division by `(z - root)`: returns quotient and remainder.
    pub fn divide_linear(&self, root: f64) -> (Self, f64) {
        let n = self.degree();
        if n == 0 {
            return (Self { coeffs: vec![0.0] }, self.coeffs[0]);
        }
        let mut q = vec![0.0; n];
        let mut carry = self.coeffs[n];
        for k in (0..n).rev() {
            q[k] = carry;
            carry = self.coeffs[k] + root * carry;
        }
        (Self { coeffs: trim(q, |c| *c == 0.0) }, carry)
    }

    pub fn to_complex(&self) -> ComplexPoly {
        ComplexPoly {
            coeffs: self.coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        }
    }

    pub fn roots(&self) -> Result<ZeroSet> {
        self.to_complex().roots()
    }

    /// Sorted zeros of a polynomial expected to be real-rooted.
    pub fn real_roots(&self) -> Result<Vec<f64>> {
        if self.degree() == 0 {
            return Ok(Vec::new());
        }
        let zs = roots::poly_roots(&self.to_complex())?;
        real_parts_checked(&zs)
    }
}

/// Real parts, sorted, provided every imaginary part is negligible.
pub(crate) fn real_parts_checked(zs: &[Complex64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(zs.len());
    for z in zs {
        if z.im.abs() > REAL_ROOT_TOL * (1.0 + z.norm()) {
            return Err(Error::Breakdown(format!("expected a real zero, found {z}")));
        }
        out.push(z.re);
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

impl Add for &RealPoly {
    type Output = RealPoly;

    fn add(self, rhs: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| self.coeffs.get(k).unwrap_or(&0.0) + rhs.coeffs.get(k).unwrap_or(&0.0))
            .collect();
        RealPoly {
            coeffs: trim(coeffs, |c| *c == 0.0),
        }
    }
}

impl Sub for &RealPoly {
    type Output = RealPoly;

    fn sub(self, rhs: &RealPoly) -> RealPoly {
        self + &(rhs * -1.0)
    }
}

impl Mul<f64> for &RealPoly {
    type Output = RealPoly;

    fn mul(self, s: f64) -> RealPoly {
        RealPoly {
            coeffs: trim(self.coeffs.iter().map(|c| c * s).collect(), |c| *c == 0.0),
        }
    }
}

/// Polynomial with complex coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyRepr")]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

#[derive(Deserialize)]
struct PolyRepr {
    coeffs: Vec<Complex64>,
}

impl TryFrom<PolyRepr> for ComplexPoly {
    type Error = Error;

    fn try_from(r: PolyRepr) -> Result<Self> {
        ComplexPoly::new(r.coeffs)
    }
}

fn czero(c: &Complex64) -> bool {
    c.re == 0.0 && c.im == 0.0
}

impl ComplexPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("polynomial coefficients"));
        }
        Ok(Self {
            coeffs: trim(coeffs, czero),
        })
    }

    /// Builds the polynomial and divides through by its leading coefficient.
    pub fn monic(coeffs: Vec<Complex64>) -> Result<Self> {
        let p = Self::new(coeffs)?;
        let lead = p.leading();
        if czero(&lead) {
            return Err(Error::ZeroPolynomial);
        }
        Ok(p.normalized())
    }

    pub(crate) fn normalized(self) -> Self {
        let lead = self.leading();
        let n = self.degree();
        let mut coeffs: Vec<Complex64> = self.coeffs.iter().map(|c| c / lead).collect();
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn one() -> Self {
        Self {
            coeffs: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// Monic polynomial `prod (z - z_j)`; the empty product is `1`.
    pub fn from_roots(zeros: &[Complex64]) -> Self {
        zeros.iter().fold(Self::one(), |p, &z| p.mul_linear(z))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Complex64::new(1.0, 0.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self {
                coeffs: vec![Complex64::new(0.0, 0.0)],
            };
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * k as f64)
            .collect();
        Self {
            coeffs: trim(coeffs, czero),
        }
    }

    /// `(z - root) * self`.
    pub fn mul_linear(&self, root: Complex64) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k + 1] += c;
            out[k] -= root * c;
        }
        Self {
            coeffs: trim(out, czero),
        }
    }

    /// Polynomial of the real parts of the coefficients.
    pub fn real_part(&self) -> RealPoly {
        RealPoly {
            coeffs: trim(self.coeffs.iter().map(|c| c.re).collect(), |c| *c == 0.0),
        }
    }

    /// Polynomial of the imaginary parts of the coefficients.
    pub fn imag_part(&self) -> RealPoly {
        RealPoly {
            coeffs: trim(self.coeffs.iter().map(|c| c.im).collect(), |c| *c == 0.0),
        }
    }

    /// All zeros with multiplicity. Requires degree at least one.
    pub fn roots(&self) -> Result<ZeroSet> {
        roots::poly_roots(self).map(ZeroSet::new)
    }
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;

    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let zero = Complex64::new(0.0, 0.0);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| self.coeffs.get(k).unwrap_or(&zero) + rhs.coeffs.get(k).unwrap_or(&zero))
            .collect();
        ComplexPoly {
            coeffs: trim(coeffs, czero),
        }
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;

    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        self + &(rhs * Complex64::new(-1.0, 0.0))
    }
}

impl Mul<Complex64> for &ComplexPoly {
    type Output = ComplexPoly;

    fn mul(self, s: Complex64) -> ComplexPoly {
        ComplexPoly {
            coeffs: trim(self.coeffs.iter().map(|c| c * s).collect(), czero),
        }
    }
}

impl Serialize for RealPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_complex().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RealPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = ComplexPoly::deserialize(d)?;
        if p.coeffs.iter().any(|c| c.im != 0.0) {
            return Err(serde::de::Error::custom("real polynomial has a nonzero imaginary part"));
        }
        Ok(p.real_part())
    }
}

/// Multiset of complex zeros with half-plane counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "ZeroList")]
pub struct ZeroSet {
    zeros: Vec<Complex64>,
    n_plus: usize,
    n_minus: usize,
    n_real: usize,
}

#[derive(Deserialize)]
struct ZeroList {
    zeros: Vec<Complex64>,
}

impl From<ZeroList> for ZeroSet {
    fn from(l: ZeroList) -> Self {
        ZeroSet::new(l.zeros)
    }
}

/// Whether `z` counts as real under [`REAL_AXIS_TOL`].
pub fn is_real(z: Complex64) -> bool {
    z.im.abs() <= REAL_AXIS_TOL * (1.0 + z.norm())
}

impl ZeroSet {
    pub fn new(zeros: Vec<Complex64>) -> Self {
        let n_real = zeros.iter().filter(|z| is_real(**z)).count();
        let n_plus = zeros.iter().filter(|z| !is_real(**z) && z.im > 0.0).count();
        let n_minus = zeros.len() - n_real - n_plus;
        Self {
            zeros,
            n_plus,
            n_minus,
            n_real,
        }
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    pub fn n_real(&self) -> usize {
        self.n_real
    }

    /// First zero that sits on the real axis, if any.
    pub fn real_zero(&self) -> Option<Complex64> {
        self.zeros.iter().copied().find(|z| is_real(*z))
    }

    pub fn max_modulus(&self) -> f64 {
        self.zeros.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Zeros translated by `-xi`.
    pub fn shifted(&self, xi: f64) -> ZeroSet {
        ZeroSet::new(self.zeros.iter().map(|z| z - xi).collect())
    }

    pub fn to_poly(&self) -> ComplexPoly {
        ComplexPoly::from_roots(&self.zeros)
    }
}

/// `lams[0] < mus[0] < lams[1] < ... < mus[n-2] < lams[n-1]`, with every gap
/// larger than `INTERLACING_TOL * (lams[n-1] - lams[0])`.
pub fn is_strictly_interlacing(lams: &[f64], mus: &[f64]) -> Result<bool> {
    if lams.is_empty() || mus.len() + 1 != lams.len() {
        return Err(Error::LengthMismatch {
            what: "interlacing: mus must be one shorter than lams",
            expected: lams.len().saturating_sub(1),
            found: mus.len(),
        });
    }
    if !lams.windows(2).all(|w| w[0] <= w[1]) {
        return Err(Error::NotSorted("lams"));
    }
    if !mus.windows(2).all(|w| w[0] <= w[1]) {
        return Err(Error::NotSorted("mus"));
    }
    let eps = INTERLACING_TOL * (lams[lams.len() - 1] - lams[0]);
    Ok(mus
        .iter()
        .enumerate()
        .all(|(j, &mu)| mu - lams[j] > eps && lams[j + 1] - mu > eps))
}
