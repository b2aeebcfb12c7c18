//! Finite Jacobi matrices: characteristic polynomials of the corner
//! truncations, real spectra, reconstruction from two spectra, and Lanczos
//! reduction of Hermitian matrices to Jacobi form.

mod eigen;
mod lanczos;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{is_strictly_interlacing, RealPoly};

pub use lanczos::{lanczos_reduce, HermitianMatrix, LanczosReduction, LANCZOS_BREAKDOWN_TOL};

/// Largest size accepted by [`reconstruct`].
pub const MAX_RECONSTRUCT: usize = 50;

/// Real symmetric tridiagonal matrix with diagonal `b` and strictly positive
/// off-diagonal `a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JacobiRepr")]
pub struct JacobiMatrix {
    b: Vec<f64>,
    a: Vec<f64>,
}

#[derive(Deserialize)]
struct JacobiRepr {
    b: Vec<f64>,
    #[serde(default)]
    a: Vec<f64>,
}

impl TryFrom<JacobiRepr> for JacobiMatrix {
    type Error = Error;

    fn try_from(r: JacobiRepr) -> Result<Self> {
        JacobiMatrix::new(r.b, r.a)
    }
}

/// `p_0, p_1, p_2` and their derivatives at one point, with `p_2 = 0` for a
/// single row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct CornerValues {
    pub p0: Complex64,
    pub dp0: Complex64,
    pub p1: Complex64,
    pub dp1: Complex64,
    pub p2: Complex64,
    pub dp2: Complex64,
}

impl JacobiMatrix {
    pub fn new(b: Vec<f64>, a: Vec<f64>) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::InvalidJacobi("empty diagonal".into()));
        }
        if a.len() + 1 != b.len() {
            return Err(Error::InvalidJacobi(format!(
                "{} diagonal entries need {} off-diagonal entries, found {}",
                b.len(),
                b.len() - 1,
                a.len()
            )));
        }
        if b.iter().chain(&a).any(|x| !x.is_finite()) {
            return Err(Error::InvalidJacobi("non-finite entry".into()));
        }
        if let Some(x) = a.iter().find(|&&x| !(x > 0.0)) {
            return Err(Error::InvalidJacobi(format!("off-diagonal entry {x} is not positive")));
        }
        Ok(Self { b, a })
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// The matrix with its first `j` rows and columns removed.
    pub fn truncate(&self, j: usize) -> Result<JacobiMatrix> {
        if j >= self.n() {
            return Err(Error::Degree {
                op: "truncate",
                found: j,
                expected: "fewer rows removed than the size",
            });
        }
        Ok(JacobiMatrix {
            b: self.b[j..].to_vec(),
            a: self.a[j..].to_vec(),
        })
    }

    /// `[p_0, ..., p_n]`, where `p_j` is the characteristic polynomial of
    /// the `j`-th truncation and `p_n = 1`.
    pub fn char_polys(&self) -> Vec<RealPoly> {
        let n = self.n();
        let mut polys = vec![RealPoly::one(); n + 1];
        for j in (1..=n).rev() {
            let mut next = polys[j].mul_linear(self.b[j - 1]);
            if j < n {
                let a = self.a[j - 1];
                next = &next - &(&polys[j + 1] * (a * a));
            }
            polys[j - 1] = next;
        }
        polys
    }

    /// `p_0, p_1, p_2` and their derivatives at `z`, by the backward recurrence.
    pub(crate) fn corner_values(&self, z: Complex64) -> CornerValues {
        let n = self.n();
        let zero = Complex64::new(0.0, 0.0);
        // (p_{j+1}, p_j) and derivatives, starting from (0, 1)
        let (mut pn, mut p) = (zero, Complex64::new(1.0, 0.0));
        let (mut dpn, mut dp) = (zero, zero);
        for j in (1..=n).rev() {
            if j == 1 {
                let (p1, dp1) = (p, dp);
                let a2 = if n > 1 { self.a[0] * self.a[0] } else { 0.0 };
                let p0 = (z - self.b[0]) * p - a2 * pn;
                let dp0 = p + (z - self.b[0]) * dp - a2 * dpn;
                return CornerValues {
                    p0,
                    dp0,
                    p1,
                    dp1,
                    p2: pn,
                    dp2: dpn,
                };
            }
            let a2 = if j < n { self.a[j - 1] * self.a[j - 1] } else { 0.0 };
            let next = (z - self.b[j - 1]) * p - a2 * pn;
            let dnext = p + (z - self.b[j - 1]) * dp - a2 * dpn;
            pn = p;
            dpn = dp;
            p = next;
            dp = dnext;
        }
        unreachable!("matrix has at least one row")
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eigen::tridiagonal_eigenvalues(&self.b, &self.a)
    }

    /// Dense row-major form.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.b[i];
            if i + 1 < n {
                m[i][i + 1] = self.a[i];
                m[i + 1][i] = self.a[i];
            }
        }
        m
    }

    /// Largest entrywise difference to another matrix of the same size.
    pub fn max_abs_diff(&self, other: &JacobiMatrix) -> f64 {
        if self.n() != other.n() {
            return f64::INFINITY;
        }
        self.b
            .iter()
            .zip(&other.b)
            .chain(self.a.iter().zip(&other.a))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

/// Residues `w_j = p_1(lambda_j) / p_0'(lambda_j)` of `p_1 / p_0`, evaluated
/// in product form.
pub fn spectral_weights(lams: &[f64], mus: &[f64]) -> Result<Vec<f64>> {
    if lams.is_empty() || mus.len() + 1 != lams.len() {
        return Err(Error::LengthMismatch {
            what: "spectral_weights: mus must be one shorter than lams",
            expected: lams.len().saturating_sub(1),
            found: mus.len(),
        });
    }
    Ok(lams
        .iter()
        .enumerate()
        .map(|(j, &lam)| {
            // pair each numerator factor with a denominator factor to keep
            // the running product near unit size
            lams.iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .zip(mus)
                .map(|((_, &li), &mu)| (lam - mu) / (lam - li))
                .product()
        })
        .collect())
}

/// Neumaier-compensated dot product.
fn dot(x: &[f64], y: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for (a, b) in x.iter().zip(y) {
        let term = a * b;
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// The unique Jacobi matrix whose spectrum is `lams` and whose first
/// truncation has spectrum `mus`.
///
/// Runs the discrete Stieltjes procedure for the measure
/// `sum_j w_j delta(lambda_j)` as a Lanczos process on `diag(lams)` with
/// start vector `sqrt(w)`, reorthogonalizing fully at every step.
pub fn reconstruct(lams: &[f64], mus: &[f64]) -> Result<JacobiMatrix> {
    if !is_strictly_interlacing(lams, mus)? {
        return Err(Error::NotInterlacing {
            lams: lams.to_vec(),
            mus: mus.to_vec(),
        });
    }
    reconstruct_from_weights(lams, &spectral_weights(lams, mus)?)
}

/// The Jacobi matrix with eigenvalues `lams` whose first normalized
/// eigenvector components squared are proportional to `weights`.
pub fn reconstruct_from_weights(lams: &[f64], weights: &[f64]) -> Result<JacobiMatrix> {
    let n = lams.len();
    if n == 0 || weights.len() != n {
        return Err(Error::LengthMismatch {
            what: "reconstruct_from_weights: one weight per eigenvalue",
            expected: n,
            found: weights.len(),
        });
    }
    if n > MAX_RECONSTRUCT {
        return Err(Error::Degree {
            op: "reconstruct",
            found: n,
            expected: "n <= 50",
        });
    }
    if lams.iter().chain(weights).any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("spectral data"));
    }
    if lams.windows(2).any(|p| !(p[0] < p[1])) {
        return Err(Error::NotSorted("eigenvalues"));
    }
    let w = weights;
    for (&at, &weight) in lams.iter().zip(w) {
        if !(weight > 0.0) {
            return Err(Error::NonPositiveWeight { at, weight });
        }
    }
    if n == 1 {
        return JacobiMatrix::new(vec![lams[0]], Vec::new());
    }
    let total: f64 = w.iter().sum();
    let mut q: Vec<f64> = w.iter().map(|x| (x / total).sqrt()).collect();
    let norm = dot(&q, &q).sqrt();
    q.iter_mut().for_each(|x| *x /= norm);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    let mut a = Vec::with_capacity(n - 1);
    for k in 0..n {
        let mut v: Vec<f64> = lams.iter().zip(&q).map(|(l, x)| l * x).collect();
        let bk = dot(&q, &v);
        b.push(bk);
        if k + 1 == n {
            break;
        }
        for (vi, qi) in v.iter_mut().zip(&q) {
            *vi -= bk * qi;
        }
        if let (Some(prev), Some(&ak)) = (basis.last(), a.last()) {
            for (vi, pi) in v.iter_mut().zip(prev as &Vec<f64>) {
                *vi -= ak * pi;
            }
        }
        basis.push(q);
        for _ in 0..2 {
            for u in &basis {
                let c = dot(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= c * ui;
                }
            }
        }
        let ak = dot(&v, &v).sqrt();
        if !(ak > 0.0) {
            return Err(Error::Breakdown(format!("Stieltjes process stopped at step {}", k + 1)));
        }
        a.push(ak);
        q = v.iter().map(|x| x / ak).collect();
    }
    JacobiMatrix::new(b, a)
}
