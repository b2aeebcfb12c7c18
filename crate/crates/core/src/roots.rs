//! Simultaneous (Aberth–Ehrlich) root iteration.
//!
//! The iteration only needs values and first derivatives, so it runs
//! against anything implementing [`Evaluate`]: plain coefficient-form
//! polynomials, or structured evaluators (three-term recurrences, products
//! over known zeros) that are far better conditioned than the expanded
//! coefficients they stand for.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{ComplexPoly, RealPoly};

/// Sweep cap for the primary root finder.
pub const MAX_SWEEPS: usize = 200;
/// Relative correction below which a root is considered converged.
pub const CORRECTION_TOL: f64 = 1e-13;
/// Backward-error test applied when the sweep cap is hit.
const RESIDUAL_TOL: f64 = 1e-10;

/// Something whose zeros can be iterated on.
pub(crate) trait Evaluate {
    /// Value and first derivative at `z`.
    fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64);
}

impl Evaluate for ComplexPoly {
    fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let c = self.coeffs();
        let mut v = c[c.len() - 1];
        let mut d = Complex64::new(0.0, 0.0);
        for &ck in c.iter().rev().skip(1) {
            d = d * z + v;
            v = v * z + ck;
        }
        (v, d)
    }
}

impl Evaluate for RealPoly {
    fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let c = self.coeffs();
        let mut v = Complex64::new(c[c.len() - 1], 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for &ck in c.iter().rev().skip(1) {
            d = d * z + v;
            v = v * z + ck;
        }
        (v, d)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct AberthOutcome {
    pub roots: Vec<Complex64>,
    pub converged: bool,
}

/// Gauss–Seidel style Aberth sweeps starting from `z`.
///
/// A root is frozen once its correction drops below `tol * (1 + |z|)`.
pub(crate) fn aberth<E: Evaluate + ?Sized>(
    f: &E,
    mut z: Vec<Complex64>,
    max_sweeps: usize,
    tol: f64,
) -> AberthOutcome {
    let n = z.len();
    let mut done = vec![false; n];
    for _ in 0..max_sweeps {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (v, d) = f.eval_with_derivative(z[i]);
            if v == Complex64::new(0.0, 0.0) {
                done[i] = true;
                continue;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let diff = z[i] - zj;
                    if diff.norm() > 0.0 {
                        s += diff.inv();
                    }
                }
            }
            let mut denom = d - v * s;
            if denom.norm() == 0.0 || !denom.is_finite() {
                denom = Complex64::new(f64::EPSILON, f64::EPSILON);
            }
            let w = v / denom;
            if !w.is_finite() {
                all_done = false;
                continue;
            }
            z[i] -= w;
            if w.norm() <= tol * (1.0 + z[i].norm()) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return AberthOutcome {
                roots: z,
                converged: true,
            };
        }
    }
    let converged = done.iter().all(|&d| d);
    AberthOutcome {
        roots: z,
        converged,
    }
}

/// Initial guesses on a circle enclosing all roots of a monic polynomial.
///
/// The radius is the Fujiwara bound `2 max |c_{n-k}|^{1/k}`, which stays
/// within a factor of two of the largest root modulus.
pub(crate) fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let mut radius: f64 = 0.0;
    for k in 1..=n {
        let c = (coeffs[n - k] / lead).norm();
        let c = if k == n { c / 2.0 } else { c };
        radius = radius.max(c.powf(1.0 / k as f64));
    }
    let radius = 2.0 * radius.max(f64::MIN_POSITIVE.sqrt());
    (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect()
}

/// All roots of a complex polynomial of degree at least one.
pub(crate) fn poly_roots(p: &ComplexPoly) -> Result<Vec<Complex64>> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::Degree {
            op: "roots",
            found: 0,
            expected: ">= 1",
        });
    }
    let c = p.coeffs();
    if n == 1 {
        return Ok(vec![-c[0] / c[1]]);
    }
    let outcome = aberth(p, initial_guesses(c), MAX_SWEEPS, CORRECTION_TOL);
    let mut roots = outcome.roots;
    for z in roots.iter_mut() {
        *z = newton_polish(p, *z, 3);
    }
    if !outcome.converged {
        for z in &roots {
            let (v, _) = p.eval_with_derivative(*z);
            let bound = coefficient_bound(c, z.norm());
            if !(v.norm() <= RESIDUAL_TOL * bound) {
                return Err(Error::NoConvergence(MAX_SWEEPS));
            }
        }
    }
    Ok(roots)
}

/// Newton steps that are kept only while they reduce the residual.
pub(crate) fn newton_polish<E: Evaluate + ?Sized>(f: &E, mut z: Complex64, steps: usize) -> Complex64 {
    let (mut v, mut d) = f.eval_with_derivative(z);
    for _ in 0..steps {
        if v.norm() == 0.0 || d.norm() == 0.0 {
            break;
        }
        let cand = z - v / d;
        let (cv, cd) = f.eval_with_derivative(cand);
        if !(cv.norm() < v.norm()) {
            break;
        }
        z = cand;
        v = cv;
        d = cd;
    }
    z
}

/// Refines approximate zeros of a structured evaluator.
///
/// Unlike [`poly_roots`] this never fails: once the corrections reach the
/// evaluator's noise floor the current iterates are returned.
pub(crate) fn refine<E: Evaluate + ?Sized>(f: &E, start: Vec<Complex64>) -> Vec<Complex64> {
    aberth(f, start, 60, CORRECTION_TOL).roots
}

fn coefficient_bound(c: &[Complex64], r: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, ck| acc * r + ck.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn linear_root_is_exact() {
        let p = ComplexPoly::new(vec![c(-2.0, -1.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(poly_roots(&p).unwrap(), vec![c(2.0, 1.0)]);
    }

    #[test]
    fn constant_has_no_roots() {
        let p = ComplexPoly::new(vec![c(3.0, 0.0)]).unwrap();
        assert!(matches!(poly_roots(&p), Err(Error::Degree { .. })));
    }

    #[test]
    fn wide_coefficient_range_converges() {
        let roots: Vec<Complex64> = (1..=12).map(|k| c(1.3 * k as f64, 0.5)).collect();
        let p = ComplexPoly::from_roots(&roots);
        let mut found = poly_roots(&p).unwrap();
        found.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (a, b) in found.iter().zip(&roots) {
            assert!((a - b).norm() < 1e-7, "{a} vs {b}");
        }
    }

    #[test]
    fn double_root_is_found() {
        let p = RealPoly::from_roots(&[1.0, 1.0, -2.0]).to_complex();
        let found = poly_roots(&p).unwrap();
        assert_eq!(found.len(), 3);
        assert_eq!(found.iter().filter(|z| (*z - c(1.0, 0.0)).norm() < 1e-6).count(), 2);
    }

    #[test]
    fn guesses_enclose_roots() {
        let p = ComplexPoly::from_roots(&[c(100.0, 0.0), c(-0.01, 0.0)]);
        let g = initial_guesses(p.coeffs());
        assert!(g.iter().all(|z| z.norm() >= 100.0));
    }
}
