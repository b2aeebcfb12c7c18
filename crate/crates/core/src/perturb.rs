//! Non-Hermitian perturbations of the top-left corner of a Jacobi matrix:
//!
//! * additive: `b_1 -> b_1 + i l`;
//! * multiplicative: `b_1 -> b_1 (1 + i k)` and `a_1 -> a_1 (1 + i k)` in the
//!   (2,1) position;
//! * rank two: `b_1 -> b_1 + i l` and `a_1 -> a_1 + i m` in the (2,1) position.
//!
//! All three characteristic polynomials are combinations of `p_0` and `p_1`,
//! the characteristic polynomials of `J` and its first truncation, so each
//! inverse problem reduces to a split of `h` followed by [`reconstruct`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hb::{
    anchored_roots, anchored_weights, around_shift_split, classical_split, constituent_roots, generalized_split_zeros,
    Anchored, Part, SplitBranch,
};
use crate::hodograph::{arg_mod_pi, arg_sum};
use crate::jacobi::{reconstruct_from_weights, JacobiMatrix};
use crate::poly::{ComplexPoly, ZeroSet};
use crate::roots::{self, Evaluate};

/// `|z - xi| <= SINGULAR_ZERO_TOL (1 + max |z_j|)` marks a zero as the
/// distinguished real eigenvalue.
pub const SINGULAR_ZERO_TOL: f64 = 1e-8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Which corner perturbation is applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "SpecRepr")]
pub enum PerturbationSpec {
    Additive { l: f64 },
    Multiplicative { k: f64 },
    Rank2 { l: f64, m: f64 },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SpecRepr {
    Additive { l: f64 },
    Multiplicative { k: f64 },
    Rank2 { l: f64, m: f64 },
}

impl TryFrom<SpecRepr> for PerturbationSpec {
    type Error = Error;

    fn try_from(r: SpecRepr) -> Result<Self> {
        let spec = match r {
            SpecRepr::Additive { l } => PerturbationSpec::Additive { l },
            SpecRepr::Multiplicative { k } => PerturbationSpec::Multiplicative { k },
            SpecRepr::Rank2 { l, m } => PerturbationSpec::Rank2 { l, m },
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl PerturbationSpec {
    pub fn validate(&self) -> Result<()> {
        let finite = |name, x: f64| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::NonFinite(name))
            }
        };
        match *self {
            PerturbationSpec::Additive { l } => finite("l", l),
            PerturbationSpec::Multiplicative { k } => {
                finite("k", k)?;
                if !(k > 0.0) {
                    return Err(Error::InvalidParameter {
                        name: "k",
                        value: k,
                        reason: "must be positive",
                    });
                }
                Ok(())
            }
            PerturbationSpec::Rank2 { l, m } => {
                finite("l", l)?;
                finite("m", m)?;
                if !(m > 0.0) {
                    return Err(Error::InvalidParameter {
                        name: "m",
                        value: m,
                        reason: "must be positive",
                    });
                }
                Ok(())
            }
        }
    }
}

/// `alpha = 1 + i m / a_1` and `xi = b_1 - l a_1 / m` for the rank-two
/// perturbation.
pub fn rank2_parameters(j: &JacobiMatrix, l: f64, m: f64) -> Result<(Complex64, f64)> {
    let Some(&a1) = j.a().first() else {
        return Err(Error::Degree {
            op: "rank-two perturbation",
            found: j.n(),
            expected: "n >= 2",
        });
    };
    Ok((c(1.0, m / a1), j.b()[0] - l * a1 / m))
}

/// A Jacobi matrix with one of the corner perturbations applied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbedMatrix {
    pub base: JacobiMatrix,
    pub spec: PerturbationSpec,
    /// Row-major dense entries.
    pub entries: Vec<Vec<Complex64>>,
}

pub fn build(j: &JacobiMatrix, spec: PerturbationSpec) -> Result<PerturbedMatrix> {
    spec.validate()?;
    let mut entries: Vec<Vec<Complex64>> = j
        .to_dense()
        .into_iter()
        .map(|row| row.into_iter().map(|x| c(x, 0.0)).collect())
        .collect();
    let b1 = j.b()[0];
    match spec {
        PerturbationSpec::Additive { l } => entries[0][0] = c(b1, l),
        PerturbationSpec::Multiplicative { k } => {
            entries[0][0] = c(b1, 0.0) * c(1.0, k);
            if let Some(&a1) = j.a().first() {
                entries[1][0] = c(a1, 0.0) * c(1.0, k);
            }
        }
        PerturbationSpec::Rank2 { l, m } => {
            rank2_parameters(j, l, m)?;
            entries[0][0] = c(b1, l);
            entries[1][0] = c(j.a()[0], m);
        }
    }
    Ok(PerturbedMatrix {
        base: j.clone(),
        spec,
        entries,
    })
}

/// Top-left entry `c_11` and off-diagonal product `c_12 c_21` of the
/// perturbed matrix.
fn perturbed_corner(j: &JacobiMatrix, spec: PerturbationSpec) -> Result<(Complex64, Complex64)> {
    spec.validate()?;
    let b1 = j.b()[0];
    let a1 = j.a().first().copied().unwrap_or(0.0);
    Ok(match spec {
        PerturbationSpec::Additive { l } => (c(b1, l), c(a1 * a1, 0.0)),
        PerturbationSpec::Multiplicative { k } => (c(b1, b1 * k), c(a1 * a1, a1 * a1 * k)),
        PerturbationSpec::Rank2 { l, m } => {
            rank2_parameters(j, l, m)?;
            (c(b1, l), c(a1 * a1, a1 * m))
        }
    })
}

/// Characteristic polynomial of the perturbed matrix.
///
/// Expanding along the first row gives `(z - c_11) p_1 - c_12 c_21 p_2`. The
/// equivalent combination of `p_0` and `p_1` cancels badly when the
/// perturbation is large.
pub fn perturbed_char_poly(j: &JacobiMatrix, spec: PerturbationSpec) -> Result<ComplexPoly> {
    let (corner, product) = perturbed_corner(j, spec)?;
    let polys = j.char_polys();
    let p1 = polys[1].to_complex();
    let h = match polys.get(2) {
        Some(p2) => &p1.mul_linear(corner) - &(&p2.to_complex() * product),
        None => p1.mul_linear(corner),
    };
    Ok(h.normalized())
}

/// Evaluates the perturbed characteristic polynomial through the
/// three-term recurrence rather than its expanded coefficients.
struct PerturbedEvaluator<'a> {
    j: &'a JacobiMatrix,
    corner: Complex64,
    product: Complex64,
}

impl Evaluate for PerturbedEvaluator<'_> {
    fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let v = self.j.corner_values(z);
        let shifted = z - self.corner;
        (
            shifted * v.p1 - self.product * v.p2,
            v.p1 + shifted * v.dp1 - self.product * v.dp2,
        )
    }
}

/// Eigenvalues of the perturbed matrix.
pub fn spectrum(j: &JacobiMatrix, spec: PerturbationSpec) -> Result<ZeroSet> {
    let h = perturbed_char_poly(j, spec)?;
    let (corner, product) = perturbed_corner(j, spec)?;
    let start = roots::poly_roots(&h)?;
    let eval = PerturbedEvaluator { j, corner, product };
    Ok(ZeroSet::new(roots::refine(&eval, start)))
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let one_way = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

fn residual(j: &JacobiMatrix, spec: PerturbationSpec, zeros: &ZeroSet) -> Result<f64> {
    Ok(hausdorff(spectrum(j, spec)?.zeros(), zeros.zeros()))
}

/// Failures of properties the theorems guarantee are numerical, not input
/// errors.
fn as_numerical(e: Error) -> Error {
    match e {
        Error::NotInterlacing { lams, mus } => Error::Breakdown(format!(
            "recovered spectra {lams:?} and {mus:?} do not strictly interlace"
        )),
        Error::NonPositiveWeight { .. } => e,
        other => other,
    }
}

fn require_nonempty(zeros: &ZeroSet) -> Result<()> {
    if zeros.is_empty() {
        return Err(Error::Degree {
            op: "inverse problem",
            found: 0,
            expected: ">= 1 zero",
        });
    }
    if zeros.zeros().iter().any(|z| !z.is_finite()) {
        return Err(Error::NonFinite("zeros"));
    }
    Ok(())
}

/// Solution of the additive inverse problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdditiveSolution {
    pub jacobi: JacobiMatrix,
    pub l: f64,
    /// Hausdorff distance between the input and the re-solved spectrum.
    pub residual: f64,
}

/// The unique `(J, l)` whose additive perturbation has spectrum `zeros`.
pub fn inverse_additive(zeros: &ZeroSet) -> Result<AdditiveSolution> {
    require_nonempty(zeros)?;
    if let Some(z) = zeros.real_zero() {
        return Err(Error::RealZero(z));
    }
    if let Some(&z) = zeros.zeros().iter().find(|z| z.im < 0.0) {
        return Err(Error::NotUpperHalfPlane(z));
    }
    let split = classical_split(&zeros.to_poly())?;
    let (Some(q), l) = (split.q.as_ref(), split.l) else {
        return Err(Error::Breakdown("split of h has no imaginary part".into()));
    };
    if !(l > 0.0) {
        return Err(Error::Breakdown(format!("recovered l = {l} is not positive")));
    }
    let z = zeros.zeros();
    let lams = anchored_roots(&constituent_roots(&split.p, z, Part::ClassicalP)?, z, &[], Part::ClassicalP);
    let mus = anchored_roots(&constituent_roots(q, z, Part::ClassicalQ(l))?, z, &[], Part::ClassicalQ(l));
    let jacobi = reconstruct_anchored(&lams, &mus)?;
    let residual = residual(&jacobi, PerturbationSpec::Additive { l }, zeros)?;
    Ok(AdditiveSolution { jacobi, l, residual })
}

/// Splits `zeros` into the simple zero at `xi` (if any) and the rest. A zero
/// within `SINGULAR_ZERO_TOL (1 + max |z_j|)` of `xi` counts as at `xi`.
pub fn split_off_shift(zeros: &ZeroSet, xi: f64) -> Result<(bool, ZeroSet)> {
    let tol = SINGULAR_ZERO_TOL * (1.0 + zeros.max_modulus());
    let at = c(xi, 0.0);
    let (hits, rest): (Vec<Complex64>, Vec<Complex64>) =
        zeros.zeros().iter().partition(|&&z| (z - at).norm() <= tol);
    match hits.len() {
        0 => Ok((false, zeros.clone())),
        1 => Ok((true, ZeroSet::new(rest))),
        found => Err(Error::SingularZeroCount { at: xi, found }),
    }
}

fn angle_in_open_quadrant(angle: f64) -> Result<()> {
    if angle > 0.0 && angle < std::f64::consts::FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::AngleOutOfRange {
            arg_sum: angle,
            lower: 0.0,
            upper: std::f64::consts::FRAC_PI_2,
        })
    }
}

/// The Jacobi matrix with spectra `lams` and `mus`, which interlace as a
/// theorem rather than by tolerance.
fn reconstruct_anchored(lams: &[Anchored], mus: &[Anchored]) -> Result<JacobiMatrix> {
    let ordered = mus.len() + 1 == lams.len()
        && mus
            .iter()
            .enumerate()
            .all(|(j, &mu)| lams[j].minus(mu) < 0.0 && mu.minus(lams[j + 1]) < 0.0);
    let values = |xs: &[Anchored]| xs.iter().map(|x| x.value()).collect::<Vec<_>>();
    if !ordered {
        return Err(Error::Breakdown(format!(
            "recovered spectra {:?} and {:?} do not strictly interlace",
            values(lams),
            values(mus)
        )));
    }
    reconstruct_from_weights(&values(lams), &anchored_weights(lams, mus)).map_err(as_numerical)
}

/// `(lams, mus)` for the regular case: `h = alpha p + (1 - alpha)(z - xi) q`.
fn regular_spectra(zeros: &ZeroSet, alpha: Complex64, xi: f64) -> Result<(Vec<Anchored>, Vec<Anchored>)> {
    let g = generalized_split_zeros(zeros, alpha, xi)?;
    if !matches!(g.branch, SplitBranch::AtShift { .. }) {
        return Err(Error::Breakdown("argument sum does not match Arg alpha".into()));
    }
    if !g.is_clean() {
        return Err(Error::Breakdown(g.warnings.join("; ")));
    }
    let tol = SINGULAR_ZERO_TOL * (1.0 + g.lams.iter().fold(0.0f64, |m, x| m.max(x.abs())));
    if let Some(&lam) = g.lams.iter().find(|&&lam| (lam - xi).abs() <= tol) {
        return Err(Error::SingularMatrix(lam));
    }
    let z = zeros.zeros();
    Ok((
        anchored_roots(&g.lams, z, &[], Part::PencilP(alpha)),
        anchored_roots(&g.mus, z, &[], Part::PencilR(alpha)),
    ))
}

/// `(lams, mus)` for the singular case: `h = (z - xi) [alpha p + (1 - alpha) r]`
/// with `lams = {xi} + zeros(p)`, `mus = zeros(r)`.
fn singular_spectra(rest: &ZeroSet, alpha: Complex64, xi: f64) -> Result<(Vec<Anchored>, Vec<Anchored>)> {
    if rest.is_empty() {
        return Ok((vec![Anchored::exact(xi)], Vec::new()));
    }
    let g = around_shift_split(rest, alpha, xi)?;
    if !g.is_clean() {
        return Err(Error::Breakdown(g.warnings.join("; ")));
    }
    let z = rest.zeros();
    let mut lams = anchored_roots(&g.lams, z, &[xi], Part::PencilP(alpha));
    lams.insert(g.s, Anchored::exact(xi));
    Ok((lams, anchored_roots(&g.mus, z, &[xi], Part::PencilR(alpha))))
}

/// Solution of the multiplicative inverse problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplicativeSolution {
    pub jacobi: JacobiMatrix,
    pub k: f64,
    /// `det J = 0`: the spectrum contained a simple zero.
    pub singular: bool,
    pub residual: f64,
}

/// The `(J, k)` whose multiplicative perturbation has spectrum `zeros`.
///
/// Without a zero eigenvalue `k = tan(sum Arg z_j)` is determined by the
/// spectrum and a supplied `k` must agree with it. With a simple zero
/// eigenvalue `k` must be supplied, since the matrix is not unique otherwise.
pub fn inverse_multiplicative(zeros: &ZeroSet, k: Option<f64>) -> Result<MultiplicativeSolution> {
    require_nonempty(zeros)?;
    if let Some(k) = k {
        PerturbationSpec::Multiplicative { k }.validate()?;
    }
    let (singular, rest) = split_off_shift(zeros, 0.0)?;
    let (k, (lams, mus)) = if singular {
        let k = k.ok_or(Error::MissingParameter(
            "a zero eigenvalue leaves infinitely many solutions; supply k",
        ))?;
        (k, singular_spectra(&rest, c(1.0, k), 0.0)?)
    } else {
        let angle = arg_sum(zeros)?;
        angle_in_open_quadrant(angle)?;
        let from_zeros = angle.tan();
        if let Some(k) = k {
            if (k - from_zeros).abs() > 1e-8 * (1.0 + k) {
                return Err(Error::InvalidParameter {
                    name: "k",
                    value: k,
                    reason: "inconsistent with the argument sum of the zeros",
                });
            }
        }
        (from_zeros, regular_spectra(zeros, c(1.0, from_zeros), 0.0)?)
    };
    let jacobi = reconstruct_anchored(&lams, &mus)?;
    let residual = residual(&jacobi, PerturbationSpec::Multiplicative { k }, zeros)?;
    Ok(MultiplicativeSolution {
        jacobi,
        k,
        singular,
        residual,
    })
}

/// Solution of the rank-two inverse problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rank2Solution {
    pub jacobi: JacobiMatrix,
    pub l: f64,
    pub m: f64,
    pub xi: f64,
    /// `det(J - xi) = 0`: the spectrum contained `xi`.
    pub singular: bool,
    pub residual: f64,
}

/// The `(J, l, m)` whose rank-two perturbation has spectrum `zeros` and
/// shift `xi = b_1 - l a_1 / m`.
///
/// Regular case: `A = sum Arg_[0,pi)(z_j - xi)` must lie in `(0, pi/2)`,
/// `m = a_1 tan A`. Singular case (`xi` is a simple eigenvalue): the ratio
/// `A = m / a_1 > 0` must be supplied and `m = a_1 A`. In both cases
/// `l = (m / a_1)(b_1 - xi)`.
pub fn inverse_rank2(zeros: &ZeroSet, xi: f64, ratio: Option<f64>) -> Result<Rank2Solution> {
    require_nonempty(zeros)?;
    if !xi.is_finite() {
        return Err(Error::NonFinite("xi"));
    }
    if zeros.len() < 2 {
        return Err(Error::Degree {
            op: "rank-two inverse problem",
            found: zeros.len(),
            expected: "n >= 2",
        });
    }
    if let Some(a) = ratio {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter {
                name: "A",
                value: a,
                reason: "must be positive",
            });
        }
    }
    let (singular, rest) = split_off_shift(zeros, xi)?;
    let (slope, (lams, mus)) = if singular {
        let a = ratio.ok_or(Error::MissingParameter(
            "xi is an eigenvalue, which leaves infinitely many solutions; supply A",
        ))?;
        (a, singular_spectra(&rest, c(1.0, a), xi)?)
    } else {
        let shifted = zeros.shifted(xi);
        if let Some(z) = shifted.real_zero() {
            return Err(Error::RealZero(z + xi));
        }
        let angle: f64 = shifted.zeros().iter().map(|&z| arg_mod_pi(z)).sum::<Result<f64>>()?;
        angle_in_open_quadrant(angle)?;
        if let Some(a) = ratio {
            if (a - angle.tan()).abs() > 1e-8 * (1.0 + a) {
                return Err(Error::InvalidParameter {
                    name: "A",
                    value: a,
                    reason: "inconsistent with the argument sum of the zeros about xi",
                });
            }
        }
        let slope = angle.tan();
        (slope, regular_spectra(zeros, c(1.0, slope), xi)?)
    };
    let jacobi = reconstruct_anchored(&lams, &mus)?;
    let a1 = jacobi.a()[0];
    let m = a1 * slope;
    let l = slope * (jacobi.b()[0] - xi);
    let residual = residual(&jacobi, PerturbationSpec::Rank2 { l, m }, zeros)?;
    Ok(Rank2Solution {
        jacobi,
        l,
        m,
        xi,
        singular,
        residual,
    })
}
