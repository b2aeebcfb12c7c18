//! Forward and inverse maps between a complex polynomial and its real
//! constituents.
//!
//! * classical: `h = p - i l q`, `deg q < deg p`;
//! * pencil: `h = alpha p + (1 - alpha) r`, `deg p = deg r`;
//! * generalized: `h = alpha p + (1 - alpha) (z - xi) q`, the pencil with
//!   `r(xi) = 0`.
//!
//! Splitting is coefficient-wise linear algebra. Zeros of the real
//! constituents are then located against the zeros of `h`; when those zeros
//! are known, the constituents are evaluated through `h(z) = prod (z - z_j)`
//! and its conjugate `h*(z) = prod (z - conj z_j)` rather than through their
//! expanded coefficients.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hodograph::{classify_config, ConfigReport, Verdict};
use crate::poly::{is_strictly_interlacing, real_parts_checked, ComplexPoly, RealPoly, ZeroSet};
use crate::roots::{self, Evaluate};

const MONIC_TOL: f64 = 1e-12;
/// Base tolerance on `r(xi)` in the at-shift branch.
pub const SHIFT_RESIDUAL_TOL: f64 = 1e-8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn require_monic(p: &RealPoly, what: &'static str) -> Result<()> {
    if (p.leading() - 1.0).abs() > MONIC_TOL {
        return Err(Error::NotMonic {
            what,
            lead: p.leading(),
        });
    }
    Ok(())
}

fn monic_input(h: &ComplexPoly, what: &'static str) -> Result<ComplexPoly> {
    let lead = h.leading();
    if (lead - c(1.0, 0.0)).norm() > MONIC_TOL {
        return Err(Error::NotMonic { what, lead: lead.re });
    }
    Ok(h.clone().normalized())
}

/// `alpha = 1 + i k`, the parametrization used for perturbation problems.
pub fn alpha_from_k(k: f64) -> Result<Complex64> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidParameter {
            name: "k",
            value: k,
            reason: "must be positive",
        });
    }
    Ok(c(1.0, k))
}

/// Result of [`classical_split`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalSplit {
    pub p: RealPoly,
    /// `None` when `h` is real (`l = 0`).
    pub q: Option<RealPoly>,
    pub l: f64,
}

impl ClassicalSplit {
    pub fn is_hermitian(&self) -> bool {
        self.q.is_none()
    }
}

/// `h = p - i l q`.
pub fn classical_combine(p: &RealPoly, q: &RealPoly, l: f64) -> Result<ComplexPoly> {
    require_monic(p, "p")?;
    require_monic(q, "q")?;
    if p.degree() == 0 || q.degree() >= p.degree() {
        return Err(Error::Degree {
            op: "classical_combine",
            found: q.degree(),
            expected: "deg q <= deg p - 1",
        });
    }
    if !l.is_finite() {
        return Err(Error::NonFinite("l"));
    }
    Ok(&p.to_complex() - &(&q.to_complex() * c(0.0, l)))
}

/// Unique representation `h = p - i l q` with `p, q` monic real.
pub fn classical_split(h: &ComplexPoly) -> Result<ClassicalSplit> {
    let h = monic_input(h, "h")?;
    if h.degree() == 0 {
        return Err(Error::Degree {
            op: "classical_split",
            found: 0,
            expected: ">= 1",
        });
    }
    let p = h.real_part();
    let im = h.imag_part();
    if im.is_zero() {
        return Ok(ClassicalSplit { p, q: None, l: 0.0 });
    }
    let lead = im.leading();
    let q = RealPoly::monic(im.coeffs().to_vec())?;
    Ok(ClassicalSplit {
        p,
        q: Some(q),
        l: -lead,
    })
}

/// Outcome of checking the classical criterion on a pair `(p, q, l)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HbDiagnostics {
    /// `l > 0` and the zeros of `p`, `q` are real, simple and strictly
    /// interlacing.
    pub holds: bool,
    pub reason: Option<String>,
    /// Every zero of `p - i l q` lies in the open upper half-plane.
    pub roots_in_upper: bool,
    /// The two checks agree.
    pub consistent: bool,
    pub combined_zeros: ZeroSet,
}

pub fn hb_verify(p: &RealPoly, q: &RealPoly, l: f64) -> Result<HbDiagnostics> {
    if q.degree() + 1 != p.degree() {
        return Err(Error::Degree {
            op: "hb_verify",
            found: q.degree(),
            expected: "deg q = deg p - 1",
        });
    }
    let h = classical_combine(p, q, l)?;
    let combined_zeros = h.roots()?;
    let roots_in_upper = combined_zeros.n_plus() == combined_zeros.len();

    let reason = if !(l > 0.0) {
        Some(format!("l = {l} is not positive"))
    } else {
        match (p.real_roots(), q.real_roots()) {
            (Err(_), _) => Some("p has non-real zeros".to_string()),
            (_, Err(_)) => Some("q has non-real zeros".to_string()),
            (Ok(lams), Ok(mus)) => {
                if is_strictly_interlacing(&lams, &mus)? {
                    None
                } else {
                    Some(format!("zeros {lams:?} and {mus:?} do not strictly interlace"))
                }
            }
        }
    };
    let holds = reason.is_none();
    Ok(HbDiagnostics {
        holds,
        reason,
        roots_in_upper,
        consistent: holds == roots_in_upper,
        combined_zeros,
    })
}

/// `h = alpha p + (1 - alpha) r` for real `p, r` of equal degree.
pub fn pencil_combine(p: &RealPoly, r: &RealPoly, alpha: Complex64) -> Result<ComplexPoly> {
    require_monic(p, "p")?;
    require_monic(r, "r")?;
    if p.degree() != r.degree() {
        return Err(Error::Degree {
            op: "pencil_combine",
            found: r.degree(),
            expected: "deg r = deg p",
        });
    }
    let h = &(&p.to_complex() * alpha) + &(&r.to_complex() * (c(1.0, 0.0) - alpha));
    Ok(h.normalized())
}

/// `h = alpha p + (1 - alpha) (z - xi) q`.
pub fn generalized_combine(p: &RealPoly, q: &RealPoly, alpha: Complex64, xi: f64) -> Result<ComplexPoly> {
    if !(alpha.im > 0.0) {
        return Err(Error::AlphaNotUpper(alpha));
    }
    require_monic(p, "p")?;
    require_monic(q, "q")?;
    if p.degree() == 0 || q.degree() + 1 != p.degree() {
        return Err(Error::Degree {
            op: "generalized_combine",
            found: q.degree(),
            expected: "deg q = deg p - 1",
        });
    }
    if p.eval_real(xi).abs() <= 1e-14 * p.eval_bound(xi.abs()) {
        return Err(Error::VanishesAtShift(xi));
    }
    pencil_combine(p, &q.mul_linear(xi), alpha)
}

/// Result of [`pencil_split`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PencilSplit {
    pub p: RealPoly,
    pub r: RealPoly,
    pub alpha: Complex64,
}

/// Solves `h_j = alpha p_j + (1 - alpha) r_j` for real `p_j, r_j` at every
/// coefficient index.
pub fn pencil_split(h: &ComplexPoly, alpha: Complex64) -> Result<PencilSplit> {
    if alpha.im == 0.0 || !alpha.is_finite() {
        return Err(Error::AlphaReal(alpha));
    }
    let h = monic_input(h, "h")?;
    let n = h.degree();
    let mut p = Vec::with_capacity(n + 1);
    let mut r = Vec::with_capacity(n + 1);
    for hj in h.coeffs() {
        // second row: Im(alpha) (p_j - r_j) = Im h_j
        let diff = hj.im / alpha.im;
        let pj = hj.re + (1.0 - alpha.re) * diff;
        p.push(pj);
        r.push(pj - diff);
    }
    p[n] = 1.0;
    r[n] = 1.0;
    Ok(PencilSplit {
        p: RealPoly::new(p)?,
        r: RealPoly::new(r)?,
        alpha,
    })
}

/// Which real constituent of `h` to evaluate.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Part {
    /// `p` in `h = p - i l q`.
    ClassicalP,
    /// `q` in `h = p - i l q`.
    ClassicalQ(f64),
    /// `p` in `h = alpha p + (1 - alpha) r`.
    PencilP(Complex64),
    /// `r` in `h = alpha p + (1 - alpha) r`.
    PencilR(Complex64),
}

/// Evaluates a real constituent of `h = prod (z - z_j)` from the zeros.
pub(crate) struct PartEvaluator<'a> {
    pub zeros: &'a [Complex64],
    pub part: Part,
}

fn product_with_derivative(zeros: &[Complex64], z: Complex64, conj: bool) -> (Complex64, Complex64) {
    let mut v = c(1.0, 0.0);
    let mut d = c(0.0, 0.0);
    for zj in zeros {
        let f = if conj { z - zj.conj() } else { z - zj };
        d = d * f + v;
        v *= f;
    }
    (v, d)
}

impl Part {
    /// The constituent from `h` and `h*` (conjugated zeros) with derivatives.
    fn combine(self, (h, dh): (Complex64, Complex64), (hs, dhs): (Complex64, Complex64)) -> (Complex64, Complex64) {
        match self {
            Part::ClassicalP => ((h + hs) * 0.5, (dh + dhs) * 0.5),
            Part::ClassicalQ(l) => {
                let s = c(0.0, 2.0 * l).inv();
                ((hs - h) * s, (dhs - dh) * s)
            }
            Part::PencilP(a) => {
                let s = (a - a.conj()).inv();
                let (wa, wb) = (c(1.0, 0.0) - a.conj(), c(1.0, 0.0) - a);
                ((wa * h - wb * hs) * s, (wa * dh - wb * dhs) * s)
            }
            Part::PencilR(a) => {
                let s = (a - a.conj()).inv();
                ((a * hs - a.conj() * h) * s, (a * dhs - a.conj() * dh) * s)
            }
        }
    }
}

impl Evaluate for PartEvaluator<'_> {
    fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        self.part.combine(
            product_with_derivative(self.zeros, z, false),
            product_with_derivative(self.zeros, z, true),
        )
    }
}

/// Zeros of a real-rooted constituent: coefficient-form roots refined
/// against the product-form evaluator.
pub(crate) fn constituent_roots(poly: &RealPoly, zeros: &[Complex64], part: Part) -> Result<Vec<f64>> {
    if poly.degree() == 0 {
        return Ok(Vec::new());
    }
    let start = roots::poly_roots(&poly.to_complex())?;
    let eval = PartEvaluator { zeros, part };
    real_parts_checked(&roots::refine(&eval, start))
}

/// A real zero of a constituent held as `anchor + offset`, where the anchor
/// is the real part of the nearest zero of `h` (or a supplied point).
///
/// When the constituents of `h` have zeros much closer together than their
/// size, both sit next to the same zero of `h`, and their offsets from it
/// keep the digits that the rounded values lose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Anchored {
    pub anchor: f64,
    pub offset: f64,
}

impl Anchored {
    pub fn exact(x: f64) -> Self {
        Self { anchor: x, offset: 0.0 }
    }

    pub fn value(self) -> f64 {
        self.anchor + self.offset
    }

    /// `self - other` without cancelling the anchors when they coincide.
    pub fn minus(self, other: Anchored) -> f64 {
        (self.anchor - other.anchor) + (self.offset - other.offset)
    }
}

/// Re-solves each of `roots` in coordinates centred on its anchor, where the
/// factor of the anchoring zero is exactly `offset - i Im z_k`.
pub(crate) fn anchored_roots(roots: &[f64], zeros: &[Complex64], extra: &[f64], part: Part) -> Vec<Anchored> {
    let candidates = zeros.iter().copied().chain(extra.iter().map(|&x| c(x, 0.0)));
    roots
        .iter()
        .map(|&x| {
            let anchor = candidates
                .clone()
                .min_by(|a, b| (a - x).norm().total_cmp(&(b - x).norm()))
                .map_or(x, |z| z.re);
            let shifts: Vec<f64> = zeros.iter().map(|z| anchor - z.re).collect();
            let eval = |d: f64| {
                let product = |conj: bool| {
                    let mut v = c(1.0, 0.0);
                    let mut dv = c(0.0, 0.0);
                    for (s, z) in shifts.iter().zip(zeros) {
                        let f = c(s + d, if conj { z.im } else { -z.im });
                        dv = dv * f + v;
                        v *= f;
                    }
                    (v, dv)
                };
                let (v, dv) = part.combine(product(false), product(true));
                (v.re, dv.re)
            };
            let mut d = x - anchor;
            let (mut v, mut dv) = eval(d);
            for _ in 0..8 {
                if v == 0.0 || dv == 0.0 {
                    break;
                }
                let cand = d - v / dv;
                let (cv, cdv) = eval(cand);
                if !(cv.abs() < v.abs()) {
                    break;
                }
                d = cand;
                v = cv;
                dv = cdv;
            }
            Anchored { anchor, offset: d }
        })
        .collect()
}

/// [`crate::jacobi::spectral_weights`] with differences taken between
/// anchored values.
pub(crate) fn anchored_weights(lams: &[Anchored], mus: &[Anchored]) -> Vec<f64> {
    lams.iter()
        .enumerate()
        .map(|(j, &lam)| {
            lams.iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .zip(mus)
                .map(|((_, &li), &mu)| lam.minus(mu) / lam.minus(li))
                .product()
        })
        .collect()
}

/// Position of `xi` in the pattern
/// `l_1 < m_1 < ... < l_s < m_s < xi < m_{s+1} < l_{s+1} < ... < m_n < l_n`.
///
/// Returns `Some(s)` when `lams` and `mus` (both of length `n`) follow it.
pub fn interlacing_around(lams: &[f64], mus: &[f64], xi: f64) -> Result<Option<usize>> {
    if lams.len() != mus.len() {
        return Err(Error::LengthMismatch {
            what: "interlacing_around: lams and mus",
            expected: lams.len(),
            found: mus.len(),
        });
    }
    let mut merged = lams.to_vec();
    merged.push(xi);
    merged.sort_by(f64::total_cmp);
    if !is_strictly_interlacing(&merged, mus)? {
        return Ok(None);
    }
    Ok(Some(lams.iter().filter(|&&l| l < xi).count()))
}

/// The second constituent returned by [`generalized_split`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum SplitBranch {
    /// Sum of arguments equals `Arg alpha`: `h = alpha p + (1 - alpha)(z - xi) q`.
    AtShift { q: RealPoly },
    /// Sum of arguments below `Arg alpha`: `h = alpha p + (1 - alpha) r`.
    AroundShift { r: RealPoly },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralizedSplit {
    pub p: RealPoly,
    pub branch: SplitBranch,
    /// Sorted zeros of `p`.
    pub lams: Vec<f64>,
    /// Sorted zeros of `q` (at-shift) or `r` (around-shift).
    pub mus: Vec<f64>,
    /// Number of zeros of `p` below `xi`.
    pub s: usize,
    pub report: ConfigReport,
    /// Numerical breakdowns of properties the theorems guarantee.
    pub warnings: Vec<String>,
}

impl GeneralizedSplit {
    pub fn is_clean(&self) -> bool {
        self.warnings.is_empty()
    }
}

/// Inverse of [`generalized_combine`] (or of [`pencil_combine`] when the
/// interlacing is broken around rather than at `xi`).
pub fn generalized_split(h: &ComplexPoly, alpha: Complex64, xi: f64) -> Result<GeneralizedSplit> {
    let h = monic_input(h, "h")?;
    let zeros = h.roots()?;
    split_with_zeros(&h, &zeros, alpha, xi, false)
}

/// [`generalized_split`] for `h = prod (z - z_j)` given by its zeros.
pub fn generalized_split_zeros(zeros: &ZeroSet, alpha: Complex64, xi: f64) -> Result<GeneralizedSplit> {
    split_with_zeros(&zeros.to_poly(), zeros, alpha, xi, false)
}

/// [`generalized_split_zeros`] for callers that know the argument sum is
/// strictly below `Arg alpha`, so that a sum within tolerance of `Arg alpha`
/// still takes the around-shift branch.
pub(crate) fn around_shift_split(zeros: &ZeroSet, alpha: Complex64, xi: f64) -> Result<GeneralizedSplit> {
    split_with_zeros(&zeros.to_poly(), zeros, alpha, xi, true)
}

/// `l_1 < m_1 < l_2 < ... < m_{n-1} < l_n` with no tolerance.
pub(crate) fn strictly_ordered(lams: &[f64], mus: &[f64]) -> bool {
    mus.len() + 1 == lams.len() && mus.iter().enumerate().all(|(j, &mu)| lams[j] < mu && mu < lams[j + 1])
}

fn split_with_zeros(
    h: &ComplexPoly,
    zeros: &ZeroSet,
    alpha: Complex64,
    xi: f64,
    force_around: bool,
) -> Result<GeneralizedSplit> {
    if zeros.is_empty() {
        return Err(Error::Degree {
            op: "generalized_split",
            found: 0,
            expected: ">= 1",
        });
    }
    let report = classify_config(zeros, alpha, xi)?;
    match report.verdict {
        Verdict::HasRealZero => {
            let z = zeros.shifted(xi).real_zero().map(|z| z + xi).unwrap_or_default();
            return Err(Error::RealZero(z));
        }
        Verdict::Neither => {
            return Err(Error::OutsideTheorems {
                arg_sum: report.arg_sum,
                arg_alpha: report.arg_alpha,
            })
        }
        Verdict::Equal | Verdict::Less => {}
    }

    let PencilSplit { p, r, .. } = pencil_split(h, alpha)?;
    let n = p.degree();
    let z = zeros.zeros();
    let mut warnings = Vec::new();
    let lams = constituent_roots(&p, z, Part::PencilP(alpha))?;
    let mut r_zeros = constituent_roots(&r, z, Part::PencilR(alpha))?;

    let (branch, mus, s) = if report.verdict == Verdict::Equal && !force_around {
        let residual = r.eval_real(xi).abs();
        let tol = shift_residual_tol(h, alpha, xi);
        if residual > tol {
            return Err(Error::ShiftResidual { residual, tol });
        }
        let (q, _) = r.divide_linear(xi);
        let nearest = r_zeros
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - xi).abs().total_cmp(&(b.1 - xi).abs()))
            .map(|(i, _)| i)
            .expect("r has degree n >= 1");
        r_zeros.remove(nearest);
        if !strictly_ordered(&lams, &r_zeros) {
            warnings.push(format!("zeros of p {lams:?} and q {r_zeros:?} do not strictly interlace"));
        }
        let s = lams.iter().filter(|&&l| l < xi).count();
        (SplitBranch::AtShift { q }, r_zeros, s)
    } else {
        let s = lams.iter().filter(|&&l| l < xi).count();
        let mut merged = lams.clone();
        merged.insert(s, xi);
        if !strictly_ordered(&merged, &r_zeros) {
            warnings.push(format!(
                "zeros of p {lams:?} and r {r_zeros:?} do not interlace around {xi}"
            ));
        }
        (SplitBranch::AroundShift { r }, r_zeros, s)
    };

    if report.n_plus != n - s {
        warnings.push(format!(
            "{} zeros in the upper half-plane but {} zeros of p above {xi}",
            report.n_plus,
            n - s
        ));
    }
    Ok(GeneralizedSplit {
        p,
        branch,
        lams,
        mus,
        s,
        report,
        warnings,
    })
}

/// Tolerance on `r(xi)`: `1e-8 (1 + |xi|)^n`, scaled by the size of `h`
/// around `xi` relative to `Im alpha`, which is the rounding scale of the
/// split coefficients.
fn shift_residual_tol(h: &ComplexPoly, alpha: Complex64, xi: f64) -> f64 {
    let n = h.degree() as i32;
    let scale = h
        .coeffs()
        .iter()
        .rev()
        .fold(0.0, |acc, hk| acc * xi.abs() + hk.norm());
    SHIFT_RESIDUAL_TOL * (1.0 + xi.abs()).powi(n) * scale.max(1.0) / alpha.im.abs().min(1.0)
}
