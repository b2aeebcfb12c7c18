//! Phase of a polynomial along the real line and the zero-configuration
//! classifiers built on it.
//!
//! For `h(z) = prod (z - z_j)` with no real zeros the phase
//! `phi_h(t) = sum Arg(t - z_j)` is a continuous branch of `arg h(t)` with
//! `phi_h(+inf) = 0`, and its total increment over the real line is
//! `pi (n_+ - n_-)`.
//!
//! The numeric trace runs over the compactified parameter `t = c tan(theta)`,
//! `theta` in `[-pi/2, pi/2]`. The function
//! `g(theta) = prod (sin theta - z_j cos theta) = cos^n(theta) h(t)` has the
//! same argument as `h(t)` and is finite at both ends, so the increment over
//! the whole line is read off a closed interval without truncating tails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{is_real, ZeroSet};

/// Per-zero tolerance on argument sums (scaled by the number of zeros).
pub const ARG_SUM_TOL: f64 = 1e-8;
/// Allowed disagreement between symbolic and traced increments.
pub const INCREMENT_TOL: f64 = 1e-6;
const TRACE_INITIAL_POINTS: usize = 256;
const TRACE_MAX_POINTS: usize = 1 << 20;

/// `Arg z` reduced modulo `pi` into `[0, pi)`.
pub fn arg_mod_pi(z: Complex64) -> Result<f64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::ZeroArgument);
    }
    if z.im > 0.0 {
        Ok(z.arg())
    } else if z.im == 0.0 {
        Ok(0.0)
    } else {
        Ok(PI + z.arg())
    }
}

fn require_no_real(zeros: &ZeroSet) -> Result<()> {
    match zeros.real_zero() {
        Some(z) => Err(Error::RealZero(z)),
        None => Ok(()),
    }
}

/// `phi_h(t) = sum_j Arg(t - z_j)` with principal arguments.
pub fn phase(zeros: &ZeroSet, t: f64) -> Result<f64> {
    require_no_real(zeros)?;
    Ok(zeros.zeros().iter().map(|z| (t - z).arg()).sum())
}

/// `sum_j Arg_[0,pi) z_j`.
pub fn arg_sum(zeros: &ZeroSet) -> Result<f64> {
    require_no_real(zeros)?;
    zeros.zeros().iter().map(|&z| arg_mod_pi(z)).sum()
}

/// One point of a phase trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseSample {
    pub t: f64,
    /// `h(t)`.
    pub value: Complex64,
    /// Traced phase, anchored so that it tends to 0 as `t -> +inf`.
    pub phi: f64,
}

/// Adaptive trace of the hodograph `t -> h(t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseTrace {
    /// Samples at finite `t`, increasing.
    pub samples: Vec<PhaseSample>,
    /// Scale `c` of the parametrization `t = c tan(theta)`.
    pub scale: f64,
    /// Traced increment of the phase over the whole real line.
    pub increment: f64,
}

struct Node {
    theta: f64,
    factor_args: Vec<f64>,
    total_arg: f64,
}

fn wrap(d: f64) -> f64 {
    let mut d = d % (2.0 * PI);
    if d > PI {
        d -= 2.0 * PI;
    } else if d < -PI {
        d += 2.0 * PI;
    }
    d
}

/// Factors `c sin(theta) - z_j cos(theta) = cos(theta) (t - z_j)`.
fn node(zeros: &[Complex64], scale: f64, theta: f64) -> Node {
    let (s, c) = theta.sin_cos();
    let s = scale * s;
    let mut g = Complex64::new(1.0, 0.0);
    let factor_args = zeros
        .iter()
        .map(|z| {
            let f = s - z * c;
            g *= f / f.norm();
            f.arg()
        })
        .collect();
    Node {
        theta,
        factor_args,
        total_arg: g.arg(),
    }
}

/// Upper bound on the phase change between two nodes: each factor's argument
/// moves monotonically through less than `pi`, so its wrapped difference is
/// exact.
fn step_bound(a: &Node, b: &Node) -> f64 {
    a.factor_args
        .iter()
        .zip(&b.factor_args)
        .map(|(x, y)| wrap(y - x).abs())
        .sum()
}

/// Traces the phase with bisection wherever the step bound exceeds `pi/4`.
pub fn trace(zeros: &ZeroSet) -> Result<PhaseTrace> {
    require_no_real(zeros)?;
    let z = zeros.zeros();
    let scale = 2.0 * (1.0 + zeros.max_modulus());

    let coarse: Vec<f64> = (0..TRACE_INITIAL_POINTS)
        .map(|k| -FRAC_PI_2 + PI * k as f64 / (TRACE_INITIAL_POINTS - 1) as f64)
        .collect();
    let mut thetas = vec![coarse[0]];
    let mut args = vec![0.0];
    let mut cur = node(z, scale, coarse[0]);
    args[0] = cur.total_arg;
    for &next_theta in &coarse[1..] {
        let mut stack = vec![node(z, scale, next_theta)];
        while let Some(top) = stack.last() {
            if step_bound(&cur, top) > FRAC_PI_4 {
                let mid = 0.5 * (cur.theta + top.theta);
                if mid <= cur.theta || mid >= top.theta {
                    return Err(Error::TraceLimit(thetas.len()));
                }
                let m = node(z, scale, mid);
                stack.push(m);
            } else {
                let top = stack.pop().unwrap();
                thetas.push(top.theta);
                args.push(top.total_arg);
                cur = top;
                if thetas.len() > TRACE_MAX_POINTS {
                    return Err(Error::TraceLimit(TRACE_MAX_POINTS));
                }
            }
        }
    }

    let mut phis = Vec::with_capacity(args.len());
    let mut acc = 0.0;
    phis.push(acc);
    for w in args.windows(2) {
        acc += wrap(w[1] - w[0]);
        phis.push(acc);
    }
    let anchor = *phis.last().unwrap();
    let increment = anchor - phis[0];

    let last = thetas.len() - 1;
    let samples = thetas
        .iter()
        .zip(&phis)
        .enumerate()
        .filter(|(i, _)| *i != 0 && *i != last)
        .map(|(_, (&theta, &phi))| {
            let t = scale * theta.tan();
            let value = z.iter().fold(Complex64::new(1.0, 0.0), |acc, zj| acc * (t - zj));
            PhaseSample {
                t,
                value,
                phi: phi - anchor,
            }
        })
        .collect();
    Ok(PhaseTrace {
        samples,
        scale,
        increment,
    })
}

/// Symbolic `pi (n_+ - n_-)` and traced value of the phase increment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseIncrement {
    pub symbolic: f64,
    pub numeric: f64,
}

pub fn phase_increment(zeros: &ZeroSet) -> Result<PhaseIncrement> {
    require_no_real(zeros)?;
    let symbolic = PI * (zeros.n_plus() as f64 - zeros.n_minus() as f64);
    let numeric = trace(zeros)?.increment;
    if (symbolic - numeric).abs() > INCREMENT_TOL {
        return Err(Error::IncrementMismatch { symbolic, numeric });
    }
    Ok(PhaseIncrement { symbolic, numeric })
}

/// Outcome of comparing `sum Arg_[0,pi)(z_j - xi)` with `Arg alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Sum equals `Arg alpha`: interlacing broken at `xi`.
    Equal,
    /// Sum strictly below `Arg alpha`: interlacing broken around `xi`.
    Less,
    /// Sum strictly above `Arg alpha`.
    Neither,
    /// Some `z_j - xi` is real.
    HasRealZero,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigReport {
    pub arg_sum: f64,
    pub arg_alpha: f64,
    /// `Arg_[0,pi)(1 - alpha)`.
    pub a1: f64,
    /// `Arg_[0,pi)(alpha)`.
    pub a2: f64,
    pub n_plus: usize,
    pub n_minus: usize,
    /// Number of zeros in the lower half-plane.
    pub s: usize,
    pub xi: f64,
    pub verdict: Verdict,
}

/// Classifies a zero set against `alpha` (with `Im alpha > 0`) and the
/// break point `xi`.
pub fn classify_config(zeros: &ZeroSet, alpha: Complex64, xi: f64) -> Result<ConfigReport> {
    if !(alpha.im > 0.0) {
        return Err(Error::AlphaNotUpper(alpha));
    }
    let shifted = zeros.shifted(xi);
    let arg_sum: f64 = shifted
        .zeros()
        .iter()
        .map(|&z| if is_real(z) { Ok(0.0) } else { arg_mod_pi(z) })
        .sum::<Result<f64>>()?;
    let arg_alpha = alpha.arg();
    let tol = ARG_SUM_TOL * zeros.len().max(1) as f64;
    let verdict = if shifted.n_real() > 0 {
        Verdict::HasRealZero
    } else if (arg_sum - arg_alpha).abs() <= tol {
        Verdict::Equal
    } else if arg_sum < arg_alpha {
        Verdict::Less
    } else {
        Verdict::Neither
    };
    Ok(ConfigReport {
        arg_sum,
        arg_alpha,
        a1: arg_mod_pi(Complex64::new(1.0, 0.0) - alpha)?,
        a2: arg_mod_pi(alpha)?,
        n_plus: shifted.n_plus(),
        n_minus: shifted.n_minus(),
        s: shifted.n_minus(),
        xi,
        verdict,
    })
}

/// Sign localization for zero sets in the open upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Localization {
    /// Number of negative zeros of the real part.
    pub s: usize,
    /// The real part vanishes at the origin.
    pub at_boundary: bool,
    /// `sum Arg z_j`.
    pub arg_sum: f64,
}

pub fn localization(zeros: &ZeroSet) -> Result<Localization> {
    if let Some(z) = zeros.zeros().iter().find(|z| is_real(**z) || z.im < 0.0) {
        return Err(Error::NotUpperHalfPlane(*z));
    }
    let arg_sum: f64 = zeros.zeros().iter().map(|z| z.arg()).sum();
    let tol = ARG_SUM_TOL * zeros.len().max(1) as f64;
    let x = (arg_sum - FRAC_PI_2) / PI;
    let k = x.round();
    if (arg_sum - (FRAC_PI_2 + PI * k)).abs() <= tol {
        return Ok(Localization {
            s: k.max(0.0) as usize,
            at_boundary: true,
            arg_sum,
        });
    }
    Ok(Localization {
        s: x.ceil().max(0.0) as usize,
        at_boundary: false,
        arg_sum,
    })
}
