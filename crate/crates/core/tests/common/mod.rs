//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use hermite_biehler::jacobi::JacobiMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on `(0, hi]`.
pub fn positive(rng: &mut impl Rng, hi: f64) -> f64 {
    hi * (1.0 - rng.random::<f64>())
}

pub fn random_jacobi(rng: &mut impl Rng, n: usize, b_half_width: f64, a_max: f64) -> JacobiMatrix {
    let b = (0..n).map(|_| rng.random_range(-b_half_width..=b_half_width)).collect();
    let a = (0..n - 1).map(|_| positive(rng, a_max)).collect();
    JacobiMatrix::new(b, a).unwrap()
}

/// `2n - 1` increasing points with consecutive gaps in `[sep, sep + 1)`,
/// split alternately into `lams` (n) and `mus` (n - 1), and translated so
/// that exactly `s` of the `lams` are negative and none is near 0.
pub fn random_interlacing(rng: &mut impl Rng, n: usize, sep: f64, s: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(s <= n);
    let mut pts = vec![0.0];
    for _ in 1..2 * n - 1 {
        let last = *pts.last().unwrap();
        pts.push(last + sep + rng.random::<f64>());
    }
    // put 0 strictly inside (lam_{s-1}, lam_s), away from the endpoints
    let shift = if s == 0 {
        -(pts[0] - sep * rng.random_range(0.2..0.8))
    } else if s == n {
        -(pts[2 * n - 2] + sep * rng.random_range(0.2..0.8))
    } else {
        let (lo, hi) = (pts[2 * s - 2], pts[2 * s]);
        -(lo + (hi - lo) * rng.random_range(0.2..0.8))
    };
    let pts: Vec<f64> = pts.iter().map(|x| x + shift).collect();
    let lams = pts.iter().step_by(2).copied().collect();
    let mus = pts.iter().skip(1).step_by(2).copied().collect();
    (lams, mus)
}

/// Random zero set with `|Im z| >= min_im`.
pub fn random_zeros(rng: &mut impl Rng, n: usize, min_im: f64) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let im = rng.random_range(min_im..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            c(rng.random_range(-3.0..3.0), im)
        })
        .collect()
}

/// Coefficients (constant first) of `det(z I - m)` by cofactor expansion
/// along rows, memoized over the set of remaining columns.
pub fn char_poly_by_expansion(m: &[Vec<Complex64>]) -> Vec<Complex64> {
    let n = m.len();
    assert!(n <= 12);
    let mut memo: Vec<Option<Vec<Complex64>>> = vec![None; 1 << n];
    fn poly_mul_entry(p: &[Complex64], diag: bool, entry: Complex64) -> Vec<Complex64> {
        // (delta z - entry) * p
        let mut out = vec![Complex64::new(0.0, 0.0); p.len() + 1];
        for (k, &pk) in p.iter().enumerate() {
            out[k] -= entry * pk;
            if diag {
                out[k + 1] += pk;
            }
        }
        out
    }
    fn minor(
        m: &[Vec<Complex64>],
        row: usize,
        mask: usize,
        memo: &mut Vec<Option<Vec<Complex64>>>,
    ) -> Vec<Complex64> {
        let n = m.len();
        if row == n {
            return vec![Complex64::new(1.0, 0.0)];
        }
        if let Some(p) = &memo[mask] {
            return p.clone();
        }
        let mut total = vec![Complex64::new(0.0, 0.0); n - row + 1];
        let mut sign = 1.0;
        for col in 0..n {
            if mask & (1 << col) != 0 {
                continue;
            }
            let sub = minor(m, row + 1, mask | (1 << col), memo);
            let term = poly_mul_entry(&sub, row == col, m[row][col]);
            for (t, x) in total.iter_mut().zip(&term) {
                *t += sign * x;
            }
            sign = -sign;
        }
        memo[mask] = Some(total.clone());
        total
    }
    minor(m, 0, 0, &mut memo)
}

/// Eigenvalues of a dense complex matrix via nalgebra's Schur form.
pub fn dense_eigenvalues(m: &[Vec<Complex64>]) -> Vec<Complex64> {
    let n = m.len();
    let mat = DMatrix::from_fn(n, n, |i, j| m[i][j]);
    mat.schur().eigenvalues().expect("Schur form of a complex matrix").iter().copied().collect()
}

/// Eigenvalues of a real symmetric matrix via nalgebra.
pub fn symmetric_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mat = DMatrix::from_fn(n, n, |i, j| m[i][j]);
    let mut e: Vec<f64> = mat.symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}
